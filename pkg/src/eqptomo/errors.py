"""Exception types raised by the reconstruction pipeline."""


class ReconstructionError(Exception):
    """Base class for all pipeline failures."""


class NonFiniteInput(ReconstructionError, ValueError):
    pass


class InsufficientCounts(ReconstructionError, ValueError):
    def __init__(self, k, l, normalizer):
        self.k, self.l, self.normalizer = k, l, normalizer
        super().__init__(
            f"normalizer for correlation ({k},{l}) is {normalizer:g}; need >= 2 counts"
        )


class NoRealRoot(ReconstructionError):
    pass


class NoValidBoost(ReconstructionError):
    pass


class DegenerateState(ReconstructionError):
    pass


class NotConverged(ReconstructionError):
    pass


class SingularTransformation(ReconstructionError):
    pass


class UnphysicalState(ReconstructionError, ValueError):
    pass


class TooManyFailures(ReconstructionError):
    """More than the tolerated fraction of Monte Carlo samples failed.

    The partially filled report is kept on ``self.report``.
    """

    def __init__(self, report, message):
        self.report = report
        super().__init__(message)


class CountsFormatError(ValueError):
    pass
