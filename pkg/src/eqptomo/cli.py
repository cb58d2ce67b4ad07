"""Command-line interface: ``eqptomo reconstruct | simulate | verify-paper``."""

import argparse
import csv
import datetime
import hashlib
import itertools
import json
import logging
import sys

import numpy as np

from . import __version__, published
from .counts import read_counts, write_counts
from .errors import CountsFormatError, NonFiniteInput, ReconstructionError
from .montecarlo import ALIGN_MODES, DEFAULT_SAMPLES, MonteCarloConfig, default_workers
from .pauli import SINGLET
from .synthgen import PRESETS, SimulationConfig, preset_state, sample_counts

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PIPELINE = 4
EXIT_MC_FAILURES = 5

log = logging.getLogger("eqptomo")


def _load_target(spec):
    if spec == "singlet":
        return SINGLET
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
        vec = np.array(data["real"], dtype=float) + 1j * np.array(data.get("imag", [0] * 4), dtype=float)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise CountsFormatError(f"cannot read target state from {spec!r}: {exc}") from None
    if vec.shape != (4,):
        raise CountsFormatError("target state must have 4 amplitudes")
    return vec / np.linalg.norm(vec)


def _weights_csv(path, d):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alice", "bob", "weight", "error", "a_x", "a_y", "a_z", "b_x", "b_y", "b_z"])
        errors = d.errors if d.errors is not None else [float("nan")] * len(d.weights)
        for (la, lb), p, e, a, b in zip(d.labels, d.weights, errors, d.bloch_a, d.bloch_b):
            w.writerow([la, lb, repr(float(p)), repr(float(e)), *map(repr, map(float, a)), *map(repr, map(float, b))])


def cmd_reconstruct(args):
    from .pipeline import reconstruct_counts, report_dict

    try:
        E = read_counts(args.counts)
        target = _load_target(args.target)
    except OSError as exc:
        print(f"error: cannot read {args.counts}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CountsFormatError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE

    mc = None
    if args.mc_samples > 0:
        mc = MonteCarloConfig(
            samples=args.mc_samples,
            seed=args.seed,
            workers=args.workers,
            align="none" if args.no_align else args.align,
        )
    try:
        rec = reconstruct_counts(E, mc=mc, target=target, threshold=args.significance_threshold)
    except (NonFiniteInput, ReconstructionError) as exc:
        print(f"error: pipeline ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_PIPELINE

    with open(args.counts, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    provenance = {"counts_file": str(args.counts), "sha256": digest, "version": __version__}
    if not args.reproducible:
        provenance["created"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    config = {
        "mc_samples": args.mc_samples,
        "seed": args.seed,
        "align": mc.align if mc else None,
        "target": args.target,
        "significance_threshold": args.significance_threshold,
    }
    report = report_dict(rec, counts=E, provenance=provenance, config=config)
    text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.weights_csv:
        _weights_csv(args.weights_csv, rec.decomposition)
    if args.plot:
        from .plotting import plot_eqp

        plot_eqp(rec.decomposition, args.plot, title=f"verdict: {rec.verdict}")

    s = rec.summary
    sig = "n/a" if np.isnan(s.significance) else f"{s.significance:.1f} sigma"
    print(
        f"verdict: {rec.verdict} (min weight {s.min_weight:.4f}, significance {sig}, "
        f"PT min eigenvalue {rec.diagnostics.pt_negativity:.4f})",
        file=sys.stderr,
    )
    if rec.diagnostics.disagreement:
        print("WARNING: EQP and partial-transpose verdicts disagree", file=sys.stderr)
    if rec.mc_failed:
        print("error: too many Monte Carlo samples failed; report written", file=sys.stderr)
        return EXIT_MC_FAILURES
    return EXIT_OK


def cmd_simulate(args):
    if args.preset not in PRESETS:
        print(f"error: unknown preset {args.preset!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.preset == "werner" and args.p is None:
        print("error: --preset werner needs --p", file=sys.stderr)
        return EXIT_USAGE
    cfg = SimulationConfig(
        preset_state(args.preset, args.p),
        pairs_per_setting=args.pairs_per_setting,
        seed=args.seed,
        noise_free=args.noise_free,
        efficiency=args.efficiency,
    )
    E = sample_counts(cfg)
    if args.out:
        write_counts(args.out, E)
    else:
        from .counts import format_counts_csv

        sys.stdout.write(format_counts_csv(E))
    return EXIT_OK


def verify_paper():
    """Check the deterministic pipeline on the published density matrix.

    Returns a list of ``(name, value, expected, tolerance, passed)``.
    """
    from .diagnostics import eigenvalues, fidelity_with_target, pt_min_eigenvalue, purity
    from .eqp import decompose, reassemble_state
    from .pauli import correlations_from_density

    rho = published.SAMPLED_RHO
    _, d = decompose(correlations_from_density(rho))
    checks = [
        ("purity", purity(rho), published.PURITY, 0.002),
        ("fidelity", fidelity_with_target(rho), published.FIDELITY, 0.002),
        ("pt_negativity", pt_min_eigenvalue(rho), published.PT_NEGATIVITY, 0.002),
    ]
    for i, (got, want) in enumerate(zip(eigenvalues(rho), published.EIGENVALUES)):
        checks.append((f"eigenvalue_{i}", got, want, 0.005))
    dev = float(np.abs(reassemble_state(d) - rho).max())
    checks.append(("reassembly", dev, 0.0, 2e-3))
    return [(n, float(v), w, t, abs(v - w) <= t) for n, v, w, t in checks]


def coefficient_overlaps():
    """Soft comparison of the product states with the published coefficient table.

    The table rows are normalized and matched to our six states per side
    under the signed coordinate permutation with the largest mean overlap
    (the table's axis labeling differs from ours). Returns, per side,
    ``(permutation, signs, overlaps)``.
    """
    from .eqp import decompose
    from .pauli import correlations_from_density
    from .pipeline import eigen_coefficients

    _, d = decompose(correlations_from_density(published.SAMPLED_RHO))
    out = {}
    for side, mine, table in zip(
        ("alice", "bob"), eigen_coefficients(d), (published.COEFFICIENTS_A, published.COEFFICIENTS_B)
    ):
        rows = table / np.linalg.norm(table, axis=1)[:, None]
        best = None
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((1, -1), repeat=3):
                ov = (rows @ (mine[:, list(perm)] * signs).T).max(axis=1)
                if best is None or ov.mean() > best[2].mean():
                    best = (perm, signs, ov)
        out[side] = best
    return out


def cmd_verify_paper(args):
    results = verify_paper()
    for name, value, want, tol, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<14} {value: .6f}  expected {want: .3f} +/- {tol:g}")
    for side, (perm, signs, ov) in coefficient_overlaps().items():
        axes = ",".join(("-" if sg < 0 else "") + "xyz"[k] for k, sg in zip(perm, signs))
        print(f"INFO  coefficient table, {side}: overlaps {np.round(ov, 3).tolist()} (our axes as {axes})")
    failed = sum(not r[-1] for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED_CHECKS


def build_parser():
    parser = argparse.ArgumentParser(prog="eqptomo", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("reconstruct", help="reconstruct the EQP from a counts file")
    rec.add_argument("--counts", required=True, help="6x6 coincidence counts (.csv or .json)")
    rec.add_argument("--out", help="JSON report path (default: stdout)")
    rec.add_argument("--plot", help="write an SVG bar chart of the EQP")
    rec.add_argument("--weights-csv", help="write the 12 weights with errors as CSV")
    rec.add_argument("--mc-samples", type=int, default=DEFAULT_SAMPLES,
                     help="Monte Carlo samples (0 disables error propagation)")
    rec.add_argument("--seed", type=int, default=0)
    rec.add_argument("--workers", type=int, default=default_workers(),
                     help="worker processes (default from EQPTOMO_WORKERS, else 1)")
    rec.add_argument("--target", default="singlet",
                     help="'singlet' or a JSON file with 'real'/'imag' amplitude lists")
    rec.add_argument("--significance-threshold", type=float, default=3.0)
    rec.add_argument("--align", choices=ALIGN_MODES, default="states",
                     help="how Monte Carlo samples are relabeled onto the point estimate")
    rec.add_argument("--no-align", action="store_true", help="same as --align none")
    rec.add_argument("--reproducible", action="store_true", help="omit timestamps from the report")
    rec.set_defaults(func=cmd_reconstruct)

    sim = sub.add_parser("simulate", help="simulate coincidence counts for a preset state")
    sim.add_argument("--preset", required=True, help=f"one of {', '.join(PRESETS)}")
    sim.add_argument("--p", type=float, help="Werner mixing parameter")
    sim.add_argument("--pairs-per-setting", type=float, default=30_000)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--noise-free", action="store_true", help="emit expected counts")
    sim.add_argument("--efficiency", type=float, default=1.0)
    sim.add_argument("--out", help="counts file (.csv or .json; default: CSV on stdout)")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify-paper", help="check the pipeline against published values")
    ver.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
