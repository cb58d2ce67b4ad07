"""Published reference values for the polarization Bell-state measurement."""

import numpy as np

# sampled density matrix, basis HH, HV, VH, VV, rounded to three decimals
SAMPLED_RHO = np.array(
    [
        [0.008, 0.005 + 0.000j, -0.002 - 0.001j, -0.004 - 0.001j],
        [0.005 - 0.000j, 0.469, -0.473 - 0.026j, -0.006 + 0.002j],
        [-0.002 + 0.001j, -0.473 + 0.026j, 0.500, 0.014 + 0.004j],
        [-0.004 + 0.001j, -0.006 - 0.002j, 0.014 - 0.004j, 0.023],
    ],
    dtype=complex,
)
SAMPLED_RHO.setflags(write=False)

ENTRY_ERROR = 0.003
PURITY = 0.921
FIDELITY = 0.958
PT_NEGATIVITY = -0.459
EIGENVALUES = (0.959, 0.026, 0.011, 0.003)
SIGNIFICANCE = 13.0
TOTAL_COUNTS = 1_000_000

# Bloch coefficients of Alice's and Bob's transformed states, rows x+, x-, y+, y-, z+, z-
COEFFICIENTS_A = np.array(
    [
        [-0.907, 0.120, -0.359],
        [0.944, -0.224, -0.197],
        [0.235, -0.229, -0.140],
        [0.271, -0.172, -0.133],
        [0.264, 0.059, -0.107],
        [0.341, 0.031, -0.175],
    ]
)
COEFFICIENTS_B = np.array(
    [
        [-0.936, 0.083, -0.342],
        [0.969, -0.178, -0.171],
        [0.384, 0.424, -0.820],
        [0.187, -0.791, 0.583],
        [0.218, -0.667, -0.713],
        [0.424, 0.768, 0.480],
    ]
)
