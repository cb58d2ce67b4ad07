"""Standard form and EQP of an ideal singlet and of a filtered, rotated copy.

Run: python3 demos/01_singlet_standard_form.py
"""

import numpy as np

from eqptomo import decompose, reassemble_state
from eqptomo.pauli import correlations_from_density, density_from_correlations, pauli_matrices
from eqptomo.synthgen import singlet

np.set_printoptions(precision=4, suppress=True)

# The singlet is already in standard form: C = diag(1, -1, -1, -1).
C = correlations_from_density(singlet())
sf, d = decompose(C)
print("standard-form diagonal:", sf.diagonal, " q =", sf.q)
for (a, b), w in zip(d.labels, d.weights):
    print(f"  P({a}, {b}) = {w:+.4f}")

# A local filter on Alice plus a unitary on Bob hides the structure; the
# decomposition finds it again.
s = pauli_matrices()
filt = np.cosh(0.3) * s[0] + np.sinh(0.3) * s[3]
rot = np.cos(0.4) * s[0] - 1j * np.sin(0.4) * s[1]
T = np.kron(filt, rot)
rho = T @ singlet() @ T.conj().T
rho /= np.trace(rho).real

sf, d = decompose(correlations_from_density(rho))
print("\nfiltered singlet, diagonal:", sf.diagonal, " boost passes:", sf.passes)
# pure filtered states sit on the light cone, so a tiny white-noise admixture
# is needed before the boost can be solved
print("regularization eps:", sf.regularization)
print("weights:", d.weights)
print("sum of weights:", d.weights.sum())
print("max reassembly deviation:", np.abs(reassemble_state(d) - rho).max())
print("  against the regularized input:", np.abs(reassemble_state(d) - density_from_correlations(sf.effective)).max())
