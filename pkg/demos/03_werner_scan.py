"""Werner-state scan: where does the EQP turn negative?

q = 1 - |rho_x| - |rho_y| - |rho_z| changes sign at p = 1/3, together with the
smallest partial-transpose eigenvalue.
"""

import numpy as np

from eqptomo import reconstruct_counts, sample_counts, SimulationConfig
from eqptomo.synthgen import werner

print("   p       q      min P    PT min")
for p in np.linspace(0, 1, 13):
    E = sample_counts(SimulationConfig(werner(p), noise_free=True))
    rec = reconstruct_counts(E)
    print(
        f"{p:5.3f} {rec.standard_form.q:+8.4f} {rec.summary.min_weight:+8.4f} "
        f"{rec.diagnostics.pt_negativity:+8.4f}"
    )
