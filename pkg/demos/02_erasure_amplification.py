"""
Erasure partner: witness window at s = 1/2
==========================================

Delta*(N_s x E_lam) - Q1(N_s) - Q1(E_lam) along lam. The window opens
around 0.41 and closes numerically near 0.665; the log-singularity
threshold extends it to about 0.724.
"""

import numpy as np

from nonadditivity.witness import family_witness, lambda_max_analytic, region_row_ns

s = 0.5
for lam in np.linspace(0.3, 0.8, 11):
    print(f"lambda={lam:.2f}  witness={family_witness('erasure', s, lam).witness_value:+.5f}")

row = region_row_ns("erasure", s)
print(f"window [{row.x_min:.4f}, {row.x_max_numeric:.4f}] numeric, "
      f"analytic upper end {lambda_max_analytic(s):.4f}")
