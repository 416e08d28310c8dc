"""
Random qubit partners
=====================

Sample a qubit channel R, find where Q1(R_x) first vanishes along
R_x = (1 - x) id + x R, and test the ansatz witness there.
"""

import numpy as np

from nonadditivity.channels import BlochRep
from nonadditivity.randscan import amplification_scan, batch_stats, run_batch

rep = BlochRep.normal_form([0.0078, 0.4231, 0.6556], [0.1253, 0.1302, 0.0924])
rec = amplification_scan(rep)
print(f"fixed channel: x*={rec.x_star:.4f}  witness={rec.witness_at_xstar:.5f}  "
      f"interval={np.round(rec.superadd_interval, 4)}")

records = run_batch(5, seed=7, workers=1)
for r in records:
    print(f"seed={r.seed:10d}  x*={r.x_star:.4f}  witness={r.witness_at_xstar:+.5f}")
print(batch_stats(records))
