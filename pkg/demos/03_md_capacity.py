"""
Capacity superadditivity for M_{d+1} x E_{lam,d}
================================================

Closed forms only: mu = Delta(w) - upper bound on the summed capacities.
A positive maximum over w certifies superadditivity of the quantum capacity.
"""

from nonadditivity.witness import max_mu, region_sweep_md

for d in (3, 4, 8):
    best = max_mu(d, 0.5)
    print(f"d={d}  max_w mu={best.value:+.5f} at w={best.x:.4f}")

q1c, capc = region_sweep_md([4, 10, 50])
for a, b in zip(q1c.rows, capc.rows):
    print(f"d={a.param:3d}  coherent window [{a.x_min:.4f}, {a.x_max:.4f}]  "
          f"capacity window [{b.x_min:.4f}, {b.x_max:.4f}]")
