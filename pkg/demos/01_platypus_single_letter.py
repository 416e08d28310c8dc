"""
Single-letter coherent information of the platypus family
=========================================================

The qutrit channel N_s has a one-parameter closed form for Q1; compare it
with an unstructured search over all input states.
"""

import numpy as np

from nonadditivity.channels import platypus_channel
from nonadditivity.coherent import q1_general, q1_platypus

for s in np.linspace(0.0, 0.5, 6):
    closed = q1_platypus(s)
    search = q1_general(platypus_channel(s), restarts=4)
    print(f"s={s:.1f}  closed={closed.value:.6f}  search={search.value:.6f}  "
          f"u*={closed.argmax[0]:.4f}")
