"""Coherent-information amplification with platypus channels.

Modules:

* ``numkernel``: Hermitian spectra and entropies
* ``channels``: Stinespring channels, Choi operators, Bloch representations
* ``coherent``: single-letter values and the amplification ansatz
* ``witness``: superadditivity witnesses and region sweeps
* ``randscan``: random qubit partners and the amplification test
* ``cli``: command-line driver
"""

__version__ = "0.1.0"

from .channels import (BlochRep, IsometryChannel, amplitude_damping, apply, apply_complement,
                       choi_matrix, depolarizing, erasure_channel, generalized_platypus,
                       identity_channel, is_valid_channel, platypus_channel, qubit_from_bloch,
                       tensor_product)
from .coherent import (OptResult, coherent_information, delta_star_ansatz, hashing_point_depolarizing,
                       md_erasure_delta_closed, q1_amplitude_damping, q1_depolarizing, q1_erasure,
                       q1_general, q1_md_closed_form, q1_platypus)
from .numkernel import binary_entropy, von_neumann_entropy
from .witness import (RegionCurve, WitnessReport, delta_witness_ns, mu, region_sweep_md,
                      region_sweep_ns, u_bound)

__all__ = [
    "BlochRep", "IsometryChannel", "OptResult", "RegionCurve", "WitnessReport",
    "amplitude_damping", "apply", "apply_complement", "binary_entropy", "choi_matrix",
    "coherent_information", "delta_star_ansatz", "delta_witness_ns", "depolarizing",
    "erasure_channel", "generalized_platypus", "hashing_point_depolarizing", "identity_channel",
    "is_valid_channel", "md_erasure_delta_closed", "mu", "platypus_channel", "q1_amplitude_damping",
    "q1_depolarizing", "q1_erasure", "q1_general", "q1_md_closed_form", "q1_platypus",
    "qubit_from_bloch", "region_sweep_md", "region_sweep_ns", "tensor_product", "u_bound",
    "von_neumann_entropy",
]
