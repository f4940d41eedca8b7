"""Driven Jaynes-Cummings simulator and analytics toolkit.

Simulates a strongly driven two-level system in a single-mode cavity
(units of the coupling g), tracks wave packets running in photon-number
space, and cross-checks the numerics against the closed-form dressed-state
results that double as test oracles.
"""

from .backend import active_backend, set_backend
from .model import (
    HilbertIndex,
    OperatorSet,
    SystemParams,
    Tls,
    basis_state,
    build_operators,
    coherent_amplitudes,
    flat_index,
    h_tridiagonal,
    lds_branch_state,
    prepare_state,
    to_density,
    unflatten,
)
from .dynamics import (
    TimeGrid,
    Trajectory,
    evolve_lindblad,
    evolve_schrodinger,
    find_stationary,
    stability_limit,
)
from .observables import (
    PhotonDistribution,
    WignerGrid,
    mean_energy,
    mean_photon_number,
    photon_distribution,
    reduce_photonic,
    wigner,
)
from .analysis import (
    Packet,
    PacketSet,
    PacketTrack,
    Spectrum,
    detect_packets,
    poisson_fit,
    poisson_residual,
    spectrum,
    track_packets,
)
from .dressed import (
    CdsReport,
    DressedReport,
    LdsReport,
    cds_report,
    dressed_report,
    lds_mean_photon,
    lds_report,
    lds_trajectory,
)
from .wkb_chain import (
    ChainModes,
    ChainSpec,
    cds_chain,
    chain_eigensolve,
    classify_region,
    decay_verification,
)
from . import errors

__version__ = "0.1.0"
