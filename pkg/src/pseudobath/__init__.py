"""Temperature-dependent bath correlation functions of a pseudomode environment.

A harmonic "pseudomode" couples a system to a residual ohmic bath.  This
package evaluates how the bath correlation function transforms when the
pseudomode is counted as part of the environment, for factorizing versus
globally thermal initial states, extracts the corresponding transformed
spectral density, and propagates the Gaussian occupation dynamics of a
harmonic system coupled through the pseudomode.  Two independent derivations
(eigenbasis sums and the Heisenberg propagator route) cross-validate each
other throughout.
"""

from .arrowhead import arrowhead_eigh, eig_arrowhead
from .baths import (
    DiscretizedBath,
    OhmicSD,
    PseudomodeConfig,
    ThermalParams,
    discretize,
    mean_occupation,
    ohmic_sd,
)
from .bcf import (
    KIND_DIAGONAL,
    KIND_FACTORIZING,
    KIND_STANDARD,
    PART_ALPHA1,
    PART_ALPHA2,
    PART_FULL,
    BCFGrid,
    bcf_components,
    bcf_diagonal,
    bcf_factorizing,
    bcf_factorizing_pairs,
    bcf_standard,
)
from .dynamics import (
    CovarianceMatrix,
    OccupationTrajectory,
    covariance_at,
    initial_covariance,
    propagate_occupations,
    total_energy,
    total_number,
)
from .heisenberg import (
    PropagatorTable,
    bcf_diagonal_via_u,
    bcf_factorizing_via_u,
    build_propagator_matrix,
    memory_kernel,
    propagator_direct,
    propagator_embedding,
    uniform_time_grid,
)
from .linalg import (
    EigenSystem,
    build_full_matrix,
    build_pm_bath_matrix,
    cached_eig_hermitian,
    eig_hermitian,
    load_eigensystem,
    save_eigensystem,
)
from .spectral import (
    SpectralFunction,
    bcf_fourier,
    bose_einstein_continued,
    default_window,
    detailed_balance_defect,
    extract_sd,
    factorizing_tau_slice,
    peak_positions,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # baths
    "OhmicSD", "ThermalParams", "DiscretizedBath", "PseudomodeConfig",
    "ohmic_sd", "mean_occupation", "discretize",
    # linalg
    "EigenSystem", "build_pm_bath_matrix", "build_full_matrix", "eig_hermitian",
    "cached_eig_hermitian", "save_eigensystem", "load_eigensystem",
    "eig_arrowhead", "arrowhead_eigh",
    # bcf
    "BCFGrid", "bcf_standard", "bcf_factorizing", "bcf_diagonal",
    "bcf_components", "bcf_factorizing_pairs",
    "KIND_STANDARD", "KIND_FACTORIZING", "KIND_DIAGONAL",
    "PART_FULL", "PART_ALPHA1", "PART_ALPHA2",
    # heisenberg
    "PropagatorTable", "memory_kernel", "build_propagator_matrix",
    "propagator_embedding", "propagator_direct", "uniform_time_grid",
    "bcf_factorizing_via_u", "bcf_diagonal_via_u",
    # spectral
    "SpectralFunction", "bcf_fourier", "extract_sd", "factorizing_tau_slice",
    "default_window", "bose_einstein_continued", "detailed_balance_defect",
    "peak_positions",
    # dynamics
    "CovarianceMatrix", "OccupationTrajectory", "initial_covariance",
    "propagate_occupations", "covariance_at", "total_energy", "total_number",
]
