"""Spectral-gap analysis of quadratic fermionic Hamiltonians."""

from .errors import CapacityError, FermigapError, InputError, NumericalError
from .quadform import (
    CoefficientPair,
    EvolutionSpec,
    GapProfile,
    GapReport,
    LiebDecomposition,
    gap_profile,
    ground_gap,
    interpolate,
    lieb_decompose,
    subset_sum_spectrum,
    symmetrize_split,
)
from .lattice import (
    Bc2cbSpec,
    BccbSpec,
    CirculantSpec,
    bc2cb_g_eigenvalues,
    bccb_g_eigenvalues,
    build_torus_2d,
    build_torus_3d,
    build_xy_cycle,
    circulant_g_eigenvalues,
    expand,
    structured_gap_profile,
)
from .ensembles import (
    EnsembleConfig,
    edelman_cdf,
    edelman_pdf,
    figure1_experiment,
    figure2_experiment,
    gap_distribution_experiment,
    rarity_fraction,
    sample_pair,
    survival_experiment,
)
from .spinrep import (
    FermionOperatorSet,
    PauliHamiltonian,
    ab_to_w,
    build_cluster_w,
    build_ising_w,
    dense_hamiltonian,
    dense_spectrum_oracle,
    fcr_check,
    jw_operators,
    spin32_operators,
    unitary_fcr_transform,
    w_to_ab,
)

__version__ = "0.1.0"
