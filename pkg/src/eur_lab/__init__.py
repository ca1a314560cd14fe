"""Entropic uncertainty bounds for pairs and families of measurement bases.

The package splits into number-producing layers (matrices, sampling, search,
bounds, minimizer, asymptotics) and an experiment layer that orchestrates
reproducible Monte Carlo runs with CSV/JSON/plot reporting.
"""

from .matrices import (
    operator_norm,
    singular_spectrum,
    submatrix,
    unitarity_defect,
    load_matrix,
    save_matrix,
)
from .sampling import (
    GAUSSIAN_METHOD,
    RngStream,
    sample_ginibre,
    sample_haar_unitary,
    sample_pure_state,
)
from .search import (
    NormProfile,
    SearchBudget,
    SearchResult,
    max_column_subvector_norm,
    max_row_subvector_norm,
    max_submatrix_norm,
    multi_measurement_profile,
    profile_to_csv,
    r_profile,
    s_profile,
)
from .bounds import (
    BoundReport,
    ProbVector,
    bound_report,
    coles_piani,
    direct_sum,
    is_majorized,
    maassen_uffink,
    measurement_distribution,
    multi_measurement_bound,
    shannon_entropy,
    strong_direct_sum_bound,
    tensor_majorization_bound,
    tensor_product,
)
from .minimizer import (
    MinimizeOptions,
    MinimizeResult,
    entropy_gradient,
    entropy_sum,
    minimize_entropy_sum,
)
from . import asymptotics

__version__ = "0.1.0"
