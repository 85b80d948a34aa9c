"""Exact degrees of subspace varieties of tensors with bounded multilinear rank."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    FlatteningIndexer,
    FormatProfile,
    RankNotRealizable,
    delinearize,
    derive_scalars,
    dimension,
    is_realizable,
    linearize,
)
from .degree import (  # noqa: E402
    DegreeResult,
    IntegralityViolation,
    degree_subspace,
    determinantal_degree_oracle,
    f_value,
    g_value,
    grassmannian_degree,
    product_power_det,
    segre_degree,
)
from .flattening import SymbolicMatrix, generic_flattening, gram_product, symbolic_determinant  # noqa: E402
from .montecarlo import (  # noqa: E402
    McEstimate,
    chi_squared_moment,
    estimate_f,
    gaussian_moment_check,
    sample_gaussian_tensor,
    weight,
)
from .polyring import (  # noqa: E402
    ExactRational,
    ExponentVector,
    ResourceExceeded,
    SparsePolynomial,
    factorial,
    poly_add,
    poly_mul,
    poly_pow,
)
