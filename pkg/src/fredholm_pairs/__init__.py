"""Index computations and identity checks for Fredholm pairs and chains of
finite-dimensional Hilbert-space operators."""

__version__ = "0.1.0"

from .chains import (
    Chain,
    ChainAnalysis,
    analyze_chain,
    chain_laplacians,
    chain_to_pair,
    dual_chain,
    stitched_euler_operators,
    validate_chain,
    verify_chain,
)
from .checks import Check, InconsistencyError
from .hilbert import DimensionError, Operator, Subspace, Tolerance
from .pairs import (
    FredholmPair,
    PairAnalysis,
    analyze_pair,
    build_block_U,
    build_laplacian_blocks,
    build_V,
    compress_pair,
    dual_pair,
    euler_index,
    product_zero_decomposition,
    swap_pair,
    verify_pair,
)
from .perturbation import ExperimentLog, PerturbationPlan
from .truncation import OperatorFamily, StabilizationReport, realize, stabilization_scan
