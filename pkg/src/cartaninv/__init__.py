"""Exact-arithmetic Cartan-type modular Lie algebras and their symmetric
invariants: the algebras W, S, H, Hbar over F_p, the lowering operator
d^(delta) on the symmetric algebra, generator criteria, and the Delta
invariant series for the rank-two Hamiltonian algebra."""

from .algebras import (
    BasisElement,
    CartanAlgebra,
    Derivation,
    HamiltonianStructure,
    bracket,
    build,
    build_h,
    build_hbar,
    build_s,
    build_w,
    decompose,
    filtration_basis,
)
from .dividedpowers import DPPolynomial, dp_basis
from .errors import (
    BudgetExceededError,
    ClosureError,
    NotInSpanError,
    ParameterError,
    SerializationError,
)
from .modular import (
    FieldParams,
    binom_lucas,
    delta_of,
    mi_add,
    mi_leq,
    mi_sub,
    multi_binom,
)
from .pipeline import (
    Budget,
    DeltaStarResult,
    IndependenceReport,
    InvariantRecord,
    SweepReport,
    compute_delta,
    conjecture_sweep,
    delta_star,
    independence_report,
    lambda_homogeneity,
    lambda_value,
    phi_normalize,
    restrict_u_zero,
)
from .symalg import (
    GeneratorCheck,
    InvarianceReport,
    SymPolynomial,
    ad_action,
    ad_partial,
    check_generator_sh,
    check_generator_w,
    commutation_expansion_check,
    d_delta,
    d_gamma,
    is_invariant,
)

__version__ = "0.1.0"

__all__ = [
    "BasisElement",
    "Budget",
    "BudgetExceededError",
    "CartanAlgebra",
    "ClosureError",
    "DPPolynomial",
    "DeltaStarResult",
    "Derivation",
    "FieldParams",
    "GeneratorCheck",
    "HamiltonianStructure",
    "IndependenceReport",
    "InvarianceReport",
    "InvariantRecord",
    "NotInSpanError",
    "ParameterError",
    "SerializationError",
    "SweepReport",
    "SymPolynomial",
    "ad_action",
    "ad_partial",
    "binom_lucas",
    "bracket",
    "build",
    "build_h",
    "build_hbar",
    "build_s",
    "build_w",
    "check_generator_sh",
    "check_generator_w",
    "commutation_expansion_check",
    "compute_delta",
    "conjecture_sweep",
    "d_delta",
    "d_gamma",
    "decompose",
    "delta_of",
    "delta_star",
    "dp_basis",
    "filtration_basis",
    "independence_report",
    "is_invariant",
    "lambda_homogeneity",
    "lambda_value",
    "mi_add",
    "mi_leq",
    "mi_sub",
    "multi_binom",
    "phi_normalize",
    "restrict_u_zero",
]
