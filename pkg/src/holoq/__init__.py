"""Quaternionic holomorphic functions: construction, Cauchy-Riemann checks and full derivatives."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BranchCutError,
    DomainError,
    ExprSyntaxError,
    HoloqError,
    NonIntegerExponent,
    ParseError,
    PreconditionError,
    StencilError,
    UnknownIdentifier,
    UnsupportedNode,
    UnsupportedOrder,
)
from .expr import (  # noqa: E402
    CATALOG,
    EvalResult,
    QFunction,
    analytic_derivative,
    builtin_cos,
    builtin_exp,
    builtin_ln,
    builtin_powi,
    builtin_recip,
    builtin_sin,
    evaluate,
    is_catalog_holomorphic,
    raw_conj,
    restrict_to_complex,
)
from .parser import format_expr, parse  # noqa: E402
from .quaternion import (  # noqa: E402
    DoublingForm,
    PolarForm,
    Quaternion,
    conj,
    doubling_mul,
    from_polar,
    hamilton_mul,
    inverse,
    norm,
    to_polar,
)
from .wirtinger import (  # noqa: E402
    CRResidual,
    Domain,
    HolomorphyReport,
    WirtingerJet,
    check_holomorphy,
    cr_residuals,
    derivative_is_holomorphic,
    full_derivative_numeric,
    wirtinger_jet,
)
