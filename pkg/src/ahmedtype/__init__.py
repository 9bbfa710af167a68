"""Numerical verification of Gaussian-integral power reductions to
Ahmed-type arctan integrals, with exact-constant recognition."""

__version__ = "0.1.0"

from .numeric import (  # noqa: F401
    DEFAULT,
    FAST,
    ConvergenceError,
    DomainError,
    EvaluationError,
    ExactConstant,
    PrecisionConfig,
    UsageError,
    constant,
    elementary,
)
from .quad1d import (  # noqa: F401
    Finite,
    Integrand1D,
    QuadratureResult,
    SemiInfinite,
    integrate_finite,
    integrate_semi_infinite,
)
from .quadnd import (  # noqa: F401
    IntegrandND,
    MCEstimate,
    integrate_nested,
    integrate_qmc,
    mc_estimate,
)
from .reduction import (  # noqa: F401
    GaussianStage,
    IteratedRepresentation,
    evaluate_representation,
    gaussian_moment,
    gaussian_stage,
    power_representation,
    split_symmetric_2d,
    split_symmetric_nd,
    verify_chain,
)
from .catalog import (  # noqa: F401
    NamedIdentity,
    list_ids,
    lookup,
    verify_identity,
)
from .recognize import (  # noqa: F401
    RecognitionResult,
    find_integer_relation,
    recognize_rational_multiple,
)
