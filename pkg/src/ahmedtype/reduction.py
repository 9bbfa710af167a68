"""Powers of a 1D integral as iterated integrals, and the Gaussian
reduction cascade.

The two symmetric-splitting identities

    int_0^a int_0^a f = int_0^1 dx int_0^a b*(f(b, b*x) + f(b*x, b)) db

and its n-variable analogue (sum over which slot carries the unscaled b)
lead to the cumulative-product representation

    (int_0^a g)^n = n! * int over v2..vn in [0,1], v1 in [0,a] of
                    v1^(n-1) v2^(n-2) ... v_{n-1} * g(P_1) g(P_2) ... g(P_n)

with P_k = v1*v2*...*vk.  For g = exp(-x^2) and a -> inf the innermost
(semi-infinite) axis integrates in closed form through the half-Gaussian
moments, and the fifth power collapses stage by stage — four successive
integrations, each stage keeping the conserved total pi^(5/2)/32 — down to
a single arctan integral that splits into a pi/4 piece, Ahmed's integral
and the companion arctan(sqrt((2+x^2)/(4+x^2))) integral.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from mpmath import mp

from . import quad1d, quadnd
from .numeric import (
    DEFAULT,
    FAST,
    DomainError,
    ExactConstant,
    PrecisionConfig,
    Real,
    UsageError,
    atan,
    constant,
    pi_like,
    sqrt_pi_like,
)
from .quad1d import Finite, Integrand1D
from .quadnd import IntegrandND

VARIABLE_POOL = ("x", "beta", "gamma", "delta", "epsilon", "zeta")

CHAIN_TOTAL = ExactConstant(Fraction(1, 32), pi_half=5)

STAGE_CHECK_TOL_FAST = (1e-8, 1e-8, 1e-9, 1e-10, 1e-12)
STAGE_QUAD_TOL_FAST = (1e-8, 1e-8, 1e-9, 1e-10, 3e-11)
HIGH_PRECISION_TOL = 1e-20  # stages of dimension <= 2 in big-float runs


# ---------------------------------------------------------------------------
# symmetric splitting (the two change-of-variables identities)


def split_symmetric_2d(f, alpha, cfg: PrecisionConfig = DEFAULT,
                       tol=None, max_level: int = 10) -> Real:
    """Integrate f over [0, alpha]^2 via the symmetric split.

    Evaluates int_0^1 dx int_0^alpha b*(f(b, b*x) + f(b*x, b)) db, which
    equals the plain double integral for continuous f.
    """
    return split_symmetric_nd(f, 2, alpha, cfg, tol, max_level)


def split_symmetric_nd(f, n: int, alpha, cfg: PrecisionConfig = DEFAULT,
                       tol=None, max_level: int = 10) -> Real:
    """Integrate f over [0, alpha]^n via the n-variable symmetric split.

    The inner integrand is b^(n-1) * h where h sums f over the n choices
    of which argument carries the unscaled b (the rest are b*x_i).
    """
    if not 2 <= n <= 4:
        raise UsageError(f"split_symmetric_nd supports 2 <= n <= 4, got {n}")
    if not float(alpha) > 0:
        raise UsageError(f"alpha must be positive, got {alpha}")

    def integrand(*coords):
        xs, b = coords[:-1], coords[-1]
        scaled = [b * xi for xi in xs]
        total = None
        for p in range(n):
            args = scaled[:p] + [b] + scaled[p:]
            term = f(*args)
            total = term if total is None else total + term
        return b ** (n - 1) * total

    nd = IntegrandND(
        eval=integrand,
        dim=n,
        domain=tuple([(0.0, 1.0)] * (n - 1) + [(0.0, float(alpha))]),
        name=f"symmetric-split-{n}d",
    )
    res = quadnd.integrate_nested(nd, tol, max_level, cfg)
    return res.value


# ---------------------------------------------------------------------------
# iterated-power representation


@dataclass(frozen=True)
class IteratedRepresentation:
    """(int_0^alpha g)^n as n! times a weighted iterated integral.

    ``variables`` lists (v1, ..., vn) with v1 on [0, alpha] and the rest
    on [0, 1]; variable vk carries weight exponent n-k and g is evaluated
    at the cumulative products P_k = v1*...*vk.
    """

    n: int
    factorial_prefactor: int
    weight_exponents: tuple
    variables: tuple
    argument_rule: str = (
        "g evaluated at cumulative products P_k = v1*v2*...*vk, k = 1..n"
    )
    outer_domain: str = "v1 in [0, alpha] (alpha may be +inf); v2..vn in [0, 1]"

    def arguments(self) -> tuple:
        """Display strings for the g-arguments, e.g. ('delta', 'delta*gamma', ...)."""
        out = []
        for k in range(1, self.n + 1):
            out.append("*".join(self.variables[:k]))
        return tuple(out)


def power_representation(n: int) -> IteratedRepresentation:
    """Cumulative-product representation of the n-th power, 2 <= n <= 6."""
    if not 2 <= n <= 6:
        raise UsageError(f"power_representation supports 2 <= n <= 6, got {n}")
    variables = tuple(reversed(VARIABLE_POOL[:n]))
    return IteratedRepresentation(
        n=n,
        factorial_prefactor=math.factorial(n),
        weight_exponents=tuple(range(n - 1, -1, -1)),
        variables=variables,
    )


def _representation_integrand(rep: IteratedRepresentation, g, alpha,
                              infinite: bool):
    """Box integrand in display order (vn, ..., v1), v1 innermost.

    For alpha = +inf the inner axis is mapped by v1 = t/(1-t) with
    Jacobian (1-t)^-2; g must decay fast enough at infinity.
    """
    n = rep.n

    def integrand(*coords):
        # coords follow display order (vn, ..., v2, v1), v1 innermost
        v1 = coords[-1]
        if infinite:
            denom = 1 - v1
            jac = 1 / (denom * denom)
            v1 = v1 / denom
        weight = v1 ** (n - 1)
        prod = v1
        value = g(prod)
        for k in range(2, n + 1):
            v = coords[n - k]
            if n - k:
                weight = weight * v ** (n - k)
            prod = prod * v
            value = value * g(prod)
        out = weight * value
        if infinite:
            out = out * jac
        return out

    return integrand


def evaluate_representation(rep: IteratedRepresentation, g, alpha,
                            method: str = "nested",
                            cfg: PrecisionConfig = DEFAULT,
                            tol=None, max_level: int = 10,
                            points: int = 1 << 14, shifts: int = 8,
                            seed: int = 0) -> Real:
    """Numerical value of the iterated representation, prefactor included.

    ``alpha`` may be math.inf.  Nested mode supports n <= 4; QMC any
    n <= 6.  Contractually equals (int_0^alpha g)^n.
    """
    infinite = math.isinf(float(alpha))
    if method == "nested":
        if rep.n > quadnd.NESTED_MAX_DIM:
            raise UsageError(
                f"nested evaluation supports n <= {quadnd.NESTED_MAX_DIM}; "
                f"use method='qmc'"
            )
        inner = (0.0, 1.0) if infinite else (0.0, float(alpha))
        nd = IntegrandND(
            eval=_representation_integrand(rep, g, alpha, infinite),
            dim=rep.n,
            domain=tuple([(0.0, 1.0)] * (rep.n - 1) + [inner]),
            name=f"power-{rep.n}-representation",
        )
        res = quadnd.integrate_nested(nd, tol, max_level, cfg)
        return rep.factorial_prefactor * res.value
    if method == "qmc":
        inner = (0.0, 1.0) if infinite else (0.0, float(alpha))
        nd = IntegrandND(
            eval=_representation_integrand(rep, g, alpha, infinite),
            dim=rep.n,
            domain=tuple([(0.0, 1.0)] * (rep.n - 1) + [inner]),
            name=f"power-{rep.n}-representation",
        )
        est = quadnd.integrate_qmc(nd, points, shifts, seed)
        return rep.factorial_prefactor * est.mean
    raise UsageError(f"method must be 'nested' or 'qmc', got {method!r}")


# ---------------------------------------------------------------------------
# half-Gaussian moments (analytic removal of the semi-infinite axis)


def _moment_coefficient(k: int) -> tuple:
    """(rational coefficient, carries_sqrt_pi) for int_0^inf t^k e^(-t^2) dt."""
    if k % 2 == 0:
        m = k // 2
        return (
            Fraction(math.factorial(2 * m), 4**m * math.factorial(m) * 2),
            True,
        )
    m = (k - 1) // 2
    return Fraction(math.factorial(m), 2), False


def gaussian_moment(k: int, s):
    """int_0^inf t^k exp(-s t^2) dt in closed form.

    Accepts scalar, mpf or ndarray s > 0; the result matches the argument
    type, so the stage-0 integrand can compose this pointwise.
    """
    if not isinstance(k, int) or k < 0 or k > 12:
        raise UsageError(f"gaussian_moment supports integer 0 <= k <= 12, got {k}")
    coeff, has_sqrt_pi = _moment_coefficient(k)
    if isinstance(s, mp.mpf):
        if s <= 0:
            raise DomainError(f"gaussian_moment: s must be positive, got {s}")
        value = mp.mpf(coeff.numerator) / coeff.denominator
        value = value * s ** (mp.mpf(-(k + 1)) / 2)
        return value * mp.sqrt(mp.pi) if has_sqrt_pi else value
    arr = np.asarray(s, dtype=float)
    if not (arr > 0).all():
        raise DomainError("gaussian_moment: s must be positive")
    value = float(coeff) * np.power(s, -(k + 1) / 2)
    if has_sqrt_pi:
        value = value * math.sqrt(math.pi)
    return value


def gaussian_power_reduced(n: int) -> IntegrandND:
    """The (n-1)-dim box integrand left after integrating the
    semi-infinite axis of the Gaussian n-th power analytically.

    Coordinates follow display order (x, beta, ...), innermost last; the
    integrand already includes the n! prefactor, so its box integral
    equals pi^(n/2)/2^n.
    """
    if not 2 <= n <= 6:
        raise UsageError(f"gaussian_power_reduced supports 2 <= n <= 6, got {n}")
    prefactor = math.factorial(n)

    def integrand(*coords):
        # coords = (vn, ..., v2); s = 1 + v2^2 (1 + v3^2 (... (1 + vn^2)))
        # and v_k carries weight exponent n-k, i.e. coords[j] carries j
        s = None
        weight = None
        for j, v in enumerate(coords):  # vn first
            v2 = v * v
            s = v2 if s is None else v2 * (1 + s)
            if j:
                weight = v ** j if weight is None else weight * v ** j
        s = 1 + s
        mom = gaussian_moment(n - 1, s)
        out = prefactor * mom
        if weight is not None:
            out = out * weight
        return out

    return IntegrandND(
        eval=integrand,
        dim=n - 1,
        name=f"gaussian-power-{n}-reduced",
    )


# ---------------------------------------------------------------------------
# the five-stage cascade for the fifth power


def _stage0(x, b, g, d):
    s = 1 + d * d * (1 + g * g * (1 + b * b * (1 + x * x)))
    return 120 * d**3 * g * g * b * gaussian_moment(4, s)


def _stage1(x, b, g, d):
    q = 1 + (1 + (1 + (1 + x * x) * b * b) * g * g) * d * d
    return sqrt_pi_like(q) * b * g * g * d**3 * q ** -2.5


def _stage2(x, b, g):
    u = (1 + (1 + x * x) * b * b) * g * g
    bracket = 2 - (5 + 3 * u) / (2 + u) ** 1.5
    return sqrt_pi_like(u) * b * g * g / (1 + u) ** 2 * bracket


def _stage3(x, g):
    g2 = g * g
    x2 = x * x
    t1 = (1 - 1 / (2 + g2) ** 0.5) / ((1 + x2) * g2 * (1 + g2))
    t2 = (1 - 1 / (2 + (2 + x2) * g2) ** 0.5) / ((1 + x2) * g2 * (1 + (2 + x2) * g2))
    return sqrt_pi_like(g2) * g2 * (t1 - t2)


def _stage4(x):
    x2 = x * x
    r = (2 + x2) ** 0.5
    return (pi_like(x) * r - 12 * atan(r) + 12 * atan(((2 + x2) / (4 + x2)) ** 0.5)) / (
        (1 + x2) * r
    )


@dataclass(frozen=True)
class GaussianStage:
    """One checkpoint of the cascade: prefactor * integral = pi^(5/2)/32."""

    stage_index: int
    dim: int
    prefactor: ExactConstant
    integrand: IntegrandND
    expected: ExactConstant = CHAIN_TOTAL


_STAGES = (
    # stage 0 carries the 120 prefactor inside its integrand (the
    # semi-infinite axis is composed analytically per point), so the
    # recorded prefactor is 1 against the raw integrand below.
    GaussianStage(0, 4, ExactConstant(Fraction(120)), IntegrandND(
        eval=lambda x, b, g, d: _stage0(x, b, g, d) / 120,
        dim=4, name="stage0-moment-composed")),
    GaussianStage(1, 4, ExactConstant(Fraction(45)), IntegrandND(
        eval=_stage1, dim=4, name="stage1-4d")),
    GaussianStage(2, 3, ExactConstant(Fraction(15)), IntegrandND(
        eval=_stage2, dim=3, name="stage2-3d")),
    GaussianStage(3, 2, ExactConstant(Fraction(15)), IntegrandND(
        eval=_stage3, dim=2, name="stage3-2d")),
    GaussianStage(4, 1, ExactConstant(Fraction(15, 12), pi_half=1), IntegrandND(
        eval=_stage4, dim=1, name="stage4-1d")),
)


def gaussian_stage(stage: int) -> GaussianStage:
    """The cascade checkpoint ``stage`` (0..4)."""
    if not 0 <= stage <= 4:
        raise UsageError(f"stage must be in 0..4, got {stage}")
    return _STAGES[stage]


def stage_check_tolerance(stage: int, cfg: PrecisionConfig) -> float:
    """Pass tolerance for a stage total: per-dimension in fast mode.

    At high precision the 1D stage is held to 10^-(digits-20) (it feeds
    constant recognition), dimension 2 to 1e-20, and dimensions >= 3 keep
    their fast-mode tolerance (they always run at native float precision).
    """
    st = gaussian_stage(stage)
    if cfg.fast_mode or st.dim > 2:
        return STAGE_CHECK_TOL_FAST[stage]
    if st.dim == 1:
        return 10.0 ** -(cfg.working_digits - 20)
    return max(HIGH_PRECISION_TOL, 10.0 ** -(cfg.working_digits - 10))


@lru_cache(maxsize=None)
def _stage_eval(stage: int, cfg: PrecisionConfig):
    """(total value, quadrature result, cfg actually used).

    Dimensions >= 3 are evaluated in fast mode regardless of cfg — only
    the low-dimensional stages are needed at full precision for constant
    recognition.  Cached: stages are pure functions of (stage, cfg).
    """
    st = gaussian_stage(stage)
    eval_cfg = cfg if (cfg.fast_mode or st.dim <= 2) else FAST
    if eval_cfg.fast_mode:
        tol = STAGE_QUAD_TOL_FAST[stage]
    elif st.dim == 1:
        tol = quad1d.default_tolerance(eval_cfg)
    else:
        tol = max(HIGH_PRECISION_TOL, 10.0 ** -(cfg.working_digits - 10))
    if st.dim == 1:
        f1 = Integrand1D(st.integrand.eval, Finite(0.0, 1.0),
                         name=st.integrand.name)
        res = quad1d.integrate_finite(f1, tol, max_level=12, cfg=eval_cfg)
    else:
        res = quadnd.integrate_nested(st.integrand, tol, max_level=10,
                                      cfg=eval_cfg)
    with cfg.context():
        total = st.prefactor.value(eval_cfg) * res.value
    return total, res, eval_cfg


@dataclass
class StageCheck:
    stage: int
    dim: int
    prefactor: str
    value: Real
    expected: Real
    abs_error: Real
    tolerance: float
    passed: bool
    evaluations: int
    wall_ms: float
    note: str = ""


@dataclass
class ExtractionCheck:
    name: str
    value: Real
    expected: Real
    abs_error: Real
    tolerance: float
    passed: bool


@dataclass
class ChainReport:
    stages: list = field(default_factory=list)
    extractions: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    overall_pass: bool = True


REPRESENTATION_NOTE = (
    "fifth-power representation uses the fully scaled g-arguments "
    "(epsilon, epsilon*delta, epsilon*delta*gamma, epsilon*delta*gamma*beta, "
    "epsilon*delta*gamma*beta*x); the alternative reading "
    "g(delta)g(delta*gamma)g(delta*gamma*beta)g(delta*gamma*beta*x)"
    "g(epsilon*delta*gamma*beta*x) contradicts the stage-0 exponent "
    "1+delta^2+delta^2*gamma^2+... and the fourth-power pattern, and is "
    "rejected"
)


def verify_chain(cfg: PrecisionConfig = DEFAULT) -> ChainReport:
    """Evaluate all five cascade stages against pi^(5/2)/32, then solve
    the stage-4 three-part split for each arctan constant.

    The stage-4 total T satisfies T = (5 sqrt(pi)/4) (pi^2/4 - 12 A + 12 B)
    where A is Ahmed's integral and B the companion integral; substituting
    the exact value of one solves for the other using only chain data.
    """
    report = ChainReport(notes=[REPRESENTATION_NOTE])
    with cfg.context():
        expected = CHAIN_TOTAL.value(cfg)
        stage4_total = None
        for s in range(5):
            st = gaussian_stage(s)
            tol = stage_check_tolerance(s, cfg)
            t0 = time.perf_counter()
            try:
                total, res, eval_cfg = _stage_eval(s, cfg)
            except ArithmeticError as exc:
                report.stages.append(StageCheck(
                    stage=s, dim=st.dim, prefactor=st.prefactor.text(),
                    value=math.nan, expected=expected, abs_error=math.nan,
                    tolerance=tol, passed=False, evaluations=0,
                    wall_ms=(time.perf_counter() - t0) * 1e3,
                    note=f"stage failed: {exc}"))
                report.overall_pass = False
                continue
            wall = (time.perf_counter() - t0) * 1e3
            err = abs(total - expected)
            passed = bool(err <= tol)
            report.stages.append(StageCheck(
                stage=s, dim=st.dim, prefactor=st.prefactor.text(),
                value=total, expected=expected, abs_error=err, tolerance=tol,
                passed=passed, evaluations=res.evaluations, wall_ms=wall))
            report.overall_pass = report.overall_pass and passed
            if s == 4:
                stage4_total = total

        if stage4_total is not None:
            pi_sq = constant("pi_squared", cfg)
            sqrt_pi = constant("sqrt_pi", cfg)
            # R = pi^2/4 - 12 A + 12 B, recovered from the chain total
            r = stage4_total * 4 / (5 * sqrt_pi)
            ex_tol = 1e-10 if cfg.fast_mode else 10.0 ** -(cfg.working_digits - 20)
            b_value = (r + 3 * pi_sq / 8) / 12
            b_expected = pi_sq / 30
            b_err = abs(b_value - b_expected)
            report.extractions.append(ExtractionCheck(
                name="companion_from_chain", value=b_value,
                expected=b_expected, abs_error=b_err, tolerance=ex_tol,
                passed=bool(b_err <= ex_tol)))
            a_value = (pi_sq / 4 + 2 * pi_sq / 5 - r) / 12
            a_expected = 5 * pi_sq / 96
            a_err = abs(a_value - a_expected)
            report.extractions.append(ExtractionCheck(
                name="ahmed_from_chain", value=a_value,
                expected=a_expected, abs_error=a_err, tolerance=ex_tol,
                passed=bool(a_err <= ex_tol)))
            for e in report.extractions:
                report.overall_pass = report.overall_pass and e.passed
    return report
