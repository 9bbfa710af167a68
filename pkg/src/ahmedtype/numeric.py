"""Extended-precision scalars, constants and elementary functions.

Every quantity in this package is either a native ``float`` (fast mode) or
an ``mpmath.mpf`` carried at a configurable number of decimal digits.  A
single :class:`PrecisionConfig` is fixed for the duration of a run; all
operations are pure, deterministic and safe to share between threads once
the precision has been set.

The dispatching helpers (:func:`sqrt`, :func:`exp`, ...) accept floats,
numpy arrays and mpf scalars so the same integrand code runs vectorized in
fast mode and scalar at high precision.
"""

from __future__ import annotations

import math
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from mpmath import mp


class UsageError(ValueError):
    """Caller violated a documented precondition (CLI exit code 2)."""


class DomainError(UsageError):
    """Argument outside an elementary function's real domain."""


class EvaluationError(ArithmeticError):
    """Integrand returned a non-finite value at a quadrature node."""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class ConvergenceError(ArithmeticError):
    """A quadrature axis failed to converge within its level budget."""

    def __init__(self, message: str, axis: int | None = None):
        super().__init__(message)
        self.axis = axis


Real = Union[float, mp.mpf]
"""A working-precision real scalar (float in fast mode, mpf otherwise)."""


@dataclass(frozen=True)
class PrecisionConfig:
    """Fixed per-run precision: decimal digits, or native binary floats.

    ``fast_mode`` pins the working precision to the platform double
    (~16 digits) and enables vectorized numpy evaluation; otherwise all
    scalar work runs through mpmath at ``working_digits`` digits.
    """

    working_digits: int = 50
    fast_mode: bool = False

    def __post_init__(self):
        if self.working_digits < 16:
            raise UsageError(
                f"working_digits must be >= 16, got {self.working_digits}"
            )
        if self.fast_mode and self.working_digits > 16:
            raise UsageError("fast_mode fixes working_digits at 16")

    @property
    def dps(self) -> int:
        return 16 if self.fast_mode else self.working_digits

    @property
    def eps(self) -> float:
        """Unit roundoff at the working precision (float for comparisons)."""
        if self.fast_mode:
            return float(np.finfo(float).eps)
        return 10.0 ** (1 - self.working_digits)

    def context(self):
        """Context manager fixing the mpmath precision for a computation."""
        if self.fast_mode:
            return nullcontext()
        return mp.workdps(self.working_digits)


FAST = PrecisionConfig(working_digits=16, fast_mode=True)
DEFAULT = PrecisionConfig()


def to_real(x, cfg: PrecisionConfig) -> Real:
    """Convert ints, floats, strings, Fractions and exact constants to
    the working scalar (binary floats convert exactly; pass strings for
    decimal literals)."""
    if isinstance(x, ExactConstant):
        return x.value(cfg)
    if cfg.fast_mode:
        if isinstance(x, Fraction):
            return x.numerator / x.denominator
        return float(x)
    with cfg.context():
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)


CONSTANT_NAMES = ("pi", "sqrt_pi", "pi_squared", "pi_cubed")


def constant(name: str, cfg: PrecisionConfig = DEFAULT) -> Real:
    """Fundamental constants, correct to the working precision."""
    if name not in CONSTANT_NAMES:
        raise UsageError(
            f"unknown constant {name!r}; choose one of {CONSTANT_NAMES}"
        )
    if cfg.fast_mode:
        return {
            "pi": math.pi,
            "sqrt_pi": math.sqrt(math.pi),
            "pi_squared": math.pi * math.pi,
            "pi_cubed": math.pi ** 3,
        }[name]
    with cfg.context():
        return {
            "pi": +mp.pi,
            "sqrt_pi": mp.sqrt(mp.pi),
            "pi_squared": mp.pi * mp.pi,
            "pi_cubed": mp.pi ** 3,
        }[name]


def pi_half_power(p: int, cfg: PrecisionConfig = DEFAULT) -> Real:
    """pi**(p/2) for integer p >= 0, built from pi and sqrt(pi) only."""
    if p < 0:
        raise UsageError("pi_half_power requires p >= 0")
    if cfg.fast_mode:
        v = math.pi ** (p // 2)
        return v * math.sqrt(math.pi) if p % 2 else float(v)
    with cfg.context():
        v = mp.pi ** (p // 2)
        return v * mp.sqrt(mp.pi) if p % 2 else +mp.mpf(v)


def _is_mpf(x) -> bool:
    return isinstance(x, mp.mpf)


def sqrt(x):
    if _is_mpf(x):
        if x < 0:
            raise DomainError(f"sqrt: argument {x} < 0")
        return mp.sqrt(x)
    return np.sqrt(x)


def exp(x):
    return mp.exp(x) if _is_mpf(x) else np.exp(x)


def log(x):
    if _is_mpf(x):
        if x <= 0:
            raise DomainError(f"log: argument {x} <= 0")
        return mp.log(x)
    return np.log(x)


def atan(x):
    return mp.atan(x) if _is_mpf(x) else np.arctan(x)


def acos(x):
    if _is_mpf(x):
        if abs(x) > 1:
            raise DomainError(f"acos: argument {x} outside [-1, 1]")
        return mp.acos(x)
    return np.arccos(x)


def cos(x):
    return mp.cos(x) if _is_mpf(x) else np.cos(x)


_ELEMENTARY = {
    "exp": exp,
    "sqrt": sqrt,
    "atan": atan,
    "acos": acos,
    "cos": cos,
    "log": log,
}


def elementary(fn: str, x: Real) -> Real:
    """Checked elementary function evaluation at working precision."""
    if fn not in _ELEMENTARY:
        raise UsageError(
            f"unknown elementary function {fn!r}; choose one of "
            f"{tuple(_ELEMENTARY)}"
        )
    if not _is_mpf(x):
        xf = float(x)
        if fn == "sqrt" and xf < 0:
            raise DomainError(f"sqrt: argument {xf} < 0")
        if fn == "log" and xf <= 0:
            raise DomainError(f"log: argument {xf} <= 0")
        if fn == "acos" and abs(xf) > 1:
            raise DomainError(f"acos: argument {xf} outside [-1, 1]")
    return _ELEMENTARY[fn](x)


def pi_like(x):
    """pi at the precision implied by the operand type."""
    return +mp.pi if _is_mpf(x) else math.pi


def sqrt_pi_like(x):
    """sqrt(pi) at the precision implied by the operand type."""
    return mp.sqrt(mp.pi) if _is_mpf(x) else math.sqrt(math.pi)


def ulp(x: Real, cfg: PrecisionConfig) -> float:
    """Magnitude of one unit in the last working digit of x."""
    if cfg.fast_mode:
        return math.ulp(float(x)) if x else math.ulp(0.0)
    ax = abs(x)
    if ax == 0:
        return 10.0 ** (-cfg.working_digits)
    return float(ax) * 10.0 ** (1 - cfg.working_digits)


def pairwise_sum(values):
    """Deterministic pairwise sum of a sequence (index-pair reduction)."""
    v = list(values)
    if not v:
        return 0.0
    while len(v) > 1:
        nxt = [v[i] + v[i + 1] for i in range(0, len(v) - 1, 2)]
        if len(v) % 2:
            nxt.append(v[-1])
        v = nxt
    return v[0]


def pairwise_last_axis(a: np.ndarray) -> np.ndarray:
    """Pairwise reduction over the last axis of an ndarray.

    The reduction tree depends only on the node index, never on values or
    thread count, so sums are bit-identical across runs.
    """
    n = a.shape[-1]
    while n > 1:
        m = n // 2
        s = a[..., 0 : 2 * m : 2] + a[..., 1 : 2 * m : 2]
        if n % 2:
            s = np.concatenate([s, a[..., -1:]], axis=-1)
        a = s
        n = a.shape[-1]
    return a[..., 0]


def format_real(x, cfg: PrecisionConfig) -> str:
    """Decimal string at full working precision (never binary-rounded)."""
    if isinstance(x, mp.mpf):
        return mp.nstr(x, cfg.working_digits, strip_zeros=False)
    return repr(float(x))


@dataclass(frozen=True)
class ExactConstant:
    """An exact value q * pi**(pi_half/2) with rational q.

    Precision-independent: ``value`` renders it at any configuration, so
    closed forms are never stored as rounded decimal literals.
    """

    coeff: Fraction
    pi_half: int = 0

    def value(self, cfg: PrecisionConfig) -> Real:
        # all arithmetic must run inside the precision context: mpf
        # operations round at whatever mp.dps is current
        with cfg.context():
            c = to_real(self.coeff, cfg)
            return c * pi_half_power(self.pi_half, cfg) if self.pi_half else c

    def __float__(self) -> float:
        return float(self.value(FAST))

    def text(self) -> str:
        num, den = self.coeff.numerator, self.coeff.denominator
        parts = {0: "", 1: "sqrt(pi)", 2: "pi", 3: "pi^(3/2)", 4: "pi^2",
                 5: "pi^(5/2)", 6: "pi^3"}
        pi_part = parts.get(self.pi_half, f"pi^({self.pi_half}/2)")
        if not pi_part:
            return f"{num}/{den}" if den != 1 else f"{num}"
        head = pi_part if num == 1 else f"{num}*{pi_part}"
        if num == -1:
            head = f"-{pi_part}"
        return head if den == 1 else f"{head}/{den}"


@contextmanager
def errstate_quiet():
    """Silence numpy warnings inside quadrature kernels; non-finite node
    values are detected and reported explicitly instead."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore",
                     under="ignore"):
        yield
