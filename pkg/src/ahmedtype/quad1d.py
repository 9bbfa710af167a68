"""Double-exponential quadrature on finite and semi-infinite intervals.

Finite intervals use the tanh-sinh substitution x = tanh((pi/2) sinh t);
[a, inf) uses the exp-sinh substitution x = a + exp((pi/2) sinh t).  Both
give doubly-exponential convergence for analytic integrands and tolerate
endpoint singularities through the node clustering.

Levels halve the step (h = 2**-L); the error estimate is the difference of
the last two refinement levels (floored at the summation roundoff).  Node
tables are generated on the fly and cached per (level, precision).  Sums
always use a fixed pairwise reduction over the node index so results are
bit-identical regardless of evaluation order or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from mpmath import mp

from .numeric import (
    DEFAULT,
    EvaluationError,
    PrecisionConfig,
    Real,
    UsageError,
    errstate_quiet,
    pairwise_last_axis,
    pairwise_sum,
    to_real,
)

MIN_LEVEL = 2
DEFAULT_MAX_LEVEL = 12


@dataclass(frozen=True)
class Finite:
    """Endpoints may be numbers or ExactConstant (rendered per run
    precision, e.g. an exact pi/2 upper limit)."""

    a: object
    b: object

    def __post_init__(self):
        if not float(self.a) < float(self.b):
            raise UsageError(f"finite domain requires a < b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class SemiInfinite:
    a: float = 0.0


@dataclass
class Integrand1D:
    """A real integrand of one working-precision variable.

    ``vectorized`` marks callables that accept numpy arrays (fast mode
    evaluates whole node sets at once); scalar-only callables are looped.
    """

    eval: Callable
    domain: Finite | SemiInfinite
    vectorized: bool = True
    name: str = ""


@dataclass
class QuadratureResult:
    value: Real
    error_estimate: Real
    levels_used: int
    evaluations: int
    converged: bool
    level_values: tuple = field(default_factory=tuple, repr=False)


def default_tolerance(cfg: PrecisionConfig) -> float:
    """Tightest tolerance comfortably above the precision floor."""
    if cfg.fast_mode:
        return 3e-11
    return 10.0 ** (-(cfg.working_digits - 10))


def _check_common(tol, max_level, cfg):
    if max_level < 3:
        raise UsageError(f"max_level must be >= 3, got {max_level}")
    floor = 10.0 ** (-(cfg.dps - 5))
    if not float(tol) > floor:
        raise UsageError(
            f"tolerance {float(tol):g} at or below the precision floor "
            f"{floor:g} for {cfg.dps} digits"
        )


# ---------------------------------------------------------------------------
# node tables
#
# tanh-sinh tables store, for k >= 0 at step h = 2**-L:
#   g1[k] = 1 - tanh((pi/2) sinh(k h))   (distance to the endpoint, stable)
#   w[k]  = h (pi/2) cosh(k h) / cosh((pi/2) sinh(k h))**2
# exp-sinh tables store e**((pi/2) sinh(k h)) and the matching weight for
# negative and positive k separately.

_TS_CACHE: dict = {}
_ES_CACHE: dict = {}


def _cache_key(level: int, cfg: PrecisionConfig):
    return (level, "fast" if cfg.fast_mode else cfg.working_digits)


def _ts_table_fast(level: int):
    h = 2.0 ** -level
    tiny = 1e-24
    k = np.arange(0, int(math.ceil(6.0 / h)) + 1)
    t = k * h
    y = 0.5 * math.pi * np.sinh(t)
    with errstate_quiet():
        w = h * 0.5 * math.pi * np.cosh(t) / np.cosh(y) ** 2
    keep = np.nonzero(w >= tiny)[0]
    last = keep[-1] if keep.size else 0
    y, w = y[: last + 1], w[: last + 1]
    g1 = 2.0 / (np.exp(2.0 * y) + 1.0)
    return g1, w


def _ts_table_mp(level: int, dps: int):
    with mp.workdps(dps):
        h = mp.mpf(2) ** -level
        tiny = mp.mpf(10) ** (-(dps + 8))
        g1s, ws = [], []
        k = 0
        while True:
            t = k * h
            y = mp.pi / 2 * mp.sinh(t)
            w = h * mp.pi / 2 * mp.cosh(t) / mp.cosh(y) ** 2
            if k > 0 and w < tiny:
                break
            g1s.append(2 / (mp.exp(2 * y) + 1))
            ws.append(w)
            k += 1
        return g1s, ws


def _ts_table(level: int, cfg: PrecisionConfig):
    key = _cache_key(level, cfg)
    if key not in _TS_CACHE:
        if cfg.fast_mode:
            _TS_CACHE[key] = _ts_table_fast(level)
        else:
            _TS_CACHE[key] = _ts_table_mp(level, cfg.working_digits)
    return _TS_CACHE[key]


def _es_table_fast(level: int):
    h = 2.0 ** -level
    tiny = 1e-24
    x_max = 1e15
    # negative side (including k = 0): weights decay doubly exponentially
    k = np.arange(0, int(math.ceil(6.0 / h)) + 1)
    y = -0.5 * math.pi * np.sinh(k * h)
    ex = np.exp(y)
    w = h * 0.5 * math.pi * np.cosh(k * h) * ex
    keep = np.nonzero(w >= tiny)[0]
    last = keep[-1] if keep.size else 0
    ex_neg, w_neg = ex[: last + 1], w[: last + 1]
    # positive side: abscissa grows doubly exponentially, stop at x_max
    k = np.arange(1, int(math.ceil(6.0 / h)) + 1)
    y = 0.5 * math.pi * np.sinh(k * h)
    with errstate_quiet():
        ex = np.exp(y)
    inside = np.nonzero(ex <= x_max)[0]
    last = inside[-1] if inside.size else 0
    k, ex = k[: last + 1], ex[: last + 1]
    w_pos = h * 0.5 * math.pi * np.cosh(k * h) * ex
    return ex_neg, w_neg, ex, w_pos


def _es_table_mp(level: int, dps: int):
    with mp.workdps(dps):
        h = mp.mpf(2) ** -level
        tiny = mp.mpf(10) ** (-(dps + 8))
        x_max = mp.mpf(10) ** (dps + 20)
        ex_neg, w_neg = [], []
        k = 0
        while True:
            y = -mp.pi / 2 * mp.sinh(k * h)
            ex = mp.exp(y)
            w = h * mp.pi / 2 * mp.cosh(k * h) * ex
            if k > 0 and w < tiny:
                break
            ex_neg.append(ex)
            w_neg.append(w)
            k += 1
        ex_pos, w_pos = [], []
        k = 1
        while True:
            y = mp.pi / 2 * mp.sinh(k * h)
            ex = mp.exp(y)
            if ex > x_max:
                break
            ex_pos.append(ex)
            w_pos.append(h * mp.pi / 2 * mp.cosh(k * h) * ex)
            k += 1
        return ex_neg, w_neg, ex_pos, w_pos


def _es_table(level: int, cfg: PrecisionConfig):
    key = _cache_key(level, cfg)
    if key not in _ES_CACHE:
        if cfg.fast_mode:
            _ES_CACHE[key] = _es_table_fast(level)
        else:
            _ES_CACHE[key] = _es_table_mp(level, cfg.working_digits)
    return _ES_CACHE[key]


def finite_nodes(level: int, a, b, cutoff, cfg: PrecisionConfig):
    """Nodes and weights on [a, b] at the given level, in ascending-x
    order, truncated where the raw weight drops below ``cutoff``."""
    g1, w = _ts_table(level, cfg)
    if cfg.fast_mode:
        keep = np.nonzero(w >= cutoff)[0]
        last = keep[-1] if keep.size else 0
        g1, w = g1[: last + 1], w[: last + 1]
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        x = np.concatenate([a + half * g1[1:][::-1], [mid], b - half * g1[1:]])
        ww = np.concatenate([w[1:][::-1], w[:1], w[1:]]) * half
        return x, ww
    last = 0
    for i in range(len(w) - 1, -1, -1):
        if w[i] >= cutoff:
            last = i
            break
    g1, w = g1[: last + 1], w[: last + 1]
    half = (b - a) / 2
    mid = (a + b) / 2
    xs = [a + half * g for g in g1[:0:-1]] + [mid] + [b - half * g for g in g1[1:]]
    ws = [half * v for v in w[:0:-1]] + [half * w[0]] + [half * v for v in w[1:]]
    return xs, ws


def semi_infinite_nodes(level: int, a, cutoff, cfg: PrecisionConfig):
    """Nodes and weights on [a, inf) at the given level, ascending in x."""
    ex_neg, w_neg, ex_pos, w_pos = _es_table(level, cfg)
    if cfg.fast_mode:
        keep = np.nonzero(w_neg >= cutoff)[0]
        last = keep[-1] if keep.size else 0
        en, wn = ex_neg[: last + 1], w_neg[: last + 1]
        x = np.concatenate([a + en[::-1], a + ex_pos])
        ww = np.concatenate([wn[::-1], w_pos])
        return x, ww
    last = 0
    for i in range(len(w_neg) - 1, -1, -1):
        if w_neg[i] >= cutoff:
            last = i
            break
    en, wn = ex_neg[: last + 1], w_neg[: last + 1]
    xs = [a + e for e in en[::-1]] + [a + e for e in ex_pos]
    ws = list(wn[::-1]) + list(w_pos)
    return xs, ws


# ---------------------------------------------------------------------------
# drivers


def _eval_nodes_fast(f: Integrand1D, x: np.ndarray) -> np.ndarray:
    with errstate_quiet():
        if f.vectorized:
            vals = np.asarray(f.eval(x), dtype=float)
            vals = np.broadcast_to(vals, x.shape)
        else:
            vals = np.array([float(f.eval(xi)) for xi in x])
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.nonzero(bad)[0][0])
        raise EvaluationError(
            f"integrand {f.name or '<anonymous>'} returned a non-finite "
            f"value at node x={x[i]!r}",
            node=float(x[i]),
        )
    return vals


def _eval_nodes_mp(f: Integrand1D, xs) -> list:
    out = []
    for x in xs:
        try:
            v = f.eval(x)
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(
                f"integrand {f.name or '<anonymous>'} failed at node "
                f"x={mp.nstr(x, 17)}: {exc}",
                node=x,
            ) from exc
        if not mp.isfinite(v):
            raise EvaluationError(
                f"integrand {f.name or '<anonymous>'} returned {v} at node "
                f"x={mp.nstr(x, 17)}",
                node=x,
            )
        out.append(v)
    return out


def _run_levels(node_fn, f, tol, max_level, cfg):
    cutoff = float(tol) * 1e-2 if cfg.fast_mode else to_real(tol, cfg) / 100
    floor_mult = 4.0 * cfg.eps
    evaluations = 0
    prev = None
    level_values = []
    value = None
    diff = None
    with cfg.context():
        for level in range(MIN_LEVEL, max_level + 1):
            x, w = node_fn(level, cutoff)
            if cfg.fast_mode:
                vals = _eval_nodes_fast(f, x)
                evaluations += x.size
                value = float(pairwise_last_axis(vals * w))
            else:
                vals = _eval_nodes_mp(f, x)
                evaluations += len(x)
                value = pairwise_sum([v * wi for v, wi in zip(vals, w)])
            level_values.append(value)
            if prev is not None:
                diff = abs(value - prev)
                est = max(diff, abs(value) * floor_mult)
                if est <= tol:
                    return QuadratureResult(
                        value=value,
                        error_estimate=est,
                        levels_used=level - MIN_LEVEL + 1,
                        evaluations=evaluations,
                        converged=True,
                        level_values=tuple(level_values),
                    )
            prev = value
        est = max(diff, abs(value) * floor_mult) if diff is not None else abs(value)
        return QuadratureResult(
            value=value,
            error_estimate=est,
            levels_used=max_level - MIN_LEVEL + 1,
            evaluations=evaluations,
            converged=False,
            level_values=tuple(level_values),
        )


def integrate_finite(
    f: Integrand1D,
    tol=None,
    max_level: int = DEFAULT_MAX_LEVEL,
    cfg: PrecisionConfig = DEFAULT,
) -> QuadratureResult:
    """Tanh-sinh quadrature over a finite interval."""
    if not isinstance(f.domain, Finite):
        raise UsageError("integrate_finite requires a Finite domain")
    if tol is None:
        tol = default_tolerance(cfg)
    _check_common(tol, max_level, cfg)
    a = to_real(f.domain.a, cfg)
    b = to_real(f.domain.b, cfg)
    return _run_levels(
        lambda level, cutoff: finite_nodes(level, a, b, cutoff, cfg),
        f, tol, max_level, cfg,
    )


def integrate_semi_infinite(
    f: Integrand1D,
    tol=None,
    max_level: int = DEFAULT_MAX_LEVEL,
    cfg: PrecisionConfig = DEFAULT,
) -> QuadratureResult:
    """Exp-sinh quadrature over [a, inf).

    The integrand must decay fast enough at infinity for the transformed
    sum to converge (not checked); the positive tail is truncated at a
    fixed per-precision abscissa bound.
    """
    if not isinstance(f.domain, SemiInfinite):
        raise UsageError("integrate_semi_infinite requires a SemiInfinite domain")
    if tol is None:
        tol = default_tolerance(cfg)
    _check_common(tol, max_level, cfg)
    a = to_real(f.domain.a, cfg)
    return _run_levels(
        lambda level, cutoff: semi_infinite_nodes(level, a, cutoff, cfg),
        f, tol, max_level, cfg,
    )


def integrate(
    f: Integrand1D,
    tol=None,
    max_level: int = DEFAULT_MAX_LEVEL,
    cfg: PrecisionConfig = DEFAULT,
) -> QuadratureResult:
    """Route to the finite or semi-infinite driver by domain type."""
    if isinstance(f.domain, Finite):
        return integrate_finite(f, tol, max_level, cfg)
    return integrate_semi_infinite(f, tol, max_level, cfg)
