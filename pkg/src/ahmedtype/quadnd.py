"""Multidimensional integration over boxes: nested tanh-sinh, quasi-Monte
Carlo (Halton + Cranley-Patterson shifts) and plain Monte Carlo.

Nested integration applies the 1D tanh-sinh rule axis by axis, innermost
axis first, with an adaptive level ladder per axis; the reported error
estimate is the outermost level difference (a heuristic — cross-check with
the QMC/MC oracles for confidence).  The converged level of each inner
axis is cached and re-verified with one coarser level on later passes.

QMC and MC run in native float precision (their statistical error is far
above double roundoff) and are deterministic given the seed; the random
shifts and samples come from numpy's Philox counter-based generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from mpmath import mp

from .numeric import (
    DEFAULT,
    ConvergenceError,
    EvaluationError,
    PrecisionConfig,
    UsageError,
    errstate_quiet,
    pairwise_last_axis,
    pairwise_sum,
    to_real,
)
from .quad1d import MIN_LEVEL, QuadratureResult, _check_common, finite_nodes

NESTED_MAX_DIM = 4
HALTON_BASES = (2, 3, 5, 7, 11)
_LEAF_CHUNK_ELEMS = 1 << 23


@dataclass
class IntegrandND:
    """Real integrand of a k-vector, k <= 5, over a product of finite
    intervals (default unit box).  ``eval`` takes k broadcastable args."""

    eval: Callable
    dim: int
    domain: tuple | None = None
    vectorized: bool = True
    name: str = ""

    def __post_init__(self):
        if not 1 <= self.dim <= 5:
            raise UsageError(f"dim must be in 1..5, got {self.dim}")
        if self.domain is None:
            self.domain = tuple((0.0, 1.0) for _ in range(self.dim))
        if len(self.domain) != self.dim:
            raise UsageError("domain length must equal dim")


@dataclass
class MCEstimate:
    """Sampling estimate: ``std_error`` is std/sqrt(n) for plain MC and
    the standard deviation over randomized shifts for QMC."""

    mean: float
    std_error: float
    samples: int
    seed: int


def default_nested_tolerance(cfg: PrecisionConfig) -> float:
    return 1e-8 if cfg.fast_mode else 1e-20


# ---------------------------------------------------------------------------
# nested tanh-sinh


def _leaf_eval_fast(f: IntegrandND, grids: list, weights: np.ndarray,
                    counter: list) -> np.ndarray:
    """Evaluate f on the product grid and reduce the last axis.

    Chunks over the leading axis to bound memory; the reduction is the
    deterministic pairwise sum over the innermost node index.
    """
    shape = tuple(g.size for g in grids)
    ndim = len(grids)

    def view(i):
        sh = [1] * ndim
        sh[i] = -1
        return grids[i].reshape(sh)

    if ndim == 1:
        with errstate_quiet():
            vals = np.broadcast_to(np.asarray(f.eval(grids[0]), dtype=float),
                                   shape)
        counter[0] += vals.size
        _check_finite_nd(f, vals, grids)
        return pairwise_last_axis(vals * weights)

    out = np.empty(shape[:-1])
    inner = int(np.prod(shape[1:]))
    chunk = max(1, _LEAF_CHUNK_ELEMS // max(1, inner))
    views = [view(i) for i in range(ndim)]
    for i0 in range(0, shape[0], chunk):
        g0 = grids[0][i0 : i0 + chunk].reshape([-1] + [1] * (ndim - 1))
        blk_shape = (g0.size,) + shape[1:]
        with errstate_quiet():
            vals = np.broadcast_to(
                np.asarray(f.eval(g0, *views[1:]), dtype=float), blk_shape
            )
        counter[0] += vals.size
        _check_finite_nd(f, vals, grids, i0)
        out[i0 : i0 + chunk] = pairwise_last_axis(vals * weights)
    return out


def _check_finite_nd(f, vals, grids, offset0=0):
    if np.isfinite(vals).all():
        return
    idx = np.unravel_index(int(np.argmin(np.isfinite(vals))), vals.shape)
    point = tuple(
        float(grids[d][idx[d] + (offset0 if d == 0 else 0)])
        for d in range(len(grids))
    )
    raise EvaluationError(
        f"integrand {f.name or '<anonymous>'} returned a non-finite value "
        f"at {point}",
        node=point,
    )


def _nested_fast(f: IntegrandND, tol: float, max_level: int,
                 cfg: PrecisionConfig) -> QuadratureResult:
    cutoff = tol * 1e-2
    boxes = [(float(a), float(b)) for a, b in f.domain]
    locked: dict[int, int] = {}
    counter = [0]

    def reduce_axes(axis: int, outer: list) -> np.ndarray:
        a, b = boxes[axis]
        start = max(MIN_LEVEL, locked[axis] - 1) if axis in locked else MIN_LEVEL
        prev = None
        for level in range(start, max_level + 1):
            x, w = finite_nodes(level, a, b, cutoff, cfg)
            if axis == f.dim - 1:
                v = _leaf_eval_fast(f, outer + [x], w, counter)
            else:
                v = pairwise_last_axis(reduce_axes(axis + 1, outer + [x]) * w)
            if prev is not None and np.max(np.abs(v - prev)) <= tol:
                locked[axis] = level
                return v
            prev = v
        raise ConvergenceError(
            f"inner axis {axis} did not converge to {tol:g} within level "
            f"{max_level}",
            axis=axis,
        )

    a0, b0 = boxes[0]
    prev = None
    level_values = []
    floor_mult = 4.0 * cfg.eps
    for level in range(MIN_LEVEL, max_level + 1):
        x, w = finite_nodes(level, a0, b0, cutoff, cfg)
        if f.dim == 1:
            v = float(_leaf_eval_fast(f, [x], w, counter))
        else:
            v = float(pairwise_last_axis(reduce_axes(1, [x]) * w))
        level_values.append(v)
        if prev is not None:
            diff = abs(v - prev)
            est = max(diff, abs(v) * floor_mult)
            if est <= tol:
                return QuadratureResult(
                    value=v, error_estimate=est,
                    levels_used=level - MIN_LEVEL + 1,
                    evaluations=counter[0], converged=True,
                    level_values=tuple(level_values),
                )
        prev = v
    est = abs(v - level_values[-2]) if len(level_values) > 1 else abs(v)
    return QuadratureResult(
        value=v, error_estimate=max(est, abs(v) * floor_mult),
        levels_used=max_level - MIN_LEVEL + 1,
        evaluations=counter[0], converged=False,
        level_values=tuple(level_values),
    )


def _nested_mp(f: IntegrandND, tol, max_level: int,
               cfg: PrecisionConfig) -> QuadratureResult:
    cutoff = to_real(tol, cfg) / 100
    boxes = [(to_real(a, cfg), to_real(b, cfg)) for a, b in f.domain]
    locked: dict[int, int] = {}
    counter = [0]

    def point_eval(coords):
        counter[0] += 1
        try:
            v = f.eval(*coords)
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(
                f"integrand {f.name or '<anonymous>'} failed at "
                f"{tuple(mp.nstr(c, 17) for c in coords)}: {exc}",
                node=coords,
            ) from exc
        if not mp.isfinite(v):
            raise EvaluationError(
                f"integrand {f.name or '<anonymous>'} returned {v} at "
                f"{tuple(mp.nstr(c, 17) for c in coords)}",
                node=coords,
            )
        return v

    def reduce_axes(axis: int, coords: tuple):
        a, b = boxes[axis]
        start = max(MIN_LEVEL, locked[axis] - 1) if axis in locked else MIN_LEVEL
        prev = None
        for level in range(start, max_level + 1):
            xs, ws = finite_nodes(level, a, b, cutoff, cfg)
            if axis == f.dim - 1:
                terms = [w * point_eval(coords + (x,)) for x, w in zip(xs, ws)]
            else:
                terms = [
                    w * reduce_axes(axis + 1, coords + (x,))
                    for x, w in zip(xs, ws)
                ]
            v = pairwise_sum(terms)
            if prev is not None and abs(v - prev) <= tol:
                locked[axis] = level
                return v
            prev = v
        raise ConvergenceError(
            f"inner axis {axis} did not converge to {float(tol):g} within "
            f"level {max_level}",
            axis=axis,
        )

    with cfg.context():
        a0, b0 = boxes[0]
        prev = None
        level_values = []
        for level in range(MIN_LEVEL, max_level + 1):
            xs, ws = finite_nodes(level, a0, b0, cutoff, cfg)
            if f.dim == 1:
                terms = [w * point_eval((x,)) for x, w in zip(xs, ws)]
            else:
                terms = [w * reduce_axes(1, (x,)) for x, w in zip(xs, ws)]
            v = pairwise_sum(terms)
            level_values.append(v)
            if prev is not None:
                diff = abs(v - prev)
                est = max(diff, abs(v) * 4 * cfg.eps)
                if est <= tol:
                    return QuadratureResult(
                        value=v, error_estimate=est,
                        levels_used=level - MIN_LEVEL + 1,
                        evaluations=counter[0], converged=True,
                        level_values=tuple(level_values),
                    )
            prev = v
        est = abs(v - level_values[-2]) if len(level_values) > 1 else abs(v)
        return QuadratureResult(
            value=v, error_estimate=est,
            levels_used=max_level - MIN_LEVEL + 1,
            evaluations=counter[0], converged=False,
            level_values=tuple(level_values),
        )


def integrate_nested(
    f: IntegrandND,
    tol_inner=None,
    max_level: int = 10,
    cfg: PrecisionConfig = DEFAULT,
) -> QuadratureResult:
    """Iterated tanh-sinh over a box, innermost axis first.

    Every axis refines until its level difference drops below
    ``tol_inner``; an inner axis that exhausts ``max_level`` raises
    :class:`ConvergenceError` carrying the axis index.
    """
    if f.dim > NESTED_MAX_DIM:
        raise UsageError(
            f"nested integration supports dim <= {NESTED_MAX_DIM} "
            f"(got {f.dim}); use integrate_qmc for higher dimensions"
        )
    if tol_inner is None:
        tol_inner = default_nested_tolerance(cfg)
    _check_common(tol_inner, max_level, cfg)
    if cfg.fast_mode:
        return _nested_fast(f, float(tol_inner), max_level, cfg)
    return _nested_mp(f, tol_inner, max_level, cfg)


# ---------------------------------------------------------------------------
# quasi-Monte Carlo and Monte Carlo oracles


def halton_points(n: int, dim: int, skip: int = 1) -> np.ndarray:
    """First n Halton points in bases 2,3,5,7,11 (index starts at ``skip``)."""
    if dim > len(HALTON_BASES):
        raise UsageError(f"Halton set limited to dim <= {len(HALTON_BASES)}")
    idx = np.arange(skip, skip + n, dtype=np.int64)
    out = np.empty((n, dim))
    for d in range(dim):
        base = HALTON_BASES[d]
        i = idx.copy()
        r = np.zeros(n)
        fac = 1.0
        while i.max() > 0:
            fac /= base
            r += fac * (i % base)
            i //= base
        out[:, d] = r
    return out


def _eval_samples(f: IntegrandND, u: np.ndarray) -> np.ndarray:
    """Map unit-box samples to the integrand's box and evaluate."""
    cols = []
    vol = 1.0
    for d, (a, b) in enumerate(f.domain):
        a, b = float(a), float(b)
        cols.append(a + (b - a) * u[:, d])
        vol *= b - a
    with errstate_quiet():
        if f.vectorized:
            vals = np.asarray(f.eval(*cols), dtype=float)
            vals = np.broadcast_to(vals, (u.shape[0],))
        else:
            vals = np.array([float(f.eval(*p)) for p in zip(*cols)])
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.nonzero(bad)[0][0])
        raise EvaluationError(
            f"integrand {f.name or '<anonymous>'} returned a non-finite "
            f"value at {tuple(float(c[i]) for c in cols)}",
            node=tuple(float(c[i]) for c in cols),
        )
    return vals * vol


def integrate_qmc(
    f: IntegrandND,
    points: int = 1 << 14,
    shifts: int = 8,
    seed: int = 0,
) -> MCEstimate:
    """Randomized QMC: Halton points under per-axis Cranley-Patterson
    shifts drawn from a Philox counter-based generator keyed by ``seed``."""
    if points < 1 << 10:
        raise UsageError(f"points must be >= 1024, got {points}")
    if shifts < 4:
        raise UsageError(f"shifts must be >= 4, got {shifts}")
    base = halton_points(points, f.dim)
    rng = np.random.Generator(np.random.Philox(key=seed))
    offsets = rng.random((shifts, f.dim))
    means = np.empty(shifts)
    for s in range(shifts):
        u = base + offsets[s]
        u -= np.floor(u)
        vals = _eval_samples(f, u)
        means[s] = pairwise_last_axis(vals) / points
    mean = float(pairwise_last_axis(means) / shifts)
    std = float(np.sqrt(pairwise_last_axis((means - mean) ** 2) / (shifts - 1)))
    return MCEstimate(mean=mean, std_error=std, samples=points * shifts,
                      seed=seed)


def mc_estimate(
    f: IntegrandND,
    samples: int = 1_000_000,
    seed: int = 0,
) -> MCEstimate:
    """Plain Monte Carlo with numpy's Philox 4x64 counter-based generator;
    bit-identical results for identical (samples, seed)."""
    if samples < 1000:
        raise UsageError(f"samples must be >= 1000, got {samples}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    u = rng.random((samples, f.dim))
    vals = _eval_samples(f, u)
    mean = float(pairwise_last_axis(vals) / samples)
    var = float(pairwise_last_axis((vals - mean) ** 2) / (samples - 1))
    return MCEstimate(mean=mean, std_error=math.sqrt(var / samples),
                      samples=samples, seed=seed)
