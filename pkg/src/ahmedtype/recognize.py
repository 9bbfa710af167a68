"""Recognition of exact closed forms from high-precision decimals.

Two recognizers cover every constant this package produces: a
continued-fraction search for a single rational multiple of a basis
constant (the arctan integrals are all p/q * pi^2), and an exhaustive
small integer-relation search over a basket of 2..4 values.  Confidence
is measured in matched digits in excess of what coincidence could supply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from .numeric import DEFAULT, PrecisionConfig, Real, UsageError, constant, to_real

DEFAULT_GUARD_DIGITS = 5
RELATION_RESIDUAL_DIGITS = 25


@dataclass(frozen=True)
class RecognitionResult:
    """A candidate exact form (numerator/denominator) * basis."""

    numerator: int
    denominator: int
    basis_id: str
    matched_digits: int
    residual: Real
    confident: bool


def _convergents(ratio, max_den: int, max_terms: int):
    """Continued-fraction convergents (p, q) of ratio with q <= max_den."""
    sign = 1
    if ratio < 0:
        sign = -1
        ratio = -ratio
    a = int(mp.floor(ratio))
    frac = ratio - a
    p_prev, q_prev = 1, 0
    p, q = a, 1
    out = [(sign * p, q)]
    for _ in range(max_terms):
        if frac == 0:
            break
        frac = 1 / frac
        a = int(mp.floor(frac))
        frac -= a
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        if q > max_den:
            break
        out.append((sign * p, q))
    return out


def recognize_rational_multiple(
    value: Real,
    basis_id: str,
    max_den: int = 10**6,
    guard_digits: int = DEFAULT_GUARD_DIGITS,
    value_digits: int | None = None,
    cfg: PrecisionConfig = DEFAULT,
) -> RecognitionResult | None:
    """Find p/q with q <= max_den such that value ~ (p/q) * basis.

    ``value_digits`` is the number of trustworthy digits carried by
    ``value`` (default: working_digits - 10, matching the default
    quadrature tolerance); a convergent is accepted when it reproduces
    the value to within 10^-(value_digits - guard_digits).  Returns the
    first (smallest-denominator) accepted convergent, or None.
    """
    if max_den < 1:
        raise UsageError(f"max_den must be >= 1, got {max_den}")
    if value_digits is None:
        # default quadrature tolerance leaves working_digits - 10 digits;
        # fast mode computes to ~3e-11
        value_digits = 11 if cfg.fast_mode else cfg.working_digits - 10
    with cfg.context():
        v = to_real(value, cfg)
        basis = constant(basis_id, cfg)
        ratio = v / basis
        bound = mp.mpf(10) ** -(value_digits - guard_digits) if not cfg.fast_mode \
            else 10.0 ** -(value_digits - guard_digits)
        for p, q in _convergents(ratio, max_den, 4 * cfg.dps):
            residual = abs(v - to_real(Fraction(p, q), cfg) * basis)
            if residual <= bound:
                frac = Fraction(p, q)
                if residual == 0:
                    matched = value_digits
                else:
                    matched = int(math.floor(-mp.log10(residual))) if not cfg.fast_mode \
                        else int(math.floor(-math.log10(float(residual))))
                matched = max(0, min(matched, value_digits))
                confident = (
                    matched >= value_digits - guard_digits
                    and q <= max_den
                    and matched >= math.log10(float(max_den) ** 2) + 10
                )
                return RecognitionResult(
                    numerator=frac.numerator,
                    denominator=frac.denominator,
                    basis_id=basis_id,
                    matched_digits=matched,
                    residual=residual,
                    confident=bool(confident),
                )
    return None


def _shell_vectors(m: int, length: int) -> np.ndarray:
    """Integer vectors with max|c_i| = m, in lexicographic order."""
    if length == 1:
        return np.array([[-m], [m]], dtype=np.int64)
    full = np.arange(-m, m + 1, dtype=np.int64)
    blocks = []
    for c0 in full:
        if abs(c0) == m:
            rest = np.stack(
                np.meshgrid(*([full] * (length - 1)), indexing="ij"), axis=-1
            ).reshape(-1, length - 1)
        else:
            rest = _shell_vectors(m, length - 1)
        head = np.full((rest.shape[0], 1), c0, dtype=np.int64)
        blocks.append(np.hstack([head, rest]))
    return np.vstack(blocks)


def find_integer_relation(
    values,
    max_coeff: int = 100,
    cfg: PrecisionConfig = DEFAULT,
) -> tuple | None:
    """Exhaustive integer-relation search: smallest max-norm shell first,
    lexicographic within a shell; gcd 1 and first nonzero coefficient
    positive.  A candidate passes when |sum c_i v_i| <= 10^-25 * max|v_i|
    and the bound still holds re-evaluated with 10 extra digits.

    Values should carry at least 30 trustworthy digits.  Cost grows as
    (2*max_coeff+1)^len, so keep the basket and bound small.
    """
    n = len(values)
    if not 2 <= n <= 4:
        raise UsageError(f"relation search supports 2..4 values, got {n}")
    if not 1 <= max_coeff <= 500:
        raise UsageError(f"max_coeff must be in 1..500, got {max_coeff}")
    with cfg.context():
        vals = [to_real(v, cfg) for v in values]
        scale = max(abs(v) for v in vals)
        threshold = scale * mp.mpf(10) ** -RELATION_RESIDUAL_DIGITS
        floats = np.array([float(v) for v in vals])
        # float prescreen: anything satisfying the exact bound lands far
        # below this, so no true relation is ever screened out
        loose = float(scale) * 1e-9
        for m in range(1, max_coeff + 1):
            shell = _shell_vectors(m, n)
            dots = shell @ floats
            for i in np.nonzero(np.abs(dots) <= loose * m)[0]:
                c = shell[i]
                g = int(np.gcd.reduce(np.abs(c)))
                if g != 1:
                    continue
                first = c[np.nonzero(c)[0][0]]
                if first < 0:
                    continue
                total = mp.mpf(0)
                for ci, vi in zip(c, vals):
                    total += int(ci) * vi
                if abs(total) <= threshold:
                    with mp.workdps(cfg.dps + 10):
                        refined = mp.fsum(int(ci) * vi for ci, vi in zip(c, vals))
                        if abs(refined) <= threshold:
                            return tuple(int(ci) for ci in c)
    return None
