import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from ahmedtype import numeric
from ahmedtype.numeric import (
    FAST,
    DomainError,
    ExactConstant,
    PrecisionConfig,
    UsageError,
    constant,
    elementary,
    pairwise_last_axis,
    pairwise_sum,
    to_real,
    ulp,
)

# atan(sqrt(2)) computed by the Decimal bisection oracle below (frozen);
# regenerate with `_atan_sqrt2_oracle()` if the representation changes
ATAN_SQRT2 = "0.955316618124509278163857102515757754243414"


def _atan_sqrt2_oracle(digits: int = 42) -> str:
    """Bisection for tan(t) = sqrt(2) with sin/cos Taylor series in
    Decimal: independent of mpmath and of this package's atan."""
    getcontext().prec = digits + 6

    def sin_cos(t):
        s, c = t, Decimal(1)
        term, tc = t, Decimal(1)
        t2 = t * t
        k = 0
        while True:
            tc = -tc * t2 / ((2 * k + 1) * (2 * k + 2))
            c += tc
            term = -term * t2 / ((2 * k + 2) * (2 * k + 3))
            s += term
            k += 1
            if abs(term) < Decimal(10) ** -(digits + 4) and \
                    abs(tc) < Decimal(10) ** -(digits + 4):
                return s, c

    root2 = Decimal(2)
    guess = Decimal("1.4142135623730951")
    for _ in range(8):
        guess = (guess + root2 / guess) / 2
    lo, hi = Decimal("0.9"), Decimal("1.0")
    for _ in range(int(digits * 3.4) + 10):
        mid = (lo + hi) / 2
        s, c = sin_cos(mid)
        if s / c < guess:
            lo = mid
        else:
            hi = mid
    return str((lo + hi) / 2)[: digits + 2]


def test_frozen_oracle_regenerates():
    assert _atan_sqrt2_oracle(42) == ATAN_SQRT2


def test_constant_pi_fast():
    assert constant("pi", FAST) == 3.141592653589793


def test_constant_pi_50_digits(high_cfg):
    v = constant("pi", high_cfg)
    assert mp.nstr(v, 30) == "3.14159265358979323846264338328"


@pytest.mark.parametrize("cfg", [FAST, PrecisionConfig(50)])
def test_pi_squared_definitional(cfg):
    with cfg.context():
        direct = constant("pi", cfg) * constant("pi", cfg)
        diff = abs(constant("pi_squared", cfg) - direct)
    assert float(diff) <= 2 * ulp(direct, cfg)


def test_unknown_constant():
    with pytest.raises(UsageError):
        constant("tau", FAST)


def test_atan_one_is_quarter_pi(high_cfg):
    with high_cfg.context():
        diff = abs(elementary("atan", to_real(1, high_cfg))
                   - constant("pi", high_cfg) / 4)
    assert float(diff) <= 2 * ulp(constant("pi", high_cfg), high_cfg)


def test_exp_zero():
    assert elementary("exp", 0.0) == 1.0
    with PrecisionConfig(50).context():
        assert elementary("exp", mp.mpf(0)) == 1


def test_atan_sqrt2_against_oracle(high_cfg):
    with high_cfg.context():
        v = elementary("atan", elementary("sqrt", to_real(2, high_cfg)))
        diff = abs(v - mp.mpf(ATAN_SQRT2))
    assert float(diff) < 1e-41
    # 16-digit rounding of the oracle value
    assert math.isclose(float(v), 0.9553166181245093, rel_tol=0, abs_tol=1e-16)


@pytest.mark.parametrize("fn,arg", [
    ("sqrt", -1.0),
    ("log", 0.0),
    ("acos", 1.5),
    ("acos", -1.0001),
])
def test_elementary_domain_errors(fn, arg):
    with pytest.raises(DomainError):
        elementary(fn, arg)
    with PrecisionConfig(50).context():
        with pytest.raises(DomainError):
            elementary(fn, mp.mpf(arg))


def test_unknown_elementary():
    with pytest.raises(UsageError):
        elementary("sinh", 1.0)


def test_exp_log_roundtrip_1000(high_cfg):
    rng = random.Random(0)
    with high_cfg.context():
        for _ in range(1000):
            x = mp.mpf(rng.uniform(-10, 10))
            direct = elementary("exp", x)
            roundtrip = elementary("exp", elementary("log", direct))
            assert abs(roundtrip - direct) <= 4 * ulp(direct, high_cfg)


def test_atan_reciprocal_identity_1000(high_cfg):
    rng = random.Random(1)
    with high_cfg.context():
        half_pi = constant("pi", high_cfg) / 2
        for _ in range(1000):
            x = mp.mpf(rng.uniform(1e-3, 1e3))
            total = elementary("atan", x) + elementary("atan", 1 / x)
            assert abs(total - half_pi) <= 4 * ulp(half_pi, high_cfg)


@given(x=st.floats(min_value=1e-3, max_value=1e3))
def test_atan_reciprocal_identity_fast(x):
    total = elementary("atan", x) + elementary("atan", 1.0 / x)
    assert abs(total - math.pi / 2) <= 4 * math.ulp(math.pi / 2)


def test_determinism_bit_identical(high_cfg):
    with high_cfg.context():
        x = mp.mpf("1.2345678901234567890123456789")
        first = [elementary(fn, x) for fn in ("exp", "sqrt", "atan", "cos")]
        second = [elementary(fn, x) for fn in ("exp", "sqrt", "atan", "cos")]
    assert all(a == b for a, b in zip(first, second))
    assert [mp.nstr(a, 50) for a in first] == [mp.nstr(b, 50) for b in second]


def test_precision_config_validation():
    with pytest.raises(UsageError):
        PrecisionConfig(10)
    with pytest.raises(UsageError):
        PrecisionConfig(50, fast_mode=True)
    assert PrecisionConfig(16, fast_mode=True).dps == 16


def test_to_real_conversions(high_cfg):
    assert to_real(Fraction(1, 3), FAST) == 1 / 3
    with high_cfg.context():
        third = to_real(Fraction(1, 3), high_cfg)
        assert abs(third * 3 - 1) < mp.mpf(10) ** -49
        assert to_real("0.1", high_cfg) == mp.mpf("0.1")


def test_pairwise_sum_matches_fsum():
    rng = np.random.default_rng(2)
    vals = rng.standard_normal(1001)
    assert math.isclose(pairwise_sum(list(vals)), math.fsum(vals),
                        rel_tol=1e-13, abs_tol=1e-13)
    assert math.isclose(float(pairwise_last_axis(vals)), math.fsum(vals),
                        rel_tol=1e-13, abs_tol=1e-13)


def test_pairwise_last_axis_shape():
    a = np.arange(24.0).reshape(2, 3, 4)
    out = pairwise_last_axis(a)
    assert out.shape == (2, 3)
    assert np.allclose(out, a.sum(axis=-1))


@given(n=st.integers(min_value=1, max_value=257))
@settings(max_examples=40)
def test_pairwise_reduction_any_length(n):
    vals = np.ones(n)
    assert pairwise_last_axis(vals) == n
    assert pairwise_sum([1.0] * n) == n


def test_exact_constant_renders():
    five_pi2_96 = ExactConstant(Fraction(5, 96), pi_half=4)
    assert five_pi2_96.text() == "5*pi^2/96"
    assert math.isclose(float(five_pi2_96), 5 * math.pi**2 / 96)
    with PrecisionConfig(50).context():
        v = five_pi2_96.value(PrecisionConfig(50))
        assert abs(v - 5 * mp.pi**2 / 96) < mp.mpf(10) ** -49
    assert ExactConstant(Fraction(1, 32), pi_half=5).text() == "pi^(5/2)/32"
    assert ExactConstant(Fraction(120)).text() == "120"
    assert ExactConstant(Fraction(15, 12), pi_half=1).text() == "5*sqrt(pi)/4"
