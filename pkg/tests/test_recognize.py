import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from ahmedtype.numeric import PrecisionConfig, UsageError, constant
from ahmedtype.recognize import (
    RecognitionResult,
    find_integer_relation,
    recognize_rational_multiple,
)

HIGH = PrecisionConfig(50)


def _random_digits_value(rng) -> str:
    return "0." + "".join(str(rng.randint(0, 9)) for _ in range(30))


def test_identity_multiple():
    with HIGH.context():
        v = constant("pi_squared", HIGH)
    r = recognize_rational_multiple(v, "pi_squared", cfg=HIGH)
    assert (r.numerator, r.denominator) == (1, 1)
    assert r.confident


def test_companion_thirty_digits():
    with HIGH.context():
        v = constant("pi_squared", HIGH) / 30 + mp.mpf(10) ** -31
    r = recognize_rational_multiple(v, "pi_squared", value_digits=30, cfg=HIGH)
    assert (r.numerator, r.denominator) == (1, 30)
    assert r.confident
    assert r.matched_digits >= 25


def test_ahmed_thirty_digits():
    with HIGH.context():
        v = 5 * constant("pi_squared", HIGH) / 96 - mp.mpf(10) ** -31
    r = recognize_rational_multiple(v, "pi_squared", value_digits=30, cfg=HIGH)
    assert (r.numerator, r.denominator) == (5, 96)
    assert r.confident


def test_random_digits_not_recognized():
    rng = random.Random(4)
    v = _random_digits_value(rng)
    assert recognize_rational_multiple(v, "pi_squared", max_den=10**6,
                                       cfg=HIGH) is None
    # independent continued-fraction oracle: the best q <= 1e6 rational
    # approximation of v/pi^2 reproduces far fewer than 30 digits
    with HIGH.context():
        ratio = mp.mpf(v) / constant("pi_squared", HIGH)
        best = Fraction(float(ratio)).limit_denominator(10**6)
        residual = abs(mp.mpf(v) - mp.mpf(best.numerator) / best.denominator
                       * constant("pi_squared", HIGH))
    assert float(residual) > 1e-16


def test_round_trip_500_random_rationals():
    rng = random.Random(5)
    with HIGH.context():
        basis = constant("pi_squared", HIGH)
        for _ in range(500):
            q = rng.randint(1, 1000)
            p = rng.randint(1, 5000)
            v = mp.mpf(p) / q * basis + rng.choice([-1, 1]) * mp.mpf(10) ** -41
            r = recognize_rational_multiple(v, "pi_squared", max_den=10**6,
                                            guard_digits=5, cfg=HIGH)
            frac = Fraction(p, q)
            assert r is not None
            assert (r.numerator, r.denominator) == (frac.numerator,
                                                    frac.denominator)


def test_no_false_confidence_500_random_values():
    rng = random.Random(6)
    for _ in range(500):
        v = _random_digits_value(rng)
        assert recognize_rational_multiple(v, "pi_squared", max_den=10**6,
                                           cfg=HIGH) is None


@given(p=st.integers(min_value=1, max_value=400),
       q=st.integers(min_value=1, max_value=400))
@settings(max_examples=50, deadline=None)
def test_round_trip_property(p, q):
    with HIGH.context():
        v = mp.mpf(p) / q * constant("pi_squared", HIGH)
    r = recognize_rational_multiple(v, "pi_squared", cfg=HIGH)
    frac = Fraction(p, q)
    assert (r.numerator, r.denominator) == (frac.numerator, frac.denominator)
    assert math.gcd(r.numerator, r.denominator) == 1


def test_fast_mode_recognizes_without_confidence():
    r = recognize_rational_multiple(math.pi**2 / 30, "pi_squared",
                                    cfg=PrecisionConfig(16, fast_mode=True))
    assert (r.numerator, r.denominator) == (1, 30)
    assert not r.confident  # 16 digits can't beat the coincidence guard


def test_max_den_validation():
    with pytest.raises(UsageError):
        recognize_rational_multiple(1.0, "pi_squared", max_den=0)


def test_unknown_basis():
    with pytest.raises(UsageError):
        recognize_rational_multiple(1.0, "pi_fourth", cfg=HIGH)


# ---------------------------------------------------------------------------
# integer relations


def test_relation_ahmed():
    with HIGH.context():
        a = 5 * constant("pi_squared", HIGH) / 96
        values = [a, constant("pi_squared", HIGH)]
    assert find_integer_relation(values, max_coeff=100, cfg=HIGH) == (96, -5)


def test_relation_companion():
    with HIGH.context():
        b = constant("pi_squared", HIGH) / 30
        values = [b, constant("pi_squared", HIGH)]
    assert find_integer_relation(values, max_coeff=100, cfg=HIGH) == (30, -1)


def test_relation_three_values():
    with HIGH.context():
        pi = constant("pi", HIGH)
        values = [pi, 2 * pi, 3 * pi]
    assert find_integer_relation(values, max_coeff=10, cfg=HIGH) == (1, 1, -1)


def test_no_relation_for_unrelated_values():
    with HIGH.context():
        e_like = mp.mpf("2.718281828459045235360287471352662497757247093699")
        values = [mp.mpf(1), e_like]
    assert find_integer_relation(values, max_coeff=100, cfg=HIGH) is None
    # brute-force oracle over the same range
    ef = 2.718281828459045235360287471352662497757247093699
    best = min(abs(c1 + c2 * ef)
               for c1 in range(-100, 101) for c2 in range(-100, 101)
               if (c1, c2) != (0, 0))
    assert best > 1e-3  # nowhere near the 1e-25 acceptance threshold


def test_relation_deterministic():
    with HIGH.context():
        values = [constant("pi_squared", HIGH) / 30,
                  constant("pi_squared", HIGH)]
    assert find_integer_relation(values, 60, cfg=HIGH) == \
        find_integer_relation(values, 60, cfg=HIGH)


def test_relation_preconditions():
    with pytest.raises(UsageError):
        find_integer_relation([1.0], max_coeff=10, cfg=HIGH)
    with pytest.raises(UsageError):
        find_integer_relation([1.0] * 5, max_coeff=10, cfg=HIGH)
    with pytest.raises(UsageError):
        find_integer_relation([1.0, 2.0], max_coeff=501, cfg=HIGH)


def test_result_invariants():
    with HIGH.context():
        v = 6 * constant("pi_squared", HIGH) / 8  # reduces to 3/4
    r = recognize_rational_multiple(v, "pi_squared", cfg=HIGH)
    assert (r.numerator, r.denominator) == (3, 4)
    assert r.denominator > 0
    assert isinstance(r, RecognitionResult)
