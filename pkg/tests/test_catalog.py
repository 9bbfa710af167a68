import math

import pytest
from mpmath import mp

from ahmedtype import catalog
from ahmedtype.catalog import (
    UnknownIdentityError,
    list_ids,
    lookup,
    verify_identity,
)
from ahmedtype.numeric import FAST, PrecisionConfig, UsageError

HIGH = PrecisionConfig(50)

MINIMUM_IDS = (
    ["gauss_half", "arctan_unit", "ahmed", "pain_b", "coxeter"]
    + [f"stage_{s}" for s in range(5)]
    + [f"power_identity_{n}" for n in range(2, 7)]
)


def test_registry_contains_minimum():
    ids = list_ids()
    for eid in MINIMUM_IDS:
        assert eid in ids


def test_ids_unique_and_ordered():
    ids = list_ids()
    assert len(ids) == len(set(ids))
    assert ids[0] == "gauss_half"


def test_lookup_known():
    entry = lookup("ahmed")
    assert entry.closed_form.text() == "5*pi^2/96"
    assert entry.provenance == "paper"
    assert lookup("pain_b").closed_form.text() == "pi^2/30"


def test_lookup_unknown():
    with pytest.raises(UnknownIdentityError):
        lookup("nope")
    assert issubclass(UnknownIdentityError, UsageError)
    assert issubclass(UnknownIdentityError, KeyError)


def test_closed_forms_render_at_any_precision():
    entry = lookup("pain_b")
    v25 = entry.closed_form.value(PrecisionConfig(25))
    v50 = entry.closed_form.value(HIGH)
    assert mp.nstr(v50, 20) == mp.nstr(v25, 20)


@pytest.mark.parametrize("eid", [e for e in MINIMUM_IDS if e != "coxeter"]
                         + ["poly_cube", "exp_decay", "gauss_moment_4"])
def test_every_paper_and_trivial_entry_passes_fast(eid):
    check = verify_identity(eid, FAST, seed=0)
    assert check.passed, f"{eid}: err={check.abs_error} note={check.note}"


@pytest.mark.parametrize("eid", ["ahmed", "pain_b"])
def test_digits_matched_at_50(eid):
    check = verify_identity(eid, HIGH)
    assert check.passed
    assert check.digits_matched >= 25


def test_gauss_half_passes_both_modes():
    assert verify_identity("gauss_half", FAST).passed
    assert verify_identity("gauss_half", HIGH).passed


def test_arctan_unit_value():
    check = verify_identity("arctan_unit", FAST)
    assert check.passed
    assert abs(float(check.computed) - math.pi / 4) < 1e-12


def test_coxeter_recognition_attached():
    check = verify_identity("coxeter", HIGH)
    assert check.passed is None  # recognition-only entry
    rec = check.recognition
    assert rec is not None
    assert rec.confident
    assert rec.denominator <= 1000
    assert rec.matched_digits >= 25


def test_coxeter_fast_recognizes_without_confidence():
    check = verify_identity("coxeter", FAST)
    assert check.passed is None
    assert check.recognition is not None
    assert not check.recognition.confident


def test_power_identity_6_uses_sigma_rule():
    check = verify_identity("power_identity_6", FAST, seed=0)
    assert check.passed
    assert "3*std_error" in check.note
    assert float(check.abs_error) <= float(check.error_estimate)


def test_verify_unknown_raises():
    with pytest.raises(UnknownIdentityError):
        verify_identity("bogus", FAST)


def test_check_metadata_populated():
    check = verify_identity("ahmed", FAST)
    assert check.evaluations > 0
    assert check.wall_ms >= 0
    assert check.method == "tanh-sinh"
    semi = verify_identity("exp_decay", FAST)
    assert semi.method == "exp-sinh"
