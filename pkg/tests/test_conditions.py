import numpy as np
import pytest

from app.geometry.builtins import EXAMPLE1_MARCHING, EXAMPLE2_MARCHING
from app.geometry.conditions import (
    ConditionEntry,
    check_conditions,
    check_isogeodesic,
    check_isoparametric,
    check_type_conditions,
)
from app.geometry.family import General, marching_from_strings
from app.utils.errors import MarchingHypothesisError, WrongVariant
from app.utils.expr import parse

from tests.random_scales import random_family


def _type_report(family, **kwargs):
    return check_type_conditions(family.marching, family.params, s_domain=family.curve.domain, **kwargs)


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
def test_builtins_are_isoparametric(name, request):
    residual = check_isoparametric(request.getfixturevalue(name))
    assert residual.max_residual <= 1e-12
    assert max(residual.max_abs_u, residual.max_abs_v, residual.max_abs_w, residual.max_abs_x) <= 1e-12


def test_isoparametric_residual_of_a_shifted_scale(ex1):
    zero = parse("0")
    shifted = ex1.with_marching(General(u=parse("t"), v=zero, w=zero, x=zero))
    residual = check_isoparametric(shifted, n_samples=9)
    assert residual.max_residual == pytest.approx(0.5)
    assert residual.max_abs_u == pytest.approx(0.5)


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
def test_builtins_are_isogeodesic(name, request):
    report = check_isogeodesic(request.getfixturevalue(name))
    assert report.passed, report.summary_line()
    assert report.kind == "isogeodesic"
    assert report.summary_line() == "isogeodesic: PASS"


@pytest.mark.parametrize(
    "name, failure",
    [
        ("example1_wx_equal", "phi2_nonzero"),
        ("example1_v_active", "phi3_zero"),
        ("example3_q0_zero", "phi2_nonzero"),
    ],
)
def test_mutations_are_not_isogeodesic(name, failure, mutations):
    report = check_isogeodesic(mutations[name])
    assert not report.passed
    assert failure in report.failures


def test_v_active_phi3_value(mutations):
    report = check_isogeodesic(mutations["example1_v_active"], n_samples=17)
    assert report.entry("phi3_zero").value == pytest.approx(1.0)


def test_zero_scales_fail_the_nonzero_condition(ex1):
    zero = parse("0")
    flat = ex1.with_marching(General(u=zero, v=zero, w=zero, x=zero))
    report = check_isogeodesic(flat, n_samples=9)
    assert report.failures == ["phi2_nonzero"]
    assert report.entry("isoparametric").value == 0.0


@pytest.mark.parametrize("name, kind", [("ex1", "I"), ("ex2", "II"), ("ex3", "III")])
def test_type_conditions_hold_for_builtins(name, kind, request):
    report = _type_report(request.getfixturevalue(name))
    assert report.kind == kind
    assert report.passed, [entry.describe() for entry in report.entries]


def test_type_entry_names(ex1, ex2, ex3):
    assert [e.name for e in _type_report(ex1, n_samples=5).entries] == [
        "U(t0,q0)",
        "V(t0,q0)",
        "W(t0,q0)",
        "X(t0,q0)",
        "V_t(t0,q0)",
        "V_q(t0,q0)",
        "V_t X_q - V_q X_t",
        "V_t W_q - V_q W_t",
        "W_t X_q - W_q X_t",
    ]
    assert [e.name for e in _type_report(ex2, n_samples=5).entries] == [
        "n(s,t0)W(q0)",
        "p(s,t0)X(q0)",
        "bracket_nonzero",
    ]
    assert [e.name for e in _type_report(ex3, n_samples=5).entries] == [
        "n(s,q0)W(t0)",
        "p(s,q0)X(t0)",
        "bracket_nonzero",
    ]


def test_type_bracket_tracks_phi2(ex2, ex3):
    report = _type_report(ex2, n_samples=9)
    for sample in report.samples:
        s = sample["s"]
        assert sample["bracket"] == pytest.approx(-(s + 1.5) * (s + 1.0), rel=1e-14)
    # the mirrored bracket is -phi2
    report = _type_report(ex3, n_samples=9)
    for sample in report.samples:
        s = sample["s"]
        assert sample["bracket"] == pytest.approx(s * s, rel=1e-14)


@pytest.mark.parametrize("name", ["example1_wx_equal", "example1_v_active", "example3_q0_zero"])
def test_type_conditions_fail_for_mutations(name, mutations):
    assert not _type_report(mutations[name]).passed


def test_general_scale_is_the_wrong_variant(ex1):
    zero = parse("0")
    with pytest.raises(WrongVariant):
        check_type_conditions(General(zero, zero, zero, zero), ex1.params, s_domain=(0.0, 1.0))


def test_vanishing_type_i_factor(ex1):
    marching = marching_from_strings("I", {**EXAMPLE1_MARCHING, "l": "s"})
    with pytest.raises(MarchingHypothesisError, match="l"):
        check_type_conditions(marching, ex1.params, s_domain=ex1.curve.domain)


def test_type_ii_preamble(ex2):
    marching = marching_from_strings("II", {**EXAMPLE2_MARCHING, "U": "q - q0 + 1"})
    with pytest.raises(MarchingHypothesisError, match="U"):
        check_type_conditions(marching, ex2.params, s_domain=ex2.curve.domain)


def test_tolerances_must_be_positive(ex1):
    with pytest.raises(ValueError):
        check_isogeodesic(ex1, eps_zero=0.0)
    with pytest.raises(ValueError):
        _type_report(ex1, eps_nonzero=-1.0)


def test_dispatcher(ex1):
    assert check_conditions(ex1, n_samples=9).kind == "I"
    assert check_conditions(ex1, n_samples=9, isogeodesic=True).kind == "isogeodesic"


def test_condition_entry_relations():
    assert ConditionEntry("a", 1e-12, 1e-9).passed
    assert not ConditionEntry("b", 1e-12, 1e-9, ">=").passed
    assert ConditionEntry("b", 2.0, 1e-9, ">=").describe().endswith("ok")


@pytest.mark.parametrize("kind", ["I", "II", "III"])
def test_type_checker_agrees_with_cofactor_check(kind):
    rng = np.random.default_rng({"I": 101, "II": 202, "III": 303}[kind])
    verdicts = []
    for _ in range(50):
        family = random_family(rng, kind)
        by_type = _type_report(family, n_samples=17).passed
        by_cofactors = check_isogeodesic(family, n_samples=17).passed
        assert by_type == by_cofactors, family.marching
        verdicts.append(by_type)
    # the generator covers both outcomes
    assert any(verdicts) and not all(verdicts)
