import math

import numpy as np
import pytest

from app.geometry.conditions import check_isogeodesic
from app.geometry.validator import (
    REASONS,
    Thresholds,
    anchor_grid,
    sweep_anchor,
    sweep_table,
    tangent_space_basis,
    validate,
)
from app.utils.errors import SingularTangentSpace
from app.utils.linalg4 import Vec4, dot

from tests.random_scales import random_family


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
def test_builtins_pass(name, request):
    report = validate(request.getfixturevalue(name))
    assert report.passed, report.summary_line()
    assert report.n_samples == 257
    assert report.max_collinearity_defect <= 1e-9
    assert report.max_tangential_accel <= 1e-9
    assert report.max_isoparam_residual <= 1e-9


@pytest.mark.parametrize(
    "name, reason",
    [
        ("example1_wx_equal", "phi2_zero"),
        ("example1_v_active", "phi3_nonzero"),
        ("example3_q0_zero", "singular_tangent_space"),
    ],
)
def test_mutations_fail(name, reason, mutations):
    for n_samples in (17, 257):
        report = validate(mutations[name], n_samples=n_samples)
        assert report.verdict == "fail"
        assert reason in report.reasons
        assert set(report.reasons) <= set(REASONS)


def test_v_active_collinearity_defect(mutations):
    report = validate(mutations["example1_v_active"], n_samples=17)
    assert report.max_collinearity_defect == pytest.approx(1.0 - 1.0 / math.sqrt(2.0), abs=1e-9)
    assert "collinearity" in report.reasons
    assert "tangential_acceleration" in report.reasons


def test_collinearity_and_tangential_acceleration_move_together(ex1, ex2, ex3, mutations):
    for family in (ex1, ex2, ex3, *mutations.values()):
        report = validate(family, n_samples=33)
        assert (report.max_collinearity_defect <= 1e-8) == (report.max_tangential_accel <= 1e-8), family.name


def test_verdict_matches_cofactor_check_on_builtins(ex1, ex2, ex3, mutations):
    for family in (ex1, ex2, ex3, *mutations.values()):
        assert validate(family, n_samples=65).passed == check_isogeodesic(family, n_samples=65).passed


@pytest.mark.parametrize("kind", ["I", "II", "III"])
def test_verdict_matches_cofactor_check_on_random_scales(kind):
    rng = np.random.default_rng({"I": 11, "II": 22, "III": 33}[kind])
    for _ in range(20):
        family = random_family(rng, kind)
        assert validate(family, n_samples=17).passed == check_isogeodesic(family, n_samples=17).passed


def test_report_rows_and_dict(ex1):
    report = validate(ex1, n_samples=9)
    rows = report.rows()
    assert len(rows) == 10
    assert rows[-1][0] == "summary"
    assert rows[-1][-1] == "pass"
    assert all(row[-1] == "ok" for row in rows[:-1])
    table = report.table()
    assert table.header[0] == "s"
    assert len(table.header) == len(rows[0])
    data = report.to_dict()
    assert data["verdict"] == "pass"
    assert data["reasons"] == []
    assert report.summary_line().startswith("example1: PASS n=9")


def test_failed_summary_row_lists_reasons(mutations):
    report = validate(mutations["example1_wx_equal"], n_samples=5)
    assert report.rows()[-1][-1].startswith("fail:")
    assert "reasons=" in report.summary_line()


def test_sweep_example1_passes_everywhere(ex1):
    anchors = anchor_grid([0.0, 0.5, 1.0], [0.0, 0.5, 1.0])
    assert anchors[:3] == [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0)]
    rows = sweep_anchor(ex1, anchors, n_samples=17)
    assert len(rows) == 9
    assert all(row.passed for row in rows)


def test_sweep_example3_fails_only_at_q0_zero(ex3):
    rows = sweep_anchor(ex3, anchor_grid([1.0], [0.0, 0.5, 1.0]), n_samples=17)
    assert [row.passed for row in rows] == [False, True, True]
    table = sweep_table(rows)
    assert [row[2] for row in table.rows] == ["fail", "pass", "pass"]
    assert table.header[:3] == ("t0", "q0", "verdict")


def test_empty_sweep(ex1):
    assert sweep_anchor(ex1, []) == []
    assert sweep_table([]).rows == []


def test_tangent_space_basis_is_orthonormal():
    p_s = Vec4(1.0, 0.2, 0.0, 0.0)
    p_t = Vec4(0.3, 1.0, 0.5, 0.0)
    p_q = Vec4(0.0, 0.1, 1.0, 2.0)
    basis = tangent_space_basis(p_s, p_t, p_q)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            assert dot(a, b) == pytest.approx(1.0 if i == j else 0.0, abs=1e-14)


def test_tangent_space_basis_rejects_dependent_partials():
    e1, e2 = Vec4.basis(1), Vec4.basis(2)
    with pytest.raises(SingularTangentSpace):
        tangent_space_basis(e1, e2, e2)
    with pytest.raises(SingularTangentSpace):
        tangent_space_basis(e1, e2, Vec4.zero())


def test_thresholds_must_be_positive():
    with pytest.raises(ValueError):
        Thresholds(eps_zero=0.0)
    with pytest.raises(ValueError):
        Thresholds(collinearity=math.nan)


def test_tight_thresholds_turn_a_pass_into_a_fail(ex1):
    report = validate(ex1, n_samples=9, thresholds=Thresholds(eps_nonzero=10.0))
    assert report.reasons == ("phi2_zero",)
