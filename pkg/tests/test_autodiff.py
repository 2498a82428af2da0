import math

import numpy as np
import pytest

from app.utils.autodiff import Grad3, Jet4
from app.utils.errors import DomainError
from app.utils.expr import eval_grad3, eval_jet_s, evaluate, parse

# Smooth on s in [-1, 1].
SMOOTH = [
    "sin(s)*exp(s/3)",
    "log(s + 2)",
    "sqrt(s + 3)",
    "(s + 2)^2.5",
    "tan(s/2)",
    "s^3 - 2*s^2 + 1/(s + 4)",
    "cos(s^2)*0.5*s",
]

H = 1e-5


@pytest.mark.parametrize("index", range(len(SMOOTH)))
def test_jet_matches_central_differences(index):
    expr = parse(SMOOTH[index], variables=("s",))
    rng = np.random.default_rng(1000 + index)
    for s in rng.uniform(-1.0, 1.0, size=1000):
        jet = eval_jet_s(expr, s, 0.0, 0.0)
        ahead = eval_jet_s(expr, s + H, 0.0, 0.0)
        behind = eval_jet_s(expr, s - H, 0.0, 0.0)
        for k in range(4):
            estimate = (ahead.d[k] - behind.d[k]) / (2 * H)
            assert abs(estimate - jet.d[k + 1]) <= 1e-5 * (1.0 + abs(jet.d[k + 1]))


def test_jet_value_equals_float_evaluation():
    expr = parse("exp(s)*sin(3*s) + s^4", variables=("s",))
    for s in (-0.7, 0.0, 0.3, 1.9):
        assert eval_jet_s(expr, s, 0.0, 0.0).value == pytest.approx(evaluate(expr, s, 0.0, 0.0), abs=1e-14)


def test_known_derivative_sequences():
    x = 0.4
    sin_jet = Jet4.variable(x).sin()
    np.testing.assert_allclose(
        sin_jet.d,
        (math.sin(x), math.cos(x), -math.sin(x), -math.cos(x), math.sin(x)),
        atol=1e-14,
    )
    exp_jet = Jet4.variable(x).exp()
    np.testing.assert_allclose(exp_jet.d, [math.exp(x)] * 5, rtol=1e-14)
    cube = Jet4.variable(x).power(3)
    np.testing.assert_allclose(cube.d, (x**3, 3 * x**2, 6 * x, 6.0, 0.0), atol=1e-14)


def test_integer_power_of_zero_base_is_defined():
    square = Jet4.variable(0.0).power(2)
    assert square.d == (0.0, 0.0, 2.0, 0.0, 0.0)


def test_jet_domain_errors():
    with pytest.raises(DomainError):
        Jet4.variable(0.0).log()
    with pytest.raises(DomainError):
        Jet4.variable(-1.0).sqrt()
    with pytest.raises(DomainError):
        Jet4.constant(1.0) / Jet4.variable(0.0)
    with pytest.raises(DomainError):
        Jet4.variable(-2.0).power(0.5)


def test_grad3_partials_match_finite_differences():
    expr = parse("s*t + sin(q)*exp(s*q) - t^2/(1 + q^2)")
    rng = np.random.default_rng(5)
    for s, t, q in rng.uniform(-1.0, 1.0, size=(200, 3)):
        grad = eval_grad3(expr, s, t, q)
        h = 1e-6
        fd = (
            (evaluate(expr, s + h, t, q) - evaluate(expr, s - h, t, q)) / (2 * h),
            (evaluate(expr, s, t + h, q) - evaluate(expr, s, t - h, q)) / (2 * h),
            (evaluate(expr, s, t, q + h) - evaluate(expr, s, t, q - h)) / (2 * h),
        )
        np.testing.assert_allclose(grad.partials, fd, atol=1e-7)


def test_grad3_closed_form():
    grad = eval_grad3(parse("s*t + sin(q)"), 1.0, 2.0, 3.0)
    assert grad.value == pytest.approx(2.0 + math.sin(3.0))
    assert grad.partials == pytest.approx((2.0, 1.0, math.cos(3.0)))


def test_grad3_rejects_non_finite():
    with pytest.raises(DomainError):
        Grad3(math.inf)
    with pytest.raises(DomainError):
        Grad3(1.0) / Grad3(0.0)


@pytest.mark.parametrize("text", ["t^2", "t^400", "t^2.5"])
def test_grad3_power_overflow_is_a_domain_error(text):
    with pytest.raises(DomainError, match="overflows"):
        eval_grad3(parse(text), 0.0, 1e200, 0.0)
