"""Arc-length curves in R^4 and their Frenet apparatus.

The frame follows the classical construction: T = r', N = r''/k1,
B2 = (r' x r'' x r''') / ||r' x r'' x r'''||, B1 = B2 x T x N, with the second
and third curvatures read off the third and fourth derivatives.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from app.config import Config
from app.utils.errors import DegenerateFrame
from app.utils.expr import Expr, eval_jet_s, evaluate, parse, parse_constant
from app.utils.linalg4 import Frame4, Vec4, dot, norm, triple_product

logger = logging.getLogger(__name__)

Derivatives = Tuple[Vec4, Vec4, Vec4, Vec4, Vec4]


@dataclass(frozen=True)
class Curve4:
    components: Tuple[Expr, Expr, Expr, Expr]
    domain: Tuple[float, float]

    def __post_init__(self) -> None:
        if len(self.components) != 4:
            raise ValueError(f"a curve in R^4 needs 4 components, got {len(self.components)}")
        for index, component in enumerate(self.components, start=1):
            extra = component.variables - {"s"}
            if extra:
                raise ValueError(f"curve component x{index} may only use s, found {sorted(extra)}")
            if component.parameters:
                raise ValueError(f"curve component x{index} may not use anchor parameters")
        lo, hi = (float(self.domain[0]), float(self.domain[1]))
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise ValueError("s_range: L1 < L2 required")
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "domain", (lo, hi))

    @classmethod
    def from_strings(cls, components: Sequence[str], domain: Tuple[float | str, float | str]) -> "Curve4":
        exprs = tuple(parse(text, variables=("s",), parameters=()) for text in components)
        return cls(exprs, (parse_constant(domain[0]), parse_constant(domain[1])))

    def point(self, s: float) -> Vec4:
        return Vec4.of(evaluate(c, s, 0.0, 0.0) for c in self.components)

    def samples(self, n_samples: int) -> np.ndarray:
        if n_samples < 2:
            raise ValueError("n_samples must be at least 2")
        return np.linspace(self.domain[0], self.domain[1], n_samples)

    def contains(self, s: float, slack: float = 1e-12) -> bool:
        lo, hi = self.domain
        pad = slack * max(1.0, abs(lo), abs(hi))
        return lo - pad <= s <= hi + pad


@dataclass(frozen=True)
class FrenetApparatus:
    s: float
    frame: Frame4
    k1: float
    k2: float
    k3: float
    k2_degenerate: bool = False

    @property
    def t(self) -> Vec4:
        return self.frame.t

    @property
    def n(self) -> Vec4:
        return self.frame.n

    @property
    def b1(self) -> Vec4:
        return self.frame.b1

    @property
    def b2(self) -> Vec4:
        return self.frame.b2


def derivatives(c: Curve4, s: float) -> Derivatives:
    """r, r', r'', r''', r'''' at s, from one jet evaluation per component."""
    jets = [eval_jet_s(component, s, 0.0, 0.0) for component in c.components]
    return tuple(Vec4.of(jet.d[k] for jet in jets) for k in range(5))  # type: ignore[return-value]


def check_arclength(c: Curve4, n_samples: int = Config.ARCLENGTH_SAMPLES, tol: float | None = None) -> float:
    """Largest |‖r'(s)‖ - 1| over uniform samples. ``tol`` only drives a log line."""
    worst = 0.0
    for s in c.samples(n_samples):
        _, d1, *_ = derivatives(c, float(s))
        worst = max(worst, abs(norm(d1) - 1.0))
    if tol is not None and worst > tol:
        logger.warning("curve: not unit speed, max deviation %.3e exceeds %.1e", worst, tol)
    return worst


def frenet_apparatus(
    c: Curve4,
    s: float,
    *,
    eps_k: float = Config.EPS_K,
    k2_eps: float = Config.K2_DEGENERATE,
) -> FrenetApparatus:
    _, d1, d2, d3, d4 = derivatives(c, s)

    k1 = norm(d2)
    if k1 <= eps_k:
        raise DegenerateFrame("k1 = 0: frame undefined", s=s)

    spanned = triple_product(d1, d2, d3)
    spanned_norm = norm(spanned)
    if spanned_norm <= eps_k * norm(d1) * k1 * norm(d3):
        raise DegenerateFrame("r' x r'' x r''' = 0: B2 undefined", s=s)

    t = d1.normalized()
    n = (d2 / k1).normalized()
    b2 = (spanned / spanned_norm).normalized()
    b1 = triple_product(b2, t, n).normalized()

    k2 = dot(b1, d3) / k1
    if abs(k2) <= k2_eps:
        k3 = 0.0
        k2_degenerate = True
    else:
        k3 = dot(b2, d4) / (k1 * k2)
        k2_degenerate = False

    return FrenetApparatus(s=float(s), frame=Frame4(t, n, b1, b2), k1=k1, k2=k2, k3=k3, k2_degenerate=k2_degenerate)


@dataclass(frozen=True)
class FrenetResiduals:
    """How well the apparatus at s reproduces the curve's own derivatives and Frenet ODE."""

    s: float
    third_derivative: float
    fourth_derivative: float
    ode: Tuple[float, float, float, float] = field(default=(0.0, 0.0, 0.0, 0.0))

    @property
    def ode_max(self) -> float:
        return max(self.ode)


def _central(f, s: float, h: float) -> float:
    return (f(s + h) - f(s - h)) / (2.0 * h)


def frenet_residuals(c: Curve4, s: float, *, h: float = 1e-5, h_frame: float = 1e-4) -> FrenetResiduals:
    """Max-abs residuals of the r''' and r'''' expansions and of the Frenet equations at s.

    k1' and k2' are taken by central differences with step ``h``, k1'' with a
    wider step so rounding does not swamp it. The frame derivative in the
    Frenet equations uses step ``h_frame``.
    """
    app = frenet_apparatus(c, s)
    _, _, _, d3, d4 = derivatives(c, s)
    k1, k2, k3 = app.k1, app.k2, app.k3

    def k1_at(x: float) -> float:
        return frenet_apparatus(c, x).k1

    def k2_at(x: float) -> float:
        return frenet_apparatus(c, x).k2

    dk1 = _central(k1_at, s, h)
    wide = math.sqrt(h) * 0.3
    ddk1 = (k1_at(s + wide) - 2.0 * k1 + k1_at(s - wide)) / (wide * wide)
    dk2 = _central(k2_at, s, h)

    frame = app.frame
    third = frame.combine(-k1 * k1, dk1, k1 * k2, 0.0)
    fourth = frame.combine(
        -3.0 * k1 * dk1,
        -(k1**3) + ddk1 - k1 * k2 * k2,
        2.0 * dk1 * k2 + k1 * dk2,
        k1 * k2 * k3,
    )

    ahead = frenet_apparatus(c, s + h_frame).frame
    behind = frenet_apparatus(c, s - h_frame).frame
    rates = [(a - b) / (2.0 * h_frame) for a, b in zip(ahead.vectors(), behind.vectors())]
    expected = (
        frame.n * k1,
        frame.t * (-k1) + frame.b1 * k2,
        frame.n * (-k2) + frame.b2 * k3,
        frame.b1 * (-k3),
    )
    ode = tuple((rate - rhs).max_abs() for rate, rhs in zip(rates, expected))

    return FrenetResiduals(
        s=float(s),
        third_derivative=(d3 - third).max_abs(),
        fourth_derivative=(d4 - fourth).max_abs(),
        ode=ode,  # type: ignore[arg-type]
    )
