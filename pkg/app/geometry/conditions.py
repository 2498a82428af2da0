"""Isoparametric and isogeodesic condition checks.

``check_isogeodesic`` works on any marching scale from the cofactors on the
curve. The type checkers verify the reduced per-type conditions directly on
the factor and profile functions, without looking at the curve.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import Config
from app.geometry.family import (
    FamilyParams,
    General,
    HypersurfaceFamily,
    MarchingScale,
    TypeI,
    TypeII,
    TypeIII,
    eval_point,
    phi_on_curve,
)
from app.services.executor import parallel_map
from app.utils.autodiff import Grad3
from app.utils.errors import MarchingHypothesisError, WrongVariant
from app.utils.expr import Expr, eval_grad3, evaluate
from app.utils.linalg4 import norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionEntry:
    """One measured condition: ``value <= threshold`` or ``value >= threshold``."""

    name: str
    value: float
    threshold: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if self.relation == "<=":
            return self.value <= self.threshold
        return self.value >= self.threshold

    def describe(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        return f"{self.name} = {self.value:.3e} ({self.relation} {self.threshold:.1e}) {mark}"


@dataclass(frozen=True)
class ConditionReport:
    kind: str
    entries: Tuple[ConditionEntry, ...]
    samples: Tuple[Dict[str, float], ...] = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    @property
    def failures(self) -> List[str]:
        return [entry.name for entry in self.entries if not entry.passed]

    def entry(self, name: str) -> ConditionEntry:
        for candidate in self.entries:
            if candidate.name == name:
                return candidate
        raise KeyError(name)

    def summary_line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        failed = f" [{', '.join(self.failures)}]" if self.failures else ""
        return f"{self.kind}: {verdict}{failed}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "entries": [
                {
                    "name": e.name,
                    "value": e.value,
                    "threshold": e.threshold,
                    "relation": e.relation,
                    "passed": e.passed,
                }
                for e in self.entries
            ],
        }


@dataclass(frozen=True)
class IsoparametricResidual:
    max_residual: float
    max_abs_u: float
    max_abs_v: float
    max_abs_w: float
    max_abs_x: float


def anchor_partial_scale(scales: Sequence[Expr], s: float, t0: float, q0: float) -> float:
    """Largest |t- or q-partial| of v, w, x at (s, t0, q0)."""
    grads = [eval_grad3(e, s, t0, q0) for e in scales[1:]]
    return max(abs(g) for grad in grads for g in (grad.d_t, grad.d_q))


def _s_samples(domain: Tuple[float, float], n_samples: int) -> List[float]:
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    return [float(s) for s in np.linspace(domain[0], domain[1], n_samples)]


def _require_tolerances(*tolerances: float) -> None:
    if any(not tol > 0 for tol in tolerances):
        raise ValueError("tolerances must be positive")


def check_isoparametric(f: HypersurfaceFamily, n_samples: int = Config.DEFAULT_SAMPLES) -> IsoparametricResidual:
    t0, q0 = f.params.t0, f.params.q0

    def at(s: float) -> Tuple[float, float, float, float, float]:
        residual = norm(eval_point(f, s, t0, q0) - f.curve.point(s))
        u, v, w, x = f.scale_values(s, t0, q0)
        return (residual, abs(u), abs(v), abs(w), abs(x))

    rows = parallel_map(at, f.curve.samples(n_samples).tolist())
    worst = [max(column) for column in zip(*rows)]
    return IsoparametricResidual(*worst)


def check_isogeodesic(
    f: HypersurfaceFamily,
    n_samples: int = Config.DEFAULT_SAMPLES,
    eps_zero: float = Config.EPS_ZERO,
    eps_nonzero: float = Config.EPS_NONZERO,
) -> ConditionReport:
    """Isoparametric residual, |phi3|, |phi4| near zero and |phi2| bounded away from it."""
    _require_tolerances(eps_zero, eps_nonzero)
    t0, q0 = f.params.t0, f.params.q0

    def at(s: float) -> Dict[str, float]:
        phi = phi_on_curve(f, s)
        u, v, w, x = f.scale_values(s, t0, q0)
        return {
            "s": s,
            "isoparametric": max(abs(u), abs(v), abs(w), abs(x)),
            "phi2": phi.phi2,
            "phi3": phi.phi3,
            "phi4": phi.phi4,
            "scale": anchor_partial_scale(f.scales, s, t0, q0),
        }

    samples = parallel_map(at, f.curve.samples(n_samples).tolist())
    scaled_nonzero = eps_nonzero * (1.0 + max(row["scale"] for row in samples))
    report = ConditionReport(
        kind="isogeodesic",
        entries=(
            ConditionEntry("isoparametric", max(row["isoparametric"] for row in samples), eps_zero),
            ConditionEntry("phi3_zero", max(abs(row["phi3"]) for row in samples), eps_zero),
            ConditionEntry("phi4_zero", max(abs(row["phi4"]) for row in samples), eps_zero),
            ConditionEntry("phi2_nonzero", min(abs(row["phi2"]) for row in samples), scaled_nonzero, ">="),
        ),
        samples=tuple(samples),
    )
    logger.debug("conditions: %s %s", f.name or "family", report.summary_line())
    return report


# ---------------------------------------------------------------------------
# Per-type conditions
# ---------------------------------------------------------------------------
def _grad(e: Expr, s: float, t: float, q: float) -> Grad3:
    return eval_grad3(e, s, t, q)


def _check_type_i(m: TypeI, params: FamilyParams, ss: List[float], eps_zero: float, eps_nonzero: float) -> ConditionReport:
    t0, q0 = params.t0, params.q0
    vanishing = [
        name for name in ("l", "m", "n", "p") if any(abs(evaluate(getattr(m, name), s, t0, q0)) <= eps_zero for s in ss)
    ]
    if vanishing:
        raise MarchingHypothesisError(f"type I factors must not vanish on the s-domain: {', '.join(vanishing)}")

    s_ref = ss[0]
    U, V, W, X = (_grad(getattr(m, name), s_ref, t0, q0) for name in ("U", "V", "W", "X"))
    bracket = W.d_t * X.d_q - W.d_q * X.d_t
    scale = max(abs(g) for grad in (V, W, X) for g in (grad.d_t, grad.d_q))
    nonzero = eps_nonzero * (1.0 + scale)
    return ConditionReport(
        kind="I",
        entries=(
            ConditionEntry("U(t0,q0)", abs(U.value), eps_zero),
            ConditionEntry("V(t0,q0)", abs(V.value), eps_zero),
            ConditionEntry("W(t0,q0)", abs(W.value), eps_zero),
            ConditionEntry("X(t0,q0)", abs(X.value), eps_zero),
            ConditionEntry("V_t(t0,q0)", abs(V.d_t), eps_zero),
            ConditionEntry("V_q(t0,q0)", abs(V.d_q), eps_zero),
            ConditionEntry("V_t X_q - V_q X_t", abs(V.d_t * X.d_q - V.d_q * X.d_t), eps_zero),
            ConditionEntry("V_t W_q - V_q W_t", abs(V.d_t * W.d_q - V.d_q * W.d_t), eps_zero),
            ConditionEntry("W_t X_q - W_q X_t", abs(bracket), nonzero, ">="),
        ),
    )


def _check_separable(
    m: TypeII | TypeIII,
    params: FamilyParams,
    ss: List[float],
    eps_zero: float,
    eps_nonzero: float,
) -> ConditionReport:
    """Types II and III share one shape; only the roles of t and q swap."""
    t0, q0 = params.t0, params.q0
    mirrored = isinstance(m, TypeIII)
    profile_var, anchor_name = ("t", "t0") if mirrored else ("q", "q0")
    factor_anchor = "(s,q0)" if mirrored else "(s,t0)"

    def profile(name: str) -> Tuple[float, float]:
        grad = _grad(getattr(m, name), ss[0], t0, q0)
        return grad.value, (grad.d_t if mirrored else grad.d_q)

    preamble = {
        f"U({anchor_name})": profile("U")[0],
        f"U'({anchor_name})": profile("U")[1],
        f"V({anchor_name})": profile("V")[0],
        f"V'({anchor_name})": profile("V")[1],
    }
    broken = [name for name, value in preamble.items() if abs(value) > eps_zero]
    if broken:
        raise MarchingHypothesisError(
            f"type {m.kind} requires U and V to vanish with their {profile_var}-derivative at {anchor_name}: "
            + ", ".join(f"{name}={preamble[name]:.3e}" for name in broken)
        )

    W, dW = profile("W")
    X, dX = profile("X")

    def at(s: float) -> Dict[str, float]:
        n = _grad(m.n, s, t0, q0)
        p = _grad(m.p, s, t0, q0)
        dn = n.d_q if mirrored else n.d_t
        dp = p.d_q if mirrored else p.d_t
        return {
            "s": s,
            "nW": n.value * W,
            "pX": p.value * X,
            "bracket": dn * W * p.value * dX - n.value * dW * dp * X,
            "scale": max(abs(dn * W), abs(n.value * dW), abs(dp * X), abs(p.value * dX)),
        }

    samples = parallel_map(at, ss)
    nonzero = eps_nonzero * (1.0 + max(row["scale"] for row in samples))
    return ConditionReport(
        kind=m.kind,
        entries=(
            ConditionEntry(f"n{factor_anchor}W({anchor_name})", max(abs(r["nW"]) for r in samples), eps_zero),
            ConditionEntry(f"p{factor_anchor}X({anchor_name})", max(abs(r["pX"]) for r in samples), eps_zero),
            ConditionEntry("bracket_nonzero", min(abs(r["bracket"]) for r in samples), nonzero, ">="),
        ),
        samples=tuple(samples),
    )


def check_type_conditions(
    m: MarchingScale,
    params: FamilyParams,
    *,
    s_domain: Tuple[float, float],
    n_samples: int = Config.DEFAULT_SAMPLES,
    eps_zero: float = Config.EPS_ZERO,
    eps_nonzero: float = Config.EPS_NONZERO,
) -> ConditionReport:
    """Reduced conditions of a type I, II or III marching scale.

    Raises ``WrongVariant`` for a general scale and ``MarchingHypothesisError``
    when the hypotheses the reduced conditions rely on do not hold.
    """
    if isinstance(m, General) or not isinstance(m, (TypeI, TypeII, TypeIII)):
        raise WrongVariant(f"type conditions need a type I/II/III marching scale, got {type(m).__name__}")
    _require_tolerances(eps_zero, eps_nonzero)
    bound = m.bind(params.anchor)
    ss = _s_samples(s_domain, n_samples)
    if isinstance(bound, TypeI):
        return _check_type_i(bound, params, ss, eps_zero, eps_nonzero)
    return _check_separable(bound, params, ss, eps_zero, eps_nonzero)  # type: ignore[arg-type]


def check_conditions(
    f: HypersurfaceFamily,
    n_samples: int = Config.DEFAULT_SAMPLES,
    eps_zero: float = Config.EPS_ZERO,
    eps_nonzero: float = Config.EPS_NONZERO,
    *,
    isogeodesic: Optional[bool] = None,
) -> ConditionReport:
    """Type conditions when the family has a typed scale, the general check otherwise."""
    if isogeodesic or isinstance(f.marching, General):
        return check_isogeodesic(f, n_samples, eps_zero, eps_nonzero)
    return check_type_conditions(
        f.marching,
        f.params,
        s_domain=f.curve.domain,
        n_samples=n_samples,
        eps_zero=eps_zero,
        eps_nonzero=eps_nonzero,
    )
