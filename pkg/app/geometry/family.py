"""Hypersurface families built on the Frenet frame of a curve.

A member of the family is

    P(s, t, q) = r(s) + u T(s) + v N(s) + w B1(s) + x B2(s)

where u, v, w, x are the marching-scale functions. Marching scales may be
written against the anchor parameters t0 and q0; a family binds them to its
anchor once, so the same template can be re-anchored freely.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields, replace
from functools import cached_property
from typing import ClassVar, Dict, Mapping, NamedTuple, Optional, Tuple

from app.geometry.curve import Curve4, FrenetApparatus, frenet_apparatus
from app.utils.autodiff import Grad3
from app.utils.errors import DomainError
from app.utils.expr import ANCHOR_PARAMETERS, Expr, eval_grad3, evaluate, parse, product
from app.utils.linalg4 import Frame4, Vec4, triple_product

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Marching scales
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MarchingScale:
    """Base of the four marching-scale variants."""

    kind: ClassVar[str] = ""
    # field name -> variables the expression may use
    SCOPES: ClassVar[Dict[str, Tuple[str, ...]]] = {}

    def __post_init__(self) -> None:
        for name, allowed in self.SCOPES.items():
            expr: Expr = getattr(self, name)
            extra = expr.variables - set(allowed)
            if extra:
                raise ValueError(
                    f"{name}: variable '{sorted(extra)[0]}' is not allowed for type {self.kind} "
                    f"(allowed: {', '.join(allowed) or 'none'})"
                )
            foreign = expr.parameters - set(ANCHOR_PARAMETERS)
            if foreign:
                raise ValueError(f"{name}: unknown parameter '{sorted(foreign)[0]}'")

    def components(self) -> Tuple[Expr, Expr, Expr, Expr]:
        """u, v, w, x as expression trees."""
        raise NotImplementedError

    def expressions(self) -> Dict[str, Expr]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def bind(self, values: Mapping[str, float]) -> "MarchingScale":
        return replace(self, **{name: expr.bind(values) for name, expr in self.expressions().items()})

    @property
    def parameters(self) -> frozenset[str]:
        names: set[str] = set()
        for expr in self.expressions().values():
            names |= expr.parameters
        return frozenset(names)


@dataclass(frozen=True)
class General(MarchingScale):
    u: Expr
    v: Expr
    w: Expr
    x: Expr

    kind: ClassVar[str] = "general"
    SCOPES: ClassVar[Dict[str, Tuple[str, ...]]] = {name: ("s", "t", "q") for name in ("u", "v", "w", "x")}

    def components(self) -> Tuple[Expr, Expr, Expr, Expr]:
        return (self.u, self.v, self.w, self.x)


@dataclass(frozen=True)
class _Separable(MarchingScale):
    """u = l*U, v = m*V, w = n*W, x = p*X."""

    l: Expr  # noqa: E741
    m: Expr
    n: Expr
    p: Expr
    U: Expr
    V: Expr
    W: Expr
    X: Expr

    def components(self) -> Tuple[Expr, Expr, Expr, Expr]:
        return (
            product(self.l, self.U),
            product(self.m, self.V),
            product(self.n, self.W),
            product(self.p, self.X),
        )


def _scopes(factor: Tuple[str, ...], profile: Tuple[str, ...]) -> Dict[str, Tuple[str, ...]]:
    scopes = {name: factor for name in ("l", "m", "n", "p")}
    scopes.update({name: profile for name in ("U", "V", "W", "X")})
    return scopes


@dataclass(frozen=True)
class TypeI(_Separable):
    kind: ClassVar[str] = "I"
    SCOPES: ClassVar[Dict[str, Tuple[str, ...]]] = _scopes(("s",), ("t", "q"))


@dataclass(frozen=True)
class TypeII(_Separable):
    kind: ClassVar[str] = "II"
    SCOPES: ClassVar[Dict[str, Tuple[str, ...]]] = _scopes(("s", "t"), ("q",))


@dataclass(frozen=True)
class TypeIII(_Separable):
    kind: ClassVar[str] = "III"
    SCOPES: ClassVar[Dict[str, Tuple[str, ...]]] = _scopes(("s", "q"), ("t",))


MARCHING_TYPES: Dict[str, type[MarchingScale]] = {
    "general": General,
    "I": TypeI,
    "II": TypeII,
    "III": TypeIII,
}


def marching_from_strings(kind: str, texts: Mapping[str, str]) -> MarchingScale:
    """Parse each expression with the variables its slot allows.

    An out-of-scope variable surfaces as ``UnknownIdentifier`` from the parser.
    """
    try:
        cls = MARCHING_TYPES[kind]
    except KeyError as exc:
        raise ValueError(f"unknown marching-scale type {kind!r}; expected one of {list(MARCHING_TYPES)}") from exc
    missing = [name for name in cls.SCOPES if name not in texts]
    if missing:
        raise ValueError(f"type {kind} marching scale is missing {missing}")
    parsed = {name: parse(texts[name], variables=allowed) for name, allowed in cls.SCOPES.items()}
    return cls(**parsed)


# ---------------------------------------------------------------------------
# Family
# ---------------------------------------------------------------------------
def _interval(values: Tuple[float, float], label: str) -> Tuple[float, float]:
    lo, hi = float(values[0]), float(values[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"{label}: lower bound must be below upper bound")
    return (lo, hi)


def _inside(value: float, domain: Tuple[float, float], slack: float = 1e-12) -> bool:
    pad = slack * max(1.0, abs(domain[0]), abs(domain[1]))
    return domain[0] - pad <= value <= domain[1] + pad


@dataclass(frozen=True)
class FamilyParams:
    t0: float
    q0: float
    t_domain: Tuple[float, float] = (0.0, 1.0)
    q_domain: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_domain", _interval(self.t_domain, "t_range"))
        object.__setattr__(self, "q_domain", _interval(self.q_domain, "q_range"))
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "q0", float(self.q0))
        if not _inside(self.t0, self.t_domain):
            raise ValueError(f"t0={self.t0} lies outside t_range {self.t_domain}")
        if not _inside(self.q0, self.q_domain):
            raise ValueError(f"q0={self.q0} lies outside q_range {self.q_domain}")

    @property
    def anchor(self) -> Dict[str, float]:
        return {"t0": self.t0, "q0": self.q0}


@dataclass(frozen=True)
class HypersurfaceFamily:
    curve: Curve4
    marching: MarchingScale
    params: FamilyParams
    name: str = ""

    @cached_property
    def bound(self) -> MarchingScale:
        """The marching scale with t0, q0 replaced by this family's anchor."""
        return self.marching.bind(self.params.anchor)

    @cached_property
    def scales(self) -> Tuple[Expr, Expr, Expr, Expr]:
        return self.bound.components()

    def with_anchor(self, t0: Optional[float] = None, q0: Optional[float] = None) -> "HypersurfaceFamily":
        params = replace(
            self.params,
            t0=self.params.t0 if t0 is None else t0,
            q0=self.params.q0 if q0 is None else q0,
        )
        return replace(self, params=params)

    def with_marching(self, marching: MarchingScale, name: Optional[str] = None) -> "HypersurfaceFamily":
        return replace(self, marching=marching, name=self.name if name is None else name)

    def require_inside(self, s: float, t: float, q: float) -> None:
        if not self.curve.contains(s):
            raise DomainError(f"s={s} lies outside {self.curve.domain}")
        if not _inside(t, self.params.t_domain):
            raise DomainError(f"t={t} lies outside {self.params.t_domain}")
        if not _inside(q, self.params.q_domain):
            raise DomainError(f"q={q} lies outside {self.params.q_domain}")

    def apparatus(self, s: float) -> FrenetApparatus:
        return frenet_apparatus(self.curve, s)

    def scale_values(self, s: float, t: float, q: float) -> Tuple[float, float, float, float]:
        u, v, w, x = (evaluate(e, s, t, q) for e in self.scales)
        return (u, v, w, x)

    def scale_gradients(self, s: float, t: float, q: float) -> Tuple[Grad3, Grad3, Grad3, Grad3]:
        u, v, w, x = (eval_grad3(e, s, t, q) for e in self.scales)
        return (u, v, w, x)


class Partials(NamedTuple):
    p_s: Vec4
    p_t: Vec4
    p_q: Vec4


@dataclass(frozen=True)
class PhiTriple:
    phi2: float
    phi3: float
    phi4: float

    def normal_in(self, frame: Frame4) -> Vec4:
        """-phi2 N + phi3 B1 - phi4 B2: the hypersurface normal on the curve."""
        return frame.combine(0.0, -self.phi2, self.phi3, -self.phi4)


def eval_point(
    f: HypersurfaceFamily,
    s: float,
    t: float,
    q: float,
    apparatus: Optional[FrenetApparatus] = None,
) -> Vec4:
    f.require_inside(s, t, q)
    app = apparatus or f.apparatus(s)
    u, v, w, x = f.scale_values(s, t, q)
    return f.curve.point(s) + app.frame.combine(u, v, w, x)


def partials(
    f: HypersurfaceFamily,
    s: float,
    t: float,
    q: float,
    apparatus: Optional[FrenetApparatus] = None,
) -> Partials:
    f.require_inside(s, t, q)
    app = apparatus or f.apparatus(s)
    u, v, w, x = f.scale_gradients(s, t, q)
    k1, k2, k3 = app.k1, app.k2, app.k3
    frame = app.frame

    p_s = frame.combine(
        1.0 + u.d_s - v.value * k1,
        u.value * k1 + v.d_s - w.value * k2,
        v.value * k2 + w.d_s - x.value * k3,
        w.value * k3 + x.d_s,
    )
    p_t = frame.combine(u.d_t, v.d_t, w.d_t, x.d_t)
    p_q = frame.combine(u.d_q, v.d_q, w.d_q, x.d_q)
    return Partials(p_s, p_t, p_q)


def normal(
    f: HypersurfaceFamily,
    s: float,
    t: float,
    q: float,
    apparatus: Optional[FrenetApparatus] = None,
) -> Vec4:
    """P_s x P_t x P_q. The zero vector marks a singular point of the parametrization."""
    p_s, p_t, p_q = partials(f, s, t, q, apparatus)
    return triple_product(p_s, p_t, p_q)


def phi_on_curve(f: HypersurfaceFamily, s: float) -> PhiTriple:
    """Surviving cofactors of the normal on the curve, from the anchor partials of v, w, x."""
    t0, q0 = f.params.t0, f.params.q0
    _, v, w, x = f.scale_gradients(s, t0, q0)
    return PhiTriple(
        phi2=w.d_t * x.d_q - w.d_q * x.d_t,
        phi3=v.d_t * x.d_q - v.d_q * x.d_t,
        phi4=v.d_t * w.d_q - v.d_q * w.d_t,
    )

