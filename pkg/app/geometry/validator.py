"""Numerical geodesic check that does not rely on the cofactor algebra.

For every s-sample the hypersurface normal is formed from the partials at the
anchor and compared against the principal normal of the curve, and r'' is
projected onto the tangent 3-space. A geodesic has a collinear normal and no
tangential acceleration.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.config import Config
from app.geometry.conditions import anchor_partial_scale
from app.geometry.family import HypersurfaceFamily, eval_point, partials, phi_on_curve
from app.services.executor import parallel_map
from app.utils.errors import SingularTangentSpace
from app.utils.export_utils import Table
from app.utils.linalg4 import Vec4, dot, gram_matrix, norm, triple_product

logger = logging.getLogger(__name__)

REASONS = (
    "isoparametric",
    "phi3_nonzero",
    "phi4_nonzero",
    "phi2_zero",
    "collinearity",
    "tangential_acceleration",
    "singular_tangent_space",
)


@dataclass(frozen=True)
class Thresholds:
    eps_zero: float = Config.EPS_ZERO
    eps_nonzero: float = Config.EPS_NONZERO
    collinearity: float = Config.COLLINEARITY_TOL
    tangential: float = Config.TANGENTIAL_TOL
    gram_singular: float = Config.GRAM_SINGULAR

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"threshold {name} must be a positive number, got {value}")


@dataclass(frozen=True)
class ValidationSample:
    s: float
    isoparam_residual: float
    collinearity_defect: float
    tangential_accel: float
    phi2: float
    phi3: float
    phi4: float
    partial_scale: float
    singular: bool = False


@dataclass(frozen=True)
class ValidationReport:
    name: str
    n_samples: int
    max_isoparam_residual: float
    max_collinearity_defect: float
    max_tangential_accel: float
    min_abs_phi2: float
    max_abs_phi3: float
    max_abs_phi4: float
    phi2_threshold: float
    reasons: Tuple[str, ...]
    samples: Tuple[ValidationSample, ...] = field(default=(), compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return not self.reasons

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def summary_line(self) -> str:
        label = self.name or "family"
        line = (
            f"{label}: {self.verdict.upper()} n={self.n_samples} "
            f"iso={self.max_isoparam_residual:.3e} col={self.max_collinearity_defect:.3e} "
            f"tan={self.max_tangential_accel:.3e} |phi2|min={self.min_abs_phi2:.3e} "
            f"|phi3|max={self.max_abs_phi3:.3e} |phi4|max={self.max_abs_phi4:.3e}"
        )
        if self.reasons:
            line += f" reasons={','.join(self.reasons)}"
        return line

    def rows(self) -> List[List[Any]]:
        """One row per s-sample followed by a summary row."""
        rows: List[List[Any]] = [
            [
                sample.s,
                sample.isoparam_residual,
                sample.collinearity_defect,
                sample.tangential_accel,
                sample.phi2,
                sample.phi3,
                sample.phi4,
                "singular" if sample.singular else "ok",
            ]
            for sample in self.samples
        ]
        rows.append(
            [
                "summary",
                self.max_isoparam_residual,
                self.max_collinearity_defect,
                self.max_tangential_accel,
                self.min_abs_phi2,
                self.max_abs_phi3,
                self.max_abs_phi4,
                self.verdict if self.passed else f"fail:{'|'.join(self.reasons)}",
            ]
        )
        return rows

    def table(self) -> Table:
        header = ("s", "isoparam_residual", "collinearity_defect", "tangential_accel", "phi2", "phi3", "phi4", "status")
        return Table(header, self.rows())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "n_samples": self.n_samples,
            "max_isoparam_residual": self.max_isoparam_residual,
            "max_collinearity_defect": self.max_collinearity_defect,
            "max_tangential_accel": self.max_tangential_accel,
            "min_abs_phi2": self.min_abs_phi2,
            "max_abs_phi3": self.max_abs_phi3,
            "max_abs_phi4": self.max_abs_phi4,
            "phi2_threshold": self.phi2_threshold,
        }


def tangent_space_basis(
    p_s: Vec4,
    p_t: Vec4,
    p_q: Vec4,
    gram_singular: float = Config.GRAM_SINGULAR,
) -> Tuple[Vec4, Vec4, Vec4]:
    """Orthonormal basis of span{P_s, P_t, P_q} by Gram-Schmidt with one reorthogonalization pass."""
    scale = (norm(p_s) * norm(p_t) * norm(p_q)) ** 2
    det = float(np.linalg.det(gram_matrix(p_s, p_t, p_q)))
    if scale == 0.0 or det < gram_singular * scale:
        raise SingularTangentSpace(f"Gram determinant {det:.3e} below {gram_singular:.0e} * {scale:.3e}")

    basis: List[Vec4] = []
    for vector in (p_s, p_t, p_q):
        for _ in range(2):
            for e in basis:
                vector = vector - e * dot(e, vector)
        basis.append(vector.normalized())
    return (basis[0], basis[1], basis[2])


def _sample(f: HypersurfaceFamily, s: float, gram_singular: float) -> ValidationSample:
    t0, q0 = f.params.t0, f.params.q0
    app = f.apparatus(s)
    residual = norm(eval_point(f, s, t0, q0, app) - f.curve.point(s))
    p_s, p_t, p_q = partials(f, s, t0, q0, app)
    phi = phi_on_curve(f, s)
    scale = anchor_partial_scale(f.scales, s, t0, q0)
    accel = app.n * app.k1

    try:
        basis = tangent_space_basis(p_s, p_t, p_q, gram_singular)
    except SingularTangentSpace:
        logger.debug("validator: singular tangent space at s=%.6g", s)
        return ValidationSample(s, residual, 1.0, norm(accel), phi.phi2, phi.phi3, phi.phi4, scale, singular=True)

    normal = triple_product(p_s, p_t, p_q)
    normal_norm = norm(normal)
    cosine = abs(dot(normal, app.n)) / normal_norm if normal_norm > 0.0 else 0.0
    tangential = math.sqrt(sum(dot(e, accel) ** 2 for e in basis))
    return ValidationSample(
        s=s,
        isoparam_residual=residual,
        collinearity_defect=max(0.0, 1.0 - min(cosine, 1.0)),
        tangential_accel=tangential,
        phi2=phi.phi2,
        phi3=phi.phi3,
        phi4=phi.phi4,
        partial_scale=scale,
    )


def validate(
    f: HypersurfaceFamily,
    n_samples: int = Config.DEFAULT_SAMPLES,
    thresholds: Optional[Thresholds] = None,
) -> ValidationReport:
    limits = thresholds or Thresholds()
    samples = parallel_map(lambda s: _sample(f, s, limits.gram_singular), f.curve.samples(n_samples).tolist())

    max_iso = max(sample.isoparam_residual for sample in samples)
    max_col = max(sample.collinearity_defect for sample in samples)
    max_tan = max(sample.tangential_accel for sample in samples)
    min_phi2 = min(abs(sample.phi2) for sample in samples)
    max_phi3 = max(abs(sample.phi3) for sample in samples)
    max_phi4 = max(abs(sample.phi4) for sample in samples)
    phi2_threshold = limits.eps_nonzero * (1.0 + max(sample.partial_scale for sample in samples))

    failed = {
        "isoparametric": max_iso > limits.eps_zero,
        "phi3_nonzero": max_phi3 > limits.eps_zero,
        "phi4_nonzero": max_phi4 > limits.eps_zero,
        "phi2_zero": min_phi2 < phi2_threshold,
        "collinearity": max_col > limits.collinearity,
        "tangential_acceleration": max_tan > limits.tangential,
        "singular_tangent_space": any(sample.singular for sample in samples),
    }
    report = ValidationReport(
        name=f.name,
        n_samples=len(samples),
        max_isoparam_residual=max_iso,
        max_collinearity_defect=max_col,
        max_tangential_accel=max_tan,
        min_abs_phi2=min_phi2,
        max_abs_phi3=max_phi3,
        max_abs_phi4=max_phi4,
        phi2_threshold=phi2_threshold,
        reasons=tuple(reason for reason in REASONS if failed[reason]),
        samples=tuple(samples),
    )
    logger.info("validator: %s", report.summary_line())
    return report


@dataclass(frozen=True)
class SweepRow:
    t0: float
    q0: float
    report: ValidationReport

    @property
    def passed(self) -> bool:
        return self.report.passed


def anchor_grid(t_values: Sequence[float], q_values: Sequence[float]) -> List[Tuple[float, float]]:
    """All (t0, q0) pairs, t0 outer."""
    return [(float(t0), float(q0)) for t0 in t_values for q0 in q_values]


def sweep_anchor(
    f: HypersurfaceFamily,
    anchors: Iterable[Tuple[float, float]],
    n_samples: int = Config.DEFAULT_SAMPLES,
    thresholds: Optional[Thresholds] = None,
) -> List[SweepRow]:
    """Validate the family re-anchored at each (t0, q0), in the order given."""
    rows: List[SweepRow] = []
    for t0, q0 in anchors:
        report = validate(f.with_anchor(t0=t0, q0=q0), n_samples, thresholds)
        rows.append(SweepRow(float(t0), float(q0), report))
    return rows


def sweep_table(rows: Sequence[SweepRow]) -> Table:
    header = ("t0", "q0", "verdict", "reasons", "max_collinearity_defect", "max_tangential_accel", "min_abs_phi2")
    return Table(
        header,
        [
            [
                row.t0,
                row.q0,
                row.report.verdict,
                "|".join(row.report.reasons),
                row.report.max_collinearity_defect,
                row.report.max_tangential_accel,
                row.report.min_abs_phi2,
            ]
            for row in rows
        ],
    )
