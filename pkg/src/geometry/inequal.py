#!/usr/bin/env python3
"""
Signed residuals of the distance inequalities on Grassmannians.

Every evaluator returns "left side minus right side" oriented so that a
value >= 0 means the inequality holds. Inside small balls all residuals are
expected to be >= -RESIDUAL_EPS; the convexity probe has no expected sign.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction

from src.geometry.errors import ComplexResidue, CutLocus, DegenerateVertex, ParameterError
from src.geometry.grassmann import (
    CANONICAL,
    Geodesic,
    TangentVector,
    exp_map,
    log_map,
    t_geometric_mean,
    tangent_angle,
)
from src.geometry.matfun import DEFAULT_CUT_TOL, frobenius_norm

logger = logging.getLogger(__name__)

RESIDUAL_EPS = 1e-9
DEFAULT_T_GRID = (
    Fraction(1, 4),
    Fraction(1, 3),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(3, 4),
    Fraction(9, 10),
)
FAMILIES = ("semipara", "cosine", "cosine2", "anglesum", "quad", "midpoint", "tcontract")

CosineResiduals = namedtuple("CosineResiduals", ["r_cosine", "r_cosine2", "r_anglesum"])


def fractional_grid(p_values=range(2, 9)):
    """Parameters (p-1)/p at which the contraction bound is first established"""
    return tuple(Fraction(p - 1, p) for p in p_values)


def semi_parallelogram_residual(a, b, c, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """d^2(M,C) - [(d^2(A,C) + d^2(B,C))/2 - d^2(A,B)/4] with M = A # B"""
    dist = convention.distance
    m = convention.mean(a, b, 0.5, cut_tol)
    bound = (dist(a, c, cut_tol) ** 2 + dist(b, c, cut_tol) ** 2) / 2 - dist(a, b, cut_tol) ** 2 / 4
    return dist(m, c, cut_tol) ** 2 - bound


def triangle_angles(a, b, c, cut_tol=DEFAULT_CUT_TOL):
    """(alpha, beta, gamma): the angles at A, B and C"""
    return _edge_angles(Geodesic(a, b, cut_tol), Geodesic(a, c, cut_tol), Geodesic(b, c, cut_tol))


def _edge_angles(geo_ab, geo_ac, geo_bc):
    return (
        tangent_angle(geo_ab.tangent_at_start().x, geo_ac.tangent_at_start().x),
        tangent_angle(geo_ab.tangent_at_end().x, geo_bc.tangent_at_start().x),
        tangent_angle(geo_ac.tangent_at_end().x, geo_bc.tangent_at_end().x),
    )


def _cosine_residuals(d_ab, d_bc, d_ca, alpha, beta, gamma):
    r_cosine = d_ca**2 + d_bc**2 - 2 * d_ca * d_bc * math.cos(gamma) - d_ab**2
    r_cosine2 = d_ab - (d_ca * math.cos(alpha) + d_bc * math.cos(beta))
    r_anglesum = alpha + beta + gamma - math.pi
    return CosineResiduals(r_cosine, r_cosine2, r_anglesum)


def law_of_cosines_report(a, b, c, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """Residuals of the hinge law of cosines, its projection form and the angle sum

    Raises DegenerateVertex when two of the points coincide.
    """
    dist = convention.distance
    alpha, beta, gamma = triangle_angles(a, b, c, cut_tol)
    return _cosine_residuals(
        dist(a, b, cut_tol), dist(b, c, cut_tol), dist(c, a, cut_tol), alpha, beta, gamma
    )


def reflect_through(m, c, cut_tol=DEFAULT_CUT_TOL):
    """D = Exp_M(-Log_M C), so that M is the midpoint of C and D"""
    x = log_map(m, c, cut_tol).x
    return exp_map(TangentVector(base=m, x=-x))


def quadrilateral_residual(a, b, c, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """[d^2(C,D) + d^2(A,B)] - [d^2(A,C) + d^2(B,C) + d^2(A,D) + d^2(B,D)]

    M = A # B and D is the reflection of C through M.
    """
    dist = convention.distance
    m = convention.mean(a, b, 0.5, cut_tol)
    d = reflect_through(m, c, cut_tol)
    left = dist(c, d, cut_tol) ** 2 + dist(a, b, cut_tol) ** 2
    right = (
        dist(a, c, cut_tol) ** 2
        + dist(b, c, cut_tol) ** 2
        + dist(a, d, cut_tol) ** 2
        + dist(b, d, cut_tol) ** 2
    )
    return left - right


def _check_unit_interval(t):
    if not 0 <= t <= 1:
        raise ParameterError(f"t = {t} outside [0, 1]")


def t_contraction_residual(a, b, c, t, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """d(A #_t B, A #_t C) - t d(B, C)"""
    _check_unit_interval(t)
    t = float(t)
    dist = convention.distance
    near_b = convention.mean(a, b, t, cut_tol)
    near_c = convention.mean(a, c, t, cut_tol)
    return dist(near_b, near_c, cut_tol) - t * dist(b, c, cut_tol)


def midpoint_contraction_residual(a, b, c, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """d(A # B, A # C) - d(B, C)/2"""
    dist = convention.distance
    mid_b = convention.mean(a, b, 0.5, cut_tol)
    mid_c = convention.mean(a, c, 0.5, cut_tol)
    return dist(mid_b, mid_c, cut_tol) - 0.5 * dist(b, c, cut_tol)


def convexity_probe(b1, b2, c1, c2, t, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """d(B1 #_t B2, C1 #_t C2) - [(1-t) d(B1,C1) + t d(B2,C2)]; either sign occurs"""
    _check_unit_interval(t)
    t = float(t)
    dist = convention.distance
    mean_b = convention.mean(b1, b2, t, cut_tol)
    mean_c = convention.mean(c1, c2, t, cut_tol)
    return dist(mean_b, mean_c, cut_tol) - ((1 - t) * dist(b1, c1, cut_tol) + t * dist(b2, c2, cut_tol))


def identity_residuals(p, q, s, t, cut_tol=DEFAULT_CUT_TOL):
    """Residuals of the constant-speed identity and the three mean identities

    Returns:
        dict: linearity (scalar), reversal, nesting and chaining (Frobenius norms)
    """
    if not (0 < s < 1 and 0 < t < 1 and s + t <= 1):
        raise ParameterError(f"need s, t in (0, 1) and s + t <= 1, got s={s}, t={t}")
    s = float(s)
    t = float(t)
    forward = Geodesic(p, q, cut_tol)
    p_t = forward.at(t)
    p_s = forward.at(s)
    chained = t_geometric_mean(p_s, q, t / (1 - s), cut_tol)
    return {
        "linearity": abs(Geodesic(p, p_t, cut_tol).length - t * forward.length),
        "reversal": frobenius_norm(p_t.mat - t_geometric_mean(q, p, 1 - t, cut_tol).mat),
        "nesting": frobenius_norm(t_geometric_mean(p, p_t, s, cut_tol).mat - forward.at(s * t).mat),
        "chaining": frobenius_norm(chained.mat - forward.at(s + t).mat),
    }


def identity_suite(p, q, s, t, cut_tol=DEFAULT_CUT_TOL):
    return max(identity_residuals(p, q, s, t, cut_tol).values())


def geodesic_formula_gap(p, q, t, cut_tol=DEFAULT_CUT_TOL):
    """||e^{t Omega} P e^{-t Omega} - U^{t/2} P U^{-t/2}||_F"""
    geodesic = Geodesic(p, q, cut_tol)
    return frobenius_norm(geodesic.at(t).mat - geodesic.at_power(t).mat)


def finite_difference_speed(p, q, t, h=1e-4, cut_tol=DEFAULT_CUT_TOL):
    """Forward-difference speed of the geodesic at t"""
    geodesic = Geodesic(p, q, cut_tol)
    return frobenius_norm(geodesic.at(t + h).mat - geodesic.at(t).mat) / h


@dataclass
class TriangleReport:
    """Distances, angles and signed residuals of one geodesic triangle"""

    d_ab: float = math.nan
    d_bc: float = math.nan
    d_ca: float = math.nan
    alpha: float = math.nan
    beta: float = math.nan
    gamma: float = math.nan
    r_semipara: float = math.nan
    r_cosine: float = math.nan
    r_cosine2: float = math.nan
    r_anglesum: float = math.nan
    r_quadrilateral: float = math.nan
    r_midpoint: float = math.nan
    r_tcontract: dict = field(default_factory=dict)
    valid: bool = True
    degenerate: bool = False
    convention: str = CANONICAL.name

    def family_residuals(self):
        """Worst residual per inequality family (t-grid collapsed to its minimum)"""
        tgrid = [v for v in self.r_tcontract.values() if not math.isnan(v)]
        return {
            "semipara": self.r_semipara,
            "cosine": self.r_cosine,
            "cosine2": self.r_cosine2,
            "anglesum": self.r_anglesum,
            "quad": self.r_quadrilateral,
            "midpoint": self.r_midpoint,
            "tcontract": min(tgrid) if tgrid else math.nan,
        }

    def residuals(self):
        values = {k: v for k, v in self.family_residuals().items() if k != "tcontract"}
        for t, value in self.r_tcontract.items():
            values[f"tcontract@{t}"] = value
        return values

    def worst_residual(self):
        finite = [v for v in self.residuals().values() if not math.isnan(v)]
        return min(finite) if finite else math.nan

    def violations(self, eps=RESIDUAL_EPS):
        return {name: value < -eps for name, value in self.family_residuals().items()}

    def items(self):
        """(name, value) pairs in report order"""
        yield "convention", self.convention
        yield "valid", self.valid
        yield "degenerate", self.degenerate
        for name in ("d_ab", "d_bc", "d_ca", "alpha", "beta", "gamma"):
            yield name, getattr(self, name)
        for name in ("r_semipara", "r_cosine", "r_cosine2", "r_anglesum", "r_quadrilateral", "r_midpoint"):
            yield name, getattr(self, name)
        for t, value in self.r_tcontract.items():
            yield f"r_tcontract[{t}]", value


def triangle_report(a, b, c, t_grid=DEFAULT_T_GRID, convention=CANONICAL, cut_tol=DEFAULT_CUT_TOL):
    """Evaluate every inequality on the triangle ABC

    A cut-locus encounter anywhere marks the report invalid (all values NaN),
    as does a logarithm of a real pair that cannot be returned as real;
    coincident vertices mark it degenerate and leave the angle-based
    residuals NaN.
    """
    report = TriangleReport(convention=convention.name)
    for t in t_grid:
        _check_unit_interval(t)
    try:
        _fill_report(report, a, b, c, t_grid, convention, cut_tol)
    except CutLocus as e:
        logger.debug(f"Triangle touches the cut locus: {e}")
    except ComplexResidue as e:
        logger.warning(f"Triangle dropped, logarithm not real: {e}")
    else:
        return report
    return TriangleReport(valid=False, convention=convention.name, r_tcontract={t: math.nan for t in t_grid})


def _fill_report(report, a, b, c, t_grid, convention, cut_tol):
    """Each edge logarithm is computed once and shared by distances, angles and means"""
    dist = convention.distance
    scale = convention.distance_scale
    geo_ab = Geodesic(a, b, cut_tol)
    geo_ac = Geodesic(a, c, cut_tol)
    geo_bc = Geodesic(b, c, cut_tol)
    report.d_ab = scale * geo_ab.length
    report.d_ca = scale * geo_ac.length
    report.d_bc = scale * geo_bc.length

    m = convention.geodesic_point(geo_ab, 0.5)
    geo_mc = Geodesic(m, c, cut_tol)
    bound = (report.d_ca**2 + report.d_bc**2) / 2 - report.d_ab**2 / 4
    report.r_semipara = (scale * geo_mc.length) ** 2 - bound

    try:
        report.alpha, report.beta, report.gamma = _edge_angles(geo_ab, geo_ac, geo_bc)
    except DegenerateVertex:
        report.degenerate = True
    else:
        report.r_cosine, report.r_cosine2, report.r_anglesum = _cosine_residuals(
            report.d_ab, report.d_bc, report.d_ca, report.alpha, report.beta, report.gamma
        )

    d = exp_map(TangentVector(base=m, x=-geo_mc.tangent_at_start().x))
    report.r_quadrilateral = (dist(c, d, cut_tol) ** 2 + report.d_ab**2) - (
        report.d_ca**2 + report.d_bc**2 + dist(a, d, cut_tol) ** 2 + dist(b, d, cut_tol) ** 2
    )

    mid_c = convention.geodesic_point(geo_ac, 0.5)
    report.r_midpoint = dist(m, mid_c, cut_tol) - 0.5 * report.d_bc

    for t in t_grid:
        near_b = convention.geodesic_point(geo_ab, float(t))
        near_c = convention.geodesic_point(geo_ac, float(t))
        report.r_tcontract[t] = dist(near_b, near_c, cut_tol) - float(t) * report.d_bc
