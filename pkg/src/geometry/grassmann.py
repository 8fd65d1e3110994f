#!/usr/bin/env python3
"""
Grassmannian Gr(n, k) over R or C, modelled by rank-k orthogonal projectors.

Features:
- Projector validation and re-projection of slightly perturbed input
- Reflections, the relative rotation (I-2Q)(I-2P) and its half-logarithm
- Minimizing geodesics, t-geometric means and the geodesic distance
- Riemannian Exp / Log maps and vertex angles of geodesic triangles
- Principal angles as an independent distance oracle

Only the minimizing geodesic is handled: every operation that needs the
logarithm raises CutLocus when (I-2Q)(I-2P) has an eigenvalue at -1.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg

from src.geometry.errors import (
    CutLocus,
    DegenerateVertex,
    DimensionMismatch,
    NegativeEigenvalue,
    NotAProjector,
    NotTangent,
    ParameterError,
    RankMismatch,
    ShapeMismatch,
)
from src.geometry.matfun import (
    DEFAULT_CUT_TOL,
    Field,
    SkewFlow,
    adjoint,
    expm_skew,
    frobenius_norm,
    hermitian_eigen,
    principal_log_unitary,
    unitary_fractional_power,
)

logger = logging.getLogger(__name__)

POINT_TOL = 1e-8
TANGENT_TOL = 1e-9
# Wide enough for the reflected and reversed parameters used by the evaluators
T_MIN, T_MAX = -1.0, 2.0


@dataclass(frozen=True, eq=False)
class ProjectorPoint:
    """A point of Gr(n, k): a Hermitian idempotent n x n matrix of rank k

    Build instances with validate_projector(); the constructor does not
    re-check the invariants.
    """

    field: Field
    n: int
    k: int
    mat: np.ndarray

    def __post_init__(self):
        self.mat.setflags(write=False)

    @cached_property
    def reflection(self):
        return np.eye(self.n, dtype=self.mat.dtype) - 2 * self.mat

    def __repr__(self):
        return f"ProjectorPoint(field={self.field.value}, n={self.n}, k={self.k})"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Hermitian x with x = P x + x P at the base point P"""

    base: ProjectorPoint
    x: np.ndarray

    @property
    def norm(self):
        return frobenius_norm(self.x)


@dataclass(frozen=True, eq=False)
class Velocity:
    """Skew-Hermitian generator of the geodesic, anticommuting with I - 2P"""

    omega: np.ndarray

    @property
    def norm(self):
        return frobenius_norm(self.omega)


def validate_projector(mat, tol=POINT_TOL):
    """Check that a matrix is (numerically) an orthogonal projector

    The returned point is re-projected: eigenvalues are rounded to 0 or 1
    and the matrix rebuilt from the eigenvectors, so its idempotency
    residual is at rounding level.

    Args:
        mat: Square matrix, real or complex
        tol (float): Allowed distance of each eigenvalue from {0, 1}

    Returns:
        ProjectorPoint: The cleaned point; k is the number of unit eigenvalues
    """
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise DimensionMismatch(f"projector must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise NotAProjector("matrix has non-finite entries")

    asym = frobenius_norm(mat - adjoint(mat))
    if asym > tol:
        raise NotAProjector(f"||M - M*||_F = {asym:.3e} exceeds {tol:.1e}")

    values, vectors = hermitian_eigen((mat + adjoint(mat)) / 2, tol=np.inf)
    rounded = values > 0.5
    deviation = float(np.max(np.abs(values - rounded)))
    if deviation > tol:
        raise NotAProjector(f"eigenvalue off {{0, 1}} by {deviation:.3e} (tol {tol:.1e})")

    basis = vectors[:, rounded]
    clean = basis @ adjoint(basis)
    clean = (clean + adjoint(clean)) / 2
    field = Field.of(mat)
    clean = np.ascontiguousarray(clean.real if field is Field.REAL else clean.astype(np.complex128))
    return ProjectorPoint(field=field, n=mat.shape[0], k=int(np.count_nonzero(rounded)), mat=clean)


def points_equal(p, q, tol=POINT_TOL):
    return frobenius_norm(p.mat - q.mat) <= tol


def range_basis(p):
    """Orthonormal basis (n x k) of the range of P"""
    _, vectors = linalg.eigh(p.mat)
    return vectors[:, p.n - p.k:]


def reflection(p):
    """s_P = I - 2P, an involutive Hermitian unitary"""
    return p.reflection.copy()


def _check_compatible(p, q):
    if p.n != q.n:
        raise DimensionMismatch(f"ambient dimensions differ: {p.n} vs {q.n}")
    if p.k != q.k:
        raise RankMismatch(f"ranks differ: {p.k} vs {q.k}")


def relative_rotation(p, q):
    """U = (I - 2Q)(I - 2P); mixed fields are promoted to complex"""
    _check_compatible(p, q)
    return q.reflection @ p.reflection


def connecting_velocity(p, q, cut_tol=DEFAULT_CUT_TOL):
    """Omega = 1/2 log[(I - 2Q)(I - 2P)]"""
    rotation = relative_rotation(p, q)
    try:
        log = principal_log_unitary(rotation, cut_tol=cut_tol)
    except NegativeEigenvalue as e:
        raise CutLocus(e.phase, f"points are on each other's cut locus (phase {e.phase:.12g})") from e
    return Velocity(omega=log / 2)


def _conjugate(unitary, p):
    """W P W*; conjugation by a unitary keeps rank and idempotency"""
    mat = unitary @ p.mat @ adjoint(unitary)
    mat = np.ascontiguousarray((mat + adjoint(mat)) / 2)
    return ProjectorPoint(field=Field.of(mat), n=p.n, k=p.k, mat=mat)


def _tangent(p, omega):
    x = p.reflection @ omega
    return TangentVector(base=p, x=(x + adjoint(x)) / 2)


class Geodesic:
    """The minimizing geodesic from P to Q

    at(t) evaluates e^{t Omega} P e^{-t Omega}; at_power(t) evaluates the
    same point as U^{t/2} P U^{-t/2}. Reusing one instance for several t
    values computes the logarithm and the eigendecomposition of Omega once,
    and serves the Log of either endpoint towards the other.
    """

    def __init__(self, start, end, cut_tol=DEFAULT_CUT_TOL):
        self.start = start
        self.end = end
        self.cut_tol = cut_tol
        self.velocity = connecting_velocity(start, end, cut_tol)

    @property
    def length(self):
        return self.velocity.norm

    @cached_property
    def _flow(self):
        return SkewFlow(self.velocity.omega)

    def at(self, t):
        _check_t(t)
        if t == 0:
            return self.start
        return _conjugate(self._flow(t), self.start)

    def tangent_at_start(self):
        """Log_P(Q)"""
        return _tangent(self.start, self.velocity.omega)

    def tangent_at_end(self):
        """Log_Q(P); the reversed geodesic has generator -Omega"""
        return _tangent(self.end, -self.velocity.omega)

    def at_power(self, t):
        _check_t(t)
        rotation = relative_rotation(self.start, self.end)
        return _conjugate(unitary_fractional_power(rotation, t / 2, cut_tol=self.cut_tol), self.start)


def _check_t(t):
    if not np.isfinite(t) or t < T_MIN or t > T_MAX:
        raise ParameterError(f"t = {t} outside [{T_MIN}, {T_MAX}]")


def t_geometric_mean(p, q, t, cut_tol=DEFAULT_CUT_TOL):
    """P #_t Q, the point at parameter t on the minimizing geodesic"""
    return Geodesic(p, q, cut_tol).at(t)


def distance(p, q, cut_tol=DEFAULT_CUT_TOL):
    """Geodesic distance ||Omega||_F"""
    return connecting_velocity(p, q, cut_tol).norm


def log_map(p, q, cut_tol=DEFAULT_CUT_TOL):
    """Log_P(Q) = (I - 2P) Omega, the initial velocity of the geodesic"""
    return _tangent(p, connecting_velocity(p, q, cut_tol).omega)


def check_tangent(vector, tol=TANGENT_TOL):
    p = vector.base
    x = np.asarray(vector.x)
    if x.shape != p.mat.shape:
        raise ShapeMismatch(f"tangent shape {x.shape} does not match base {p.mat.shape}")
    scale = max(1.0, frobenius_norm(x))
    asym = frobenius_norm(x - adjoint(x))
    if asym > tol * scale:
        raise NotTangent(f"tangent is not Hermitian (||x - x*||_F = {asym:.3e})")
    comp = np.eye(p.n) - p.mat
    diagonal = max(frobenius_norm(p.mat @ x @ p.mat), frobenius_norm(comp @ x @ comp))
    if diagonal > tol * scale:
        raise NotTangent(f"tangent has a block-diagonal part of norm {diagonal:.3e}")


def exp_map(vector, tol=TANGENT_TOL):
    """Exp_P(X) = e^{Omega} P e^{-Omega} with Omega = (I - 2P) X"""
    check_tangent(vector, tol)
    p = vector.base
    omega = p.reflection @ vector.x
    omega = (omega - adjoint(omega)) / 2
    return _conjugate(expm_skew(omega), p)


def vertex_angle(c, a, b, cut_tol=DEFAULT_CUT_TOL):
    """Angle at C between the geodesics towards A and towards B, in [0, pi]"""
    return tangent_angle(log_map(c, a, cut_tol).x, log_map(c, b, cut_tol).x)


def tangent_angle(x_a, x_b):
    """Angle between two tangents at the same base point

    Uses 2 atan2(|u - v|, |u + v|) on the unit tangents, which equals the
    clamped arccos of their inner product but stays accurate at 0 and pi.
    """
    d_a = frobenius_norm(x_a)
    d_b = frobenius_norm(x_b)
    if d_a <= POINT_TOL or d_b <= POINT_TOL:
        raise DegenerateVertex(f"side collapses at the vertex (lengths {d_a:.3e}, {d_b:.3e})")
    u = x_a / d_a
    v = x_b / d_b
    angle = 2 * np.arctan2(frobenius_norm(u - v), frobenius_norm(u + v))
    return float(np.clip(angle, 0.0, np.pi))


def principal_angles(p, q):
    """Ascending principal angles between range P and range Q, in [0, pi/2]

    Cosines come from the singular values of U_P* U_Q and sines from those
    of (I - P) U_Q; pairing them through atan2 keeps small angles accurate.
    """
    _check_compatible(p, q)
    if p.k == 0:
        return np.zeros(0)
    basis_p = range_basis(p)
    basis_q = range_basis(q)
    cosines = linalg.svdvals(adjoint(basis_p) @ basis_q)
    sines = linalg.svdvals(basis_q - basis_p @ (adjoint(basis_p) @ basis_q))
    # cosines descend, sines descend: the largest sine pairs with the smallest cosine
    angles = np.arctan2(sines[::-1], cosines)
    return np.clip(np.sort(angles), 0.0, np.pi / 2)


@dataclass(frozen=True)
class Convention:
    """How distances and means are read off the half-logarithm

    CANONICAL uses Omega = 1/2 log[(I-2Q)(I-2P)] and d = ||Omega||_F.
    SWAPPED takes Omega from the product in the opposite order and the
    distance as 1/4 ||log||_F; hand-computed tables that used those forms
    are reproduced exactly by it.
    """

    name: str
    distance_scale: float = 1.0
    mean_sign: float = 1.0

    def distance(self, p, q, cut_tol=DEFAULT_CUT_TOL):
        return self.distance_scale * distance(p, q, cut_tol)

    def geodesic_point(self, geodesic, t):
        return geodesic.at(self.mean_sign * t)

    def mean(self, p, q, t=0.5, cut_tol=DEFAULT_CUT_TOL):
        return t_geometric_mean(p, q, self.mean_sign * t, cut_tol)


CANONICAL = Convention("canonical")
SWAPPED = Convention("swapped", distance_scale=0.5, mean_sign=-1.0)
CONVENTIONS = {c.name: c for c in (CANONICAL, SWAPPED)}
