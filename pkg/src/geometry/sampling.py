#!/usr/bin/env python3
"""
Seed-reproducible sampling of projector points, tangent vectors and
clusters inside geodesic balls.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.geometry.errors import BadRank, ParameterError
from src.geometry.grassmann import TangentVector, exp_map, validate_projector
from src.geometry.matfun import Field, adjoint

logger = logging.getLogger(__name__)

SAMPLE_TOL = 1e-10
DEFAULT_RADIUS = math.pi / 16
# d(center, Exp X) = ||X||_F only while every principal angle stays below pi/2
HARD_RADIUS_LIMIT = math.pi / math.sqrt(2)
RADIUS_CEILING = {
    Field.REAL: math.pi / (2 * math.sqrt(2)),
    Field.COMPLEX: math.pi / 4,
}


@dataclass(frozen=True)
class RngStream:
    """A numbered random stream derived from a base seed

    Streams with different indices (or sub-keys) are statistically
    independent; the same (seed, stream_index, subkeys) always yields the
    same generator.
    """

    seed: int
    stream_index: int = 0

    def generator(self, *subkeys):
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index, *subkeys))
        return np.random.default_rng(seq)


def _as_generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _gaussian(rng, shape, field):
    if field is Field.REAL:
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_projector(n, k, field=Field.COMPLEX, rng=None):
    """Projector onto the column span of a standard Gaussian n x k matrix

    Args:
        n (int): Ambient dimension
        k (int): Rank, 1 <= k <= n - 1
        field (Field): REAL or COMPLEX
        rng: RngStream, numpy Generator or seed

    Returns:
        ProjectorPoint: A validated point of Gr(n, k)
    """
    if not 1 <= k <= n - 1:
        raise BadRank(f"rank {k} outside [1, {n - 1}] for n = {n}")
    rng = _as_generator(rng)
    basis, _ = np.linalg.qr(_gaussian(rng, (n, k), field))
    mat = basis @ adjoint(basis)
    return validate_projector((mat + adjoint(mat)) / 2, tol=SAMPLE_TOL)


def random_tangent(p, norm, rng=None):
    """Random tangent X = P G* (I-P) + (I-P) G P at P scaled to ||X||_F = norm"""
    if norm < 0:
        raise ParameterError(f"tangent norm must be >= 0, got {norm}")
    rng = _as_generator(rng)
    if norm == 0:
        return TangentVector(base=p, x=np.zeros_like(p.mat))
    comp = np.eye(p.n) - p.mat
    g = _gaussian(rng, (p.n, p.n), p.field)
    x = p.mat @ adjoint(g) @ comp + comp @ g @ p.mat
    x = (x + adjoint(x)) / 2
    size = np.linalg.norm(x, "fro")
    if size == 0:
        # Gr(n, 0) and Gr(n, n) have no tangent directions
        return TangentVector(base=p, x=np.zeros_like(p.mat))
    return TangentVector(base=p, x=x * (norm / size))


def random_unitary(n, field=Field.COMPLEX, rng=None):
    """Haar-distributed orthogonal/unitary matrix (QR with the phase fix)"""
    rng = _as_generator(rng)
    q, r = np.linalg.qr(_gaussian(rng, (n, n), field))
    diag = np.diag(r)
    phases = diag / np.where(np.abs(diag) == 0, 1, np.abs(diag))
    return q * phases


def default_radius(field=Field.COMPLEX):
    return DEFAULT_RADIUS


@dataclass(frozen=True)
class BallSpec:
    """Geodesic ball around a projector point

    With enforce_ceiling the radius must stay below the default policy
    ceiling of its field; experiments mapping failure radii turn it off.
    """

    center: object
    radius: float = DEFAULT_RADIUS
    enforce_ceiling: bool = True

    def __post_init__(self):
        if not math.isfinite(self.radius) or self.radius < 0:
            raise ParameterError(f"ball radius must be finite and >= 0, got {self.radius}")
        if self.radius >= HARD_RADIUS_LIMIT:
            raise ParameterError(f"ball radius {self.radius} must be below pi/sqrt(2)")
        ceiling = RADIUS_CEILING[self.center.field]
        if self.enforce_ceiling and self.radius >= ceiling:
            raise ParameterError(
                f"ball radius {self.radius} reaches the {self.center.field.value} ceiling {ceiling:.6f}"
            )


def sample_ball(spec, count, rng=None):
    """count points Exp_C(X) with ||X||_F uniform on [0, radius)"""
    if count < 0:
        raise ParameterError(f"count must be >= 0, got {count}")
    rng = _as_generator(rng)
    points = []
    for _ in range(count):
        if spec.radius == 0:
            points.append(spec.center)
            continue
        r = rng.uniform(0.0, spec.radius)
        points.append(exp_map(random_tangent(spec.center, r, rng)))
    logger.debug(f"Sampled {count} points in a ball of radius {spec.radius}")
    return points
