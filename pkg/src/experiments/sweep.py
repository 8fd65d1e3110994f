#!/usr/bin/env python3
"""
Monte-Carlo radius sweeps and violation witnesses.

Every random draw is keyed: the ball center of radius i comes from stream
(seed, i) and sample j at that radius from (seed, i, j). Results therefore
do not depend on the number of worker processes.
"""

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from src.geometry.errors import GrassmannError, NotFound, ParameterError
from src.geometry.grassmann import CANONICAL, CONVENTIONS, ProjectorPoint, validate_projector
from src.geometry.inequal import DEFAULT_T_GRID, FAMILIES, RESIDUAL_EPS, triangle_report
from src.geometry.matfun import DEFAULT_CUT_TOL, Field
from src.geometry.sampling import BallSpec, RngStream, random_projector, sample_ball
from src.utils.matrix_io import matrix_from_dict, matrix_to_dict

logger = logging.getLogger(__name__)

WITNESS_EPS = 1e-6
SWEEP_COLUMNS = (
    "field", "n", "k", "radius", "samples", "cutlocus_count",
    "semipara_vr", "cosine_vr", "cosine2_vr", "anglesum_vr", "quad_vr", "midpoint_vr", "tcontract_vr",
    "worst_residual", "seed",
)


@dataclass
class SweepRecord:
    """Violation statistics of one (configuration, radius) cell"""

    field: Field
    n: int
    k: int
    radius: float
    samples: int
    seed: int
    cutlocus_count: int = 0
    degenerate_count: int = 0
    violation_counts: dict = field(default_factory=lambda: {name: 0 for name in FAMILIES})
    worst_residual: float = math.nan

    def violation_rate(self, family):
        return self.violation_counts[family] / self.samples if self.samples else 0.0

    @property
    def violation_rates(self):
        return {name: self.violation_rate(name) for name in FAMILIES}

    def to_row(self):
        row = [self.field.value, self.n, self.k, _fmt(self.radius), self.samples, self.cutlocus_count]
        row.extend(_fmt(self.violation_rate(name)) for name in FAMILIES)
        row.extend([_fmt(self.worst_residual), self.seed])
        return row


def _fmt(value):
    return format(value, ".12g")


def parse_t_grid(values):
    """Parse "1/3"-style strings (or numbers) into exact fractions in [0, 1]"""
    grid = []
    for value in values:
        try:
            t = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"bad t value {value!r}")
        if not 0 <= t <= 1:
            raise ParameterError(f"t = {value} outside [0, 1]")
        grid.append(t)
    return tuple(grid)


def _ball_center(n, k, field_, seed, radius_index):
    return random_projector(n, k, field_, RngStream(seed).generator(radius_index))


def _sample_triple(center, radius, seed, radius_index, sample_index):
    spec = BallSpec(center, radius, enforce_ceiling=False)
    return sample_ball(spec, 3, RngStream(seed).generator(radius_index, sample_index))


def _sweep_cell(task):
    """Evaluate every sample at one radius; runs in a worker process"""
    n, k, field_value, radius_index, radius, samples, t_grid, seed, convention_name, cut_tol, eps = task
    field_ = Field(field_value)
    convention = CONVENTIONS[convention_name]
    record = SweepRecord(field=field_, n=n, k=k, radius=radius, samples=samples, seed=seed)
    center = _ball_center(n, k, field_, seed, radius_index)
    worst = math.inf

    for sample_index in range(samples):
        a, b, c = _sample_triple(center, radius, seed, radius_index, sample_index)
        report = triangle_report(a, b, c, t_grid, convention, cut_tol)
        if not report.valid:
            record.cutlocus_count += 1
            continue
        if report.degenerate:
            record.degenerate_count += 1
        for name, violated in report.violations(eps).items():
            record.violation_counts[name] += int(violated)
        value = report.worst_residual()
        if not math.isnan(value):
            worst = min(worst, value)

    record.worst_residual = worst if math.isfinite(worst) else math.nan
    if record.cutlocus_count:
        logger.warning(f"radius {radius}: {record.cutlocus_count}/{samples} samples hit the cut locus")
    logger.info(
        f"Gr({n},{k})({field_.value}) radius {radius}: worst residual {record.worst_residual:.3e}, "
        f"semipara rate {record.violation_rate('semipara'):.3f}"
    )
    return record


def radius_sweep(n, k, field_, radii, samples_per_radius, t_grid=DEFAULT_T_GRID, seed=42,
                 convention=CANONICAL, workers=1, cut_tol=DEFAULT_CUT_TOL, eps=RESIDUAL_EPS):
    """Violation rates of every inequality family at each radius

    Args:
        n (int): Ambient dimension
        k (int): Rank
        field_ (Field): REAL or COMPLEX
        radii (list): Positive, ascending ball radii
        samples_per_radius (int): Triples drawn per radius
        t_grid: Contraction parameters
        seed (int): Base seed; equal seeds give identical records
        convention (Convention): Distance and mean reading
        workers (int): Worker processes; 1 evaluates in-process

    Returns:
        list: One SweepRecord per radius, in the order of radii
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise ParameterError("radii must be positive")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ParameterError("radii must be strictly ascending")
    if samples_per_radius < 1:
        raise ParameterError(f"samples_per_radius must be >= 1, got {samples_per_radius}")
    tasks = [
        (n, k, field_.value, index, radius, samples_per_radius, tuple(t_grid), seed, convention.name, cut_tol, eps)
        for index, radius in enumerate(radii)
    ]
    logger.info(f"Sweeping {len(radii)} radii on Gr({n},{k})({field_.value}) with {workers} worker(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_cell, tasks))
    return [_sweep_cell(task) for task in tasks]


def write_sweep_csv(records, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for record in records:
        writer.writerow(record.to_row())


@dataclass
class Witness:
    """A sampled triangle violating at least one inequality, replayable exactly"""

    field: Field
    n: int
    k: int
    radius: float
    seed: int
    attempt: int
    convention: str
    t_grid: tuple
    points: list
    residuals: dict

    @property
    def violated(self):
        return sorted(name for name, value in self.residuals.items() if value < -WITNESS_EPS)

    def to_dict(self):
        return {
            "field": self.field.value,
            "n": self.n,
            "k": self.k,
            "radius": self.radius,
            "seed": self.seed,
            "attempt": self.attempt,
            "convention": self.convention,
            "t_grid": [str(t) for t in self.t_grid],
            "points": [matrix_to_dict(p.mat) for p in self.points],
            "residuals": self.residuals,
        }

    @classmethod
    def from_dict(cls, doc):
        points = []
        for matrix_doc in doc["points"]:
            mat = matrix_from_dict(matrix_doc)
            checked = validate_projector(mat)
            # keep the stored entries bit for bit
            points.append(ProjectorPoint(field=checked.field, n=checked.n, k=checked.k, mat=mat))
        return cls(
            field=Field(doc["field"]),
            n=doc["n"],
            k=doc["k"],
            radius=doc["radius"],
            seed=doc["seed"],
            attempt=doc["attempt"],
            convention=doc["convention"],
            t_grid=parse_t_grid(doc["t_grid"]),
            points=points,
            residuals=doc["residuals"],
        )


def find_violation(n, k, field_, radius, max_tries, seed=42, convention=CANONICAL,
                   t_grid=DEFAULT_T_GRID, eps=WITNESS_EPS, cut_tol=DEFAULT_CUT_TOL):
    """First sampled triangle with some residual below -eps

    Attempt i draws a fresh center and triple from stream (seed, i).

    Raises:
        NotFound: No violation within max_tries attempts
    """
    if max_tries < 1:
        raise ParameterError(f"max_tries must be >= 1, got {max_tries}")
    for attempt in range(max_tries):
        rng = RngStream(seed).generator(attempt)
        center = random_projector(n, k, field_, rng)
        points = sample_ball(BallSpec(center, radius, enforce_ceiling=False), 3, rng)
        report = triangle_report(*points, t_grid, convention, cut_tol)
        if not report.valid:
            continue
        residuals = report.residuals()
        if any(value < -eps for value in residuals.values() if not math.isnan(value)):
            logger.info(f"Violation found at attempt {attempt}: worst residual {report.worst_residual():.6g}")
            return Witness(
                field=field_, n=n, k=k, radius=radius, seed=seed, attempt=attempt,
                convention=convention.name, t_grid=tuple(t_grid), points=points, residuals=residuals,
            )
    raise NotFound(f"no violation below -{eps} in {max_tries} tries at radius {radius}")


def replay_witness(witness, cut_tol=DEFAULT_CUT_TOL):
    """Recompute the residuals of a stored witness"""
    convention = CONVENTIONS.get(witness.convention)
    if convention is None:
        raise GrassmannError(f"unknown convention {witness.convention!r}")
    report = triangle_report(*witness.points, witness.t_grid, convention, cut_tol)
    return report.residuals()
