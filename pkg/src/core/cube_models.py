"""
Corpus of matroid polytopes and the cube experiments.

The cube matroid polytope C^d lifts the 2^d points of {0,1}^d to rank d+1.
Point i is the binary expansion of i (coordinate l = bit l), so labels and
outputs are stable across runs and machines.

Experiments:
- cube_h_star_identity: h*(C^d) is the binomial row and matches the degree
  histograms of K-orderings
- problem_experiment: searches for K-orderings of C^d that are not shelling
  orderings, re-verifying every witness with the definitional checkers
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from sympy import binomial

from src.core.oriented_matroid import PointConfiguration
from src.core.orderings import (
    EnumerationConfig,
    EnumerationMode,
    EnumerationSummary,
    OrderingFilter,
    OrderingReport,
    PolytopeContext,
    enumerate_orderings,
    is_k_ordering,
    is_shelling_ordering,
    iter_k_orderings,
    random_functional_ordering,
)

logger = logging.getLogger(__name__)


# ============================================================================
# CONFIGURATION
# ============================================================================

class CubeConfig:
    """Scale limits for cube generation and experiments."""

    # Larger cubes are generated with a warning.
    DESK_MAX_DIM: int = 6
    # Exhaustive ordering searches are refused above this dimension.
    EXHAUSTIVE_MAX_DIM: int = 4
    # Exhaustive identity checks run up to this dimension, functional samples beyond.
    IDENTITY_EXHAUSTIVE_MAX_DIM: int = 3
    DEFAULT_FUNCTIONAL_SAMPLES: int = 200


# ============================================================================
# EXCEPTIONS
# ============================================================================

class CubeDimensionError(ValueError):
    """Raised for a cube dimension below 1 or beyond the exhaustive limit."""
    pass


# ============================================================================
# GENERATORS
# ============================================================================

@dataclass(frozen=True)
class CubeSpec:
    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or isinstance(self.d, bool) or self.d < 1:
            raise CubeDimensionError(f"Cube dimension must be an integer >= 1, got {self.d!r}")

    @property
    def n(self) -> int:
        return 2 ** self.d

    @property
    def rank(self) -> int:
        return self.d + 1

    def points(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple((i >> l) & 1 for l in range(self.d)) for i in range(self.n))


def cube(d: int) -> PointConfiguration:
    """
    The configuration {0,1}^d in binary counting order, labels e1..e(2^d).

    Raises:
        CubeDimensionError: If d < 1.
    """
    spec = CubeSpec(d)
    if d > CubeConfig.DESK_MAX_DIM:
        logger.warning(f"[WARN] C^{d} has {spec.n} points; face enumeration will be slow")
    return PointConfiguration(name=f"C^{d}", dim=d, points=spec.points())


def simplex(k: int) -> PointConfiguration:
    """The origin and the k unit vectors of Z^k."""
    if k < 1:
        raise ValueError(f"Simplex dimension must be >= 1, got {k}")
    points = [tuple([0] * k)] + [tuple(int(i == j) for j in range(k)) for i in range(k)]
    return PointConfiguration(name=f"simplex^{k}", dim=k, points=tuple(points))


def square() -> PointConfiguration:
    return PointConfiguration(name="square", dim=2, points=cube(2).points)


def triangle() -> PointConfiguration:
    return PointConfiguration(name="triangle", dim=2, points=simplex(2).points)


def prism() -> PointConfiguration:
    """Triangular prism: triangle x segment, 6 points, simple, rank 4."""
    return PointConfiguration(
        name="prism",
        dim=3,
        points=((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)),
    )


def square_pyramid() -> PointConfiguration:
    """Apex over a square; the apex has degree 4 in rank 4, so it is not simple."""
    return PointConfiguration(
        name="square-pyramid",
        dim=3,
        points=((0, 0, 0), (2, 0, 0), (0, 2, 0), (2, 2, 0), (1, 1, 2)),
    )


def corpus() -> List[PointConfiguration]:
    """Simplices up to dimension 5, cubes up to 4, the prism and the square pyramid."""
    return (
        [simplex(k) for k in range(1, 6)]
        + [cube(d) for d in range(1, 5)]
        + [prism(), square_pyramid()]
    )


def cube_face_count(d: int, rank: int) -> int:
    """Number of rank-(k+1) faces of C^d: C(d, k) * 2^(d-k)."""
    k = rank - 1
    if not 0 <= k <= d:
        return 0
    return int(binomial(d, k)) * 2 ** (d - k)


def binomial_row(d: int) -> Tuple[int, ...]:
    return tuple(int(binomial(d, l)) for l in range(d + 1))


# ============================================================================
# h*-IDENTITY
# ============================================================================

@dataclass
class CubeIdentityReport:
    d: int
    mode: str
    h_star: Tuple[int, ...]
    expected: Tuple[int, ...]
    orderings_checked: int = 0
    histogram_failures: int = 0
    examples: List[List[str]] = field(default_factory=list)

    @property
    def h_star_ok(self) -> bool:
        return self.h_star == self.expected

    @property
    def ok(self) -> bool:
        return self.h_star_ok and self.histogram_failures == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.d,
            "mode": self.mode,
            "h_star": list(self.h_star),
            "expected": list(self.expected),
            "h_star_ok": self.h_star_ok,
            "orderings_checked": self.orderings_checked,
            "histogram_failures": self.histogram_failures,
            "examples": self.examples,
            "ok": self.ok,
        }


def cube_h_star_identity(
    d: int,
    mode: Optional[EnumerationMode] = None,
    seed: int = EnumerationConfig.DEFAULT_SEED,
    samples: int = CubeConfig.DEFAULT_FUNCTIONAL_SAMPLES,
    context: Optional[PolytopeContext] = None,
) -> CubeIdentityReport:
    """
    Checks h*(C^d) = (C(d,0), ..., C(d,d)) and that for K-orderings exactly
    C(d,l) vertices have in-degree d - l.

    K-orderings are enumerated exhaustively for small d and otherwise taken
    from `samples` random generic linear functionals.
    """
    if mode is None:
        mode = (
            EnumerationMode.EXHAUSTIVE
            if d <= CubeConfig.IDENTITY_EXHAUSTIVE_MAX_DIM
            else EnumerationMode.SAMPLE
        )
    context = context or PolytopeContext.from_configuration(cube(d))
    expected = binomial_row(d)
    report = CubeIdentityReport(d, mode.value, tuple(context.h_star), expected)
    logger.info(f">>> h*-identity on C^{d} ({mode.value})")

    if mode is EnumerationMode.EXHAUSTIVE:
        orderings = iter_k_orderings(context)
    else:
        rng = random.Random(seed)
        config = cube(d)
        orderings = (random_functional_ordering(config, rng).sequence for _ in range(samples))

    for ordering in orderings:
        result = context.classify(ordering)
        report.orderings_checked += 1
        # In-degree d - l occurs C(d, l) times; the row is symmetric.
        ok = result.is_k and result.d_minus_hist == tuple(reversed(expected)) and result.d_plus_hist == expected
        if not ok:
            report.histogram_failures += 1
            if len(report.examples) < EnumerationConfig.MAX_VIOLATION_EXAMPLES:
                report.examples.append(list(ordering))

    if report.ok:
        logger.info(f"[OK] C^{d}: h*={list(report.h_star)} over {report.orderings_checked} K-orderings")
    else:
        logger.warning(f"[WARN] C^{d}: identity fails (h*={list(report.h_star)}, {report.histogram_failures} bad orderings)")
    return report


# ============================================================================
# K-ORDERINGS THAT ARE NOT SHELLINGS
# ============================================================================

@dataclass
class ExperimentReport:
    d: int
    summary: EnumerationSummary
    witnesses: List[OrderingReport]
    rejected: int = 0

    @property
    def coincide(self) -> bool:
        """K-orderings and shelling orderings are the same set (among those counted)."""
        return self.summary.k_not_shelling == 0 and self.summary.shelling_not_k == 0

    def to_dict(self) -> Dict[str, Any]:
        data = {"dim": self.d}
        data.update(self.summary.to_dict())
        data["coincide"] = self.coincide
        data["witnesses"] = len(self.witnesses)
        data["rejected_witnesses"] = self.rejected
        return data


def problem_experiment(
    d: int,
    mode: Optional[EnumerationMode] = None,
    seed: int = EnumerationConfig.DEFAULT_SEED,
    budget: Optional[int] = None,
    limit: Optional[int] = None,
    workers: int = 1,
    progress: bool = False,
    context: Optional[PolytopeContext] = None,
) -> ExperimentReport:
    """
    Counts K-orderings, shelling orderings and K-but-not-shelling orderings of C^d.

    Exhaustive by default up to d = 3, sampled beyond. Every K-not-shelling
    witness is re-checked with is_k_ordering and is_shelling_ordering
    before it is reported; a witness failing the re-check is dropped and
    logged as an error.

    Raises:
        CubeDimensionError: If an exhaustive run is requested above
            CubeConfig.EXHAUSTIVE_MAX_DIM.
    """
    if mode is None:
        mode = (
            EnumerationMode.EXHAUSTIVE
            if d <= CubeConfig.IDENTITY_EXHAUSTIVE_MAX_DIM
            else EnumerationMode.SAMPLE
        )
    if mode is EnumerationMode.EXHAUSTIVE and d > CubeConfig.EXHAUSTIVE_MAX_DIM:
        raise CubeDimensionError(f"Exhaustive search over (2^{d})! orderings is out of reach")
    if mode is EnumerationMode.EXHAUSTIVE and d == CubeConfig.EXHAUSTIVE_MAX_DIM and budget is None:
        logger.warning(f"[WARN] Exhaustive run on C^{d} without a budget will not finish in practice")

    context = context or PolytopeContext.from_configuration(cube(d))
    context.require_simple()
    result = enumerate_orderings(
        context,
        filter=OrderingFilter.K_NOT_SHELLING,
        mode=mode,
        seed=seed,
        budget=budget,
        limit=limit,
        workers=workers,
        progress=progress,
    )

    witnesses: List[OrderingReport] = []
    rejected = 0
    for report in result.reports:
        ordering = report.ordering.sequence
        if is_k_ordering(context.lattice, context.graph, ordering) and not is_shelling_ordering(context.om, ordering):
            witnesses.append(report)
            logger.warning(f"[WARN] C^{d}: verified K-ordering that is not a shelling: {report.ordering}")
        else:
            rejected += 1
            logger.error(f"[ERROR] C^{d}: witness {report.ordering} failed re-verification")

    experiment = ExperimentReport(d, result.summary, witnesses, rejected)
    if d == 2 and not experiment.coincide:
        logger.error(f"[ERROR] C^2: K-orderings and shelling orderings differ: {result.summary.to_dict()}")
    logger.info(f"[OK] C^{d}: k={result.summary.k} shelling={result.summary.shelling} "
                f"k_not_shelling={result.summary.k_not_shelling}")
    return experiment
