"""Norming-functional witness search.

Given a unit vector x, look for y* in J(x) with |<T_t x, y*>| = 1 along a
time grid. The extreme points of J(x) are tried first; if none qualifies,
convex combinations of the first few extreme points are scanned on a simplex
lattice. The t -> infinity hypothesis that guarantees such a witness exists
is the caller's responsibility; only the conclusion is checked here.
"""
import itertools
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from core.operators import apply
from core.semigroups import SemigroupEvaluator, TimeGrid
from core.spaces import (
    DualityWitness,
    ToleranceConfig,
    TruncVector,
    convex_combination,
    duality_extreme_points,
    pairing,
)
from utils.logging import get_logger

logger = get_logger("scenario.witness")

SIMPLEX_DIVISIONS = 8
MAX_SIMPLEX_VERTICES = 4


def _simplex_weights(vertices: int, divisions: int) -> Iterator[Tuple[float, ...]]:
    """Interior and face points of the simplex lattice with step 1/divisions.

    Vertices of the simplex (a single weight of 1) are skipped; they are the
    extreme points themselves.
    """
    for cuts in itertools.combinations(range(divisions + vertices - 1), vertices - 1):
        bounds = (-1,) + cuts + (divisions + vertices - 1,)
        parts = [bounds[i + 1] - bounds[i] - 1 for i in range(vertices)]
        if max(parts) == divisions:
            continue
        yield tuple(p / divisions for p in parts)


def _min_modulus(images: Sequence[TruncVector], f: DualityWitness) -> float:
    return min(abs(pairing(image, f)) for image in images)


def thm2_witness_search(
    S: SemigroupEvaluator,
    x: TruncVector,
    grid: TimeGrid,
    tol: Optional[ToleranceConfig] = None
) -> Optional[DualityWitness]:
    """First y* in J(x) with min_t |<T_t x, y*>| >= 1 - eq_tol, or None.

    Raises:
        NotUnitVector: If ``x`` is not a unit vector.
    """
    tol = tol or ToleranceConfig.from_settings()
    extreme = duality_extreme_points(x, tol)
    images = [apply(S.evaluate(t), x) for t in grid]

    for f in extreme:
        if _min_modulus(images, f) >= 1.0 - tol.eq_tol:
            logger.debug(f"extreme point on support {f.support} is a witness")
            return f

    vertices: List[DualityWitness] = extreme[:MAX_SIMPLEX_VERTICES]
    if len(vertices) < 2:
        return None
    for weights in _simplex_weights(len(vertices), SIMPLEX_DIVISIONS):
        g = convex_combination(vertices, weights)
        if _min_modulus(images, g) >= 1.0 - tol.eq_tol:
            logger.debug(f"convex combination {weights} is a witness")
            return g
    return None


def witness_equals(f: DualityWitness, g: DualityWitness, atol: float) -> bool:
    """Coefficient-wise comparison of two witnesses."""
    return f.base_dim == g.base_dim and bool(np.allclose(f.coeffs, g.coeffs, rtol=0.0, atol=atol))
