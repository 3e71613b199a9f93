"""Isometric semigroups on c0: the diagonal structure of the basis orbit.

For a C0 isometric semigroup on c0 every basis vector moves on its own axis,
T_t e_k = gamma_k(t) e_k with gamma_k(t) = e^{i w_k t}. The argument runs in
two steps, and both are probed numerically:

* small-time control: for 0 <= s <= delta_k every off-axis coordinate of
  T_s e_k stays below 1/2, and inside that window the off-diagonal entries
  of row and column k must vanish (:func:`delta_k_probe`);
* the diagonal trajectory gamma_k has modulus one and a linear phase
  (:func:`recover_frequencies`).

The hypothesis quantifies over all t > 0; the scenario samples a finite grid
and reports the grid resolution next to the verdict.
"""
import math
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from core.errors import InvalidGrid, InvalidParameter, NoAdmissiblePrefix, UnwrapAliasing
from core.scenarios.base import Scenario
from core.scenarios.witness import thm2_witness_search, witness_equals
from core.semigroups import DiagonalPhase, SemigroupEvaluator, TimeGrid
from core.spaces import SpaceTag, ToleranceConfig, basis, dual_basis
from utils.logging import get_logger

logger = get_logger("scenario.isometric")

MIN_PHASE_POINTS = 8
# Wrapped phase increments this close to pi are treated as aliased.
ALIAS_MARGIN = 1e-6
OFF_AXIS_BOUND = 0.5
MODULUS_TOL = 1e-12
FREQUENCY_TOL = 1e-8
PHASE_RESIDUAL_TOL = 1e-10

FREQUENCY_CSV_HEADER = ["k", "omega", "residual"]


class PhaseFit(NamedTuple):
    """Linear phase fit of gamma_k(t) = <T_t e_k, e*_k>.

    Attributes:
        k: 1-based basis index.
        omega: Fitted angular frequency (radians per unit time).
        max_residual: Largest deviation of the unwrapped phase from omega t.
        modulus_defect: max_t ||gamma_k(t)| - 1|.
    """

    k: int
    omega: float
    max_residual: float
    modulus_defect: float


class DeltaProbe(NamedTuple):
    """Small-time off-diagonal probe for one basis index.

    Attributes:
        k: 1-based basis index.
        delta: Largest admissible grid prefix endpoint.
        off_diag_max: Largest off-diagonal modulus in row or column k over
            the admissible prefix.
        prefix_length: Number of admissible grid points.
    """

    k: int
    delta: float
    off_diag_max: float
    prefix_length: int


def _diagonal_trajectories(S: SemigroupEvaluator, grid: TimeGrid) -> np.ndarray:
    """Array of shape (len(grid), N) with gamma_k(t) in column k - 1."""
    return np.array([np.diag(S.evaluate(t).entries) for t in grid])


def recover_frequencies(S: SemigroupEvaluator, grid: TimeGrid) -> List[PhaseFit]:
    """Fit gamma_k(t) = e^{i w_k t} for every k.

    The phase of gamma_k is unwrapped along the grid, shifted by the multiple
    of 2 pi that puts the phase line through the origin, and fitted by least
    squares through the origin.

    Raises:
        InvalidGrid: If the grid has fewer than 8 points.
        UnwrapAliasing: If grid gap times the evaluator's frequency bound
            reaches pi, or (without a known bound) a wrapped increment sits
            at pi.
    """
    if len(grid) < MIN_PHASE_POINTS:
        raise InvalidGrid(f"frequency recovery needs >= {MIN_PHASE_POINTS} grid points, got {len(grid)}")
    bound = S.frequency_bound()
    if bound is not None and grid.max_gap * bound >= math.pi:
        raise UnwrapAliasing(
            f"grid gap {grid.max_gap:g} times max |omega| {bound:g} reaches pi"
        )

    times = np.array(grid.points)
    gammas = _diagonal_trajectories(S, grid)
    modulus_defects = np.max(np.abs(np.abs(gammas) - 1.0), axis=0)

    phases = np.angle(gammas)
    steps = np.angle(np.exp(1j * np.diff(phases, axis=0)))
    if bound is None and np.any(np.abs(steps) >= math.pi - ALIAS_MARGIN):
        raise UnwrapAliasing("adjacent phase samples differ by about pi; refine the grid")
    unwrapped = np.vstack([phases[:1], phases[:1] + np.cumsum(steps, axis=0)])

    slope = (unwrapped[-1] - unwrapped[0]) / (times[-1] - times[0])
    turns = np.round((slope * times[0] - unwrapped[0]) / (2 * math.pi))
    unwrapped = unwrapped + 2 * math.pi * turns

    omegas = times @ unwrapped / float(times @ times)
    residuals = np.max(np.abs(unwrapped - np.outer(times, omegas)), axis=0)

    return [
        PhaseFit(k + 1, float(omegas[k]), float(residuals[k]), float(modulus_defects[k]))
        for k in range(S.dim)
    ]


def _probe_entries(operators: Sequence[np.ndarray], times: Sequence[float], k: int) -> DeltaProbe:
    off_axis = np.ones(operators[0].shape[0], dtype=bool)
    off_axis[k - 1] = False

    delta = None
    prefix = 0
    off_diag_max = 0.0
    for t, entries in zip(times, operators):
        column = np.abs(entries[off_axis, k - 1])
        if column.size and column.max() >= OFF_AXIS_BOUND:
            break
        row = np.abs(entries[k - 1, off_axis])
        off_diag_max = max(off_diag_max, float(column.max(initial=0.0)), float(row.max(initial=0.0)))
        delta = t
        prefix += 1

    if prefix == 0:
        raise NoAdmissiblePrefix(
            f"off-axis coordinates of T_t e_{k} reach {OFF_AXIS_BOUND} at the first grid point"
        )
    return DeltaProbe(k, float(delta), off_diag_max, prefix)


def delta_k_probe(S: SemigroupEvaluator, k: int, grid: TimeGrid) -> DeltaProbe:
    """Estimate delta_k and the off-diagonal mass inside the window.

    delta is the largest grid prefix endpoint such that
    |<T_s e_k, e*_j>| < 1/2 for all j != k and all grid s <= delta.
    off_diag_max is the largest |<T_s e_j, e*_k>| or |<T_s e_k, e*_j>|,
    j != k, over that prefix; an isometric semigroup forces it to 0.

    Raises:
        InvalidParameter: If k is outside 1..N.
        NoAdmissiblePrefix: If the first grid point already violates the bound.
    """
    if not 1 <= k <= S.dim:
        raise InvalidParameter(f"basis index {k} outside 1..{S.dim}")
    operators = [S.evaluate(t).entries for t in grid]
    return _probe_entries(operators, grid.points, k)


class IsometricScenario(Scenario):
    """Certify T_t e_k = e^{i w_k t} e_k along a grid.

    Attributes:
        evaluator: The semigroup under test.
        grid: Sample times.
        expected_omegas: Reference frequencies, if known. Defaults to the
            evaluator's own frequencies for DiagonalPhase input.
    """

    name = "isometric"
    provenance = (
        "Theorem: every C0 isometric semigroup on c0 satisfies T_t e_k = e^{i w_k t} e_k "
        "for real w_k (small-time off-diagonal vanishing, then unimodular diagonal trajectories)"
    )

    def __init__(
        self,
        evaluator: SemigroupEvaluator,
        grid: TimeGrid,
        expected_omegas: Optional[Sequence[float]] = None,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        super().__init__(tolerances, log_level)
        self.evaluator = evaluator
        self.grid = grid
        if expected_omegas is None and isinstance(evaluator, DiagonalPhase):
            expected_omegas = evaluator.omegas.tolist()
        self.expected_omegas = None if expected_omegas is None else [float(w) for w in expected_omegas]

    def execute(self) -> None:
        S = self.evaluator
        tol = self.tolerances
        self.record("evaluator", S.to_json())
        self.record("grid", self.grid.to_dict())
        self.record("grid_resolution_note", "hypothesis checked on the sampled grid only")

        fits = recover_frequencies(S, self.grid)
        self.attach("frequencies", FREQUENCY_CSV_HEADER, [[f.k, f.omega, f.max_residual] for f in fits])
        self.record("recovered_omegas", [f.omega for f in fits])

        modulus = max(f.modulus_defect for f in fits)
        self.check("unimodular_diagonal", modulus <= MODULUS_TOL, modulus)

        linearity = max(f.max_residual for f in fits)
        self.check("linear_phase", linearity <= PHASE_RESIDUAL_TOL, linearity)

        if self.expected_omegas is not None:
            if len(self.expected_omegas) != len(fits):
                error = math.inf
            else:
                error = max(abs(f.omega - w) for f, w in zip(fits, self.expected_omegas))
            self.check("frequency_recovery", error <= FREQUENCY_TOL, error)

        operators = [S.evaluate(t).entries for t in self.grid]
        off_diag = 0.0
        deltas = []
        try:
            for k in range(1, S.dim + 1):
                probe = _probe_entries(operators, self.grid.points, k)
                deltas.append(probe.delta)
                off_diag = max(off_diag, probe.off_diag_max)
        except NoAdmissiblePrefix as exc:
            self.record("delta_probe_error", str(exc))
            off_diag = math.inf
        self.record("delta_estimates", deltas)
        self.check("off_diagonal_vanishing", off_diag <= tol.eq_tol, off_diag)

        missing = 0
        for k in range(1, S.dim + 1):
            x = basis(k, S.dim, SpaceTag.C0)
            witness = thm2_witness_search(S, x, self.grid, tol)
            if witness is None or not witness_equals(witness, dual_basis(k, S.dim), tol.eq_tol):
                missing += 1
        self.check("basis_norming_witnesses", missing == 0, missing)
