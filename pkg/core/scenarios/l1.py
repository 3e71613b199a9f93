"""Isometric diagonal semigroups on l1.

On l1 every isometric C0-semigroup acts as T_t e_n = e^{i w_n t} e_n, so
isometries preserve disjoint support and no counterexample lives there. The
scenario builds such a semigroup, checks it is an l1 isometry that preserves
disjointness, and recovers its frequencies. An amplitude below one turns it
into a non-isometric control.
"""
import math
from typing import Optional, Sequence

import numpy as np

from config import settings
from core.operators import disjointness_violation_witness, isometry_check_sampled, scale
from core.scenarios.base import Scenario
from core.scenarios.isometric import FREQUENCY_CSV_HEADER, FREQUENCY_TOL, recover_frequencies
from core.semigroups import DiagonalPhase, TimeGrid
from core.spaces import SpaceTag, ToleranceConfig


class L1DiagonalScenario(Scenario):
    """Diagonal phase semigroup under the l1 norm.

    Attributes:
        omegas: Frequencies w_n.
        grid: Sample times.
        amplitude: Factor applied to every T_t (1 for the genuine semigroup).
    """

    name = "l1"
    provenance = (
        "Remark (l1): isometric C0-semigroups on l1 satisfy T_t e_n = e^{i w_n t} e_n and "
        "isometries of l_p (p != 2) preserve disjoint support"
    )

    def __init__(
        self,
        omegas: Sequence[float],
        grid: TimeGrid,
        amplitude: float = 1.0,
        trials: int = settings.DEFAULT_TRIALS,
        seed: int = settings.DEFAULT_SEED,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        super().__init__(tolerances, log_level)
        self.semigroup = DiagonalPhase(omegas)
        self.grid = grid
        self.amplitude = float(amplitude)
        self.trials = trials
        self.seed = seed

    def execute(self) -> None:
        S = self.semigroup
        tol = self.tolerances
        self.record("omegas", S.omegas.tolist())
        self.record("amplitude", self.amplitude)
        self.record("grid", self.grid.to_dict())

        operators = [scale(S.evaluate(t), self.amplitude) for t in self.grid]

        # l1 isometry: every column has l1 mass one
        deviation = max(
            float(np.max(np.abs(np.abs(T.entries).sum(axis=0) - 1.0))) for T in operators
        )
        sampled = isometry_check_sampled(operators[-1], SpaceTag.L1, self.trials, self.seed, tol)
        deviation = max(deviation, sampled.worst_deviation)
        self.check("l1_isometry", deviation <= tol.eq_tol, deviation)

        violations = sum(
            disjointness_violation_witness(T, SpaceTag.L1, tol) is not None for T in operators
        )
        self.check("disjointness_preserved", violations == 0, violations)

        fits = recover_frequencies(S, self.grid)
        self.attach("frequencies", FREQUENCY_CSV_HEADER, [[f.k, f.omega, f.max_residual] for f in fits])
        self.record("recovered_omegas", [f.omega for f in fits])
        error = max((abs(f.omega - w) for f, w in zip(fits, S.omegas)), default=math.inf)
        self.check("frequency_recovery", error <= FREQUENCY_TOL, error)


def l1_diagonal_scenario(
    omegas: Sequence[float],
    grid: TimeGrid,
    amplitude: float = 1.0,
    tolerances: Optional[ToleranceConfig] = None
):
    """Run :class:`L1DiagonalScenario` and return its ScenarioResult."""
    return L1DiagonalScenario(omegas, grid, amplitude, tolerances=tolerances).run()
