"""Sampled diagonal trajectory t -> <T_t e_k, e*_k> for plotting."""
from typing import Optional

from core.errors import InvalidParameter
from core.scenarios.base import Scenario
from core.semigroups import SemigroupEvaluator, TimeGrid, trajectory_pairing
from core.spaces import ToleranceConfig, basis, dual_basis

TRAJECTORY_CSV_HEADER = ["t", "re", "im", "modulus"]


class TrajectoryScenario(Scenario):
    """Sample gamma_k(t) along a grid and check it stays in the unit disc."""

    name = "trajectory"
    provenance = "Contraction semigroups satisfy |<T_t e_k, e*_k>| <= ||T_t|| <= 1"

    def __init__(
        self,
        evaluator: SemigroupEvaluator,
        grid: TimeGrid,
        index: int = 1,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        if not 1 <= index <= evaluator.dim:
            raise InvalidParameter(f"basis index {index} outside 1..{evaluator.dim}")
        super().__init__(tolerances, log_level)
        self.evaluator = evaluator
        self.grid = grid
        self.index = index

    def execute(self) -> None:
        N = self.evaluator.dim
        k = self.index
        values = trajectory_pairing(self.evaluator, basis(k, N), dual_basis(k, N), self.grid)
        rows = [[t, v.real, v.imag, abs(v)] for t, v in zip(self.grid, values)]
        self.record("evaluator", self.evaluator.to_json())
        self.record("index", k)
        self.record("samples", [dict(zip(TRAJECTORY_CSV_HEADER, row)) for row in rows])
        self.attach("trajectory", TRAJECTORY_CSV_HEADER, rows)

        excess = max(abs(v) for v in values) - 1.0
        self.check("modulus_bounded", excess <= self.tolerances.eq_tol, excess)
