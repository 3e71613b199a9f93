"""Hilbert-space positive control.

On a Hilbert space J(x) is a single functional, and a contraction semigroup
with lim |<T_t x, J(x)>| = 1 forces A x = i lambda x. The control builds the
diagonal generator diag(i lambda_k - mu_k) on l2 with mu_1 = 0, so e_1
satisfies the hypothesis and realizes the conclusion, while every damped
coordinate is a negative control whose hypothesis fails.
"""
import math
from typing import Optional, Sequence

import numpy as np

from core.errors import InvalidParameter, LengthMismatch
from core.scenarios.base import Scenario
from core.semigroups import DiagonalPhase, TimeGrid, trajectory_pairing
from core.spaces import SpaceTag, ToleranceConfig, basis, dual_basis, duality_extreme_points
from core.spectral import EigenClass, eig


class HilbertControlScenario(Scenario):
    """Diagonal contraction semigroup on l2 with an undamped first coordinate."""

    name = "hilbert"
    provenance = (
        "Theorem (Hilbert space): lim_t |<T_t x, J(x)>| = 1 implies A x = i lambda x "
        "for some real lambda"
    )

    def __init__(
        self,
        lambdas: Sequence[float],
        mus: Sequence[float],
        grid: TimeGrid,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        if len(lambdas) != len(mus):
            raise LengthMismatch(f"{len(lambdas)} frequencies but {len(mus)} damping rates")
        if not lambdas:
            raise InvalidParameter("the Hilbert control needs at least one coordinate")
        if mus[0] != 0:
            raise InvalidParameter(f"mu_1 must be 0 so the hypothesis holds for e_1, got {mus[0]}")
        super().__init__(tolerances, log_level)
        self.lambdas = [float(v) for v in lambdas]
        self.mus = [float(v) for v in mus]
        self.grid = grid

    def execute(self) -> None:
        tol = self.tolerances
        semigroup = DiagonalPhase(self.lambdas, damping=self.mus)
        generator = semigroup.generator_matrix()
        N = semigroup.dim
        e1 = basis(1, N, SpaceTag.L2)
        self.record("lambdas", self.lambdas)
        self.record("mus", self.mus)
        self.record("grid", self.grid.to_dict())

        # (a) |<T_t e_1, J(e_1)>| = 1 on the grid
        (j_e1,) = duality_extreme_points(e1, tol)
        values = trajectory_pairing(semigroup, e1, j_e1, self.grid)
        hypothesis = max(abs(abs(v) - 1.0) for v in values)
        self.check("hypothesis_e1", hypothesis <= tol.eq_tol, hypothesis)

        # (b) A e_1 = i lambda_1 e_1
        column = generator.column(1).copy()
        column[0] -= 1j * self.lambdas[0]
        conclusion = float(np.linalg.norm(column))
        self.check("eigenvector_e1", conclusion <= tol.eq_tol, conclusion)

        # (c) damped coordinates violate the hypothesis
        for k, mu in enumerate(self.mus, start=1):
            if mu <= 0:
                continue
            e_k = basis(k, N, SpaceTag.L2)
            moduli = [
                abs(v) for v in trajectory_pairing(semigroup, e_k, dual_basis(k, N, SpaceTag.L2), self.grid)
            ]
            self.check(
                f"hypothesis_fails_e{k}",
                min(moduli) < 1.0 - tol.eq_tol,
                moduli[-1],
                f"|<T_t e_{k}, e_{k}>| = exp(-{mu:g} t) at t = {self.grid.stop:g}",
            )

        # (d) the solver sees i lambda_1 with the expected class
        target = 1j * self.lambdas[0]
        expected = EigenClass.ZERO if abs(target) <= tol.spectral_tol else EigenClass.PURELY_IMAGINARY
        spectrum = eig(generator, tol)
        if spectrum.artifact_note:
            self.record("spectrum_artifact_note", spectrum.artifact_note)
        distances = [abs(p.eigenvalue - target) for p in spectrum.pairs if p.eigen_class is expected]
        distance = min(distances, default=math.inf)
        self.check("spectrum_contains_i_lambda_1", distance <= tol.spectral_tol, distance)


def hilbert_control_scenario(
    lambdas: Sequence[float],
    mus: Sequence[float],
    grid: TimeGrid,
    tolerances: Optional[ToleranceConfig] = None
):
    """Run :class:`HilbertControlScenario` and return its ScenarioResult."""
    return HilbertControlScenario(lambdas, mus, grid, tolerances).run()
