"""The explicit contraction semigroup on c0 without imaginary eigenvectors.

The generator sends e_1 to sum_{k>=2} e_k / k and e_i to -e_i / i. Its
semigroup is contractive, keeps <T_t e_1, e*_1> = 1 for all t, and yet the
generator has no eigenvector for a purely imaginary eigenvalue (or 0) in c0.
This scenario checks each of those claims on a finite section.
"""
from typing import Optional

from config import settings
from core.errors import DimensionTooSmall
from core.operators import op_norm, subtract
from core.scenarios.base import Scenario
from core.scenarios.trajectory import TRAJECTORY_CSV_HEADER
from core.scenarios.witness import thm2_witness_search, witness_equals
from core.semigroups import (
    ClosedFormPaper,
    MatrixExp,
    TimeGrid,
    paper_generator,
    semigroup_residual,
    trajectory_pairing,
)
from core.spaces import SpaceTag, ToleranceConfig, basis, dual_basis
from core.spectral import basis_eigen_residual, spurious_zero_analysis

CONTRACTION_TOL = 1e-12
PAIRING_TOL = 1e-15
LAW_TOL = 1e-10
ORACLE_TOL = 1e-10
# Semigroup law and exponential oracle are checked on at most this many grid points.
LAW_POINTS = 10


class ExampleScenario(Scenario):
    """Certify the contraction semigroup example at truncation dimension N.

    Attributes:
        dim: Truncation dimension (>= 4).
        grid: Sample times.
        exp_tol: Taylor tolerance of the matrix-exponential oracle.
    """

    name = "example"
    provenance = (
        "Example: A e_1 = sum_{k>=2} e_k/k, A e_i = -e_i/i generates a C0 contraction semigroup "
        "on c0 with <e^{tA} e_1, e*_1> = 1, no eigenvector for a purely imaginary eigenvalue (or 0), "
        "and e_k an eigenvector for -1/k"
    )

    def __init__(
        self,
        dim: int,
        grid: TimeGrid,
        tolerances: Optional[ToleranceConfig] = None,
        exp_tol: float = settings.EXP_TOL,
        log_level: Optional[int] = None
    ) -> None:
        if dim < 4:
            raise DimensionTooSmall(f"the example scenario needs N >= 4, got {dim}")
        super().__init__(tolerances, log_level)
        self.dim = dim
        self.grid = grid
        self.exp_tol = exp_tol

    def execute(self) -> None:
        N = self.dim
        tol = self.tolerances
        closed = ClosedFormPaper(N)
        generator = paper_generator(N)
        exponential = MatrixExp(generator, self.exp_tol)
        sparse_grid = self.grid.subsample(LAW_POINTS)

        self.record("dim", N)
        self.record("grid", self.grid.to_dict())
        self.record("law_points", list(sparse_grid.points))
        self.record("truncation_error_at_stop", closed.truncation_error(self.grid.stop))

        # (a) ||T_t||_c0 = 1 at every grid point
        contraction = max(
            abs(op_norm(closed.evaluate(t), SpaceTag.C0).value - 1.0) for t in self.grid
        )
        self.check("contraction", contraction <= CONTRACTION_TOL, contraction)

        # (b) <T_t e_1, e*_1> = 1
        values = trajectory_pairing(closed, basis(1, N), dual_basis(1, N), self.grid)
        self.attach(
            "trajectories",
            TRAJECTORY_CSV_HEADER,
            [[t, v.real, v.imag, abs(v)] for t, v in zip(self.grid, values)],
        )
        pairing_dev = max(abs(v - 1.0) for v in values)
        self.check("pairing_e1", pairing_dev <= PAIRING_TOL, pairing_dev)

        # (c) T_{s+t} = T_s T_t
        law = max(semigroup_residual(closed, s, t) for s in sparse_grid for t in sparse_grid)
        self.check("semigroup_law", law <= LAW_TOL, law)

        # (d) no genuine zero or purely imaginary eigenvalue
        spectrum = spurious_zero_analysis([N], tol)
        row = spectrum.rows[0]
        self.record("spectrum", spectrum.to_json())
        self.check("spurious_zero", spectrum.passed, row.zero_defect, spectrum.conclusion)

        # (e) A e_k = -e_k / k for 2 <= k <= N
        eigen = max(basis_eigen_residual(generator.matrix, k, -1.0 / k) for k in range(2, N + 1))
        self.check("basis_eigenvectors", eigen <= tol.eq_tol, eigen)

        # (f) e^{tA} agrees with the closed form
        oracle = 0.0
        exp_contraction = 0.0
        for t in sparse_grid:
            expm_t = exponential.evaluate(t)
            oracle = max(oracle, op_norm(subtract(expm_t, closed.evaluate(t)), SpaceTag.C0).value)
            exp_contraction = max(exp_contraction, op_norm(expm_t, SpaceTag.C0).value - 1.0)
        self.check("exp_oracle", oracle <= ORACLE_TOL, oracle)
        self.check("exp_contraction", exp_contraction <= ORACLE_TOL, exp_contraction)

        # e*_1 is the norming witness for e_1; e_2 has none
        e1_witness = thm2_witness_search(closed, basis(1, N), self.grid, tol)
        found = e1_witness is not None and witness_equals(e1_witness, dual_basis(1, N), tol.eq_tol)
        e2_witness = thm2_witness_search(closed, basis(2, N), self.grid, tol)
        self.check(
            "norming_witness",
            found and e2_witness is None,
            float(found) - float(e2_witness is not None),
            "e*_1 norms the e_1 orbit; the e_2 orbit has no norming witness",
        )


def run_example_scenario(
    dim: int,
    grid: TimeGrid,
    tolerances: Optional[ToleranceConfig] = None
):
    """Run :class:`ExampleScenario` and return its ScenarioResult."""
    return ExampleScenario(dim, grid, tolerances).run()
