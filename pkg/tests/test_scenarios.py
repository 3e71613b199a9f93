import math

import numpy as np
import pytest

from core.errors import (
    DimensionTooSmall,
    InvalidGrid,
    InvalidParameter,
    LengthMismatch,
    NoAdmissiblePrefix,
    NotUnitVector,
    UnwrapAliasing,
)
from core.operators import OperatorMatrix, signed_permutation
from core.runner import ScenarioRunner
from core.scenarios import (
    ExampleScenario,
    HilbertControlScenario,
    IsometricScenario,
    L1DiagonalScenario,
    ShiftIsometryScenario,
    SpectrumScenario,
    TrajectoryScenario,
    delta_k_probe,
    hilbert_control_scenario,
    l1_diagonal_scenario,
    recover_frequencies,
    run_example_scenario,
    shift_isometry_scenario,
    thm2_witness_search,
)
from core.scenarios.isometric import _probe_entries
from core.semigroups import ClosedFormPaper, DiagonalPhase, MatrixExp, TimeGrid, paper_generator
from core.spaces import TruncVector, basis, dual_basis, pairing


class TestFrequencyRecovery:
    def test_recovers_reference_frequencies(self, grid_0_5):
        fits = recover_frequencies(DiagonalPhase([1.0, -2.0, 3.141592]), grid_0_5)
        np.testing.assert_allclose([f.omega for f in fits], [1.0, -2.0, 3.141592], atol=1e-8)
        assert max(f.modulus_defect for f in fits) <= 1e-14
        assert [f.k for f in fits] == [1, 2, 3]

    def test_zero_frequencies(self, grid_0_5):
        fits = recover_frequencies(DiagonalPhase([0.0, 0.0]), grid_0_5)
        assert all(f.omega == 0 for f in fits)

    def test_random_draws_are_exact(self, grid_0_5):
        rng = np.random.default_rng(0)
        worst_residual = 0.0
        worst_error = 0.0
        for _ in range(1000):
            omegas = rng.uniform(-10, 10, size=16)
            fits = recover_frequencies(DiagonalPhase(omegas), grid_0_5)
            worst_residual = max(worst_residual, max(f.max_residual for f in fits))
            worst_error = max(worst_error, max(abs(f.omega - w) for f, w in zip(fits, omegas)))
        assert worst_residual <= 1e-10
        assert worst_error <= 1e-8

    def test_grid_not_starting_at_zero(self):
        fits = recover_frequencies(DiagonalPhase([2.5, -7.0]), TimeGrid.from_range(1.0, 4.0, 0.1))
        np.testing.assert_allclose([f.omega for f in fits], [2.5, -7.0], atol=1e-8)

    def test_closed_form_modulus_defect(self, grid_0_5):
        fits = recover_frequencies(ClosedFormPaper(8), grid_0_5)
        assert fits[1].modulus_defect == pytest.approx(1 - math.exp(-5.0 / 2), rel=1e-12)

    def test_aliasing_is_reported(self):
        with pytest.raises(UnwrapAliasing):
            recover_frequencies(DiagonalPhase([40.0]), TimeGrid.from_range(0.0, 5.0, 0.1))

    def test_needs_eight_points(self):
        with pytest.raises(InvalidGrid):
            recover_frequencies(DiagonalPhase([1.0]), TimeGrid.from_range(0.0, 0.6, 0.1))


class TestDeltaProbe:
    def test_diagonal_phase_has_no_off_diagonal_mass(self, grid_0_5):
        S = DiagonalPhase([1.0, -2.0, 3.141592])
        for k in (1, 2, 3):
            probe = delta_k_probe(S, k, grid_0_5)
            assert probe.delta == grid_0_5.stop
            assert probe.off_diag_max == 0.0

    def test_closed_form_k1(self, grid_0_10):
        probe = delta_k_probe(ClosedFormPaper(64), 1, grid_0_10)
        assert probe.delta == pytest.approx(1.3)
        assert probe.off_diag_max == pytest.approx(1 - math.exp(-0.65), rel=1e-12)
        assert probe.off_diag_max >= 0.2

    def test_closed_form_k2(self, grid_0_10):
        probe = delta_k_probe(ClosedFormPaper(64), 2, grid_0_10)
        assert probe.delta == pytest.approx(10.0)
        assert probe.off_diag_max == pytest.approx(1 - math.exp(-5.0), rel=1e-12)

    def test_no_admissible_prefix(self):
        entries = [np.array([[1.0, 0.0], [0.9, 1.0]])]
        with pytest.raises(NoAdmissiblePrefix):
            _probe_entries(entries, [0.5], 1)

    def test_index_range(self, grid_0_5):
        with pytest.raises(InvalidParameter):
            delta_k_probe(DiagonalPhase([1.0]), 2, grid_0_5)


class TestWitnessSearch:
    def test_closed_form_e1(self, grid_0_10):
        f = thm2_witness_search(ClosedFormPaper(16), basis(1, 16), grid_0_10)
        np.testing.assert_array_equal(f.coeffs, dual_basis(1, 16).coeffs)
        assert pairing(basis(1, 16), f) == pytest.approx(1.0, abs=1e-10)

    def test_closed_form_e2(self, grid_0_10):
        assert thm2_witness_search(ClosedFormPaper(16), basis(2, 16), grid_0_10) is None

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_diagonal_phase(self, k, grid_0_5):
        f = thm2_witness_search(DiagonalPhase([1.0, -2.0, 0.5]), basis(k, 3), grid_0_5)
        np.testing.assert_array_equal(f.coeffs, dual_basis(k, 3).coeffs)

    def test_tie_picks_the_surviving_coordinate(self, grid_0_5):
        # first coordinate decays, second stays on the unit circle
        S = DiagonalPhase([0.0, 1.0], damping=[0.5, 0.0])
        x = TruncVector([1.0, 1.0])
        f = thm2_witness_search(S, x, grid_0_5)
        assert f.support == [2]
        assert abs(pairing(x, f)) == pytest.approx(1.0)

    def test_requires_unit_vector(self, grid_0_5):
        with pytest.raises(NotUnitVector):
            thm2_witness_search(DiagonalPhase([1.0, 2.0]), TruncVector([2.0, 0.0]), grid_0_5)


class TestExampleScenario:
    def test_passes_on_sparse_grid(self):
        result = run_example_scenario(64, TimeGrid((0.0, 0.1, 1.0, 10.0)))
        assert result.overall, result.failures
        assert result.assertion("pairing_e1").metric == 0.0
        rows = result.tables["trajectories"].rows
        assert rows[-1][0] == 10.0 and rows[-1][1] == 1.0

    @pytest.mark.parametrize("dim", [8, 64, 256])
    def test_passes_across_dimensions(self, dim, grid_0_10):
        result = ExampleScenario(dim, grid_0_10).run()
        assert result.overall, result.failures
        assert result.assertion("basis_eigenvectors").metric == 0.0

    def test_metrics_stay_flat_under_refinement(self):
        # dyadic steps give nested lattices
        grids = [TimeGrid.from_range(0.0, 10.0, 2.0 ** -j) for j in range(1, 5)]
        results = [ExampleScenario(64, grid).run() for grid in grids]
        assert all(r.overall for r in results)
        for coarse, fine in zip(results, results[1:]):
            for a in coarse.assertions:
                assert fine.assertion(a.label).metric <= a.metric + 1e-12, a.label

    def test_delta_estimate_improves_under_refinement(self):
        S = ClosedFormPaper(64)
        deltas = [delta_k_probe(S, 1, TimeGrid.from_range(0.0, 10.0, 2.0 ** -j)).delta for j in range(1, 7)]
        gaps = [2 * math.log(2) - d for d in deltas]
        assert all(g > 0 for g in gaps)
        assert all(b <= a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] <= 2.0 ** -6

    def test_records_checked_law_points(self, grid_0_10):
        result = ExampleScenario(8, grid_0_10).run()
        assert len(result.metadata["law_points"]) == 10

    def test_needs_four_dimensions(self, grid_0_5):
        with pytest.raises(DimensionTooSmall):
            ExampleScenario(3, grid_0_5)


class TestIsometricScenario:
    def test_diagonal_phase_passes(self, grid_0_5):
        result = IsometricScenario(DiagonalPhase([1.0, -2.0, 3.141592]), grid_0_5).run()
        assert result.overall, result.failures
        assert result.tables["frequencies"].header == ["k", "omega", "residual"]
        assert result.assertion("frequency_recovery").metric <= 1e-8

    @pytest.mark.parametrize("S", [ClosedFormPaper(8), MatrixExp(paper_generator(8))])
    def test_contraction_semigroup_fails(self, S, grid_0_5):
        result = IsometricScenario(S, grid_0_5).run()
        assert not result.overall
        labels = {a.label for a in result.failures}
        assert {"unimodular_diagonal", "off_diagonal_vanishing"} <= labels


class TestHilbertControl:
    def test_reference_case(self):
        grid = TimeGrid.from_range(0.0, 2.0, 0.1)
        result = hilbert_control_scenario([2.0, 1.0], [0.0, 0.5], grid)
        assert result.overall, result.failures
        assert result.assertion("eigenvector_e1").metric == 0.0
        assert result.assertion("hypothesis_fails_e2").metric == pytest.approx(math.exp(-1.0), rel=1e-12)
        assert result.assertion("spectrum_contains_i_lambda_1").passed
        assert "last coordinate alone" in result.metadata["spectrum_artifact_note"]

    def test_identity_semigroup(self, grid_0_5):
        result = HilbertControlScenario([0.0, 0.0], [0.0, 0.0], grid_0_5).run()
        assert result.overall
        assert not any(a.label.startswith("hypothesis_fails") for a in result.assertions)

    def test_pi_frequency(self, grid_0_5):
        result = HilbertControlScenario([math.pi, 1.0], [0.0, 0.0], grid_0_5).run()
        assert result.assertion("eigenvector_e1").metric == 0.0

    def test_validation(self, grid_0_5):
        with pytest.raises(LengthMismatch):
            HilbertControlScenario([1.0, 2.0], [0.0], grid_0_5)
        with pytest.raises(InvalidParameter):
            HilbertControlScenario([1.0, 2.0], [0.1, 0.0], grid_0_5)


class TestShiftScenario:
    def test_shift_n16(self):
        result = shift_isometry_scenario(16, trials=1000, seed=0)
        assert result.overall, result.failures
        assert result.metadata["disjointness_witness"] == [1, 2]
        assert result.assertion("isometry").metric <= 1e-14
        assert result.assertion("not_semigroup_embeddable").metric == 1.0

    def test_signed_permutation_control(self):
        control = signed_permutation([2, 3, 4, 1], [1, -1, 1j, 1])
        result = ShiftIsometryScenario(4, trials=50, operator=control).run()
        assert result.assertion("isometry").passed
        assert not result.assertion("disjointness_violated").passed
        assert result.metadata["disjointness_witness"] is None

    def test_near_axis_operator_is_not_certified(self):
        entries = np.eye(5, dtype=np.complex128)
        entries[1, 0] = 1e-6
        result = ShiftIsometryScenario(5, trials=20, operator=OperatorMatrix(entries)).run()
        embeddable = result.assertion("not_semigroup_embeddable")
        assert not embeddable.passed
        assert embeddable.metric == pytest.approx(1e-6)

    def test_needs_four_dimensions(self):
        with pytest.raises(DimensionTooSmall):
            ShiftIsometryScenario(3)


class TestL1Scenario:
    def test_reference_case(self, grid_0_5):
        result = l1_diagonal_scenario([1.0, -2.0, 0.5], grid_0_5)
        assert result.overall, result.failures
        assert result.assertion("frequency_recovery").metric <= 1e-8

    def test_zero_frequencies(self, grid_0_5):
        assert l1_diagonal_scenario([0.0, 0.0, 0.0], grid_0_5).overall

    def test_damped_amplitude_fails_isometry(self, grid_0_5):
        result = L1DiagonalScenario([1.0, -2.0, 0.5], grid_0_5, amplitude=0.9, trials=100).run()
        isometry = result.assertion("l1_isometry")
        assert not isometry.passed
        assert isometry.metric == pytest.approx(0.1, abs=1e-12)
        assert result.assertion("disjointness_preserved").passed


class TestSpectrumAndTrajectory:
    def test_spectrum_sweep(self):
        result = SpectrumScenario([8, 32, 128]).run()
        assert result.overall, result.failures
        rows = result.tables["spectrum"].rows
        assert [row[0] for row in rows] == [8, 32, 128]
        assert all(row[2] == pytest.approx(1.0, abs=1e-8) for row in rows)
        assert "spectrum_N32" in result.tables
        assert "artifact_notes" not in result.metadata

    def test_small_section_notes_its_artifact_tail(self):
        result = SpectrumScenario([4, 8]).run()
        assert result.overall, result.failures
        assert list(result.metadata["artifact_notes"]) == ["4"]

    def test_trajectory_of_e2(self, grid_0_5):
        result = TrajectoryScenario(ClosedFormPaper(8), grid_0_5, index=2).run()
        assert result.overall
        rows = result.tables["trajectory"].rows
        assert rows[-1][3] == pytest.approx(math.exp(-2.5))

    def test_trajectory_index_range(self, grid_0_5):
        with pytest.raises(InvalidParameter):
            TrajectoryScenario(ClosedFormPaper(4), grid_0_5, index=5)


def test_runner_collects_results_and_errors(grid_0_5):
    short = TimeGrid.from_range(0.0, 0.4, 0.1)
    scenarios = [
        L1DiagonalScenario([1.0, 2.0], grid_0_5, trials=10),
        IsometricScenario(DiagonalPhase([1.0]), short),
    ]
    outcomes = ScenarioRunner().run(scenarios)
    assert outcomes[0].overall
    assert isinstance(outcomes[1], InvalidGrid)


def test_scenario_can_run_twice(grid_0_5):
    scenario = L1DiagonalScenario([1.0], grid_0_5, trials=5)
    first, second = scenario.run(), scenario.run()
    assert first.to_json() == second.to_json()
