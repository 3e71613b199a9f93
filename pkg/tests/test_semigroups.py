import math

import numpy as np
import pytest
import scipy.linalg

from core.errors import InvalidGrid, InvalidParameter, LengthMismatch, NegativeTime
from core.operators import apply, op_norm, subtract
from core.semigroups import (
    ClosedFormPaper,
    DiagonalPhase,
    MatrixExp,
    TimeGrid,
    evaluate,
    evaluator_from_json,
    expm_scaling_squaring,
    paper_generator,
    parse_grid_bounds,
    semigroup_residual,
    strong_continuity_profile,
    trajectory_pairing,
)
from core.spaces import SpaceTag, basis, dual_basis


def test_grid_includes_stop_on_lattice():
    grid = TimeGrid.from_range(0.0, 5.0, 0.1)
    assert len(grid) == 51
    assert grid.stop == pytest.approx(5.0)
    assert grid.max_gap == pytest.approx(0.1)


def test_grid_excludes_stop_off_lattice():
    assert TimeGrid.from_range(0.0, 1.0, 0.3).points == pytest.approx((0.0, 0.3, 0.6, 0.9))


@pytest.mark.parametrize("text", ["0:1", "a:1:0.1", "0:1:0", "1:0:0.1", "-1:1:0.1"])
def test_grid_parse_errors(text):
    with pytest.raises(InvalidGrid):
        TimeGrid.parse(text)


def test_grid_must_increase():
    with pytest.raises(InvalidGrid):
        TimeGrid((0.0, 1.0, 1.0))


def test_subsample_keeps_endpoints():
    grid = TimeGrid.from_range(0.0, 10.0, 0.1).subsample(10)
    assert len(grid) == 10
    assert grid.start == 0.0
    assert grid.stop == pytest.approx(10.0)


def test_paper_generator_n3():
    A = paper_generator(3).matrix.entries
    np.testing.assert_allclose(A[:, 0], [0, 1 / 2, 1 / 3])
    np.testing.assert_allclose(A[:, 1], [0, -1 / 2, 0])
    np.testing.assert_allclose(A[:, 2], [0, 0, -1 / 3])


def test_generator_acts_on_e2():
    A = paper_generator(5).matrix
    np.testing.assert_allclose(apply(A, basis(2, 5)).coords, -0.5 * basis(2, 5).coords)


def test_closed_form_at_zero_is_identity():
    np.testing.assert_array_equal(ClosedFormPaper(6).evaluate(0.0).entries, np.eye(6))


def test_closed_form_entry():
    T = evaluate(ClosedFormPaper(4), 1.0)
    assert T.entries[1, 0].real == pytest.approx(1 - math.exp(-0.5), rel=1e-15)
    assert T.entries[1, 0].real == pytest.approx(0.393469, abs=1e-6)
    assert T.entries[0, 0] == 1


def test_closed_form_truncation_error():
    assert ClosedFormPaper(9).truncation_error(10.0) == pytest.approx(1 - math.exp(-1.0))


def test_zero_frequencies_give_identity():
    S = DiagonalPhase([0.0, 0.0, 0.0])
    np.testing.assert_array_equal(S.evaluate(3.7).entries, np.eye(3))


def test_negative_time_rejected():
    with pytest.raises(NegativeTime):
        ClosedFormPaper(3).evaluate(-0.1)


def test_damping_validation():
    with pytest.raises(LengthMismatch):
        DiagonalPhase([1.0, 2.0], damping=[0.0])
    with pytest.raises(InvalidParameter):
        DiagonalPhase([1.0], damping=[-1.0])


def test_damped_phase():
    S = DiagonalPhase([2.0, 1.0], damping=[0.0, 0.5])
    assert not S.is_isometric
    assert abs(S.evaluate(2.0).entries[1, 1]) == pytest.approx(math.exp(-1.0))


@pytest.mark.parametrize("dim", [8, 64])
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_matrix_exp_matches_closed_form(dim, t):
    closed = ClosedFormPaper(dim).evaluate(t)
    expm = MatrixExp(paper_generator(dim)).evaluate(t)
    assert op_norm(subtract(expm, closed), SpaceTag.C0).value <= 1e-10


@pytest.mark.parametrize("t", [0.0, 0.5, 3.0])
def test_scaling_squaring_matches_scipy(t):
    rng = np.random.default_rng(5)
    A = t * (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))) / 6
    expected = scipy.linalg.expm(A)
    error = np.linalg.norm(expm_scaling_squaring(A, 1e-12) - expected) / np.linalg.norm(expected)
    assert error <= 1e-10


def test_matrix_exp_at_zero_is_identity():
    np.testing.assert_allclose(MatrixExp(paper_generator(8)).evaluate(0.0).entries, np.eye(8), atol=1e-12)


def test_semigroup_residual_examples():
    assert semigroup_residual(ClosedFormPaper(8), 0.0, 0.0) == 0.0
    assert semigroup_residual(ClosedFormPaper(64), 0.3, 0.7) <= 1e-12
    assert semigroup_residual(MatrixExp(paper_generator(64)), 1.0, 2.0) <= 1e-10


@pytest.mark.parametrize("S", [
    ClosedFormPaper(8),
    MatrixExp(paper_generator(8)),
    DiagonalPhase([1.0, -2.0, 3.141592]),
], ids=["closed-form", "matrix-exp", "diagonal-phase"])
def test_semigroup_law_on_grid(S):
    points = TimeGrid.linspace(0.0, 5.0, 10)
    worst = max(semigroup_residual(S, s, t) for s in points for t in points)
    assert worst <= 1e-10


def test_strong_continuity_examples():
    profile = dict(strong_continuity_profile(ClosedFormPaper(8), TimeGrid((0.0, 0.1))))
    assert profile[0.0] == 0.0
    assert profile[0.1] == pytest.approx(1 - math.exp(-0.05), rel=1e-12)
    ((_, defect),) = strong_continuity_profile(DiagonalPhase([1.0, -2.0]), TimeGrid((0.01,)))
    assert defect == pytest.approx(abs(np.exp(-0.02j) - 1), rel=1e-12)


def test_strong_continuity_is_monotone_for_closed_form(grid_0_10):
    defects = [d for _, d in strong_continuity_profile(ClosedFormPaper(16), grid_0_10)]
    assert all(b >= a for a, b in zip(defects, defects[1:]))


def test_trajectory_pairing_examples(grid_0_5):
    S = ClosedFormPaper(8)
    ones = trajectory_pairing(S, basis(1, 8), dual_basis(1, 8), grid_0_5)
    assert all(v == 1 for v in ones)
    decay = trajectory_pairing(S, basis(2, 8), dual_basis(2, 8), grid_0_5)
    np.testing.assert_allclose(decay, np.exp(-np.array(grid_0_5.points) / 2), rtol=1e-15)
    phase = trajectory_pairing(DiagonalPhase([1.0, -2.0]), basis(2, 2), dual_basis(2, 2), grid_0_5)
    np.testing.assert_allclose(phase, np.exp(-2j * np.array(grid_0_5.points)), atol=1e-15)


@pytest.mark.parametrize("S", [
    ClosedFormPaper(5),
    MatrixExp(paper_generator(5)),
    DiagonalPhase([1.0, -2.0], damping=[0.0, 0.5]),
], ids=["closed-form", "matrix-exp", "diagonal-phase"])
def test_evaluator_json(S):
    rebuilt = evaluator_from_json(S.to_json())
    assert type(rebuilt) is type(S)
    np.testing.assert_array_equal(rebuilt.evaluate(1.5).entries, S.evaluate(1.5).entries)


def test_parse_grid_bounds():
    assert parse_grid_bounds("0:2.5:0.5") == (0.0, 2.5, 0.5)
    assert TimeGrid.parse("0:2.5:0.5") == TimeGrid.from_range(0.0, 2.5, 0.5)
    with pytest.raises(InvalidGrid):
        parse_grid_bounds("0:1:x")
