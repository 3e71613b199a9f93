import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from core.errors import DimensionTooSmall, InvalidParameter, StructureMismatch
from core.operators import (
    OperatorMatrix,
    StructureHint,
    apply,
    compose,
    diagonal,
    disjointness_violation_witness,
    identity,
    isometry_check_sampled,
    op_norm,
    shift_isometry,
    signed_permutation,
)
from core.semigroups import ClosedFormPaper, paper_generator
from core.spaces import SpaceTag, basis

N = 5

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
matrices = st.builds(
    lambda re, im: re + 1j * im,
    arrays(np.float64, (N, N), elements=entries),
    arrays(np.float64, (N, N), elements=entries),
)


def test_shift_isometry_rows_n3():
    T = shift_isometry(3)
    np.testing.assert_array_equal(T.entries, [[0.5, 0.5, 0], [1, 0, 0], [0, 1, 0]])
    assert T.structure_hint is StructureHint.SHIFT
    assert T.exact_domain == 2


def test_shift_isometry_needs_three_coordinates():
    with pytest.raises(DimensionTooSmall):
        shift_isometry(2)


def test_apply_examples():
    T = shift_isometry(4)
    np.testing.assert_array_equal(apply(T, basis(1, 4)).coords, [0.5, 1, 0, 0])
    np.testing.assert_array_equal(apply(T, basis(2, 4)).coords, [0.5, 0, 1, 0])
    d = diagonal([2, 3j, -1])
    np.testing.assert_array_equal(apply(d, basis(2, 3)).coords, [0, 3j, 0])
    x = basis(3, 3)
    np.testing.assert_array_equal(apply(identity(3), x).coords, x.coords)


def test_apply_preserves_space():
    assert apply(identity(3), basis(1, 3, SpaceTag.L1)).space is SpaceTag.L1


def test_structure_hint_is_validated():
    with pytest.raises(StructureMismatch):
        OperatorMatrix(np.ones((3, 3)), StructureHint.DIAGONAL)


@pytest.mark.parametrize("space", list(SpaceTag))
def test_identity_has_norm_one(space):
    assert op_norm(identity(6), space).value == pytest.approx(1.0, abs=1e-12)


def test_op_norm_c0_rows_and_l1_columns():
    T = OperatorMatrix([[1, 2], [3, -4]])
    c0 = op_norm(T, SpaceTag.C0)
    l1 = op_norm(T, SpaceTag.L1)
    assert (c0.value, c0.achieving_index) == (7, 2)
    assert (l1.value, l1.achieving_index) == (6, 2)


def test_op_norm_l2_matches_numpy():
    rng = np.random.default_rng(11)
    A = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    report = op_norm(OperatorMatrix(A), SpaceTag.L2)
    assert report.value == pytest.approx(np.linalg.norm(A, 2), rel=1e-6)


@pytest.mark.parametrize("t", [0.0, 0.1, 1.0, 10.0, 100.0])
@pytest.mark.parametrize("dim", [2, 8, 64])
def test_closed_form_is_a_c0_contraction(dim, t):
    assert op_norm(ClosedFormPaper(dim).evaluate(t), SpaceTag.C0).value == pytest.approx(1.0, abs=1e-15)


def test_generator_norm_is_one():
    assert op_norm(paper_generator(8).matrix, SpaceTag.C0).value == pytest.approx(1.0, abs=1e-15)


def test_shift_isometry_sampled_check():
    check = isometry_check_sampled(shift_isometry(16), SpaceTag.C0, trials=1000, seed=0)
    assert check.passed
    assert check.exact
    assert check.worst_deviation <= 1e-15
    assert check.samples == 15 + 1000


def test_closed_form_is_not_an_isometry():
    check = isometry_check_sampled(ClosedFormPaper(8).evaluate(1.0), SpaceTag.C0, trials=100, seed=0)
    assert not check.passed
    assert check.worst_deviation >= 1 - math.exp(-0.5) - 1e-15


def test_diagonal_phases_are_isometries():
    T = diagonal(np.exp(1j * np.array([1.0, -2.0, 0.5])))
    check = isometry_check_sampled(T, SpaceTag.C0, trials=50, seed=1)
    assert check.passed and check.exact


def test_isometry_check_needs_trials():
    with pytest.raises(InvalidParameter):
        isometry_check_sampled(identity(3), SpaceTag.C0, trials=0, seed=0)


def test_isometry_check_catches_basis_failures_first():
    # only e_3 shrinks
    T = OperatorMatrix(np.diag([1, 1, 0.5, 1]))
    check = isometry_check_sampled(T, SpaceTag.C0, trials=1, seed=0)
    assert check.worst_deviation == pytest.approx(0.5)


def test_shift_violates_disjointness():
    witness = disjointness_violation_witness(shift_isometry(4))
    assert (witness.first, witness.second) == (1, 2)


@pytest.mark.parametrize("T", [
    signed_permutation([3, 1, 2], [1, -1, 1j]),
    diagonal(np.exp(1j * np.arange(5))),
    identity(4),
])
def test_disjointness_preserved(T):
    assert disjointness_violation_witness(T) is None


def test_signed_permutation_validation():
    with pytest.raises(InvalidParameter):
        signed_permutation([1, 1, 2])


def test_operator_json_structured_parameters():
    A = paper_generator(4).matrix
    data = A.to_json()
    assert "entries" not in data
    np.testing.assert_array_equal(OperatorMatrix.from_json(data).entries, A.entries)


def test_compose_keeps_diagonal_hint():
    assert compose(diagonal([1, 2]), diagonal([3, 4])).structure_hint is StructureHint.DIAGONAL
    assert compose(identity(3), shift_isometry(3)).structure_hint is StructureHint.DENSE


@settings(max_examples=1_000, deadline=None)
@given(a=matrices, b=matrices)
@pytest.mark.parametrize("space", [SpaceTag.C0, SpaceTag.L1])
def test_op_norm_is_submultiplicative(space, a, b):
    S, T = OperatorMatrix(a), OperatorMatrix(b)
    product = op_norm(compose(S, T), space).value
    bound = op_norm(S, space).value * op_norm(T, space).value
    assert product <= bound * (1 + 1e-12) + 1e-12
