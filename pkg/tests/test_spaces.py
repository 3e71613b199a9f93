import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from core.errors import DimensionMismatch, InvalidParameter, NotUnitVector, UnsupportedSpace
from core.spaces import (
    DualityWitness,
    SpaceTag,
    ToleranceConfig,
    TruncVector,
    argmax_set,
    basis,
    convex_combination,
    dual_basis,
    duality_extreme_points,
    is_disjoint,
    norm,
    pairing,
    random_unit_vector,
    zeros,
)

N = 6

finite = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-3, max_value=1e3),
    st.floats(min_value=-1e3, max_value=-1e-3),
)
coords = st.builds(
    lambda re, im: re + 1j * im,
    arrays(np.float64, (N,), elements=finite),
    arrays(np.float64, (N,), elements=finite),
)


@pytest.mark.parametrize("space", list(SpaceTag))
def test_basis_vector_has_norm_one(space):
    assert norm(basis(1, 5, space)) == 1.0


@pytest.mark.parametrize("space, expected", [
    (SpaceTag.C0, 1.0),
    (SpaceTag.L1, 2.0),
    (SpaceTag.L2, np.sqrt(2.0)),
])
def test_norm_formulas(space, expected):
    assert norm(TruncVector([1, 1j, 0], space)) == pytest.approx(expected, rel=1e-15)


def test_truncvector_is_read_only():
    x = TruncVector([1, 2, 3])
    with pytest.raises(ValueError):
        x.coords[0] = 5


def test_truncvector_json_roundtrip_is_exact():
    x = TruncVector([0.1 + 0.2j, -1 / 3, 1e-300j], SpaceTag.L2)
    y = TruncVector.from_json(x.to_json())
    assert y.space is SpaceTag.L2
    np.testing.assert_array_equal(x.coords, y.coords)


def test_pairing_examples():
    assert pairing(basis(1, 3), dual_basis(1, 3)) == 1
    assert pairing(TruncVector([1j, 0]), DualityWitness([-1j, 0])) == 1
    assert pairing(basis(2, 3), dual_basis(1, 3)) == 0


def test_pairing_is_bilinear_without_conjugation():
    x = TruncVector([1j, 0])
    f = DualityWitness([1j, 0])
    assert pairing(x, f) == -1


def test_pairing_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        pairing(basis(1, 3), dual_basis(1, 4))


def test_witness_requires_unit_dual_norm():
    with pytest.raises(NotUnitVector):
        DualityWitness([0.5, 0.25])
    # sup norm for functionals on l1
    DualityWitness([1, 0.5j], SpaceTag.L1)


def test_witness_support_is_one_based():
    assert DualityWitness([0, 0.5, 0, 0.5]).support == [2, 4]


def test_extreme_points_of_smooth_point():
    (f,) = duality_extreme_points(basis(1, 4))
    np.testing.assert_array_equal(f.coeffs, dual_basis(1, 4).coeffs)


def test_extreme_points_of_tie():
    witnesses = duality_extreme_points(TruncVector([1, 1, 0, 0]))
    assert [w.support for w in witnesses] == [[1], [2]]


def test_extreme_points_conjugate_phase():
    witnesses = duality_extreme_points(TruncVector([1, 1j, 0.5, 0]))
    assert len(witnesses) == 2
    np.testing.assert_allclose(witnesses[0].coeffs, [1, 0, 0, 0])
    np.testing.assert_allclose(witnesses[1].coeffs, [0, -1j, 0, 0])


@pytest.mark.parametrize("k", range(1, 9))
def test_extreme_points_of_basis_vectors(k):
    (f,) = duality_extreme_points(basis(k, 8))
    np.testing.assert_array_equal(f.coeffs, dual_basis(k, 8).coeffs)


def test_extreme_points_on_l2_is_conjugate():
    x = TruncVector(np.array([3, 4j]) / 5, SpaceTag.L2)
    (f,) = duality_extreme_points(x)
    assert f.space is SpaceTag.L2
    assert pairing(x, f) == pytest.approx(1.0)


def test_extreme_points_rejects_non_unit_and_l1():
    with pytest.raises(NotUnitVector):
        duality_extreme_points(TruncVector([2, 0]))
    with pytest.raises(UnsupportedSpace):
        duality_extreme_points(basis(1, 3, SpaceTag.L1))


def test_argmax_set_tolerance():
    tol = ToleranceConfig(argmax_tol=1e-6)
    assert argmax_set(TruncVector([1, 1 - 1e-7, 0.5]), tol) == [1, 2]
    assert argmax_set(TruncVector([1, 1 - 1e-5, 0.5]), tol) == [1]


def test_is_disjoint_examples():
    assert is_disjoint(basis(1, 3), basis(2, 3))
    assert not is_disjoint(TruncVector([1, 0.5, 0]), TruncVector([0, 0.5, 1]))
    assert is_disjoint(TruncVector([1, 2, 3]), zeros(3))


def test_convex_combination_rejects_bad_weights():
    witnesses = duality_extreme_points(TruncVector([1, 1, 0]))
    with pytest.raises(InvalidParameter):
        convex_combination(witnesses, [0.7, 0.7])


def test_tolerances_must_be_positive():
    with pytest.raises(InvalidParameter):
        ToleranceConfig(eq_tol=0.0)


@pytest.mark.parametrize("space", list(SpaceTag))
def test_random_unit_vector_respects_support(space):
    x = random_unit_vector(np.random.default_rng(3), 8, space, support=5)
    assert norm(x) == pytest.approx(1.0, abs=1e-14)
    assert np.all(x.coords[5:] == 0)


@settings(max_examples=200)
@given(
    phases=arrays(np.float64, (N,), elements=st.floats(-np.pi, np.pi)),
    ties=st.integers(1, N),
    weights=arrays(np.float64, (N,), elements=st.floats(0.01, 1.0)),
)
def test_convex_combinations_of_witnesses_still_norm(phases, ties, weights):
    moduli = np.where(np.arange(N) < ties, 1.0, 0.3)
    x = TruncVector(moduli * np.exp(1j * phases))
    witnesses = duality_extreme_points(x)
    assert len(witnesses) == ties
    for f in witnesses:
        assert abs(pairing(x, f) - 1) <= 1e-10
    w = weights[:ties] / weights[:ties].sum()
    g = convex_combination(witnesses, w)
    assert abs(pairing(x, g) - 1) <= 1e-10


@settings(max_examples=10_000, deadline=None)
@given(x=coords, y=coords, scale=st.floats(-100, 100))
@pytest.mark.parametrize("space", list(SpaceTag))
def test_norm_axioms(space, x, y, scale):
    u, v = TruncVector(x, space), TruncVector(y, space)
    s = norm(TruncVector(x + y, space))
    assert s <= norm(u) + norm(v) + 1e-9 * (1 + norm(u) + norm(v))
    assert norm(TruncVector(scale * x, space)) == pytest.approx(abs(scale) * norm(u), rel=1e-12, abs=1e-12)
    assert (norm(u) == 0) == bool(np.all(x == 0))
