"""Finite-section models of the sequence spaces c0, l1 and l2.

A :class:`TruncVector` of dimension N stands for the infinite sequence whose
first N coordinates are ``coords`` and whose remaining coordinates are zero,
so every finite section is automatically an element of c0. Functionals on the
space are :class:`DualityWitness` objects; for c0 they are represented in l1
coordinates.

The pairing is bilinear: ``<x, f> = sum_i x_i f_i``. Conjugate phases needed
for norming functionals are stored inside the witness coefficients.

All public index arguments are 1-based (``basis(1, N)`` is e_1).
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import settings
from core.errors import (
    DimensionMismatch,
    InvalidParameter,
    NotUnitVector,
    UnsupportedSpace,
)


class SpaceTag(str, Enum):
    """Ambient sequence space of a finite section."""

    C0 = "c0"
    L1 = "l1"
    L2 = "l2"

    def norm(self, coords: np.ndarray) -> float:
        """Norm of ``coords`` in this space."""
        moduli = np.abs(coords)
        if moduli.size == 0:
            return 0.0
        if self is SpaceTag.C0:
            return float(moduli.max())
        if self is SpaceTag.L1:
            return float(moduli.sum())
        return float(np.linalg.norm(coords))

    def dual_norm(self, coeffs: np.ndarray) -> float:
        """Norm of a functional on this space (c0* = l1, l1* = l_inf, l2* = l2)."""
        moduli = np.abs(coeffs)
        if moduli.size == 0:
            return 0.0
        if self is SpaceTag.C0:
            return float(moduli.sum())
        if self is SpaceTag.L1:
            return float(moduli.max())
        return float(np.linalg.norm(coeffs))


def _as_coords(values: Any) -> np.ndarray:
    coords = np.array(values, dtype=np.complex128).reshape(-1)
    coords.setflags(write=False)
    return coords


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances shared by every computation of a run.

    Attributes:
        eq_tol: Slack for equalities such as ``norm == 1`` or ``pairing == 1``.
        argmax_tol: Absolute slack deciding membership in the argmax set.
        spectral_tol: Eigen-residual and eigenvalue-classification slack.
    """

    eq_tol: float = settings.EQ_TOL
    argmax_tol: float = settings.ARGMAX_TOL
    spectral_tol: float = settings.SPECTRAL_TOL

    def __post_init__(self) -> None:
        for name in ("eq_tol", "argmax_tol", "spectral_tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameter(f"{name} must be strictly positive, got {value!r}")

    @classmethod
    def from_settings(cls) -> "ToleranceConfig":
        """Build the default tolerances from ``config.settings``."""
        return cls(
            eq_tol=settings.EQ_TOL,
            argmax_tol=settings.ARGMAX_TOL,
            spectral_tol=settings.SPECTRAL_TOL,
        )

    def to_dict(self) -> Dict[str, float]:
        return {
            "eq_tol": self.eq_tol,
            "argmax_tol": self.argmax_tol,
            "spectral_tol": self.spectral_tol,
        }


@dataclass(frozen=True, eq=False)
class TruncVector:
    """Finite section of a complex sequence tagged with its ambient space.

    Attributes:
        coords: Read-only complex128 array of length ``dim``.
        space: Ambient space the norm is taken in.
    """

    coords: np.ndarray
    space: SpaceTag = SpaceTag.C0

    def __post_init__(self) -> None:
        coords = _as_coords(self.coords)
        if coords.size == 0:
            raise InvalidParameter("a TruncVector needs at least one coordinate")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "space", SpaceTag(self.space))

    @property
    def dim(self) -> int:
        return int(self.coords.size)

    def to_json(self) -> Dict[str, Any]:
        """Serialize as ``{"space": tag, "coords": [[re, im], ...]}``."""
        return {
            "space": self.space.value,
            "coords": [[float(z.real), float(z.imag)] for z in self.coords],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "TruncVector":
        coords = [complex(re, im) for re, im in data["coords"]]
        return cls(coords, SpaceTag(data["space"]))


@dataclass(frozen=True, eq=False)
class DualityWitness:
    """Functional on a finite section, stored by its coefficients.

    For a c0 section the coefficients are l1 coordinates, so the dual norm is
    the l1 sum. A witness is a norming functional candidate and must have dual
    norm one.

    Attributes:
        coeffs: Read-only complex128 coefficient array.
        space: The primal space the functional acts on.
    """

    coeffs: np.ndarray
    space: SpaceTag = SpaceTag.C0
    norm_tol: float = field(default=settings.EQ_TOL, repr=False)

    def __post_init__(self) -> None:
        coeffs = _as_coords(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "space", SpaceTag(self.space))
        deviation = abs(self.space.dual_norm(coeffs) - 1.0)
        if deviation > self.norm_tol:
            raise NotUnitVector(
                f"witness dual norm deviates from 1 by {deviation:.3e}"
            )

    @property
    def base_dim(self) -> int:
        return int(self.coeffs.size)

    @property
    def support(self) -> List[int]:
        """1-based indices of the nonzero coefficients."""
        return [int(i) + 1 for i in np.flatnonzero(self.coeffs)]

    def to_json(self) -> Dict[str, Any]:
        return {
            "space": self.space.value,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "DualityWitness":
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        return cls(coeffs, SpaceTag(data["space"]))


def basis(k: int, dim: int, space: SpaceTag = SpaceTag.C0) -> TruncVector:
    """Return the basis vector e_k (1-based) of a ``dim``-section."""
    if not 1 <= k <= dim:
        raise InvalidParameter(f"basis index {k} outside 1..{dim}")
    coords = np.zeros(dim, dtype=np.complex128)
    coords[k - 1] = 1.0
    return TruncVector(coords, space)


def dual_basis(k: int, dim: int, space: SpaceTag = SpaceTag.C0) -> DualityWitness:
    """Return the coordinate functional e*_k (1-based)."""
    if not 1 <= k <= dim:
        raise InvalidParameter(f"basis index {k} outside 1..{dim}")
    coeffs = np.zeros(dim, dtype=np.complex128)
    coeffs[k - 1] = 1.0
    return DualityWitness(coeffs, space)


def zeros(dim: int, space: SpaceTag = SpaceTag.C0) -> TruncVector:
    return TruncVector(np.zeros(dim, dtype=np.complex128), space)


def norm(x: TruncVector) -> float:
    """Norm of ``x`` in its tagged space (sup, l1 sum or Euclidean)."""
    return x.space.norm(x.coords)


def dual_norm(f: DualityWitness) -> float:
    return f.space.dual_norm(f.coeffs)


def pairing(x: TruncVector, f: DualityWitness) -> complex:
    """Bilinear pairing ``sum_i x_i f_i`` (no conjugation).

    Raises:
        DimensionMismatch: If the dimensions differ.
    """
    if x.dim != f.base_dim:
        raise DimensionMismatch(f"vector has dim {x.dim}, functional has dim {f.base_dim}")
    return complex(np.dot(x.coords, f.coeffs))


def argmax_set(x: TruncVector, tol: Optional[ToleranceConfig] = None) -> List[int]:
    """1-based indices i with |x_i| >= 1 - argmax_tol."""
    tol = tol or ToleranceConfig.from_settings()
    moduli = np.abs(x.coords)
    return [int(i) + 1 for i in np.flatnonzero(moduli >= 1.0 - tol.argmax_tol)]


def duality_extreme_points(
    x: TruncVector,
    tol: Optional[ToleranceConfig] = None
) -> List[DualityWitness]:
    """Extreme points of the duality set J(x) of a unit vector.

    On c0 these are ``conj(x_i) e*_i`` for i in the argmax set of x; every
    element of J(x) is a convex combination of them. On l2, J(x) is the
    single functional ``conj(x)``.

    Args:
        x: Unit vector tagged C0 or L2.
        tol: Tolerances (``eq_tol`` for the unit check, ``argmax_tol`` for
            argmax membership).

    Returns:
        Witnesses ordered by index.

    Raises:
        NotUnitVector: If ``norm(x)`` deviates from 1 by more than eq_tol.
        UnsupportedSpace: For l1 input.
    """
    tol = tol or ToleranceConfig.from_settings()
    deviation = abs(norm(x) - 1.0)
    if deviation > tol.eq_tol:
        raise NotUnitVector(f"J(x) needs a unit vector; |norm(x) - 1| = {deviation:.3e}")

    if x.space is SpaceTag.L2:
        return [DualityWitness(np.conj(x.coords), SpaceTag.L2, norm_tol=tol.eq_tol)]
    if x.space is not SpaceTag.C0:
        raise UnsupportedSpace("J(x) extreme points are only enumerated on c0 and l2")

    witnesses = []
    for i in argmax_set(x, tol):
        coeffs = np.zeros(x.dim, dtype=np.complex128)
        # The witness must have l1 norm exactly 1, so the phase is normalized.
        coeffs[i - 1] = np.conj(x.coords[i - 1]) / abs(x.coords[i - 1])
        witnesses.append(DualityWitness(coeffs, SpaceTag.C0, norm_tol=tol.eq_tol))
    return witnesses


def convex_combination(
    witnesses: Sequence[DualityWitness],
    weights: Sequence[float]
) -> DualityWitness:
    """Convex combination of witnesses sharing one space and dimension."""
    if len(witnesses) != len(weights) or not witnesses:
        raise InvalidParameter("need one weight per witness")
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0) or not math.isclose(float(weights.sum()), 1.0, abs_tol=1e-12):
        raise InvalidParameter("weights must be nonnegative and sum to 1")
    space = witnesses[0].space
    dims = {w.base_dim for w in witnesses}
    if len(dims) != 1:
        raise DimensionMismatch(f"witness dimensions differ: {sorted(dims)}")
    coeffs = sum(w * f.coeffs for w, f in zip(weights, witnesses))
    return DualityWitness(coeffs, space, norm_tol=max(f.norm_tol for f in witnesses))


def is_disjoint(
    x: TruncVector,
    y: TruncVector,
    tol: Optional[ToleranceConfig] = None
) -> bool:
    """True iff min(|x_i|, |y_i|) <= argmax_tol at every index.

    Raises:
        DimensionMismatch: If the dimensions differ.
    """
    tol = tol or ToleranceConfig.from_settings()
    if x.dim != y.dim:
        raise DimensionMismatch(f"dims {x.dim} and {y.dim} differ")
    overlap = np.minimum(np.abs(x.coords), np.abs(y.coords))
    return bool(np.all(overlap <= tol.argmax_tol))


def random_unit_vector(
    rng: np.random.Generator,
    dim: int,
    space: SpaceTag = SpaceTag.C0,
    support: Optional[int] = None
) -> TruncVector:
    """Draw a complex Gaussian vector and normalize it in ``space``.

    Args:
        rng: Source of randomness.
        dim: Section dimension.
        space: Space whose norm is used for normalization.
        support: If given, only the first ``support`` coordinates are nonzero.
    """
    support = dim if support is None else support
    if not 1 <= support <= dim:
        raise InvalidParameter(f"support {support} outside 1..{dim}")
    coords = np.zeros(dim, dtype=np.complex128)
    coords[:support] = rng.standard_normal(support) + 1j * rng.standard_normal(support)
    scale = space.norm(coords)
    while scale == 0.0:
        coords[:support] = rng.standard_normal(support) + 1j * rng.standard_normal(support)
        scale = space.norm(coords)
    return TruncVector(coords / scale, space)
