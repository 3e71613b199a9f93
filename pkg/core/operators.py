"""Finite-section operators on c0, l1 and l2.

Matrices follow the convention that column j is the image T e_j and row i is
the coordinate functional e*_i, so the c0 operator norm is the largest row l1
sum and the l1 operator norm is the largest column l1 sum.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from config import settings
from core.errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DimensionTooSmall,
    InvalidParameter,
    StructureMismatch,
)
from core.spaces import (
    SpaceTag,
    ToleranceConfig,
    TruncVector,
    basis,
    is_disjoint,
    norm,
    random_unit_vector,
)
from utils.logging import get_logger

logger = get_logger("operators")


class StructureHint(str, Enum):
    """Sparsity pattern promised by an :class:`OperatorMatrix`."""

    DENSE = "dense"
    DIAGONAL = "diagonal"
    DIAGONAL_PLUS_FIRST_COLUMN = "diagonal_plus_first_column"
    SHIFT = "shift"


def _pattern_mask(hint: StructureHint, dim: int) -> Optional[np.ndarray]:
    """Boolean mask of the entries a hint allows to be nonzero."""
    if hint is StructureHint.DENSE:
        return None
    mask = np.eye(dim, dtype=bool)
    if hint is StructureHint.DIAGONAL_PLUS_FIRST_COLUMN:
        mask[:, 0] = True
    elif hint is StructureHint.SHIFT:
        mask = np.eye(dim, k=-1, dtype=bool)
        mask[0, :2] = True
    return mask


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense N x N complex matrix with a validated structure hint.

    Attributes:
        entries: Read-only complex128 array; entry (i, j) is <T e_j, e*_i>.
        structure_hint: Sparsity pattern, checked on construction.
    """

    entries: np.ndarray
    structure_hint: StructureHint = StructureHint.DENSE

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise DimensionMismatch(f"operator must be square and nonempty, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise InvalidParameter("operator entries must be finite")
        hint = StructureHint(self.structure_hint)
        if hint is StructureHint.SHIFT and entries.shape[0] < 2:
            raise DimensionTooSmall("a shift pattern needs N >= 2")
        mask = _pattern_mask(hint, entries.shape[0])
        if mask is not None and np.any(entries[~mask] != 0):
            raise StructureMismatch(f"entries are not consistent with the {hint.value} hint")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "structure_hint", hint)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def exact_domain(self) -> int:
        """Leading coordinates on which the finite section acts exactly.

        The shift section drops the image of e_N (it would land on e_{N+1}),
        so only span(e_1, ..., e_{N-1}) is mapped faithfully.
        """
        if self.structure_hint is StructureHint.SHIFT:
            return self.dim - 1
        return self.dim

    def column(self, j: int) -> np.ndarray:
        """Image of e_j (1-based) as a coordinate array."""
        return self.entries[:, j - 1]

    def to_json(self) -> Dict[str, Any]:
        """Serialize with structured parameters when the hint allows it."""
        data: Dict[str, Any] = {
            "dim": self.dim,
            "structure_hint": self.structure_hint.value,
        }
        hint = self.structure_hint
        if hint is StructureHint.DIAGONAL:
            data["diagonal"] = _pairs(np.diag(self.entries))
        elif hint is StructureHint.DIAGONAL_PLUS_FIRST_COLUMN:
            data["diagonal"] = _pairs(np.diag(self.entries))
            data["column"] = _pairs(self.entries[1:, 0])
        elif hint is StructureHint.DENSE:
            data["entries"] = _pairs(self.entries.reshape(-1))
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "OperatorMatrix":
        dim = int(data["dim"])
        hint = StructureHint(data["structure_hint"])
        if hint is StructureHint.SHIFT:
            return shift_isometry(dim)
        if hint is StructureHint.DENSE:
            return cls(np.array(_unpairs(data["entries"])).reshape(dim, dim), hint)
        entries = np.diag(_unpairs(data["diagonal"]))
        if hint is StructureHint.DIAGONAL_PLUS_FIRST_COLUMN:
            entries[1:, 0] = _unpairs(data["column"])
        return cls(entries, hint)


def _pairs(values: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def _unpairs(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


class OperatorNormReport(NamedTuple):
    """Operator norm with the 1-based row (c0) or column (l1, l2) achieving it."""

    value: float
    space: SpaceTag
    achieving_index: int


class IsometryCheck(NamedTuple):
    """Outcome of :func:`isometry_check_sampled`."""

    passed: bool
    worst_deviation: float
    exact: bool
    samples: int


class DisjointnessViolation(NamedTuple):
    """Disjoint basis pair whose images overlap."""

    first: int
    second: int
    x: TruncVector
    y: TruncVector


def identity(dim: int) -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim, dtype=np.complex128), StructureHint.DIAGONAL)


def diagonal(values: Sequence[complex]) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.asarray(values, dtype=np.complex128)), StructureHint.DIAGONAL)


def signed_permutation(perm: Sequence[int], signs: Optional[Sequence[complex]] = None) -> OperatorMatrix:
    """Operator sending e_j to signs[j] * e_{perm[j]} (``perm`` is 1-based)."""
    dim = len(perm)
    if sorted(perm) != list(range(1, dim + 1)):
        raise InvalidParameter(f"{list(perm)} is not a permutation of 1..{dim}")
    signs = np.ones(dim) if signs is None else np.asarray(signs, dtype=np.complex128)
    if signs.size != dim:
        raise DimensionMismatch("need one sign per column")
    entries = np.zeros((dim, dim), dtype=np.complex128)
    for j, (target, sign) in enumerate(zip(perm, signs)):
        entries[target - 1, j] = sign
    return OperatorMatrix(entries)


def shift_isometry(dim: int) -> OperatorMatrix:
    """Finite section of the non-disjointness-preserving isometry of c0.

    T(sum a_i e_i) = (a_1 + a_2)/2 e_1 + sum a_i e_{i+1}.

    Raises:
        DimensionTooSmall: If ``dim < 3``.
    """
    if dim < 3:
        raise DimensionTooSmall(f"shift_isometry needs N >= 3, got {dim}")
    entries = np.eye(dim, k=-1, dtype=np.complex128)
    entries[0, 0] = 0.5
    entries[0, 1] = 0.5
    return OperatorMatrix(entries, StructureHint.SHIFT)


def _check_dims(S: OperatorMatrix, dim: int) -> None:
    if S.dim != dim:
        raise DimensionMismatch(f"operator has dim {S.dim}, operand has dim {dim}")


def apply(T: OperatorMatrix, x: TruncVector) -> TruncVector:
    """Matrix-vector product; the space tag of ``x`` is preserved."""
    _check_dims(T, x.dim)
    return TruncVector(T.entries @ x.coords, x.space)


def compose(S: OperatorMatrix, T: OperatorMatrix) -> OperatorMatrix:
    """Return S o T (apply T first)."""
    _check_dims(S, T.dim)
    both_diagonal = (
        S.structure_hint is StructureHint.DIAGONAL
        and T.structure_hint is StructureHint.DIAGONAL
    )
    hint = StructureHint.DIAGONAL if both_diagonal else StructureHint.DENSE
    return OperatorMatrix(S.entries @ T.entries, hint)


def subtract(S: OperatorMatrix, T: OperatorMatrix) -> OperatorMatrix:
    _check_dims(S, T.dim)
    hint = S.structure_hint if S.structure_hint is T.structure_hint else StructureHint.DENSE
    if hint is StructureHint.SHIFT:
        hint = StructureHint.DENSE
    return OperatorMatrix(S.entries - T.entries, hint)


def scale(T: OperatorMatrix, factor: complex) -> OperatorMatrix:
    hint = T.structure_hint if T.structure_hint is not StructureHint.SHIFT else StructureHint.DENSE
    return OperatorMatrix(factor * T.entries, hint)


def _spectral_norm(T: OperatorMatrix, tol: ToleranceConfig) -> OperatorNormReport:
    """Largest singular value by power iteration on T*T."""
    gram = T.entries.conj().T @ T.entries
    rng = np.random.default_rng(settings.DEFAULT_SEED)
    v = rng.standard_normal(T.dim) + 1j * rng.standard_normal(T.dim)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for iteration in range(1, settings.POWER_ITER_CAP + 1):
        w = gram @ v
        w_norm = float(np.linalg.norm(w))
        if w_norm == 0.0:
            return OperatorNormReport(0.0, SpaceTag.L2, 1)
        v = w / w_norm
        if abs(w_norm - estimate) <= tol.spectral_tol * max(w_norm, 1.0):
            logger.debug(f"power iteration converged after {iteration} steps")
            index = int(np.argmax(np.abs(v))) + 1
            return OperatorNormReport(float(np.sqrt(w_norm)), SpaceTag.L2, index)
        estimate = w_norm
    raise ConvergenceFailure(
        f"power iteration did not converge in {settings.POWER_ITER_CAP} steps"
    )


def op_norm(
    T: OperatorMatrix,
    space: SpaceTag,
    tol: Optional[ToleranceConfig] = None
) -> OperatorNormReport:
    """Operator norm of ``T`` on ``space``.

    Exact for c0 (max row l1 sum) and l1 (max column l1 sum); power
    iteration on T*T for l2.

    Raises:
        ConvergenceFailure: l2 only, when the iteration cap is exceeded.
    """
    space = SpaceTag(space)
    moduli = np.abs(T.entries)
    if space is SpaceTag.C0:
        sums = moduli.sum(axis=1)
    elif space is SpaceTag.L1:
        sums = moduli.sum(axis=0)
    else:
        return _spectral_norm(T, tol or ToleranceConfig.from_settings())
    index = int(np.argmax(sums))
    return OperatorNormReport(float(sums[index]), space, index + 1)


def isometry_check_sampled(
    T: OperatorMatrix,
    space: SpaceTag,
    trials: int,
    seed: int,
    tol: Optional[ToleranceConfig] = None
) -> IsometryCheck:
    """Sampled norm-preservation check.

    The basis vectors of the exact domain are always checked first, followed
    by ``trials`` random unit vectors drawn deterministically from ``seed``.
    For the diagonal hint the exact deviation max ||d_k| - 1| is folded in,
    and for the shift hint on c0 the verdict is structurally exact.

    Returns:
        IsometryCheck with ``passed = worst_deviation <= eq_tol``.
    """
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials}")
    tol = tol or ToleranceConfig.from_settings()
    space = SpaceTag(space)
    domain = T.exact_domain

    worst = 0.0
    for k in range(1, domain + 1):
        worst = max(worst, abs(norm(apply(T, basis(k, T.dim, space))) - 1.0))

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x = random_unit_vector(rng, T.dim, space, support=domain)
        worst = max(worst, abs(norm(apply(T, x)) - 1.0))

    exact = False
    if T.structure_hint is StructureHint.DIAGONAL:
        worst = max(worst, float(np.max(np.abs(np.abs(np.diag(T.entries)) - 1.0))))
        exact = True
    elif T.structure_hint is StructureHint.SHIFT and space is SpaceTag.C0:
        exact = True

    logger.debug(f"isometry check on {space.value}: worst deviation {worst:.3e}")
    return IsometryCheck(worst <= tol.eq_tol, worst, exact, domain + trials)


def disjointness_violation_witness(
    T: OperatorMatrix,
    space: SpaceTag = SpaceTag.C0,
    tol: Optional[ToleranceConfig] = None
) -> Optional[DisjointnessViolation]:
    """First basis pair (e_j, e_k), j < k, whose images are not disjoint."""
    tol = tol or ToleranceConfig.from_settings()
    bases = [basis(j, T.dim, space) for j in range(1, T.dim + 1)]
    images = [apply(T, e) for e in bases]
    for j in range(T.dim):
        for k in range(j + 1, T.dim):
            if is_disjoint(bases[j], bases[k], tol) and not is_disjoint(images[j], images[k], tol):
                return DisjointnessViolation(j + 1, k + 1, bases[j], bases[k])
    return None
