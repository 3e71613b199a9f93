"""Generators and semigroup evaluation.

Three evaluators produce T_t for t >= 0:

* :class:`ClosedFormPaper` - the explicit contraction semigroup on c0 whose
  generator sends e_1 to sum_{k>=2} e_k / k and e_i to -e_i / i otherwise.
* :class:`MatrixExp` - e^{tA} for any bounded generator, by scaling and
  squaring around a truncated Taylor series.
* :class:`DiagonalPhase` - diag(e^{(i w_k - mu_k) t}), the shape every
  isometric C0-semigroup on c0 takes on the basis.

The module also hosts the diagnostics built on top of evaluation: the
semigroup-law residual, the strong-continuity profile and trajectories of the
pairing <T_t x, f>.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from core.errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DimensionTooSmall,
    InvalidGrid,
    InvalidParameter,
    LengthMismatch,
    NegativeTime,
)
from core.operators import (
    OperatorMatrix,
    StructureHint,
    apply,
    compose,
    op_norm,
    subtract,
)
from core.spaces import DualityWitness, SpaceTag, TruncVector, pairing
from utils.logging import get_logger

logger = get_logger("semigroups")

# Relative slack deciding whether ``stop`` lands on the grid lattice.
LATTICE_SLACK = 1e-9


def parse_grid_bounds(text: str) -> Tuple[float, float, float]:
    """Split ``start:stop:step`` into floats.

    Raises:
        InvalidGrid: On a wrong field count or a non-numeric field.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidGrid(f"grid must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise InvalidGrid(f"grid {text!r} has a non-numeric field") from exc
    return start, stop, step


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing, nonnegative sample times.

    Attributes:
        points: Sample times in increasing order.
    """

    points: Tuple[float, ...]

    def __post_init__(self) -> None:
        points = tuple(float(t) for t in self.points)
        if not points:
            raise InvalidGrid("a time grid needs at least one point")
        if not all(math.isfinite(t) for t in points):
            raise InvalidGrid("grid points must be finite")
        if points[0] < 0:
            raise InvalidGrid(f"grid starts at negative time {points[0]}")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise InvalidGrid("grid points must be strictly increasing")
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def start(self) -> float:
        return self.points[0]

    @property
    def stop(self) -> float:
        return self.points[-1]

    @property
    def max_gap(self) -> float:
        """Largest distance between adjacent points (0 for a single point)."""
        if len(self.points) < 2:
            return 0.0
        return float(np.max(np.diff(self.points)))

    @classmethod
    def from_range(cls, start: float, stop: float, step: float) -> "TimeGrid":
        """Lattice start, start + step, ... up to stop.

        ``stop`` is included when it lands on the lattice.

        Raises:
            InvalidGrid: Unless step > 0 and stop > start >= 0.
        """
        if not step > 0:
            raise InvalidGrid(f"grid step must be positive, got {step}")
        if not stop > start >= 0:
            raise InvalidGrid(f"need stop > start >= 0, got start={start}, stop={stop}")
        count = int(math.floor((stop - start) / step + LATTICE_SLACK)) + 1
        return cls(tuple(start + i * step for i in range(count)))

    @classmethod
    def linspace(cls, start: float, stop: float, count: int) -> "TimeGrid":
        if count < 2:
            raise InvalidGrid(f"linspace grid needs at least 2 points, got {count}")
        return cls(tuple(np.linspace(start, stop, count)))

    @classmethod
    def parse(cls, text: str) -> "TimeGrid":
        """Parse ``start:stop:step``."""
        return cls.from_range(*parse_grid_bounds(text))

    def subsample(self, count: int) -> "TimeGrid":
        """At most ``count`` evenly spread points, endpoints kept."""
        if len(self.points) <= count:
            return self
        indices = np.unique(np.round(np.linspace(0, len(self.points) - 1, count)).astype(int))
        return TimeGrid(tuple(self.points[i] for i in indices))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "start": self.start,
            "stop": self.stop,
            "count": len(self.points),
            "max_gap": self.max_gap,
        }


@dataclass(frozen=True)
class GeneratorSpec:
    """Bounded generator A of a semigroup.

    Attributes:
        matrix: Finite section of A.
        label: Human-readable name used in reports.
    """

    matrix: OperatorMatrix
    label: str

    def __post_init__(self) -> None:
        if self.matrix.dim < 2:
            raise DimensionTooSmall(f"generator {self.label!r} needs dim >= 2")

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def to_json(self) -> Dict[str, Any]:
        return {"label": self.label, "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "GeneratorSpec":
        return cls(OperatorMatrix.from_json(data["matrix"]), data["label"])


def paper_generator(dim: int) -> GeneratorSpec:
    """Section of A with A e_1 = sum_{k=2}^N e_k / k and A e_i = -e_i / i.

    Raises:
        DimensionTooSmall: If ``dim < 2``.
    """
    if dim < 2:
        raise DimensionTooSmall(f"paper_generator needs N >= 2, got {dim}")
    k = np.arange(2, dim + 1, dtype=np.float64)
    entries = np.zeros((dim, dim), dtype=np.complex128)
    entries[1:, 0] = 1.0 / k
    entries[np.arange(1, dim), np.arange(1, dim)] = -1.0 / k
    matrix = OperatorMatrix(entries, StructureHint.DIAGONAL_PLUS_FIRST_COLUMN)
    return GeneratorSpec(matrix, f"paper_generator({dim})")


def _inf_norm(matrix: np.ndarray) -> float:
    return float(np.abs(matrix).sum(axis=1).max())


def expm_scaling_squaring(matrix: np.ndarray, exp_tol: float) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Taylor core.

    The squaring count is chosen so the scaled matrix has norm <= 1/2; the
    series stops once the bound on the next term drops below exp_tol / 10.

    Raises:
        ConvergenceFailure: If the series needs more than the term cap.
    """
    dim = matrix.shape[0]
    identity = np.eye(dim, dtype=np.complex128)
    size = _inf_norm(matrix)
    if size == 0.0:
        return identity

    squarings = max(0, math.ceil(math.log2(size / 0.5)))
    scaled = matrix / (2.0 ** squarings)
    scaled_norm = size / (2.0 ** squarings)

    result = identity.copy()
    term = identity
    for k in range(1, settings.TAYLOR_TERM_CAP + 1):
        term = term @ scaled / k
        result = result + term
        if _inf_norm(term) * scaled_norm / (k + 1) < exp_tol / 10:
            break
    else:
        raise ConvergenceFailure(
            f"Taylor series did not reach {exp_tol:.1e} in {settings.TAYLOR_TERM_CAP} terms"
        )

    for _ in range(squarings):
        result = result @ result
    logger.debug(f"expm: {squarings} squarings, {k} Taylor terms")
    return result


class SemigroupEvaluator(ABC):
    """Rule producing T_t for every t >= 0.

    Subclasses implement :meth:`_evaluate`; :meth:`evaluate` guards the time
    argument. Evaluators hold no mutable state after construction.

    Attributes:
        dim: Truncation dimension N.
    """

    mode: str = ""

    def __init__(self, dim: int) -> None:
        self.dim = int(dim)

    def evaluate(self, t: float) -> OperatorMatrix:
        """Return T_t.

        Raises:
            NegativeTime: If ``t < 0`` (or not finite).
        """
        t = float(t)
        if not (math.isfinite(t) and t >= 0):
            raise NegativeTime(f"semigroups are evaluated at t >= 0, got {t}")
        return self._evaluate(t)

    @abstractmethod
    def _evaluate(self, t: float) -> OperatorMatrix:
        """Compute T_t for a validated ``t``."""

    @abstractmethod
    def to_json(self) -> Dict[str, Any]:
        """Serialize with a ``mode`` discriminator."""

    def frequency_bound(self) -> Optional[float]:
        """Upper bound on |w_k| when known, for phase-unwrap safety checks."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class ClosedFormPaper(SemigroupEvaluator):
    """T_t e_1 = e_1 + sum_k (1 - e^{-t/k}) e_k and T_t e_i = e^{-t/i} e_i."""

    mode = "closed_form_paper"

    def __init__(self, dim: int) -> None:
        if dim < 2:
            raise DimensionTooSmall(f"ClosedFormPaper needs N >= 2, got {dim}")
        super().__init__(dim)

    def _evaluate(self, t: float) -> OperatorMatrix:
        k = np.arange(1, self.dim + 1, dtype=np.float64)
        entries = np.diag(np.exp(-t / k).astype(np.complex128))
        entries[0, 0] = 1.0
        entries[1:, 0] = 0.0 - np.expm1(-t / k[1:])
        return OperatorMatrix(entries, StructureHint.DIAGONAL_PLUS_FIRST_COLUMN)

    def truncation_error(self, t: float) -> float:
        """c0 distance between T_t e_1 and its N-section: 1 - e^{-t/(N+1)}."""
        return float(-np.expm1(-t / (self.dim + 1)))

    def to_json(self) -> Dict[str, Any]:
        return {"mode": self.mode, "dim": self.dim}


class MatrixExp(SemigroupEvaluator):
    """T_t = e^{tA} for a bounded generator.

    Attributes:
        generator: The generator A.
        exp_tol: Truncation tolerance of the Taylor core.
    """

    mode = "matrix_exp"

    def __init__(self, generator: GeneratorSpec, exp_tol: float = settings.EXP_TOL) -> None:
        if not exp_tol > 0:
            raise InvalidParameter(f"exp_tol must be positive, got {exp_tol}")
        super().__init__(generator.dim)
        self.generator = generator
        self.exp_tol = float(exp_tol)

    def _evaluate(self, t: float) -> OperatorMatrix:
        return OperatorMatrix(expm_scaling_squaring(t * self.generator.matrix.entries, self.exp_tol))

    def to_json(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "dim": self.dim,
            "exp_tol": self.exp_tol,
            "generator": self.generator.to_json(),
        }

    def __repr__(self) -> str:
        return f"MatrixExp({self.generator.label}, exp_tol={self.exp_tol:g})"


class DiagonalPhase(SemigroupEvaluator):
    """T_t = diag(e^{(i w_k - mu_k) t}); isometric when every mu_k is 0.

    Attributes:
        omegas: Angular frequencies w_k.
        damping: Nonnegative decay rates mu_k (zeros by default).
    """

    mode = "diagonal_phase"

    def __init__(self, omegas: Sequence[float], damping: Optional[Sequence[float]] = None) -> None:
        omegas = np.array(omegas, dtype=np.float64).reshape(-1)
        damping = np.zeros_like(omegas) if damping is None else np.array(damping, dtype=np.float64).reshape(-1)
        if omegas.size == 0:
            raise DimensionTooSmall("DiagonalPhase needs at least one frequency")
        if damping.size != omegas.size:
            raise LengthMismatch(f"{omegas.size} frequencies but {damping.size} damping rates")
        if not (np.all(np.isfinite(omegas)) and np.all(np.isfinite(damping))):
            raise InvalidParameter("frequencies and damping rates must be finite")
        if np.any(damping < 0):
            raise InvalidParameter("damping rates must be nonnegative")
        super().__init__(omegas.size)
        omegas.setflags(write=False)
        damping.setflags(write=False)
        self.omegas = omegas
        self.damping = damping

    @property
    def is_isometric(self) -> bool:
        return bool(np.all(self.damping == 0))

    def _evaluate(self, t: float) -> OperatorMatrix:
        return OperatorMatrix(np.diag(np.exp((1j * self.omegas - self.damping) * t)), StructureHint.DIAGONAL)

    def generator_matrix(self) -> OperatorMatrix:
        """diag(i w_k - mu_k)."""
        return OperatorMatrix(np.diag(1j * self.omegas - self.damping), StructureHint.DIAGONAL)

    def frequency_bound(self) -> Optional[float]:
        return float(np.max(np.abs(self.omegas)))

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"mode": self.mode, "dim": self.dim, "omegas": self.omegas.tolist()}
        if not self.is_isometric:
            data["damping"] = self.damping.tolist()
        return data


def evaluator_from_json(data: Dict[str, Any]) -> SemigroupEvaluator:
    """Rebuild an evaluator from its ``to_json`` form."""
    mode = data.get("mode")
    if mode == ClosedFormPaper.mode:
        return ClosedFormPaper(int(data["dim"]))
    if mode == MatrixExp.mode:
        return MatrixExp(GeneratorSpec.from_json(data["generator"]), float(data["exp_tol"]))
    if mode == DiagonalPhase.mode:
        return DiagonalPhase(data["omegas"], data.get("damping"))
    raise InvalidParameter(f"unknown evaluator mode {mode!r}")


def evaluate(S: SemigroupEvaluator, t: float) -> OperatorMatrix:
    """Return T_t of ``S``; see :meth:`SemigroupEvaluator.evaluate`."""
    return S.evaluate(t)


def semigroup_residual(S: SemigroupEvaluator, s: float, t: float) -> float:
    """c0 operator norm of T_{s+t} - T_s T_t."""
    joint = S.evaluate(s + t)
    product = compose(S.evaluate(s), S.evaluate(t))
    return op_norm(subtract(joint, product), SpaceTag.C0).value


def strong_continuity_profile(S: SemigroupEvaluator, grid: TimeGrid) -> List[Tuple[float, float]]:
    """Pairs (t, max_k ||T_t e_k - e_k||_c0) in grid order."""
    identity = np.eye(S.dim, dtype=np.complex128)
    profile = []
    for t in grid:
        defect = float(np.max(np.abs(S.evaluate(t).entries - identity)))
        profile.append((t, defect))
    return profile


def trajectory_pairing(
    S: SemigroupEvaluator,
    x: TruncVector,
    f: DualityWitness,
    grid: TimeGrid
) -> List[complex]:
    """<T_t x, f> for every grid point.

    Raises:
        DimensionMismatch: If x or f do not match the evaluator dimension.
    """
    if x.dim != S.dim or f.base_dim != S.dim:
        raise DimensionMismatch(f"evaluator has dim {S.dim}, got x dim {x.dim}, f dim {f.base_dim}")
    return [pairing(apply(S.evaluate(t), x), f) for t in grid]
