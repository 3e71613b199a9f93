"""Eigen-analysis of truncated generators and truncation-artifact detection.

A finite section can have eigenpairs the infinite operator does not: the
section of the c0 generator has eigenvalue 0 with the constant eigenvector,
and the constant sequence is not in c0. Each eigenvector is therefore scored
by :func:`c0_membership_defect`; a tail that does not decay marks the pair as
a truncation artifact. Reports keep the two readings apart: the *truncation
spectrum* is everything the solver finds, the *certified c0 spectrum* is what
survives once artifacts are removed.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from config import settings
from core.errors import (
    ConvergenceFailure,
    DimensionTooLarge,
    DimensionTooSmall,
    InvalidParameter,
    ZeroVector,
)
from core.operators import OperatorMatrix
from core.semigroups import paper_generator
from core.spaces import SpaceTag, ToleranceConfig, TruncVector
from utils.logging import get_logger

logger = get_logger("spectral")


class EigenClass(str, Enum):
    ZERO = "zero"
    PURELY_IMAGINARY = "purely_imaginary"
    NEGATIVE_REAL_PART = "negative_real_part"
    OTHER = "other"


def classify_eigenvalue(lam: complex, tol: Optional[float] = None) -> EigenClass:
    """Classify an eigenvalue.

    |lam| <= tol is Zero; |Re lam| <= tol otherwise is PurelyImaginary;
    Re lam < -tol is NegativeRealPart; anything else is Other.
    """
    tol = settings.SPECTRAL_TOL if tol is None else tol
    lam = complex(lam)
    if abs(lam) <= tol:
        return EigenClass.ZERO
    if abs(lam.real) <= tol:
        return EigenClass.PURELY_IMAGINARY
    if lam.real < -tol:
        return EigenClass.NEGATIVE_REAL_PART
    return EigenClass.OTHER


def tail_length(dim: int, tail_fraction: float = settings.TAIL_FRACTION) -> int:
    """Number of trailing coordinates scored by :func:`c0_membership_defect`."""
    return max(1, math.ceil(tail_fraction * dim))


def c0_membership_defect(v: TruncVector, tail_fraction: float = settings.TAIL_FRACTION) -> float:
    """Smallest normalized modulus over the tail of ``v``.

    ``v`` is scaled to sup-norm 1 and the minimum modulus over its last
    ceil(tail_fraction * N) coordinates is returned: near 0 is consistent
    with c0 decay, near 1 means the tail does not decay.

    Raises:
        InvalidParameter: Unless 0 < tail_fraction <= 1.
        ZeroVector: If ``v`` is zero.
    """
    if not 0 < tail_fraction <= 1:
        raise InvalidParameter(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    moduli = np.abs(v.coords)
    peak = float(moduli.max())
    if peak == 0.0:
        raise ZeroVector("membership defect of the zero vector is undefined")
    tail = tail_length(v.dim, tail_fraction)
    return float(moduli[-tail:].min() / peak)


@dataclass(frozen=True, eq=False)
class EigenPair:
    """One eigenpair with its diagnostics.

    Attributes:
        eigenvalue: lam.
        eigenvector: v, scaled to sup-norm 1 with its first largest
            coordinate real positive.
        residual: ||A v - lam v|| / ||v|| in the sup norm.
        eigen_class: Classification of lam.
        membership_defect: c0 tail score of v.
        artifact_flag: True when the tail does not decay.
    """

    eigenvalue: complex
    eigenvector: TruncVector
    residual: float
    eigen_class: EigenClass
    membership_defect: float
    artifact_flag: bool


@dataclass(frozen=True)
class SpectrumReport:
    """Full spectrum of a section, with multiplicity.

    Attributes:
        pairs: Eigenpairs sorted by real part, then imaginary part.
        spectral_tol: Residual and classification tolerance.
        tail_length: Trailing coordinates scored for artifact flags.
    """

    pairs: Tuple[EigenPair, ...]
    spectral_tol: float
    tail_length: int = 1

    @property
    def dim(self) -> int:
        return len(self.pairs)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.eigenvalue for p in self.pairs], dtype=np.complex128)

    @property
    def max_residual(self) -> float:
        return max((p.residual for p in self.pairs), default=0.0)

    def by_class(self, eigen_class: EigenClass) -> List[EigenPair]:
        return [p for p in self.pairs if p.eigen_class is eigen_class]

    def count(self, eigen_class: EigenClass) -> int:
        return len(self.by_class(eigen_class))

    @property
    def artifact_note(self) -> Optional[str]:
        """Caveat attached to the artifact flags of very small sections."""
        if self.tail_length > 1:
            return None
        return (
            "artifact flags score the last coordinate alone, so any eigenvector peaking "
            "at e_N is flagged whether or not it decays"
        )

    def certified(self) -> List[EigenPair]:
        """Pairs that survive artifact removal."""
        return [p for p in self.pairs if not p.artifact_flag]

    def to_rows(self) -> List[List[Any]]:
        """CSV rows: re, im, residual, class, artifact_flag."""
        return [
            [p.eigenvalue.real, p.eigenvalue.imag, p.residual, p.eigen_class.value, p.artifact_flag]
            for p in self.pairs
        ]

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "dim": self.dim,
            "spectral_tol": self.spectral_tol,
            "tail_length": self.tail_length,
            "pairs": [
                {
                    "eigenvalue": [p.eigenvalue.real, p.eigenvalue.imag],
                    "residual": p.residual,
                    "class": p.eigen_class.value,
                    "membership_defect": p.membership_defect,
                    "artifact_flag": p.artifact_flag,
                }
                for p in self.pairs
            ],
        }
        if self.artifact_note:
            data["artifact_note"] = self.artifact_note
        return data


SPECTRUM_CSV_HEADER = ["re", "im", "residual", "class", "artifact_flag"]


def eig(
    A: OperatorMatrix,
    tol: Optional[ToleranceConfig] = None,
    max_dim: Optional[int] = None,
    tail_fraction: float = settings.TAIL_FRACTION,
    artifact_threshold: float = settings.ARTIFACT_THRESHOLD
) -> SpectrumReport:
    """Dense complex eigen-decomposition with residuals and artifact flags.

    Uses LAPACK's QR-iteration solver through :func:`scipy.linalg.eig`.
    Every residual is recomputed here, independently of the solver.

    Raises:
        DimensionTooLarge: If ``A.dim`` exceeds the configured cap.
        ConvergenceFailure: If the solver fails or a residual exceeds
            spectral_tol.
    """
    tol = tol or ToleranceConfig.from_settings()
    cap = settings.EIG_MAX_DIM if max_dim is None else max_dim
    if A.dim > cap:
        raise DimensionTooLarge(f"eig is capped at dim {cap}, got {A.dim}")

    try:
        values, vectors = scipy.linalg.eig(A.entries)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"eigen-solver failed: {exc}") from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise ConvergenceFailure("eigen-solver returned non-finite output")

    pairs = []
    for index in range(A.dim):
        lam = complex(values[index])
        v = vectors[:, index]
        # Dividing by the first largest coordinate gives sup-norm 1 and a real positive peak.
        v = v / v[int(np.argmax(np.abs(v)))]
        residual = float(np.max(np.abs(A.entries @ v - lam * v)) / np.max(np.abs(v)))
        if residual > tol.spectral_tol:
            raise ConvergenceFailure(
                f"eigenpair {lam:.6g} has residual {residual:.3e} > {tol.spectral_tol:.1e}"
            )
        vector = TruncVector(v, SpaceTag.C0)
        defect = c0_membership_defect(vector, tail_fraction)
        pairs.append(
            EigenPair(
                eigenvalue=lam,
                eigenvector=vector,
                residual=residual,
                eigen_class=classify_eigenvalue(lam, tol.spectral_tol),
                membership_defect=defect,
                artifact_flag=defect >= artifact_threshold,
            )
        )

    pairs.sort(key=lambda p: (-p.eigenvalue.real, -p.eigenvalue.imag))
    report = SpectrumReport(tuple(pairs), tol.spectral_tol, tail_length(A.dim, tail_fraction))
    logger.debug(f"eig: dim {A.dim}, max residual {report.max_residual:.3e}")
    return report


def basis_eigen_residual(A: OperatorMatrix, k: int, lam: complex) -> float:
    """||A e_k - lam e_k|| in the sup norm, read straight from column k."""
    column = A.column(k).copy()
    column[k - 1] -= lam
    return float(np.max(np.abs(column)))


def expected_paper_spectrum(dim: int) -> List[complex]:
    """Spectrum of the section of the c0 generator: {0} and {-1/k : 2 <= k <= N}."""
    return [0j] + [complex(-1.0 / k) for k in range(2, dim + 1)]


def match_spectra(computed: Sequence[complex], expected: Sequence[complex]) -> float:
    """Largest distance under greedy nearest-neighbour matching.

    Each expected value (in order) claims the nearest unclaimed computed
    value. Returns ``inf`` when the counts differ.
    """
    if len(computed) != len(expected):
        return math.inf
    remaining = list(complex(z) for z in computed)
    worst = 0.0
    for target in expected:
        distances = [abs(z - target) for z in remaining]
        nearest = int(np.argmin(distances))
        worst = max(worst, distances[nearest])
        remaining.pop(nearest)
    return worst


@dataclass(frozen=True)
class SpuriousZeroRow:
    """Spurious-zero diagnostics for one truncation dimension."""

    dim: int
    zero_count: int
    zero_defect: float
    imaginary_count: int
    genuine_zero_or_imaginary: int
    max_residual: float
    spectrum_error: float

    def passed(self, artifact_threshold: float = settings.ARTIFACT_THRESHOLD) -> bool:
        return (
            self.zero_count >= 1
            and self.zero_defect >= artifact_threshold
            and self.imaginary_count == 0
            and self.genuine_zero_or_imaginary == 0
        )


SPURIOUS_ZERO_CSV_HEADER = [
    "dim",
    "zero_count",
    "zero_defect",
    "imaginary_count",
    "genuine_zero_or_imaginary",
    "max_residual",
    "spectrum_error",
]


@dataclass(frozen=True)
class SpuriousZeroReport:
    """One row per truncation dimension."""

    rows: Tuple[SpuriousZeroRow, ...]
    artifact_threshold: float = settings.ARTIFACT_THRESHOLD

    @property
    def passed(self) -> bool:
        return all(row.passed(self.artifact_threshold) for row in self.rows)

    @property
    def conclusion(self) -> str:
        if self.passed:
            return (
                "truncation spectrum contains 0 with a non-decaying eigenvector at every N: "
                "flagged as artifact; certified c0 spectrum has no zero or purely imaginary eigenvalue"
            )
        return "certified c0 spectrum could not be separated from the truncation spectrum"

    def to_rows(self) -> List[List[Any]]:
        return [
            [
                row.dim,
                row.zero_count,
                row.zero_defect,
                row.imaginary_count,
                row.genuine_zero_or_imaginary,
                row.max_residual,
                row.spectrum_error,
            ]
            for row in self.rows
        ]

    def to_json(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "artifact_threshold": self.artifact_threshold,
            "conclusion": self.conclusion,
            "rows": [dict(zip(SPURIOUS_ZERO_CSV_HEADER, values)) for values in self.to_rows()],
        }


def spurious_zero_analysis(
    dims: Sequence[int],
    tol: Optional[ToleranceConfig] = None
) -> SpuriousZeroReport:
    """Locate and score the zero eigenvalue of the generator section at each N.

    Raises:
        DimensionTooSmall: If any dim is below 2.
        ConvergenceFailure: Propagated from :func:`eig`.
    """
    tol = tol or ToleranceConfig.from_settings()
    rows = []
    for dim in dims:
        if dim < 2:
            raise DimensionTooSmall(f"spurious_zero_analysis needs dims >= 2, got {dim}")
        report = eig(paper_generator(dim).matrix, tol)
        zeros = report.by_class(EigenClass.ZERO)
        genuine = [
            p for p in report.certified()
            if p.eigen_class in (EigenClass.ZERO, EigenClass.PURELY_IMAGINARY)
        ]
        row = SpuriousZeroRow(
            dim=dim,
            zero_count=len(zeros),
            zero_defect=min((p.membership_defect for p in zeros), default=math.nan),
            imaginary_count=report.count(EigenClass.PURELY_IMAGINARY),
            genuine_zero_or_imaginary=len(genuine),
            max_residual=report.max_residual,
            spectrum_error=match_spectra(report.eigenvalues, expected_paper_spectrum(dim)),
        )
        logger.info(
            f"N={dim}: zero eigenvector defect {row.zero_defect:.6f}, "
            f"purely imaginary count {row.imaginary_count}"
        )
        rows.append(row)
    return SpuriousZeroReport(tuple(rows))
