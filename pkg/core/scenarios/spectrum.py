"""Spurious-zero sweep over truncation dimensions.

Every finite section of the c0 generator has eigenvalue 0, carried by the
constant vector. The sweep shows the zero is there at each N, that its
eigenvector never decays (so it is a truncation artifact) and that no
certified eigenvalue is zero or purely imaginary.
"""
from typing import Optional, Sequence

from config import settings
from core.errors import InvalidParameter
from core.scenarios.base import Scenario
from core.semigroups import paper_generator
from core.spaces import ToleranceConfig
from core.spectral import SPECTRUM_CSV_HEADER, SPURIOUS_ZERO_CSV_HEADER, eig, spurious_zero_analysis


class SpectrumScenario(Scenario):
    """Spectrum of the generator section at several dimensions."""

    name = "spectrum"
    provenance = (
        "Example: the generator has no eigenvector for a purely imaginary eigenvalue or 0 in c0; "
        "the zero eigenvalue of every finite section belongs to the constant vector, which is not in c0"
    )

    def __init__(
        self,
        dims: Sequence[int] = settings.DEFAULT_DIMS,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        if not dims:
            raise InvalidParameter("the spectrum sweep needs at least one dimension")
        super().__init__(tolerances, log_level)
        self.dims = [int(d) for d in dims]

    def execute(self) -> None:
        tol = self.tolerances
        report = spurious_zero_analysis(self.dims, tol)
        self.record("dims", self.dims)
        self.record("conclusion", report.conclusion)
        self.attach("spectrum", SPURIOUS_ZERO_CSV_HEADER, report.to_rows())

        notes = {}
        for row in report.rows:
            self.check(f"spurious_zero_N{row.dim}", row.passed(report.artifact_threshold), row.zero_defect)
            self.check(f"spectrum_match_N{row.dim}", row.spectrum_error <= tol.spectral_tol, row.spectrum_error)
            spectrum = eig(paper_generator(row.dim).matrix, tol)
            self.attach(f"spectrum_N{row.dim}", SPECTRUM_CSV_HEADER, spectrum.to_rows())
            if spectrum.artifact_note:
                notes[str(row.dim)] = spectrum.artifact_note
        if notes:
            self.record("artifact_notes", notes)
