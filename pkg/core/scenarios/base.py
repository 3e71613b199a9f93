"""Base scenario class for the SemiLab system.

This module defines the Scenario base class every certification inherits
from, together with the ScenarioResult it produces. A scenario binds one
statement about contraction/isometric semigroups to computed evidence: a list
of labelled assertions, each with a pass/fail verdict and a metric.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from core.spaces import ToleranceConfig
from utils.logging import get_logger


@dataclass(frozen=True)
class Assertion:
    """One checked claim.

    Attributes:
        label: Stable identifier used in reports.
        passed: Verdict.
        metric: The number the verdict was decided on.
        detail: Optional human-readable context.
    """

    label: str
    passed: bool
    metric: float
    detail: str = ""

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"label": self.label, "passed": self.passed, "metric": self.metric}
        if self.detail:
            data["detail"] = self.detail
        return data


class Table(NamedTuple):
    """CSV attachment of a result."""

    header: List[str]
    rows: List[List[Any]]


@dataclass(frozen=True)
class ScenarioResult:
    """Named assertion bundle; ``overall`` is the conjunction of its assertions.

    Attributes:
        name: Scenario name (also the JSON report file stem).
        assertions: Checked claims in evaluation order.
        provenance: The statement being certified.
        metadata: Run parameters and supporting numbers.
        tables: CSV attachments keyed by file stem.
    """

    name: str
    assertions: Tuple[Assertion, ...]
    provenance: str
    metadata: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Table] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def failures(self) -> List[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def assertion(self, label: str) -> Assertion:
        """Look an assertion up by label.

        Raises:
            KeyError: If no assertion carries ``label``.
        """
        for candidate in self.assertions:
            if candidate.label == label:
                return candidate
        raise KeyError(label)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "overall": self.overall,
            "provenance": self.provenance,
            "assertions": [a.to_json() for a in self.assertions],
            "metadata": self.metadata,
        }


class Scenario(ABC):
    """Base scenario with assertion bookkeeping and logging.

    Subclasses set ``name`` and ``provenance`` and implement :meth:`execute`,
    calling :meth:`check` for every claim. :meth:`run` resets the bookkeeping,
    so a scenario instance can be run more than once.

    Attributes:
        tolerances: Shared tolerance bundle.
        logger: ``semilab.scenario.<name>`` logger.
    """

    name: str = ""
    provenance: str = ""

    def __init__(
        self,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        """Initialize a new scenario.

        Args:
            tolerances: Tolerances; defaults come from ``config.settings``.
            log_level: Optional level override for this scenario's logger.
        """
        self.tolerances = tolerances or ToleranceConfig.from_settings()
        self.logger = get_logger(f"scenario.{self.name}")
        if log_level is not None:
            self.logger.setLevel(log_level)
        self._assertions: List[Assertion] = []
        self._metadata: Dict[str, Any] = {}
        self._tables: Dict[str, Table] = {}

    def run(self) -> ScenarioResult:
        """Execute the scenario and bundle its evidence."""
        self.logger.info(f"Running scenario {self.name}")
        self._assertions = []
        self._metadata = {"tolerances": self.tolerances.to_dict()}
        self._tables = {}

        self.execute()

        result = ScenarioResult(
            name=self.name,
            assertions=tuple(self._assertions),
            provenance=self.provenance,
            metadata=dict(self._metadata),
            tables=dict(self._tables),
        )
        for failure in result.failures:
            self.logger.warning(f"Assertion {failure.label} failed (metric {failure.metric:.6g})")
        verdict = "passed" if result.overall else "failed"
        self.logger.info(f"Scenario {self.name} {verdict}")
        return result

    @abstractmethod
    def execute(self) -> None:
        """Compute the evidence, recording it through :meth:`check`."""

    def check(self, label: str, passed: bool, metric: float, detail: str = "") -> Assertion:
        """Record an assertion and return it."""
        assertion = Assertion(label, bool(passed), float(metric), detail)
        self._assertions.append(assertion)
        self.logger.debug(f"{label}: {'ok' if assertion.passed else 'FAILED'} ({metric:.6g})")
        return assertion

    def record(self, key: str, value: Any) -> None:
        """Attach a metadata entry to the result."""
        self._metadata[key] = value

    def attach(self, stem: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        """Attach a CSV table to the result."""
        self._tables[stem] = Table(list(header), [list(row) for row in rows])
