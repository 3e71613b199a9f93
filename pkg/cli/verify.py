"""SemiLab verification CLI module.

This module turns a RunConfig into scenarios, runs them, writes their
reports and maps the outcome to an exit code.
"""
from pathlib import Path
from typing import List, Union

from config.run_config import ALL_SCENARIOS, RunConfig
from core.errors import SemilabError
from core.runner import ScenarioRunner
from core.scenarios import (
    SCENARIOS,
    ExampleScenario,
    HilbertControlScenario,
    IsometricScenario,
    L1DiagonalScenario,
    Scenario,
    ScenarioResult,
    ShiftIsometryScenario,
    SpectrumScenario,
    TrajectoryScenario,
)
from core.semigroups import ClosedFormPaper, DiagonalPhase, MatrixExp, SemigroupEvaluator, paper_generator
from storage.reports import ReportStore, emit_report
from utils.logging import configure_logger

EXIT_PASS = 0
EXIT_ASSERTION_FAILURE = 1
EXIT_ERROR = 2

# Scenario order of ``verify all``.
ALL_ORDER = ("example", "isometric", "shift", "l1", "hilbert", "spectrum", "trajectory")


def build_evaluator(config: RunConfig, default: str) -> SemigroupEvaluator:
    """Evaluator named by ``config.evaluator`` (or ``default``)."""
    mode = config.evaluator or default
    if mode == "closed-form":
        return ClosedFormPaper(config.dim)
    if mode == "matrix-exp":
        return MatrixExp(paper_generator(config.dim))
    return DiagonalPhase(config.omega)


def build_scenario(config: RunConfig) -> Scenario:
    """Instantiate the scenario ``config.scenario`` from the run parameters.

    Raises:
        SemilabError: If the parameters are invalid for the scenario.
    """
    tol = config.tolerances
    name = config.scenario
    if name == "example":
        return ExampleScenario(config.dim, config.grid, tol)
    if name == "isometric":
        return IsometricScenario(build_evaluator(config, "diagonal-phase"), config.grid, tolerances=tol)
    if name == "shift":
        return ShiftIsometryScenario(config.dim, config.trials, config.seed, tolerances=tol)
    if name == "l1":
        return L1DiagonalScenario(
            config.omega, config.grid, config.amplitude, config.trials, config.seed, tolerances=tol
        )
    if name == "hilbert":
        return HilbertControlScenario(config.lambdas, config.mus, config.grid, tol)
    if name == "spectrum":
        return SpectrumScenario(config.dims, tol)
    return TrajectoryScenario(build_evaluator(config, "closed-form"), config.grid, config.index, tol)


class VerifyCLI:
    """Command-line runner for SemiLab scenarios.

    Attributes:
        config: The validated run configuration.
        logger: Configured ``semilab`` logger.
    """

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.logger = configure_logger("semilab", config.log_level)

    def _store(self, subdir: str = "") -> ReportStore:
        output_dir = Path(self.config.output_dir)
        if subdir:
            output_dir = output_dir / subdir
        return ReportStore(str(output_dir), self.config.formats).open()

    def print_verdict(self, result: ScenarioResult) -> None:
        """Print one verdict line per scenario, then the failing assertions."""
        passed = len(result.assertions) - len(result.failures)
        icon = "✅" if result.overall else "❌"
        print(f"{icon} {result.name}: {passed}/{len(result.assertions)} assertions passed")
        for failure in result.failures:
            print(f"   - {failure.label}: metric {failure.metric:.6g}")

    def run_single(self) -> int:
        scenario = build_scenario(self.config)
        result = scenario.run()
        emit_report(result, self._store())
        self.print_verdict(result)
        return EXIT_PASS if result.overall else EXIT_ASSERTION_FAILURE

    def run_all(self) -> int:
        scenarios: List[Scenario] = [
            build_scenario(self.config.for_scenario(name)) for name in ALL_ORDER if name in SCENARIOS
        ]
        outcomes: List[Union[ScenarioResult, SemilabError]] = ScenarioRunner().run(scenarios)

        code = EXIT_PASS
        for scenario, outcome in zip(scenarios, outcomes):
            if isinstance(outcome, SemilabError):
                print(f"❌ {scenario.name}: {type(outcome).__name__}: {outcome}")
                code = EXIT_ERROR
                continue
            emit_report(outcome, self._store(outcome.name))
            self.print_verdict(outcome)
            if not outcome.overall and code == EXIT_PASS:
                code = EXIT_ASSERTION_FAILURE
        return code

    def run(self) -> int:
        """Run the configured scenario(s) and return the exit code."""
        try:
            if self.config.scenario == ALL_SCENARIOS:
                return self.run_all()
            return self.run_single()
        except SemilabError as e:
            self.logger.error(f"{type(e).__name__}: {e}")
            print(f"❌ {self.config.scenario}: {type(e).__name__}: {e}")
            return EXIT_ERROR
