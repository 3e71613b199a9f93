"""Demo script for the SemiLab system.

This script runs every scenario in one process through the scenario runner
and prints a verdict per scenario, plus a negative control: the isometric
scenario fed the contraction semigroup, which must fail.
"""
import logging
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from core.runner import ScenarioRunner
from core.scenarios import (
    ExampleScenario,
    HilbertControlScenario,
    IsometricScenario,
    L1DiagonalScenario,
    ShiftIsometryScenario,
    SpectrumScenario,
)
from core.semigroups import ClosedFormPaper, DiagonalPhase, TimeGrid
from utils.logging import configure_logger


def main() -> None:
    """Run the demo."""
    configure_logger("semilab", "WARNING")
    grid = TimeGrid.from_range(0.0, 5.0, 0.1)

    scenarios = [
        ExampleScenario(32, grid, log_level=logging.WARNING),
        IsometricScenario(DiagonalPhase([1.0, -2.0, 3.141592]), grid),
        ShiftIsometryScenario(16, trials=200),
        L1DiagonalScenario([1.0, -2.0, 0.5], grid),
        HilbertControlScenario([2.0, 1.0], [0.0, 0.5], grid),
        SpectrumScenario([8, 32]),
        IsometricScenario(ClosedFormPaper(8), grid),
    ]

    print("\n🔬 SemiLab Demo\n")
    for scenario, outcome in zip(scenarios, ScenarioRunner().run(scenarios)):
        if isinstance(outcome, Exception):
            print(f"⚠️ {scenario.name}: {outcome}")
            continue
        icon = "✅" if outcome.overall else "❌"
        print(f"{icon} {outcome.name}")
        for assertion in outcome.assertions:
            mark = "ok" if assertion.passed else "FAILED"
            print(f"   {assertion.label:<32} {mark:<7} {assertion.metric:.3e}")

    print("\nThe last isometric run uses a non-isometric semigroup and is expected to fail.")


if __name__ == "__main__":
    main()
