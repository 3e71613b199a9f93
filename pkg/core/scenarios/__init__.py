# Scenarios package
from .base import Assertion, Scenario, ScenarioResult, Table
from .example import ExampleScenario, run_example_scenario
from .hilbert import HilbertControlScenario, hilbert_control_scenario
from .isometric import IsometricScenario, delta_k_probe, recover_frequencies
from .l1 import L1DiagonalScenario, l1_diagonal_scenario
from .shift import ShiftIsometryScenario, shift_isometry_scenario
from .spectrum import SpectrumScenario
from .trajectory import TrajectoryScenario
from .witness import thm2_witness_search

SCENARIOS = {
    cls.name: cls
    for cls in (
        ExampleScenario,
        IsometricScenario,
        ShiftIsometryScenario,
        L1DiagonalScenario,
        HilbertControlScenario,
        SpectrumScenario,
        TrajectoryScenario,
    )
}

__all__ = [
    "Assertion",
    "Scenario",
    "ScenarioResult",
    "Table",
    "SCENARIOS",
    "ExampleScenario",
    "IsometricScenario",
    "ShiftIsometryScenario",
    "L1DiagonalScenario",
    "HilbertControlScenario",
    "SpectrumScenario",
    "TrajectoryScenario",
    "run_example_scenario",
    "hilbert_control_scenario",
    "shift_isometry_scenario",
    "l1_diagonal_scenario",
    "recover_frequencies",
    "delta_k_probe",
    "thm2_witness_search",
]
