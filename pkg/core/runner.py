"""Scenario runner module.

This module fans independent scenarios out over worker threads and gathers
their results. Scenarios share nothing but the immutable ToleranceConfig, so
they can run in any order; results come back in submission order.
"""
import asyncio
from typing import List, Optional, Sequence, Union

from core.errors import SemilabError
from core.scenarios.base import Scenario, ScenarioResult
from utils.logging import get_logger

Outcome = Union[ScenarioResult, SemilabError]


class ScenarioRunner:
    """Run scenarios concurrently.

    Attributes:
        max_workers: Upper bound on scenarios computing at the same time
            (None lets the default executor decide).
    """

    def __init__(self, max_workers: Optional[int] = None) -> None:
        self.max_workers = max_workers
        self._logger = get_logger("runner")

    async def _run_one(self, scenario: Scenario, gate: Optional[asyncio.Semaphore]) -> ScenarioResult:
        if gate is None:
            return await asyncio.to_thread(scenario.run)
        async with gate:
            return await asyncio.to_thread(scenario.run)

    async def run_async(self, scenarios: Sequence[Scenario]) -> List[Outcome]:
        """Run every scenario and return a result or the raised error for each.

        Only :class:`SemilabError` is captured; anything else is a bug and
        propagates.
        """
        gate = asyncio.Semaphore(self.max_workers) if self.max_workers else None
        self._logger.info(f"Dispatching {len(scenarios)} scenarios")
        outcomes = await asyncio.gather(
            *(self._run_one(s, gate) for s in scenarios),
            return_exceptions=True
        )

        for scenario, outcome in zip(scenarios, outcomes):
            if isinstance(outcome, SemilabError):
                self._logger.error(f"Scenario {scenario.name} raised {type(outcome).__name__}: {outcome}")
            elif isinstance(outcome, BaseException):
                raise outcome
        return list(outcomes)

    def run(self, scenarios: Sequence[Scenario]) -> List[Outcome]:
        """Blocking wrapper around :meth:`run_async`."""
        return asyncio.run(self.run_async(scenarios))
