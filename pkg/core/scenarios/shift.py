"""The shift isometry of c0 that does not preserve disjoint support.

T(sum a_i e_i) = (a_1 + a_2)/2 e_1 + sum a_i e_{i+1} is an isometry of c0,
yet T e_1 and T e_2 overlap on e_1. Since T e_1 is not a unimodular multiple
of e_1, T cannot be any T_{t_0} of an isometric C0-semigroup on c0, whose
operators all move e_1 along its own axis.
"""
from typing import Optional

import numpy as np

from config import settings
from core.errors import DimensionTooSmall, DimensionMismatch
from core.operators import (
    OperatorMatrix,
    disjointness_violation_witness,
    isometry_check_sampled,
    shift_isometry,
)
from core.scenarios.base import Scenario
from core.spaces import SpaceTag, ToleranceConfig

# T e_1 must sit at sup distance 1 from every unimodular multiple of e_1.
AXIS_GAP = 1.0
AXIS_GAP_TOL = 1e-12


def unimodular_axis_distance(column: np.ndarray) -> float:
    """Sup-norm distance from a vector to {c e_1 : |c| = 1}.

    The first coordinate contributes ||v_1| - 1| (the best unimodular c) and
    every other coordinate contributes its modulus.
    """
    tail = float(np.max(np.abs(column[1:]), initial=0.0))
    return max(abs(abs(column[0]) - 1.0), tail)


class ShiftIsometryScenario(Scenario):
    """Isometry, disjointness violation and non-embeddability of the shift.

    Attributes:
        operator: Operator under test; the shift section by default, a
            signed permutation for the control variant.
        trials: Random unit vectors for the sampled isometry check.
        seed: Sampling seed.
    """

    name = "shift"
    provenance = (
        "Remark: the isometry T(sum a_i e_i) = (a_1+a_2)/2 e_1 + sum a_i e_{i+1} of c0 does not "
        "preserve disjoint support; by the isometric-semigroup theorem (T_t e_k = e^{i w_k t} e_k) "
        "it is not T_{t_0} of any C0 isometric semigroup"
    )

    def __init__(
        self,
        dim: int,
        trials: int = settings.DEFAULT_TRIALS,
        seed: int = settings.DEFAULT_SEED,
        operator: Optional[OperatorMatrix] = None,
        tolerances: Optional[ToleranceConfig] = None,
        log_level: Optional[int] = None
    ) -> None:
        if dim < 4:
            raise DimensionTooSmall(f"the shift scenario needs N >= 4, got {dim}")
        if operator is not None and operator.dim != dim:
            raise DimensionMismatch(f"control operator has dim {operator.dim}, expected {dim}")
        super().__init__(tolerances, log_level)
        self.dim = dim
        self.trials = trials
        self.seed = seed
        self.operator = operator if operator is not None else shift_isometry(dim)

    def execute(self) -> None:
        T = self.operator
        tol = self.tolerances
        self.record("dim", self.dim)
        self.record("trials", self.trials)
        self.record("seed", self.seed)
        self.record("structure_hint", T.structure_hint.value)

        # (a) norm preservation
        check = isometry_check_sampled(T, SpaceTag.C0, self.trials, self.seed, tol)
        self.record("isometry_exact", check.exact)
        self.check("isometry", check.passed, check.worst_deviation)

        # (b) disjoint e_1, e_2 with overlapping images
        witness = disjointness_violation_witness(T, SpaceTag.C0, tol)
        if witness is None:
            self.record("disjointness_witness", None)
            self.check("disjointness_violated", False, 0.0, "disjointness preserved on basis pairs")
        else:
            self.record("disjointness_witness", [witness.first, witness.second])
            overlap = float(np.max(np.minimum(np.abs(T.column(witness.first)), np.abs(T.column(witness.second)))))
            self.check(
                "disjointness_violated",
                (witness.first, witness.second) == (1, 2),
                overlap,
                f"T e_{witness.first} and T e_{witness.second} overlap",
            )

        # (c) T e_1 is off the unimodular e_1 axis
        distance = unimodular_axis_distance(T.column(1))
        self.check("not_semigroup_embeddable", distance >= AXIS_GAP - AXIS_GAP_TOL, distance)


def shift_isometry_scenario(
    dim: int,
    trials: int = settings.DEFAULT_TRIALS,
    seed: int = settings.DEFAULT_SEED,
    tolerances: Optional[ToleranceConfig] = None
):
    """Run :class:`ShiftIsometryScenario` and return its ScenarioResult."""
    return ShiftIsometryScenario(dim, trials, seed, tolerances=tolerances).run()
