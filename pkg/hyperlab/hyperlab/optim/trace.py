"""
Trace of an optimizer run
"""

from dataclasses import dataclass, field
from typing import Any

CONVERGED = "converged"
BUDGET = "budget"


@dataclass
class Trace:
    """
    Transcript of one run

    distances_to_opt[k] is the ground-truth distance of the iterate produced after k
    queries; it is never derived from oracle answers.
    """

    iterates: list[Any] = field(default_factory=list)
    distances_to_opt: list[float] = field(default_factory=list)
    query_count: int = 0
    terminated: str = BUDGET

    def record(self, point, distance: float):
        self.iterates.append(point)
        self.distances_to_opt.append(float(distance))

    @property
    def final_distance(self) -> float:
        return self.distances_to_opt[-1]

    @property
    def converged(self) -> bool:
        return self.terminated == CONVERGED

    def queries_to_within(self, eps: float) -> int | None:
        """Queries spent before the first iterate within eps of the optimum, None if never"""
        for k, d in enumerate(self.distances_to_opt):
            if d < eps:
                return k
        return None
