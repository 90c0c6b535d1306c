"""Resource budgets keeping every operation at desk scale.

All enumerations and dense eigensolves check against a :class:`Budgets`
instance before allocating.  The environment variable
``EXPANDER_FORGE_BUDGET_OVERRIDE`` (an integer) raises every budget to at
least that value, which is occasionally useful for one-off large runs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

ENV_OVERRIDE = "EXPANDER_FORGE_BUDGET_OVERRIDE"


@dataclass(frozen=True)
class Budgets:
    max_tuples: int = 2**22        # enumerated (x, tuple) pairs
    max_vertices: int = 10**6      # vertices of any materialized graph
    dense_cap: int = 3000          # dense symmetric eigensolves
    walsh_cap: int = 24            # dimension t for 2^t Walsh transforms
    subset_sum_cap: int = 2**26    # subset sums enumerated per distinctness check
    partition_cap: int = 9         # ground-set size for set-partition enumeration

    def with_override(self) -> "Budgets":
        """Apply the environment override, if any, to every budget."""
        raw = os.environ.get(ENV_OVERRIDE)
        if raw is None:
            return self
        floor = int(raw)
        return replace(
            self,
            max_tuples=max(self.max_tuples, floor),
            max_vertices=max(self.max_vertices, floor),
            dense_cap=max(self.dense_cap, floor),
            subset_sum_cap=max(self.subset_sum_cap, floor),
        )


DEFAULT_BUDGETS = Budgets().with_override()
