"""Random-walk mixing toward uniform, measured in total variation.

The transition kernel is lazy: stay put with probability `lazy`, otherwise
move across a uniformly random incident edge (multiplicities included).
The default lazy = 1/2 makes the kernel positive semidefinite, which kills
parity oscillation on near-bipartite walk graphs and makes TV nonincreasing;
lazy = 0 gives the pure walk with that monotonicity guarantee waived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .budgets import DEFAULT_BUDGETS, Budgets
from .errors import ResourceLimit
from .graphs import SparseGraph
from .rng import SplitMix64

SAMPLE_CHUNK = 1 << 16  # trajectories per PRNG stream; fixed, so results do
                        # not depend on how chunks are scheduled over threads


@dataclass(frozen=True)
class MixingCurve:
    start: int
    mode: str
    lazy: float
    tv: tuple[float, ...]  # entry m is the TV distance after m steps

    @property
    def steps(self) -> int:
        return len(self.tv) - 1


def tv_bound(n: int, lam_hat: float, step: int) -> float:
    """The l2-contraction bound sqrt(n) * lam_hat^step on TV distance."""
    return math.sqrt(n) * lam_hat**step


def lazy_lambda_hat(lam: float, degree: int, lazy: float) -> float:
    """Largest nontrivial |eigenvalue| of the lazy transition kernel."""
    return lazy + (1.0 - lazy) * lam / degree


def mixing_curve(
    G: SparseGraph,
    start: int | None = None,
    steps: int = 50,
    mode: str = "exact",
    lazy: float = 0.5,
    *,
    trajectories: int = 10**6,
    seed: int = 1,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> MixingCurve:
    """TV distance to uniform after 0..steps walk steps from a point mass.

    exact mode propagates the full distribution vector; sampled mode runs
    independent trajectories in fixed-size chunks, one SplitMix64-derived
    PRNG stream per chunk, and estimates TV from the pooled histogram.
    """
    n, d = G.n, G.degree
    if start is None:
        start = 0  # labels are sorted, so index 0 is the smallest key
    if not 0 <= lazy <= 1:
        raise ValueError("lazy must lie in [0, 1]")
    if steps < 0:
        raise ValueError("steps must be nonnegative")

    if mode == "exact":
        if n > budgets.max_vertices:
            raise ResourceLimit(f"{n} vertices exceed exact-mode budget")
        kernel = G.adj.astype(np.float64) * ((1.0 - lazy) / d)
        p = np.zeros(n)
        p[start] = 1.0
        tvs = [float(0.5 * np.abs(p - 1.0 / n).sum())]
        for _ in range(steps):
            p = kernel @ p + lazy * p
            drift = abs(p.sum() - 1.0)
            if drift > 1e-12:
                raise ArithmeticError(f"distribution mass drifted by {drift}")
            tvs.append(float(0.5 * np.abs(p - 1.0 / n).sum()))
        return MixingCurve(start=start, mode="exact", lazy=lazy, tv=tuple(tvs))

    if mode == "sampled":
        indptr, indices, data = G.adj.indptr, G.adj.indices, G.adj.data
        nbr = np.repeat(indices, data).reshape(n, d)
        hists = np.zeros((steps + 1, n), dtype=np.int64)
        master = SplitMix64(seed)
        remaining = trajectories
        while remaining > 0:
            size = min(SAMPLE_CHUNK, remaining)
            remaining -= size
            rng = np.random.default_rng(master.next_u64())
            state = np.full(size, start, dtype=np.int64)
            hists[0] += np.bincount(state, minlength=n)
            for m in range(1, steps + 1):
                move = rng.random(size) >= lazy
                picks = rng.integers(0, d, size)
                state = np.where(move, nbr[state, picks], state)
                hists[m] += np.bincount(state, minlength=n)
        tvs = [
            float(0.5 * np.abs(hists[m] / trajectories - 1.0 / n).sum())
            for m in range(steps + 1)
        ]
        return MixingCurve(start=start, mode="sampled", lazy=lazy, tv=tuple(tvs))

    raise ValueError(f"unknown mode {mode!r}")
