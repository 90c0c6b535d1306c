"""Edge-distribution counts, partition Moebius inversion, and mixing-lemma
style bounds.

A template is a multiset of index sets over [r] (repeats, the empty set and
the full set all allowed).  For vertex subsets V_1..V_r, the template count
is the number of (x, values) pairs, values ranging over all of S^template,
whose generalized edge tuple lands in V_1 x ... x V_r.  Inclusion-exclusion
over set partitions of the index family (with weight
mu = (-1)^(n - blocks) * prod (|block|-1)!) turns these counts into the
distinct-coordinate edge count, which is where the exact identity checked
here comes from.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .budgets import DEFAULT_BUDGETS, Budgets
from .construction import Hypergraph, build_index_family, falling, seed_tuple_count
from .errors import BoundViolated, ResourceLimit
from .gf2 import GeneratorSet
from .rng import SplitMix64
from .spectral import exact_epsilon


# ---------------------------------------------------------------------------
# set partitions


@dataclass(frozen=True)
class SetPartition:
    """Partition of range(n) with its inclusion-exclusion weight."""

    blocks: tuple[tuple[int, ...], ...]
    mu: int

    @property
    def block_count(self) -> int:
        return len(self.blocks)


def enumerate_partitions(n: int, *, budgets: Budgets = DEFAULT_BUDGETS):
    """All set partitions of range(n), in restricted-growth-string order."""
    if n > budgets.partition_cap:
        raise ResourceLimit(f"partition ground set {n} above cap {budgets.partition_cap}")
    if n == 0:
        yield SetPartition(blocks=(), mu=1)
        return

    def rec(code, maxblock):
        if len(code) == n:
            nblocks = maxblock + 1
            blocks = [[] for _ in range(nblocks)]
            for i, b in enumerate(code):
                blocks[b].append(i)
            sign = -1 if (n - nblocks) % 2 else 1
            mu = sign
            for blk in blocks:
                mu *= math.factorial(len(blk) - 1)
            yield SetPartition(blocks=tuple(tuple(b) for b in blocks), mu=mu)
            return
        for b in range(maxblock + 2):
            yield from rec(code + [b], max(maxblock, b))

    yield from rec([0], 0)


# ---------------------------------------------------------------------------
# templates


@dataclass(frozen=True)
class MultisetFamily:
    """Multiset of index sets over [r], as bitmasks; order is significant
    only as a coordinate labelling."""

    r: int
    entries: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.entries)


def family_as_template(r: int) -> MultisetFamily:
    return MultisetFamily(r=r, entries=build_index_family(r).sets)


def template_positions(template: MultisetFamily) -> list[list[int]]:
    """For each coordinate i of [r], the template positions containing i."""
    return [
        [p for p, mask in enumerate(template.entries) if mask >> i & 1]
        for i in range(template.r)
    ]


def template_count(
    gens: GeneratorSet,
    template: MultisetFamily,
    parts,
    *,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> int:
    """Exact count of (x, values) in GF(2)^t x S^template whose generalized
    edge tuple lies in V_1 x ... x V_r, by direct enumeration."""
    t = gens.t
    n = 1 << t
    total = n * gens.size ** template.size
    if total > budgets.max_tuples:
        raise ResourceLimit(f"{total} template assignments exceed budget")
    parts = [np.asarray(v, dtype=bool) for v in parts]
    if len(parts) != template.r or any(v.size != n for v in parts):
        raise ValueError("need one boolean part of length 2^t per coordinate")
    positions = template_positions(template)
    xs = np.arange(n)
    count = 0
    for values in itertools.product(gens.elements, repeat=template.size):
        offsets = []
        for pos in positions:
            acc = 0
            for p in pos:
                acc ^= values[p]
            offsets.append(acc)
        mask = parts[0][xs ^ offsets[0]]
        for arr, off in zip(parts[1:], offsets[1:]):
            mask = mask & arr[xs ^ off]
        count += int(np.count_nonzero(mask))
    return count


# ---------------------------------------------------------------------------
# edge counts between vertex subsets


def edge_count_between(H: Hypergraph, parts, mode: str, *, budgets: Budgets = DEFAULT_BUDGETS) -> int:
    """Number of ordered r-tuples in V_1 x ... x V_r forming an edge.

    via-edges walks the deduplicated edge list and counts qualifying
    orderings; via-tuples counts seeds with distinct coordinates landing in
    the product.  The two must agree exactly.
    """
    n = 1 << H.t
    parts = [np.asarray(v, dtype=bool) for v in parts]
    if len(parts) != H.r or any(v.size != n for v in parts):
        raise ValueError("need one boolean part of length 2^t per coordinate")
    if mode == "via-edges":
        edges = H.edges
        total = 0
        for perm in itertools.permutations(range(H.r)):
            mask = parts[0][edges[:, perm[0]]]
            for i in range(1, H.r):
                mask = mask & parts[i][edges[:, perm[i]]]
            total += int(np.count_nonzero(mask))
        return total
    if mode == "via-tuples":
        from .construction import edge_offsets, seed_tuples

        count_budget = n * seed_tuple_count(H.generators.size, H.r)
        if count_budget > budgets.max_tuples:
            raise ResourceLimit("seed enumeration exceeds budget")
        xs = np.arange(n)
        total = 0
        for values in seed_tuples(H.generators, H.family):
            offs = edge_offsets(values, H.family)
            mask = parts[0][xs ^ offs[0]]
            for arr, off in zip(parts[1:], offs[1:]):
                mask = mask & arr[xs ^ off]
            total += int(np.count_nonzero(mask))
        return total
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# the Moebius identity


def blockwise_xor_template(r: int, partition: SetPartition) -> MultisetFamily:
    """Template whose entries are the per-block symmetric differences of the
    canonical index family (a multiset: blocks may collapse to the same set,
    the empty set, or the full set)."""
    fam = build_index_family(r)
    entries = []
    for block in partition.blocks:
        acc = 0
        for pos in block:
            acc ^= fam.sets[pos]
        entries.append(acc)
    return MultisetFamily(r=r, entries=tuple(entries))


def moebius_identity_check(gens: GeneratorSet, parts, *, budgets: Budgets = DEFAULT_BUDGETS) -> dict:
    """Exact identity: the distinct-coordinate edge count equals the
    mu-weighted sum of template counts over partitions of the index family."""
    r = gens.r
    fam = build_index_family(r)
    from .construction import build_hypergraph

    H = build_hypergraph(gens, budgets=budgets)
    direct_edges = edge_count_between(H, parts, "via-edges", budgets=budgets)
    direct_tuples = edge_count_between(H, parts, "via-tuples", budgets=budgets)
    total = 0
    terms = []
    for partition in enumerate_partitions(fam.size, budgets=budgets):
        template = blockwise_xor_template(r, partition)
        f = template_count(gens, template, parts, budgets=budgets)
        total += partition.mu * f
        terms.append({"blocks": partition.block_count, "mu": partition.mu, "count": f})
    return {
        "instance": {"r": r, "t": gens.t, "s_size": gens.size},
        "edge_count_via_edges": direct_edges,
        "edge_count_via_tuples": direct_tuples,
        "moebius_total": total,
        "mode_agreement": direct_edges == direct_tuples,
        "identity_exact": total == direct_tuples,
        "pass": direct_edges == direct_tuples and total == direct_tuples,
    }


# ---------------------------------------------------------------------------
# bounds


def moebius_size_sum(n_ground: int, s_size: int, *, budgets: Budgets = DEFAULT_BUDGETS) -> int:
    """sum over partitions of |mu| * |S|^blocks (computed exactly rather than
    bounded by 2 |S|^n, and reported next to that bound)."""
    total = 0
    for partition in enumerate_partitions(n_ground, budgets=budgets):
        total += abs(partition.mu) * s_size**partition.block_count
    return total


def bound_check(
    gens: GeneratorSet,
    parts,
    form: str,
    template: MultisetFamily | None = None,
    *,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> dict:
    """Check one discrepancy inequality with the exact Walsh expansion.

    All comparisons are exact rational arithmetic: square (or r-th power)
    both sides, so the square roots never need floating point.  A violation
    raises BoundViolated with the full instance, since the inequalities are
    theorems whenever epsilon is correct.
    """
    if gens.cert.epsilon is None:
        raise ValueError("bound_check needs cert.epsilon; run certify_epsilon first")
    r, t = gens.r, gens.t
    n = 1 << t
    lam, d = exact_epsilon(gens, budgets=budgets)
    one_minus_eps = Fraction(lam, d)
    parts = [np.asarray(v, dtype=bool) for v in parts]
    sizes = [int(v.sum()) for v in parts]
    vol = math.prod(sizes)
    fam = build_index_family(r)

    if form == "lemma":
        tpl = template or family_as_template(r)
        lhs = template_count(gens, tpl, parts, budgets=budgets)
        main = Fraction(gens.size ** tpl.size * vol, n ** (r - 1))
        coef = one_minus_eps * (r - 1) * gens.size ** tpl.size
        power, rhs_power = 2, coef**2 * sizes[0] * sizes[-1]
    elif form in ("proposition", "theorem"):
        from .construction import build_hypergraph

        H = build_hypergraph(gens, budgets=budgets)
        lhs = edge_count_between(H, parts, "via-tuples", budgets=budgets)
        main = Fraction(falling(gens.size, fam.size) * vol, n ** (r - 1))
        coef = one_minus_eps * 2 * r * gens.size**fam.size
        if form == "proposition":
            power, rhs_power = 2, coef**2 * sizes[0] * sizes[-1]
        else:
            power, rhs_power = r, coef**r * vol
    else:
        raise ValueError(f"unknown form {form!r}")

    deviation = abs(Fraction(lhs) - main)
    holds = deviation**power <= rhs_power
    bound_float = float(rhs_power) ** (1.0 / power)
    record = {
        "instance": {"r": r, "t": t, "s_size": gens.size, "form": form,
                     "part_sizes": sizes},
        "lhs": lhs,
        "main_term": float(main),
        "bound": bound_float,
        "margin": bound_float - float(deviation),
        "pass": bool(holds),
    }
    if form in ("proposition", "theorem"):
        exact_sum = moebius_size_sum(fam.size, gens.size, budgets=budgets)
        record["moebius_size_sum_exact"] = exact_sum
        record["moebius_size_sum_bound"] = 2 * gens.size**fam.size
    if not holds:
        raise BoundViolated("discrepancy bound violated", instance=record)
    return record


# ---------------------------------------------------------------------------
# deterministic random subsets for draws


def random_parts(t: int, r: int, density: float, rng: SplitMix64) -> list[np.ndarray]:
    """r boolean subsets of GF(2)^t, each point kept with the given density,
    drawn from the shared SplitMix64 stream."""
    n = 1 << t
    threshold = int(density * 2**64)
    out = []
    for _ in range(r):
        arr = np.zeros(n, dtype=bool)
        for x in range(n):
            arr[x] = rng.next_u64() < threshold
        out.append(arr)
    return out
