"""Arithmetic over GF(2)^t, generator sets, sumsets, and exact Cayley spectra.

Vectors are plain Python ints (t-bit words, low bit = coordinate 1), so the
group law is ``^`` and every element is its own inverse.  Dimensions up to 62
fit one machine word; containers carry ``t`` and validate on construction.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, replace

import numpy as np

from .budgets import DEFAULT_BUDGETS, Budgets
from .errors import CertificationExhausted, DimensionMismatch, ResourceLimit
from .rng import SplitMix64

WORD_CAP = 62


def gf2_add(a: int, b: int) -> int:
    """Group addition in GF(2)^t: bitwise XOR."""
    return a ^ b


def gf2_sum(values) -> int:
    acc = 0
    for v in values:
        acc ^= v
    return acc


def check_dimension(word: int, t: int) -> None:
    if not 1 <= t <= WORD_CAP:
        raise DimensionMismatch(f"dimension t={t} outside 1..{WORD_CAP}")
    if word < 0 or word >> t:
        raise DimensionMismatch(f"word {word:#x} has bits outside dimension {t}")


def to_hex(word: int, t: int) -> str:
    """Fixed-width lowercase hex, most-significant nibble first."""
    return format(word, f"0{(t + 3) // 4}x")


@dataclass(frozen=True)
class Certification:
    """Status record attached to a generator set.

    size_threshold: |S| >= 4**r, the size regime the asymptotic degree
        bounds ask for.  Recorded only; nothing here gates on it.
    sum_distinct:   all sums of up to min(2**r, |S|) distinct elements are
        pairwise distinct (hence nonzero for nonempty index sets).
    epsilon:        spectral expansion 1 - lambda/d of Cay(GF(2)^t, S),
        filled in by :func:`expander_forge.spectral.certify_epsilon`.
    """

    size_threshold: bool
    sum_distinct: bool
    epsilon: float | None = None


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered distinct nonzero generators of a Cayley graph over GF(2)^t."""

    t: int
    r: int
    elements: tuple[int, ...]
    cert: Certification

    def __post_init__(self):
        seen = set()
        for e in self.elements:
            check_dimension(e, self.t)
            if e == 0:
                raise ValueError("generator sets exclude 0")
            if e in seen:
                raise ValueError(f"duplicate generator {e:#x}")
            seen.add(e)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def digest(self) -> str:
        return hashlib.sha256(format_generator_file(self).encode()).hexdigest()


@dataclass(frozen=True)
class GeneratorMultiset:
    """Generator multiset for a Cayley multigraph.

    A zero entry is only legal when ``allow_zero`` is set; it contributes
    ``entries[0]`` loops at every vertex, each adding 1 to the degree.
    """

    t: int
    entries: tuple[tuple[int, int], ...]  # (element, multiplicity), element-sorted
    allow_zero: bool = False

    def __post_init__(self):
        last = -1
        for elem, mult in self.entries:
            check_dimension(elem, self.t)
            if mult <= 0:
                raise ValueError("multiplicities must be positive")
            if elem == 0 and not self.allow_zero:
                raise ValueError("zero generator requires allow_zero=True")
            if elem <= last:
                raise ValueError("entries must be sorted by element, no repeats")
            last = elem

    @classmethod
    def from_counts(cls, t: int, counts: dict[int, int], allow_zero: bool = False):
        return cls(t, tuple(sorted(counts.items())), allow_zero)

    @classmethod
    def from_elements(cls, t: int, elements, allow_zero: bool = False):
        counts: dict[int, int] = {}
        for e in elements:
            counts[e] = counts.get(e, 0) + 1
        return cls.from_counts(t, counts, allow_zero)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity_vector(self) -> np.ndarray:
        vec = np.zeros(1 << self.t, dtype=np.int64)
        for elem, mult in self.entries:
            vec[elem] = mult
        return vec


# ---------------------------------------------------------------------------
# sampling and certification


def sample_elements(t: int, size: int, rng: SplitMix64, draw_budget: int) -> tuple[int, ...] | None:
    """Draw `size` distinct nonzero t-bit words; None if the budget runs out."""
    mask = (1 << t) - 1
    chosen: list[int] = []
    seen: set[int] = set()
    for _ in range(draw_budget):
        word = rng.next_u64() & mask
        if word == 0 or word in seen:
            continue
        seen.add(word)
        chosen.append(word)
        if len(chosen) == size:
            return tuple(chosen)
    return None


def check_sum_distinctness(
    elements,
    r: int,
    *,
    budget: int | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
):
    """Check that sums of up to min(2**r, n) distinct elements never collide.

    Enumerates every subset of size 0..L level by level and compares all
    sums.  Returns (True, None), or (False, (subset_a, subset_b)) with two
    distinct subsets of equal sum.  Raises ResourceLimit if the subset count
    exceeds the budget.
    """
    elems = tuple(elements)
    n = len(elems)
    if n > WORD_CAP:
        raise ResourceLimit(f"distinctness check supports at most {WORD_CAP} elements")
    level_cap = min(1 << r, n)
    total = sum(_binom(n, l) for l in range(level_cap + 1))
    cap = budget if budget is not None else budgets.subset_sum_cap
    if total > cap:
        raise ResourceLimit(f"{total} subset sums exceed budget {cap}")

    arr = np.array(elems, dtype=np.uint64)
    # Level l entries carry (sum, last element index, member bitmask); extending
    # only past the last index enumerates each subset exactly once.
    sums = [np.zeros(1, dtype=np.uint64)]
    lasts = [np.full(1, -1, dtype=np.int64)]
    masks = [np.zeros(1, dtype=np.uint64)]
    for _ in range(level_cap):
        prev_s, prev_l, prev_m = sums[-1], lasts[-1], masks[-1]
        order = np.argsort(prev_l, kind="stable")
        prev_s, prev_l, prev_m = prev_s[order], prev_l[order], prev_m[order]
        cut = np.searchsorted(prev_l, np.arange(n))
        parts_s, parts_l, parts_m = [], [], []
        for j in range(n):
            take = cut[j]
            if take == 0:
                continue
            parts_s.append(prev_s[:take] ^ arr[j])
            parts_l.append(np.full(take, j, dtype=np.int64))
            parts_m.append(prev_m[:take] | np.uint64(1 << j))
        if not parts_s:
            break
        sums.append(np.concatenate(parts_s))
        lasts.append(np.concatenate(parts_l))
        masks.append(np.concatenate(parts_m))

    all_sums = np.concatenate(sums)
    all_masks = np.concatenate(masks)
    order = np.argsort(all_sums, kind="stable")
    srt = all_sums[order]
    dup = np.nonzero(srt[1:] == srt[:-1])[0]
    if dup.size == 0:
        return True, None
    i = int(dup[0])
    mask_a = int(all_masks[order[i]])
    mask_b = int(all_masks[order[i + 1]])
    subset = lambda m: tuple(elems[j] for j in range(n) if m >> j & 1)
    return False, (subset(mask_a), subset(mask_b))


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def sample_generators(
    t: int,
    size: int,
    r: int,
    seed: int,
    *,
    max_resamples: int = 10_000,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> GeneratorSet:
    """Sample a sum-distinct generator set, bit-reproducibly from `seed`.

    Candidate sets are drawn from SplitMix64(seed) (t-bit masking of the
    64-bit outputs, rejecting zero and repeats) and re-drawn until
    :func:`check_sum_distinctness` passes.  Identical (t, size, r, seed)
    always yields the identical element list.
    """
    family_size = (1 << (r - 1)) - 1
    if r < 3:
        raise ValueError("uniformity r must be at least 3")
    if size < family_size:
        raise ValueError(f"size {size} below index-family size {family_size}: no edge seeds exist")
    if size > (1 << t) - 1:
        raise CertificationExhausted(f"cannot pick {size} distinct nonzero words of {t} bits")

    rng = SplitMix64(seed)
    draw_budget = 200 * size + 2000
    for _ in range(max_resamples):
        elems = sample_elements(t, size, rng, draw_budget)
        if elems is None:
            continue
        ok, _witness = check_sum_distinctness(elems, r, budgets=budgets)
        if ok:
            cert = Certification(size_threshold=size >= 4**r, sum_distinct=True)
            return GeneratorSet(t=t, r=r, elements=elems, cert=cert)
    raise CertificationExhausted(
        f"no sum-distinct set of {size} elements found in {max_resamples} resamples (t={t}, r={r})"
    )


def with_epsilon(gens: GeneratorSet, epsilon: float) -> GeneratorSet:
    return replace(gens, cert=replace(gens.cert, epsilon=epsilon))


# ---------------------------------------------------------------------------
# sumsets


def sumset(gens: GeneratorSet, l: int) -> GeneratorMultiset:
    """The set of sums of l distinct generators, each with multiplicity 1.

    For a sum-distinct set and l <= 2**r this has exactly C(|S|, l)
    elements, none of them zero.
    """
    if l < 0 or l > gens.size:
        raise ValueError(f"l={l} outside 0..{gens.size}")
    values = {gf2_sum(combo) for combo in itertools.combinations(gens.elements, l)}
    allow_zero = 0 in values
    return GeneratorMultiset.from_elements(gens.t, values, allow_zero=allow_zero)


# ---------------------------------------------------------------------------
# exact spectra

def walsh_hadamard_transform(vec: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of an integer vector."""
    out = np.array(vec, dtype=np.int64, copy=True)
    n = out.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        out = out.reshape(-1, 2 * h)
        a = out[:, :h].copy()
        b = out[:, h:].copy()
        out[:, :h] = a + b
        out[:, h:] = a - b
        out = out.reshape(n)
        h *= 2
    return out


def cayley_spectrum_exact(gen: GeneratorMultiset, *, budgets: Budgets = DEFAULT_BUDGETS) -> np.ndarray:
    """Exact integer spectrum of Cay(GF(2)^t, gen), indexed by characters.

    The eigenvalue at character y is sum_s m(s) * (-1)^<y,s>, i.e. the
    Walsh-Hadamard transform of the multiplicity vector.  Index 0 is the
    degree.
    """
    if gen.t > budgets.walsh_cap:
        raise ResourceLimit(f"t={gen.t} above Walsh cap {budgets.walsh_cap}")
    return walsh_hadamard_transform(gen.multiplicity_vector())


# ---------------------------------------------------------------------------
# generator-set files
#
# line 1: "t=<int> r=<int> n=<int>"; then one lowercase hex word per line,
# most-significant nibble first, no 0x prefix, in sampling order.


def format_generator_file(gens: GeneratorSet) -> str:
    lines = [f"t={gens.t} r={gens.r} n={gens.size}"]
    lines.extend(to_hex(e, gens.t) for e in gens.elements)
    return "\n".join(lines) + "\n"


def write_generator_file(path, gens: GeneratorSet) -> None:
    with open(path, "w") as fh:
        fh.write(format_generator_file(gens))


def read_generator_file(path) -> GeneratorSet:
    with open(path) as fh:
        header = fh.readline().split()
        fields = dict(part.split("=") for part in header)
        t, r, n = int(fields["t"]), int(fields["r"]), int(fields["n"])
        elems = tuple(int(fh.readline().strip(), 16) for _ in range(n))
    cert = Certification(size_threshold=n >= 4**r, sum_distinct=False)
    return GeneratorSet(t=t, r=r, elements=elems, cert=cert)
