"""The hypergraph construction: index families, edge tuples, and hypergraphs.

An edge is seeded by a base point x in GF(2)^t and a tuple of distinct
generators indexed by the canonical index family over [r]; coordinate i of
the edge is x plus the sum of the generators whose index set contains i.
Grouped seed tuples (coordinates that are sums of disjoint generator
blocks) model how lower-order prefixes of the construction behave.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .budgets import DEFAULT_BUDGETS, Budgets
from .errors import MultiplicityViolation, ResourceLimit
from .gf2 import GeneratorSet, gf2_sum, to_hex

# ---------------------------------------------------------------------------
# index family


def _mask_elements(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class IndexFamily:
    """Canonical family of subsets of [r] indexing seed-tuple coordinates.

    Contains every nonempty I with |I| < r/2 and, for r even, the half-size
    sets containing 1.  Order is ascending size, then lexicographic on the
    sorted element tuple; bitmask bit i-1 encodes element i.  Together with
    the empty set this family is downward closed and picks exactly one of
    each complementary pair {I, [r] \\ I}.
    """

    r: int
    sets: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.sets)

    def positions_by_coord(self) -> tuple[tuple[int, ...], ...]:
        """For each coordinate i in [r], the tuple positions whose set contains i."""
        out = []
        for i in range(1, self.r + 1):
            bit = 1 << (i - 1)
            out.append(tuple(p for p, mask in enumerate(self.sets) if mask & bit))
        return tuple(out)

    def index_of(self) -> dict[int, int]:
        return {mask: p for p, mask in enumerate(self.sets)}


def build_index_family(r: int) -> IndexFamily:
    """Build the canonical index family for uniformity r (r >= 2)."""
    if r < 2:
        raise ValueError("index family needs r >= 2")
    full = 1 << r
    chosen = []
    for mask in range(1, full - 1):
        size = mask.bit_count()
        if 2 * size < r:
            chosen.append(mask)
        elif r % 2 == 0 and 2 * size == r and mask & 1:
            chosen.append(mask)
    chosen.sort(key=lambda m: (m.bit_count(), _mask_elements(m)))
    fam = IndexFamily(r=r, sets=tuple(chosen))
    assert fam.size == (1 << (r - 1)) - 1
    return fam


# ---------------------------------------------------------------------------
# edge tuples


def edge_offsets(values, family: IndexFamily) -> tuple[int, ...]:
    """Per-coordinate XOR of the seed values; edge = x XOR each offset."""
    offs = []
    for positions in family.positions_by_coord():
        acc = 0
        for p in positions:
            acc ^= values[p]
        offs.append(acc)
    return tuple(offs)


def edge_tuple(x: int, values, family: IndexFamily) -> tuple[int, ...]:
    """The ordered r-tuple seeded by (x, values)."""
    return tuple(x ^ off for off in edge_offsets(values, family))


def seed_tuples(gens: GeneratorSet, family: IndexFamily | None = None):
    """All tuples of distinct generators indexed by the family, in
    permutation order of gens.elements."""
    fam = family or build_index_family(gens.r)
    return itertools.permutations(gens.elements, fam.size)


def all_seed_offsets(gens: GeneratorSet, family: IndexFamily) -> np.ndarray:
    """Per-coordinate XOR offsets of every seed tuple, as an
    (n falling |family|, r) uint64 array in permutation order."""
    perm = np.array(
        list(itertools.permutations(range(gens.size), family.size)), dtype=np.intp
    ).reshape(-1, family.size)
    values = np.array(gens.elements, dtype=np.uint64)[perm]
    out = np.zeros((perm.shape[0], family.r), dtype=np.uint64)
    for i, positions in enumerate(family.positions_by_coord()):
        for p in positions:
            out[:, i] ^= values[:, p]
    return out


def falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def seed_tuple_count(n: int, r: int) -> int:
    return falling(n, (1 << (r - 1)) - 1)


# ---------------------------------------------------------------------------
# degree formulas
#
# punctured_class_size(r, n, drop): with `drop` coordinates removed from the
# r-coordinate construction, the number of grouped seed pairs that agree
# everywhere except (possibly) one fixed position.  Every k-edge degree is a
# specialization.


def punctured_class_size(r: int, n: int, drop: int) -> int:
    if not 0 <= drop <= r - 2:
        raise ValueError("drop must be in 0..r-2")
    block = 1 << drop
    free = n - ((1 << (r - 1)) - 2 * block)
    pairs = (1 << (r - drop - 2)) - 1
    return math.comb(free, block) * math.comb(2 * block, block) ** pairs


def facet_degree(r: int, n: int) -> int:
    """Number of r-edges containing a given (r-1)-edge."""
    return punctured_class_size(r, n, 0)


def k_edge_degree(r: int, n: int, k: int) -> int:
    """Number of (k+1)-edges containing a given k-edge, 1 <= k <= r-1."""
    if not 1 <= k <= r - 1:
        raise ValueError("k must be in 1..r-1")
    return punctured_class_size(r, n, r - k - 1)


def hyperedge_count(t: int, n: int, r: int) -> int:
    return (1 << t) * seed_tuple_count(n, r) // math.factorial(r)


# ---------------------------------------------------------------------------
# hypergraph


@dataclass(frozen=True)
class Hypergraph:
    """Deduplicated r-uniform hypergraph on GF(2)^t.

    edges: (m, r) uint32 array; each row ascending, rows in lexicographic
    order.  Every canonical edge is produced by exactly r! ordered seeds.
    """

    r: int
    t: int
    generators: GeneratorSet
    family: IndexFamily
    edges: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])


def pack_rows(rows: np.ndarray, t: int) -> np.ndarray:
    """Pack rows of t-bit values into uint64 keys, first column most significant."""
    width = rows.shape[1]
    if width * t > 63:
        raise ResourceLimit(f"cannot pack {width} values of {t} bits into one word")
    out = np.zeros(rows.shape[0], dtype=np.uint64)
    for j in range(width):
        out = (out << np.uint64(t)) | rows[:, j].astype(np.uint64)
    return out


def unpack_rows(keys: np.ndarray, width: int, t: int) -> np.ndarray:
    out = np.empty((keys.shape[0], width), dtype=np.uint32)
    mask = np.uint64((1 << t) - 1)
    for j in range(width - 1, -1, -1):
        out[:, j] = (keys & mask).astype(np.uint32)
        keys = keys >> np.uint64(t)
    return out


def build_hypergraph(gens: GeneratorSet, *, budgets: Budgets = DEFAULT_BUDGETS) -> Hypergraph:
    """Enumerate all ordered edge seeds, canonicalize, dedup, and count.

    Requires a sum-distinct generator set; raises MultiplicityViolation if
    any canonical edge is not produced exactly r! times (which would signal
    a sum collision or a bug).
    """
    if not gens.cert.sum_distinct:
        raise ValueError("build_hypergraph needs a sum-distinct generator set")
    r, t = gens.r, gens.t
    family = build_index_family(r)
    total = (1 << t) * seed_tuple_count(gens.size, r)
    if total > budgets.max_tuples:
        raise ResourceLimit(f"{total} ordered seeds exceed budget {budgets.max_tuples}")
    if total == 0:
        return Hypergraph(r=r, t=t, generators=gens, family=family,
                          edges=np.empty((0, r), dtype=np.uint32))

    xs = np.arange(1 << t, dtype=np.uint64)
    offsets = all_seed_offsets(gens, family)
    packed = np.empty(total, dtype=np.uint64)
    chunk = max(1, (1 << 21) // (1 << t))
    pos = 0
    for lo in range(0, offsets.shape[0], chunk):
        offs = offsets[lo:lo + chunk]
        verts = (xs[None, :, None] ^ offs[:, None, :]).reshape(-1, r)
        verts.sort(axis=1)
        block = pack_rows(verts, t)
        packed[pos:pos + block.size] = block
        pos += block.size
    uniq, counts = np.unique(packed, return_counts=True)
    want = math.factorial(r)
    if not np.all(counts == want):
        bad = int(uniq[np.argmax(counts != want)])
        raise MultiplicityViolation(
            f"edge {bad:#x} produced {int(counts[np.argmax(counts != want)])} times, expected {want}"
        )
    edges = unpack_rows(uniq, r, t)
    return Hypergraph(r=r, t=t, generators=gens, family=family, edges=edges)


# ---------------------------------------------------------------------------
# coordinate transposition closure

def swap_first_two(x: int, values, family: IndexFamily):
    """An explicit seed (y, w) whose edge tuple equals that of (x, values)
    with coordinates 1 and 2 transposed.

    For odd r the relabelled seed w_I = values_{pi(I)} works directly; for
    even r the half-size sets containing 1 but not 2 swap with the
    complements of their images and x shifts by their total.
    """
    r = family.r
    idx = family.index_of()
    pi = lambda mask: (mask & ~3) | ((mask & 1) << 1) | ((mask >> 1) & 1)
    full = (1 << r) - 1
    out = [0] * family.size
    y = x
    for pos, mask in enumerate(family.sets):
        size = mask.bit_count()
        if 2 * size < r or (mask & 3) == 3:
            out[pos] = values[idx[pi(mask)]]
        else:
            # half-size, contains 1, misses 2
            out[pos] = values[idx[pi(mask ^ full)]]
            y ^= values[pos]
    return y, tuple(out)


# ---------------------------------------------------------------------------
# grouped seed tuples (coordinates as sums of disjoint generator blocks)


@dataclass(frozen=True)
class GroupedTuple:
    """Seed tuple over an (r-k)-coordinate family whose every coordinate is
    the sum of a block of 2**k generators, all blocks pairwise disjoint."""

    values: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...]


def grouped_tuple_count(n: int, r: int, k: int) -> int:
    block = 1 << k
    fam = (1 << (r - k - 1)) - 1
    if n < block * fam:
        return 0
    return falling(n, block * fam) // math.factorial(block) ** fam


def grouped_seed_tuples(gens: GeneratorSet, k: int, family: IndexFamily | None = None):
    """Yield every grouped tuple once (blocks unordered within a coordinate).

    k=0 reproduces the plain seed tuples with singleton witnesses.
    """
    r = gens.r
    if not 0 <= k <= r - 2:
        raise ValueError("k must be in 0..r-2")
    fam = family or build_index_family(r - k)
    block = 1 << k
    need = block * fam.size
    if need > gens.size:
        return
    elems = gens.elements

    def rec(slots, used, acc):
        if not slots:
            yield GroupedTuple(
                values=tuple(gf2_sum(w) for w in acc),
                witnesses=tuple(acc),
            )
            return
        pool = tuple(e for e in elems if e not in used)
        for combo in itertools.combinations(pool, block):
            yield from rec(slots - 1, used | set(combo), acc + [combo])

    yield from rec(fam.size, frozenset(), [])


# ---------------------------------------------------------------------------
# prefix projection between the r-coordinate and (r-k)-coordinate pictures


def projection_set_map(r: int, k: int) -> dict[int, int]:
    """Map each index set J of the r-family to the unique member of the
    (r-k)-family (or the empty set) among J intersect [r-k] and its
    complement in [r-k].

    With the empty set mapped to itself, every fiber has exactly 2**k sets.
    """
    fam_r = build_index_family(r)
    low = build_index_family(r - k) if r - k >= 2 else None
    low_sets = set(low.sets) if low else set()
    low_mask = (1 << (r - k)) - 1
    out = {0: 0}
    for mask in fam_r.sets:
        inter = mask & low_mask
        comp = low_mask & ~mask
        if inter == 0 or inter in low_sets:
            out[mask] = inter
        elif comp == 0 or comp in low_sets:
            out[mask] = comp
        else:  # cannot happen: exactly one of {inter, comp} is canonical
            raise AssertionError(f"no canonical image for {mask:b}")
    fibers: dict[int, int] = {}
    for img in out.values():
        fibers[img] = fibers.get(img, 0) + 1
    assert all(c == 1 << k for c in fibers.values())
    return out


def prefix_projection(x: int, values, r: int, k: int):
    """Map a full seed to its (r-k)-prefix and its grouped-tuple image.

    Returns (prefix, (y, grouped)) where prefix is the first r-k edge
    coordinates and the grouped tuple reproduces exactly those coordinates
    from base point y.
    """
    fam_r = build_index_family(r)
    fam_low = build_index_family(r - k)
    setmap = projection_set_map(r, k)
    low_mask = (1 << (r - k)) - 1

    prefix = edge_tuple(x, values, fam_r)[: r - k]

    grouped_vals = []
    grouped_wits = []
    for target in fam_low.sets:
        wit = tuple(values[p] for p, mask in enumerate(fam_r.sets) if setmap[mask] == target)
        grouped_wits.append(wit)
        grouped_vals.append(gf2_sum(wit))
    y = x
    for p, mask in enumerate(fam_r.sets):
        inter = mask & low_mask
        if inter != 0 and inter not in set(fam_low.sets):
            y ^= values[p]
    grouped = GroupedTuple(values=tuple(grouped_vals), witnesses=tuple(grouped_wits))
    assert edge_tuple(y, grouped.values, fam_low) == prefix
    return prefix, (y, grouped)


# ---------------------------------------------------------------------------
# edge-list files
#
# header "# H r=<r> t=<t> m=<edge-count>", then one edge per line: r hex
# vertices in ascending order, space-separated.


def write_edge_file(path, H: Hypergraph) -> None:
    with open(path, "w") as fh:
        fh.write(f"# H r={H.r} t={H.t} m={H.edge_count}\n")
        for row in H.edges:
            fh.write(" ".join(to_hex(int(v), H.t) for v in row) + "\n")


def read_edge_file(path) -> tuple[int, int, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().split()
        fields = dict(part.split("=") for part in header[2:])
        r, t, m = int(fields["r"]), int(fields["t"]), int(fields["m"])
        edges = np.empty((m, r), dtype=np.uint32)
        for i in range(m):
            edges[i] = [int(w, 16) for w in fh.readline().split()]
    return r, t, edges
