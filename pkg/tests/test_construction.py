import itertools
import math

import numpy as np
import pytest

from expander_forge import (
    Certification,
    GeneratorSet,
    build_hypergraph,
    build_index_family,
    edge_tuple,
    facet_degree,
    grouped_seed_tuples,
    hyperedge_count,
    k_edge_degree,
    prefix_projection,
    punctured_class_size,
    seed_tuples,
    swap_first_two,
)
from expander_forge.construction import (
    all_seed_offsets,
    edge_offsets,
    falling,
    grouped_tuple_count,
    projection_set_map,
    read_edge_file,
    seed_tuple_count,
    write_edge_file,
)


def _masks_to_sets(fam):
    return [frozenset(i + 1 for i in range(fam.r) if m >> i & 1) for m in fam.sets]


def test_family_r3():
    fam = build_index_family(3)
    assert _masks_to_sets(fam) == [{1}, {2}, {3}]


def test_family_r4():
    fam = build_index_family(4)
    assert _masks_to_sets(fam) == [{1}, {2}, {3}, {4}, {1, 2}, {1, 3}, {1, 4}]


def test_family_r5():
    fam = build_index_family(5)
    sets = _masks_to_sets(fam)
    assert len(sets) == 15
    assert sets[:5] == [{1}, {2}, {3}, {4}, {5}]
    assert all(len(s) == 2 for s in sets[5:])


@pytest.mark.parametrize("r", range(3, 9))
def test_family_properties_exhaustive(r):
    fam = build_index_family(r)
    assert fam.size == 2 ** (r - 1) - 1
    members = set(fam.sets) | {0}
    full = (1 << r) - 1
    # downward closed
    for mask in members:
        for i in range(r):
            if mask >> i & 1:
                assert (mask & ~(1 << i)) in members
    # exactly one of each complementary pair
    for mask in range(1 << r):
        assert (mask in members) != ((full ^ mask) in members)


def test_edge_tuple_r4_display():
    fam = build_index_family(4)
    s1, s2, s3, s4, s12, s13, s14 = 1, 2, 4, 8, 16, 32, 64
    x = 1 << 10
    out = edge_tuple(x, (s1, s2, s3, s4, s12, s13, s14), fam)
    assert out == (
        x ^ s1 ^ s12 ^ s13 ^ s14,
        x ^ s2 ^ s12,
        x ^ s3 ^ s13,
        x ^ s4 ^ s14,
    )


def test_edge_tuple_r3():
    fam = build_index_family(3)
    assert edge_tuple(9, (1, 2, 4), fam) == (9 ^ 1, 9 ^ 2, 9 ^ 4)


def test_edge_tuple_collapsed_values():
    fam = build_index_family(3)
    assert edge_tuple(5, (3, 3, 3), fam) == (6, 6, 6)


# ---------------------------------------------------------------------------
# hypergraph


def test_hypergraph_edge_count(H_r3_t6_s5):
    assert H_r3_t6_s5.edge_count == 640 == hyperedge_count(6, 5, 3)


def test_hypergraph_multiplicity_recount():
    gens = GeneratorSet(
        t=4, r=3, elements=(1, 2, 4), cert=Certification(False, True)
    )
    H = build_hypergraph(gens)
    counts = {}
    fam = H.family
    for x in range(16):
        for values in seed_tuples(gens, fam):
            key = tuple(sorted(edge_tuple(x, values, fam)))
            counts[key] = counts.get(key, 0) + 1
    assert set(counts.values()) == {6}
    assert len(counts) == H.edge_count == 16 * 6 // 6


def test_hypergraph_empty_when_too_few_generators():
    gens = GeneratorSet(t=4, r=3, elements=(1, 2), cert=Certification(False, True))
    H = build_hypergraph(gens)
    assert H.edge_count == 0


def test_hypergraph_rows_sorted(H_r3_t6_s5):
    edges = H_r3_t6_s5.edges
    assert np.all(edges[:, :-1] < edges[:, 1:])
    keys = edges.astype(np.uint64)
    packed = np.zeros(len(keys), dtype=np.uint64)
    for j in range(3):
        packed = (packed << np.uint64(6)) | keys[:, j]
    assert np.all(packed[:-1] < packed[1:])


def test_all_seed_offsets_matches_scalar(gens_r3_t6_s5):
    fam = build_index_family(3)
    arr = all_seed_offsets(gens_r3_t6_s5, fam)
    for row, values in zip(arr, seed_tuples(gens_r3_t6_s5, fam)):
        assert tuple(int(v) for v in row) == edge_offsets(values, fam)


def test_edge_file_roundtrip(tmp_path, H_r3_t6_s5):
    path = tmp_path / "edges.txt"
    write_edge_file(path, H_r3_t6_s5)
    first = path.read_text().splitlines()[0]
    assert first == f"# H r=3 t=6 m={H_r3_t6_s5.edge_count}"
    r, t, edges = read_edge_file(path)
    assert (r, t) == (3, 6)
    assert np.array_equal(edges, H_r3_t6_s5.edges)


# ---------------------------------------------------------------------------
# coordinate transposition


@pytest.mark.parametrize("r,t,size,seed", [(3, 6, 5, 3), (4, 7, 7, 11)])
def test_swap_first_two_closure(r, t, size, seed):
    from expander_forge import sample_generators

    gens = sample_generators(t=t, size=size, r=r, seed=seed)
    fam = build_index_family(r)
    x = 5
    for values in itertools.islice(seed_tuples(gens, fam), 200):
        y, w = swap_first_two(x, values, fam)
        assert len(set(w)) == fam.size and set(w) <= set(gens.elements)
        orig = edge_tuple(x, values, fam)
        swapped = edge_tuple(y, w, fam)
        assert swapped == (orig[1], orig[0]) + orig[2:]


# ---------------------------------------------------------------------------
# degree formulas


def test_degree_formulas():
    assert facet_degree(3, 5) == 6
    assert facet_degree(3, 6) == 8
    assert facet_degree(4, 8) == 16
    assert k_edge_degree(3, 5, 2) == 6
    assert k_edge_degree(3, 5, 1) == math.comb(5, 2)
    assert k_edge_degree(4, 8, 3) == 16
    # grouped class sizes: drop coordinates, blocks double
    assert punctured_class_size(3, 6, 1) == math.comb(6, 2)
    assert punctured_class_size(4, 10, 1) == math.comb(6, 2) * 6 == 90
    assert punctured_class_size(4, 8, 1) == math.comb(4, 2) * 6 == 36


# ---------------------------------------------------------------------------
# grouped tuples


def test_grouped_tuples_k0_are_seed_tuples(gens_r3_t6_s4):
    fam = build_index_family(3)
    grouped = list(grouped_seed_tuples(gens_r3_t6_s4, 0))
    plain = set(seed_tuples(gens_r3_t6_s4, fam))
    assert {g.values for g in grouped} == plain
    assert all(all(len(w) == 1 for w in g.witnesses) for g in grouped)


def _oracle_grouped_count(elements, slots, block):
    """Brute force: all slot-indexed tuples of pairwise-disjoint blocks."""
    combos = list(itertools.combinations(elements, block))
    total = 0
    for choice in itertools.product(combos, repeat=slots):
        flat = [e for blk in choice for e in blk]
        if len(set(flat)) == slots * block:
            total += 1
    return total


def test_grouped_tuple_count_r3_k1():
    from expander_forge import sample_generators

    gens = sample_generators(t=24, size=6, r=3, seed=1)
    grouped = list(grouped_seed_tuples(gens, 1))
    want = grouped_tuple_count(6, 3, 1)
    assert want == falling(6, 2) // 2 == 15
    assert len(grouped) == want
    # values are the block sums and all distinct under sum-distinctness
    assert len({g.values for g in grouped}) == want


def test_grouped_tuple_count_matches_oracle():
    from expander_forge import sample_generators

    gens = sample_generators(t=24, size=8, r=4, seed=2)
    got = len(list(grouped_seed_tuples(gens, 1)))
    assert got == grouped_tuple_count(8, 4, 1)
    oracle = _oracle_grouped_count(list(gens.elements), 3, 2)
    assert got == oracle


def test_grouped_tuples_empty_when_too_small(gens_r3_t6_s4):
    # r=4 needs 2 * 3 = 6 generators for k=1
    gens = GeneratorSet(t=6, r=4, elements=gens_r3_t6_s4.elements,
                        cert=gens_r3_t6_s4.cert)
    assert list(grouped_seed_tuples(gens, 1)) == []


# ---------------------------------------------------------------------------
# prefix projection


def test_projection_identity_k0(gens_r3_t6_s5):
    fam = build_index_family(3)
    values = gens_r3_t6_s5.elements[:3]
    prefix, (y, grouped) = prefix_projection(9, values, 3, 0)
    assert prefix == edge_tuple(9, values, fam)
    assert y == 9
    assert grouped.values == values


def test_projection_fibers_r4_k1():
    setmap = projection_set_map(4, 1)
    fam_low = build_index_family(3)
    for target in fam_low.sets:
        assert sum(1 for img in setmap.values() if img == target) == 2
    # the empty set's fiber is filled by the bookkeeping entry for 0
    assert sum(1 for img in setmap.values() if img == 0) == 2


@pytest.mark.parametrize("k", [1, 2])
def test_projection_prefix_postcondition(gens_r4_t7_s7, k):
    fam = build_index_family(4)
    fam_low = build_index_family(4 - k)
    for values in itertools.islice(seed_tuples(gens_r4_t7_s7, fam), 50):
        prefix, (y, grouped) = prefix_projection(33, values, 4, k)
        assert prefix == edge_tuple(33, values, fam)[: 4 - k]
        assert edge_tuple(y, grouped.values, fam_low) == prefix
        flat = [w for block in grouped.witnesses for w in block]
        assert len(flat) == len(set(flat)) == (1 << k) * fam_low.size


def test_family_rejects_r1():
    with pytest.raises(ValueError):
        build_index_family(1)
