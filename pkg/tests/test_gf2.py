import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from expander_forge import (
    CertificationExhausted,
    GeneratorMultiset,
    GeneratorSet,
    Certification,
    ResourceLimit,
    cayley_spectrum_exact,
    check_sum_distinctness,
    gf2_add,
    read_generator_file,
    sample_generators,
    sumset,
    walsh_hadamard_transform,
    write_generator_file,
)
from expander_forge.gf2 import format_generator_file
from expander_forge.rng import SplitMix64


def test_add_examples():
    assert gf2_add(0b0011, 0b0101) == 0b0110
    assert gf2_add(0b1011, 0) == 0b1011
    assert gf2_add(0b1011, 0b1011) == 0


@given(st.integers(0, 2**62 - 1), st.integers(0, 2**62 - 1), st.integers(0, 2**62 - 1))
def test_add_group_laws(a, b, c):
    assert gf2_add(a, b) == gf2_add(b, a)
    assert gf2_add(gf2_add(a, b), c) == gf2_add(a, gf2_add(b, c))
    assert gf2_add(a, a) == 0


# ---------------------------------------------------------------------------
# sampling


def test_sample_reproducible():
    a = sample_generators(t=24, size=12, r=3, seed=1)
    b = sample_generators(t=24, size=12, r=3, seed=1)
    assert a.elements == b.elements
    assert a.cert.sum_distinct
    assert sample_generators(t=24, size=12, r=3, seed=2).elements != a.elements


def test_sample_distinct_nonzero():
    gens = sample_generators(t=24, size=12, r=3, seed=1)
    assert len(set(gens.elements)) == 12
    assert all(0 < e < 2**24 for e in gens.elements)
    ok, witness = check_sum_distinctness(gens.elements, 3)
    assert ok and witness is None


def test_sample_impossible_size():
    with pytest.raises(CertificationExhausted):
        sample_generators(t=3, size=8, r=3, seed=1)


def test_sample_size_below_family():
    with pytest.raises(ValueError):
        sample_generators(t=24, size=2, r=3, seed=1)


def test_sample_exhausts_on_tiny_dimension():
    # 7 nonzero words of 3 bits always carry a small linear relation
    with pytest.raises(CertificationExhausted):
        sample_generators(t=3, size=7, r=3, seed=1, max_resamples=50)


# ---------------------------------------------------------------------------
# subset-sum distinctness


def test_distinctness_witness_example():
    elements = (0b0001, 0b0010, 0b0100, 0b1000, 0b1111)
    ok, witness = check_sum_distinctness(elements, 3)
    assert not ok
    left, right = witness
    assert set(left) != set(right)
    acc = 0
    for e in left:
        acc ^= e
    for e in right:
        acc ^= e
    assert acc == 0


def test_distinctness_tiny_true():
    ok, witness = check_sum_distinctness((0b001, 0b010), 3)
    assert ok and witness is None


def _oracle_sum_distinct(elements, r):
    """Plain itertools hash-set enumeration of all small subset sums."""
    level_cap = min(2**r, len(elements))
    seen = {}
    for l in range(level_cap + 1):
        for combo in itertools.combinations(elements, l):
            acc = 0
            for e in combo:
                acc ^= e
            if acc in seen and set(seen[acc]) != set(combo):
                return False
            seen[acc] = combo
    return True


@pytest.mark.parametrize("seed", range(6))
def test_distinctness_matches_oracle(seed):
    rng = SplitMix64(seed)
    elements = tuple({1 + rng.next_below(2**8 - 1) for _ in range(7)})
    ok, witness = check_sum_distinctness(elements, 3)
    assert ok == _oracle_sum_distinct(elements, 3)
    if not ok:
        left, right = witness
        acc = 0
        for e in left + right:
            acc ^= e
        assert acc == 0


def test_distinctness_budget():
    gens = sample_generators(t=24, size=12, r=3, seed=1)
    with pytest.raises(ResourceLimit):
        check_sum_distinctness(gens.elements, 3, budget=10)


# ---------------------------------------------------------------------------
# sumsets


def test_sumset_identity_levels(gens_r3_t8):
    one = sumset(gens_r3_t8, 1)
    assert {e for e, _ in one.entries} == set(gens_r3_t8.elements)
    two = sumset(gens_r3_t8, 2)
    assert len(two.entries) == 15  # C(6,2), all pair sums distinct
    assert all(m == 1 for _, m in two.entries)
    assert all(e != 0 for e, _ in two.entries)


def test_sumset_single_triple():
    cert = Certification(size_threshold=False, sum_distinct=True)
    gens = GeneratorSet(t=3, r=3, elements=(0b001, 0b010, 0b100), cert=cert)
    out = sumset(gens, 3)
    assert out.entries == ((0b111, 1),)


def test_sumset_full_size_invariant(gens_r3_t8):
    n = gens_r3_t8.size
    import math

    for l in range(1, min(2**3, n) + 1):
        out = sumset(gens_r3_t8, l)
        assert len(out.entries) == math.comb(n, l)
        assert all(e != 0 for e, _ in out.entries)


# ---------------------------------------------------------------------------
# exact spectra


def test_spectrum_four_cycle():
    gen = GeneratorMultiset.from_elements(2, [0b01, 0b10])
    assert sorted(cayley_spectrum_exact(gen).tolist()) == [-2, 0, 0, 2]


def test_spectrum_complete_graph():
    t = 4
    gen = GeneratorMultiset.from_elements(t, range(1, 2**t))
    spec = sorted(cayley_spectrum_exact(gen).tolist())
    assert spec == [-1] * (2**t - 1) + [2**t - 1]


def test_spectrum_degree_at_zero():
    gen = GeneratorMultiset.from_counts(3, {1: 2, 6: 5})
    spec = cayley_spectrum_exact(gen)
    assert spec[0] == 7


def test_spectrum_matches_dense_oracle():
    gens = sample_generators(t=10, size=8, r=3, seed=5)
    gen = GeneratorMultiset.from_elements(10, gens.elements)
    exact = np.sort(cayley_spectrum_exact(gen))
    n = 1 << 10
    dense = np.zeros((n, n))
    for e in gens.elements:
        dense[np.arange(n), np.arange(n) ^ e] += 1
    eigs = np.sort(np.linalg.eigvalsh(dense))
    assert np.abs(exact - eigs).max() < 1e-9


def test_spectrum_with_loops_matches_dense():
    gen = GeneratorMultiset.from_counts(4, {0: 3, 5: 1, 9: 2}, allow_zero=True)
    n = 16
    dense = np.zeros((n, n))
    for e, m in gen.entries:
        dense[np.arange(n), np.arange(n) ^ e] += m
    exact = np.sort(cayley_spectrum_exact(gen))
    assert np.abs(exact - np.sort(np.linalg.eigvalsh(dense))).max() < 1e-9


@given(st.lists(st.integers(-50, 50), min_size=8, max_size=8))
def test_walsh_is_an_involution_up_to_scale(values):
    vec = np.array(values, dtype=np.int64)
    twice = walsh_hadamard_transform(walsh_hadamard_transform(vec))
    assert np.array_equal(twice, 8 * vec)


def test_walsh_cap():
    gen = GeneratorMultiset.from_elements(30, [1])
    with pytest.raises(ResourceLimit):
        cayley_spectrum_exact(gen)


# ---------------------------------------------------------------------------
# files


def test_generator_file_roundtrip(tmp_path, gens_r3_t8):
    path = tmp_path / "gens.txt"
    write_generator_file(path, gens_r3_t8)
    text = path.read_text().splitlines()
    assert text[0] == "t=8 r=3 n=6"
    assert all(len(line) == 2 and line == line.lower() for line in text[1:])
    back = read_generator_file(path)
    assert back.elements == gens_r3_t8.elements
    assert back.t == 8 and back.r == 3


def test_digest_tracks_content(gens_r3_t8, gens_r3_t6_s5):
    assert gens_r3_t8.digest() != gens_r3_t6_s5.digest()
    assert gens_r3_t8.digest() == gens_r3_t8.digest()
    assert format_generator_file(gens_r3_t8).endswith("\n")


def test_zero_generator_needs_flag():
    with pytest.raises(ValueError):
        GeneratorMultiset.from_elements(3, [0, 1])
    gen = GeneratorMultiset.from_elements(3, [0, 1], allow_zero=True)
    assert gen.degree == 2
