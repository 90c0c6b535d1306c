"""Graphs derived from the construction: Cayley, walk, dual, incidence,
and the auxiliary tuple graphs.

All graphs are regular multigraphs stored as symmetric CSR matrices with
integer multiplicities; irregularity at build time is a hard error, since
every graph this package produces is regular by theorem.  Vertex indices
follow ascending canonical keys (packed integer encodings), so matrices are
deterministic regardless of enumeration order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .budgets import DEFAULT_BUDGETS, Budgets
from .construction import (
    Hypergraph,
    all_seed_offsets,
    build_index_family,
    pack_rows,
    seed_tuple_count,
    to_hex,
)
from .errors import NonRegular, ResourceLimit
from .gf2 import GeneratorMultiset, GeneratorSet


@dataclass(frozen=True)
class SparseGraph:
    """Regular multigraph: symmetric int adjacency plus opaque vertex labels."""

    labels: object            # sequence of canonical vertex keys
    adj: sp.csr_matrix        # int64, loops stored on the diagonal
    degree: int

    @property
    def n(self) -> int:
        return self.adj.shape[0]


def _finalize(labels, adj: sp.csr_matrix) -> SparseGraph:
    adj = adj.tocsr()
    adj.sum_duplicates()
    adj.sort_indices()
    transposed = adj.T.tocsr()
    transposed.sort_indices()
    if not (
        np.array_equal(adj.indptr, transposed.indptr)
        and np.array_equal(adj.indices, transposed.indices)
        and np.array_equal(adj.data, transposed.data)
    ):
        raise NonRegular("adjacency matrix is not symmetric")
    # Loops sit on the diagonal and contribute their multiplicity once.
    degrees = np.asarray(adj.sum(axis=1)).ravel()
    if degrees.size and not np.all(degrees == degrees[0]):
        raise NonRegular(f"degrees range over {sorted(set(degrees.tolist()))[:4]}...")
    degree = int(degrees[0]) if degrees.size else 0
    return SparseGraph(labels=labels, adj=adj, degree=degree)


def graph_from_multiedges(labels, rows, cols, mults) -> SparseGraph:
    n = len(labels)
    adj = sp.coo_matrix((mults, (rows, cols)), shape=(n, n), dtype=np.int64)
    return _finalize(labels, adj.tocsr())


# ---------------------------------------------------------------------------
# Cayley graphs


def cayley_graph(gen: GeneratorMultiset, *, budgets: Budgets = DEFAULT_BUDGETS) -> SparseGraph:
    """Cay(GF(2)^t, gen): vertex x joins x ^ s with multiplicity m(s).

    A zero generator of multiplicity m puts m loops at every vertex, each
    counted once toward the degree.
    """
    if gen.t > budgets.walsh_cap:
        raise ResourceLimit(f"t={gen.t} above cap {budgets.walsh_cap}")
    n = 1 << gen.t
    if n > budgets.max_vertices:
        raise ResourceLimit(f"{n} vertices exceed budget")
    xs = np.arange(n, dtype=np.int64)
    rows, cols, mults = [], [], []
    for elem, mult in gen.entries:
        rows.append(xs)
        cols.append(xs ^ elem)
        mults.append(np.full(n, mult, dtype=np.int64))
    adj = sp.coo_matrix(
        (np.concatenate(mults), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n), dtype=np.int64,
    )
    return _finalize(xs, adj)


# ---------------------------------------------------------------------------
# k-edges and incidence


def k_edge_keys(H: Hypergraph, k: int) -> np.ndarray:
    """Sorted packed keys of all k-edges (k-subsets of r-edges)."""
    if not 1 <= k <= H.r:
        raise ValueError("k must be in 1..r")
    pieces = [
        pack_rows(H.edges[:, list(combo)], H.t)
        for combo in itertools.combinations(range(H.r), k)
    ]
    return np.unique(np.concatenate(pieces)) if pieces else np.empty(0, np.uint64)


@dataclass(frozen=True)
class IncidenceMatrix:
    """0/1 containment of k-edges (rows) in (k+1)-edges (columns)."""

    k: int
    row_keys: np.ndarray
    col_keys: np.ndarray
    mat: sp.csr_matrix

    @property
    def shape(self):
        return self.mat.shape


def incidence_matrix(H: Hypergraph, k: int, *, budgets: Budgets = DEFAULT_BUDGETS) -> IncidenceMatrix:
    if not 1 <= k <= H.r - 1:
        raise ValueError("k must be in 1..r-1")
    rows_keys = k_edge_keys(H, k)
    col_keys = k_edge_keys(H, k + 1)
    if rows_keys.size > budgets.max_vertices or col_keys.size > budgets.max_vertices:
        raise ResourceLimit("incidence matrix exceeds vertex budget")
    from .construction import unpack_rows

    cols_verts = unpack_rows(col_keys.copy(), k + 1, H.t)
    r_idx, c_idx = [], []
    for drop in range(k + 1):
        keep = [j for j in range(k + 1) if j != drop]
        sub = pack_rows(cols_verts[:, keep], H.t)
        idx = np.searchsorted(rows_keys, sub)
        assert np.array_equal(rows_keys[idx], sub), "k-subset missing from k-edges"
        r_idx.append(idx)
        c_idx.append(np.arange(col_keys.size))
    mat = sp.coo_matrix(
        (np.ones((k + 1) * col_keys.size, dtype=np.int64),
         (np.concatenate(r_idx), np.concatenate(c_idx))),
        shape=(rows_keys.size, col_keys.size),
    ).tocsr()
    # each column is a (k+1)-set: exactly k+1 distinct k-subsets
    assert mat.getnnz() == (k + 1) * col_keys.size
    return IncidenceMatrix(k=k, row_keys=rows_keys, col_keys=col_keys, mat=mat)


# ---------------------------------------------------------------------------
# walk graphs


def walk_graph(H: Hypergraph, k: int, *, budgets: Budgets = DEFAULT_BUDGETS) -> SparseGraph:
    """Order-k walk graph: vertices are k-edges, multiplicity between two
    k-edges is the number of (k+1)-edges containing both; no loops.

    Two distinct k-edges lie in a common (k+1)-edge only when their union is
    one, so the multiplicities here are 0/1.
    """
    if not 1 <= k <= H.r - 1:
        raise ValueError("k must be in 1..r-1")
    keys = k_edge_keys(H, k)
    if keys.size > budgets.max_vertices:
        raise ResourceLimit(f"{keys.size} k-edges exceed vertex budget")
    up_keys = k_edge_keys(H, k + 1)
    from .construction import unpack_rows

    ups = unpack_rows(up_keys.copy(), k + 1, H.t)
    rows, cols = [], []
    members = []
    for drop in range(k + 1):
        keep = [j for j in range(k + 1) if j != drop]
        idx = np.searchsorted(keys, pack_rows(ups[:, keep], H.t))
        members.append(idx)
    for a in range(k + 1):
        for b in range(a + 1, k + 1):
            rows.extend((members[a], members[b]))
            cols.extend((members[b], members[a]))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    adj = sp.coo_matrix(
        (np.ones(rows.size, dtype=np.int64), (rows, cols)),
        shape=(keys.size, keys.size),
    )
    return _finalize(keys, adj)


def dual_edge_graph(H: Hypergraph, k: int, *, budgets: Budgets = DEFAULT_BUDGETS) -> SparseGraph:
    """Graph on (k+1)-edges, adjacent when they share a common k-edge.

    Distinct (k+1)-sets share at most one k-subset, so this graph is simple.
    """
    if not 1 <= k <= H.r - 1:
        raise ValueError("k must be in 1..r-1")
    inc = incidence_matrix(H, k, budgets=budgets)
    gram = (inc.mat.T @ inc.mat).tocsr()
    gram = gram - sp.diags(gram.diagonal(), dtype=np.int64)
    if gram.data.size and gram.data.max() > 1:
        raise NonRegular("dual edge graph acquired parallel edges")
    return _finalize(inc.col_keys, gram.astype(np.int64))


# ---------------------------------------------------------------------------
# auxiliary tuple graphs


def _prefix_vertex_keys(gens: GeneratorSet, k: int, budgets: Budgets) -> np.ndarray:
    """Distinct packed (r-k)-prefixes of all ordered edge seeds."""
    r, t = gens.r, gens.t
    fam = build_index_family(r)
    total = (1 << t) * seed_tuple_count(gens.size, r)
    if total > budgets.max_tuples:
        raise ResourceLimit(f"{total} seeds exceed budget {budgets.max_tuples}")
    width = r - k
    if width * t > 63:
        raise ResourceLimit("prefix keys exceed one machine word")
    xs = np.arange(1 << t, dtype=np.uint64)
    offsets = all_seed_offsets(gens, fam)[:, :width]
    if offsets.size == 0:
        return np.empty(0, dtype=np.uint64)
    keys = pack_rows((xs[None, :, None] ^ offsets[:, None, :]).reshape(-1, width), t)
    return np.unique(keys)


def tuple_graph_from_keys(keys: np.ndarray, width: int, t: int) -> SparseGraph:
    """Graph on packed ordered tuples, adjacent when the tuples differ in
    exactly one coordinate.

    Tuples sharing all coordinates but position j form a clique; cliques are
    found by grouping on the punctured tuple.
    """
    from .construction import unpack_rows

    verts = unpack_rows(keys.copy(), width, t)
    rows, cols = [], []
    for drop in range(width):
        keep = [j for j in range(width) if j != drop]
        punct = pack_rows(verts[:, keep], t) if keep else np.zeros(keys.size, dtype=np.uint64)
        order = np.argsort(punct, kind="stable")
        srt = punct[order]
        starts = np.flatnonzero(np.r_[True, srt[1:] != srt[:-1]])
        lengths = np.diff(np.r_[starts, srt.size])
        for size in np.unique(lengths):
            if size < 2:
                continue
            heads = starts[lengths == size]
            block = order[heads[:, None] + np.arange(size)[None, :]]
            a, b = np.triu_indices(size, k=1)
            u = block[:, a].ravel()
            v = block[:, b].ravel()
            rows.extend((u, v))
            cols.extend((v, u))
    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
    else:
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
    adj = sp.coo_matrix(
        (np.ones(rows.size, dtype=np.int64), (rows, cols)),
        shape=(keys.size, keys.size),
    )
    return _finalize(keys, adj)


def auxiliary_graph(gens: GeneratorSet, k: int = 0, *, budgets: Budgets = DEFAULT_BUDGETS) -> SparseGraph:
    """The tuple graph on distinct (r-k)-prefixes of ordered edge seeds,
    adjacent when the prefixes differ in exactly one coordinate.

    k=0 is the graph on all full edge tuples (equivalently on the seeds
    themselves, which biject with the tuples for sum-distinct sets).
    """
    r = gens.r
    if not 0 <= k <= r - 2:
        raise ValueError("k must be in 0..r-2")
    keys = _prefix_vertex_keys(gens, k, budgets)
    if keys.size > budgets.max_vertices:
        raise ResourceLimit(f"{keys.size} vertices exceed budget")
    return tuple_graph_from_keys(keys, r - k, gens.t)


# ---------------------------------------------------------------------------
# graph files
#
# header "# G n=<n> d=<degree>"; one line "u v m" per unordered edge with
# u < v; vertex indices refer to the companion ".labels" file (one canonical
# key per line).  Loops are not representable and are rejected.


def write_graph_file(path, G: SparseGraph, t: int | None = None) -> None:
    coo = sp.triu(G.adj, k=1).tocoo()
    if G.adj.diagonal().any():
        raise ValueError("graph files cannot hold loops")
    with open(path, "w") as fh:
        fh.write(f"# G n={G.n} d={G.degree}\n")
        for u, v, m in zip(coo.row, coo.col, coo.data):
            fh.write(f"{u} {v} {m}\n")
    with open(f"{path}.labels", "w") as fh:
        for label in np.asarray(G.labels).tolist():
            fh.write((to_hex(int(label), t) if t else str(int(label))) + "\n")
