"""Eigenvalue computation and expansion certificates.

lambda(G) is the maximum absolute value of a nontrivial adjacency
eigenvalue; a d-regular graph is an epsilon-expander when
lambda <= (1 - epsilon) d.  Exactly one copy of the trivial eigenvalue d is
removed, so a disconnected (or bipartite) graph correctly reports
epsilon = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .budgets import DEFAULT_BUDGETS, Budgets
from .errors import NonRegular, ResourceLimit
from .gf2 import GeneratorSet, GeneratorMultiset, cayley_spectrum_exact, with_epsilon
from .graphs import SparseGraph, incidence_matrix, walk_graph, dual_edge_graph
from .construction import Hypergraph, k_edge_degree


@dataclass(frozen=True)
class SpectralReport:
    n: int
    degree: int
    lam: float               # max |nontrivial eigenvalue|
    epsilon: float           # 1 - lam/degree
    method: str              # exact-walsh | dense | iterative
    tolerance: float
    iterations: int
    converged: bool = True

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "lambda": self.lam,
            "epsilon": self.epsilon,
            "method": self.method,
            "tolerance": self.tolerance,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _lambda_from_spectrum(eigs: np.ndarray, degree: int) -> float:
    """Drop one copy of the trivial eigenvalue (the largest, which equals the
    degree for a regular graph) and return max |remaining|, clamped into
    [0, degree] against eigensolver rounding."""
    eigs = np.sort(eigs)
    if eigs.size <= 1:
        return 0.0
    lam = float(np.max(np.abs(eigs[:-1])))
    assert lam <= degree * (1 + 1e-9), "nontrivial eigenvalue above the degree"
    return min(lam, float(degree))


def lambda_max_nontrivial(
    G: SparseGraph,
    mode: str = "auto",
    *,
    tol: float = 1e-6,
    restarts: int = 3,
    seed: int = 0,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> SpectralReport:
    """Spectral report for a regular graph.

    dense: full symmetric eigendecomposition (n within the dense cap).
    iterative: power iteration on A - (d/n) J, which zeroes the all-ones
    direction and leaves every other eigenpair intact; three seeded restarts
    guard against starts orthogonal to the top eigenspace.
    """
    n, d = G.n, G.degree
    degrees = np.asarray(G.adj.sum(axis=1)).ravel()
    if degrees.size and not np.all(degrees == d):
        raise NonRegular("graph is not regular")
    if mode == "auto":
        mode = "dense" if n <= budgets.dense_cap else "iterative"
    if mode == "dense":
        if n > budgets.dense_cap:
            raise ResourceLimit(f"n={n} above dense cap {budgets.dense_cap}")
        eigs = np.linalg.eigvalsh(G.adj.toarray().astype(np.float64))
        lam = _lambda_from_spectrum(eigs, d)
        return SpectralReport(n=n, degree=d, lam=lam, epsilon=1.0 - lam / d,
                              method="dense", tolerance=0.0, iterations=0)

    adj = G.adj.astype(np.float64)
    shift = d / n
    rng = np.random.default_rng(seed)
    best = 0.0
    iterations = 0
    converged = False
    max_iter = 10 * n
    for _ in range(restarts):
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        est = 0.0
        ok = False
        for it in range(max_iter):
            w = adj @ v - shift * v.sum()
            norm = np.linalg.norm(w)
            iterations += 1
            if norm == 0.0:
                est, ok = 0.0, True
                break
            new_est = norm  # Rayleigh-style |A| estimate, robust to sign flips
            v = w / norm
            if it % 8 == 7:
                if abs(new_est - est) <= tol * max(new_est, 1e-30):
                    est, ok = new_est, True
                    break
            est = new_est
        best = max(best, est)
        converged = converged or ok
    best = min(float(best), float(d))
    return SpectralReport(n=n, degree=d, lam=best, epsilon=1.0 - best / d,
                          method="iterative", tolerance=tol, iterations=iterations,
                          converged=converged)


def exact_epsilon(gens: GeneratorSet, *, budgets: Budgets = DEFAULT_BUDGETS) -> tuple[int, int]:
    """(lambda, degree) of Cay(GF(2)^t, S) as exact integers via Walsh."""
    gen = GeneratorMultiset.from_elements(gens.t, gens.elements)
    spec = cayley_spectrum_exact(gen, budgets=budgets)
    d = int(spec[0])
    lam = int(np.max(np.abs(spec[1:]))) if spec.size > 1 else 0
    return lam, d


def certify_epsilon(gens: GeneratorSet, *, budgets: Budgets = DEFAULT_BUDGETS) -> GeneratorSet:
    """Fill cert.epsilon with the exact expansion of Cay(GF(2)^t, S)."""
    lam, d = exact_epsilon(gens, budgets=budgets)
    return with_epsilon(gens, 1.0 - lam / d)


def dual_spectra_check(H: Hypergraph, k: int, *, tol: float = 1e-7,
                       budgets: Budgets = DEFAULT_BUDGETS) -> dict:
    """Spectral consistency of the two incidence Gram products.

    Checks that the nonzero spectra of B B^T and B^T B agree as multisets,
    and that the nontrivial eigenvalues of the order-k walk graph lie in
    [-D_k, lambda'(G') + (k+1) - D_k] with lambda' the computed max
    nontrivial eigenvalue of the dual edge graph.
    """
    inc = incidence_matrix(H, k, budgets=budgets)
    nrow, ncol = inc.shape
    if max(nrow, ncol) > budgets.dense_cap:
        raise ResourceLimit("dual spectra need dense eigensolves within cap")
    B = inc.mat.toarray().astype(np.float64)
    gram_up = B @ B.T
    gram_down = B.T @ B
    eig_up = np.linalg.eigvalsh(gram_up)
    eig_down = np.linalg.eigvalsh(gram_down)
    scale = max(1.0, float(max(eig_up.max(initial=0.0), eig_down.max(initial=0.0))))
    nz_up = np.sort(eig_up[np.abs(eig_up) > tol * scale])
    nz_down = np.sort(eig_down[np.abs(eig_down) > tol * scale])
    multiset_ok = nz_up.size == nz_down.size and bool(
        np.allclose(nz_up, nz_down, atol=tol * scale, rtol=0)
    )

    D_k = k_edge_degree(H.r, H.generators.size, k)
    walk = walk_graph(H, k, budgets=budgets)
    dual = dual_edge_graph(H, k, budgets=budgets)
    lam_dual = lambda_max_nontrivial(dual, "dense", budgets=budgets).lam
    walk_eigs = np.sort(np.linalg.eigvalsh(walk.adj.toarray().astype(np.float64)))
    nontrivial = walk_eigs[:-1]
    lo, hi = -D_k, lam_dual + (k + 1) - D_k
    interval_ok = bool(
        nontrivial.size == 0
        or (nontrivial.min() >= lo - tol * scale and nontrivial.max() <= hi + tol * scale)
    )
    return {
        "k": k,
        "D_k": D_k,
        "nonzero_spectra_match": multiset_ok,
        "interval": [lo, hi],
        "walk_nontrivial_range": [float(nontrivial.min()), float(nontrivial.max())]
        if nontrivial.size else None,
        "interval_ok": interval_ok,
        "pass": multiset_ok and interval_ok,
    }
