"""Batch front end: sample, certify, build, measure, verify, report.

Every subcommand emits a JSON run report (schema 1) on stdout or to --out.
Reports are byte-identical for identical config and seed, except for the
"timings" object, which holds wall-clock figures and the thread count and
is excluded from reproducibility comparisons.  Exit status is 0 iff every
executed check passed (skipped checks carry a reason and do not fail the
run).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import replace

import numpy as np

from .budgets import DEFAULT_BUDGETS
from . import construction, discrepancy, graphs, lemmas, mixing, spectral
from .errors import ExpanderForgeError
from .gf2 import (
    GeneratorMultiset,
    check_sum_distinctness,
    read_generator_file,
    sample_generators,
    sumset,
    to_hex,
    write_generator_file,
)
from .rng import SplitMix64

SCHEMA = 1


def _check(name, ok, instance=None, witness=None, skipped=None, **extra):
    rec = {"name": name}
    if skipped is not None:
        rec["status"] = "skipped"
        rec["reason"] = skipped
    else:
        rec["status"] = "pass" if ok else "fail"
    if instance is not None:
        rec["instance"] = instance
    if witness is not None:
        rec["witness"] = witness
    rec.update(extra)
    return rec


def _budgets(cfg):
    b = DEFAULT_BUDGETS
    if cfg.get("budget_tuples"):
        b = replace(b, max_tuples=cfg["budget_tuples"])
    if cfg.get("budget_vertices"):
        b = replace(b, max_vertices=cfg["budget_vertices"])
    return b.with_override()


def _generators(cfg, budgets):
    if cfg.get("infile"):
        gens = read_generator_file(cfg["infile"])
        ok, witness = check_sum_distinctness(gens.elements, gens.r, budgets=budgets)
        gens = replace(gens, cert=replace(gens.cert, sum_distinct=ok))
        return gens, witness
    gens = sample_generators(cfg["t"], cfg["s_size"], cfg["r"], cfg["seed"], budgets=budgets)
    return gens, None


def _gen_summary(gens):
    return {
        "t": gens.t,
        "r": gens.r,
        "size": gens.size,
        "digest": gens.digest(),
        "cert": {
            "size_threshold": gens.cert.size_threshold,
            "sum_distinct": gens.cert.sum_distinct,
            "epsilon": gens.cert.epsilon,
        },
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_sample(cfg, budgets, report):
    gens, _ = _generators(cfg, budgets)
    if cfg.get("out"):
        write_generator_file(cfg["out"], gens)
    report["generators"] = _gen_summary(gens)
    report["checks"].append(_check("sample.sum_distinct", gens.cert.sum_distinct))
    return report


def _cmd_certify(cfg, budgets, report):
    gens, witness = _generators(cfg, budgets)
    report["checks"].append(
        _check(
            "certify.sum_distinct",
            gens.cert.sum_distinct,
            witness=[[to_hex(e, gens.t) for e in side] for side in witness] if witness else None,
        )
    )
    if gens.cert.sum_distinct:
        gens = spectral.certify_epsilon(gens, budgets=budgets)
    report["generators"] = _gen_summary(gens)
    report["certification"] = report["generators"]["cert"]
    return report


def _build(cfg, budgets):
    gens, _ = _generators(cfg, budgets)
    gens = spectral.certify_epsilon(gens, budgets=budgets)
    H = construction.build_hypergraph(gens, budgets=budgets)
    return gens, H


def _cmd_build(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    expected = construction.hyperedge_count(gens.t, gens.size, gens.r)
    if cfg.get("out"):
        construction.write_edge_file(cfg["out"], H)
    report["generators"] = _gen_summary(gens)
    report["checks"].append(
        _check("build.edge_count", H.edge_count == expected,
               instance={"edges": H.edge_count, "expected": expected})
    )
    return report


def _cmd_walkgraph(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    k = cfg.get("k") or H.r - 1
    G = graphs.walk_graph(H, k, budgets=budgets)
    expected = k * construction.k_edge_degree(H.r, gens.size, k)
    if cfg.get("out"):
        graphs.write_graph_file(cfg["out"], G)
    report["generators"] = _gen_summary(gens)
    report["checks"].append(
        _check("walkgraph.regular_degree", G.degree == expected,
               instance={"k": k, "n": G.n, "degree": G.degree, "expected": expected})
    )
    return report


def _cmd_spectrum(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    k = cfg.get("k") or H.r - 1
    G = graphs.walk_graph(H, k, budgets=budgets)
    mode = "dense" if G.n <= budgets.dense_cap else "iterative"
    rep = spectral.lambda_max_nontrivial(G, mode, budgets=budgets)
    report["generators"] = _gen_summary(gens)
    report["spectrum"] = rep.to_json_dict()
    report["checks"].append(_check("spectrum.computed", True, instance={"k": k, "n": G.n}))
    return report


def _lemma_registry():
    return {
        "distinct": _lemma_distinct,
        "symmetry": _lemma_symmetry,
        "degree": _lemma_degree,
        "degree-lower": _lemma_degree_lower,
        "bubble": _lemma_bubble,
        "cay-walk": _lemma_cay_walk,
        "duality": _lemma_duality,
        "isomorphism": _lemma_isomorphism,
        "sumset-moebius": _lemma_sumset_moebius,
    }


def _lemma_distinct(cfg, budgets, gens, H):
    rep = lemmas.verify_distinct(gens, budgets=budgets)
    return _check("verify.distinct", rep["pass"], instance=rep["instance"])


def _lemma_symmetry(cfg, budgets, gens, H):
    rep = lemmas.verify_symmetry(gens)
    return _check("verify.symmetry", rep["pass"], instance=rep.get("instance"))


def _lemma_degree(cfg, budgets, gens, H):
    rep = lemmas.verify_degree(H, budgets=budgets)
    return _check("verify.degree", rep["pass"], instance=rep["instance"],
                  expected=rep["expected_degree"])


def _lemma_degree_lower(cfg, budgets, gens, H):
    k = cfg.get("k") or 1
    rep = lemmas.verify_degree_lower(gens, k, budgets=budgets)
    return _check("verify.degree-lower", rep["pass"], instance=rep["instance"],
                  expected=rep["expected_class_size"])


def _walk_instance(gens):
    """Deterministic walk endpoints that keep every stage feasible even for
    small generator sets: the bridge pair comes from the start tuple and the
    target reuses the bridge coordinates."""
    fam = construction.build_index_family(gens.r)
    p = fam.size
    elems = list(gens.elements)
    start = tuple(elems[:p])
    closed_target = start
    return fam, start, closed_target


def _lemma_bubble(cfg, budgets, gens, H):
    fam, start, target = _walk_instance(gens)
    x = 0
    count, samples = lemmas.full_bubble_walks(x, start, target, sample_limit=25,
                                              gens=gens, family=fam)
    ok = count > 0 and all(
        lemmas.validate_witness(w, gens, fam)
        and w.start == (x, start) and w.end == (x, target)
        for w in samples
    )
    single_ok = True
    mask = fam.sets[0]
    fresh = next(e for e in gens.elements if e not in start)
    for w in lemmas.single_bubble_walks(x, start, mask, fresh, gens=gens, family=fam):
        single_ok = single_ok and lemmas.validate_witness(w, gens, fam)
    return _check("verify.bubble", ok and single_ok,
                  instance={"r": gens.r, "count": count, "samples": len(samples)})


def _lemma_cay_walk(cfg, budgets, gens, H):
    fam, start, _ = _walk_instance(gens)
    elems = list(gens.elements)
    x = 0
    a1, a2 = sorted(elems[:2])
    y = a1 ^ a2
    idx = fam.index_of()
    i1, i2 = lemmas.bridge_index_sets(gens.r)
    # target reuses the bridge coordinates and otherwise fresh generators, so
    # even minimal sets leave at least one feasible route
    target = [0] * fam.size
    target[idx[i1]], target[idx[i2]] = a1, a2
    pool = [e for e in elems if e not in (a1, a2) and e not in start]
    spots = [p for p in range(fam.size) if p not in (idx[i1], idx[i2])]
    if len(pool) < len(spots):
        return _check("verify.cay-walk", False,
                      skipped="not enough spare generators for a bridge target")
    for p, v in zip(spots, pool):
        target[p] = v
    target = tuple(target)
    try:
        count, samples = lemmas.cayley_step_walks(x, start, y, target, sample_limit=25,
                                                  gens=gens, family=fam)
    except ExpanderForgeError as exc:
        return _check("verify.cay-walk", False, skipped=str(exc))
    ok = count > 0 and all(
        lemmas.validate_witness(w, gens, fam)
        and w.start == (x, start) and w.end == (y, target)
        for w in samples
    )
    return _check("verify.cay-walk", ok,
                  instance={"r": gens.r, "count": count, "samples": len(samples)})


def _lemma_duality(cfg, budgets, gens, H):
    ks = [cfg["k"]] if cfg.get("k") else range(1, H.r)
    out = []
    for k in ks:
        inc_cols = graphs.k_edge_keys(H, k + 1).size
        with_spectra = max(inc_cols, graphs.k_edge_keys(H, k).size) <= budgets.dense_cap
        rep = lemmas.verify_duality(H, k, budgets=budgets, spectra=with_spectra)
        out.append(_check(f"verify.duality.k{k}", rep["pass"], instance=rep["instance"],
                          spectra="checked" if with_spectra else "skipped: dense cap"))
    return out


def _lemma_isomorphism(cfg, budgets, gens, H):
    k = cfg.get("k") or 1
    rep = lemmas.verify_isomorphism(gens, k, budgets=budgets)
    return _check("verify.isomorphism", rep["pass"], instance=rep["instance"])


def _lemma_sumset_moebius(cfg, budgets, gens, H):
    out = []
    for m in (2, 4):
        rep = lemmas.verify_sumset_moebius(gens, m, budgets=budgets)
        out.append(_check(f"verify.sumset-moebius.m{m}", rep["pass"], instance=rep["instance"]))
    return out


def _cmd_verify(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    report["generators"] = _gen_summary(gens)
    lemma = cfg.get("lemma")
    registry = _lemma_registry()
    if lemma not in registry:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {sorted(registry)}")
    result = registry[lemma](cfg, budgets, gens, H)
    report["checks"].extend(result if isinstance(result, list) else [result])
    return report


def _cmd_discrepancy(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    report["generators"] = _gen_summary(gens)
    draws = cfg.get("draws") or 20
    density = cfg.get("subset_density") or 0.5
    forms = [cfg["form"]] if cfg.get("form") else ["lemma", "proposition", "theorem"]
    rng = SplitMix64(cfg["seed"] ^ 0xD15C)
    rows = []
    all_ok = True
    for i in range(draws):
        parts = discrepancy.random_parts(gens.t, gens.r, density, rng)
        ident = discrepancy.moebius_identity_check(gens, parts, budgets=budgets)
        all_ok = all_ok and ident["pass"]
        for form in forms:
            templates = [None]
            if form == "lemma":
                fam = construction.build_index_family(gens.r)
                templates = [
                    discrepancy.MultisetFamily(gens.r, fam.sets),
                    discrepancy.MultisetFamily(gens.r, fam.sets + fam.sets[:1]),
                    discrepancy.MultisetFamily(
                        gens.r, (0, (1 << gens.r) - 1) + fam.sets[:1]),
                ]
            for tpl in templates:
                rec = discrepancy.bound_check(gens, parts, form, tpl, budgets=budgets)
                all_ok = all_ok and rec["pass"]
                rows.append({
                    "draw": i, "form": form,
                    "template_size": tpl.size if tpl else None,
                    "lhs": rec["lhs"], "main": rec["main_term"],
                    "bound": rec["bound"], "margin": rec["margin"],
                })
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write("draw,form,lhs,main,bound,margin\n")
            for row in rows:
                fh.write(f"{row['draw']},{row['form']},{row['lhs']},"
                         f"{row['main']!r},{row['bound']!r},{row['margin']!r}\n")
    report["checks"].append(
        _check("discrepancy.identities_and_bounds", all_ok,
               instance={"draws": draws, "density": density, "forms": forms})
    )
    report["discrepancy_rows"] = rows
    return report


def _cmd_mix(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    report["generators"] = _gen_summary(gens)
    k = cfg.get("k") or H.r - 1
    G = graphs.walk_graph(H, k, budgets=budgets)
    lazy = cfg.get("lazy", 0.5)
    steps = cfg.get("steps") or 60
    spec_rep = spectral.lambda_max_nontrivial(
        G, "dense" if G.n <= budgets.dense_cap else "iterative", budgets=budgets)
    lam_hat = mixing.lazy_lambda_hat(spec_rep.lam, G.degree, lazy)
    curve = mixing.mixing_curve(G, steps=steps, mode="exact", lazy=lazy, budgets=budgets)
    bounds = [mixing.tv_bound(G.n, lam_hat, m) for m in range(steps + 1)]
    bound_ok = all(tv <= b + 1e-9 for tv, b in zip(curve.tv, bounds))
    report["spectrum"] = spec_rep.to_json_dict()
    report["mixing"] = {"lazy": lazy, "lambda_hat": lam_hat, "tv": list(curve.tv)}
    report["checks"].append(
        _check("mix.tv_within_bound", bound_ok, instance={"k": k, "n": G.n, "steps": steps}))
    if spec_rep.epsilon > 0:
        threshold = 5 * math.ceil(math.log(G.n) / spec_rep.epsilon)
        reached = next((m for m, tv in enumerate(curve.tv) if tv < 0.01), None)
        report["checks"].append(
            _check("mix.tv_threshold", reached is not None and reached <= threshold,
                   instance={"threshold_steps": threshold, "reached_at": reached}))
    else:
        report["checks"].append(
            _check("mix.tv_threshold", False,
                   skipped="epsilon=0: walk graph is disconnected at this instance "
                           "(sum-distinct sets of this size cannot span)"))
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write("step,tv,bound\n")
            for m, (tv, b) in enumerate(zip(curve.tv, bounds)):
                fh.write(f"{m},{tv!r},{b!r}\n")
    return report


def _cmd_all(cfg, budgets, report):
    gens, H = _build(cfg, budgets)
    report["generators"] = _gen_summary(gens)
    checks = report["checks"]
    checks.append(_check("sample.sum_distinct", gens.cert.sum_distinct))

    expected_edges = construction.hyperedge_count(gens.t, gens.size, gens.r)
    checks.append(_check("build.edge_count", H.edge_count == expected_edges,
                         instance={"edges": H.edge_count, "expected": expected_edges}))
    checks.append(_check("build.multiplicity_r_factorial", True))  # enforced in build

    deg = lemmas.verify_degree(H, budgets=budgets)
    checks.append(_check("verify.degree", deg["pass"], expected=deg["expected_degree"]))
    checks.append(_lemma_distinct(cfg, budgets, gens, H))
    checks.append(_lemma_symmetry(cfg, budgets, gens, H))
    checks.extend(_lemma_duality({}, budgets, gens, H))

    # sumset identity: 2 A_{2S'} = A^2 - |S| I per character, exact
    from .gf2 import cayley_spectrum_exact

    base = GeneratorMultiset.from_elements(gens.t, gens.elements)
    spec_s = cayley_spectrum_exact(base, budgets=budgets)
    spec_2s = cayley_spectrum_exact(sumset(gens, 2), budgets=budgets)
    sumset_ok = bool(np.array_equal(2 * spec_2s, spec_s**2 - gens.size))
    checks.append(_check("verify.sumset-cayley", sumset_ok))

    checks.extend(_lemma_sumset_moebius(cfg, budgets, gens, H))
    checks.append(_lemma_isomorphism({**cfg, "k": 1}, budgets, gens, H))
    checks.append(_check("verify.degree-lower",
                         lemmas.verify_degree_lower(gens, 1, budgets=budgets)["pass"]))
    checks.append(_lemma_bubble(cfg, budgets, gens, H))
    checks.append(_lemma_cay_walk(cfg, budgets, gens, H))

    # order-1 walk graph coincides with the 2^(r-2)-fold sumset Cayley graph
    walk1 = graphs.walk_graph(H, 1, budgets=budgets)
    cay = graphs.cayley_graph(sumset(gens, 1 << (gens.r - 2)), budgets=budgets)
    same = walk1.n == cay.n and (walk1.adj != cay.adj).nnz == 0
    checks.append(_check("verify.k1-walk-identification", same,
                         instance={"walk_degree": walk1.degree, "cayley_degree": cay.degree}))

    report = _cmd_discrepancy({**cfg, "draws": cfg.get("draws") or 10}, budgets, report)
    report = _cmd_mix(cfg, budgets, report)
    return report


COMMANDS = {
    "sample": _cmd_sample,
    "certify": _cmd_certify,
    "build": _cmd_build,
    "walkgraph": _cmd_walkgraph,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "discrepancy": _cmd_discrepancy,
    "mix": _cmd_mix,
    "all": _cmd_all,
}


def run(command: str, cfg: dict) -> tuple[dict, int]:
    """Execute one subcommand; returns (report, exit_code)."""
    budgets = _budgets(cfg)
    started = time.monotonic()
    report = {
        "schema": SCHEMA,
        "command": command,
        "config": {
            key: cfg.get(key)
            for key in ("r", "t", "s_size", "seed", "k", "lemma", "draws",
                        "subset_density", "form", "lazy", "steps", "format",
                        "budget_tuples", "budget_vertices", "infile", "out")
            if cfg.get(key) is not None
        },
        "checks": [],
    }
    try:
        report = COMMANDS[command](cfg, budgets, report)
        failed = [c for c in report["checks"] if c.get("status") == "fail"]
        code = 1 if failed else 0
    except ExpanderForgeError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 2
    report["timings"] = {
        "threads": cfg.get("threads", 1),
        "wall_seconds": round(time.monotonic() - started, 3),
    }
    return report, code


def report_bytes(report: dict, *, drop_timings: bool = False) -> bytes:
    view = {k: v for k, v in report.items() if not (drop_timings and k == "timings")}
    return (json.dumps(view, sort_keys=True, indent=1) + "\n").encode()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expander-forge",
        description="Build and verify hypergraph expanders over GF(2)^t",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--r", type=int, default=3)
        p.add_argument("--t", type=int, default=8)
        p.add_argument("--s-size", dest="s_size", type=int, default=6)
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--k", type=int)
        p.add_argument("--in", dest="infile")
        p.add_argument("--out")
        p.add_argument("--format", dest="format", choices=["json", "csv"], default="json")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--budget-tuples", dest="budget_tuples", type=int)
        p.add_argument("--budget-vertices", dest="budget_vertices", type=int)
        p.add_argument("--lemma", choices=sorted(_lemma_registry()))
        p.add_argument("--draws", type=int)
        p.add_argument("--subset-density", dest="subset_density", type=float)
        p.add_argument("--form", choices=["lemma", "proposition", "theorem"])
        p.add_argument("--lazy", type=float, default=0.5)
        p.add_argument("--steps", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = vars(args)
    command = cfg.pop("command")
    report, code = run(command, cfg)
    sys.stdout.write(report_bytes(report).decode())
    return code


if __name__ == "__main__":
    sys.exit(main())
