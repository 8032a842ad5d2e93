"""Recompute the worked examples and diff them against data/expected.json."""

from __future__ import annotations

import json
import re
import time
from importlib import resources

from . import config
from .catalog import make_group
from .functor import (semisimple_quotient_dims, simple_dim, simple_module_table,
                      split_pair_witness)
from .bisets import basis_keys
from .radical import algebra_radical_dim, composition_factors, module_radical, trivial_ideal_dims


class CaseError(KeyError):
    pass


def load_expected():
    text = resources.files("bisetkit").joinpath("data/expected.json").read_text()
    return json.loads(text)["cases"]


def case_names():
    return list(load_expected())


def _ring_case(G, names):
    out = {}
    if "ring_dim" in names:
        out["ring_dim"] = len(basis_keys(G, G))
    if "radical_dim" in names:
        out["radical_dim"] = algebra_radical_dim(G)
    if "simple_dims" in names or "simple_table" in names or "sum_of_squares" in names:
        table = simple_module_table(G)
        out["simple_dims"] = sorted(d for *_, d in table if d)
        out["simple_table"] = [[h, lab, d] for h, lab, _, d in table]
        out["sum_of_squares"] = sum(d * d for *_, d in table)
    if names & {"b", "c", "trivial_ideal_radical_dim", "I_cap_J_equals_J"}:
        t = trivial_ideal_dims(G)
        out.update({"b": t["b"], "c": t["c"], "trivial_ideal_radical_dim": t["dim_I_cap_J"],
                    "I_cap_J_equals_J": t.get("I_cap_J_equals_J")})
    return out


def _module_case(G, H, names):
    rad = module_radical(G, H)
    out = {"dims": [rad.dim_M, rad.dim_R, rad.dim_J]}
    if names & {"top_factors", "radical_factors", "radical_factor_dims",
                "extra_quotient_groups", "extra_quotient_count"}:
        facs = composition_factors(G, H)
        out["top_factors"] = sorted(f.label for f in facs if f.layer == 0)
        out["radical_factors"] = sorted(f.label for f in facs if f.layer > 0)
        out["radical_factor_dims"] = sorted(f.dim for f in facs if f.layer > 0
                                            for _ in range(f.multiplicity * f.galois_degree))
        extra = [f for f in facs if f.layer == 0 and f.minimal_order > H.order]
        out["extra_quotient_groups"] = sorted({f.minimal_group for f in extra})
        out["extra_quotient_count"] = sum(f.multiplicity * f.galois_degree for f in extra)
    if "semisimple_quotient" in names:
        out["semisimple_quotient"] = sorted([lab, d] for lab, _, d in semisimple_quotient_dims(G, H) if d)
    if "simple_k" in names:
        out["simple_k"] = simple_dim(H, "k", G)
    if "simple_eps" in names:
        out["simple_eps"] = simple_dim(H, "eps", G)
    if "nonzero_simples" in names:
        out["nonzero_simples"] = sum(1 for *_, d in semisimple_quotient_dims(G, H) if d)
    if "split_pair" in names:
        w = split_pair_witness(G, H)
        out["split_pair"] = None if w is None else w.case
    return out


def cyclic_case(p):
    """Expected values for C_p generated from the closed formulas (p prime)."""
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise CaseError(f"cp:{p} needs a prime")
    return {"group": f"C{p}", "values": {
        "ring_dim": {"value": p + 3, "source": "computed", "note": "p + 3 Goursat triples"},
        "radical_dim": {"value": 0, "source": "reference", "note": "kB(Cp,Cp) is semisimple"},
        "simple_dims": {"value": [1] * (p - 1) + [2], "source": "reference",
                        "note": "p - 1 simples of dimension 1 and one of dimension 2"}}}


def run_case(name, allow_slow=False):
    """Report dict with computed values, expected values and mismatches."""
    cases = load_expected()
    if name not in cases and re.fullmatch(r"cp:\d+", name):
        cases[name] = cyclic_case(int(name[3:]))
    if name not in cases:
        raise CaseError(f"unknown case {name!r}; known: {', '.join(cases)}")
    case = cases[name]
    if case.get("slow") and not allow_slow:
        return {"case": name, "skipped": True, "reason": "slow case; pass --allow-slow"}
    old = config.MAX_AUT_ORDER
    config.MAX_AUT_ORDER = max(old, case.get("aut_bound", old))
    start = time.perf_counter()
    try:
        G = make_group(case["group"])
        names = set(case["values"])
        if "subgroup" in case:
            got = _module_case(G, make_group(case["subgroup"]), names)
        else:
            got = _ring_case(G, names)
    finally:
        config.MAX_AUT_ORDER = old
    elapsed = time.perf_counter() - start
    results = []
    for key, spec in case["values"].items():
        actual = got.get(key)
        results.append({"name": key, "expected": spec["value"], "actual": actual,
                        "source": spec["source"], "note": spec.get("note", ""),
                        "ok": actual == spec["value"]})
    return {"case": name, "group": case["group"], "subgroup": case.get("subgroup"),
            "skipped": False, "ok": all(r["ok"] for r in results), "results": results,
            "seconds": round(elapsed, 3)}
