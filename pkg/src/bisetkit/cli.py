"""Command-line interface: ``bisetkit <command> ...``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction

from . import cache, config
from .bifree import BifreeError, bifree_algebra_radical, bifree_gram
from .bisets import BisetElem, BisetError, basis_keys, compose, describe_key, elementary, identity
from .catalog import describe_group, make_group
from .chartab import CharacterTableError, character_table
from .cyclotomic import Cyclotomic, to_string
from .functor import (DimensionError, gram_matrix, semisimple_quotient_dims, simple_dim_report,
                      split_pair_witness, std_basis)
from .groups import GroupError
from .ideals import section_ideal_report
from .radical import (RadicalError, algebra_radical_dim, composition_factors, module_radical,
                      radical_contained_in_kernel, trivial_ideal_dims)
from .reproduce import CaseError, case_names, run_case


class UsageError(ValueError):
    pass


# ---- group handling ----

_GROUPS = {}


def group(spec):
    """Parse a group spec once per invocation so that equal specs give the same object."""
    key = spec.strip()
    if key not in _GROUPS:
        _GROUPS[key] = make_group(key)
    return _GROUPS[key]


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, Cyclotomic):
        return to_string(x)
    return x


# ---- biset expressions ----

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z]+)\[([^\]]*)\]|([*+()-]))")


def _resolve_subgroup(G, text):
    """A subgroup of G given as '#k' (subgroup class index) or a group spec matched up to isomorphism."""
    reps = G.subgroup_classes()
    text = text.strip()
    if text.startswith("#"):
        k = int(text[1:])
        if not 0 <= k < len(reps):
            raise UsageError(f"subgroup class index {k} out of range 0..{len(reps) - 1}")
        return reps[k]
    from .groups import find_isomorphism
    H = make_group(text)
    for A in reps:
        if len(A) == H.order and find_isomorphism(H, G.subgroup_group(A)[0]) is not None:
            return A
    raise UsageError(f"{text} is not isomorphic to a subgroup of {G.spec}")


def _resolve_normal(G, S, text):
    text = text.strip()
    if text in ("1", "C1"):
        return frozenset([0])
    from .groups import find_isomorphism
    H = make_group(text) if not text.startswith("#") else None
    cands = []
    for i, sp in enumerate(G.section_classes()):
        if sp.S != S:
            continue
        if text.startswith("#"):
            if G.locate_subgroup(sp.T)[0] == int(text[1:]):
                cands.append(sp.T)
        elif len(sp.T) == H.order and find_isomorphism(H, G.subgroup_group(sp.T)[0]) is not None:
            cands.append(sp.T)
    if not cands:
        raise UsageError(f"no normal subgroup {text} in the chosen subgroup")
    return cands[0]


def _atom(kind, body):
    kind = kind.lower()
    if kind in ("ind", "res"):
        a, _, g = body.partition("<=")
        if not g:
            raise UsageError(f"{kind} needs the form A<=G")
        G = group(g)
        return elementary(kind, G, _resolve_subgroup(G, a))
    if kind in ("inf", "def"):
        g, _, n = body.partition("/")
        if not n:
            raise UsageError(f"{kind} needs the form G/N")
        G = group(g)
        return elementary(kind, G, _resolve_normal(G, G.all, n))
    if kind in ("indinf", "defres"):
        st, _, g = body.partition("<=")
        s, _, t = st.partition("/")
        if not g or not t:
            raise UsageError(f"{kind} needs the form S/T<=G")
        G = group(g)
        S = _resolve_subgroup(G, s)
        return elementary(kind, G, S, _resolve_normal(G, S, t))
    if kind in ("iso", "id"):
        # Iso[H] is the identity; Iso[H;w] is the Out(H) element w
        h, _, w = body.partition(";")
        H = group(h)
        if not w.strip():
            return identity(H)
        from .bisets import out_iso
        return out_iso(H, int(w))
    raise UsageError(f"unknown biset constructor {kind!r}")


def parse_biset(text):
    """Evaluate a biset expression: atoms, rational coefficients, '*' (composition), '+', '-', parentheses."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse biset expression at position {pos}: {text[pos:pos + 12]!r}")
        if m.group(1):
            tokens.append(("num", Fraction(m.group(1))))
        elif m.group(2):
            tokens.append(("atom", (m.group(2), m.group(3))))
        else:
            tokens.append(("op", m.group(4)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    stream = iter(tokens + [("end", None)])
    state = {"tok": next(stream)}

    def advance():
        state["tok"] = next(stream)

    def expr():
        val = term()
        while state["tok"] in (("op", "+"), ("op", "-")):
            sign = state["tok"][1]
            advance()
            rhs = term()
            val = val + rhs if sign == "+" else val - rhs
        return val

    def term():
        val = factor()
        while state["tok"] == ("op", "*"):
            advance()
            rhs = factor()
            if isinstance(val, Fraction) or isinstance(rhs, Fraction):
                val = val * rhs if isinstance(rhs, Fraction) else rhs.__rmul__(val)
            else:
                val = compose(val, rhs)
        return val

    def factor():
        kind, v = state["tok"]
        if kind == "num":
            advance()
            return v
        if kind == "atom":
            advance()
            return _atom(*v)
        if (kind, v) == ("op", "("):
            advance()
            val = expr()
            if state["tok"] != ("op", ")"):
                raise UsageError("missing ')'")
            advance()
            return val
        if (kind, v) == ("op", "-"):
            advance()
            return -factor()
        raise UsageError(f"unexpected token {v!r}")

    out = expr()
    if state["tok"][0] != "end":
        raise UsageError(f"trailing input at {state['tok'][1]!r}")
    if isinstance(out, Fraction):
        raise UsageError("expression has no biset")
    return out


def biset_report(b: BisetElem):
    terms = [{"biset": describe_key(b.X, b.Y, k), "coefficient": _num(Fraction(c) if not isinstance(c, Cyclotomic) else c)}
             for k, c in sorted(b.coeffs.items())]
    return {"left": describe_group(b.X), "right": describe_group(b.Y), "terms": terms}


# ---- section addressing ----

def resolve_section(G, text):
    """A section class index from 'i' or '(a,b)' with a, b subgroup class indices."""
    text = text.strip()
    secs = G.section_classes()
    if re.fullmatch(r"\d+", text):
        i = int(text)
        if i >= len(secs):
            raise UsageError(f"section index {i} out of range 0..{len(secs) - 1}")
        return i
    m = re.fullmatch(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", text)
    if not m:
        raise UsageError(f"section must be an index or '(P,Q)' with subgroup class indices, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    hits = [i for i, sp in enumerate(secs)
            if G.locate_subgroup(sp.S)[0] == a and G.locate_subgroup(sp.T)[0] == b]
    if not hits:
        raise UsageError(f"no section with P in class {a} and Q in class {b}")
    if len(hits) > 1:
        raise UsageError(f"({a},{b}) matches several section classes {hits}; use an index")
    return hits[0]


def sections_report(G):
    rows = []
    for i, sp in enumerate(G.section_classes()):
        rows.append({"index": i, "P_class": G.locate_subgroup(sp.S)[0], "Q_class": G.locate_subgroup(sp.T)[0],
                     "P_order": len(sp.S), "Q_order": len(sp.T),
                     "quotient": describe_group(G.section_quotient(i).group)})
    return rows


# ---- commands ----

def cmd_basis(a):
    G, H = group(a.G), group(a.H)
    B = std_basis(G, H)
    return {"G": a.G, "H": a.H, "dim": len(B), "basis": list(B.labels)}


def cmd_gram(a):
    G, H = group(a.G), group(a.H)
    g = gram_matrix(G, H, a.tau)
    return {"G": a.G, "H": a.H, **g.to_json_obj()}


def cmd_simple_dim(a):
    G, H = group(a.G), group(a.H)
    return {"G": a.G, "H": a.H, "V": a.V, **simple_dim_report(H, a.V, G)}


def cmd_semisimple(a):
    G, H = group(a.G), group(a.H)
    rows = [{"V": lab, "dim_V": deg, "dim_S": d} for lab, deg, d in semisimple_quotient_dims(G, H)]
    w = split_pair_witness(G, H)
    return {"G": a.G, "H": a.H, "simples": rows, "split_pair": None if w is None else w.case}


def cmd_radical_module(a):
    G, H = group(a.G), group(a.H)
    r = module_radical(G, H)
    out = {"G": a.G, "H": a.H, **r.as_dict(), "J_in_R": radical_contained_in_kernel(r)}
    if a.bases:
        out["J_basis"] = [[_num(x) for x in v] for v in r.J_basis]
        out["R_basis"] = [[_num(x) for x in v] for v in r.R_basis]
    if not a.no_factors:
        out["factors"] = [f.as_dict() for f in composition_factors(G, H)]
    return out


def cmd_radical_algebra(a):
    G = group(a.G)
    return {"G": a.G, "dim": len(basis_keys(G, G)), "radical_dim": algebra_radical_dim(G)}


def cmd_trivial_ideal(a):
    G = group(a.G)
    cross = None if not a.no_cross_check else False
    return {"G": a.G, **trivial_ideal_dims(G, cross_check=cross)}


def cmd_sections(a):
    G = group(a.G)
    return {"G": a.G, "sections": sections_report(G)}


def cmd_section_ideal(a):
    G = group(a.G)
    i = resolve_section(G, a.section)
    return {"G": a.G, **section_ideal_report(G, i).as_dict()}


def cmd_bifree_gram(a):
    X, H = group(a.X), group(a.H)
    m = bifree_gram(X, H)
    return {"X": a.X, "H": a.H, "basis": m.row_labels,
            "diagonal": [_num(m.rows[i][i]) for i in range(len(m.rows))], "rank": m.rank()}


def cmd_bifree_radical(a):
    return {"G": a.G, "radical_dim": bifree_algebra_radical(group(a.G))}


def cmd_chartab(a):
    return {"G": a.G, **character_table(group(a.G)).to_json_obj()}


def cmd_expr(a):
    return biset_report(parse_biset(a.expression))


def cmd_reproduce(a):
    names = case_names() if a.case == "all" else [a.case]
    reports = [run_case(n, allow_slow=a.allow_slow) for n in names]
    if not a.stats:
        for r in reports:
            r.pop("seconds", None)
    ok = all(r.get("ok", True) for r in reports)
    return {"cases": reports, "ok": ok}, (0 if ok else 1)


def cmd_cache(a):
    if a.action == "clear":
        return {"removed": cache.clear(a.cache_dir)}
    return cache.info(a.cache_dir)


# ---- table rendering ----

def _render_table(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        nested = any(isinstance(x, dict) and any(isinstance(v, (dict, list)) and v and not _flat_list(v)
                                                 for v in x.values()) for x in obj)
        if nested:
            # records holding their own tables get one block each
            for x in obj:
                lines.append(f"{pad}-")
                lines.extend(_render_table(x, indent + 1))
        elif obj and all(isinstance(x, dict) for x in obj):
            keys = list(obj[0])
            rows = [[_scalar(x.get(k)) for k in keys] for x in obj]
            widths = [max(len(str(k)), *(len(r[n]) for r in rows)) for n, k in enumerate(keys)]
            lines.append((pad + "  ".join(str(k).ljust(w) for k, w in zip(keys, widths))).rstrip())
            for r in rows:
                lines.append((pad + "  ".join(c.ljust(w) for c, w in zip(r, widths))).rstrip())
        else:
            for x in obj:
                lines.append(f"{pad}{_scalar(x)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v):
    if isinstance(v, list):
        return " ".join(_scalar(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, ensure_ascii=False)
    return "-" if v is None else str(v)


# ---- parser ----

_DEFAULTS = {"format": "json", "jobs": 1, "allow_slow": False, "no_cache": False,
             "cache_dir": None, "max_order": None, "max_aut": None, "stats": False}


def _global_options(p, suppress):
    d = (lambda key: argparse.SUPPRESS) if suppress else _DEFAULTS.get
    p.add_argument("--format", choices=["json", "table"], default=d("format"))
    p.add_argument("--jobs", type=int, default=d("jobs"), help="worker threads for Gram entries")
    p.add_argument("--allow-slow", action="store_true", default=d("allow_slow"), help="run cases marked slow")
    p.add_argument("--no-cache", action="store_true", default=d("no_cache"),
                   help="do not read or write the disk cache")
    p.add_argument("--cache-dir", default=d("cache_dir"),
                   help="cache directory (default: $BISETKIT_CACHE_DIR or ~/.cache/bisetkit)")
    p.add_argument("--max-order", type=int, default=d("max_order"), help="largest group order accepted")
    p.add_argument("--max-aut", type=int, default=d("max_aut"), help="largest automorphism group computed")
    p.add_argument("--stats", action="store_true", default=d("stats"),
                   help="include timing and cache counters in the report")


def build_parser():
    p = argparse.ArgumentParser(prog="bisetkit", description="Exact computations in double Burnside rings.")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *args, help=None):
        s = sub.add_parser(name, help=help)
        _global_options(s, suppress=True)
        for a in args:
            s.add_argument(a)
        s.set_defaults(func=fn)
        return s

    add("basis", cmd_basis, "G", "H", help="standard basis of the quotient of kB(G,H)")
    s = add("gram", cmd_gram, "G", "H", help="Gram matrix of the bilinear form")
    s.add_argument("--tau", default="sum", help="sum, coeff1 or V:<label>")
    add("simple-dim", cmd_simple_dim, "G", "H", "V", help="dim S_{H,V}(G)")
    add("semisimple-quotient", cmd_semisimple, "G", "H", help="dims of S_{H,V}(G) for every V")
    s = add("radical-module", cmd_radical_module, "G", "H", help="radical of the standard quotient module")
    s.add_argument("--bases", action="store_true", help="include J and R bases")
    s.add_argument("--no-factors", action="store_true", help="skip composition factors")
    add("radical-algebra", cmd_radical_algebra, "G", help="dimension of J(kB(G,G))")
    s = add("trivial-ideal", cmd_trivial_ideal, "G", help="trivial-group ideal dimensions")
    s.add_argument("--no-cross-check", action="store_true")
    add("sections", cmd_sections, "G", help="section classes with indices")
    add("section-ideal", cmd_section_ideal, "G", "section", help="left ideal report for a section")
    add("bifree-gram", cmd_bifree_gram, "X", "H", help="bifree Gram diagonal")
    add("bifree-radical", cmd_bifree_radical, "G", help="radical of kA(G,G)")
    add("chartab", cmd_chartab, "G", help="character table")
    add("expr", cmd_expr, "expression", help="evaluate a biset expression")
    s = add("reproduce", cmd_reproduce, help="recompute stored worked examples")
    s.add_argument("case", help="case name or 'all'; one of: " + ", ".join(["all"] + _safe_case_names()))
    s = add("cache", cmd_cache, help="inspect or clear the disk cache")
    s.add_argument("action", choices=["info", "clear"])
    return p


def _safe_case_names():
    try:
        return case_names()
    except Exception:  # data file missing in a broken install
        return []


def configure(args):
    config.JOBS = max(1, args.jobs)
    if args.max_order is not None:
        config.MAX_ORDER = args.max_order
    if args.max_aut is not None:
        config.MAX_AUT_ORDER = args.max_aut
    if args.no_cache:
        cache.disable()
    else:
        cache.enable(args.cache_dir)
    config.reset_stats()
    _GROUPS.clear()


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure(args)
    start = time.perf_counter()
    try:
        result = args.func(args)
    except (GroupError, UsageError, BisetError, CaseError, DimensionError, RadicalError,
            BifreeError, CharacterTableError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    report = {"command": args.command, "result": result}
    if args.stats:
        report["seconds"] = round(time.perf_counter() - start, 3)
        report["stats"] = dict(sorted(config.STATS.items()))
    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False, default=_num))
    else:
        print("\n".join(_render_table(report)))
    return code


if __name__ == "__main__":
    sys.exit(main())
