"""The standard quotient k̄B(G, H), its bilinear forms and simple-functor dimensions."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import config
from .bisets import (BisetElem, BisetError, BisetKey, compose, compose_keys, deflation,
                     describe_key, basis_keys, ind, inf, iso, opposite, opposite_key,
                     out_of, pi_out, pi_out_key, res)
from .chartab import Character, character_table, find_character
from .cyclotomic import Cyclotomic, ZERO
from .groups import find_isomorphism
from .linalg import ExactMatrix, mat_rank, right_kernel


class DimensionError(ArithmeticError):
    """rank / dim V was not an integer."""


@dataclass
class StdBasis:
    G: object
    H: object
    keys: list
    labels: list

    def __len__(self):
        return len(self.keys)

    def index(self, key):
        return self.keys.index(key)

    @property
    def position(self):
        return {k: n for n, k in enumerate(self.keys)}


def std_basis(G, H) -> StdBasis:
    """Basis of k̄B(G, H): transitive bisets whose right section is (H, 1)."""
    cache = G._aux.setdefault("std_basis", {})
    got = cache.get(id(H))
    if got is not None and got.H is H:
        return got
    f = H.full_section_index()
    keys = basis_keys(G, H, right_section=f)
    out = StdBasis(G, H, keys, [describe_key(G, H, k) for k in keys])
    cache[id(H)] = out
    return out


def project_std(b: BisetElem, basis: StdBasis = None):
    """Coordinates of the image of b in k̄B(G, H) (a list aligned with the basis)."""
    basis = basis or std_basis(b.X, b.Y)
    pos = basis.position
    vec = [Fraction(0)] * len(basis)
    for k, c in b.coeffs.items():
        n = pos.get(k)
        if n is not None:
            vec[n] = vec[n] + c
    return vec


def std_elem(basis: StdBasis, vec) -> BisetElem:
    return BisetElem(basis.G, basis.H, {k: c for k, c in zip(basis.keys, vec) if c != 0})


def right_out_action(basis: StdBasis, w):
    """Matrix of the right action of ω ∈ Out(H) on k̄B(G, H): column n = image of basis n."""
    G, H = basis.G, basis.H
    f = H.full_section_index()
    from .bisets import canonical_phi
    phi = tuple(out_of(H).representative(w))
    kw = BisetKey(f, f, canonical_phi(H, f, H, f, phi))
    pos = basis.position
    n = len(basis)
    M = [[0] * n for _ in range(n)]
    for col, k in enumerate(basis.keys):
        for k2, m in compose_keys(G, H, H, k, kw).items():
            r = pos.get(k2)
            if r is not None:
                M[r][col] += m
    return M


# ---- bilinear forms ----

def _pair_out_element(G, H, ka, kb):
    """π(αᵒᵖ β) ∈ kOut(H) as {Out index: multiplicity}."""
    kop = opposite_key(G, H, ka)
    acc = {}
    for k, m in compose_keys(H, G, H, kop, kb).items():
        w = pi_out_key(H, k)
        if w is not None:
            acc[w] = acc.get(w, 0) + m
    return acc


def _map(fn, items):
    if config.JOBS > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=config.JOBS) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def out_gram(G, H):
    """Matrix of π(αᵒᵖ β) over the standard basis, cached per (G, H)."""
    cache = G._aux.setdefault("out_gram", {})
    got = cache.get(id(H))
    if got is not None and got[0] is H:
        return got[1]
    B = std_basis(G, H)
    n = len(B)
    pairs = [(a, b) for a in range(n) for b in range(n)]
    vals = _map(lambda ab: _pair_out_element(G, H, B.keys[ab[0]], B.keys[ab[1]]), pairs)
    M = [[None] * n for _ in range(n)]
    for (a, b), v in zip(pairs, vals):
        M[a][b] = v
    cache[id(H)] = (H, M)
    return M


def resolve_tau(H, tau):
    """(tag, per-Out-element function) for 'sum', 'coeff1', a Character or 'V:<label>'."""
    O = out_of(H).group
    if isinstance(tau, Character):
        table = character_table(O)
        return f"V:{tau.label}", (lambda w, chi=tau: table.value(chi, w)), tau
    if tau in ("sum", "tau_sum"):
        table = character_table(O)
        sums = [sum((c.values[k] for c in table), ZERO) for k in range(len(table.classes.reps))]
        return "sum", (lambda w: sums[O.class_of[w]]), None
    if tau in ("coeff1", "coeff-1", "one"):
        return "coeff1", (lambda w: Cyclotomic.rational(1) if w == 0 else ZERO), None
    if isinstance(tau, str):
        chi = find_character(character_table(O), tau)
        return resolve_tau(H, chi)
    raise ValueError(f"unknown trace functional {tau!r}")


@dataclass
class GramForm:
    G: object
    H: object
    basis: StdBasis
    matrix: ExactMatrix
    tau: str
    character: object = None

    def rank(self):
        return self.matrix.rank()

    def kernel(self):
        return self.matrix.right_kernel()

    def to_json_obj(self):
        return {"basis": list(self.basis.labels), "tau": self.tau,
                "matrix": self.matrix.to_json_obj(), "rank": self.rank()}


def _simplify(x):
    x = Cyclotomic.coerce(x)
    return x.to_fraction() if x.is_rational() else x


def gram_matrix(G, H, tau="sum") -> GramForm:
    tag, f, chi = resolve_tau(H, tau)
    B = std_basis(G, H)
    M = out_gram(G, H)
    rows = []
    for row in M:
        out = []
        for d in row:
            acc = ZERO
            for w, m in d.items():
                acc = acc + f(w) * m
            out.append(_simplify(acc))
        rows.append(out)
    return GramForm(G, H, B, ExactMatrix(rows, B.labels, B.labels), tag, chi)


def form_kernel(G, H, tau="sum"):
    return gram_matrix(G, H, tau).kernel()


def kernel_dim(G, H, tau="sum"):
    g = gram_matrix(G, H, tau)
    return len(g.basis) - g.rank()


def is_subquotient(H, G):
    return len(std_basis(G, H)) > 0


def simple_dim(H, V, G) -> int:
    """dim S_{H,V}(G) = rank of the τ_V form / dim V."""
    if not is_subquotient(H, G):
        return 0
    O = out_of(H).group
    chi = V if isinstance(V, Character) else find_character(character_table(O), V)
    r = gram_matrix(G, H, chi).rank()
    if r % chi.degree:
        raise DimensionError(f"rank {r} is not divisible by dim V = {chi.degree}")
    return r // chi.degree


def simple_dim_report(H, V, G):
    O = out_of(H).group
    chi = V if isinstance(V, Character) else find_character(character_table(O), V)
    B = std_basis(G, H)
    r = gram_matrix(G, H, chi).rank() if len(B) else 0
    if r % chi.degree:
        raise DimensionError(f"rank {r} is not divisible by dim V = {chi.degree}")
    return {"dim": r // chi.degree, "basis_size": len(B), "rank": r, "degree": chi.degree,
            "character": chi.label}


def semisimple_quotient_dims(G, H):
    """[(label, m_i, dim S_{H,V_i}(G))] over the irreducible characters of Out(H)."""
    table = character_table(out_of(H).group)
    return [(chi.label, chi.degree, simple_dim(H, chi, G)) for chi in table]


def section_quotient_types(G):
    """One representative group per isomorphism type of section quotient of G, by order."""
    from .groups import invariants
    reps = []
    for i in range(len(G.section_classes())):
        Q = G.section_quotient(i).group
        inv = invariants(Q)
        if not any(inv == j and find_isomorphism(R, Q) is not None for R, j in reps):
            reps.append((Q, inv))
    return [R for R, _ in sorted(reps, key=lambda t: t[0].order)]


def simple_module_table(G):
    """[(H, label, dim V, dim S_{H,V}(G))] over all pairs (H, V) with H a subquotient of G.

    Over a splitting field these are the simple kB(G, G)-modules (those with nonzero dimension).
    """
    from .catalog import describe_group
    out = []
    for H in section_quotient_types(G):
        for lab, deg, d in semisimple_quotient_dims(G, H):
            out.append((describe_group(H), lab, deg, d))
    return out


def rank_additivity(G, H):
    """(rank of the Σχ form, Σ_i rank of the χ_i forms)."""
    table = character_table(out_of(H).group)
    total = gram_matrix(G, H, "sum").rank()
    parts = sum(gram_matrix(G, H, chi).rank() for chi in table)
    return total, parts


# ---- split pairs ----

@dataclass
class SplitWitness:
    case: str
    alpha: BisetElem     # in kB(H, G)
    beta: BisetElem      # in kB(G, H)
    detail: dict = field(default_factory=dict)


def _verify(H, alpha, beta):
    prod = pi_out(compose(alpha, beta))
    return prod.coeffs == {0: 1}


def _quotient_case(G, H):
    f = G.full_section_index()
    for i, sp in enumerate(G.section_classes()):
        if len(sp.S) != G.order or len(sp.T) * H.order != G.order:
            continue
        Qd = G.quotient(sp.S, sp.T)
        theta = find_isomorphism(H, Qd.group)
        if theta is None:
            continue
        tinv = [0] * len(theta)
        for a, b in enumerate(theta):
            tinv[b] = a
        alpha = compose(iso(Qd.group, H, tuple(tinv)), deflation(G, sp.T))
        beta = compose(inf(G, sp.T), iso(H, Qd.group, theta))
        return SplitWitness("quotient", alpha, beta, {"kernel_order": len(sp.T)})
    return None


def _subgroup_case(G, H):
    for Z in G.subgroup_classes():
        if len(Z) != H.order:
            continue
        sub, emb = G.subgroup_group(Z)
        theta = find_isomorphism(H, sub)
        if theta is None:
            continue
        N = G.normalizer(Z)
        C = G.centralizer(Z)
        ZC = G.closure(G.subgroup_generators(C), start=Z)
        if ZC != N:
            continue
        idx = len(N) // len(Z)
        tinv = [0] * len(theta)
        for a, b in enumerate(theta):
            tinv[b] = a
        alpha = Fraction(1, idx) * compose(iso(sub, H, tuple(tinv)), res(G, Z))
        beta = compose(ind(G, Z), iso(H, sub, theta))
        return SplitWitness("subgroup", alpha, beta, {"index_N_Z": idx})
    return None


def split_pair_witness(G, H):
    """A verified pair (α, β) with αβ ≡ Id mod kI(H, H) from the listed sufficient cases, or None."""
    if not is_subquotient(H, G):
        return None
    w = _quotient_case(G, H)
    if w is None and G.is_abelian:
        raise BisetError("abelian group without a quotient isomorphic to a subquotient")
    if w is None:
        w = _subgroup_case(G, H)
    if w is None:
        return None
    if not _verify(H, w.alpha, w.beta):
        raise BisetError(f"split-pair verification failed ({w.case} case)")
    return w
