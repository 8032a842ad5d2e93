"""Jacobson radicals in characteristic zero.

The radical of an algebra A acting faithfully on a module is the radical of
the trace form (a, b) ↦ tr(ab).  For M = k̄B(G, H) the acting algebra is the
image of kB(G, G); it is spanned by the operators Indinf_i Iso_α Defres_j,
where i, j run over section classes of G whose quotient contains H as a
subquotient and α over Aut of that quotient (other bisets act as zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from . import config
from .bisets import (BisetElem, BisetKey, basis_keys, compose, compose_keys,
                     indinf, iso, opposite, out_of, pi_out, pi_out_key)
from .chartab import character_table
from .cyclotomic import Cyclotomic, ZERO
from .functor import gram_matrix, std_basis
from .groups import automorphisms, find_isomorphism, invariants
from .linalg import bareiss_rank, identity, mat_rank, matmul, right_kernel, solve, trace, transpose


class RadicalError(RuntimeError):
    pass


# ---- incremental spans over Q ----

class Echelon:
    """Incrementally maintained echelon basis of a subspace of Q^n."""

    def __init__(self, n):
        self.n = n
        self.rows = []       # normalised so that row[pivot] == 1
        self.pivots = []
        self.originals = []  # the vectors that were accepted, in order

    def reduce(self, v):
        v = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v):
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return False
        c = w[p]
        self.rows.append([x / c for x in w])
        self.pivots.append(p)
        self.originals.append([Fraction(x) for x in v])
        return True

    def contains(self, v):
        return not any(self.reduce(v))

    def __len__(self):
        return len(self.rows)


def _flat(A):
    return [x for row in A for x in row]


def _unflat(v, n):
    return [list(v[r * n:(r + 1) * n]) for r in range(n)]


def _zero(n, m=None):
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


# ---- action matrices ----

def action_matrix(gamma, basis):
    """Matrix of γ ∈ kB(G, G) on k̄B(G, H); column j is the image of basis vector j."""
    if isinstance(gamma, BisetKey):
        gamma = BisetElem.basis(basis.G, basis.G, gamma)
    G, H = basis.G, basis.H
    pos = basis.position
    n = len(basis)
    M = _zero(n)
    for kg, cg in gamma.coeffs.items():
        for col, kb in enumerate(basis.keys):
            for k, m in compose_keys(G, G, H, kg, kb).items():
                r = pos.get(k)
                if r is not None:
                    M[r][col] += cg * m
    return M


def _transfer_matrix(elem, src, dst):
    """Matrix of elem ∈ kB(dst.G, src.G) as a map k̄B(src.G, H) → k̄B(dst.G, H)."""
    X, Y, H = dst.G, src.G, src.H
    pos = dst.position
    M = [[Fraction(0)] * len(src) for _ in range(len(dst))]
    for ke, ce in elem.coeffs.items():
        for col, kb in enumerate(src.keys):
            for k, m in compose_keys(X, Y, H, ke, kb).items():
                r = pos.get(k)
                if r is not None:
                    M[r][col] += ce * m
    return M


@dataclass
class QuotientType:
    """One isomorphism type Q* of section quotient relevant to the module."""
    model: object            # the group Q*
    sections: list           # section class indices i of G with Q_i ≅ Q*
    P: dict                  # i -> matrix of Indinf_i Iso_θi : k̄B(Q*, H) → M
    E: dict                  # i -> matrix of Iso_θi⁻¹ Defres_i : M → k̄B(Q*, H)
    P_elem: dict             # i -> the biset Indinf_i Iso_θi ∈ kB(G, Q*)
    E_elem: dict             # i -> the biset Iso_θi⁻¹ Defres_i ∈ kB(Q*, G)
    W: list                  # spanning matrices of the image of kAut(Q*) on k̄B(Q*, H)
    aut_gens: list           # automorphisms of Q* whose Iso actions span W (as products)
    W_words: list            # for each W matrix, the automorphism it comes from


def _aut_action(Qs, basis, alpha):
    """Matrix of Iso_α on k̄B(Q*, H)."""
    return _transfer_matrix(iso(Qs, Qs, alpha), basis, basis)


def quotient_types(G, H):
    """Section quotients of G containing H as a subquotient, grouped by isomorphism type."""
    cache = G._aux.setdefault("qtypes", {})
    got = cache.get(id(H))
    if got is not None and got[0] is H:
        return got[1]
    M = std_basis(G, H)
    types = []
    for i, sp in enumerate(G.section_classes()):
        Q = G.section_quotient(i).group
        if Q.order < H.order or Q.order % H.order:
            continue
        if not len(std_basis(Q, H)):
            continue
        inv = invariants(Q)
        for t in types:
            if t[1] == inv:
                theta = find_isomorphism(t[0], Q)
                if theta is not None:
                    t[2].append((i, theta))
                    break
        else:
            types.append((Q, inv, [(i, tuple(range(Q.order)))]))
    out = []
    for Qs, _, members in sorted(types, key=lambda t: (t[0].order, t[2][0][0])):
        Bq = std_basis(Qs, H)
        P, E, Pe, Ee = {}, {}, {}, {}
        for i, theta in members:
            Qi = G.section_quotient(i).group
            sp = G.section_classes()[i]
            ui = indinf(G, sp.S, sp.T)                 # kB(G, Q_i)
            th = iso(Qs, Qi, theta)                     # kB(Q_i, Q*)
            tinv = [0] * len(theta)
            for a, b in enumerate(theta):
                tinv[b] = a
            thi = iso(Qi, Qs, tuple(tinv))              # kB(Q*, Q_i)
            Pe[i] = compose(ui, th)
            Ee[i] = compose(thi, opposite(ui))
            P[i] = _transfer_matrix(Pe[i], Bq, M)
            E[i] = _transfer_matrix(Ee[i], M, Bq)
        auts = automorphisms(Qs)
        # the Iso_α span is the image of a group algebra, so it is spanned by the α themselves
        ech = Echelon(len(Bq) ** 2)
        W, words = [], []
        for a in auts:
            A = _aut_action(Qs, Bq, a)
            if ech.add(_flat(A)):
                W.append(A)
                words.append(a)
        out.append(QuotientType(Qs, [i for i, _ in members], P, E, Pe, Ee, W, [], words))
    cache[id(H)] = (H, out)
    return out


def _spanning_operators(G, H):
    """(matrix, (type index, i, j, w index)) for every Indinf_i Iso_α Defres_j."""
    out = []
    for t, qt in enumerate(quotient_types(G, H)):
        for i in qt.sections:
            for j in qt.sections:
                for w, Wm in enumerate(qt.W):
                    out.append((matmul(matmul(qt.P[i], Wm), qt.E[j]), (t, i, j, w)))
    return out


@dataclass
class ActionAlgebra:
    size: int                    # dimension of the module
    basis: list                  # linearly independent matrices spanning the algebra
    tags: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.basis)


def algebra_closure(generators, n=None):
    """Linear basis of the unital algebra generated by the given square matrices."""
    gens = [[[Fraction(x) for x in row] for row in g] for g in generators]
    if n is None:
        n = len(gens[0]) if gens else 0
    ech = Echelon(n * n)
    basis = []
    for A in [identity(n)] + gens:
        if ech.add(_flat(A)):
            basis.append(A)
    frontier = list(basis)
    while frontier:
        new = []
        for A in frontier:
            for g in gens:
                for C in (matmul(A, g), matmul(g, A)):
                    if ech.add(_flat(C)):
                        basis.append(C)
                        new.append(C)
        frontier = new
    return ActionAlgebra(n, basis)


def image_algebra(G, H):
    """Image of kB(G, G) in End(k̄B(G, H))."""
    cache = G._aux.setdefault("image_algebra", {})
    got = cache.get(id(H))
    if got is not None and got[0] is H:
        return got[1]
    n = len(std_basis(G, H))
    ech = Echelon(n * n)
    basis, tags = [], []
    for A, tag in _spanning_operators(G, H):
        if len(ech) == n * n:
            break
        if ech.add(_flat(A)):
            basis.append(A)
            tags.append(tag)
    alg = ActionAlgebra(n, basis, tags)
    cache[id(H)] = (H, alg)
    return alg


def _is_nilpotent(A):
    n = len(A)
    P = A
    for _ in range(n):
        P = matmul(P, A)
    return all(x == 0 for row in P for x in row)


def trace_form_radical(A: ActionAlgebra, check=True):
    """Basis (as matrices) of J(A) = radical of (a, b) ↦ tr(ab)."""
    d = A.dim
    if d == 0:
        return []
    # tr(ab) = Σ a[r][s] b[s][r]
    flat = [_flat(a) for a in A.basis]
    flat_t = [_flat(transpose(b)) for b in A.basis]
    T = [[sum((x * y for x, y in zip(fa, fb) if x and y), Fraction(0)) for fb in flat_t] for fa in flat]
    ker = right_kernel(T, d)
    out = []
    n = A.size
    for v in ker:
        M = _zero(n)
        for c, B in zip(v, A.basis):
            if c:
                for r in range(n):
                    for s in range(n):
                        M[r][s] += c * B[r][s]
        if check and not _is_nilpotent(M):
            raise RadicalError("trace-form radical element is not nilpotent")
        out.append(M)
    return out


def _image_of_span(mats, vectors, n):
    """Echelon basis of span{A v : A in mats, v in vectors}."""
    ech = Echelon(n)
    for A in mats:
        for v in vectors:
            w = [sum((A[r][c] * v[c] for c in range(n) if v[c]), Fraction(0)) for r in range(n)]
            ech.add(w)
            if len(ech) == n:
                return ech
    return ech


@dataclass
class ModuleRadical:
    dim_M: int
    dim_J: int
    dim_R: int
    J_basis: list
    R_basis: list
    algebra_dim: int
    radical_algebra_dim: int
    loewy: list     # dimensions of J^k M for k = 0, 1, ...

    def as_dict(self):
        return {"dim_M": self.dim_M, "dim_J": self.dim_J, "dim_R": self.dim_R,
                "image_algebra_dim": self.algebra_dim, "image_radical_dim": self.radical_algebra_dim,
                "loewy_dims": self.loewy}


def module_radical(G, H) -> ModuleRadical:
    B = std_basis(G, H)
    n = len(B)
    if n == 0:
        return ModuleRadical(0, 0, 0, [], [], 0, 0, [0])
    A = image_algebra(G, H)
    JA = trace_form_radical(A)
    unit = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    layers = [n]
    cur = unit
    JM = None
    while True:
        ech = _image_of_span(JA, cur, n)
        nxt = ech.rows
        if JM is None:
            JM = [list(r) for r in nxt]
        if len(nxt) == layers[-1]:
            raise RadicalError("radical series does not descend")
        layers.append(len(nxt))
        if not nxt:
            break
        cur = nxt
    R = gram_matrix(G, H, "sum").kernel()
    return ModuleRadical(n, len(JM), len(R), JM, R, A.dim, len(JA), layers)


def radical_contained_in_kernel(rad: ModuleRadical):
    if not rad.J_basis:
        return True
    ech = Echelon(rad.dim_M)
    for v in rad.R_basis:
        ech.add(v)
    return all(ech.contains(v) for v in rad.J_basis)


# ---- the regular representation of kB(G, G) ----

def structure_constants(G):
    """Basis of kB(G, G) and c[a][b] = {k: coefficient of b_k in b_a b_b}."""
    keys = basis_keys(G, G)
    if len(keys) > config.MAX_RING_BASIS:
        raise RadicalError(f"kB(G,G) has {len(keys)} basis elements; limit is {config.MAX_RING_BASIS}")
    pos = {k: n for n, k in enumerate(keys)}
    consts = []
    for a in keys:
        row = []
        for b in keys:
            row.append({pos[k]: m for k, m in compose_keys(G, G, G, a, b).items()})
        consts.append(row)
    return keys, consts


def regular_trace_form(G):
    keys, c = structure_constants(G)
    N = len(keys)
    t = [sum(c[k][m].get(m, 0) for m in range(N)) for k in range(N)]
    T = [[sum(v * t[k] for k, v in c[i][j].items()) for j in range(N)] for i in range(N)]
    return keys, T


def algebra_radical_dim(G):
    keys, T = regular_trace_form(G)
    return len(keys) - bareiss_rank(T)


# ---- the table of marks and the trivial-group ideal ----

@dataclass
class MarkTable:
    subgroups: list     # class representatives, ordered by order
    marks: list         # marks[C][B] = |(G/C)^B|
    inverse: list       # rational inverse

    def idempotent(self, a):
        """e_A^G in the basis of transitive G-sets G/C."""
        return list(self.inverse[a])


def _marks(G, reps):
    m = []
    for C in reps:
        row = []
        for B in reps:
            cnt = 0
            if len(C) % len(B) == 0:
                gens = G.subgroup_generators(B)
                for g in range(G.order):
                    ig = G.inv[g]
                    if all(G.mul[G.mul[ig][b]][g] in C for b in gens):
                        cnt += 1
                cnt //= len(C)
            row.append(Fraction(cnt))
        m.append(row)
    return m


def mark_idempotents(G) -> MarkTable:
    got = G._aux.get("marks")
    if got is not None:
        return got
    reps = G.subgroup_classes()
    M = _marks(G, reps)
    n = len(reps)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    from .linalg import rref
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise RadicalError("table of marks is singular")
    inv = [[x.to_fraction() if isinstance(x, Cyclotomic) else x for x in R[i][n:]] for i in range(n)]
    mt = MarkTable(reps, M, inv)
    _check_idempotents(G, mt)
    G._aux["marks"] = mt
    return mt


def burnside_product(G, a, b):
    """[G/A][G/B] = Σ_{g ∈ A\\G/B} [G/(A ∩ gBg⁻¹)] as a class-count vector."""
    reps = G.subgroup_classes()
    A, B = reps[a], reps[b]
    out = [0] * len(reps)
    for g in G.double_cosets(A, B):
        C = A & G.conjugate(B, g)
        out[G.locate_subgroup(C)[0]] += 1
    return out


def _burnside_mul(G, x, y):
    n = len(x)
    out = [Fraction(0)] * n
    for a, ca in enumerate(x):
        if ca:
            for b, cb in enumerate(y):
                if cb:
                    for k, m in enumerate(burnside_product(G, a, b)):
                        if m:
                            out[k] += ca * cb * m
    return out


def _check_idempotents(G, mt):
    n = len(mt.subgroups)
    total = [Fraction(0)] * n
    for a in range(n):
        ea = mt.idempotent(a)
        total = [s + x for s, x in zip(total, ea)]
        for b in range(n):
            prod = _burnside_mul(G, ea, mt.idempotent(b))
            want = ea if a == b else [Fraction(0)] * n
            if prod != want:
                raise RadicalError("mark idempotents are not orthogonal idempotents")
    unit = [Fraction(int(k == n - 1)) for k in range(n)]
    if total != unit:
        raise RadicalError("mark idempotents do not sum to 1")


def _burnside_as_biset(G, vec):
    """An element of kB(G) as an element of kB(G, 1)."""
    one = trivial_group()
    out = {}
    reps = G.subgroup_classes()
    for a, c in enumerate(vec):
        if c:
            S = reps[a]
            i, _ = G.locate_section(S, S)
            out[BisetKey(i, 0, (0,))] = c
    return BisetElem(G, one, out)


_TRIVIAL = []


def trivial_group():
    if not _TRIVIAL:
        from .catalog import cyclic
        _TRIVIAL.append(cyclic(1))
    return _TRIVIAL[0]


def _burnside_vector(G, b: BisetElem):
    """Inverse of ``_burnside_as_biset``."""
    reps = G.subgroup_classes()
    out = [Fraction(0)] * len(reps)
    for k, c in b.coeffs.items():
        S = G.section_classes()[k.i].S
        out[G.locate_subgroup(S)[0]] += c
    return out


def cyclic_marks(G, vec):
    """Marks of an element of kB(G) at the cyclic subgroup classes (its image in kR_Q(G))."""
    mt = mark_idempotents(G)
    cyc = [k for k, B in enumerate(mt.subgroups) if G.is_cyclic_subgroup(B)]
    return [sum((vec[c] * mt.marks[c][b] for c in range(len(vec)) if vec[c]), Fraction(0)) for b in cyc]


def rq_action_check(G, A, B, C):
    """Check (G/A)(G/B)ᵒᵖ·[Q[G/C]] = |B\\G/C| · [Q[G/A]] in kR_Q(G) via cyclic marks."""
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    reps = G.subgroup_classes()
    a, b, c = (G.locate_subgroup(X)[0] for X in (A, B, C))
    unit = lambda k: [Fraction(int(t == k)) for t in range(len(reps))]
    alpha = _burnside_as_biset(G, unit(a))
    beta = _burnside_as_biset(G, unit(b))
    m = _burnside_as_biset(G, unit(c))
    lhs_elem = compose(compose(alpha, opposite(beta)), m)
    lhs = cyclic_marks(G, _burnside_vector(G, lhs_elem))
    scalar = len(G.double_cosets(reps[b], reps[c]))
    rhs = [scalar * x for x in cyclic_marks(G, unit(a))]
    if lhs != rhs:
        raise RadicalError(f"kR_Q action mismatch: {lhs} != {rhs}")
    return {"lhs": lhs, "rhs": rhs, "scalar": scalar}


def idempotent_pair_action(G, a, b):
    """Matrix of e_A (e_B)ᵒᵖ on kR_Q(G), in the cyclic-marks coordinates of Q[G/C]."""
    mt = mark_idempotents(G)
    ea = _burnside_as_biset(G, mt.idempotent(a))
    eb = _burnside_as_biset(G, mt.idempotent(b))
    op = compose(ea, opposite(eb))
    reps = mt.subgroups
    cols = []
    for c in range(len(reps)):
        if not G.is_cyclic_subgroup(reps[c]):
            continue
        m = _burnside_as_biset(G, [Fraction(int(t == c)) for t in range(len(reps))])
        cols.append(cyclic_marks(G, _burnside_vector(G, compose(op, m))))
    return cols


def trivial_ideal_dims(G, cross_check=None):
    """(b, c, dim I, dim I_c, dim I∩J) plus the radical cross-check when feasible."""
    reps = G.subgroup_classes()
    b = len(reps)
    c = sum(1 for S in reps if G.is_cyclic_subgroup(S))
    out = {"b": b, "c": c, "dim_I": b * b, "dim_Ic": c * c, "dim_I_cap_J": b * b - c * c}
    if cross_check is None:
        cross_check = len(basis_keys(G, G)) <= config.MAX_RING_BASIS
    if cross_check:
        keys, T = regular_trace_form(G)
        N = len(keys)
        rank = bareiss_rank(T)
        icols = [n for n, k in enumerate(keys) if G.section_classes()[k.i].index == 1]
        TI = [[T[r][cidx] for cidx in icols] for r in range(N)]
        rank_I = bareiss_rank(TI)
        out.update({"dim_ring": N, "dim_J": N - rank,
                    "dim_I_cap_J_computed": len(icols) - rank_I})
        out["I_cap_J_equals_J"] = (len(icols) - rank_I) == (N - rank)
        # I'(G): e_A e_Bᵒᵖ with A or B non-cyclic lies in the radical of the form
        mt = mark_idempotents(G)
        pos = {k: n for n, k in enumerate(keys)}
        ok = True
        for a, A in enumerate(reps):
            for bb, Bs in enumerate(reps):
                if G.is_cyclic_subgroup(A) and G.is_cyclic_subgroup(Bs):
                    continue
                elem = compose(_burnside_as_biset(G, mt.idempotent(a)),
                               opposite(_burnside_as_biset(G, mt.idempotent(bb))))
                v = [Fraction(0)] * N
                for k, cc in elem.coeffs.items():
                    v[pos[k]] = cc
                if any(sum((T[r][s] * v[s] for s in range(N) if v[s]), Fraction(0)) for r in range(N)):
                    ok = False
        out["I_prime_in_J"] = ok
    return out


# ---- composition factors ----

@dataclass
class Factor:
    layer: int
    dim: int              # dimension of one simple module over an algebraically closed field
    multiplicity: int
    galois_degree: int    # number of Galois-conjugate simples merged in this rational component
    minimal_group: str = ""
    minimal_order: int = 0
    label: str = ""
    candidates: list = field(default_factory=list)
    group: object = field(default=None, repr=False)

    def as_dict(self):
        return {"layer": self.layer, "dim": self.dim, "multiplicity": self.multiplicity,
                "galois_degree": self.galois_degree, "minimal_group": self.minimal_group,
                "label": self.label, "candidates": self.candidates}


def _coords(basis_cols, v):
    """Coordinates of v in the span of ``basis_cols`` (list of vectors)."""
    if not basis_cols:
        return []
    A = [[basis_cols[c][r] for c in range(len(basis_cols))] for r in range(len(v))]
    sol = solve(A, v)
    if sol is None:
        raise RadicalError("vector outside the expected subspace")
    return [Fraction(x) if not isinstance(x, Cyclotomic) else x.to_fraction() for x in sol]


def _layer_matrix(X, upper, lower_dim):
    """Action of X on J^k M / J^(k+1) M, with ``upper`` = lower basis + complement."""
    comp = upper[lower_dim:]
    m = len(comp)
    n = len(X)
    out = _zero(m)
    for col, v in enumerate(comp):
        w = [sum((X[r][c] * v[c] for c in range(n) if v[c]), Fraction(0)) for r in range(n)]
        co = _coords(upper, w)
        for r in range(m):
            out[r][col] = co[lower_dim + r]
    return out


def _combine(coeffs, mats, n):
    M = _zero(n)
    for c, B in zip(coeffs, mats):
        if c:
            for r in range(n):
                Br, Mr = B[r], M[r]
                for s in range(n):
                    if Br[s]:
                        Mr[s] += c * Br[s]
    return M


def _center(basis_mats):
    """Basis of the center of the algebra spanned by ``basis_mats``."""
    n = len(basis_mats[0])
    cand = [list(B) for B in basis_mats]
    # shrink the candidate space one basis element at a time
    for g in basis_mats:
        if not cand:
            break
        comms = [_flat([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(matmul(z, g), matmul(g, z))])
                 for z in cand]
        if all(x == 0 for c in comms for x in c):
            continue
        eqs = [[comms[s][idx] for s in range(len(cand))] for idx in range(n * n)]
        ker = right_kernel(eqs, len(cand))
        cand = [_combine(v, cand, n) for v in ker]
    return cand


def _central_idempotents(center):
    """Primitive idempotents of a commutative semisimple Q-algebra, with their field degrees."""
    import sympy
    n = len(center[0])
    dimZ = len(center)
    x = sympy.Symbol("x")
    for trial in range(50):
        coeffs = [((trial * 7 + s * 3) % 11) - 5 + (1 if s == trial % dimZ else 0) for s in range(dimZ)]
        z = _zero(n)
        for c, B in zip(coeffs, center):
            for r in range(n):
                for s in range(n):
                    z[r][s] += c * B[r][s]
        # minimal polynomial of z
        ech = Echelon(n * n)
        powers = [identity(n)]
        ech.add(_flat(powers[0]))
        while True:
            nxt = matmul(powers[-1], z)
            if not ech.add(_flat(nxt)):
                break
            powers.append(nxt)
        deg = len(powers)
        if deg != dimZ:
            continue
        A = [[_flat(P)[idx] for P in powers] for idx in range(n * n)]
        sol = solve(A, _flat(nxt))
        mp = sympy.Poly([1] + [-sympy.Rational(int(c.numerator), int(c.denominator))
                               for c in reversed([Fraction(s) for s in sol])], x)
        factors = [f for f, _ in sympy.factor_list(mp)[1]]
        out = []
        for f in factors:
            g = sympy.quo(mp, f)
            ginv = sympy.invert(g, f)
            e_poly = sympy.rem(g * ginv, mp)
            ep = sympy.Poly(e_poly, x).all_coeffs()[::-1]
            E = _zero(n)
            Pk = identity(n)
            for c in ep:
                c = Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                if c:
                    for r in range(n):
                        for s in range(n):
                            E[r][s] += c * Pk[r][s]
                Pk = matmul(Pk, z)
            out.append((E, int(sympy.degree(f, x))))
        return out
    raise RadicalError("could not find a generating central element")


def _galois_orbits(table):
    """Partition irreducible characters into Galois orbits (lists of indices)."""
    e = table.classes.exponent
    from math import gcd
    seen = set()
    orbits = []
    for a, chi in enumerate(table.characters):
        if a in seen:
            continue
        orb = {a}
        for k in range(1, e):
            if gcd(k, e) != 1:
                continue
            vals = tuple(v.galois(k) if v.n == e else v.to_conductor(e).galois(k) for v in chi.values)
            for b, psi in enumerate(table.characters):
                if all(x == y for x, y in zip(vals, psi.values)):
                    orb.add(b)
        seen |= orb
        orbits.append(sorted(orb))
    return orbits


def composition_factors(G, H):
    """Composition factors of k̄B(G, H) layer by layer along the radical series."""
    from .catalog import describe_group
    B = std_basis(G, H)
    n = len(B)
    if n == 0:
        return []
    A = image_algebra(G, H)
    JA = trace_form_radical(A)
    ops = _spanning_operators(G, H)
    types = quotient_types(G, H)
    # radical series with nested bases
    chain = [[[Fraction(int(i == j)) for i in range(n)] for j in range(n)]]
    while chain[-1]:
        chain.append(_image_of_span(JA, chain[-1], n).rows)
    factors = []
    for k in range(len(chain) - 1):
        lower = chain[k + 1]
        ech = Echelon(n)
        for v in lower:
            ech.add(v)
        upper = [list(v) for v in lower]
        for v in chain[k]:
            if ech.add(v):
                upper.append(list(v))
        m = len(upper) - len(lower)
        layer_ops = [(_layer_matrix(X, upper, len(lower)), tag) for X, tag in ops]
        lech = Echelon(m * m)
        lbasis = []
        for L, _ in layer_ops:
            if lech.add(_flat(L)):
                lbasis.append(L)
        Z = _center(lbasis)
        for E, r in _central_idempotents(Z):
            comp_alg = Echelon(m * m)
            for L in lbasis:
                comp_alg.add(_flat(matmul(E, L)))
            d2 = len(comp_alg) // r
            d = isqrt(d2)
            if d * d != d2:
                raise RadicalError("component is not a matrix algebra over its center")
            mdim = mat_rank(E)
            mult = mdim // (r * d)
            f = Factor(k, d, mult, r)
            _label_factor(f, E, layer_ops, types, G, H, describe_group)
            factors.append(f)
    return factors


def _label_factor(f, E, layer_ops, types, G, H, describe_group):
    # minimal quotient type acting nonzero on the component
    active = None
    for t, qt in enumerate(types):
        if any(tag[0] == t and any(x for row in matmul(E, L) for x in row) for L, tag in layer_ops):
            active = t
            break
    if active is None:
        f.label = "unidentified"
        return
    qt = types[active]
    Qs = qt.model
    f.group = Qs
    f.minimal_group = describe_group(Qs)
    f.minimal_order = Qs.order
    out = out_of(Qs)
    table = character_table(out.group)
    orbits = _galois_orbits(table)
    # measured traces tr(E · Indinf_i Iso_α Defres_j) against χ_V(ᾱ π(E_j P_i))
    measured = []
    predicted = {tuple(o): [] for o in orbits}
    pi_cache, wa_cache = {}, {}
    for L, tag in layer_ops:
        t, i, j, w = tag
        if t != active:
            continue
        measured.append(trace(matmul(E, L)))
        if (i, j) not in pi_cache:
            prod = compose(qt.E_elem[j], qt.P_elem[i])
            acc = {}
            for key, c in prod.coeffs.items():
                o = pi_out_key(Qs, key)
                if o is not None:
                    acc[o] = acc.get(o, 0) + c
            pi_cache[(i, j)] = acc
        if w not in wa_cache:
            wa_cache[w] = next(iter(pi_out(iso(Qs, Qs, qt.W_words[w])).coeffs))
        wa = wa_cache[w]
        for o in orbits:
            val = ZERO
            for wo, c in pi_cache[(i, j)].items():
                prod_w = out.group.mul[wa][wo]
                for ci in o:
                    val = val + table.value(table[ci], prod_w) * c
            predicted[tuple(o)].append(val)
    cands = []
    for o, pv in predicted.items():
        nonzero = [(x, y) for x, y in zip(measured, pv) if y != 0 or x != 0]
        if not nonzero:
            continue
        if any(y == 0 for x, y in nonzero):
            continue
        ratios = {Fraction(x) / y.to_fraction() if isinstance(y, Cyclotomic) else Fraction(x) / y
                  for x, y in nonzero}
        if len(ratios) == 1:
            cands.append("/".join(table[c].label for c in o))
    if len(cands) > 1:
        # traces through Q* alone cannot separate these; fall back to dimension data
        from .functor import simple_dim
        by_label = {table[c].label: c for c in range(len(table))}
        kept = [c for c in cands
                if all(simple_dim(Qs, table[by_label[lab]], G) == f.dim for lab in c.split("/"))]
        if kept:
            cands = kept
    f.candidates = cands
    if len(cands) == 1:
        f.label = f"S_{{{f.minimal_group},{cands[0]}}}"
    else:
        f.label = f"S_{{{f.minimal_group},?}}" + (" (ambiguous)" if cands else " (unmatched)")

