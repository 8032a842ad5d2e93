"""Transitive bisets as Goursat data, and the double Burnside group kB(X, Y).

A transitive (X, Y)-biset is (X × Y)/L for a subgroup L ≤ X × Y, with the
action (x, y)·u = x u y⁻¹.  L is described by its Goursat data: the left
section (J, K) of X, the right section (S, T) of Y and an isomorphism
σ: S/T → J/K, so that L = {(x, y) : y ∈ S, σ(yT) = xK}.

Up to X × Y-conjugacy such an L is determined by the section classes (i, j)
and by σ modulo the images of the section normalizers; a ``BisetKey``
stores exactly that, with σ written on the fixed section quotient groups.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import config
from .cyclotomic import Cyclotomic
from .groups import GroupError, automorphisms, find_isomorphism, invariants, out_group


class BisetError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class BisetKey:
    """Canonical transitive biset: section classes of X and Y plus σ: Q_j → Q_i."""
    i: int
    j: int
    phi: tuple


@dataclass
class GoursatBiset:
    """Goursat data of one subgroup L ≤ X × Y (not necessarily canonical)."""
    X: object
    Y: object
    J: frozenset
    K: frozenset
    S: frozenset
    T: frozenset
    left_of: dict    # y ∈ S  -> some x with (x, y) ∈ L
    right_of: dict   # x ∈ J  -> some y with (x, y) ∈ L

    def subgroup(self):
        """L itself as a set of pairs (small groups only)."""
        mX = self.X.mul
        return frozenset((mX[x0][k], y) for y, x0 in self.left_of.items() for k in self.K)

    def opposite(self):
        return GoursatBiset(self.Y, self.X, self.S, self.T, self.J, self.K,
                            dict(self.right_of), dict(self.left_of))

    @property
    def is_bifree(self):
        return len(self.K) == 1 and len(self.T) == 1


_lock = threading.RLock()
_canon_memo = {}
_compose_memo = {}
_keep_alive = {}


def _gid(G):
    _keep_alive[id(G)] = G
    return id(G)


# ---- per-group section data ----

def section_quotient(G, i):
    return G.section_quotient(i)


def gamma_generators(G, i):
    """Generators of the image of N_G(S, T) in Aut(S/T), as image tuples on S/T."""
    cache = G._aux.setdefault("gamma_gens", {})
    got = cache.get(i)
    if got is not None:
        return got
    sp = G.section_classes()[i]
    Qd = G.quotient(sp.S, sp.T)
    N = G.section_normalizer(sp.S, sp.T)
    ident = tuple(range(Qd.group.order))
    gens = []
    for g in G.subgroup_generators(N):
        img = tuple(Qd.proj[G.conj(g, s)] for s in Qd.lift)
        if img != ident and img not in gens:
            gens.append(img)
    cache[i] = gens
    return gens


def quotient_iso_class(G, i):
    """Invariants of the section quotient, used to bucket candidate isomorphisms."""
    cache = G._aux.setdefault("qinv", {})
    if i not in cache:
        cache[i] = invariants(G.section_quotient(i).group)
    return cache[i]


def quotient_isomorphism(X, i, Y, j):
    """An isomorphism Q_j(Y) → Q_i(X), or None."""
    key = (_gid(X), i, _gid(Y), j)
    with _lock:
        memo = _canon_memo.setdefault("qiso", {})
        if key in memo:
            return memo[key]
    if quotient_iso_class(X, i) != quotient_iso_class(Y, j):
        res = None
    else:
        res = find_isomorphism(Y.section_quotient(j).group, X.section_quotient(i).group)
    with _lock:
        memo[key] = res
    return res


# ---- canonical forms ----

def canonical_phi(X, i, Y, j, phi):
    """Least element of Γ_i ∘ phi ∘ Γ_j (Γ = images of section normalizers)."""
    mkey = (_gid(X), i, _gid(Y), j)
    memo = _canon_memo.get(mkey)
    if memo is None:
        with _lock:
            memo = _canon_memo.setdefault(mkey, {})
    got = memo.get(phi)
    if got is not None:
        return got
    GX = gamma_generators(X, i)
    GY = gamma_generators(Y, j)
    orbit = {phi}
    frontier = [phi]
    while frontier:
        nxt = []
        for f in frontier:
            for g in GX:
                f2 = tuple(g[v] for v in f)
                if f2 not in orbit:
                    orbit.add(f2)
                    nxt.append(f2)
            for h in GY:
                f2 = tuple(f[q] for q in h)
                if f2 not in orbit:
                    orbit.add(f2)
                    nxt.append(f2)
        frontier = nxt
    m = min(orbit)
    for f in orbit:
        memo[f] = m
    return m


def canonicalize(b: GoursatBiset) -> BisetKey:
    X, Y = b.X, b.Y
    i, gx = X.locate_section(b.J, b.K)
    j, gy = Y.locate_section(b.S, b.T)
    QX = X.section_quotient(i)
    QY = Y.section_quotient(j)
    igy = Y.inv[gy]
    mX, mY = X.mul, Y.mul
    igx = X.inv[gx]
    phi = []
    for y0 in QY.lift:
        y = mY[mY[igy][y0]][gy]
        x = b.left_of[y]
        phi.append(QX.proj[mX[mX[gx][x]][igx]])
    phi = tuple(phi)
    return BisetKey(i, j, canonical_phi(X, i, Y, j, phi))


def realize(X, Y, key: BisetKey) -> GoursatBiset:
    """Goursat data of the class representative for ``key``."""
    cache = X._aux.setdefault("realize", {})
    ck = (_gid(Y), key)
    got = cache.get(ck)
    if got is not None:
        return got
    spX = X.section_classes()[key.i]
    spY = Y.section_classes()[key.j]
    QX = X.section_quotient(key.i)
    QY = Y.section_quotient(key.j)
    phi = key.phi
    inv = [0] * len(phi)
    for a, b in enumerate(phi):
        inv[b] = a
    left_of = {y: QX.lift[phi[QY.proj[y]]] for y in spY.S}
    right_of = {x: QY.lift[inv[QX.proj[x]]] for x in spX.S}
    out = GoursatBiset(X, Y, spX.S, spX.T, spY.S, spY.T, left_of, right_of)
    cache[ck] = out
    return out


# ---- basis enumeration ----

def basis_keys(X, Y, right_section=None, left_section=None, bifree=False):
    """All canonical transitive (X, Y)-bisets, optionally restricted by section classes."""
    ck = ("basis", _gid(Y), right_section, left_section, bifree)
    cache = X._aux.setdefault("basis", {})
    if ck in cache:
        return cache[ck]
    secX = X.section_classes()
    secY = Y.section_classes()
    keys = []
    for j, spY in enumerate(secY):
        if right_section is not None and j != right_section:
            continue
        if bifree and len(spY.T) != 1:
            continue
        for i, spX in enumerate(secX):
            if left_section is not None and i != left_section:
                continue
            if bifree and len(spX.T) != 1:
                continue
            if spX.index != spY.index:
                continue
            sigma0 = quotient_isomorphism(X, i, Y, j)
            if sigma0 is None:
                continue
            QY = Y.section_quotient(j).group
            found = set()
            for alpha in automorphisms(QY):
                phi = tuple(sigma0[alpha[q]] for q in range(QY.order))
                found.add(canonical_phi(X, i, Y, j, phi))
            keys.extend(BisetKey(i, j, f) for f in sorted(found))
    cache[ck] = keys
    return keys


def count_basis(X, Y):
    return len(basis_keys(X, Y))


# ---- composition ----

def compose_keys(X, Y, Z, kL: BisetKey, kM: BisetKey) -> Counter:
    """(X×Y)/L ×_Y (Y×Z)/M as a multiset of canonical (X, Z)-bisets."""
    ck = (_gid(X), _gid(Y), _gid(Z), kL, kM)
    got = _compose_memo.get(ck)
    if got is not None:
        return got
    config.STATS["compositions"] += 1
    L = realize(X, Y, kL)
    M = realize(Y, Z, kM)
    out = Counter()
    for t in Y.double_cosets(L.S, M.J):
        out[canonicalize(star(L, M, t))] += 1
    _compose_memo[ck] = out
    return out


def star(L: GoursatBiset, M: GoursatBiset, t=0) -> GoursatBiset:
    """Goursat data of L ∗ ^(t,1)M."""
    X, Y, Z = L.X, L.Y, M.Y
    mX, mY, mZ = X.mul, Y.mul, Z.mul
    it = Y.inv[t]
    left_new = {}
    right_new = {}
    Kn = set()
    Tn = set()
    KL, TM = list(L.K), list(M.T)
    EM, FM = M.J, M.K
    DL = L.T
    for y, x0 in L.left_of.items():
        yb = mY[mY[it][y]][t]
        if yb not in EM:
            continue
        z0 = M.right_of[yb]
        for h in TM:
            left_new[mZ[z0][h]] = x0
        for k in KL:
            right_new[mX[x0][k]] = z0
        if yb in FM:
            Kn.update(mX[x0][k] for k in KL)
        if y in DL:
            Tn.update(mZ[z0][h] for h in TM)
    return GoursatBiset(X, Z, frozenset(right_new), frozenset(Kn), frozenset(left_new),
                        frozenset(Tn), left_new, right_new)


# ---- linear combinations ----

def _scalar(c):
    if isinstance(c, Cyclotomic):
        return c.to_fraction() if c.is_rational() else c
    return Fraction(c)


class BisetElem:
    """Element of kB(X, Y): finitely many canonical keys with nonzero coefficients."""

    __slots__ = ("X", "Y", "coeffs")

    def __init__(self, X, Y, coeffs=None):
        self.X = X
        self.Y = Y
        self.coeffs = {}
        if coeffs:
            for k, c in coeffs.items():
                c = _scalar(c)
                if c != 0:
                    self.coeffs[k] = c

    @classmethod
    def basis(cls, X, Y, key):
        return cls(X, Y, {key: 1})

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y)

    def _check(self, other):
        if not isinstance(other, BisetElem):
            raise TypeError("expected a BisetElem")
        if other.X is not self.X or other.Y is not self.Y:
            raise BisetError("ambient groups differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return BisetElem(self.X, self.Y, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, c):
        if isinstance(c, BisetElem):
            return NotImplemented
        return BisetElem(self.X, self.Y, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, BisetElem):
            return compose(self, other)
        return other * self if not isinstance(other, BisetElem) else NotImplemented

    def __eq__(self, other):
        if not isinstance(other, BisetElem):
            return NotImplemented
        return self.X is other.X and self.Y is other.Y and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self):
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])

    def __repr__(self):
        terms = " + ".join(f"{c}*{describe_key(self.X, self.Y, k)}" for k, c in self.items())
        return f"<BisetElem {terms or '0'}>"


def compose(a: BisetElem, b: BisetElem) -> BisetElem:
    if a.Y is not b.X:
        raise BisetError("middle ambient groups differ")
    X, Y, Z = a.X, a.Y, b.Y
    out = {}
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            c = ca * cb
            for k, m in compose_keys(X, Y, Z, ka, kb).items():
                out[k] = out.get(k, 0) + c * m
    return BisetElem(X, Z, out)


def opposite_key(X, Y, key: BisetKey) -> BisetKey:
    """Key of the opposite (Y, X)-biset."""
    inv = [0] * len(key.phi)
    for a, b in enumerate(key.phi):
        inv[b] = a
    return BisetKey(key.j, key.i, canonical_phi(Y, key.j, X, key.i, tuple(inv)))


def opposite(b: BisetElem) -> BisetElem:
    return BisetElem(b.Y, b.X, {opposite_key(b.X, b.Y, k): c for k, c in b.coeffs.items()})


# ---- elementary bisets ----

def _from_goursat(g: GoursatBiset) -> BisetElem:
    return BisetElem.basis(g.X, g.Y, canonicalize(g))


def _require_section(G, S, T):
    S, T = frozenset(S), frozenset(T)
    if not G.is_subgroup(S) or not G.is_subgroup(T) or not T <= S:
        raise BisetError("not a section")
    if any(G.conjugate(T, s) != T for s in G.subgroup_generators(S)):
        raise BisetError("T is not normal in S")
    return S, T


def quotient_model(G, S, T):
    """The group S/T used as an ambient, with its projection from S."""
    S, T = _require_section(G, S, T)
    return G.quotient(S, T)


def subgroup_model(G, A):
    """A as an ambient group, with its embedding into G."""
    return G.subgroup_group(frozenset(A))


def indinf(G, S, T):
    """Indinf_{S/T}^G ∈ kB(G, S/T)."""
    Qd = quotient_model(G, S, T)
    Q = Qd.group
    left_of = {q: Qd.lift[q] for q in range(Q.order)}
    right_of = {s: Qd.proj[s] for s in Qd.section.S}
    return _from_goursat(GoursatBiset(G, Q, Qd.section.S, Qd.section.T, Q.all, Q.trivial,
                                      left_of, right_of))


def defres(G, S, T):
    return opposite(indinf(G, S, T))


def ind(G, A):
    """Ind_A^G ∈ kB(G, A) with A as its own group (see ``subgroup_model``)."""
    A = frozenset(A)
    if not G.is_subgroup(A):
        raise BisetError("not a subgroup")
    sub, emb = subgroup_model(G, A)
    left_of = {a: emb[a] for a in range(sub.order)}
    right_of = {emb[a]: a for a in range(sub.order)}
    return _from_goursat(GoursatBiset(G, sub, A, G.trivial, sub.all, sub.trivial, left_of, right_of))


def res(G, A):
    return opposite(ind(G, A))


def inf(G, N):
    return indinf(G, G.all, N)


def deflation(G, N):
    return opposite(inf(G, N))


def iso(H1, H2, sigma):
    """Iso_σ ∈ kB(H2, H1) for an isomorphism σ: H1 → H2 given as an image tuple."""
    sigma = tuple(sigma)
    if len(sigma) != H1.order or H1.order != H2.order or len(set(sigma)) != H2.order:
        raise BisetError("σ is not a bijection")
    m1, m2 = H1.mul, H2.mul
    gens = H1.generators_idx
    if any(sigma[m1[a][b]] != m2[sigma[a]][sigma[b]] for a in gens for b in range(H1.order)):
        raise BisetError("σ is not a homomorphism")
    left_of = {h: sigma[h] for h in range(H1.order)}
    right_of = {sigma[h]: h for h in range(H1.order)}
    return _from_goursat(GoursatBiset(H2, H1, H2.all, H2.trivial, H1.all, H1.trivial,
                                      left_of, right_of))


def identity(H):
    return iso(H, H, tuple(range(H.order)))


def conj(G, A, g):
    """Conj_{g,A}: the (gAg⁻¹, A)-biset of conjugation by g, both as own groups."""
    A = frozenset(A)
    B = G.conjugate(A, g)
    subA, embA = subgroup_model(G, A)
    subB, embB = subgroup_model(G, B)
    posB = {x: i for i, x in enumerate(embB)}
    sigma = tuple(posB[G.conj(g, embA[a])] for a in range(subA.order))
    return iso(subA, subB, sigma)


def elementary(kind, G, *data):
    kind = kind.lower()
    table = {"ind": ind, "res": res, "inf": inf, "def": deflation, "indinf": indinf,
             "defres": defres}
    if kind in table:
        return table[kind](G, *data)
    if kind == "iso":
        return iso(G, *data)
    if kind == "conj":
        return conj(G, *data)
    raise BisetError(f"unknown elementary biset {kind!r}")


# ---- projection to kOut(H) ----

class OutAlgebraElem:
    """Element of kOut(H), keyed by Out(H) element indices."""

    def __init__(self, out, coeffs=None):
        self.out = out
        self.coeffs = {w: c for w, c in (coeffs or {}).items() if c != 0}

    def __eq__(self, other):
        return isinstance(other, OutAlgebraElem) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return OutAlgebraElem(self.out, out)

    def __mul__(self, other):
        m = self.out.group.mul
        acc = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                w = m[a][b]
                acc[w] = acc.get(w, 0) + ca * cb
        return OutAlgebraElem(self.out, acc)

    def __repr__(self):
        return f"<OutAlgebraElem {dict(sorted(self.coeffs.items()))}>"


def model(H):
    """The full section quotient H/1, the copy of H in which σ's are written."""
    return H.section_quotient(H.full_section_index()).group


def out_of(H):
    return out_group(model(H))


def pi_out_key(H, key: BisetKey):
    """Out(H) index of a full-section key, or None if the biset lies in kI(H, H)."""
    f = H.full_section_index()
    if key.i != f or key.j != f:
        return None
    return out_of(H).out_class(key.phi)


def pi_out(b: BisetElem) -> OutAlgebraElem:
    if b.X is not b.Y:
        raise BisetError("π is only defined on kB(H, H)")
    H = b.X
    acc = {}
    for k, c in b.coeffs.items():
        w = pi_out_key(H, k)
        if w is not None:
            acc[w] = acc.get(w, 0) + c
    return OutAlgebraElem(out_of(H), acc)


def out_iso(H, w):
    """Iso_ω ∈ kB(H, H) for an Out(H) element index ω."""
    f = H.full_section_index()
    phi = tuple(out_of(H).representative(w))
    return BisetElem.basis(H, H, BisetKey(f, f, canonical_phi(H, f, H, f, phi)))


# ---- labels ----

def section_label(G, i):
    from .catalog import describe_group
    cache = G._aux.setdefault("section_label", {})
    if i in cache:
        return cache[i]
    sp = G.section_classes()[i]
    top = describe_group(G.subgroup_group(sp.S)[0]) if len(sp.S) < G.order else "G"
    bot = describe_group(G.subgroup_group(sp.T)[0]) if len(sp.T) > 1 else "1"
    cache[i] = (top, bot)
    return cache[i]


def _side(G, i, kind_full, kind_sub, kind_quot, kind_both):
    sp = G.section_classes()[i]
    top, bot = section_label(G, i)
    if len(sp.T) == 1 and len(sp.S) == G.order:
        return ""
    if len(sp.T) == 1:
        return f"{kind_sub}[{top}#{G.locate_subgroup(sp.S)[0]}]"
    if len(sp.S) == G.order:
        return f"{kind_quot}[G/{bot}#{i}]"
    return f"{kind_both}[{top}/{bot}#{i}]"


def describe_key(X, Y, key: BisetKey):
    left = _side(X, key.i, "", "Ind", "Inf", "Indinf")
    right = _side(Y, key.j, "", "Res", "Def", "Defres")
    same = [k for k in basis_keys(X, Y, right_section=key.j, left_section=key.i)]
    mid = f"Iso<{same.index(key)}>" if len(same) > 1 and key in same else ""
    parts = [p for p in (left, mid, right) if p]
    return "·".join(parts) if parts else "Id"
