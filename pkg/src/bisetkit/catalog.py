"""Named groups and the group-spec grammar.

    C<n>  D<n> (order n)  Q<n> (dicyclic, order n)  S<n>  A<n>  V4
    SL(2,q)  PSL(2,q)  GL(n,p)  products joined by 'x'
    perm:(1 2 3)(4 5),(1 2)      perm(6):(1 2)     raw cycle generators
"""

from __future__ import annotations

import itertools
import re

from .groups import GroupError, PermutationGroup, direct_product, parse_cycles


class GroupSpecError(GroupError):
    pass


# ---- finite fields ----

def _factor_prime_power(q):
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


class GF:
    """GF(p^k) with elements encoded as integers 0..q-1 (base-p digit vectors)."""

    def __init__(self, q):
        pk = _factor_prime_power(q)
        if pk is None:
            raise GroupSpecError(f"{q} is not a prime power")
        self.p, self.k = pk
        self.q = q
        self.modulus = self._irreducible() if self.k > 1 else None
        self._mul = [[self._slow_mul(a, b) for b in range(q)] for a in range(q)]
        self._add = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
        self._neg = [self._add[a].index(0) for a in range(q)]

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, ds):
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _slow_add(self, a, b):
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _polymulmod(self, a, b, mod):
        p = self.p
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        k = len(mod) - 1  # mod is monic, low degree first
        for d in range(len(prod) - 1, k - 1, -1):
            c = prod[d]
            if c:
                for i in range(k + 1):
                    prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
        return (prod + [0] * k)[:k]

    def _slow_mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        return self._encode(self._polymulmod(self._digits(a), self._digits(b), self.modulus))

    def _irreducible(self):
        p, k = self.p, self.k
        for tail in itertools.product(range(p), repeat=k):
            poly = list(tail) + [1]
            if poly[0] == 0:
                continue
            # no roots and no factors of degree <= k/2: brute force over monic divisors
            if not any(self._divides(list(t) + [1], poly) for d in range(1, k // 2 + 1)
                       for t in itertools.product(range(p), repeat=d)):
                return poly
        raise GroupSpecError("no irreducible polynomial found")

    def _divides(self, d, f):
        p = self.p
        f = f[:]
        while len(f) >= len(d):
            c = f[-1]
            shift = len(f) - len(d)
            for i, x in enumerate(d):
                f[shift + i] = (f[shift + i] - c * x) % p
            f.pop()
        return not any(f)

    def add(self, a, b):
        return self._add[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        return self._mul[a].index(1)


def _mat_vec(F, m, v):
    out = []
    for row in m:
        s = 0
        for x, y in zip(row, v):
            s = F.add(s, F.mul(x, y))
        out.append(s)
    return tuple(out)


def _matrix_action(F, n, mats, projective=False):
    vecs = [v for v in itertools.product(range(F.q), repeat=n) if any(v)]
    if projective:
        def normal(v):
            lead = next(x for x in v if x)
            li = F.inv(lead)
            return tuple(F.mul(li, x) for x in v)
        pts = sorted({normal(v) for v in vecs})
        pos = {v: i for i, v in enumerate(pts)}
        return [tuple(pos[normal(_mat_vec(F, m, v))] for v in pts) for m in mats], len(pts)
    pos = {v: i for i, v in enumerate(vecs)}
    return [tuple(pos[_mat_vec(F, m, v)] for v in vecs) for m in mats], len(vecs)


def _sl2_generators(F):
    mats = []
    for a in range(1, F.q):
        mats.append(((1, a), (0, 1)))
        mats.append(((1, 0), (a, 1)))
    return mats


def _gl_generators(F, n):
    mats = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[int(r == c) for c in range(n)] for r in range(n)]
                m[i][j] = 1
                mats.append(tuple(map(tuple, m)))
    for a in range(2, F.q):
        m = [[int(r == c) for c in range(n)] for r in range(n)]
        m[0][0] = a
        mats.append(tuple(map(tuple, m)))
    return mats


# ---- individual families ----

def cyclic(n):
    if n < 1:
        raise GroupSpecError("cyclic group needs n >= 1")
    if n == 1:
        return PermutationGroup([], degree=1, name="C1")
    return PermutationGroup([tuple(list(range(1, n)) + [0])], name=f"C{n}")


def dihedral(order):
    if order < 2 or order % 2:
        raise GroupSpecError(f"dihedral order must be even, got {order}")
    m = order // 2
    if m == 1:
        return cyclic(2)
    if m == 2:
        return klein()
    rot = tuple(list(range(1, m)) + [0])
    ref = tuple((-i) % m for i in range(m))
    return PermutationGroup([rot, ref], name=f"D{order}")


def klein():
    return PermutationGroup([(1, 0, 3, 2), (2, 3, 0, 1)], name="V4")


def dicyclic(order):
    """<a, b | a^(2m) = 1, b^2 = a^m, b a b^-1 = a^-1> in its regular representation."""
    if order < 4 or order % 4:
        raise GroupSpecError(f"quaternion-type order must be a multiple of 4, got {order}")
    m = order // 4
    n2 = 2 * m
    elems = [(i, j) for j in range(2) for i in range(n2)]
    pos = {e: k for k, e in enumerate(elems)}

    def mul(x, y):
        i, j = x
        k, l = y
        e = (i + (k if j == 0 else -k)) % n2
        f = j + l
        if f == 2:
            e = (e + m) % n2
            f = 0
        return (e, f)

    gens = [tuple(pos[mul(g, e)] for e in elems) for g in ((1, 0), (0, 1))]
    return PermutationGroup(gens, name=f"Q{order}")


def symmetric(n):
    if n < 1:
        raise GroupSpecError("symmetric group needs n >= 1")
    if n == 1:
        return PermutationGroup([], degree=1, name="S1")
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return PermutationGroup(gens, name=f"S{n}")


def alternating(n):
    if n < 1:
        raise GroupSpecError("alternating group needs n >= 1")
    if n < 3:
        return PermutationGroup([], degree=max(n, 1), name=f"A{n}")
    gens = []
    for k in range(2, n):
        img = list(range(n))
        img[0], img[1], img[k] = 1, k, 0
        gens.append(tuple(img))
    return PermutationGroup(gens, name=f"A{n}")


def sl2(q):
    F = GF(q)
    gens, _ = _matrix_action(F, 2, _sl2_generators(F))
    return PermutationGroup(gens, name=f"SL(2,{q})")


def psl2(q):
    F = GF(q)
    gens, _ = _matrix_action(F, 2, _sl2_generators(F), projective=True)
    return PermutationGroup(gens, name=f"PSL(2,{q})")


def gl(n, q):
    F = GF(q)
    if F.k != 1:
        raise GroupSpecError("GL(n,q) is only provided for prime q")
    gens, _ = _matrix_action(F, n, _gl_generators(F, n))
    return PermutationGroup(gens, name=f"GL({n},{q})")


# ---- grammar ----

_SIMPLE = re.compile(r"^([CDQSA])(\d+)$")
_MATRIX = re.compile(r"^(SL|PSL|GL)\((\d+),(\d+)\)$")
_PERM = re.compile(r"^perm(?:\((\d+)\))?:(.*)$", re.S)


def _split_top(text, sep):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _make_factor(spec):
    s = spec.strip()
    if s in ("1", "C1", "TRIVIAL"):
        return cyclic(1)
    if s == "V4":
        return klein()
    m = _SIMPLE.match(s)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"C": cyclic, "D": dihedral, "Q": dicyclic,
                "S": symmetric, "A": alternating}[kind](n)
    m = _MATRIX.match(s.replace(" ", ""))
    if m:
        kind, n, q = m.group(1), int(m.group(2)), int(m.group(3))
        if kind == "GL":
            return gl(n, q)
        if n != 2:
            raise GroupSpecError(f"{kind}({n},{q}) is not in the catalog (only n = 2)")
        return sl2(q) if kind == "SL" else psl2(q)
    raise GroupSpecError(f"unknown group name {spec!r}")


def make_group(spec, max_order=None):
    """Build a group from a catalog spec or raw cycle generators."""
    from . import config
    text = spec.strip()
    if not text:
        raise GroupSpecError("empty group spec")
    old = config.MAX_ORDER
    if max_order is not None:
        config.MAX_ORDER = max_order
    try:
        m = _PERM.match(text)
        if m:
            degree = int(m.group(1)) if m.group(1) else None
            body = m.group(2).strip()
            gens_txt = [g for g in _split_top(body, ",") if g.strip()]
            gens = [parse_cycles(g, degree) for g in gens_txt]
            if degree is None:
                degree = max((len(g) for g in gens), default=1)
            gens = [tuple(g) + tuple(range(len(g), degree)) for g in gens]
            G = PermutationGroup(gens, degree=degree, name=text)
        else:
            factors = _split_top(text.upper(), "X")
            groups = [_make_factor(f) for f in factors]
            G = groups[0]
            for H in groups[1:]:
                G = direct_product(G, H)
            if len(groups) > 1:
                G.name = "x".join(g.name for g in groups)
    finally:
        config.MAX_ORDER = old
    G.spec = text
    return G


# ---- naming small groups up to isomorphism ----

_SMALL_NAMES = ["C1", "C2", "C3", "V4", "C4", "C5", "C6", "S3", "C7", "C8", "C2xC4", "C2xC2xC2",
                "D8", "Q8", "C9", "C3xC3", "C10", "D10", "C11", "C12", "C2xC6", "D12", "A4", "Q12",
                "C13", "C14", "D14", "C15", "C16", "S4", "SL(2,3)", "D16", "Q16", "C2xA4",
                "C2xD8", "C2xQ8", "C2xC2xC2xC2", "C4xC4", "C2xC8", "D18", "C3xS3",
                "D20", "Q20", "A5", "S5", "SL(2,5)", "GL(3,2)", "C2xC2xC4", "D24", "C3xQ8",
                "C3xC2xC2", "C4xS3", "C2xD12", "C3xD8", "C6xC6"]
_named = {}


def _frobenius(p, q):
    """C_p ⋊ C_q with q | p-1, acting on p points."""
    g = next(g for g in range(2, p)
             if all(pow(g, (p - 1) // d, p) != 1 for d in _prime_divisors(p - 1)))
    a = pow(g, (p - 1) // q, p)
    return PermutationGroup([tuple((i + 1) % p for i in range(p)),
                             tuple(i * a % p for i in range(p))],
                            name=f"C{p}:C{q}")


def _prime_divisors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _named_groups():
    if not _named:
        from . import config
        old = config.MAX_ORDER
        config.MAX_ORDER = max(old, 200)
        try:
            for nm in _SMALL_NAMES:
                G = make_group(nm)
                _named.setdefault(G.order, []).append((nm, G))
            for p, q in ((5, 4), (7, 3), (7, 6), (11, 5), (13, 3), (13, 4)):
                G = _frobenius(p, q)
                _named.setdefault(G.order, []).append((G.name, G))
            G = _affine_c2cube_c7()
            _named.setdefault(G.order, []).append((G.name, G))
        finally:
            config.MAX_ORDER = old
    return _named


def _affine_c2cube_c7():
    # translations and a Singer cycle of GF(8) acting on the 8 field elements
    F = GF(8)
    x = 2  # the class of the polynomial variable
    trans = tuple(F.add(v, 1) for v in range(8))
    mult = tuple(F.mul(x, v) for v in range(8))
    return PermutationGroup([trans, mult], name="C2^3:C7")


def describe_group(G):
    """A short name for G up to isomorphism, or 'order <n>' if none is known."""
    from .groups import is_isomorphic
    if G.order == 1:
        return "1"
    for nm, K in _named_groups().get(G.order, []):
        if is_isomorphic(G, K):
            return nm
    if G.is_abelian and G.is_cyclic_subgroup(G.all):
        return f"C{G.order}"
    return f"[order {G.order}]"
