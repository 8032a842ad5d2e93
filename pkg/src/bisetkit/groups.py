"""Finite permutation groups.

Elements are stored once, as image tuples, and addressed everywhere else by
their index in ``G.elements``; index 0 is always the identity.  Subgroups are
frozensets of element indices.  The product ``mul[a][b]`` is the composite
permutation "apply b, then a".
"""

from __future__ import annotations

import itertools
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, lcm

import numpy as np

from . import config


class GroupError(ValueError):
    pass


class OrderBoundError(GroupError):
    pass


def compose(p, q):
    """p∘q as image tuples."""
    return tuple(p[i] for i in q)


def invert(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def parse_cycles(text, degree=None):
    """Parse 1-based cycle notation such as ``(1 2 3)(4 5)``."""
    text = text.strip()
    cycles = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch != "(":
            raise GroupError(f"malformed cycle at position {pos}: {text!r}")
        end = text.find(")", pos)
        if end < 0:
            raise GroupError(f"unclosed cycle at position {pos}: {text!r}")
        body = text[pos + 1:end].replace(",", " ").split()
        try:
            pts = [int(x) for x in body]
        except ValueError:
            raise GroupError(f"non-integer point in cycle at position {pos}: {text!r}") from None
        if any(p < 1 for p in pts) or len(set(pts)) != len(pts):
            raise GroupError(f"bad cycle at position {pos}: {text!r}")
        cycles.append(pts)
        pos = end + 1
    top = max((max(c) for c in cycles if c), default=1)
    if degree is None:
        degree = top
    elif top > degree:
        raise GroupError(f"point {top} exceeds declared degree {degree}")
    img = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return tuple(img)


@dataclass(frozen=True)
class SectionPair:
    """A section (S, T) of ``ambient``: T is normal in S."""
    S: frozenset
    T: frozenset
    ambient: "PermutationGroup" = field(compare=False, hash=False, repr=False)

    @property
    def index(self):
        return len(self.S) // len(self.T)


@dataclass
class QuotientGroup:
    """S/T realised as the left-regular permutation group on T-cosets."""
    section: SectionPair
    group: "PermutationGroup"
    proj: dict      # ambient element of S -> quotient index
    lift: list      # quotient index -> representative in S


class PermutationGroup:
    def __init__(self, generators=(), degree=None, name=None, elements=None, max_order=None):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if gens:
                degree = len(gens[0])
            elif elements:
                degree = len(elements[0])
            else:
                degree = 1
        if any(len(g) != degree for g in gens):
            raise GroupError("generators have different degrees")
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise GroupError(f"not a permutation: {g}")
        self.degree = degree
        self.name = name
        bound = config.MAX_ORDER if max_order is None else max_order
        ident = tuple(range(degree))
        if elements is None:
            elems = [ident]
            seen = {ident: 0}
            i = 0
            while i < len(elems):
                x = elems[i]
                for g in gens:
                    y = compose(g, x)
                    if y not in seen:
                        seen[y] = len(elems)
                        elems.append(y)
                        if len(elems) > bound:
                            raise OrderBoundError(
                                f"group {name or ''} exceeds the order bound {bound}")
                i += 1
        else:
            elems = [tuple(e) for e in elements]
            if elems[0] != ident:
                k = elems.index(ident)
                elems[0], elems[k] = elems[k], elems[0]
            if len(elems) > bound:
                raise OrderBoundError(f"group {name or ''} exceeds the order bound {bound}")
            seen = {e: i for i, e in enumerate(elems)}
        self.generators = gens
        self.elements = elems
        self.index = seen
        self.order = len(elems)
        self._build_table()
        self._lock = threading.RLock()
        self._aux = {}

    def __repr__(self):
        return f"<PermutationGroup {self.name or '?'} order={self.order}>"

    def _build_table(self):
        n = self.order
        P = np.array(self.elements, dtype=np.int32).reshape(n, self.degree)
        idx = self.index
        table = [None] * n
        cols = []
        for b in range(n):
            comp = P[:, P[b]]
            cols.append([idx[tuple(r)] for r in comp.tolist()])
        for a in range(n):
            table[a] = [cols[b][a] for b in range(n)]
        self.mul = table
        self.inv = [row.index(0) for row in table]

    # ---- element level ----

    @cached_property
    def elem_orders(self):
        out = [1] * self.order
        for x in range(1, self.order):
            k, y = 1, x
            while y:
                y = self.mul[y][x]
                k += 1
            out[x] = k
        return out

    @cached_property
    def exponent(self):
        return lcm(*self.elem_orders)

    def power(self, x, k):
        k %= self.elem_orders[x]
        y = 0
        for _ in range(k):
            y = self.mul[y][x]
        return y

    def conj(self, g, x):
        return self.mul[self.mul[g][x]][self.inv[g]]

    def conjugate(self, A, g):
        m, ig = self.mul, self.inv[g]
        row = m[g]
        return frozenset(m[row[a]][ig] for a in A)

    @cached_property
    def is_abelian(self):
        m = self.mul
        gens = self.generators_idx
        return all(m[a][b] == m[b][a] for a in gens for b in gens)

    @cached_property
    def all(self):
        return frozenset(range(self.order))

    @cached_property
    def trivial(self):
        return frozenset((0,))

    def closure(self, gens, start=None):
        """Subgroup generated by ``gens`` (indices), optionally seeded by a subgroup."""
        m = self.mul
        gens = [g for g in gens if g]
        elems = set(start) if start else {0}
        frontier = list(elems)
        gset = list(gens)
        if start:
            gset = list(self.subgroup_generators(frozenset(start))) + gset
        while frontier:
            new = []
            for x in frontier:
                row = m[x]
                for g in gset:
                    y = row[g]
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    def subgroup_generators(self, A):
        """A short generating list for A, largest element orders first."""
        cache = self._aux.setdefault("gens", {})
        got = cache.get(A)
        if got is not None:
            return got
        orders = self.elem_orders
        cand = sorted(A, key=lambda x: (-orders[x], x))
        gens, cur = [], frozenset((0,))
        for x in cand:
            if len(cur) == len(A):
                break
            if x not in cur:
                gens.append(x)
                cur = self._closure_plain(gens)
        gens = tuple(gens)
        cache[A] = gens
        return gens

    def _closure_plain(self, gens):
        m = self.mul
        elems = {0}
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                row = m[x]
                for g in gens:
                    y = row[g]
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    def is_subgroup(self, A):
        m = self.mul
        return 0 in A and all(m[a][b] in A for a in A for b in A)

    def normalizer(self, A, within=None):
        cache = self._aux.setdefault("norm", {})
        key = (A, within)
        if key in cache:
            return cache[key]
        gens = self.subgroup_generators(A)
        m, inv = self.mul, self.inv
        pool = range(self.order) if within is None else sorted(within)
        out = frozenset(g for g in pool
                        if all(m[m[g][a]][inv[g]] in A for a in gens))
        cache[key] = out
        return out

    def centralizer(self, A):
        gens = self.subgroup_generators(A)
        m = self.mul
        return frozenset(g for g in range(self.order) if all(m[g][a] == m[a][g] for a in gens))

    def is_normal(self, N, within=None):
        gens = self.subgroup_generators(within) if within is not None else (
            self.generators_idx)
        return all(self.conjugate(N, g) == N for g in gens)

    @cached_property
    def generators_idx(self):
        if self.generators:
            return tuple(self.index[g] for g in self.generators)
        return self.subgroup_generators(self.all)

    @cached_property
    def center(self):
        return self.centralizer(self.all)

    # ---- conjugacy classes of elements ----

    @cached_property
    def conjugacy_classes(self):
        """Classes ordered: identity, then by (element order, size, least member)."""
        seen = [False] * self.order
        classes = []
        gens = self.generators_idx
        for x in range(self.order):
            if seen[x]:
                continue
            cls = {x}
            frontier = [x]
            while frontier:
                new = []
                for y in frontier:
                    for g in gens:
                        z = self.conj(g, y)
                        if z not in cls:
                            cls.add(z)
                            new.append(z)
                frontier = new
            for y in cls:
                seen[y] = True
            classes.append(frozenset(cls))
        o = self.elem_orders
        classes.sort(key=lambda c: (o[min(c)], len(c), min(c)))
        return classes

    @cached_property
    def class_of(self):
        out = [0] * self.order
        for i, c in enumerate(self.conjugacy_classes):
            for x in c:
                out[x] = i
        return out

    # ---- subgroup lattice ----

    @cached_property
    def cyclic_subgroups(self):
        out = {}
        for x in range(self.order):
            C = self._closure_plain((x,))
            out.setdefault(C, x)
        return out

    def _lattice(self):
        with self._lock:
            lat = self._aux.get("lattice")
            if lat is not None:
                return lat
            from . import cache as _cache
            lat = _cache.load_lattice(self)
            if lat is None:
                lat = self._compute_lattice()
                _cache.store_lattice(self, lat)
            self._aux["lattice"] = lat
            return lat

    def _class_orbit(self, H):
        """All conjugates of H, each with an element g such that g·K·g^-1 = H."""
        orbit = {H: 0}
        m = self.mul
        for g in range(self.order):
            K = self.conjugate(H, g)
            if K not in orbit:
                orbit[K] = self.inv[g]
        return orbit

    def _compute_lattice(self):
        config.STATS["subgroup_enumerations"] += 1
        lookup = {}
        reps = []
        cyc = self.cyclic_subgroups
        # prime-power generated cyclic subgroups suffice as extension steps
        ppow = [x for C, x in cyc.items() if _is_prime_power(len(C))]
        queue = []

        def register(H):
            if H in lookup:
                return
            idx = len(reps)
            reps.append(H)
            for K, g in self._class_orbit(H).items():
                lookup[K] = (idx, g)
            queue.append(H)

        for C in sorted(cyc, key=lambda s: (len(s), sorted(s))):
            register(C)
        while queue:
            H = queue.pop(0)
            for x in ppow:
                if x in H:
                    continue
                K = self.closure((x,), start=H)
                register(K)
        order = sorted(range(len(reps)), key=lambda i: (len(reps[i]), sorted(reps[i])))
        remap = {old: new for new, old in enumerate(order)}
        reps = [reps[i] for i in order]
        lookup = {K: (remap[i], g) for K, (i, g) in lookup.items()}
        return {"reps": reps, "lookup": lookup}

    def subgroup_classes(self):
        return list(self._lattice()["reps"])

    def all_subgroups(self):
        return list(self._lattice()["lookup"])

    def locate_subgroup(self, A):
        """(class index, g) with g·A·g^-1 equal to the class representative."""
        return self._lattice()["lookup"][frozenset(A)]

    def subgroup_class_size(self, i):
        H = self.subgroup_classes()[i]
        return self.order // len(self.normalizer(H))

    def is_cyclic_subgroup(self, A):
        return any(self.elem_orders[a] == len(A) for a in A)

    # ---- sections ----

    def _sections(self):
        with self._lock:
            sec = self._aux.get("sections")
            if sec is not None:
                return sec
            reps = self.subgroup_classes()
            subs = self.all_subgroups()
            by_order = {}
            for K in subs:
                by_order.setdefault(len(K), []).append(K)
            classes = []
            normal_lookup = []   # per subgroup class: {T: (section idx, n in N_G(S))}
            for S in reps:
                NS = self.normalizer(S)
                sgens = self.subgroup_generators(S)
                ngens = self.subgroup_generators(NS)
                normals = []
                for d in sorted(by_order):
                    if len(S) % d:
                        continue
                    for T in by_order[d]:
                        if T <= S and all(self.conjugate(T, s) == T for s in sgens):
                            normals.append(T)
                normals.sort(key=lambda T: (len(T), sorted(T)))
                table = {}
                for T in normals:
                    if T in table:
                        continue
                    idx = len(classes)
                    classes.append(SectionPair(S, T, self))
                    # orbit of T under N_G(S), tracking a transporter back to T
                    orbit = {T: 0}
                    frontier = [T]
                    while frontier:
                        new = []
                        for U in frontier:
                            back = orbit[U]
                            for g in ngens:
                                V = self.conjugate(U, g)
                                if V not in orbit:
                                    orbit[V] = self.mul[back][self.inv[g]]
                                    new.append(V)
                        frontier = new
                    for U, n in orbit.items():
                        table[U] = (idx, n)
                normal_lookup.append(table)
            sec = {"classes": classes, "normal_lookup": normal_lookup}
            self._aux["sections"] = sec
            return sec

    def section_classes(self):
        return list(self._sections()["classes"])

    def locate_section(self, S, T):
        """(section class index, g) with g·(S,T)·g^-1 the class representative."""
        si, g = self.locate_subgroup(S)
        T1 = self.conjugate(T, g)
        idx, n = self._sections()["normal_lookup"][si][T1]
        return idx, self.mul[n][g]

    def full_section_index(self):
        return self.locate_section(self.all, self.trivial)[0]

    def section_normalizer(self, S, T):
        NS = self.normalizer(S)
        return frozenset(g for g in NS if self.conjugate(T, g) == T)

    def quotient(self, S, T):
        """S/T as a permutation group, with projection and lifting maps."""
        S, T = frozenset(S), frozenset(T)
        cache = self._aux.setdefault("quot", {})
        got = cache.get((S, T))
        if got is not None:
            return got
        m = self.mul
        proj = {}
        lift = []
        for s in sorted(S):
            if s in proj:
                continue
            q = len(lift)
            lift.append(s)
            for t in T:
                proj[m[s][t]] = q
        k = len(lift)
        perms = []
        for a in lift:
            perms.append(tuple(proj[m[a][b]] for b in lift))
        Q = PermutationGroup(elements=perms, degree=k, max_order=max(k, 1),
                             name=f"{self.name or 'G'}[{len(S)}/{len(T)}]")
        # element i of Q is the permutation of coset lift[i] (identity coset first)
        pos = {p: i for i, p in enumerate(perms)}
        qidx = [Q.index[p] for p in perms]
        proj = {s: qidx[q] for s, q in proj.items()}
        lift2 = [None] * k
        for q, i in enumerate(qidx):
            lift2[i] = lift[q]
        del pos
        out = QuotientGroup(SectionPair(S, T, self), Q, proj, lift2)
        cache[(S, T)] = out
        return out

    def section_quotient(self, i):
        sp = self.section_classes()[i]
        return self.quotient(sp.S, sp.T)

    def section_gamma(self, i):
        """Automorphisms of the section quotient induced by N_G(S,T), as image tuples."""
        cache = self._aux.setdefault("gamma", {})
        if i in cache:
            return cache[i]
        sp = self.section_classes()[i]
        Qd = self.quotient(sp.S, sp.T)
        N = self.section_normalizer(sp.S, sp.T)
        out = set()
        for g in sorted(N):
            out.add(tuple(Qd.proj[self.conj(g, s)] for s in Qd.lift))
        out = frozenset(out)
        cache[i] = out
        return out

    def subgroup_group(self, A):
        """A as a group in its own right, with its embedding into this group."""
        A = frozenset(A)
        cache = self._aux.setdefault("subgroup_group", {})
        got = cache.get(A)
        if got is not None:
            return got
        order = sorted(A)
        sub = PermutationGroup(elements=[self.elements[a] for a in order], degree=self.degree,
                               max_order=len(A), name=None)
        emb = [self.index[e] for e in sub.elements]
        cache[A] = (sub, emb)
        return sub, emb

    # ---- double cosets ----

    def double_cosets(self, A, B):
        """Representatives of A\\G/B, least element of each double coset first."""
        cache = self._aux.setdefault("dcos", {})
        key = (A, B)
        got = cache.get(key)
        if got is not None:
            return got
        m = self.mul
        seen = set()
        reps = []
        Al, Bl = list(A), list(B)
        for g in range(self.order):
            if g in seen:
                continue
            reps.append(g)
            for a in Al:
                ag = m[a][g]
                row = m[ag]
                for b in Bl:
                    seen.add(row[b])
        reps = tuple(reps)
        cache[key] = reps
        return reps


def _is_prime_power(n):
    if n < 2:
        return False
    p = 2
    while n % p:
        p += 1
    while n % p == 0:
        n //= p
    return n == 1


# ---- isomorphisms ----

def _spectrum(G):
    return tuple(sorted(Counter(G.elem_orders).items()))


def _class_profile(G):
    o = G.elem_orders
    return tuple(sorted(Counter((o[min(c)], len(c)) for c in G.conjugacy_classes).items()))


def abelian_invariants(G):
    """Invariant-factor style signature of the abelianisation order and torsion."""
    comm = G._closure_plain(tuple({G.mul[G.mul[a][b]][G.inv[G.mul[b][a]]]
                                   for a in G.generators_idx for b in range(G.order)}))
    if len(comm) == 1:
        N = comm
    else:
        N = comm
        # normal closure of the commutator generators
        while True:
            N2 = G.closure((), start=N)
            gens = G.subgroup_generators(N2)
            ext = set(N2)
            for g in G.generators_idx:
                for x in gens:
                    ext.add(G.conj(g, x))
            N3 = G._closure_plain(tuple(ext))
            if N3 == N2:
                N = N2
                break
            N = N3
    Qd = G.quotient(G.all, N)
    return _spectrum(Qd.group)


def invariants(G):
    return (G.order, G.is_abelian, _spectrum(G), _class_profile(G))


def _iso_generators(G):
    cache = G._aux.get("iso_gens")
    if cache is None:
        cache = G.subgroup_generators(G.all)
        G._aux["iso_gens"] = cache
    return cache


def _extend(G, H, gens, imgs):
    """Extend gens -> imgs to a map on <gens>; None if not a homomorphism."""
    mG, mH = G.mul, H.mul
    phi = {0: 0}
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            fx = phi[x]
            rowG, rowH = mG[x], mH[fx]
            for g, h in zip(gens, imgs):
                y = rowG[g]
                fy = rowH[h]
                got = phi.get(y)
                if got is None:
                    phi[y] = fy
                    new.append(y)
                elif got != fy:
                    return None
        frontier = new
    return phi


def _search(G, H, first_only):
    if G.order != H.order:
        return []
    gens = _iso_generators(G)
    if not gens:
        return [tuple([0] * G.order)] if G.order == 1 else []
    oG, oH = G.elem_orders, H.elem_orders
    cG, cH = G.class_of, H.class_of
    csG = [len(G.conjugacy_classes[cG[x]]) for x in range(G.order)]
    csH = [len(H.conjugacy_classes[cH[x]]) for x in range(H.order)]
    cands = [[y for y in range(H.order) if oH[y] == oG[g] and csH[y] == csG[g]] for g in gens]
    # orders of pairwise products are preserved
    prod_orders = {(i, j): oG[G.mul[gens[i]][gens[j]]]
                   for i in range(len(gens)) for j in range(i)}
    found = []

    def rec(k, imgs):
        if k == len(gens):
            phi = _extend(G, H, gens, imgs)
            if phi is None or len(phi) != G.order or len(set(phi.values())) != H.order:
                return False
            found.append(tuple(phi[x] for x in range(G.order)))
            return first_only
        for y in cands[k]:
            if any(oH[H.mul[y][imgs[j]]] != prod_orders[(k, j)] for j in range(k)):
                continue
            nxt = imgs + [y]
            if k + 1 < len(gens) and _extend(G, H, gens[:k + 1], nxt) is None:
                continue
            if rec(k + 1, nxt):
                return True
        return False

    rec(0, [])
    return found


def find_isomorphism(G, H):
    """An isomorphism G -> H as an image tuple over element indices, or None."""
    if G.order != H.order or G.is_abelian != H.is_abelian:
        return None
    if _spectrum(G) != _spectrum(H) or _class_profile(G) != _class_profile(H):
        return None
    res = _search(G, H, True)
    return res[0] if res else None


def is_isomorphic(G, H):
    return find_isomorphism(G, H) is not None


def automorphisms(G):
    """All automorphisms of G as image tuples; identity first."""
    got = G._aux.get("aut")
    if got is not None:
        return got
    if G.order > config.MAX_AUT_ORDER:
        raise OrderBoundError(
            f"automorphism groups are only computed up to order {config.MAX_AUT_ORDER}"
            f" (group of order {G.order})")
    from . import cache as _cache
    auts = _cache.load(G, "aut")
    if auts is not None:
        G._aux["aut"] = auts
        return auts
    auts = _search(G, G, False)
    ident = tuple(range(G.order))
    auts.sort()
    auts.remove(ident)
    auts.insert(0, ident)
    G._aux["aut"] = auts
    _cache.store(G, "aut", auts)
    return auts


def inner_automorphisms(G):
    return sorted({tuple(G.conj(g, x) for x in range(G.order)) for g in range(G.order)})


@dataclass
class OuterAutGroup:
    """Aut(H) acting on the elements of H, its inner subgroup, and Out(H) = Aut/Inn."""
    H: PermutationGroup
    aut: PermutationGroup
    inn: frozenset          # indices into aut
    out: QuotientGroup      # Out(H), elements indexed 0..|Out|-1

    @property
    def group(self):
        return self.out.group

    @property
    def order(self):
        return self.out.group.order

    def out_class(self, phi):
        """Out(H) element index of the automorphism given as an image tuple."""
        return self.out.proj[self.aut.index[tuple(phi)]]

    def representative(self, w):
        """An automorphism tuple lying in the Out class w."""
        return self.aut.elements[self.out.lift[w]]

    @cached_property
    def out_classes(self):
        return [self.representative(w) for w in range(self.order)]


def out_group(H):
    got = H._aux.get("out")
    if got is not None:
        return got
    auts = automorphisms(H)
    A = PermutationGroup(elements=auts, degree=max(H.order, 1), max_order=len(auts),
                         name=f"Aut({H.name or '?'})")
    inn = frozenset(A.index[p] for p in inner_automorphisms(H))
    res = OuterAutGroup(H, A, inn, A.quotient(A.all, inn))
    res.out.group.name = f"Out({H.name or '?'})"
    H._aux["out"] = res
    return res


def direct_product(G, H, name=None):
    d1, d2 = G.degree, H.degree
    gens = [tuple(g) + tuple(range(d1, d1 + d2)) for g in G.generators or G.elements[1:]]
    gens += [tuple(range(d1)) + tuple(d1 + i for i in h) for h in H.generators or H.elements[1:]]
    if not gens:
        gens = [tuple(range(d1 + d2))]
    return PermutationGroup(gens, degree=d1 + d2, name=name)


def sections_up_to_conj(G):
    return G.section_classes()


def subgroup_classes(G):
    return G.subgroup_classes()


def cyclic_subgroup_class_count(G):
    return sum(1 for H in G.subgroup_classes() if G.is_cyclic_subgroup(H))


def section_normalizer(G, sp):
    return G.section_normalizer(sp.S, sp.T)


def quotient_group(sp):
    return sp.ambient.quotient(sp.S, sp.T)


def double_cosets(G, A, B):
    return list(G.double_cosets(frozenset(A), frozenset(B)))
