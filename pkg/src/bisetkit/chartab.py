"""Irreducible complex characters of small permutation groups.

Dixon's method: the class-multiplication matrices are simultaneously
diagonalised over a prime field F_p with p ≡ 1 (mod exponent), and the
resulting mod-p character values are lifted to Q(ζ_e) through eigenvalue
multiplicities.  Abelian groups are handled by enumerating generator images.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cyclotomic import Cyclotomic, ZERO

MAX_CHARTAB_ORDER = 256


class CharacterTableError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClassData:
    reps: tuple
    sizes: tuple
    inverse: tuple        # class index of the inverse class
    rep_orders: tuple
    exponent: int


@dataclass(frozen=True)
class Character:
    degree: int
    values: tuple         # Cyclotomic per class
    index: int = -1
    label: str = ""

    def __call__(self, class_index):
        return self.values[class_index]


class CharacterTable:
    def __init__(self, G, classes, chars):
        self.group = G
        self.classes = classes
        self.characters = chars

    def __len__(self):
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __getitem__(self, i):
        return self.characters[i]

    def value(self, chi, element):
        return chi.values[self.group.class_of[element]]

    def find(self, label):
        return find_character(self, label)

    def labels(self):
        return [c.label for c in self.characters]

    def inner_product(self, a, b):
        """(a, b) = |G|^-1 Σ_g a(g) conj(b(g)) for class functions given per class."""
        acc = ZERO
        for size, x, y in zip(self.classes.sizes, a, b):
            acc = acc + Cyclotomic.coerce(x) * Cyclotomic.coerce(y).conjugate() * size
        return acc / self.group.order

    def to_json_obj(self):
        from .cyclotomic import to_string
        return {
            "class_sizes": list(self.classes.sizes),
            "rep_orders": list(self.classes.rep_orders),
            "labels": self.labels(),
            "values": [[to_string(v) for v in c.values] for c in self.characters],
        }


def class_data(G):
    classes = G.conjugacy_classes
    reps = tuple(min(c) for c in classes)
    sizes = tuple(len(c) for c in classes)
    inverse = tuple(G.class_of[G.inv[r]] for r in reps)
    orders = tuple(G.elem_orders[r] for r in reps)
    return ClassData(reps, sizes, inverse, orders, G.exponent)


# ---- F_p helpers ----

def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _choose_prime(e, order):
    bound = 2 * isqrt(order) + 2
    p = e + 1
    for _ in range(10 ** 5):
        if p > bound and _is_prime(p):
            return p
        p += e
    raise CharacterTableError(f"no admissible prime for exponent {e}")


def _primitive_root(p):
    n = p - 1
    fac = [q for q in range(2, n + 1) if n % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, n // q, p) != 1 for q in fac):
            return g
    return 1


def _nullspace_mod(rows, ncols, p):
    M = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-M[i][f]) % p
        basis.append(v)
    return basis


def _coords_mod(basis, v, p):
    """Coordinates of v in the span of ``basis`` (rows) mod p."""
    d = len(basis)
    n = len(v)
    aug = [[basis[t][j] for t in range(d)] + [v[j]] for j in range(n)]
    # solve by elimination on the n x (d+1) system
    M = [r[:] for r in aug]
    piv_cols = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, n) if M[i][c] % p), None)
        if piv is None:
            raise CharacterTableError("degenerate eigenspace basis")
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] % p:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    return [M[i][d] for i in range(d)]


def _class_constants(G, cd):
    """A[i][j][k] = #{(x, y) in C_i x C_j : xy = g_k}."""
    r = len(cd.reps)
    classes = G.conjugacy_classes
    cls = G.class_of
    m, inv = G.mul, G.inv
    A = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for k, gk in enumerate(cd.reps):
            for x in classes[i]:
                y = m[inv[x]][gk]
                A[i][cls[y]][k] += 1
    return A


def _dixon(G, cd):
    r = len(cd.reps)
    e = cd.exponent
    p = _choose_prime(e, G.order)
    A = _class_constants(G, cd)
    spaces = [[[int(i == j) for j in range(r)] for i in range(r)]]
    for _pass in range(2):
        for i in range(1, r):
            new = []
            for V in spaces:
                if len(V) == 1:
                    new.append(V)
                    continue
                d = len(V)
                # matrix of A_i on V: columns are coordinates of A_i v
                images = [[sum(A[i][j][k] * v[k] for k in range(r)) % p for j in range(r)] for v in V]
                B = [_coords_mod(V, w, p) for w in images]  # B[t] = coords of A_i v_t
                Bt = [[B[t][s] for t in range(d)] for s in range(d)]
                found = 0
                for lam in range(p):
                    rows = [[(Bt[s][t] - (lam if s == t else 0)) % p for t in range(d)] for s in range(d)]
                    ns = _nullspace_mod(rows, d, p)
                    if ns:
                        new.append([[sum(c[t] * V[t][j] for t in range(d)) % p for j in range(r)] for c in ns])
                        found += len(ns)
                if found != d:
                    raise CharacterTableError("class matrices are not diagonalisable mod p")
            spaces = new
        if all(len(V) == 1 for V in spaces):
            break
    if len(spaces) != r or any(len(V) != 1 for V in spaces):
        raise CharacterTableError("failed to split the class algebra")
    z = pow(_primitive_root(p), (p - 1) // e, p)
    power = [[G.class_of[G.power(rep, l)] for l in range(e)] for rep in cd.reps]
    chars = []
    for V in spaces:
        w = V[0]
        w0 = w[0]
        if w0 == 0:
            raise CharacterTableError("eigenvector vanishes at the identity")
        iw = pow(w0, p - 2, p)
        w = [x * iw % p for x in w]
        s = sum(w[k] * w[cd.inverse[k]] * pow(cd.sizes[k], p - 2, p) for k in range(r)) % p
        d2 = G.order * pow(s, p - 2, p) % p
        deg = next((d for d in range(1, isqrt(G.order) + 1) if d * d % p == d2), None)
        if deg is None:
            raise CharacterTableError("no admissible degree")
        vals_p = [w[k] * deg * pow(cd.sizes[k], p - 2, p) % p for k in range(r)]
        ie = pow(e, p - 2, p)
        values = []
        for k in range(r):
            mults = []
            for j in range(e):
                acc = 0
                for l in range(e):
                    acc += vals_p[power[k][l]] * pow(z, (-j * l) % e, p)
                m = acc * ie % p
                if m > deg:
                    raise CharacterTableError("eigenvalue multiplicity out of range")
                mults.append(m)
            values.append(Cyclotomic.from_powers(e, mults))
        chars.append((deg, tuple(values)))
    return chars


def _abelian(G, cd):
    e = cd.exponent
    gens = list(G.subgroup_generators(G.all))
    orders = [G.elem_orders[g] for g in gens]
    chars = []

    def extend(exps):
        # exps[t]: exponent of ζ_e assigned to gens[t]
        val = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, a in zip(gens, exps):
                    y = G.mul[x][g]
                    v = (val[x] + a) % e
                    if y not in val:
                        val[y] = v
                        nxt.append(y)
                    elif val[y] != v:
                        return None
            frontier = nxt
        return val

    def rec(t, exps):
        if t == len(gens):
            val = extend(exps)
            if val is not None:
                chars.append((1, tuple(Cyclotomic.zeta(e, val[rep]) for rep in cd.reps)))
            return
        step = e // orders[t]
        for k in range(orders[t]):
            rec(t + 1, exps + [k * step])

    rec(0, [])
    if len(chars) != G.order:
        raise CharacterTableError("abelian character enumeration is incomplete")
    return chars


def _sort_key(item):
    deg, values = item
    trivial = all(v == 1 for v in values)
    return (deg, not trivial, tuple(tuple(v.c) for v in values))


def _assign_labels(chars):
    linear_real = [i for i, c in enumerate(chars)
                   if c.degree == 1 and i != 0 and all(v.is_rational() for v in c.values)]
    by_degree = {}
    for i, c in enumerate(chars):
        by_degree.setdefault(c.degree, []).append(i)
    out = []
    for i, c in enumerate(chars):
        if i == 0:
            lab = "k"
        elif len(linear_real) == 1 and linear_real[0] == i:
            lab = "eps"
        elif c.degree > 1 and len(by_degree[c.degree]) == 1:
            lab = str(c.degree)
        else:
            lab = f"#{i}"
        out.append(Character(c.degree, c.values, i, lab))
    return out


def character_table(G, method=None):
    """Irreducible characters of G in canonical order (trivial first, then by degree)."""
    cache_key = "chartab" if method is None else f"chartab-{method}"
    got = G._aux.get(cache_key)
    if got is not None:
        return got
    if G.order > MAX_CHARTAB_ORDER:
        raise CharacterTableError(f"character tables are limited to order {MAX_CHARTAB_ORDER}")
    from . import cache as _cache
    cd = class_data(G)
    if method is None:
        method = "abelian" if G.is_abelian else "dixon"
    raw = _cache.load(G, f"chartab-{method}")
    if raw is None:
        raw = _abelian(G, cd) if method == "abelian" else _dixon(G, cd)
        _cache.store(G, f"chartab-{method}", raw)
    raw.sort(key=_sort_key)
    chars = _assign_labels([Character(d, v) for d, v in raw])
    table = CharacterTable(G, cd, chars)
    _check_table(table)
    G._aux[cache_key] = table
    return table


def _check_table(table):
    G = table.group
    cd = table.classes
    if len(table.characters) != len(cd.reps):
        raise CharacterTableError("wrong number of irreducible characters")
    if sum(c.degree ** 2 for c in table.characters) != G.order:
        raise CharacterTableError("degrees do not satisfy Σ d² = |G|")
    tsum = [sum((c.values[k] for c in table.characters), ZERO) for k in range(len(cd.reps))]
    if any(tsum[k] != tsum[cd.inverse[k]] for k in range(len(cd.reps))):
        raise CharacterTableError("Σ χ is not inverse-symmetric")


ALIASES = {
    "k": "k", "k+": "k", "trivial": "k", "1": None,
    "eps": "eps", "ε": "eps", "epsilon": "eps", "k-": "eps", "sign": "eps",
}


def find_character(table, label):
    """Look up an irreducible character by label.

    Accepted: 'k'/'k+'/'trivial', 'eps'/'ε'/'k-'/'sign' (the unique nontrivial
    real linear character), a degree 'd' when that degree is unique, or '#i'.
    """
    lab = label.strip()
    if lab.startswith("V:"):
        lab = lab[2:]
    chars = table.characters
    if lab.startswith("#"):
        i = int(lab[1:])
        if not 0 <= i < len(chars):
            raise KeyError(f"character index {i} out of range")
        return chars[i]
    key = ALIASES.get(lab, lab)
    if key == "k" or (lab == "1" and sum(1 for c in chars if c.degree == 1) == 1):
        return chars[0]
    if key == "eps":
        cands = [c for c in chars[1:] if c.degree == 1 and all(v.is_rational() for v in c.values)]
        if len(cands) != 1:
            raise KeyError(f"'{label}' is ambiguous or absent ({len(cands)} candidates)")
        return cands[0]
    if lab.isdigit():
        d = int(lab)
        cands = [c for c in chars if c.degree == d]
        if len(cands) != 1:
            raise KeyError(f"no unique irreducible of degree {d} ({len(cands)} candidates)")
        return cands[0]
    for c in chars:
        if c.label == lab:
            return c
    raise KeyError(f"unknown character label {label!r}")


# ---- trace functionals on kOut(H) ----

class TraceFunctional:
    """A linear functional on a group algebra, evaluated on elements or formal sums."""

    def __init__(self, G, per_element, tag):
        self.group = G
        self._f = per_element
        self.tag = tag

    def __call__(self, x):
        if isinstance(x, dict):
            acc = ZERO
            for g, c in x.items():
                acc = acc + self._f(g) * c
            return acc
        return self._f(x)


def trace_tau_V(chi, out_elem, table=None):
    if table is None:
        raise ValueError("a character table is needed to locate the class")
    return table.value(chi, out_elem)


def tau_V(G, chi):
    table = character_table(G)
    return TraceFunctional(G, lambda g: table.value(chi, g), f"V:{chi.label}")


def trace_tau_sum(G):
    table = character_table(G)
    sums = [sum((c.values[k] for c in table.characters), ZERO) for k in range(len(table.classes.reps))]
    return TraceFunctional(G, lambda g: sums[G.class_of[g]], "sum")


def trace_coeff1(G):
    one, zero = Cyclotomic.rational(1), ZERO
    return TraceFunctional(G, lambda g: one if g == 0 else zero, "coeff1")


def permutation_character(G, K):
    """Character of G acting on the cosets G/K, per class."""
    cd = class_data(G)
    out = []
    coset_reps = []
    seen = set()
    for g in range(G.order):
        if g not in seen:
            coset_reps.append(g)
            seen.update(G.mul[g][k] for k in K)
    for rep in cd.reps:
        fixed = sum(1 for c in coset_reps if G.mul[G.mul[G.inv[c]][rep]][c] in K)
        out.append(Fraction(fixed))
    return out
