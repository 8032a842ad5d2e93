"""Exact arithmetic in cyclotomic fields Q(ζ_n).

An element is stored as its coefficient vector in the power basis
1, ζ, …, ζ^(φ(n)-1) of Q[x]/Φ_n(x).  Mixed-conductor arithmetic coerces both
operands into Q(ζ_lcm).
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm


def _poly_divmod(num, den):
    """Exact integer polynomial division (coefficients low degree first)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    rem = num[:len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return out, rem


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Φ_n as a tuple of integer coefficients, constant term first."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > 10 ** 4:
        raise ValueError("conductor too large")
    poly = [-1] + [0] * (n - 1) + [1]   # x^n - 1
    for d in _divisors(n):
        if d < n:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not rem
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(n):
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n):
    """Reduction of x^k mod Φ_n for k < n, as coefficient tuples."""
    phi = cyclotomic_polynomial(n)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


@lru_cache(maxsize=None)
def _embed_matrix(m, n):
    """Images of the power basis of Q(ζ_m) in Q(ζ_n), m | n."""
    step = n // m
    table = _power_table(n)
    return tuple(table[(j * step) % n] for j in range(euler_phi(m)))


class Cyclotomic:
    __slots__ = ("n", "c", "_hash")

    def __init__(self, n, coeffs):
        self.n = n
        self.c = tuple(Fraction(x) for x in coeffs)
        self._hash = None
        if len(self.c) != euler_phi(n):
            raise ValueError("coefficient vector has wrong length")

    # ---- construction ----

    @classmethod
    def rational(cls, q):
        return cls(1, (Fraction(q),))

    @classmethod
    def zeta(cls, n, k=1):
        """ζ_n^k with ζ_n = exp(2πi/n)."""
        k %= n
        return cls(n, _power_table(n)[k])

    @classmethod
    def from_powers(cls, n, mults):
        """Σ_k mults[k] ζ_n^k."""
        d = euler_phi(n)
        acc = [Fraction(0)] * d
        table = _power_table(n)
        for k, m in enumerate(mults):
            if m:
                for i, t in enumerate(table[k % n]):
                    if t:
                        acc[i] += m * t
        return cls(n, acc)

    @staticmethod
    def coerce(x):
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclotomic.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # ---- conductor handling ----

    def to_conductor(self, n):
        if n == self.n:
            return self
        if n % self.n:
            raise ValueError(f"Q(ζ_{self.n}) is not contained in Q(ζ_{n})")
        emb = _embed_matrix(self.n, n)
        acc = [Fraction(0)] * euler_phi(n)
        for a, row in zip(self.c, emb):
            if a:
                for i, t in enumerate(row):
                    if t:
                        acc[i] += a * t
        return Cyclotomic(n, acc)

    def _pair(self, other):
        other = Cyclotomic.coerce(other)
        if other.n == self.n:
            return self, other
        m = lcm(self.n, other.n)
        return self.to_conductor(m), other.to_conductor(m)

    def galois(self, k):
        """Image under ζ_n ↦ ζ_n^k, gcd(k, n) = 1."""
        n = self.n
        if gcd(k, n) != 1:
            raise ValueError("Galois exponent must be a unit")
        return Cyclotomic.from_powers(n, _spread(self.c, k, n))

    def conjugate(self):
        return self.galois(-1)

    def normalized(self):
        """Same value expressed in the smallest possible conductor."""
        n = self.n
        if n == 1:
            return self
        for d in _divisors(n):
            if d == n:
                break
            if d % 4 == 2:
                continue
            if all(self.galois(k) == self for k in range(1, n, d) if gcd(k, n) == 1):
                return self._descend(d)
        return self

    def _descend(self, d):
        from . import linalg
        emb = _embed_matrix(d, self.n)
        # solve Σ_j y_j emb[j] = self.c
        cols = [list(r) for r in zip(*emb)]
        sol = linalg.solve_rational(cols, list(self.c))
        return Cyclotomic(d, sol)

    # ---- predicates ----

    def is_zero(self):
        return not any(self.c)

    def is_rational(self):
        # 1 is the first power-basis vector
        return not any(self.c[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __bool__(self):
        return not self.is_zero()

    # ---- arithmetic ----

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.n, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.c])

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.n, [x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [x * other for x in self.c])
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        n = a.n
        d = euler_phi(n)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        table = _power_table(n)
        acc = prod[:d]
        for k in range(d, 2 * d - 1):
            if prod[k]:
                for i, t in enumerate(table[k % n]):
                    if t:
                        acc[i] += prod[k] * t
        return Cyclotomic(n, acc)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.n <= 2:
            return Cyclotomic(self.n, [1 / self.c[0]])
        # extended Euclid in Q[x]: a·u + Φ·v = 1
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        a = list(self.c)
        u = _poly_inverse_mod(a, phi)
        return Cyclotomic(self.n, u)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Cyclotomic(self.n, [x / other for x in self.c])
        return self * Cyclotomic.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ---- comparison ----

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.c == b.c

    def __hash__(self):
        if self._hash is None:
            v = self.normalized()
            self._hash = hash(v.c[0]) if v.n == 1 else hash((v.n, v.c))
        return self._hash

    # ---- conversion ----

    def to_complex(self):
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(complex(float(x)) * z ** k for k, x in enumerate(self.c))

    def __complex__(self):
        return self.to_complex()

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"Cyclotomic({to_string(self)!r})"


def _spread(coeffs, k, n):
    """Multiplicities of ζ^(j·k) for the power-basis coefficients."""
    mults = [Fraction(0)] * n
    for j, x in enumerate(coeffs):
        if x:
            mults[(j * k) % n] += x
    return mults


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_inverse_mod(a, m):
    """u with a·u ≡ 1 mod m over Q; m irreducible."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("not invertible")
    c = r1[0]
    u = [x / c for x in s1]
    d = len(m) - 1
    _, u = _qdivmod(u, list(m)) if len(u) > d else (None, u)
    return (u + [Fraction(0)] * d)[:d]


def _qdivmod(num, den):
    num = list(num)
    den = _poly_trim(list(den))
    if len(num) < len(den):
        return [], _poly_trim(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] / lead
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return out, _poly_trim(num[:len(den) - 1])


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)


# ---- serialization: "(a/b)*z<n>^k + ..." ----

def to_string(x):
    x = Cyclotomic.coerce(x)
    n = x.n
    terms = []
    for k, a in enumerate(x.c):
        if not a:
            continue
        coef = f"({a.numerator}/{a.denominator})" if a.denominator != 1 else f"({a.numerator})"
        terms.append(coef if (k == 0 and n <= 2) else f"{coef}*z{n}^{k}")
    if not terms:
        return "0"
    return " + ".join(terms)


_TERM = re.compile(r"^\((-?\d+)(?:/(\d+))?\)(?:\*z(\d+)\^(\d+))?$")


def from_string(text):
    text = text.strip()
    if text == "0":
        return ZERO
    acc = ZERO
    for part in text.split(" + "):
        m = _TERM.match(part.strip())
        if not m:
            raise ValueError(f"malformed cyclotomic term {part!r}")
        num, den, n, k = m.groups()
        q = Fraction(int(num), int(den or 1))
        if n is None:
            acc = acc + q
        else:
            acc = acc + Cyclotomic.zeta(int(n), int(k)) * q
    return acc


def as_cyclotomic(x):
    return Cyclotomic.coerce(x)
