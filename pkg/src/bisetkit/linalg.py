"""Exact dense linear algebra over Q and Q(ζ_n).

Entries are ``Fraction``/``int`` or ``Cyclotomic``.  Rational matrices go
through fraction-free (Bareiss) elimination on integers; anything with a
genuinely cyclotomic entry is eliminated over the field directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .cyclotomic import Cyclotomic, from_string, to_string


def _is_rational_entry(x):
    return isinstance(x, (int, Fraction)) or (isinstance(x, Cyclotomic) and x.is_rational())


def _to_fraction(x):
    if isinstance(x, Cyclotomic):
        return x.to_fraction()
    return Fraction(x)


def is_rational_matrix(rows):
    return all(_is_rational_entry(x) for r in rows for x in r)


def _integer_rows(rows):
    out = []
    for r in rows:
        fr = [_to_fraction(x) for x in r]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    nrows = len(M)
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        p = pr[c]
        for i in range(r + 1, nrows):
            row = M[i]
            f = row[c]
            if f:
                M[i] = [0] * (c + 1) + [(row[j] * p - f * pr[j]) // prev for j in range(c + 1, ncols)]
            elif p != prev:
                M[i] = [0] * (c + 1) + [(row[j] * p) // prev for j in range(c + 1, ncols)]
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def _field_rref(rows, ncols):
    """Reduced row echelon form over the entry field; returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c] if not isinstance(M[r][c], Cyclotomic) else M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def _prepare(rows):
    rows = [list(r) for r in rows]
    if is_rational_matrix(rows):
        return [[_to_fraction(x) for x in r] for r in rows], True
    return [[x if isinstance(x, Cyclotomic) else Cyclotomic.rational(x) for x in r] for r in rows], False


def mat_rank(M):
    rows = M.rows if isinstance(M, ExactMatrix) else M
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if is_rational_matrix(rows):
        return bareiss_rank(_integer_rows(rows))
    prepared, _ = _prepare(rows)
    return len(_field_rref(prepared, len(rows[0]))[0])


def rref(rows, ncols=None):
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    prepared, _ = _prepare(rows)
    return _field_rref(prepared, ncols)


def right_kernel(M, ncols=None):
    """Basis of {v : M v = 0}, one vector per free column."""
    rows = M.rows if isinstance(M, ExactMatrix) else M
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(rows, ncols)
    rational = all(isinstance(x, Fraction) for r in R for x in r)
    zero, one = (Fraction(0), Fraction(1)) if rational else (Cyclotomic.rational(0), Cyclotomic.rational(1))
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(piv):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def row_space(vectors, ncols=None):
    """Echelon basis of the span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    return rref(vectors, ncols)[0]


def span_dim(vectors):
    vectors = [list(v) for v in vectors]
    return mat_rank(vectors) if vectors else 0


def solve_rational(A, b):
    """Unique solution of A y = b over Q (A given row-wise, full column rank)."""
    ncols = len(A[0])
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    R, piv = _field_rref(aug, ncols + 1)
    if ncols in piv:
        raise ValueError("inconsistent linear system")
    if len(piv) != ncols:
        raise ValueError("linear system has no unique solution")
    return [R[i][ncols] for i in range(ncols)]


def solve(A, b):
    """Some solution of A y = b over the entry field, or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [y] for row, y in zip(A, b)]
    R, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    zero = R[0][0] * 0 if R else Fraction(0)
    y = [zero] * ncols
    for r, c in enumerate(piv):
        y[c] = R[r][ncols]
    return y


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)) for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def trace(A):
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def in_span(basis_rows, v):
    if not basis_rows:
        return all(x == 0 for x in v)
    return mat_rank(list(basis_rows) + [list(v)]) == mat_rank(basis_rows)


def _entry_json(x):
    """Integers stay numbers, other rationals become 'a/b', cyclotomics use ``to_string``."""
    if _is_rational_entry(x):
        f = _to_fraction(x)
        return f.numerator if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return to_string(x)


def _entry_from_json(x):
    if isinstance(x, int):
        return Fraction(x)
    if "/" in x and "(" not in x:
        return Fraction(x)
    return from_string(x)


@dataclass
class ExactMatrix:
    rows: list
    row_labels: list = field(default=None)
    col_labels: list = field(default=None)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def rank(self):
        return mat_rank(self.rows)

    def right_kernel(self):
        return right_kernel(self.rows, self.shape[1])

    def transpose(self):
        return ExactMatrix(transpose(self.rows), self.col_labels, self.row_labels)

    def is_symmetric(self):
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def to_json_obj(self):
        return [[_entry_json(x) for x in r] for r in self.rows]

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls([[_entry_from_json(x) for x in r] for r in data])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))
