"""The bifree part kA(X, H): bisets whose Goursat kernels are both trivial."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import config
from .bisets import basis_keys, compose_keys, describe_key
from .cyclotomic import Cyclotomic
from .functor import gram_matrix, std_basis
from .linalg import ExactMatrix, bareiss_rank


class BifreeError(RuntimeError):
    pass


@dataclass(frozen=True)
class BifreeBasisElement:
    key: object
    subgroup: frozenset     # A ≤ X with A ≅ H
    label: str


def _is_bifree_key(X, Y, key):
    return len(X.section_classes()[key.i].T) == 1 and len(Y.section_classes()[key.j].T) == 1


def bifree_basis(X, H):
    """Basis Ind_A^X Iso_σ of the bifree standard quotient k̄A(X, H)."""
    B = std_basis(X, H)
    out = []
    for k, lab in zip(B.keys, B.labels):
        if _is_bifree_key(X, H, k):
            out.append(BifreeBasisElement(k, X.section_classes()[k.i].S, lab))
    return out


def expected_diagonal(X, A):
    """|A·C_X(A) : A|."""
    C = X.centralizer(A)
    AC = X.closure(X.subgroup_generators(C), start=A)
    return len(AC) // len(A)


def bifree_gram(X, H):
    """Coefficient-of-1 form on k̄A(X, H); checked to be diagonal with the expected entries."""
    basis = bifree_basis(X, H)
    B = std_basis(X, H)
    pos = B.position
    idx = [pos[b.key] for b in basis]
    full = gram_matrix(X, H, "coeff1").matrix.rows if len(B) else []
    rows = []
    for a in idx:
        row = []
        for b in idx:
            x = full[a][b]
            row.append(x.to_fraction() if isinstance(x, Cyclotomic) else Fraction(x))
        rows.append(row)
    for r, el in enumerate(basis):
        for c in range(len(basis)):
            if r != c and rows[r][c] != 0:
                raise BifreeError("bifree Gram matrix is not diagonal")
        if rows[r][r] != expected_diagonal(X, el.subgroup):
            raise BifreeError(f"diagonal entry {rows[r][r]} differs from |A C_X(A) : A|")
    labels = [b.label for b in basis]
    return ExactMatrix(rows, labels, labels)


def bifree_ring_basis(G):
    return basis_keys(G, G, bifree=True)


def bifree_algebra_radical(G):
    """Dimension of the radical of the regular trace form on kA(G, G)."""
    keys = bifree_ring_basis(G)
    if len(keys) > config.MAX_RING_BASIS:
        raise BifreeError(f"kA(G,G) has {len(keys)} basis elements; limit is {config.MAX_RING_BASIS}")
    pos = {k: n for n, k in enumerate(keys)}
    N = len(keys)
    c = []
    for a in keys:
        row = []
        for b in keys:
            prod = {}
            for k, m in compose_keys(G, G, G, a, b).items():
                if k not in pos:
                    raise BifreeError("product of bifree bisets is not bifree")
                prod[pos[k]] = m
            row.append(prod)
        c.append(row)
    t = [sum(c[k][m].get(m, 0) for m in range(N)) for k in range(N)]
    T = [[sum(v * t[k] for k, v in c[i][j].items()) for j in range(N)] for i in range(N)]
    return N - bareiss_rank(T)
