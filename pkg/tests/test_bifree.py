import pytest

from bisetkit.bifree import (bifree_algebra_radical, bifree_basis, bifree_gram, bifree_ring_basis,
                             expected_diagonal)
from bisetkit.bisets import basis_keys, compose_keys
from bisetkit.groups import find_isomorphism

from conftest import grp

CATALOG = [("S3", "C3"), ("S3", "C2"), ("C4", "C2"), ("A4", "C3"), ("A4", "V4"), ("A4", "C2"),
           ("D8", "C2"), ("D8", "V4"), ("D8", "C4"), ("Q8", "C4"), ("Q8", "C2"), ("S4", "S3"),
           ("S4", "D8"), ("S4", "C4"), ("S4", "V4"), ("A5", "C5"), ("A5", "A4"), ("A5", "S3"),
           ("A5", "D10"), ("C3xS3", "C3"), ("D12", "S3"), ("C2xC4", "C4"), ("D8", "D8")]


@pytest.mark.parametrize("x,h", CATALOG)
def test_bifree_gram_diagonal(x, h):
    X, H = grp(x), grp(h)
    basis = bifree_basis(X, H)
    assert basis
    M = bifree_gram(X, H)  # raises unless diagonal with the expected entries
    rows = M.rows
    assert M.rank() == len(basis)
    for n, el in enumerate(basis):
        d = rows[n][n]
        assert d == expected_diagonal(X, el.subgroup) and d > 0
        N = X.normalizer(el.subgroup)
        assert (len(N) // len(el.subgroup)) % d == 0


@pytest.mark.parametrize("x,h", CATALOG)
def test_bifree_basis_subgroups_isomorphic(x, h):
    X, H = grp(x), grp(h)
    for el in bifree_basis(X, H):
        sub, _ = X.subgroup_group(el.subgroup)
        assert find_isomorphism(H, sub) is not None


def test_s3_c3():
    X, H = grp("S3"), grp("C3")
    assert len(bifree_basis(X, H)) == 1
    assert bifree_gram(X, H).rows == [[1]]


def test_a4_c3():
    X, H = grp("A4"), grp("C3")
    assert len(bifree_basis(X, H)) == 2
    assert bifree_gram(X, H).rows == [[1, 0], [0, 1]]


def test_c4_c2():
    assert bifree_gram(grp("C4"), grp("C2")).rows == [[2]]


def test_no_embedding():
    assert bifree_basis(grp("C2"), grp("C3")) == []
    assert bifree_basis(grp("S3"), grp("V4")) == []


@pytest.mark.parametrize("spec", ["C2", "C3", "S3", "V4", "D8", "A4", "Q8"])
def test_bifree_algebra_semisimple(spec):
    assert bifree_algebra_radical(grp(spec)) == 0


@pytest.mark.parametrize("spec", ["S3", "D8", "A4"])
def test_bifree_products_stay_bifree(spec):
    G = grp(spec)
    keys = set(bifree_ring_basis(G))
    for a in keys:
        for b in keys:
            assert set(compose_keys(G, G, G, a, b)) <= keys


@pytest.mark.parametrize("spec", ["S3", "D8", "A4"])
def test_bifree_subset_of_full_basis(spec):
    G = grp(spec)
    assert set(bifree_ring_basis(G)) <= set(basis_keys(G, G))
