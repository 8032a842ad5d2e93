import random

import pytest
from hypothesis import given, settings, strategies as st

from bisetkit.bisets import (BisetElem, BisetError, basis_keys, compose, compose_keys, conj,
                             count_basis, deflation, describe_key, identity, ind, indinf, inf, iso,
                             opposite, out_iso, out_of, pi_out, res)
from bisetkit.groups import direct_product

from conftest import grp
from oracle import brute_compose


@pytest.mark.parametrize("spec,n", [
    ("C1", 1), ("C2", 5), ("C3", 6), ("C5", 8), ("C4", 15), ("S3", 22), ("V4", 67), ("D8", 214),
    ("Q8", 106), ("A4", 41),
])
def test_ring_dimensions(spec, n):
    G = grp(spec)
    assert len(basis_keys(G, G)) == n


@pytest.mark.parametrize("x,y", [("C2", "C2"), ("C2", "S3"), ("C3", "S3"), ("C4", "C4"), ("S3", "S3"),
                                 ("D8", "C2"), ("V4", "C4"), ("D8", "D8"), ("Q8", "Q8"), ("A4", "C3"),
                                 ("C4", "A4")])
def test_basis_count_is_subgroup_classes_of_product(x, y):
    X, Y = grp(x), grp(y)
    P = direct_product(X, Y)
    assert count_basis(X, Y) == len(P.subgroup_classes())


def test_identity_is_two_sided():
    G = grp("S3")
    one = identity(G)
    for k in basis_keys(G, G):
        b = BisetElem.basis(G, G, k)
        assert compose(one, b) == b
        assert compose(b, one) == b


def test_res_ind_c3_in_s3():
    G = grp("S3")
    C3 = next(A for A in G.subgroup_classes() if len(A) == 3)
    sub = G.subgroup_group(C3)[0]
    prod = compose(res(G, C3), ind(G, C3))
    t = next(g for g in range(G.order) if g not in C3)
    expected = identity(sub) + conj(G, C3, t)
    assert prod == expected
    assert len(prod.coeffs) == 2


@pytest.mark.parametrize("spec", ["S3", "D8", "A4", "C6"])
def test_def_inf_is_identity(spec):
    G = grp(spec)
    for sp in G.section_classes():
        if len(sp.S) == G.order and len(sp.T) > 1:
            Q = G.quotient(G.all, sp.T).group
            assert compose(deflation(G, sp.T), inf(G, sp.T)) == identity(Q)


def test_res_ind_modulo_lower_terms():
    # Z = C2 in A4: N(Z) = V4 = Z C(Z), so Res Ind ≡ |N:Z| Id
    G = grp("A4")
    Z = next(A for A in G.subgroup_classes() if len(A) == 2)
    sub = G.subgroup_group(Z)[0]
    assert pi_out(compose(res(G, Z), ind(G, Z))).coeffs == {0: 2}
    assert sub.order == 2


def test_opposite_examples():
    G = grp("A4")
    C3 = next(A for A in G.subgroup_classes() if len(A) == 3)
    assert opposite(ind(G, C3)) == res(G, C3)
    V4 = next(A for A in G.subgroup_classes() if len(A) == 4)
    H = G.quotient(G.all, V4).group
    sigma = out_of(H).representative(1)
    b = compose(indinf(G, G.all, V4), iso(H, H, sigma))
    inv = [0] * H.order
    for a, c in enumerate(sigma):
        inv[c] = a
    assert opposite(b) == compose(iso(H, H, tuple(inv)), opposite(indinf(G, G.all, V4)))


def test_iso_of_inversion_on_c3():
    H = grp("C3")
    inv = tuple(H.inv)
    assert out_of(H).order == 2
    assert pi_out(iso(H, H, inv)).coeffs == {1: 1}
    assert pi_out(identity(H)).coeffs == {0: 1}


def test_inner_iso_is_identity():
    H = grp("S3")
    g = 3
    inner = tuple(H.conj(g, x) for x in range(H.order))
    assert iso(H, H, inner) == identity(H)


def test_pi_out_kills_proper_sections():
    H = grp("S3")
    for k in basis_keys(H, H):
        b = BisetElem.basis(H, H, k)
        f = H.full_section_index()
        if k.i != f or k.j != f:
            assert pi_out(b).coeffs == {}


def test_pi_out_matches_out_multiplication():
    H = grp("V4")
    O = out_of(H).group
    for a in range(O.order):
        for b in range(O.order):
            assert pi_out(compose(out_iso(H, a), out_iso(H, b))).coeffs == {O.mul[a][b]: 1}


def test_ambient_mismatch():
    with pytest.raises(BisetError):
        compose(identity(grp("C2")), identity(grp("C3")))


def test_labels():
    G = grp("A4")
    H = grp("C3")
    labels = [describe_key(G, H, k) for k in basis_keys(G, H, right_section=H.full_section_index())]
    assert len(labels) == 4 and len(set(labels)) == 4


SMALL = ["C2", "C3", "C4", "V4", "S3", "C6", "D8", "Q8", "A4", "D12", "S4"]


def _random_key(X, Y, rnd):
    return rnd.choice(basis_keys(X, Y))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_star_product_matches_brute_force(x, y, z, rnd):
    X, Y, Z = grp(x), grp(y), grp(z)
    a, b = _random_key(X, Y, rnd), _random_key(Y, Z, rnd)
    assert compose_keys(X, Y, Z, a, b) == brute_compose(X, Y, Z, a, b)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(SMALL), min_size=4, max_size=4), st.randoms(use_true_random=False))
def test_associativity(names, rnd):
    W, X, Y, Z = (grp(n) for n in names)
    a = BisetElem.basis(W, X, _random_key(W, X, rnd))
    b = BisetElem.basis(X, Y, _random_key(X, Y, rnd))
    c = BisetElem.basis(Y, Z, _random_key(Y, Z, rnd))
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(SMALL), min_size=3, max_size=3), st.randoms(use_true_random=False))
def test_opposite_is_anti_homomorphism(names, rnd):
    X, Y, Z = (grp(n) for n in names)
    a = BisetElem.basis(X, Y, _random_key(X, Y, rnd))
    b = BisetElem.basis(Y, Z, _random_key(Y, Z, rnd))
    assert opposite(compose(a, b)) == compose(opposite(b), opposite(a))
    assert opposite(opposite(a)) == a


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_products_have_nonnegative_integer_coefficients(x, y, rnd):
    X, Y = grp(x), grp(y)
    a, b = _random_key(X, Y, rnd), _random_key(Y, X, rnd)
    for m in compose_keys(X, Y, X, a, b).values():
        assert isinstance(m, int) and m > 0


def test_linear_combinations():
    G = grp("C2")
    keys = basis_keys(G, G)
    a = BisetElem.basis(G, G, keys[0])
    b = BisetElem.basis(G, G, keys[1])
    s = 2 * a - b
    assert (s + b - 2 * a).is_zero()
    assert compose(s, a) == 2 * compose(a, a) - compose(b, a)
