from fractions import Fraction

import pytest

from bisetkit.chartab import (character_table, find_character, permutation_character,
                              trace_coeff1, trace_tau_sum, tau_V)
from bisetkit.cyclotomic import ZERO, to_string
from bisetkit.bisets import out_of

from conftest import grp

GROUPS = ["C1", "C2", "C5", "V4", "C2xC4", "S3", "D8", "Q8", "A4", "S4", "A5", "Q12", "SL(2,3)", "C7xC3"]


@pytest.mark.parametrize("spec", GROUPS)
def test_degrees_square_sum(spec):
    G = grp(spec)
    t = character_table(G)
    assert sum(c.degree ** 2 for c in t) == G.order
    assert len(t) == len(G.conjugacy_classes)
    assert t[0].label == "k" and all(v == 1 for v in t[0].values)


@pytest.mark.parametrize("spec", GROUPS)
def test_row_orthogonality(spec):
    t = character_table(grp(spec))
    for a in t:
        for b in t:
            ip = t.inner_product(a.values, b.values)
            assert ip == (1 if a is b else 0)


@pytest.mark.parametrize("spec", ["C6", "V4", "C2xC4", "C3xC3", "C8"])
def test_dixon_agrees_with_abelian(spec):
    G = grp(spec)
    key = lambda c: tuple(to_string(v.normalized()) for v in c.values)
    a = sorted(map(key, character_table(G, method="abelian")))
    d = sorted(map(key, character_table(G, method="dixon")))
    assert a == d


def test_s3_table():
    G = grp("S3")
    t = character_table(G)
    rows = {c.label: [v.to_fraction() for v in c.values] for c in t}
    order = [G.elem_orders[r] for r in t.classes.reps]
    assert order == [1, 2, 3] or sorted(order) == [1, 2, 3]
    pos = {o: n for n, o in enumerate(order)}
    assert [rows["eps"][pos[o]] for o in (1, 2, 3)] == [1, -1, 1]
    assert [rows["2"][pos[o]] for o in (1, 2, 3)] == [2, 0, -1]


@pytest.mark.parametrize("alias", ["k", "k+", "trivial", "V:k"])
def test_trivial_aliases(alias):
    assert find_character(character_table(grp("S3")), alias).label == "k"


@pytest.mark.parametrize("alias", ["eps", "ε", "k-", "sign", "V:eps"])
def test_sign_aliases(alias):
    assert find_character(character_table(grp("S3")), alias).label == "eps"


def test_degree_lookup_and_errors():
    t = character_table(grp("S3"))
    assert find_character(t, "2").degree == 2
    assert find_character(t, "V:2").degree == 2
    with pytest.raises(KeyError):
        find_character(t, "3")
    with pytest.raises(KeyError):
        find_character(character_table(grp("C5")), "eps")


def test_out_v4_has_a_two_dimensional_character():
    O = out_of(grp("V4")).group
    assert O.order == 6
    assert find_character(character_table(O), "2").degree == 2


def test_tau_sum_is_sum_of_irreducibles():
    G = grp("S3")
    f = trace_tau_sum(G)
    # 1 + 1 + 2 at the identity, 1 - 1 + 0 on transpositions, 1 + 1 - 1 on 3-cycles
    assert [f(g) for g in range(6)] == [{1: 4, 2: 0, 3: 1}[G.elem_orders[g]] for g in range(6)]
    assert trace_coeff1(G)({0: 3, 1: 5}) == 3
    chi = find_character(character_table(G), "2")
    assert tau_V(G, chi)(0) == 2


@pytest.mark.parametrize("spec", ["S3", "A4", "D8"])
def test_permutation_character_decomposes(spec):
    G = grp(spec)
    t = character_table(G)
    for K in G.subgroup_classes():
        pc = permutation_character(G, K)
        total = ZERO
        for c in t:
            m = t.inner_product(pc, c.values)
            assert m.is_rational() and m.to_fraction().denominator == 1 and m.to_fraction() >= 0
            total = total + m * c.degree
        assert total == G.order // len(K)


def test_table_json_shape():
    obj = character_table(grp("C3")).to_json_obj()
    assert obj["labels"][0] == "k"
    assert len(obj["class_sizes"]) == 3
