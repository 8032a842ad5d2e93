import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bisetkit import cache, config
from bisetkit.catalog import GroupSpecError, describe_group, make_group
from bisetkit.groups import (GroupError, OrderBoundError, PermutationGroup, automorphisms,
                             direct_product, find_isomorphism, is_isomorphic, parse_cycles)

from conftest import grp


@pytest.mark.parametrize("spec,order", [
    ("1", 1), ("C1", 1), ("C6", 6), ("D8", 8), ("D4", 4), ("Q8", 8), ("Q12", 12), ("S4", 24),
    ("A5", 60), ("V4", 4), ("SL(2,5)", 120), ("PSL(2,7)", 168), ("GL(3,2)", 168),
    ("C2xC2", 4), ("S3xC3", 18), ("perm:(1 2 3),(1 2)", 6), ("perm(5):(1 2)", 2),
])
def test_catalog_orders(spec, order):
    assert make_group(spec).order == order


@pytest.mark.parametrize("bad", ["", "X7", "D7", "GL(2,4)x", "perm:(1 1)", "SL(3,2)"])
def test_bad_specs(bad):
    with pytest.raises(GroupError):
        make_group(bad)


def test_order_bound():
    with pytest.raises(OrderBoundError):
        make_group("S6", max_order=100)


@pytest.mark.parametrize("spec,b,c", [
    ("C2", 2, 2), ("C4", 3, 3), ("V4", 5, 4), ("S3", 4, 3), ("D8", 8, 5), ("Q8", 6, 5),
    ("A4", 5, 3), ("S4", 11, 5), ("A5", 9, 4), ("C6", 4, 4),
])
def test_subgroup_class_counts(spec, b, c):
    G = grp(spec)
    reps = G.subgroup_classes()
    assert len(reps) == b
    assert sum(1 for A in reps if G.is_cyclic_subgroup(A)) == c


def test_subgroup_classes_cover_lattice():
    G = grp("S4")
    total = sum(G.subgroup_class_size(i) for i in range(len(G.subgroup_classes())))
    assert total == len(G.all_subgroups()) == 30


def test_sections_of_c4():
    assert len(grp("C4").section_classes()) == 6


def test_locate_section_conjugates():
    G = grp("A4")
    for i, sp in enumerate(G.section_classes()):
        for g in range(0, G.order, 5):
            S, T = G.conjugate(sp.S, g), G.conjugate(sp.T, g)
            assert G.locate_section(S, T)[0] == i


def test_quotient_is_a_group_hom():
    G = grp("S4")
    V = next(A for A in G.subgroup_classes() if len(A) == 4 and G.is_normal(A))
    Qd = G.quotient(G.all, V)
    assert Qd.group.order == 6
    for a, b in itertools.product(range(G.order), repeat=2):
        assert Qd.proj[G.mul[a][b]] == Qd.group.mul[Qd.proj[a]][Qd.proj[b]]


def test_double_cosets_partition():
    G = grp("S4")
    A, B = G.subgroup_classes()[3], G.subgroup_classes()[5]
    reps = G.double_cosets(A, B)
    covered = set()
    for g in reps:
        dc = {G.mul[G.mul[a][g]][b] for a in A for b in B}
        assert not covered & dc
        covered |= dc
    assert len(covered) == G.order


@pytest.mark.parametrize("a,b,iso", [
    ("D4", "V4", True), ("C2xC2", "V4", True), ("S3", "D6", True), ("Q8", "D8", False),
    ("C6", "C2xC3", True), ("PSL(2,7)", "GL(3,2)", True), ("SL(2,5)", "S5", False),
])
def test_isomorphism(a, b, iso):
    assert is_isomorphic(make_group(a), make_group(b)) is iso


@pytest.mark.parametrize("spec,n", [("C5", 4), ("V4", 6), ("S3", 6), ("D8", 8), ("Q8", 24), ("A4", 24)])
def test_automorphism_counts(spec, n):
    assert len(automorphisms(grp(spec))) == n


def test_aut_bound():
    with pytest.raises(OrderBoundError):
        automorphisms(make_group("S5"))


@pytest.mark.parametrize("spec,name", [("C2xC2", "V4"), ("D6", "S3"), ("Q12", "Q12"), ("perm:(1 2 3 4)", "C4")])
def test_describe(spec, name):
    assert describe_group(make_group(spec)) == name


def test_parse_cycles_one_based():
    assert parse_cycles("(1 2 3)", 4) == (1, 2, 0, 3)


def test_lattice_cache_roundtrip(tmp_path):
    cache.enable(tmp_path)
    try:
        config.reset_stats()
        make_group("S4").subgroup_classes()
        assert config.STATS["subgroup_enumerations"] == 1
        config.reset_stats()
        make_group("S4").subgroup_classes()
        assert config.STATS["subgroup_enumerations"] == 0
        assert config.STATS["cache_hits"] >= 1
        old = config.ENGINE_VERSION
        config.ENGINE_VERSION = old + "-bump"
        try:
            config.reset_stats()
            make_group("S4").subgroup_classes()
            assert config.STATS["subgroup_enumerations"] == 1
        finally:
            config.ENGINE_VERSION = old
    finally:
        cache.disable()


def test_corrupt_cache_is_ignored(tmp_path):
    cache.enable(tmp_path)
    try:
        make_group("D8").subgroup_classes()
        for p in tmp_path.glob("*.pkl"):
            p.write_bytes(b"garbage")
        assert len(make_group("D8").subgroup_classes()) == 8
    finally:
        cache.disable()


perm = st.permutations(range(5)).map(tuple)


@settings(max_examples=30, deadline=None)
@given(st.lists(perm, min_size=1, max_size=3))
def test_generated_group_closure(gens):
    G = PermutationGroup(gens, degree=5)
    assert 120 % G.order == 0
    for a in range(G.order):
        assert G.mul[a][G.inv[a]] == 0
    assert G.closure(G.generators_idx) == G.all


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["C3", "S3", "C4", "V4", "D8"]), st.sampled_from(["C2", "C3", "V4"]))
def test_direct_product_order(a, b):
    P = direct_product(make_group(a), make_group(b))
    assert P.order == make_group(a).order * make_group(b).order
    assert find_isomorphism(P, make_group(f"{a}x{b}")) is not None
