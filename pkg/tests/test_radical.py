from fractions import Fraction

import pytest

from bisetkit.bisets import BisetElem, basis_keys, compose, ind, res
from bisetkit.functor import project_std, split_pair_witness, std_basis, std_elem
from bisetkit.linalg import mat_rank, matmul, trace
from bisetkit.radical import (ActionAlgebra, Echelon, RadicalError, _flat, action_matrix,
                              algebra_closure, algebra_radical_dim, composition_factors,
                              idempotent_pair_action, image_algebra, mark_idempotents,
                              module_radical, radical_contained_in_kernel, rq_action_check,
                              trace_form_radical, trivial_group, trivial_ideal_dims)

from conftest import grp

MODULE_PAIRS = [("S3", "C2"), ("S3", "C3"), ("C4", "C2"), ("D8", "C2"), ("D8", "V4"), ("A4", "C3"),
                ("A4", "V4"), ("A4", "1"), ("S4", "C2"), ("S4", "C3"), ("S4", "S3"), ("Q8", "C4"),
                ("D12", "C2"), ("C3xS3", "C3"), ("A5", "C3"), ("C2xC4", "C4")]


def _matrix_units(n):
    out = []
    for i in range(n):
        for j in range(n):
            out.append([[Fraction(int((r, c) == (i, j))) for c in range(n)] for r in range(n)])
    return out


def test_closure_single_idempotent():
    e = [[1, 0], [0, 0]]
    A = algebra_closure([e])
    assert A.dim == 2


def test_closure_matrix_units():
    A = algebra_closure(_matrix_units(3)[:2] + _matrix_units(3)[3:4])
    assert A.dim <= 9
    assert algebra_closure(_matrix_units(3)).dim == 9


def test_closure_generated_by_shift():
    shift = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert algebra_closure([shift]).dim == 3


def test_matrix_units_semisimple():
    A = algebra_closure(_matrix_units(2))
    assert trace_form_radical(A) == []


def test_upper_triangular_radical():
    A = algebra_closure([[[1, 0], [0, 0]], [[0, 1], [0, 0]]])
    assert A.dim == 3
    J = trace_form_radical(A)
    assert len(J) == 1
    assert J[0][1][0] == 0 and J[0][0][0] == 0 and J[0][1][1] == 0


def test_non_nilpotent_radical_detected():
    # a span that is not an algebra: the 3-cycle x has tr(x^2) = 0 but is not nilpotent
    x = [[Fraction(int(c == (r + 1) % 3)) for c in range(3)] for r in range(3)]
    with pytest.raises(RadicalError):
        trace_form_radical(ActionAlgebra(3, [x]))


def test_action_identity():
    G, H = grp("S3"), grp("C2")
    B = std_basis(G, H)
    ident = BisetElem.basis(G, G, basis_keys(G, G, left_section=G.full_section_index(),
                                             right_section=G.full_section_index())[0])
    M = action_matrix(ident, B)
    assert mat_rank(M) == len(B)


def test_action_through_trivial_group_is_zero():
    G, H = grp("A4"), grp("C3")
    one = trivial_group()
    B = std_basis(G, H)
    for k1 in basis_keys(G, one):
        for k2 in basis_keys(one, G):
            gamma = compose(BisetElem.basis(G, one, k1), BisetElem.basis(one, G, k2))
            M = action_matrix(gamma, B)
            assert all(x == 0 for row in M for x in row)


def test_action_trace_two_ways():
    G, H = grp("A4"), grp("C3")
    C3 = next(S for S in G.subgroup_classes() if len(S) == 3)
    gamma = compose(ind(G, C3), res(G, C3))
    B = std_basis(G, H)
    M = action_matrix(gamma, B)
    direct = 0
    for n, k in enumerate(B.keys):
        image = compose(gamma, BisetElem.basis(G, H, k))
        direct += project_std(image, B)[n]
    assert trace(M) == direct


def test_a4_c3_closure_stable():
    G, H = grp("A4"), grp("C3")
    A = image_algebra(G, H)
    assert A.dim <= 16
    again = algebra_closure(A.basis, A.size)
    assert again.dim == A.dim


def _direct_image_algebra(G, H):
    B = std_basis(G, H)
    ech = Echelon(len(B) ** 2)
    for k in basis_keys(G, G):
        ech.add(_flat(action_matrix(BisetElem.basis(G, G, k), B)))
    return len(ech)


@pytest.mark.parametrize("g,h", [("S3", "C2"), ("C4", "C2"), ("A4", "C3"), ("D8", "V4"),
                                 ("S4", "C3"), ("Q8", "C4"), ("S3", "1")])
def test_factorized_image_algebra_matches_direct(g, h):
    G, H = grp(g), grp(h)
    assert image_algebra(G, H).dim == _direct_image_algebra(G, H)


@pytest.mark.parametrize("g,h", MODULE_PAIRS)
def test_radical_in_kernel(g, h):
    rad = module_radical(grp(g), grp(h))
    assert rad.dim_J <= rad.dim_R
    assert radical_contained_in_kernel(rad)


@pytest.mark.parametrize("g,h", MODULE_PAIRS)
def test_radical_nilpotent_and_closed(g, h):
    G, H = grp(g), grp(h)
    A = image_algebra(G, H)
    J = trace_form_radical(A)
    if A.dim <= 40:
        assert algebra_closure(A.basis + J, A.size).dim == A.dim
    else:
        # J is a two-sided ideal; sampled products stay inside it
        ech = Echelon(A.size ** 2)
        for X in J:
            ech.add(_flat(X))
        for X in J[:4]:
            for Y in A.basis[::7]:
                assert ech.contains(_flat(matmul(X, Y))) and ech.contains(_flat(matmul(Y, X)))
    assert module_radical(G, H).loewy[-1] == 0


@pytest.mark.parametrize("g,h", MODULE_PAIRS)
def test_split_pair_forces_equality(g, h):
    G, H = grp(g), grp(h)
    if G.is_abelian and h == "1":
        pytest.skip("trivial")
    rad = module_radical(G, H)
    if split_pair_witness(G, H) is not None:
        assert rad.dim_J == rad.dim_R


@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "S3", "A4"])
def test_self_module_semisimple(spec):
    G = grp(spec)
    assert module_radical(G, G).dim_J == 0


def test_a4_c3_module():
    rad = module_radical(grp("A4"), grp("C3"))
    assert (rad.dim_M, rad.dim_R, rad.dim_J) == (4, 2, 2)


def test_a5_c3_module():
    rad = module_radical(grp("A5"), grp("C3"))
    assert (rad.dim_M, rad.dim_R, rad.dim_J) == (3, 2, 1)


def test_a4_c3_factors():
    facs = composition_factors(grp("A4"), grp("C3"))
    top = sorted(f.label for f in facs if f.layer == 0)
    low = [f for f in facs if f.layer > 0]
    assert top == ["S_{C3,eps}", "S_{C3,k}"]
    assert sorted(f.dim for f in low for _ in range(f.multiplicity)) == [1, 1]


def test_a5_c3_factors():
    facs = composition_factors(grp("A5"), grp("C3"))
    assert sorted(f.label for f in facs if f.layer == 0) == ["S_{A4,eps}", "S_{C3,k}"]
    assert [f.label for f in facs if f.layer > 0] == ["S_{A4,k}"]


@pytest.mark.parametrize("g,h", MODULE_PAIRS)
def test_factor_dimensions_add_up(g, h):
    G, H = grp(g), grp(h)
    rad = module_radical(G, H)
    facs = composition_factors(G, H)
    assert sum(f.dim * f.multiplicity * f.galois_degree for f in facs) == rad.dim_M
    top = sum(f.dim * f.multiplicity * f.galois_degree for f in facs if f.layer == 0)
    assert top == rad.dim_M - rad.dim_J


@pytest.mark.parametrize("spec,expected", [("C2", 0), ("C3", 0), ("C4", 0), ("C5", 0), ("C6", 0),
                                           ("V4", None), ("S3", None), ("C2xC4", None)])
def test_algebra_radical_zero_iff_cyclic(spec, expected):
    G = grp(spec)
    d = algebra_radical_dim(G)
    if expected == 0:
        assert d == 0
    else:
        assert d > 0


def test_d8_algebra_radical():
    assert algebra_radical_dim(grp("D8")) == 39


@pytest.mark.parametrize("spec", ["1", "C2", "C4", "S3", "V4", "D8", "A4", "S4"])
def test_mark_idempotents(spec):
    mt = mark_idempotents(grp(spec))  # verifies orthogonality and the partition of unity
    n = len(mt.subgroups)
    for a in range(n):
        for b in range(a):
            assert mt.marks[b][a] == 0 or len(mt.subgroups[b]) >= len(mt.subgroups[a])


def test_c2_idempotents():
    mt = mark_idempotents(grp("C2"))
    assert mt.idempotent(0) == [Fraction(1, 2), 0]
    assert mt.idempotent(1) == [Fraction(-1, 2), 1]


def test_trivial_group_idempotent():
    mt = mark_idempotents(trivial_group())
    assert mt.idempotent(0) == [1]


def test_rq_action_full():
    G = grp("S4")
    got = rq_action_check(G, G.all, G.all, G.all)
    assert got["scalar"] == 1


def test_rq_action_s3():
    G = grp("S3")
    C3 = next(S for S in G.subgroup_classes() if len(S) == 3)
    C2 = next(S for S in G.subgroup_classes() if len(S) == 2)
    got = rq_action_check(G, C3, C2, frozenset([0]))
    assert got["scalar"] == 3


@pytest.mark.parametrize("spec", ["S3", "D8", "A4"])
def test_rq_action_all_cyclic_triples(spec):
    G = grp(spec)
    reps = G.subgroup_classes()
    for A in reps:
        if not G.is_cyclic_subgroup(A):
            continue
        for B in reps:
            if G.is_cyclic_subgroup(B):
                for C in reps:
                    rq_action_check(G, A, B, C)


@pytest.mark.parametrize("spec", ["V4", "D8", "A4", "S4"])
def test_noncyclic_idempotent_pair_acts_as_zero(spec):
    G = grp(spec)
    reps = G.subgroup_classes()
    for a, A in enumerate(reps):
        for b, B in enumerate(reps):
            if not G.is_cyclic_subgroup(B):
                cols = idempotent_pair_action(G, a, b)
                assert all(x == 0 for col in cols for x in col)


def test_trivial_ideal_d8():
    t = trivial_ideal_dims(grp("D8"))
    assert (t["b"], t["c"], t["dim_I"], t["dim_Ic"], t["dim_I_cap_J"]) == (8, 5, 64, 25, 39)
    assert t["dim_J"] == 39 and t["I_cap_J_equals_J"] and t["I_prime_in_J"]


def test_trivial_ideal_q8():
    t = trivial_ideal_dims(grp("Q8"))
    assert (t["b"], t["c"], t["dim_I"], t["dim_Ic"], t["dim_I_cap_J"]) == (6, 5, 36, 25, 11)
    assert t["I_cap_J_equals_J"]


@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "C6"])
def test_trivial_ideal_cyclic(spec):
    t = trivial_ideal_dims(grp(spec))
    assert t["b"] == t["c"] and t["dim_I_cap_J"] == 0
    assert t["dim_I_cap_J_computed"] == 0


@pytest.mark.parametrize("spec", ["S3", "V4", "A4"])
def test_trivial_ideal_formula_matches_computation(spec):
    t = trivial_ideal_dims(grp(spec))
    assert t["dim_I_cap_J_computed"] == t["dim_I_cap_J"]
    assert t["I_prime_in_J"]


def test_sl27_c3(big_aut):
    from bisetkit.reproduce import run_case
    rep = run_case("sl27-c3")
    assert rep["ok"], [r for r in rep["results"] if not r["ok"]]
