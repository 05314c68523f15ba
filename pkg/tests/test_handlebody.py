from __future__ import annotations

import pytest
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from starsurgery import catalog
from starsurgery import exactlin as el
from starsurgery import handlebody as hb

T2 = catalog.FILLINGS["T2"]


def sympy_order(p: hb.GroupPresentation) -> int:
    F, *gens = free_group(",".join(f"y{i}" for i in range(1, p.generators + 1)))
    rels = []
    for r in p.relators:
        w = F.identity
        for x in r:
            w = w * (gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1] ** -1)
        rels.append(w)
    return int(FpGroup(F, rels).order())


def test_t2_suite():
    hr = hb.homology_report(T2, catalog.FILLING_CYCLES["T2"])
    assert (hr.chi, hr.sigma, hr.h2_rank) == (3, -2, 2)
    assert hr.gram == [[-4, 2], [2, -4]]
    assert hb.pi1_report(T2).order == 2
    assert [hb.c1_evaluate(T2, c) for c in hr.cycles] == [0, 0]
    assert hb.boundary_H1(T2) == (0, [2, 2, 12])
    assert hb.cohomology_h2(T2) == (2, [2])
    assert hb.restriction_index(T2) == 2


@pytest.mark.parametrize(
    "key,order,gram",
    [("R", 1, [[-10, -23], [-23, -79]]), ("V", 1, [[-30, 5], [5, -49]]), ("L", 4, [[-4]])],
)
def test_other_fillings(key, order, gram):
    h = catalog.FILLINGS[key]
    assert hb.pi1_report(h).order == order
    hr = hb.homology_report(h, catalog.FILLING_CYCLES[key])
    assert hr.gram == gram
    assert hr.definiteness == "negative-definite"


def test_l_fundamental_group_is_cyclic():
    rep = hb.pi1_report(catalog.FILLINGS["L"])
    assert rep.abelianization == "Z/4" and rep.order == 4


@pytest.mark.parametrize("key", ["T1", "T2", "L", "R"])
def test_coset_enumeration_matches_sympy(key):
    p = hb.presentation(catalog.FILLINGS[key])
    assert hb.coset_enumeration(p) == sympy_order(p)


def test_coset_enumeration_known_groups():
    s3 = hb.GroupPresentation(2, ((1, 1), (2, 2, 2), (1, 2, 1, 2)))
    assert hb.coset_enumeration(s3) == 6
    assert hb.coset_enumeration(hb.GroupPresentation(1, ((1,) * 5,))) == 5
    q8 = hb.GroupPresentation(2, ((1, 1, 1, 1), (1, 1, -2, -2), (-2, 1, 2, 1)))
    assert hb.coset_enumeration(q8) == 8


def test_enumeration_budget():
    big = hb.GroupPresentation(2, ((1,) * 60, (2,) * 60, (1, 2, -1, -2)))
    with pytest.raises(hb.EnumerationBudgetExceeded):
        hb.coset_enumeration(big, max_cosets=500)
    rep = hb.pi1_report(hb.Handlebody.from_subsets(2, []), max_cosets=10)
    assert rep.free_rank == 2 and rep.order is None


def test_euler_characteristic_formula():
    for i in range(1, 7):
        h = catalog.t_filling(i)
        assert h.euler_characteristic == (i + 1) * (i + 2) // 2 - (i + 2) + 1


def test_t1_boundary():
    # |H_1| equals |det| of the linking matrix, which is 4
    t1 = catalog.FILLINGS["T1"]
    assert hb.boundary_H1(t1) == (0, [4])
    assert abs(el.determinant(hb.linking_matrix(t1))) == 4


@pytest.mark.parametrize("key", ["T1", "T2", "L", "R"])
def test_restriction_index_bruteforce(key):
    h = catalog.FILLINGS[key]
    assert hb.restriction_index(h) == hb.restriction_index_bruteforce(h)


def test_restriction_index_t3():
    h = catalog.t_filling(3)
    assert hb.restriction_index(h) == hb.restriction_index_bruteforce(h)


def test_linking_matrix_symmetric():
    for h in catalog.FILLINGS.values():
        assert el.is_symmetric(hb.linking_matrix(h))


def test_cycle_errors():
    with pytest.raises(hb.NotACycle):
        hb.c1_evaluate(T2, [1, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        hb.homology_report(T2, [[1, -1, 0, 0, -1, 1]])  # only half a basis
    with pytest.raises(ValueError):
        hb.Handlebody.from_subsets(3, [(1, 4)])


def test_small_cycles_match_kernel():
    cycles = hb.all_cycles_small(T2, 1)
    ker = el.integer_kernel(T2.boundary_matrix())
    assert all(hb.spans_same_lattice([c], [c]) for c in cycles if any(c))
    for c in cycles:
        assert not any(hb.boundary_of(T2, c))
    assert len(ker) == 2


def test_abelianization_vs_homology():
    for key, h in catalog.FILLINGS.items():
        free, tors = hb.abelianization(hb.presentation(h))
        hr = hb.homology_report(h)
        assert (free, tors) == (hr.h1_free, hr.h1_torsion), key
