from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from starsurgery import catalog
from starsurgery import exactlin as el
from starsurgery import swsearch as sw
from starsurgery.homblowup import BlowupClass, canonical, h_class, pair

F = Fraction
BASIS = sw.default_basis()
K11 = canonical(11)

# A reduced box around the canonical class; small enough for the unpruned oracle.
G7_INV = el.inverse_rational(BASIS.complement_gram)
P_INV = el.inverse_rational(BASIS.config.pairing_matrix())

SMALL = [[0, 2], [-1, 1], [0], [0, 2], [0], [0], [0], [-2, 0, 2], [-2, 0, 2]]


@pytest.fixture(scope="module")
def full_run():
    return sw.run_pipeline(workers=1)


def test_basis_is_orthogonal_to_the_plumbing():
    assert BASIS.check() == []
    g = BASIS.gram
    assert [g[i][i] for i in range(9)] == [-4, -7, -2, -2, -2, -2, -2, -4, -4]


def test_basis_check_reports_problems():
    bad = sw.SearchBasis((h_class(11),) + BASIS.A[1:], BASIS.t2_gram, BASIS.config, -7, 11, -10, 14)
    assert any("A1" in p for p in bad.check())


def test_box_size():
    g = BASIS.gram
    sizes = [len(r) for r in sw.char_ranges([g[i][i] for i in range(9)])]
    assert sizes == [5, 8, 3, 3, 3, 3, 3, 5, 5]


def test_full_counts(full_run):
    assert full_run.counts == (243000, 25040, 600960, 219064, 25040, 2)
    assert full_run.walls == []


def test_each_class_glues_to_one_phi_element(full_run):
    # stage 5 keeps exactly one C for every stage-2 class
    assert full_run.counts[4] == full_run.counts[1]


def test_survivors_are_plus_minus_canonical(full_run):
    classes = sorted(tuple(s["class"]) for s in full_run.survivors)
    assert classes == sorted([K11.coeffs, (-K11).coeffs])
    assert all(s["d_X"] == "0" for s in full_run.survivors)


def test_lift_of_canonical():
    B, C = sw.restriction_pairings(K11)
    assert C == [3, 0, 0, 0, 0]
    assert sw.lift_class(B, C) == [F(x) for x in K11.coeffs]


@settings(max_examples=40)
@given(
    st.lists(st.integers(-7, 7), min_size=7, max_size=7),
    st.sampled_from(catalog.PHI_PRINTED),
)
def test_lift_square_splits(B, C):
    # the A's and the u's span orthogonal pieces, so the square splits
    ell = sw.lift_class(B, C)
    sq = ell[0] ** 2 - sum(x * x for x in ell[1:])
    qB = sum(B[i] * G7_INV[i][j] * B[j] for i in range(7) for j in range(7))
    qC = sum(C[i] * P_INV[i][j] * C[j] for i in range(5) for j in range(5))
    assert sq == qB + qC


def test_pipeline_matches_bruteforce():
    fast = sw.run_pipeline(ranges=SMALL)
    counts, surv = sw.brute_force_pipeline(BASIS, catalog.PHI_PRINTED, catalog.V_VECTOR, SMALL)
    assert fast.counts == counts
    assert [(tuple(s["t"]), tuple(s["phi"]), tuple(s["class"])) for s in fast.survivors] == surv
    assert counts[-1] == 2


@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_does_not_change_output(workers):
    a = sw.run_pipeline(ranges=SMALL, workers=1).as_dict()
    b = sw.run_pipeline(ranges=SMALL, workers=workers).as_dict()
    assert a == b


def test_full_run_with_workers(full_run):
    assert sw.run_pipeline(workers=2).as_dict() == full_run.as_dict()


def test_wall_ambiguity():
    V = BlowupClass(11, (0, 1, -1) + (0,) * 9)  # e1 - e2 pairs to zero with K
    with pytest.raises(sw.WallAmbiguity) as err:
        sw.run_pipeline(V=V, ranges=SMALL)
    assert err.value.report.walls
    rep = sw.run_pipeline(V=V, ranges=SMALL, raise_on_wall=False)
    assert rep.walls and all(pair(BlowupClass(11, tuple(w["class"])), V) == 0 for w in rep.walls)


def test_timings_only_on_request(full_run):
    assert "timings" not in full_run.as_dict()
    assert set(full_run.as_dict(timings=True)["timings"]) == {"stage1-3", "stage4-6"}


def test_max_characteristic_square():
    assert sw.max_characteristic_square(catalog.T2_GRAM) == 0
    assert sw.max_characteristic_square([[-3]]) == F(-1, 3)


def test_knot_surgery_values():
    rep = sw.knot_surgery_checks(3)
    v = rep.values
    assert (v["d_X(K)"], v["d_Y(K~)"]) == ("0", "0")
    assert v["K_restricted_square"] == "-3"
    assert v["P_restricted_square"] == "-1/3"
    assert v["minimality_constant"] == "-2/3"
    assert v["d_Y(P~)_supremum"] == "-2/3"
    assert rep.checks["minimality_bound"]
    assert (v["chi_Y"], v["sigma_Y"]) == (10, -6)
    # the printed H needs the -6e5 correction
    assert not rep.checks["chamber_vector_printed"]
    assert rep.checks["chamber_vector_rederived"] and rep.checks["no_wall_K"]


def test_knot_surgery_rejects_small_n():
    with pytest.raises(ValueError):
        sw.knot_surgery_checks(1)
