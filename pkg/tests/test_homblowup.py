from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from starsurgery import catalog
from starsurgery import exactlin as el
from starsurgery import homblowup as hbu
from starsurgery.homblowup import BlowupClass, canonical, pair, parse_class

F = Fraction


def classes(N=6):
    return st.lists(st.integers(-20, 20), min_size=N + 1, max_size=N + 1).map(lambda c: BlowupClass(N, tuple(c)))


@given(classes(), classes(), classes(), st.integers(-5, 5))
def test_pairing_bilinear_symmetric(x, y, z, k):
    assert pair(x, y) == pair(y, x)
    assert pair(x + y, z) == pair(x, z) + pair(y, z)
    assert pair(k * x, y) == k * pair(x, y)


@given(classes())
def test_canonical_is_characteristic(x):
    K = canonical(x.N)
    assert (pair(x, x) - pair(x, K)) % 2 == 0


@given(classes())
def test_text_round_trip(x):
    assert parse_class(str(x), x.N) == x


def test_parse_examples():
    assert parse_class("h", 11).coeffs == (1,) + (0,) * 11
    assert parse_class("2h-e1-2e10-2e11", 11).coeffs == (2, -1) + (0,) * 8 + (-2, -2)
    with pytest.raises(ValueError):
        parse_class("h+e12", 11)
    with pytest.raises(hbu.DimensionMismatch):
        BlowupClass(3, (1, 0))


def test_fiber_and_canonical():
    f = hbu.fiber(9)
    assert pair(f, f) == 0 and f == -canonical(9)
    assert pair(canonical(11), canonical(11)) == -2


@pytest.mark.parametrize("key", ["S2", "Q", "U", "K", "S2-knot"])
def test_configurations(key):
    rep = hbu.verify_configuration(catalog.CONFIGURATIONS[key])
    assert rep.ok, rep.failures


def test_printed_q_centre_fails_and_transposition_fixes_it():
    rep = hbu.verify_configuration(catalog.Q_CONFIG_PRINTED)
    assert not rep.ok
    swapped = list(catalog.Q_U0_PRINTED.coeffs)
    swapped[1], swapped[2] = swapped[2], swapped[1]
    assert BlowupClass(12, tuple(swapped)) == catalog.Q_U0


@pytest.mark.parametrize("key", sorted(catalog.ALL_FIBERS))
def test_fibers(key):
    rep = hbu.verify_fiber_decomposition(catalog.ALL_FIBERS[key])
    assert rep.ok, rep.failures


def test_fiber_rejects_wrong_sum():
    comps = catalog.ALL_FIBERS["fibration3.I5a"][:-1]
    assert not hbu.verify_fiber_decomposition(comps).ok


def test_v_chamber_vector():
    rep = hbu.verify_chamber_vector(catalog.V_VECTOR, catalog.S2_CONFIG, 1)
    assert rep.ok
    assert rep.values["square"] == 228 and rep.values["dot_K"] == 18


def test_r_prime_chamber_vector():
    assert hbu.verify_chamber_vector(catalog.R_PRIME_VECTOR, catalog.U_CONFIG, 1).ok


def test_printed_r_is_not_orthogonal_to_the_centre():
    rep = hbu.verify_chamber_vector(catalog.R_VECTOR, catalog.Q_CONFIG, 1)
    assert rep.values["orthogonality"] == [114, 0, 0, 0, 0, 0, 0]
    assert rep.values["transcription_discrepancy"]
    fixes = hbu.single_entry_fixes(catalog.R_VECTOR, catalog.Q_CONFIG)
    assert any(f.coeffs[11] == -57 for f in fixes)
    for f in fixes:
        assert all(pair(f, u) == 0 for u in catalog.Q_CONFIG.classes)


def test_printed_h_and_its_fix():
    K = catalog.KNOT_K
    rep = hbu.verify_chamber_vector(catalog.H_VECTOR, catalog.KNOT_CONFIG, -1, K)
    assert rep.values["orthogonality"] == [0, 1, 0, 0, 1]
    fixed = hbu.rederive_chamber_vector(catalog.H_VECTOR, catalog.KNOT_CONFIG, -1, K)
    assert fixed is not None and fixed.coeffs[5] == -6
    assert hbu.verify_chamber_vector(fixed, catalog.KNOT_CONFIG, -1, K).ok


def test_projection_is_orthogonal():
    p = hbu.project_orthogonal(catalog.R_VECTOR, catalog.Q_CONFIG)
    assert all(pair(p, u) == 0 for u in catalog.Q_CONFIG.classes)


def test_kodaira_functional():
    rep = hbu.kodaira_report(catalog.S2_CONFIG)
    assert rep.coefficients == (F(5), F(-2)) + (F(-3, 2),) * 8 + (F(-1), F(-1))
    assert rep.functional_str() == "5a-2b1-3/2b2-3/2b3-3/2b4-3/2b5-3/2b6-3/2b7-3/2b8-3/2b9-b10-b11"


def test_kodaira_independent_derivation():
    # K|_S . omega|_S through an explicit dual basis, checked against the report
    cfg = catalog.S2_CONFIG
    P = cfg.pairing_matrix()
    Pinv = el.inverse_rational(P)
    rng = random.Random(7)
    K = canonical(11)
    rep = hbu.kodaira_report(cfg)
    for _ in range(20):
        params = hbu.random_admissible(11, rng)
        omega = [params.a] + [-b for b in params.b]  # pairs as a*x_h + sum b_i x_i
        w = [omega[0] * u.coeffs[0] + sum(b * x for b, x in zip(params.b, u.coeffs[1:])) for u in cfg.classes]
        k = [pair(K, u) for u in cfg.classes]
        restricted = sum(k[i] * Pinv[i][j] * w[j] for i in range(5) for j in range(5))
        k_omega = -3 * params.a + sum(params.b)
        direct = k_omega - restricted
        assert direct == rep.coefficients[0] * params.a + sum(c * b for c, b in zip(rep.coefficients[1:], params.b))


def test_kodaira_positive_and_classified():
    rng = random.Random(0)
    for _ in range(500):
        r = hbu.kodaira_report(catalog.S2_CONFIG, params=hbu.random_admissible(11, rng), K_squared=1)
        assert r.value > 0 and r.kodaira_dimension == "2"


def test_kodaira_dimension_table():
    assert hbu.kodaira_dimension(-1, 0) == "-inf"
    assert hbu.kodaira_dimension(0, 0) == "0"
    assert hbu.kodaira_dimension(3, 0) == "1"
    assert hbu.kodaira_dimension(3, 1) == "2"
    assert hbu.kodaira_dimension(0, 1) is None


def test_inadmissible_params():
    with pytest.raises(hbu.InadmissibleParams):
        hbu.OmegaParams(1, (F(1, 2), F(1, 3), F(1, 4)))
    with pytest.raises(hbu.InadmissibleParams):
        hbu.OmegaParams(10, (F(1), F(2)))


@pytest.mark.parametrize(
    "key,expected",
    [
        ("S2->T2 in CP2#11", (11, -7)),
        ("Q->R in CP2#12", (10, -6)),
        ("U->V in CP2#13", (9, -5)),
        ("K->L in CP2#12", (11, -7)),
        ("S2->T2 in E(1)_K#CP2bar", (10, -6)),
    ],
)
def test_homeomorphism_arithmetic(key, expected):
    from starsurgery.cli import _surgery_numbers

    amb, plm, fil = _surgery_numbers(key)
    rep = hbu.homeo_type_report(amb[0], amb[1], plm, fil)
    assert (rep.chi, rep.sigma) == expected
    assert rep.b2_plus == 1 and rep.parity == "odd"


def test_blowup_invariants():
    assert hbu.blowup_invariants(11) == (14, -10)
    rep = hbu.homeo_type_report(14, -10, (0, 0), (0, 0))
    assert rep.K_squared == -2
