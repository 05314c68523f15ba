from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from starsurgery import exactlin as el


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def square(n_max=4, lo=-6, hi=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


@given(matrices())
def test_snf_witnesses(m):
    snf = el.smith_normal_form(m)
    assert el.matmul(el.matmul(snf.U, m), snf.V) == snf.D
    assert abs(el.determinant(snf.U)) == 1
    assert abs(el.determinant(snf.V)) == 1
    diag = snf.diagonal
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    # zeros come last and nothing sits off the diagonal
    assert diag == nz + [0] * (len(diag) - len(nz))
    for i, row in enumerate(snf.D):
        for j, x in enumerate(row):
            assert i == j or x == 0


@given(matrices(3, 3))
def test_snf_matches_sympy(m):
    ours = [d for d in el.smith_normal_form(m).diagonal if d]
    theirs = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    ref = [abs(int(theirs[i, i])) for i in range(min(theirs.shape)) if theirs[i, i] != 0]
    assert sorted(ours) == sorted(ref)


@given(square())
def test_determinant_matches_sympy(m):
    assert el.determinant(m) == int(sympy.Matrix(m).det())


@given(square(4, -5, 5), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_solve_rational(m, t):
    n = len(m)
    t = t[:n]
    if el.determinant(m) == 0:
        with pytest.raises(el.SingularMatrix):
            el.solve_rational(m, t)
        return
    x = el.solve_rational(m, t)
    assert el.matvec(m, x) == [Fraction(v) for v in t]


def test_inverse_and_common_denominator():
    g = [[-4, 2], [2, -4]]
    inv = el.inverse_rational(g)
    assert el.matmul(g, inv) == el.identity(2)
    den, num = el.common_denominator(inv)
    assert den == 6 and num == [[-2, -1], [-1, -2]]


def test_cokernel_and_describe():
    assert el.cokernel([[2, 0], [0, 3]], 2) == (0, [6])
    assert el.cokernel([], 2) == (2, [])
    assert el.describe_group(*el.cokernel([[4, 0, 0]], 3)) == "Z+Z+Z/4"
    assert el.describe_group(0, []) == "0"


@given(matrices(3, 5))
def test_integer_kernel(m):
    ker = el.integer_kernel(m)
    for v in ker:
        assert all(x == 0 for x in el.matvec(m, v))
    rank = el.smith_normal_form(m).rank
    assert len(ker) == len(m[0]) - rank


def symmetric(n_max=5):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, n_max))
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g[i][j] = g[j][i] = draw(st.integers(-5, 5))
        return g

    return build()


@given(symmetric())
def test_profile_matches_eigenvalues(g):
    prof = el.quadratic_form_profile(g)
    ev = np.linalg.eigvalsh(np.array(g, dtype=float))
    tol = 1e-9  # eigenvalues of small integer matrices; only the sign is compared
    assert prof.b_plus == int((ev > tol).sum())
    assert prof.b_minus == int((ev < -tol).sum())
    assert prof.b_zero == len(g) - prof.b_plus - prof.b_minus
    assert prof.signature == prof.b_plus - prof.b_minus


def test_profile_labels():
    assert el.quadratic_form_profile([[-4, 2], [2, -4]]).definiteness == "negative-definite"
    assert el.quadratic_form_profile([[1, 0], [0, -1]]).definiteness == "indefinite"
    with pytest.raises(el.NotSymmetric):
        el.quadratic_form_profile([[1, 2], [0, 1]])


@given(symmetric(4))
def test_congruence_diagonal_counts(g):
    diag = el.congruence_diagonal(g)
    prof = el.quadratic_form_profile(g)
    assert sum(1 for d in diag if d > 0) == prof.b_plus
    assert sum(1 for d in diag if d < 0) == prof.b_minus
