"""Exact integer and rational linear algebra.

Matrices are plain lists of row lists holding Python ints (or Fractions where
noted).  Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


class SingularMatrix(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = [list(r) for r in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i)
    )


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """Result of :func:`smith_normal_form`: ``U @ M @ V == D``."""

    D: Matrix
    U: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d not in (0, 1)]


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form with unimodular witnesses.

    Returns ``SmithForm(D, U, V)`` with ``U·M·V = D``, D diagonal with
    nonnegative entries forming a divisibility chain.
    """
    a = as_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row[dst] += q * row[src]
        if q:
            a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col[dst] += q * col[src]
        if q:
            for r in a:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]

    for t in range(min(rows, cols)):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        done = False
                        if abs(a[i][t]) < abs(a[t][t]):
                            swap_rows(t, i)
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        done = False
                        if abs(a[t][j]) < abs(a[t][t]):
                            swap_cols(t, j)
            if not done:
                continue
            # enforce divisibility of the rest of the block by the pivot
            bad = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if a[i][j] % a[t][t]
                ),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            negate_row(t)
    return SmithForm(a, U, V)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(m).invariant_factors


def cokernel(relations: Sequence[Sequence[int]], ngens: int | None = None) -> tuple[int, list[int]]:
    """Abelian group presented by ``ngens`` generators and the given relation rows.

    Returns ``(free_rank, torsion)`` where torsion lists the invariant factors
    greater than one.
    """
    rel = as_matrix(relations)
    if ngens is None:
        ngens = len(rel[0]) if rel else 0
    if not rel:
        return ngens, []
    snf = smith_normal_form(rel)
    return ngens - snf.rank, snf.invariant_factors


def describe_group(free_rank: int, torsion: Sequence[int]) -> str:
    parts = ["Z"] * free_rank + [f"Z/{d}" for d in torsion]
    return "+".join(parts) if parts else "0"


def integer_kernel(m: Sequence[Sequence[int]]) -> Matrix:
    """Basis (as rows) of the integer lattice ``{x : M x = 0}``."""
    a = as_matrix(m)
    cols = len(a[0]) if a else 0
    if not a:
        return identity(cols)
    snf = smith_normal_form(a)
    r = snf.rank
    # M V = U^{-1} D, so columns r.. of V span the kernel (a saturated basis).
    return [[snf.V[i][j] for i in range(cols)] for j in range(r, cols)]


# ---------------------------------------------------------------------------
# Rational solving
# ---------------------------------------------------------------------------


def _rref_solve(a: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[p] = a[p], a[c]
        rhs[c], rhs[p] = rhs[p], rhs[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        rhs[c] = [x * inv for x in rhs[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                rhs[r] = [x - f * y for x, y in zip(rhs[r], rhs[c])]
    return rhs


def solve_rational(m: Sequence[Sequence[int]], t: Sequence[int]) -> list[Fraction]:
    """Unique exact solution of ``M x = t``; raises SingularMatrix."""
    n = len(m)
    if any(len(r) != n for r in m) or len(t) != n:
        raise ValueError("solve_rational needs a square system")
    a = [[Fraction(x) for x in r] for r in m]
    rhs = [[Fraction(x)] for x in t]
    return [r[0] for r in _rref_solve(a, rhs)]


def inverse_rational(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in r] for r in m]
    return _rref_solve(a, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])


def common_denominator(m: Sequence[Sequence[Fraction]]) -> tuple[int, Matrix]:
    """Return ``(D, N)`` with integer N and ``m == N / D``."""
    den = 1
    for row in m:
        for x in row:
            d = Fraction(x).denominator
            den = den * d // gcd(den, d)
    return den, [[int(Fraction(x) * den) for x in row] for row in m]


# ---------------------------------------------------------------------------
# Quadratic forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticFormProfile:
    b_plus: int
    b_minus: int
    b_zero: int
    definiteness: str  # positive-definite | negative-definite | indefinite | degenerate

    @property
    def signature(self) -> int:
        return self.b_plus - self.b_minus


def congruence_diagonal(g: Sequence[Sequence[int]]) -> list[Fraction]:
    """Diagonal of a rational form congruent to ``g`` (symmetric elimination)."""
    n = len(g)
    a = [[Fraction(x) for x in r] for r in g]
    diag = []
    k = 0
    idx = list(range(n))
    while idx:
        p = next((i for i in idx if a[i][i] != 0), None)
        if p is None:
            # no nonzero diagonal: mix in an off-diagonal partner (x_i += x_j)
            pair = next(((i, j) for i in idx for j in idx if i != j and a[i][j] != 0), None)
            if pair is None:
                diag.extend(Fraction(0) for _ in idx)
                break
            i, j = pair
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            p = i
        piv = a[p][p]
        diag.append(piv)
        idx.remove(p)
        for i in idx:
            f = a[i][p] / piv
            if f:
                for j in idx:
                    a[i][j] -= f * a[p][j]
        k += 1
    return diag


def quadratic_form_profile(g: Sequence[Sequence[int]]) -> QuadraticFormProfile:
    if not is_symmetric(g):
        raise NotSymmetric("Gram matrix is not symmetric")
    diag = congruence_diagonal(g)
    bp = sum(1 for d in diag if d > 0)
    bm = sum(1 for d in diag if d < 0)
    bz = len(diag) - bp - bm
    if bz:
        kind = "degenerate"
    elif bm == 0:
        kind = "positive-definite"
    elif bp == 0:
        kind = "negative-definite"
    else:
        kind = "indefinite"
    return QuadraticFormProfile(bp, bm, bz, kind)


def quadratic_value(g: Sequence[Sequence], v: Sequence) -> Fraction | int:
    return dot(v, matvec(g, v))
