"""Adjunctive basic-class search after replacing S_2 by T_2 in CP^2 # 11.

A class L on X is recorded by t = (<L,A_1>, ..., <L,A_9>); A_1..A_7 live in
the complement of the plumbing and A_8, A_9 generate H_2(T_2).  The Gram
matrix of A_1..A_9 is block diagonal, so L^2 = q_B(t_1..t_7) + q_A(t_8, t_9)
and every stage below only needs the blocks separately.

Stages (counts are accumulated in this order):
  1. characteristic adjunctive box
  2. d_X integral, nonnegative, even
  3. triples (A, B, C) with C in Phi
  4. upstairs d of the glued class (B, C) integral, nonnegative, even
  5. glued class integral and characteristic
  6. the chambers of V and h differ for the glued class
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import catalog
from . import exactlin as el
from .homblowup import BlowupClass, SphereConfiguration, pair


class WallAmbiguity(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SearchBasis:
    A: tuple[BlowupClass, ...]  # the classes A_1..A_k in the complement
    t2_gram: tuple[tuple[int, ...], ...]
    config: SphereConfiguration
    sigma: int  # of X
    chi: int
    sigma_ambient: int
    chi_ambient: int

    @property
    def complement_gram(self) -> el.Matrix:
        return [[pair(a, b) for b in self.A] for a in self.A]

    @property
    def gram(self) -> el.Matrix:
        """Block-diagonal Gram of A_1..A_k and the filling generators."""
        g7 = self.complement_gram
        k, m = len(g7), len(self.t2_gram)
        g = [[0] * (k + m) for _ in range(k + m)]
        for i in range(k):
            g[i][:k] = g7[i]
        for i in range(m):
            g[k + i][k:] = list(self.t2_gram[i])
        return g

    def lift_matrix(self) -> el.Matrix:
        """Rows J*c for c in (A_1..A_k, u_0..u_4): row . l = <l, c>."""
        rows = []
        for c in list(self.A) + list(self.config.classes):
            rows.append([c.coeffs[0]] + [-x for x in c.coeffs[1:]])
        return rows

    def check(self) -> list[str]:
        problems = []
        for i, a in enumerate(self.A):
            for j, u in enumerate(self.config.classes):
                if pair(a, u):
                    problems.append(f"A{i + 1}.u{j} = {pair(a, u)}")
        if el.determinant(self.lift_matrix()) == 0:
            problems.append("lift matrix is singular")
        return problems


def default_basis() -> SearchBasis:
    return SearchBasis(
        A=tuple(catalog.SEARCH_A),
        t2_gram=tuple(tuple(r) for r in catalog.T2_GRAM),
        config=catalog.S2_CONFIG,
        sigma=-7,
        chi=11,
        sigma_ambient=-10,
        chi_ambient=14,
    )


class _QuadForm:
    """x -> x^T G^{-1} x as an exact Fraction, cached by denominators."""

    def __init__(self, gram):
        self.den, self.num = el.common_denominator(el.inverse_rational(gram))

    def __call__(self, x) -> Fraction:
        return Fraction(el.quadratic_value(self.num, x), self.den)


def char_ranges(squares: Sequence[int]) -> list[list[int]]:
    """Per-coordinate values t with |t| <= -A^2 and t = A^2 mod 2."""
    return [[t for t in range(s, -s + 1) if (t - s) % 2 == 0] for s in squares]


def _good_dimension(d: Fraction) -> bool:
    return d.denominator == 1 and d >= 0 and d.numerator % 2 == 0


# -- stage 1/2 ---------------------------------------------------------------


def _stage12_shard(args):
    """Stage 1-2 over the slice of the box with a fixed first coordinate."""
    first, ranges, gram7, gram2, sigma, chi = args
    qB, qA = _QuadForm(gram7), _QuadForm(gram2)
    shift = -3 * sigma - 2 * chi
    a_vals = [(a, qA(a)) for a in product(*ranges[7:])]
    n1 = 0
    survivors: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for rest in product(*ranges[1:7]):
        b = (first,) + rest
        qb = qB(b)
        for a, qa in a_vals:
            n1 += 1
            if _good_dimension((qb + qa + shift) / 4):
                survivors.setdefault(b, []).append(a)
    return n1, survivors


# -- stage 4-6 ---------------------------------------------------------------


def _stage46_shard(args):
    bs, phi, lift_num, lift_den, V, sigma_amb, chi_amb = args
    k = len(bs[0][0]) if bs else 0
    shift = -3 * sigma_amb - 2 * chi_amb
    den2 = lift_den * lift_den
    n = len(lift_num)
    c_parts = []
    for c in phi:
        c_parts.append([sum(lift_num[r][k + j] * c[j] for j in range(len(c))) for r in range(n)])
    n4 = n5 = 0
    survivors = []
    walls = []
    for b, a_list in bs:
        mult = len(a_list)
        b_part = [sum(lift_num[r][j] * b[j] for j in range(k)) for r in range(n)]
        for c, cp in zip(phi, c_parts):
            num = [x + y for x, y in zip(b_part, cp)]  # l = num / lift_den
            sq_num = num[0] * num[0] - sum(x * x for x in num[1:])
            d = (Fraction(sq_num, den2) + shift) / 4
            if not _good_dimension(d):
                continue
            n4 += mult
            if any(x % lift_den for x in num):
                continue
            ell = [x // lift_den for x in num]
            if any(x % 2 == 0 for x in ell):
                continue
            n5 += mult
            lv = ell[0] * V[0] - sum(x * y for x, y in zip(ell[1:], V[1:]))
            lh = ell[0]
            if lv == 0:
                for a in a_list:
                    walls.append((tuple(b) + tuple(a), tuple(c), tuple(ell)))
                continue
            if (lv > 0) != (lh > 0):
                for a in a_list:
                    survivors.append((tuple(b) + tuple(a), tuple(c), tuple(ell)))
    return n4, n5, survivors, walls


@dataclass
class PipelineReport:
    counts: tuple[int, ...]
    survivors: list[dict]
    walls: list[dict]
    timings: dict = field(default_factory=dict)

    def as_dict(self, timings: bool = False) -> dict:
        out = {
            "counts": list(self.counts),
            "survivors": self.survivors,
            "walls": self.walls,
        }
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out


def _map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


def _split(seq, parts):
    parts = max(1, min(parts, len(seq)))
    size = -(-len(seq) // parts)
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def run_pipeline(
    basis: SearchBasis | None = None,
    phi: Sequence[Sequence[int]] | None = None,
    V: BlowupClass | None = None,
    workers: int = 1,
    raise_on_wall: bool = True,
    ranges: Sequence[Sequence[int]] | None = None,
) -> PipelineReport:
    """Run all six stages.  ``ranges`` overrides the per-coordinate box."""
    basis = basis or default_basis()
    phi = [tuple(c) for c in (phi if phi is not None else catalog.PHI_PRINTED)]
    V = V or catalog.V_VECTOR
    problems = basis.check()
    if problems:
        raise ValueError("; ".join(problems))
    timings = {}
    k = len(basis.A)
    gram = basis.gram
    gram7 = [row[:k] for row in gram[:k]]
    gram2 = [row[k:] for row in gram[k:]]
    if ranges is None:
        ranges = char_ranges([gram[i][i] for i in range(len(gram))])
    ranges = [list(r) for r in ranges]

    t0 = time.perf_counter()
    tasks = [(f, ranges, gram7, gram2, basis.sigma, basis.chi) for f in ranges[0]]
    n1 = 0
    stage2: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for c, surv in _map(_stage12_shard, tasks, workers):
        n1 += c
        stage2.update(surv)
    n2 = sum(len(v) for v in stage2.values())
    n3 = n2 * len(phi)
    timings["stage1-3"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    den, inv = el.common_denominator(el.inverse_rational(basis.lift_matrix()))
    items = sorted(stage2.items())
    chunks = _split(items, workers * 4 if workers > 1 else 1)
    tasks = [
        (chunk, phi, inv, den, V.coeffs, basis.sigma_ambient, basis.chi_ambient) for chunk in chunks
    ]
    n4 = n5 = 0
    survivors, walls = [], []
    for a, b, s, w in _map(_stage46_shard, tasks, workers):
        n4 += a
        n5 += b
        survivors.extend(s)
        walls.extend(w)
    survivors.sort()
    walls.sort()
    timings["stage4-6"] = time.perf_counter() - t0
    counts = (n1, n2, n3, n4, n5, len(survivors))

    qB, qA = _QuadForm(gram7), _QuadForm(gram2)

    def describe(t, c, ell):
        sq = qB(t[:k]) + qA(t[k:])
        return {
            "t": list(t),
            "phi": list(c),
            "class": list(ell),
            "class_str": str(BlowupClass(len(ell) - 1, tuple(ell))),
            "d_X": str((sq - 3 * basis.sigma - 2 * basis.chi) / 4),
        }

    report = PipelineReport(
        counts, [describe(*s) for s in survivors], [describe(*w) for w in walls], timings
    )
    if walls and raise_on_wall:
        raise WallAmbiguity(f"{len(walls)} candidates sit on the wall of V", report)
    return report


def lift_class(B: Sequence[int], C: Sequence[int], basis: SearchBasis | None = None) -> list[Fraction]:
    """The rational class l in (h, e_1..e_N) coordinates with <l,A_i> = B_i, <l,u_j> = C_j."""
    basis = basis or default_basis()
    return el.solve_rational(basis.lift_matrix(), list(B) + list(C))


def restriction_pairings(L: BlowupClass, basis: SearchBasis | None = None) -> tuple[list[int], list[int]]:
    """(B, C) of an honest class L of the ambient manifold."""
    basis = basis or default_basis()
    return [pair(L, a) for a in basis.A], [pair(L, u) for u in basis.config.classes]


def brute_force_pipeline(
    basis: SearchBasis, phi, V: BlowupClass, ranges
) -> tuple[tuple[int, ...], list[tuple]]:
    """Unpruned reference: every (t, C) pair checked directly with Fractions."""
    k = len(basis.A)
    gram = basis.gram
    ginv = el.inverse_rational(gram)
    lift = basis.lift_matrix()
    n = [0] * 6
    surv = []
    for t in product(*ranges):
        n[0] += 1
        sq = sum(t[i] * ginv[i][j] * t[j] for i in range(len(t)) for j in range(len(t)))
        if not _good_dimension((sq - 3 * basis.sigma - 2 * basis.chi) / 4):
            continue
        n[1] += 1
        for c in phi:
            n[2] += 1
            ell = el.solve_rational(lift, list(t[:k]) + list(c))
            sq2 = ell[0] ** 2 - sum(x * x for x in ell[1:])
            if not _good_dimension((sq2 - 3 * basis.sigma_ambient - 2 * basis.chi_ambient) / 4):
                continue
            n[3] += 1
            if any(x.denominator != 1 or x.numerator % 2 == 0 for x in ell):
                continue
            n[4] += 1
            lv = ell[0] * V.coeffs[0] - sum(x * y for x, y in zip(ell[1:], V.coeffs[1:]))
            if lv != 0 and (lv > 0) != (ell[0] > 0):
                n[5] += 1
                surv.append((tuple(t), tuple(c), tuple(int(x) for x in ell)))
    return tuple(n), sorted(surv)


# ---------------------------------------------------------------------------
# Knot-surgery bookkeeping
# ---------------------------------------------------------------------------


def restricted_square(L: BlowupClass, cfg: SphereConfiguration) -> Fraction:
    """(L|_S)^2 = k^T P^{-1} k with k_i = <L, u_i>."""
    k = [pair(L, u) for u in cfg.classes]
    den, num = el.common_denominator(el.inverse_rational(cfg.pairing_matrix()))
    return Fraction(el.quadratic_value(num, k), den)


def max_characteristic_square(gram: Sequence[Sequence[int]]) -> Fraction:
    """Largest L^2 over characteristic L on a negative-definite lattice.

    L^2 <= 0 always; the box |t_i| <= -G_ii contains the maximiser because
    characteristic vectors can be reduced into it without lowering L^2
    (checked here by widening the box once and comparing).
    """
    q = _QuadForm(gram)
    diag = [gram[i][i] for i in range(len(gram))]

    def best(scale):
        rs = [[t for t in range(s * scale, -s * scale + 1) if (t - s) % 2 == 0] for s in diag]
        return max(q(t) for t in product(*rs))

    b1 = best(1)
    if best(2) != b1:
        raise RuntimeError("maximum not stable under box widening")
    return b1


@dataclass
class KnotSurgeryReport:
    n: int
    checks: dict
    values: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {"n": self.n, "ok": self.ok, "checks": self.checks, "values": self.values}


def knot_surgery_checks(n: int) -> KnotSurgeryReport:
    from .homblowup import fiber, h_class, rederive_chamber_vector, verify_chamber_vector, verify_configuration

    if n < 2:
        raise ValueError("n must be at least 2")
    cfg = catalog.KNOT_CONFIG
    K = catalog.KNOT_K
    N = cfg.N
    chi_x, sigma_x = catalog.KNOT_CHI_SIGMA
    chi_y, sigma_y = chi_x - 6 + 3, sigma_x - (-5) + (-2)
    checks, values = {}, {}

    conf = verify_configuration(cfg)
    checks["configuration"] = conf.ok
    H = catalog.H_VECTOR
    hrep = verify_chamber_vector(H, cfg, -1, K)
    checks["chamber_vector_printed"] = hrep.ok
    values["chamber_vector_printed"] = hrep.as_dict()
    fixed = rederive_chamber_vector(H, cfg, -1, K)
    checks["chamber_vector_rederived"] = fixed is not None
    values["chamber_vector_rederived"] = str(fixed) if fixed else None
    checks["no_wall_K"] = pair(K, h_class(N)) < 0 and (fixed is not None and pair(K, fixed) < 0)

    KK = pair(K, K)
    d_x = Fraction(KK - 3 * sigma_x - 2 * chi_x, 4)
    k_s = restricted_square(K, cfg)
    d_y = (KK - k_s + 0 - 3 * sigma_y - 2 * chi_y) / 4
    values.update(
        {
            "K_squared": KK,
            "chi_X": chi_x,
            "sigma_X": sigma_x,
            "chi_Y": chi_y,
            "sigma_Y": sigma_y,
            "K_restricted_square": str(k_s),
            "d_X(K)": str(d_x),
            "d_Y(K~)": str(d_y),
        }
    )
    checks["d_X(K)=0"] = d_x == 0
    checks["d_Y(K~)=0"] = d_y == 0

    P = -fiber(N) + BlowupClass(N, (0,) * N + (1,))  # -F + e10
    PP = pair(P, P)
    p_s = restricted_square(P, cfg)
    const = (PP - p_s - 3 * sigma_y - 2 * chi_y) / 4
    sup_sq = max_characteristic_square(catalog.T2_GRAM)
    sup = const + sup_sq / 4
    values.update(
        {
            "P_squared": PP,
            "P_restricted_square": str(p_s),
            "minimality_constant": str(const),
            "max_T2_characteristic_square": str(sup_sq),
            "d_Y(P~)_supremum": str(sup),
        }
    )
    checks["minimality_bound"] = sup < 0
    values["SW(K~)"] = n
    return KnotSurgeryReport(n, checks, values)
