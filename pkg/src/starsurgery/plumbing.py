"""Star-shaped plumbings of spheres.

Vertex order everywhere is: center first, then each arm walked outward, arms
in the order given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import exactlin as el
from .mcg import ConvexCurve, TwistWord


class NotNegativeDefinite(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


@dataclass(frozen=True)
class StarPlumbing:
    center_weight: int
    arms: tuple[tuple[int, ...], ...]
    # Optional explicit hole labels: one tuple per arm, plus the extra holes
    # coming from the center.  Defaults to consecutive blocks.
    arm_holes: tuple[tuple[int, ...], ...] | None = None
    center_holes: tuple[int, ...] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(tuple(a) for a in self.arms))
        if any(not a for a in self.arms):
            raise ValueError("empty arm")
        if self.arm_holes is not None:
            object.__setattr__(self, "arm_holes", tuple(tuple(h) for h in self.arm_holes))
        if self.center_holes is not None:
            object.__setattr__(self, "center_holes", tuple(self.center_holes))

    @property
    def weights(self) -> list[int]:
        return [self.center_weight] + [w for arm in self.arms for w in arm]

    @property
    def vertex_count(self) -> int:
        return 1 + sum(len(a) for a in self.arms)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        k = 1
        for arm in self.arms:
            prev = 0
            for _ in arm:
                out.append((prev, k))
                prev = k
                k += 1
        return out

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for a, b in self.edges():
            deg[a] += 1
            deg[b] += 1
        return deg

    def gram(self) -> el.Matrix:
        n = self.vertex_count
        g = [[0] * n for _ in range(n)]
        for i, w in enumerate(self.weights):
            g[i][i] = w
        for a, b in self.edges():
            g[a][b] = g[b][a] = 1
        return g

    def bad_vertices(self) -> list[int]:
        # A -2 vertex inside a chain has w + deg = 0 and is allowed: it just
        # contributes no holes.
        return [v for v, (w, d) in enumerate(zip(self.weights, self.degrees())) if w + d > 0]

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count + 1


def star(center: int, *arms: Sequence[int], name: str = "", arm_holes=None, center_holes=None) -> StarPlumbing:
    return StarPlumbing(center, tuple(tuple(a) for a in arms), arm_holes, center_holes, name)


def s_family(i: int) -> StarPlumbing:
    """The graph S_i: center -(i+3), i+2 arms of i-1 spheres of square -2."""
    return StarPlumbing(-(i + 3), tuple((-2,) * (i - 1) for _ in range(i + 2)) if i > 1 else (), name=f"S{i}")


@dataclass(frozen=True)
class PlumbingInvariants:
    chi: int
    sigma: int
    gram: el.Matrix
    determinant: int
    boundary_h1: list[int]  # invariant factors of H_1 of the boundary

    @property
    def boundary_order(self) -> int:
        return abs(self.determinant)


def plumbing_invariants(g: StarPlumbing) -> PlumbingInvariants:
    gram = g.gram()
    prof = el.quadratic_form_profile(gram)
    if prof.definiteness != "negative-definite":
        raise NotNegativeDefinite(f"{g.name or g} is {prof.definiteness}")
    return PlumbingInvariants(
        chi=g.euler_characteristic,
        sigma=prof.signature,
        gram=gram,
        determinant=el.determinant(gram),
        boundary_h1=el.invariant_factors(gram),
    )


# ---------------------------------------------------------------------------
# Gay-Mark open book
# ---------------------------------------------------------------------------


def hole_layout(g: StarPlumbing) -> tuple[list[tuple[int, ...]], tuple[int, ...]]:
    """Hole blocks per arm and the extra center holes."""
    deg = g.degrees()
    k0 = abs(g.center_weight + deg[0])
    if g.bad_vertices():
        raise UnsupportedShape(f"bad vertices {g.bad_vertices()}")
    if k0 < 1:
        raise UnsupportedShape("center needs |w + deg| >= 1")
    sizes = []
    for arm in g.arms:
        if any(w != -2 for w in arm[:-1]):
            raise UnsupportedShape(f"arm {arm}: intermediate vertices must have weight -2")
        sizes.append(abs(arm[-1] + 1))
    if g.arm_holes is not None:
        blocks = [tuple(b) for b in g.arm_holes]
        if [len(b) for b in blocks] != sizes:
            raise UnsupportedShape("explicit hole labels do not match arm ends")
        extra = tuple(g.center_holes or ())
        if len(extra) != k0 - 1:
            raise UnsupportedShape("explicit center holes do not match the center weight")
    else:
        blocks, nxt = [], 1
        for s in sizes:
            blocks.append(tuple(range(nxt, nxt + s)))
            nxt += s
        extra = tuple(range(nxt, nxt + k0 - 1))
    return blocks, extra


def gaymark_word(g: StarPlumbing, outer: str = "first") -> tuple[int, TwistWord]:
    """Monodromy of the boundary open book as a twist word.

    The outer boundary twist is placed first (``outer="first"``) or last.
    Arm blocks and extra center holes are emitted in increasing hole label;
    every letter is about a disjoint or nested curve so the order is only
    cosmetic.
    """
    blocks, extra = hole_layout(g)
    m = sum(len(b) for b in blocks) + len(extra)
    chunks: list[tuple[int, list]] = []
    for arm, block in zip(g.arms, blocks):
        letters = [(ConvexCurve(block), len(arm))]
        if len(block) == 1:
            letters = [(ConvexCurve(block), len(arm) + 1)]
        else:
            letters += [(ConvexCurve((c,)), 1) for c in block]
        chunks.append((min(block), letters))
    for c in extra:
        chunks.append((c, [(ConvexCurve((c,)), 1)]))
    chunks.sort(key=lambda t: t[0])
    body = [x for _, letters in chunks for x in letters]
    all_holes = (ConvexCurve(tuple(range(1, m + 1))), 1)
    letters = [all_holes] + body if outer == "first" else body + [all_holes]
    return m, TwistWord(m, tuple(letters))


# ---------------------------------------------------------------------------
# Spin^c orbits and d-invariants
# ---------------------------------------------------------------------------


def reduce_mod2(x: Fraction) -> Fraction:
    """Representative of x mod 2 in the half-open interval (-1, 1]."""
    r = Fraction(x) % 2  # in [0, 2)
    return r - 2 if r > 1 else r


def d_invariant(sq: Fraction, sigma: int, chi: int) -> Fraction:
    return (Fraction(sq) - 3 * sigma - 2 * chi) / 4


@dataclass(frozen=True)
class Orbit:
    representative: tuple[int, ...]
    d: Fraction
    d_mod2: Fraction
    members: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class OrbitReport:
    orbits: tuple[Orbit, ...]
    mod2_values: tuple[Fraction, ...]
    phi: tuple[tuple[int, ...], ...]

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)


def characteristic_box(gram: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Characteristic tuples with ``w+2 <= t_v <= -w`` for each vertex weight w."""
    ranges = [range(w + 2, -w + 1, 2) for w in (gram[i][i] for i in range(len(gram)))]
    return [tuple(t) for t in product(*ranges)]


class _Lattice:
    """Exact helpers for a nondegenerate integral form."""

    def __init__(self, gram):
        self.gram = el.as_matrix(gram)
        self.den, self.inv = el.common_denominator(el.inverse_rational(self.gram))

    def square(self, t) -> Fraction:
        return Fraction(el.quadratic_value(self.inv, t), self.den)

    def orbit_key(self, t) -> tuple[int, ...]:
        """Class of t modulo 2*Gram*Z^k, as residues of Gram^-1 t / 2 mod 1."""
        num = el.matvec(self.inv, t)
        m = 2 * self.den
        return tuple(x % m for x in num)


def spinc_orbit_analysis(
    g: StarPlumbing | Sequence[Sequence[int]],
    allowed_mod2: Iterable[Fraction] | None = None,
    sigma: int | None = None,
    chi: int | None = None,
) -> OrbitReport:
    """Partition the characteristic box into orbits mod 2*Gram*Z^k.

    Each orbit keeps its member maximizing d = (L^2 - 3 sigma - 2 chi)/4
    (ties broken by the lexicographically largest tuple).  ``phi`` lists the
    representatives whose d mod 2 falls in ``allowed_mod2``.
    """
    if isinstance(g, StarPlumbing):
        inv = plumbing_invariants(g)
        gram, sigma, chi = inv.gram, inv.sigma, inv.chi
    else:
        gram = el.as_matrix(g)
        prof = el.quadratic_form_profile(gram)
        if prof.definiteness != "negative-definite":
            raise NotNegativeDefinite(prof.definiteness)
        sigma = prof.signature if sigma is None else sigma
        chi = len(gram) + 1 if chi is None else chi
    lat = _Lattice(gram)
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for t in characteristic_box(gram):
        groups.setdefault(lat.orbit_key(t), []).append(t)
    orbits = []
    for members in groups.values():
        best = max(members, key=lambda t: (lat.square(t), t))
        d = d_invariant(lat.square(best), sigma, chi)
        orbits.append(Orbit(best, d, reduce_mod2(d), tuple(sorted(members))))
    orbits.sort(key=lambda o: o.representative)
    values = tuple(sorted({o.d_mod2 for o in orbits}))
    allowed = None if allowed_mod2 is None else {Fraction(x) for x in allowed_mod2}
    phi = tuple(o.representative for o in orbits if allowed is None or o.d_mod2 in allowed)
    return OrbitReport(tuple(orbits), values, phi)


def characteristic_d_mod2_values(gram: Sequence[Sequence[int]], sigma: int, chi: int) -> tuple[Fraction, ...]:
    """All d mod 2 reductions over characteristic classes of a definite lattice.

    d mod 2 only depends on t modulo 2*Gram*Z^k.  Characteristic classes are
    t0 + 2x with t0 the diagonal parities, and x runs over Z^k / Gram*Z^k,
    which the Smith form U*Gram*V = D lists as U^-1 * (box of D).
    """
    g = el.as_matrix(gram)
    lat = _Lattice(g)
    k = len(g)
    snf = el.smith_normal_form(g)
    u_inv = [[int(x) for x in row] for row in el.inverse_rational(snf.U)]
    t0 = [g[i][i] % 2 for i in range(k)]
    seen = set()
    for y in product(*(range(abs(d)) for d in snf.diagonal)):
        x = el.matvec(u_inv, list(y))
        t = [a + 2 * b for a, b in zip(t0, x)]
        seen.add(reduce_mod2(d_invariant(lat.square(t), sigma, chi)))
    return tuple(sorted(seen))


def characteristic_d_mod2_values_box(gram: Sequence[Sequence[int]], sigma: int, chi: int) -> tuple[Fraction, ...]:
    """Slow reference: scan a box whose side is the absolute row sum of 2*Gram,
    which meets every class modulo 2*Gram*Z^k."""
    g = el.as_matrix(gram)
    lat = _Lattice(g)
    k = len(g)
    bound = [sum(abs(2 * g[i][j]) for j in range(k)) for i in range(k)]
    ranges = [
        [x for x in range(-b, b + 1) if (x - g[i][i]) % 2 == 0] for i, b in enumerate(bound)
    ]
    seen = set()
    for t in product(*ranges):
        seen.add(reduce_mod2(d_invariant(lat.square(t), sigma, chi)))
    return tuple(sorted(seen))
