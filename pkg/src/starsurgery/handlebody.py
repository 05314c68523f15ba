"""Fillings drawn as dotted circles plus -1 framed subset curves.

Hole ``c`` is the 1-handle y_c.  A 2-handle over the subset S runs once over
each y_c with c in S, so its boundary in the cellular chain complex is
sum(y_c for c in S) and its pi_1 relator is the product of the y_c in
increasing label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from . import exactlin as el
from .mcg import TwistWord


class EnumerationBudgetExceeded(RuntimeError):
    pass


class NotACycle(ValueError):
    pass


@dataclass(frozen=True)
class Handle:
    subset: tuple[int, ...]
    framing: int = -1


@dataclass(frozen=True)
class Handlebody:
    holes: int
    handles: tuple[Handle, ...]
    name: str = ""

    def __post_init__(self):
        for h in self.handles:
            if not h.subset:
                raise ValueError("handle over an empty subset")
            if any(not 1 <= c <= self.holes for c in h.subset):
                raise ValueError(f"handle {h.subset} leaves 1..{self.holes}")

    @classmethod
    def from_subsets(cls, holes: int, subsets: Sequence[Sequence[int]], framing: int = -1, name: str = ""):
        return cls(holes, tuple(Handle(tuple(sorted(set(s))), framing) for s in subsets), name)

    @classmethod
    def from_word(cls, w: TwistWord, name: str = ""):
        """Filling whose vanishing cycles are the (positive) letters of ``w``."""
        subsets = []
        for curve, e in w.letters:
            if e < 0:
                raise ValueError("fillings need positive twists")
            subsets.extend([curve.holes] * e)
        return cls.from_subsets(w.holes, subsets, -1, name)

    @property
    def euler_characteristic(self) -> int:
        return 1 - self.holes + len(self.handles)

    def boundary_matrix(self) -> el.Matrix:
        """Rows are holes, columns handles: entry 1 iff the hole lies in the subset."""
        return [[int(c in h.subset) for h in self.handles] for c in range(1, self.holes + 1)]


# ---------------------------------------------------------------------------
# Fundamental group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    generators: int
    relators: tuple[tuple[int, ...], ...]  # letters +-k for y_k^{+-1}

    def __str__(self):
        def fmt(r):
            return "".join(f"y{abs(x)}" + ("^-1" if x < 0 else "") for x in r) or "1"

        gens = ",".join(f"y{k}" for k in range(1, self.generators + 1))
        return f"<{gens} | " + ", ".join(fmt(r) for r in self.relators) + ">"


def free_reduce(word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) > 1 and out[0] == -out[-1]:  # cyclic reduction
        out = out[1:-1]
    return tuple(out)


def presentation(h: Handlebody) -> GroupPresentation:
    rels = tuple(free_reduce(hd.subset) for hd in h.handles)
    return GroupPresentation(h.holes, tuple(r for r in rels if r))


def abelianization(p: GroupPresentation) -> tuple[int, list[int]]:
    rows = []
    for r in p.relators:
        v = [0] * p.generators
        for x in r:
            v[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(v)
    return el.cokernel(rows, p.generators)


def coset_enumeration(p: GroupPresentation, max_cosets: int = 100_000) -> int:
    """Order of the group by HLT coset enumeration over the trivial subgroup.

    Raises EnumerationBudgetExceeded when more than ``max_cosets`` cosets
    would be defined.
    """
    cols = 2 * p.generators

    def col(x: int) -> int:
        return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1

    rels = [tuple(col(x) for x in r) for r in p.relators]
    table: list[list[int | None]] = [[None] * cols]
    parent = [0]  # union-find over coset numbers; roots are live cosets

    def rep(k: int) -> int:
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def define(k: int, c: int) -> None:
        if len(table) >= max_cosets:
            raise EnumerationBudgetExceeded(f"more than {max_cosets} cosets")
        n = len(table)
        table.append([None] * cols)
        parent.append(n)
        table[k][c] = n
        table[n][c ^ 1] = k

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []

        def merge(k: int, l: int) -> None:
            k, l = rep(k), rep(l)
            if k != l:
                k, l = min(k, l), max(k, l)
                parent[l] = k
                queue.append(l)

        merge(a, b)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(cols):
                d = table[g][x]
                if d is None:
                    continue
                table[d][x ^ 1] = None
                mu, nu = rep(g), rep(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x])
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(k: int, rel: tuple[int, ...]) -> None:
        f, b = k, k
        i, j = 0, len(rel) - 1
        while True:
            while i <= j and table[f][rel[i]] is not None:
                f = table[f][rel[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][rel[j] ^ 1] is not None:
                b = table[b][rel[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][rel[i]] = b
                table[b][rel[i] ^ 1] = f
                return
            define(f, rel[i])

    k = 0
    while k < len(table):
        for rel in rels:
            if parent[k] != k:
                break
            scan_and_fill(k, rel)
        for c in range(cols):
            if parent[k] != k:
                break
            if table[k][c] is None:
                define(k, c)
        k += 1
    return sum(1 for i in range(len(table)) if parent[i] == i)


@dataclass(frozen=True)
class Pi1Report:
    presentation: GroupPresentation
    free_rank: int
    torsion: list[int]
    order: int | None  # None when enumeration did not finish

    @property
    def abelianization(self) -> str:
        return el.describe_group(self.free_rank, self.torsion)


def pi1_report(h: Handlebody, max_cosets: int = 100_000) -> Pi1Report:
    p = presentation(h)
    free, tors = abelianization(p)
    order = None
    if free == 0:
        try:
            order = coset_enumeration(p, max_cosets)
        except EnumerationBudgetExceeded:
            order = None
    return Pi1Report(p, free, tors, order)


# ---------------------------------------------------------------------------
# Homology and intersection form
# ---------------------------------------------------------------------------


def boundary_of(h: Handlebody, cycle: Sequence[int]) -> list[int]:
    if len(cycle) != len(h.handles):
        raise ValueError("cycle length differs from handle count")
    return el.matvec(h.boundary_matrix(), cycle)


def gram_on_cycles(h: Handlebody, cycles: Sequence[Sequence[int]]) -> el.Matrix:
    """Intersection form on 2-cycles; distinct handles pair to zero."""
    for c in cycles:
        if any(boundary_of(h, c)):
            raise NotACycle(f"{list(c)} has nonzero boundary")
    fr = [hd.framing for hd in h.handles]
    return [[sum(f * x * y for f, x, y in zip(fr, a, b)) for b in cycles] for a in cycles]


def _covolume(rows) -> tuple[int, int]:
    """(rank, gcd of maximal minors) of a row lattice."""
    snf = el.smith_normal_form(rows)
    out = 1
    for d in snf.diagonal:
        if d:
            out *= d
    return snf.rank, out


def spans_same_lattice(cycles: Sequence[Sequence[int]], basis: Sequence[Sequence[int]]) -> bool:
    """True iff ``cycles`` is a Z-basis of the lattice spanned by the rows of ``basis``.

    Both lattices sit inside the one spanned by their union with the same
    rank, so they coincide exactly when all three covolumes agree.
    """
    if len(cycles) != len(basis):
        return False
    if not cycles:
        return True
    rb = _covolume(basis)
    if rb[0] != len(basis):
        return False
    return rb == _covolume(cycles) == _covolume([list(r) for r in basis] + [list(r) for r in cycles])


@dataclass(frozen=True)
class HomologyReport:
    chi: int
    h1_free: int
    h1_torsion: list[int]
    h2_rank: int
    cycles: el.Matrix
    gram: el.Matrix
    definiteness: str
    sigma: int


def homology_report(h: Handlebody, cycles: Sequence[Sequence[int]] | None = None) -> HomologyReport:
    """Homology of the 2-complex; ``cycles`` overrides the computed H_2 basis."""
    d = h.boundary_matrix()
    kernel = el.integer_kernel(d) if h.handles else []
    if cycles is None:
        cycles = kernel
    elif not spans_same_lattice(cycles, kernel):
        raise ValueError("supplied cycles do not form a basis of H_2")
    gram = gram_on_cycles(h, cycles)
    if gram:
        prof = el.quadratic_form_profile(gram)
        definiteness, sigma = prof.definiteness, prof.signature
    else:
        definiteness, sigma = "degenerate", 0
    free, tors = el.cokernel(el.transpose(d), h.holes) if h.handles else (h.holes, [])
    return HomologyReport(
        chi=h.euler_characteristic,
        h1_free=free,
        h1_torsion=tors,
        h2_rank=len(kernel),
        cycles=[list(c) for c in cycles],
        gram=gram,
        definiteness=definiteness,
        sigma=sigma,
    )


def cohomology_h2(h: Handlebody) -> tuple[int, list[int]]:
    """H^2 as the cokernel of the coboundary C^1 -> C^2."""
    return el.cokernel(h.boundary_matrix(), len(h.handles))


# ---------------------------------------------------------------------------
# Boundary
# ---------------------------------------------------------------------------


def linking_matrix(h: Handlebody) -> el.Matrix:
    """Surgery diagram of the boundary: dotted circles become 0-framed unknots."""
    n, k = h.holes, len(h.handles)
    b = h.boundary_matrix()
    m = [[0] * (n + k) for _ in range(n + k)]
    for i in range(n):
        for j in range(k):
            m[i][n + j] = m[n + j][i] = b[i][j]
    for j, hd in enumerate(h.handles):
        m[n + j][n + j] = hd.framing
    return m


def boundary_H1(h: Handlebody) -> tuple[int, list[int]]:
    lk = linking_matrix(h)
    return el.cokernel(lk, len(lk))


def restriction_index(h: Handlebody) -> int:
    """Index of the image of H^2(filling) -> H^2(boundary) = H_1(boundary).

    The dual of the handle over S maps to the class of sum(lambda_c, c in S),
    lambda_c being the meridian of dotted circle c.
    """
    lk = linking_matrix(h)
    size = len(lk)
    images = []
    for hd in h.handles:
        v = [0] * size
        for c in hd.subset:
            v[c - 1] = 1
        images.append(v)
    free, tors = el.cokernel(lk + images, size)
    if free:
        return 0  # infinite index
    out = 1
    for t in tors:
        out *= t
    return out


def restriction_index_bruteforce(h: Handlebody) -> int:
    """Same index by listing the finite group H_1(boundary) explicitly."""
    lk = linking_matrix(h)
    snf = el.smith_normal_form(lk)
    diag = snf.diagonal
    if any(d == 0 for d in diag):
        raise ValueError("boundary H_1 is infinite")
    mods = [d for d in diag]
    # coordinates of a vector x in Z^size / rowspace: (x V) reduced mod D
    def coords(x):
        y = el.matvec(el.transpose(snf.V), x)
        return tuple(a % m for a, m in zip(y, mods))

    gens = []
    for hd in h.handles:
        v = [0] * len(lk)
        for c in hd.subset:
            v[c - 1] = 1
        gens.append(coords(v))
    seen = {tuple(0 for _ in mods)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, mods))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    order = 1
    for m in mods:
        order *= m
    return order // len(seen)


def c1_evaluate(h: Handlebody, cycle: Sequence[int]) -> int:
    """c_1 of the Lefschetz fibration on a 2-cycle: every vanishing cycle
    has rotation number one, so this is the coefficient sum."""
    if any(boundary_of(h, cycle)):
        raise NotACycle(f"{list(cycle)} has nonzero boundary")
    return sum(cycle)


def all_cycles_small(h: Handlebody, bound: int = 1) -> list[tuple[int, ...]]:
    """Every 2-cycle with coefficients in [-bound, bound]; a test helper."""
    out = []
    for c in product(range(-bound, bound + 1), repeat=len(h.handles)):
        if not any(boundary_of(h, c)):
            out.append(c)
    return out
