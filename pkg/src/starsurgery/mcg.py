"""Dehn twist words on a disk with holes, and a decision procedure for equality.

Holes are labelled 1..n counterclockwise.  ``D_S`` is the right-handed twist
about the convex curve enclosing exactly the holes in ``S``.  Words use group
order: the leftmost letter acts first.

Equality is decided by doubling: hole ``j`` becomes the strand pair
``(2j-1, 2j)`` of the ``2n``-strand braid group, ``D_S`` becomes the full
twist on the gathered cable of ``S``, and braids are compared through their
Dynnikov coordinates (see :mod:`starsurgery.braid`).
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .braid import BraidWord, invariant as braid_invariant

log = logging.getLogger(__name__)


class EmptySubset(ValueError):
    pass


class HoleCountMismatch(ValueError):
    pass


class BadHole(ValueError):
    pass


class PatternNotFound(LookupError):
    pass


class UnknownRelation(KeyError):
    pass


@dataclass(frozen=True, order=True)
class ConvexCurve:
    holes: tuple[int, ...]

    def __post_init__(self):
        if not self.holes:
            raise EmptySubset("convex curve needs at least one hole")
        object.__setattr__(self, "holes", tuple(sorted(set(self.holes))))

    def __str__(self):
        if all(h < 10 for h in self.holes):
            return "D" + "".join(map(str, self.holes))
        return "D{" + ",".join(map(str, self.holes)) + "}"


Letter = tuple[ConvexCurve, int]


@dataclass(frozen=True)
class TwistWord:
    holes: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = []
        for c, e in self.letters:
            if not isinstance(c, ConvexCurve):
                c = ConvexCurve(tuple(c))
            if e == 0:
                raise ValueError("zero exponent")
            if c.holes[0] < 1 or c.holes[-1] > self.holes:
                raise BadHole(f"{c} does not fit on a disk with {self.holes} holes")
            letters.append((c, int(e)))
        object.__setattr__(self, "letters", tuple(letters))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        if other.holes != self.holes:
            raise HoleCountMismatch(f"{self.holes} != {other.holes}")
        return TwistWord(self.holes, self.letters + other.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(self.holes, tuple((c, -e) for c, e in reversed(self.letters)))

    def expanded(self) -> list[tuple[tuple[int, ...], int]]:
        """One entry per twist, exponents split into +-1 steps."""
        out = []
        for c, e in self.letters:
            s = 1 if e > 0 else -1
            out.extend((c.holes, s) for _ in range(abs(e)))
        return out

    def letter_count(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __str__(self):
        parts = []
        for c, e in self.letters:
            parts.append(str(c) if e == 1 else f"{c}^{e}")
        return " ".join(parts) if parts else "1"


def word(holes: int, *letters) -> TwistWord:
    """Shorthand: ``word(3, (1, 2, 3), (1,), ((2,), 2))``.

    A bare tuple of ints is a single positive twist; ``(subset, exp)`` sets
    the exponent.
    """
    out = []
    for x in letters:
        if x and isinstance(x[0], (tuple, list, ConvexCurve)):
            out.append((x[0] if isinstance(x[0], ConvexCurve) else ConvexCurve(tuple(x[0])), x[1]))
        else:
            out.append((ConvexCurve(tuple(x)), 1))
    return TwistWord(holes, tuple(out))


_TOKEN = re.compile(r"D(?:_)?(\{[^}]*\}|\d+)(?:\^\{?(-?\d+)\}?)?")


def parse_word(text: str, holes: int | None = None, labels: Sequence[str] | None = None) -> TwistWord:
    """Parse ``"D123 D1^2 D{10,11}^-1"``.

    Without braces each digit is a hole.  ``labels`` maps names such as
    ``"2a"`` to positions when braces hold comma-separated names.
    """
    pos = {lab: i + 1 for i, lab in enumerate(labels)} if labels else None
    letters = []
    end = 0
    for m in _TOKEN.finditer(text):
        if text[end:m.start()].strip():
            raise ValueError(f"unexpected text {text[end:m.start()]!r} at column {end + 1}")
        end = m.end()
        body, exp = m.group(1), m.group(2)
        if body.startswith("{"):
            names = [s.strip() for s in body[1:-1].split(",") if s.strip()]
            hs = tuple(pos[n] if pos else int(n) for n in names)
        else:
            hs = tuple(int(ch) for ch in body)
        letters.append((ConvexCurve(hs), int(exp) if exp else 1))
    if text[end:].strip():
        raise ValueError(f"unexpected text {text[end:]!r} at column {end + 1}")
    if holes is None:
        holes = max((c.holes[-1] for c, _ in letters), default=0)
    return TwistWord(holes, tuple(letters))


# ---------------------------------------------------------------------------
# compilation to braids
# ---------------------------------------------------------------------------


def _full_twist(lo: int, hi: int) -> tuple[int, ...]:
    """Full twist on strands lo..hi (1-based, inclusive)."""
    k = hi - lo + 1
    return tuple(range(lo, hi)) * k


def _cable_swap(j: int, sign: int) -> tuple[int, ...]:
    """Hole at position j passes across the hole at j+1 (two strands each).

    With the generator chirality of the coordinate action, a cable passing in
    front of its neighbour is written with inverse generators (sign -1).
    """
    a = 2 * j - 1  # strands a, a+1 | a+2, a+3
    return tuple(sign * x for x in (a + 1, a, a + 2, a + 1))


@lru_cache(maxsize=None)
def twist_braid(holes: tuple[int, ...], n: int, mirror: bool = False) -> tuple[int, ...]:
    """Braid letters for a single positive ``D_S`` on ``n`` holes."""
    if not holes:
        raise EmptySubset("empty subset")
    sign = 1 if mirror else -1
    members = sorted(holes)
    target = members[-1]
    gather: list[int] = []
    # pull members rightward, starting from the one nearest the right end
    slot = target
    for h in reversed(members[:-1]):
        slot -= 1
        for p in range(h, slot):
            gather.extend(_cable_swap(p, sign))
    lo = 2 * (target - len(members) + 1) - 1
    core = _full_twist(lo, 2 * target)
    inv = tuple(-x for x in reversed(gather))
    return tuple(gather) + core + inv


def compile_to_braid(w: TwistWord, mirror: bool = False) -> BraidWord:
    letters: list[int] = []
    for hs, s in w.expanded():
        t = twist_braid(hs, w.holes, mirror)
        letters.extend(t if s > 0 else [-x for x in reversed(t)])
    return BraidWord(2 * w.holes, tuple(letters))


def invariant(w: TwistWord, mirror: bool = False) -> tuple[int, ...]:
    return braid_invariant(compile_to_braid(w, mirror))


_MIRROR = False


def set_mirror_convention(flag: bool) -> None:
    """Select the mirrored gathering convention for all later comparisons."""
    global _MIRROR
    _MIRROR = bool(flag)


def mirror_convention() -> bool:
    return _MIRROR


def words_equal(w1: TwistWord, w2: TwistWord, mirror: bool | None = None) -> bool:
    if w1.holes != w2.holes:
        raise HoleCountMismatch(f"{w1.holes} != {w2.holes}")
    m = _MIRROR if mirror is None else mirror
    return invariant(w1, m) == invariant(w2, m)


def convention_self_test(max_holes: int = 5) -> bool:
    """Check the lantern relation for every 3-block arrangement with the
    current convention; switch to the mirrored one if it fails."""
    ok = all(words_equal(*lantern(n, a, b, c)) for n, a, b, c in lantern_partitions(max_holes))
    if not ok:
        log.warning("lantern self-test failed (mirror=%s); switching convention", _MIRROR)
        set_mirror_convention(not _MIRROR)
        ok = all(words_equal(*lantern(n, a, b, c)) for n, a, b, c in lantern_partitions(max_holes))
    return ok


# ---------------------------------------------------------------------------
# word surgery
# ---------------------------------------------------------------------------


def split_hole(w: TwistWord, i: int) -> TwistWord:
    """Replace hole ``i`` by two adjacent holes ``i, i+1``; later holes shift up."""
    if not 1 <= i <= w.holes:
        raise BadHole(f"hole {i} not in 1..{w.holes}")

    def relabel(hs):
        out = []
        for h in hs:
            if h < i:
                out.append(h)
            elif h == i:
                out.extend((i, i + 1))
            else:
                out.append(h + 1)
        return tuple(out)

    return TwistWord(w.holes + 1, tuple((ConvexCurve(relabel(c.holes)), e) for c, e in w.letters))


def _disjoint(a: Letter, b: Letter) -> bool:
    # convex curves of disjoint or nested subsets can be isotoped apart
    sa, sb = set(a[0].holes), set(b[0].holes)
    return not (sa & sb) or sa <= sb or sb <= sa


def _unit_letters(w: TwistWord) -> list[Letter]:
    return [(ConvexCurve(hs), s) for hs, s in w.expanded()]


def find_pattern(w: TwistWord, pattern: TwistWord) -> tuple[list[Letter], int] | None:
    """Look for ``pattern`` as a contiguous block of ``w`` after commuting
    adjacent letters with disjoint or nested subsets, in ``w`` and in the
    pattern itself.

    Returns ``(rearranged_letters, start)`` or None.
    """
    letters = _unit_letters(w)
    pat = _unit_letters(pattern)
    if not pat:
        return letters, 0
    n = len(letters)

    def search(start: int, order: list[Letter], letters: list[Letter]):
        # greedily pull matching letters of the pattern into place
        seq = list(letters)
        pos = start
        for target in order:
            j = next((k for k in range(pos, n) if seq[k] == target), None)
            if j is None:
                return None
            # bubble seq[j] left to pos; every letter it passes must commute
            for k in range(j, pos, -1):
                if not _disjoint(seq[k - 1], seq[k]):
                    return None
                seq[k - 1], seq[k] = seq[k], seq[k - 1]
            pos += 1
        return seq

    k = len(pat)
    orders = _commutation_orders(pat)
    for order in orders:
        for start in range(n - k + 1):
            seq = search(start, order, letters)
            if seq is not None:
                return seq, start
    # the same search on the reversed word moves pattern letters rightwards
    rev = letters[::-1]
    for order in orders:
        for start in range(n - k + 1):
            seq = search(start, order[::-1], rev)
            if seq is not None:
                return seq[::-1], n - start - k
    return None


def _commutation_orders(letters: list[Letter], limit: int = 5040) -> list[list[Letter]]:
    """Orderings of ``letters`` reachable by swapping adjacent commuting letters,
    the given order first."""
    start = tuple(letters)
    seen = {start}
    out = [list(start)]
    frontier = [start]
    while frontier and len(out) < limit:
        nxt = []
        for seq in frontier:
            for i in range(len(seq) - 1):
                if seq[i] != seq[i + 1] and _disjoint(seq[i], seq[i + 1]):
                    t = seq[:i] + (seq[i + 1], seq[i]) + seq[i + 2:]
                    if t not in seen:
                        seen.add(t)
                        out.append(list(t))
                        nxt.append(t)
        frontier = nxt
    return out


def _compress(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[list] = []
    for c, e in letters:
        if out and out[-1][0] == c:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([c, e])
    return tuple((c, e) for c, e in out)


def substitute(w: TwistWord, lhs: TwistWord, rhs: TwistWord) -> TwistWord:
    """Replace an occurrence of ``lhs`` (up to disjoint commutation) by ``rhs``."""
    if not (w.holes == lhs.holes == rhs.holes):
        raise HoleCountMismatch("hole counts differ")
    found = find_pattern(w, lhs)
    if found is None:
        raise PatternNotFound(f"{lhs} not found in {w}")
    seq, start = found
    k = lhs.letter_count()
    new = seq[:start] + _unit_letters(rhs) + seq[start + k:]
    return TwistWord(w.holes, _compress(new))


# ---------------------------------------------------------------------------
# relation catalog
# ---------------------------------------------------------------------------


def _union(*blocks: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(set().union(*map(set, blocks))))


def lantern(n: int, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> tuple[TwistWord, TwistWord]:
    lhs = word(n, _union(a, b, c), tuple(a), tuple(b), tuple(c))
    rhs = word(n, _union(a, b), _union(a, c), _union(b, c))
    return lhs, rhs


def lantern_partitions(max_holes: int) -> list[tuple[int, tuple, tuple, tuple]]:
    """All splittings of 1..n into three consecutive nonempty blocks, n = 3..max_holes."""
    out = []
    for n in range(3, max_holes + 1):
        for i, j in combinations(range(1, n), 2):
            out.append((n, tuple(range(1, i + 1)), tuple(range(i + 1, j + 1)), tuple(range(j + 1, n + 1))))
    return out


def set_partitions3(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """Every partition of 1..n into three nonempty blocks (blocks ordered by minimum)."""
    out = []
    for lab in product(range(3), repeat=n):
        if set(lab) != {0, 1, 2} or not lab.index(0) < lab.index(1) < lab.index(2):
            continue
        out.append(tuple(tuple(i + 1 for i in range(n) if lab[i] == k) for k in range(3)))
    return out


def is_cyclic_arc_partition(n: int, blocks) -> bool:
    """True when each block is a run of consecutive holes around the circle."""
    for b in blocks:
        s = set(b)
        starts = [h for h in s if (h - 2) % n + 1 not in s]
        if len(starts) != 1:
            return False
    return True


def arc_partitions(max_holes: int) -> list[tuple[int, tuple, tuple, tuple]]:
    """Partitions of 1..n into three cyclic arcs, wrap-around included, n = 3..max_holes."""
    return [
        (n, *bl) for n in range(3, max_holes + 1) for bl in set_partitions3(n) if is_cyclic_arc_partition(n, bl)
    ]


def daisy(n: int, blocks: Sequence[Sequence[int]]) -> tuple[TwistWord, TwistWord]:
    b0, rest = tuple(blocks[0]), [tuple(b) for b in blocks[1:]]
    m = len(rest)
    if m < 2:
        raise ValueError("daisy needs m >= 2")
    lhs = [(_union(*blocks), 1), (b0, m - 1)] + [(b, 1) for b in rest]
    rhs = [(_union(b0, b), 1) for b in rest] + [(_union(*rest), 1)]
    return (
        TwistWord(n, tuple((ConvexCurve(s), e) for s, e in lhs if e)),
        TwistWord(n, tuple((ConvexCurve(s), e) for s, e in rhs)),
    )


def park(n: int, a, b, c, d, e) -> tuple[TwistWord, TwistWord]:
    lhs = TwistWord(n, (
        (ConvexCurve(_union(a, b, c, d, e)), 1), (ConvexCurve(_union(a, b)), 1),
        (ConvexCurve(tuple(a)), 1), (ConvexCurve(tuple(b)), 1), (ConvexCurve(tuple(c)), 2),
        (ConvexCurve(tuple(d)), 1), (ConvexCurve(tuple(e)), 1),
    ))
    rhs = word(n, _union(a, c), _union(b, c), _union(a, b, d), _union(a, b, e), _union(c, d, e))
    return lhs, rhs


def generalized_lantern(i: int) -> tuple[TwistWord, TwistWord]:
    n = i + 2
    lhs = [(tuple(range(1, n + 1)), 1)] + [((j,), i) for j in range(1, n + 1)]
    rhs = [((j, k), 1) for j in range(1, n + 1) for k in range(j + 1, n + 1)]
    return (
        TwistWord(n, tuple((ConvexCurve(s), e) for s, e in lhs)),
        TwistWord(n, tuple((ConvexCurve(s), e) for s, e in rhs)),
    )


MN_LABELS = ("1", "2a", "2b", "3", "4a", "4b", "5")
OP_LABELS = ("1a", "1b", "2a", "2b", "3", "4a", "4b", "5a", "5b")

# Monodromy substitutions transcribed from the printed factorizations.
PRINTED = {
    "QR": (
        6,
        "D123456 D12 D1 D2 D3^2 D45^2 D4 D5 D6^3",
        "D46 D56 D145 D245 D345 D123 D126 D36",
        None,
    ),
    "UV": (
        8,
        "D12345678 D12^3 D1 D2 D34^2 D3 D4 D56^2 D5 D6 D78 D7 D8",
        "D134 D234 D125 D126 D127 D128 D5678 D356 D456 D3478",
        None,
    ),
    "KL": (
        5,
        "D1^2 D2^2 D3 D4^2 D5^2 D12345",
        "D123 D14 D15 D24 D25 D345",
        None,
    ),
    "MN": (
        7,
        "D{1}^2 D{2a,2b}^2 D{2a} D{2b} D{3} D{4a,4b} D{4a} D{4b} D{5}^3 D{1,2a,2b,3,4a,4b,5}",
        "D{1,2a,2b,3} D{1,4a,4b} D{1,5} D{2a,2b,4a} D{2a,2b,4b} D{2a,5} D{2b,5} D{3,4a,4b,5}",
        MN_LABELS,
    ),
    "OP": (
        9,
        "D{1a,1b}^2 D{1a} D{1b} D{2a,2b}^2 D{2a} D{2b} D{3} D{4a,4b}^2 D{4a} D{4b} "
        "D{5a,5b}^2 D{5a} D{5b} D{1a,1b,2a,2b,3,4a,4b,5a,5b}",
        "D{1a,1b,2a,2b,3} D{1a,4a,4b} D{1b,4a,4b} D{1a,1b,5a} D{1a,1b,5b} D{2a,2b,4a} "
        "D{2a,2b,4b} D{2a,5a,5b} D{2b,5a,5b} D{3,4a,4b,5a,5b}",
        OP_LABELS,
    ),
}

# Intermediate factorizations printed along the way in the Q -> R derivation.
QR_INTERMEDIATE = (
    "D46 D56 D1245 D345 D1236 D45 D6 D1 D2 D3",
    "D46 D56 D145 D245 D12 D345 D1236 D6 D3",
)


def printed_relation(name: str) -> tuple[TwistWord, TwistWord]:
    n, lhs, rhs, labels = PRINTED[name]
    return parse_word(lhs, n, labels), parse_word(rhs, n, labels)


def named_relation(name: str, **params) -> tuple[TwistWord, TwistWord]:
    name = name.lower()
    if name == "lantern":
        n = params.get("n", 3)
        a = params.get("a", (1,))
        b = params.get("b", (2,))
        c = params.get("c", (3,))
        return lantern(n, a, b, c)
    if name == "daisy":
        m = params.get("m", 2)
        blocks = params.get("blocks") or [(j,) for j in range(1, m + 2)]
        n = params.get("n", max(max(b) for b in blocks))
        return daisy(n, blocks)
    if name == "park":
        blocks = params.get("blocks") or [(1,), (2,), (3,), (4,), (5,)]
        n = params.get("n", max(max(b) for b in blocks))
        return park(n, *blocks)
    if name == "genlantern":
        return generalized_lantern(params.get("i", 2))
    key = name.upper()
    if key in PRINTED:
        return printed_relation(key)
    raise UnknownRelation(name)


RELATION_NAMES = ("lantern", "daisy", "park", "genlantern", "QR", "UV", "KL", "MN", "OP")


@dataclass
class RelationReport:
    name: str
    params: dict
    lhs: str
    rhs: str
    equal: bool
    seconds: float = field(default=0.0, compare=False)

    def as_dict(self, timings: bool = False) -> dict:
        d = {"name": self.name, "params": self.params, "lhs": self.lhs, "rhs": self.rhs, "equal": self.equal}
        if timings:
            d["seconds"] = round(self.seconds, 6)
        return d


def verify_named_relation(name: str, **params) -> RelationReport:
    t0 = time.perf_counter()
    lhs, rhs = named_relation(name, **params)
    eq = words_equal(lhs, rhs)
    return RelationReport(name, dict(params), str(lhs), str(rhs), eq, time.perf_counter() - t0)


def perturbations(w: TwistWord) -> Iterable[TwistWord]:
    """All words obtained by adding or removing one hole in one letter."""
    for idx, (c, e) in enumerate(w.letters):
        hs = set(c.holes)
        for h in range(1, w.holes + 1):
            new = hs ^ {h}
            if not new:
                continue
            letters = list(w.letters)
            letters[idx] = (ConvexCurve(tuple(new)), e)
            yield TwistWord(w.holes, tuple(letters))
