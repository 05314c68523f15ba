"""Braid words and Dynnikov coordinates.

A braid word is a tuple of nonzero ints: ``i`` stands for sigma_i and ``-i``
for its inverse (1-based).  Words act on the right, letter by letter, so the
leftmost letter is applied first.

The invariant is the Dynnikov coordinate vector of the lamination
``(0, 1, 0, 1, ..., 0, 1)`` after the word acts.  Two braids of ``B_m`` are
equal iff their coordinate vectors agree; the vector lives in ``Z^(2m)``
which already carries the usual boundary augmentation.  We add one more
unused strand on top of that so the comparison never relies on the last
strand being special.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"generator {x} out of range for {self.strands} strands")

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def __len__(self):
        return len(self.letters)


def base_coordinates(strands: int) -> tuple[int, ...]:
    return (0, 1) * (strands + 1)


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _neg(x: int) -> int:
    return x if x < 0 else 0


def act(coords: list[int], letter: int) -> None:
    """Apply one Artin generator to a coordinate list in place."""
    i = abs(letter) - 1
    a1, b1, a2, b2 = coords[2 * i], coords[2 * i + 1], coords[2 * i + 2], coords[2 * i + 3]
    if letter > 0:
        c = a1 - _neg(b1) - a2 + _pos(b2)
        coords[2 * i] = a1 + _pos(b1) + _pos(_pos(b2) - c)
        coords[2 * i + 1] = b2 - _pos(c)
        coords[2 * i + 2] = a2 + _neg(b2) + _neg(_neg(b1) + c)
        coords[2 * i + 3] = b1 + _pos(c)
    else:
        d = a1 + _neg(b1) - a2 - _pos(b2)
        coords[2 * i] = a1 - _pos(b1) - _pos(_pos(b2) + d)
        coords[2 * i + 1] = b2 + _neg(d)
        coords[2 * i + 2] = a2 - _neg(b2) - _neg(_neg(b1) - d)
        coords[2 * i + 3] = b1 - _neg(d)


def invariant(b: BraidWord) -> tuple[int, ...]:
    """Dynnikov coordinates of the base lamination after ``b``."""
    coords = list(base_coordinates(b.strands))
    for x in b.letters:
        act(coords, x)
    return tuple(coords)


def braids_equal(b1: BraidWord, b2: BraidWord) -> bool:
    if b1.strands != b2.strands:
        raise ValueError("strand count mismatch")
    return invariant(b1) == invariant(b2)


# -- free group oracle -------------------------------------------------------
# Artin's action of B_m on the free group F_m.  Faithful, so it decides braid
# equality independently of the coordinates above; only used for testing.


def _reduce(word: list[int]) -> list[int]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _inv(word: list[int]) -> list[int]:
    return [-x for x in reversed(word)]


def artin_images(b: BraidWord) -> tuple[tuple[int, ...], ...]:
    """Images of the free generators x_1..x_m under the braid (right action)."""
    m = b.strands
    images = [[k] for k in range(1, m + 1)]
    for letter in b.letters:
        i = abs(letter) - 1
        xi, xj = images[i], images[i + 1]
        if letter > 0:
            # x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i
            images[i], images[i + 1] = _reduce(xi + xj + _inv(xi)), xi
        else:
            # x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
            images[i], images[i + 1] = xj, _reduce(_inv(xj) + xi + xj)
    return tuple(tuple(w) for w in images)
