from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from starsurgery.braid import BraidWord, artin_images, braids_equal, invariant


def words(strands=5, max_len=12):
    gens = [i for i in range(1, strands) for i in (i, -i)]
    return st.lists(st.sampled_from(gens), max_size=max_len).map(lambda w: BraidWord(strands, tuple(w)))


def test_braid_relations():
    n = 5
    assert braids_equal(BraidWord(n, (1, 2, 1)), BraidWord(n, (2, 1, 2)))
    assert braids_equal(BraidWord(n, (1, 3)), BraidWord(n, (3, 1)))
    assert braids_equal(BraidWord(n, (2, -2)), BraidWord(n, ()))
    assert not braids_equal(BraidWord(n, (1,)), BraidWord(n, (-1,)))
    assert not braids_equal(BraidWord(n, (1, 2)), BraidWord(n, (2, 1)))


def test_bad_generator():
    with pytest.raises(ValueError):
        BraidWord(3, (3,))


@given(words(), words())
def test_invariant_agrees_with_free_group_action(a, b):
    # Artin's representation is faithful, so it is an independent oracle.
    assert braids_equal(a, b) == (artin_images(a) == artin_images(b))


@given(words())
def test_inverse_cancels(a):
    assert invariant(a * a.inverse()) == invariant(BraidWord(a.strands, ()))


@given(words(4, 8), words(4, 8), words(4, 8))
def test_invariant_is_compatible_with_products(a, b, c):
    # equal braids stay equal after multiplying on either side
    if braids_equal(a, b):
        assert braids_equal(a * c, b * c) and braids_equal(c * a, c * b)
