import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cellkit.polys import LaurentPoly, Poly

laurent = st.dictionaries(st.integers(-5, 5), st.integers(-4, 4), max_size=5).map(LaurentPoly)


def test_zero_and_degree():
    assert Poly().degree == -math.inf
    assert Poly([1, 0, 2]).degree == 2
    assert Poly([0, 0]) == Poly()
    assert Poly([1, 1]).to_list() == [1, 1]
    with pytest.raises(ValueError):
        Poly({-1: 1})


def test_str():
    assert str(Poly([1])) == "1"
    assert str(Poly([1, 1])) == "1 + q"


def test_laurent_bar_and_eval():
    p = LaurentPoly({-1: 1, 1: 1})
    assert p.bar() == p
    assert p(1) == 2
    assert (p * p).coeffs == {-2: 1, 0: 2, 2: 1}
    assert p.max_exponent() == 1 and p.min_exponent() == -1


@given(laurent, laurent, laurent)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a) == LaurentPoly()
    assert (a * b).bar() == a.bar() * b.bar()
    assert 0 not in (a * b).coeffs.values()
