import pytest
from hypothesis import given, strategies as st

from platlab.errors import AmbiguousOrder
from platlab.weights import ONE, Weight, compare


def m(i, j):
    return Weight.magnitude(i, j)


def test_constants_and_arithmetic():
    assert Weight.const(0) == Weight(tuple())
    assert (Weight.const(2) + 3).const_value() == 5
    w = (m(2, 3) + 1) * m(3, 3)
    assert w.evaluate({(2, 3): 2, (3, 3): 5}) == 15


def test_structural_equality_is_order_independent():
    a = m(2, 3) * m(3, 3) + ONE
    b = ONE + m(3, 3) * m(2, 3)
    assert a == b


def test_shifted_expansion():
    # m^2 - 4 around m = 2 is u^2 + 4u
    d = m(2, 1) * m(2, 1) - 4
    sh = dict(d.shifted(2).terms)
    assert sh[((((2, 1), 2)),)] == 1
    assert sh[((((2, 1), 1)),)] == 4
    assert tuple() not in sh


def test_compare_decidable_cases():
    n1 = m(2, 3) * m(3, 3) * m(4, 2)
    n2 = m(2, 3) * m(3, 3)
    n3 = m(2, 3) + m(4, 3) * (1 + m(2, 3) * m(3, 3) + m(2, 3) * m(3, 4))
    n4 = 1 + m(2, 3) * m(3, 4)
    assert compare(n1, n2) == ">"
    assert compare(n2, n3) == "<"
    assert compare(n3, n4) == ">"
    assert compare(n2, n2) == "="


def test_compare_ambiguous_raises():
    with pytest.raises(AmbiguousOrder):
        compare(m(2, 1), m(2, 2))


@given(
    st.integers(2, 9),
    st.integers(2, 9),
    st.integers(2, 9),
    st.integers(2, 9),
    st.integers(2, 9),
)
def test_fig_weight_inequalities_hold_pointwise(a, b, c, d, e):
    mags = {(2, 3): a, (3, 3): b, (3, 4): c, (4, 2): d, (4, 3): e}
    n1 = (m(2, 3) * m(3, 3) * m(4, 2)).evaluate(mags)
    n2 = (m(2, 3) * m(3, 3)).evaluate(mags)
    n3 = (m(2, 3) + m(4, 3) * (1 + m(2, 3) * m(3, 3) + m(2, 3) * m(3, 4))).evaluate(mags)
    n4 = (1 + m(2, 3) * m(3, 4)).evaluate(mags)
    assert n1 > n2 and n2 < n3 and n3 > n4
    assert min(n1, n2, n3, n4) > 0
