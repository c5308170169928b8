import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fex import (
    GroupError,
    add,
    difference_set,
    make_group,
    make_point_set,
    neg,
    pairing,
    sample_point_set,
    sub,
)
from fex.groups import character_table


def brute_difference_set(factors, points):
    """Oracle: all p - q over distinct pairs, by plain modular arithmetic."""
    out = set()
    for p, q in itertools.permutations(points, 2):
        out.add(tuple((a - b) % n for a, b, n in zip(p, q, factors)))
    out.discard(tuple(0 for _ in factors))
    return out


group_strategy = st.lists(st.integers(min_value=1, max_value=8), min_size=1, max_size=3).map(
    make_group
)


def test_make_group_orders():
    assert make_group([4]).order == 4
    assert make_group([2, 4]).order == 8
    assert make_group([1]).order == 1


def test_make_group_rejects_nonpositive_factors():
    with pytest.raises(GroupError):
        make_group([0])
    with pytest.raises(GroupError):
        make_group([4, -2])
    with pytest.raises(GroupError):
        make_group([])


def test_add_neg_examples():
    z4 = make_group([4])
    assert add(z4, (3,), (2,)) == (1,)
    assert neg(z4, (1,)) == (3,)
    z2z4 = make_group([2, 4])
    assert add(z2z4, (1, 3), (1, 2)) == (0, 1)


def test_dimension_mismatch_raises():
    z4 = make_group([4])
    with pytest.raises(GroupError):
        add(z4, (1, 1), (0,))
    with pytest.raises(GroupError):
        neg(z4, (1, 0))


def test_enumeration_is_lexicographic_and_stable():
    g = make_group([2, 3])
    elems = g.elements()
    assert elems == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    for i, e in enumerate(elems):
        assert g.index_of(e) == i
        assert g.element_at(i) == e
    with pytest.raises(GroupError):
        g.element_at(6)


def test_pairing_examples():
    z2 = make_group([2])
    assert pairing(z2, (1,), (1,)) == pytest.approx(-1.0)
    z4 = make_group([4])
    assert pairing(z4, (1,), (1,)) == pytest.approx(1j)
    z2z4 = make_group([2, 4])
    for gamma in z2z4.elements():
        assert pairing(z2z4, z2z4.zero, gamma) == pytest.approx(1.0)


def test_pairing_unimodular():
    g = make_group([3, 4])
    for a in g.elements():
        for b in g.elements():
            assert abs(abs(pairing(g, a, b)) - 1.0) < 1e-14


@settings(max_examples=60, deadline=None)
@given(group_strategy, st.data())
def test_pairing_is_bicharacter(g, data):
    pick = st.sampled_from(g.elements())
    x, y, gamma = data.draw(pick), data.draw(pick), data.draw(pick)
    lhs = pairing(g, add(g, x, y), gamma)
    rhs = pairing(g, x, gamma) * pairing(g, y, gamma)
    assert abs(lhs - rhs) < 1e-12


def test_character_orthogonality():
    for factors in ([8], [2, 4], [3, 5], [12]):
        g = make_group(factors)
        for gamma in g.elements():
            total = sum(pairing(g, x, gamma) for x in g.elements())
            expected = g.order if gamma == g.zero else 0.0
            assert abs(total - expected) <= 1e-9 * g.order


def test_character_table_matches_pairing():
    g = make_group([2, 3])
    table = character_table(g)
    for i, x in enumerate(g.elements()):
        for j, gamma in enumerate(g.elements()):
            assert table[i, j] == pytest.approx(pairing(g, x, gamma), abs=1e-14)
    assert not table.flags.writeable


def test_point_set_sorted_and_distinct():
    g = make_group([8])
    ps = make_point_set(g, [[5], [0], [3]])
    assert ps.points == ((0,), (3,), (5,))
    assert ps.n == 3
    with pytest.raises(GroupError):
        make_point_set(g, [[1], [9]])  # 9 == 1 mod 8
    with pytest.raises(GroupError):
        make_point_set(g, [])


def test_difference_set_examples():
    z8 = make_group([8])
    K = make_point_set(z8, [[0], [3]])
    assert difference_set(z8, K) == {(3,), (5,)}
    assert difference_set(z8, K) == brute_difference_set((8,), [(0,), (3,)])

    single = make_point_set(z8, [[4]])
    assert difference_set(z8, single) == frozenset()

    z4 = make_group([4])
    full = make_point_set(z4, [[0], [1], [2], [3]])
    assert difference_set(z4, full) == {(1,), (2,), (3,)}
    assert difference_set(z4, full) == brute_difference_set((4,), full.points)


@settings(max_examples=60, deadline=None)
@given(group_strategy, st.data())
def test_difference_set_symmetric_and_avoids_zero(g, data):
    size = data.draw(st.integers(min_value=1, max_value=min(5, g.order)))
    idx = data.draw(
        st.lists(
            st.integers(min_value=0, max_value=g.order - 1),
            min_size=size,
            max_size=size,
            unique=True,
        )
    )
    ps = make_point_set(g, [g.element_at(i) for i in idx])
    diffs = difference_set(g, ps)
    assert g.zero not in diffs
    assert all(neg(g, d) in diffs for d in diffs)
    assert diffs == brute_difference_set(g.factors, ps.points)


def test_sub_matches_add_neg():
    g = make_group([5, 2])
    for a in g.elements():
        for b in g.elements():
            assert sub(g, a, b) == add(g, a, neg(g, b))


def test_sample_point_set_deterministic():
    g = make_group([16])
    a = sample_point_set(g, 4, np.random.default_rng(3))
    b = sample_point_set(g, 4, np.random.default_rng(3))
    assert a == b
    assert a.n == 4
    with pytest.raises(GroupError):
        sample_point_set(g, 17, np.random.default_rng(0))
