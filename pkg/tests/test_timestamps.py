from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from tokenflow import INT_TIMES, PAIR_TIMES, U64_MAX

ints = st.integers(min_value=0, max_value=U64_MAX)
pairs = st.tuples(ints, ints)
small_ints = st.integers(min_value=0, max_value=1000)
small_pairs = st.tuples(small_ints, small_ints)


@given(a=ints)
def test_int_reflexive(a):
    assert INT_TIMES.leq(a, a)


@given(a=ints, b=ints)
def test_int_antisymmetric(a, b):
    if INT_TIMES.leq(a, b) and INT_TIMES.leq(b, a):
        assert a == b


@given(a=ints, b=ints, c=ints)
def test_int_transitive(a, b, c):
    if INT_TIMES.leq(a, b) and INT_TIMES.leq(b, c):
        assert INT_TIMES.leq(a, c)


@given(a=pairs)
def test_pair_reflexive(a):
    assert PAIR_TIMES.leq(a, a)


@given(a=pairs, b=pairs)
def test_pair_antisymmetric(a, b):
    if PAIR_TIMES.leq(a, b) and PAIR_TIMES.leq(b, a):
        assert a == b


@given(a=pairs, b=pairs, c=pairs)
def test_pair_transitive(a, b, c):
    if PAIR_TIMES.leq(a, b) and PAIR_TIMES.leq(b, c):
        assert PAIR_TIMES.leq(a, c)


@given(t=ints)
def test_int_zero_least(t):
    assert INT_TIMES.leq(INT_TIMES.zero, t)


@given(t=pairs)
def test_pair_zero_least(t):
    assert PAIR_TIMES.leq(PAIR_TIMES.zero, t)


def test_pair_genuinely_partial():
    assert not PAIR_TIMES.leq((0, 1), (1, 0))
    assert not PAIR_TIMES.leq((1, 0), (0, 1))


@given(s=ints, t=ints)
def test_int_summary_nondecreasing(s, t):
    assert INT_TIMES.leq(t, INT_TIMES.apply(s, t))


@given(s=small_ints, a=small_ints, b=small_ints)
def test_int_summary_monotone(s, a, b):
    if INT_TIMES.leq(a, b):
        assert INT_TIMES.leq(INT_TIMES.apply(s, a), INT_TIMES.apply(s, b))


@given(s=pairs, t=pairs)
def test_pair_summary_nondecreasing(s, t):
    assert PAIR_TIMES.leq(t, PAIR_TIMES.apply(s, t))


@given(s=small_pairs, a=small_pairs, b=small_pairs)
def test_pair_summary_monotone(s, a, b):
    if PAIR_TIMES.leq(a, b):
        assert PAIR_TIMES.leq(PAIR_TIMES.apply(s, a), PAIR_TIMES.apply(s, b))


@given(a=small_ints, b=small_ints, c=small_ints, t=small_ints)
def test_int_compose_associative_and_consistent(a, b, c, t):
    left = INT_TIMES.compose(INT_TIMES.compose(a, b), c)
    right = INT_TIMES.compose(a, INT_TIMES.compose(b, c))
    assert left == right
    assert INT_TIMES.apply(INT_TIMES.compose(a, b), t) == INT_TIMES.apply(
        b, INT_TIMES.apply(a, t)
    )


def test_identity_summary():
    assert INT_TIMES.apply(INT_TIMES.identity, 7) == 7
    assert PAIR_TIMES.apply(PAIR_TIMES.identity, (3, 4)) == (3, 4)


def test_apply_examples():
    assert INT_TIMES.apply(1, 7) == 8
    assert INT_TIMES.apply(INT_TIMES.compose(1, 2), 0) == 3


def test_apply_saturates():
    assert INT_TIMES.apply(5, U64_MAX - 1) == U64_MAX
    assert INT_TIMES.apply(1, U64_MAX) == U64_MAX
    assert PAIR_TIMES.apply((1, 1), (U64_MAX, 3)) == (U64_MAX, 4)


def test_advances():
    assert not INT_TIMES.advances(0)
    assert INT_TIMES.advances(1)
    assert not PAIR_TIMES.advances((0, 0))
    assert PAIR_TIMES.advances((1, 0))
    assert PAIR_TIMES.advances((0, 2))


def test_check_time_rejects_garbage():
    with pytest.raises(ValueError):
        INT_TIMES.check_time(-1)
    with pytest.raises(ValueError):
        INT_TIMES.check_time("7")
    with pytest.raises(ValueError):
        PAIR_TIMES.check_time((1,))
    with pytest.raises(ValueError):
        PAIR_TIMES.check_time((1, -2))
