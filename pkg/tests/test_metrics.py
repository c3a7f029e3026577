from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid3sat.formula import Assignment
from hybrid3sat.metrics import cyclical, distances, hamming

from oracles import popcount_distance, ring_distance


def bits(s: str) -> Assignment:
    """Ket string, most significant qubit first."""
    return Assignment.from_bits(int(c) for c in reversed(s))


def test_ket_example():
    assert cyclical(bits("0010"), bits("1101"), 4) == 5
    assert hamming(bits("0010"), bits("1101")) == 4


@pytest.mark.parametrize("n", range(1, 9))
def test_wrap_around(n):
    assert cyclical(0, 2**n - 1, n) == 1


def test_report_and_errors():
    r = distances(bits("0010"), bits("1101"))
    assert (r.hamming, r.cyclical) == (4, 5)
    with pytest.raises(ValueError):
        hamming(bits("01"), bits("011"))
    with pytest.raises(ValueError):
        cyclical(16, 0, 4)


@pytest.mark.parametrize("n", range(1, 9))
def test_metric_properties_exhaustive(n):
    size = 2**n
    d = [[cyclical(a, b, n) for b in range(size)] for a in range(size)]
    for a in range(size):
        ga = Assignment.from_index(a, n)
        for b in range(size):
            gb = Assignment.from_index(b, n)
            h = hamming(ga, gb)
            assert d[a][b] == ring_distance(a, b, n)
            assert h == popcount_distance(a, b)
            assert d[a][b] == d[b][a] and h == hamming(gb, ga)
            assert 0 <= d[a][b] <= 2 ** (n - 1) and 0 <= h <= n
            assert (d[a][b] == 0) == (h == 0) == (a == b)
    if n <= 6:
        for a, b, c in itertools.product(range(size), repeat=3):
            assert d[a][c] <= d[a][b] + d[b][c]


@given(st.integers(1, 16).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1),
                        st.integers(-(2**n), 2**n))))
def test_translation_invariance(args):
    n, g, t, c = args
    size = 2**n
    assert cyclical(g, t, n) == cyclical((g + c) % size, (t + c) % size, n)
