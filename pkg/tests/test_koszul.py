"""Koszul complexes on pure-power sequences."""

import pytest

from frobext.koszul import KoszulComplex, koszul_window_report
from frobext.poly import ring_over


@pytest.mark.parametrize("p,d,exps", [(2, 1, (2,)), (2, 2, (1, 1)), (3, 2, (2, 1))])
def test_d_squared_is_zero_symbolically(p, d, exps):
    ring = ring_over(p, 1, d)
    fs = [g**a for g, a in zip(ring.gens(), exps)]
    K = KoszulComplex(ring, fs)
    assert K.d_squared_is_zero()


def test_ranks_are_binomials():
    ring = ring_over(2, 1, 2)
    x, y = ring.gens()
    K = KoszulComplex(ring, [x, y])
    assert [K.rank(j) for j in range(3)] == [1, 2, 1]
    assert K.rank(-1) == 0 and K.rank(3) == 0


def test_two_variable_middle_differential():
    # the middle map of the length-2 complex is (f0, f1) as a single row,
    # and the top map is the signed column (-f1, f0)
    ring = ring_over(3, 1, 2)
    x, y = ring.gens()
    K = KoszulComplex(ring, [x, y])
    d1 = K.differential(1)
    assert d1 == [[x, y]]
    d2 = K.differential(2)
    flat = [row[0] for row in d2]
    assert {ring.format(f) for f in flat} == {ring.format(-y), ring.format(x)}


@pytest.mark.parametrize("p,exps", [(2, (2,)), (3, (1, 1))])
def test_windowed_exactness(p, exps):
    ring = ring_over(p, 1, len(exps))
    fs = [g**a for g, a in zip(ring.gens(), exps)]
    K = KoszulComplex(ring, fs)
    report = koszul_window_report(K, cap=3)
    assert report["passed"], report


def test_quotient_algebra_matches_exponents():
    ring = ring_over(2, 1, 2)
    x, y = ring.gens()
    K = KoszulComplex(ring, [x**2, y**3])
    assert K.quotient_algebra().exponents == (2, 3)
