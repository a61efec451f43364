import math
from itertools import combinations_with_replacement

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from boxpart.errors import CapExceededError, DomainError
from boxpart.exact import (binomial_total, brute_force_coeff, coeff, coeff_vector,
                           kronecker_diff)


def enumerate_box(m, ell):
    # every multiset of m parts from {0..l}, tallied by size
    counts = [0] * (m * ell + 1)
    for parts in combinations_with_replacement(range(ell + 1), m):
        counts[sum(parts)] += 1
    return counts


def test_two_by_two():
    assert list(coeff_vector(2, 2)) == [1, 1, 2, 1, 1]


@pytest.mark.parametrize("m, ell", [(1, 1), (3, 4), (5, 5), (6, 7), (7, 3)])
def test_matches_enumeration(m, ell):
    assert list(coeff_vector(m, ell)) == enumerate_box(m, ell)


def test_brute_force_six_by_seven():
    v = coeff_vector(6, 7)
    assert all(v[n] == brute_force_coeff(6, 7, n) for n in range(43))


def test_matches_sympy_q_binomial():
    q = sympy.symbols("q")
    m, ell = 9, 11
    expr = sympy.Integer(1)
    for i in range(1, m + 1):
        expr *= (1 - q ** (ell + i)) / (1 - q ** i)
    poly = sympy.Poly(sympy.cancel(expr), q)
    ref = [int(c) for c in reversed(poly.all_coeffs())]
    assert list(coeff_vector(m, ell)) == ref


@given(st.integers(1, 25), st.integers(1, 25))
def test_structure(m, ell):
    v = list(coeff_vector(m, ell))
    assert len(v) == m * ell + 1
    assert v == v[::-1]
    assert sum(v) == binomial_total(m, ell)
    mid = len(v) // 2
    assert all(a <= b for a, b in zip(v[:mid], v[1:mid + 1]))
    assert v == list(coeff_vector(ell, m))


@given(st.integers(1, 30), st.integers(1, 30), st.data())
def test_truncation_is_exact(m, ell, data):
    top = data.draw(st.integers(0, m * ell))
    full = coeff_vector(m, ell)
    part = coeff_vector(m, ell, degree=top)
    assert list(part) == list(full)[:top + 1]
    assert part.complete == (top == m * ell)


@given(st.integers(1, 20), st.integers(1, 20), st.data())
def test_coeff_symmetric(m, ell, data):
    n = data.draw(st.integers(0, m * ell))
    assert coeff(m, ell, n) == coeff(m, ell, m * ell - n) == coeff_vector(m, ell)[n]


def test_large_values_are_exact_ints():
    v = coeff(96, 96, 3072)
    assert isinstance(v, int) and v.bit_length() > 64
    # N_n(l, m) for n <= min(l, m) is the partition number p(n)
    assert coeff(96, 96, 50) == sympy.partition(50)


def test_kronecker_diff():
    v = coeff_vector(6, 6)
    for n in range(18):
        assert kronecker_diff(6, 6, n) == v[n + 1] - v[n] >= 0
    with pytest.raises(DomainError):
        kronecker_diff(6, 6, 18)


def test_errors():
    with pytest.raises(DomainError):
        coeff_vector(0, 3)
    with pytest.raises(DomainError):
        coeff(3, 3, 10)
    with pytest.raises(CapExceededError) as exc:
        coeff_vector(1000, 1000)
    assert exc.value.required == 1_000_001
    with pytest.raises(CapExceededError):
        brute_force_coeff(13, 2, 3)
    assert brute_force_coeff(3, 3, 20) == 0


def test_total_is_binomial():
    assert binomial_total(5, 7) == math.comb(12, 5)
