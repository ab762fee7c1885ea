"""Exact vanishing-sum certificates through cyclotomic divisibility."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aifs.cyclotomy import (
    cyclotomic,
    divisors,
    mobius,
    poly_divides,
    vanishing_sum,
)
from aifs.errors import ExactnessUnavailable


def test_divisors_and_mobius():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_cyclotomic_small():
    # ascending coefficients: constant term first
    assert cyclotomic(1) == (-1, 1)  # t - 1
    assert cyclotomic(2) == (1, 1)  # 1 + t
    assert cyclotomic(4) == (1, 0, 1)  # 1 + t^2
    assert cyclotomic(6) == (1, -1, 1)  # 1 - t + t^2


def test_cyclotomic_105_has_coefficient_minus_two():
    # the first index where a coefficient outside {-1, 0, 1} appears;
    # catches naive constructions that assume flat coefficients
    coeffs = cyclotomic(105)
    assert len(coeffs) == 49  # degree phi(105) = 48
    assert min(coeffs) == -2


def test_poly_divides():
    # ascending coefficients; t^2 - 1 = (t - 1)(t + 1)
    assert poly_divides([-1, 1], [-1, 0, 1])
    assert poly_divides([1, 1], [-1, 0, 1])
    assert not poly_divides([1, 0, 1], [-1, 0, 1])


def test_cube_roots_of_unity_sum_to_zero():
    assert vanishing_sum([1, 1, 1], [Fraction(0), Fraction(1, 3), Fraction(2, 3)])


def test_pair_sum_nonzero():
    assert not vanishing_sum([1, 1], [Fraction(0), Fraction(1, 3)])


def test_half_turn_cancels():
    assert vanishing_sum([1, 1], [Fraction(0), Fraction(1, 2)])


def test_weighted_cancellation():
    # 2 e(0) + e(1/2) + e(1/2) = 0, with rational weights
    assert vanishing_sum(
        [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)],
        [Fraction(1, 2), Fraction(0), Fraction(0)],
    )


def test_gcd_reduction_handles_large_common_denominator():
    # phases k/999983 with k multiples of 999983/... : reduces to q = 3
    big = 999983 * 3
    assert vanishing_sum(
        [1, 1, 1],
        [Fraction(0), Fraction(999983, big), Fraction(2 * 999983, big)],
    )


def test_cap_raises_exactness_unavailable():
    with pytest.raises(ExactnessUnavailable):
        vanishing_sum(
            [1, 1], [Fraction(0), Fraction(1, 2)], q_cap=1
        )


def test_integer_phases_reduce_to_constant():
    # both phases integral: sum = 2 != 0, via the q = 1 shortcut
    assert not vanishing_sum([1, 1], [Fraction(0), Fraction(3)])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 40))
def test_full_root_system_vanishes(q):
    phases = [Fraction(k, q) for k in range(q)]
    assert vanishing_sum([1] * q, phases)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 31), st.integers(1, 12))
def test_scaling_phases_by_coprime_integer_keeps_vanishing(q, t):
    # Galois action: if sum e(k/q) over a full system vanishes, so does the
    # sum with phases multiplied by any integer t coprime to q
    from math import gcd

    if gcd(t, q) != 1:
        return
    phases = [Fraction(k * t % q, q) for k in range(q)]
    assert vanishing_sum([1] * q, phases)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 25), st.integers(0, 24))
def test_rotating_a_vanishing_sum_keeps_it_vanishing(q, shift):
    # multiplying every term by e(shift/q) preserves the zero
    phases = [Fraction((k + shift) % q, q) for k in range(q)]
    assert vanishing_sum([1] * q, phases)
