"""Digit lattices, cycle search (both routes), and candidate spectra."""

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aifs.catalog import simplex_spectrum_digits, simplex_system
from aifs.cycles_spectrum import (
    build_digit_lattice,
    classify_extreme,
    enumerate_box_points,
    extreme_cycles,
    find_cycles_by_words,
    integer_span_basis,
    spectrum_from_cycles,
)
from aifs.errors import RankDeficient
from aifs.ifs_core import AffineSystem
from aifs.linalg_exact import Matrix, frac, fvec


def sys1d(scale, digits):
    return AffineSystem(
        R=Matrix([[frac(scale)]]),
        digits=tuple((frac(b),) for b in digits),
    )


def dual_of(sys, freqs):
    return AffineSystem(
        R=sys.R.transpose(), digits=tuple(fvec(l) for l in freqs)
    )


CANTOR4 = sys1d(4, [0, 2])
CANTOR4_DUAL = dual_of(CANTOR4, [[0], [1]])


@lru_cache(maxsize=None)
def d2p3_pair():
    s = simplex_system(3, 2)
    dual = dual_of(s, simplex_spectrum_digits(3, 2))
    return s, dual


@lru_cache(maxsize=None)
def d2p3_word_cycles():
    s, dual = d2p3_pair()
    return tuple(extreme_cycles(s, dual, via="words"))


# ---------------------------------------------------------------- lattices


def test_integer_span_basis_canonical_form():
    # rows are reduced to a canonical echelon basis, so span equality is
    # plain equality of bases
    b1 = integer_span_basis([(2, 0), (0, 2), (1, 1)])
    b2 = integer_span_basis([(1, 1), (2, 0)])
    assert b1 == b2
    assert b1 == [[1, 1], [0, 2]]


def test_integer_span_basis_rank_deficient():
    assert integer_span_basis([(2, 4), (1, 2)]) == [[1, 2]]


def test_build_digit_lattice_simplex_is_standard():
    lat = build_digit_lattice(simplex_system(3, 2))
    assert lat.contains((Fraction(1), Fraction(0)))
    assert lat.contains((Fraction(0), Fraction(1)))
    assert not lat.contains((Fraction(1, 2), Fraction(0)))
    assert lat.det() == 1


@pytest.mark.filterwarnings("ignore:digit set is not integral")
def test_build_digit_lattice_grows_until_stable():
    # digits {0, 1/2} under scale 2: the stable lattice is (1/2) Z
    s = sys1d(2, [0, "1/2"])
    lat = build_digit_lattice(s)
    assert lat.contains((Fraction(1, 2),))
    assert lat.det() == Fraction(1, 2)


def test_build_digit_lattice_rank_deficient():
    # planar digits along one line never span a full-rank lattice
    s = AffineSystem(
        R=Matrix.identity(2).scale(3),
        digits=((Fraction(0), Fraction(0)), (Fraction(2), Fraction(-2))),
    )
    with pytest.raises(RankDeficient):
        build_digit_lattice(s)


def test_enumerate_box_points():
    lat = build_digit_lattice(simplex_system(3, 2))
    pts = enumerate_box_points(lat.dual(), (-1.5, -1.5), (1.5, 1.5))
    assert len(pts) == 9  # integer points of [-1, 1]^2


# ---------------------------------------------------------------- cycles


def test_cantor4_single_cycle_both_routes():
    for via in ("box", "words"):
        cycles = extreme_cycles(CANTOR4, CANTOR4_DUAL, via=via)
        assert [c.points for c in cycles] == [((Fraction(0),),)]


def test_d1_p2_two_cycles():
    s = sys1d(2, [0, 1])
    dual = dual_of(s, [[0], [1]])
    cycles = extreme_cycles(s, dual)
    assert {c.points[0][0] for c in cycles} == {0, 1}


def test_simplex_d2_p3_three_cycles_box_and_words_agree():
    s, dual = d2p3_pair()
    got_box = {frozenset(c.points) for c in extreme_cycles(s, dual, via="box")}
    got_words = {
        frozenset(c.points) for c in extreme_cycles(s, dual, via="words")
    }
    want = {
        frozenset({(Fraction(0), Fraction(0))}),
        frozenset({(Fraction(1), Fraction(-1))}),
        frozenset({(Fraction(-1), Fraction(1))}),
    }
    assert got_box == want
    assert got_words == want


def test_word_route_period_two_cycle():
    # scale 3, digits {0, 2}: 3 * (1/4) - 0 = 3/4 and 3 * (3/4) - 2 = 1/4,
    # so {1/4, 3/4} is a genuine period-two cycle
    dual = sys1d(3, [0, 2])
    cycles = find_cycles_by_words(dual, max_period=4)
    pts = {frozenset(c.points) for c in cycles}
    assert frozenset({(Fraction(1, 4),), (Fraction(3, 4),)}) in pts


def test_cycle_records_satisfy_defining_relation():
    s, dual = d2p3_pair()
    for rec in extreme_cycles(s, dual):
        m = len(rec.points)
        for i in range(m):
            nxt = dual.R.mat_vec(rec.points[i])
            nxt = tuple(
                a - b for a, b in zip(nxt, dual.digits[rec.digit_indices[i]])
            )
            assert nxt == rec.points[(i + 1) % m]


# ---------------------------------------------------------------- spectra


def test_cantor4_spectrum_levels():
    cycles = extreme_cycles(CANTOR4, CANTOR4_DUAL)
    s3 = spectrum_from_cycles(CANTOR4_DUAL, cycles, 3)
    assert [v[0] for v in s3.elements] == [0, 1, 4, 5, 16, 17, 20, 21]


def test_spectrum_levels_nested():
    cycles = extreme_cycles(CANTOR4, CANTOR4_DUAL)
    s2 = spectrum_from_cycles(CANTOR4_DUAL, cycles, 2)
    s4 = spectrum_from_cycles(CANTOR4_DUAL, cycles, 4)
    assert set(s2.elements) <= set(s4.elements)


def test_d1_p2_spectrum_is_integer_interval():
    s = sys1d(2, [0, 1])
    dual = dual_of(s, [[0], [1]])
    cycles = extreme_cycles(s, dual)
    s5 = spectrum_from_cycles(dual, cycles, 5)
    assert [v[0] for v in s5.elements] == [Fraction(k) for k in range(-32, 32)]


def test_spectrum_rejects_non_extreme_cycles():
    dual = sys1d(3, [0, 2])
    sys_geom = sys1d(3, [0, 1])
    cycles = classify_extreme(sys_geom, find_cycles_by_words(dual, 4))
    bad = [c for c in cycles if not c.extreme]
    assert bad  # {1/4, 3/4} is a cycle but not extreme for these digits
    with pytest.raises(ValueError):
        spectrum_from_cycles(dual, bad, 2)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 4))
def test_spectrum_nesting_property_simplex_d2_p3(level):
    _, dual = d2p3_pair()
    cycles = d2p3_word_cycles()
    a = spectrum_from_cycles(dual, cycles, level)
    b = spectrum_from_cycles(dual, cycles, level + 1)
    assert set(a.elements) <= set(b.elements)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
        min_size=1,
        max_size=5,
    )
)
def test_integer_span_basis_idempotent_and_contains_gens(gens):
    basis = integer_span_basis(gens)
    assert integer_span_basis(basis) == basis
    # inserting any generator back must not grow the span
    for g in gens:
        assert integer_span_basis(basis + [list(g)]) == basis
