"""Stacked tails, dyad combinations, rank reports, and the scalar 2x2 classifier."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyops.ranktests import (
    OuterCombination,
    OuterTerm,
    RankReport,
    StackedVector,
    ZeroProductReport,
    matrix2_zero_product,
    outer_equal,
    rank_of,
    skew_rank_parity_check,
    stack_columns,
    stacked_proportional,
)
from hardyops.symbols import (
    EXACT,
    ExactComplex,
    LaurentPoly,
    conj_fn,
    flip_tilde,
    project_minus,
    star,
)

from support import RANK2_DENSE, ex, mat, rand_fv_pair, rand_matrix, rand_poly

fractions = st.fractions(min_value=-6, max_value=6, max_denominator=6)
coeffs = st.builds(ExactComplex, fractions, fractions)
tails = st.dictionaries(st.integers(-5, -1), coeffs, max_size=4)
vectors = st.builds(StackedVector, tails, tails)
scalars2 = st.tuples(
    st.tuples(coeffs, coeffs), st.tuples(coeffs, coeffs)
)


# -- stacked tails --------------------------------------------------------------


def test_stacked_vector_rejects_nonnegative_indices():
    with pytest.raises(ValueError):
        StackedVector({0: 1}, {})
    with pytest.raises(ValueError):
        StackedVector({}, {2: 1})


@given(vectors, coeffs)
def test_scale_and_conjugate_commute(v, c):
    assert v.scale(c).conjugated().as_map() == v.conjugated().scale(c.conjugate()).as_map()


def test_stack_columns_transform_conventions():
    """The four stacked tails are the coanalytic parts of fixed transforms
    of the entries: columns see the linear flip, rows the conjugations."""
    h = mat("z+2z^-1", "3z^2+z^-1", "z^-2+4", "5z+z^-3")
    cs = stack_columns(h)
    pairs = [
        (cs.first_column, flip_tilde(h.f), h.g),
        (cs.second_column, flip_tilde(h.u), h.v),
        (cs.first_row, star(h.f), conj_fn(h.u)),
        (cs.second_row, star(h.g), conj_fn(h.v)),
    ]
    for stacked, top_sym, bottom_sym in pairs:
        want = StackedVector.from_tails(project_minus(top_sym), project_minus(bottom_sym))
        assert stacked.as_map() == want.as_map()


@pytest.mark.parametrize(
    "entries,row_zero,col_zero",
    [
        (("z+1", "z^-2", "0", "0"), True, False),    # f analytic, u coanalytic
        (("z^-1", "z", "z^-1", "0"), False, False),  # coanalytic g blocks the column
        (("z^-1+2", "0", "z^2", "0"), False, True),  # f coanalytic, g analytic
    ],
)
def test_vanishing_characterizations(entries, row_zero, col_zero):
    cs = stack_columns(mat(*entries))
    assert cs.first_row.is_zero() == row_zero
    assert cs.first_column.is_zero() == col_zero


@given(vectors, vectors, coeffs)
def test_stacked_proportional_solves(v, w, lam):
    if w.is_zero():
        return
    got = stacked_proportional(w.scale(lam), w)
    assert got is not None and got.lam == lam
    if stacked_proportional(v, w) is None:
        assert not outer_equal(
            OuterCombination.dyad(v, w), OuterCombination.dyad(w, w)
        ) or v.as_map() == w.as_map()


# -- dyads and rank --------------------------------------------------------------


@given(vectors, vectors, coeffs)
def test_dyad_right_factor_is_conjugate_linear(l, r, lam):
    lhs = OuterCombination.dyad(l.scale(lam), r)
    rhs = OuterCombination.dyad(l, r.scale(lam.conjugate()))
    assert outer_equal(lhs, rhs)


@given(vectors, vectors)
def test_dyad_rank_bounds(l, r):
    c = OuterCombination.dyad(l, r)
    expect = 0 if (l.is_zero() or r.is_zero()) else 1
    assert rank_of(c).rank == expect


@given(vectors, vectors, vectors, vectors)
@settings(max_examples=60)
def test_difference_rank_at_most_two(l1, r1, l2, r2):
    rep = rank_of(OuterCombination.difference(l1, r1, l2, r2))
    assert 0 <= rep.rank <= 2
    assert len(rep.basis_witness) == rep.rank


def test_two_term_relations_solved():
    l = StackedVector({-1: 2}, {-2: 1})
    r = StackedVector({-1: 1}, {})
    c = OuterCombination.difference(l, r, l.scale(3), r)
    rep = rank_of(c)
    assert rep.rank == 1
    assert rep.relations["left"].lam == ExactComplex(Fraction(3))


def test_outer_equal_distinguishes():
    l = StackedVector({-1: 1}, {})
    r = StackedVector({-2: 1}, {})
    assert outer_equal(OuterCombination.dyad(l, r), OuterCombination.dyad(l, r))
    assert not outer_equal(OuterCombination.dyad(l, r), OuterCombination.dyad(r, l))
    assert not outer_equal(OuterCombination.dyad(l, r), OuterCombination([]))


# -- the even-rank constraint -----------------------------------------------------


def test_skew_parity_requires_matched_diagonal():
    good = mat("z", "z^-1", "z", "z")
    with pytest.raises(ValueError):
        skew_rank_parity_check(good, mat("z", "0", "0", "2z"))
    with pytest.raises(ValueError):
        skew_rank_parity_check(mat("z", "0", "0", "2z"), good)


def test_skew_parity_on_commuting_diagonal_pairs():
    ha = mat("z+z^-1", "2z", "3z^-1", "z+z^-1")
    hb = mat("2z+2z^-1", "4z", "6z^-1", "2z+2z^-1")
    assert skew_rank_parity_check(ha, hb)
    hs = mat("z", "z", "z", "z")
    assert skew_rank_parity_check(hs, hs)


def test_skew_parity_random_commuting_pairs():
    rng = random.Random(20240817)
    for _ in range(40):
        h1, h2 = rand_fv_pair(rng)
        assert skew_rank_parity_check(h1, h2)


# -- scalar 2x2 zero products -----------------------------------------------------


def _mul2(a, b):
    return [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]


def test_zero_product_case_templates():
    zero = ((0, 0), (0, 0))
    a = ((1, 2), (3, 4))
    assert matrix2_zero_product(zero, a).case == "zero-factor"
    assert matrix2_zero_product(zero, a).zero_factor == "left"
    assert matrix2_zero_product(a, zero).zero_factor == "right"
    assert matrix2_zero_product(zero, zero).zero_factor == "both"

    got = matrix2_zero_product(((1, 0), (2, 0)), ((0, 0), (5, 7)))
    assert got.case == "disjoint-support"

    # columns of A proportional with ratio mu, rows of B with ratio -mu
    got = matrix2_zero_product(((2, 1), (4, 2)), ((1, 1), (-2, -2)))
    assert got.case == "proportional"
    assert got.mu == ExactComplex(Fraction(2))

    assert matrix2_zero_product(a, a).case is None
    assert not matrix2_zero_product(a, a)


@given(scalars2, scalars2)
@settings(max_examples=200)
def test_zero_product_matches_multiplication(a, b):
    rep = matrix2_zero_product(a, b)
    prod = _mul2(a, b)
    vanishes = all(not c for row in prod for c in row)
    assert bool(rep) == vanishes


def test_zero_product_numeric_tolerance():
    a = ((2.0, 1.0), (4.0, 2.0 + 1e-13))
    b = ((1.0, 1.0), (-2.0, -2.0))
    assert matrix2_zero_product(a, b).case == "proportional"
    assert matrix2_zero_product(a, b, tol=0.0).case is None
    with pytest.raises(ValueError):
        matrix2_zero_product(((1, 2, 3), (4, 5, 6)), b)
