import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import _solve, min_cover_brute
from submeasure_lab.errors import EmptyGround, GroundMismatch
from submeasure_lab.lp import UnboundedLP, maximize
from submeasure_lab.rational import INF, format_rational, parse_rational, rdiv
from submeasure_lab.rng import make_rng, random_submeasure
from submeasure_lab.setcover import greedy_cover, min_cover
from submeasure_lab.subsets import GroundSet, masks_in_order, order_key, submasks, to_mask, to_set


# -- rationals ----------------------------------------------------------------

@pytest.mark.parametrize("text,value", [("3/2", Fraction(3, 2)), ("5", Fraction(5)), (" -1/4 ", Fraction(-1, 4)),
                                        ("4/2", Fraction(2)), (7, Fraction(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_parse_rejects_floats_and_garbage():
    for bad in ("1.5", "1/0", "x", 1.5, True, None):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_rational_is_always_p_over_q():
    assert format_rational(Fraction(5)) == "5/1"
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(INF) == "inf"
    assert parse_rational("inf") is INF


@given(st.fractions())
def test_rational_round_trip(v):
    assert parse_rational(format_rational(v)) == v


def test_inf_ordering_and_arithmetic():
    assert Fraction(10 ** 9) < INF and not INF < Fraction(3)
    assert INF + 1 is INF and 2 * INF is INF
    assert rdiv(Fraction(3), INF) == 0


# -- subsets ------------------------------------------------------------------

def test_canonical_order_is_size_then_lex():
    order = [sorted(to_set(m)) for m in masks_in_order(0b111)]
    assert order == [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]
    assert order_key(0b011) < order_key(0b100 | 0b010 | 0b001)


def test_to_mask_validation():
    assert to_mask([0, 3]) == 0b1001
    with pytest.raises(GroundMismatch):
        to_mask([4], size=4)
    with pytest.raises(TypeError):
        to_mask(5)
    with pytest.raises(EmptyGround):
        GroundSet(0)
    with pytest.raises(GroundMismatch):
        GroundSet(2, ("a", "a"))


@given(st.integers(0, 255))
def test_submasks_enumerates_all_subsets(m):
    subs = set(submasks(m))
    assert len(subs) == 2 ** bin(m).count("1")
    assert all(s & ~m == 0 for s in subs)


# -- exact LP -----------------------------------------------------------------

def _lp_oracle(c, rows, rhs):
    """Best objective over all basic feasible points (tiny instances only)."""
    n = len(c)
    cons = [(list(r), b) for r, b in zip(rows, rhs)]
    cons += [([-1 if j == i else 0 for j in range(n)], 0) for i in range(n)]
    best = None
    for combo in itertools.combinations(cons, n):
        sol = _solve([x[0] for x in combo], [x[1] for x in combo])
        if sol is None:
            continue
        if all(sum(a * v for a, v in zip(r, sol)) <= b for r, b in cons):
            val = sum(ci * v for ci, v in zip(c, sol))
            best = val if best is None else max(best, val)
    return best


small = st.fractions(min_value=0, max_value=4, max_denominator=5)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(small, min_size=n, max_size=n),
    st.lists(st.lists(st.fractions(min_value=Fraction(1, 5), max_value=3, max_denominator=5),
                      min_size=n, max_size=n), min_size=1, max_size=4),
    st.lists(small, min_size=4, max_size=4))))
def test_simplex_matches_vertex_enumeration(data):
    c, rows, rhs = data
    rhs = rhs[: len(rows)]
    res = maximize(c, rows, rhs)
    assert res.value == _lp_oracle(c, rows, rhs)
    assert all(sum(a * v for a, v in zip(r, res.x)) <= b for r, b in zip(rows, rhs))
    assert sum(ci * v for ci, v in zip(c, res.x)) == res.value


def test_simplex_fractional_optimum():
    # max x + y + z with pairwise sums <= 1: optimum 3/2 at (1/2, 1/2, 1/2)
    res = maximize([1, 1, 1], [[1, 1, 0], [1, 0, 1], [0, 1, 1]], [1, 1, 1])
    assert res.value == Fraction(3, 2)
    assert res.x == (Fraction(1, 2),) * 3


def test_simplex_errors():
    with pytest.raises(UnboundedLP):
        maximize([1, 1], [[1, -1]], [1])
    with pytest.raises(ValueError):
        maximize([1], [[1]], [-1])
    with pytest.raises(ValueError):
        maximize([1, 1], [[1]], [1])


# -- set cover ----------------------------------------------------------------

@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=8))))
def test_min_cover_exact(data):
    n, fam = data
    k, idx = min_cover((1 << n) - 1, fam)
    sets = [to_set(s) for s in fam]
    oracle = min_cover_brute(range(n), sets)
    if oracle is None:
        assert k is INF and idx is None
    else:
        assert k == oracle == len(idx)
        u = 0
        for j in idx:
            u |= fam[j]
        assert u == (1 << n) - 1


def test_greedy_cover_can_be_suboptimal_but_min_cover_is_not():
    # greedy takes the 4-set first and then needs two more sets
    fam = [0b011110, 0b000111, 0b111000]
    assert len(greedy_cover(0b111111, fam)) == 3
    assert min_cover(0b111111, fam) == (2, (1, 2))


# -- rng ----------------------------------------------------------------------

def test_rng_streams_are_reproducible():
    a = make_rng(7, "x", 3).integers(0, 10 ** 9, size=5).tolist()
    b = make_rng(7, "x", 3).integers(0, 10 ** 9, size=5).tolist()
    c = make_rng(7, "x", 4).integers(0, 10 ** 9, size=5).tolist()
    assert a == b and a != c
    p = random_submeasure(make_rng(1, "s"), 5)
    q = random_submeasure(make_rng(1, "s"), 5)
    assert [p.value(m) for m in range(32)] == [q.value(m) for m in range(32)]
