from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lextypes.errors import LengthMismatch, UnknownStrategy, UnknownType
from lextypes.lex import Order, best_replies, is_cautious, lex_compare, lex_expected_payoffs, optimal_under
from lextypes.model import Game, Lps, Measure, marginal_lps

from conftest import ANN_T, ANN_TCIRC, BOB_BELIEF, SA, SBAR, SHAT, TA, TBAR


@pytest.mark.parametrize("x, y, expected", [
    ((1, 0), (1, 0), Order.EQUAL),
    ((0, 1), (0, 0), Order.GREATER),
    ((1, 0, 0), (1, 1, 0), Order.LESS),
])
def test_lex_compare_examples(x, y, expected):
    assert lex_compare(x, y) is expected


def test_lex_compare_length():
    with pytest.raises(LengthMismatch):
        lex_compare((1,), (1, 2))


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(rationals, min_size=n, max_size=n), st.lists(rationals, min_size=n, max_size=n))))
def test_lex_compare_trichotomy(xy):
    x, y = xy
    c, d = lex_compare(x, y), lex_compare(y, x)
    assert c == -d
    assert (c is Order.EQUAL) == (list(x) == list(y))


def test_strict_dominance_in_fixture(T):
    # oracle for the chosen table: sbar_b beats shat_b against every Ann strategy
    g = T.game
    assert all(g.payoff("b", SBAR, (s,)) > g.payoff("b", SHAT, (s,)) for s in g.strategies["a"])


def test_expected_payoffs(T):
    g = T.game
    bob_first = marginal_lps(BOB_BELIEF)
    assert lex_expected_payoffs(g, "b", SBAR, bob_first) == (1,)
    assert lex_expected_payoffs(g, "b", SHAT, bob_first) == (0,)
    assert lex_expected_payoffs(g, "a", SA, marginal_lps(ANN_T)) == (0, 0, 0)
    with pytest.raises(UnknownStrategy):
        lex_expected_payoffs(g, "b", "nope", bob_first)


def test_linearity_half_half(T):
    g = T.game
    # Ann-side view with Bob's payoffs swapped in: a (1/2, 1/2) belief over Bob's strategies
    g2 = Game(("a", "b"), g.strategies,
              {"a": {(SA, SBAR): F(1), (SA, SHAT): F(0)}, "b": g.payoffs["b"]})
    half = Lps((Measure({(SBAR,): F(1, 2), (SHAT,): F(1, 2)}),))
    assert lex_expected_payoffs(g2, "a", SA, half) == (F(1, 2),)


def test_optimal_under(T):
    assert optimal_under(T.game, "b", SBAR, BOB_BELIEF)
    assert not optimal_under(T.game, "b", SHAT, BOB_BELIEF)
    assert optimal_under(T.game, "a", SA, ANN_T)


def test_best_replies(T):
    assert best_replies(T.game, "b", BOB_BELIEF) == {SBAR}
    assert best_replies(T.game, "a", ANN_T) == {SA}
    g = Game(("a", "b"), {"a": ("x", "y"), "b": ("u", "v")},
             {"a": {("x", "u"): F(2), ("x", "v"): F(-1), ("y", "u"): F(2), ("y", "v"): F(-1)},
              "b": {p: F(0) for p in [("x", "u"), ("x", "v"), ("y", "u"), ("y", "v")]}})
    belief = Lps((Measure({(("u",), ("t",)): 1}), Measure({(("v",), ("t",)): 1})))
    assert best_replies(g, "a", belief) == {"x", "y"}


def test_optimality_depends_only_on_marginals(T, Tc):
    for s in T.game.strategies["a"]:
        assert optimal_under(T.game, "a", s, ANN_T) == optimal_under(T.game, "a", s, ANN_TCIRC)


def test_lexicographic_tiebreak_uses_later_levels():
    g = Game(("a", "b"), {"a": ("x", "y"), "b": ("u", "v")},
             {"a": {("x", "u"): F(1), ("x", "v"): F(0), ("y", "u"): F(1), ("y", "v"): F(1)},
              "b": {p: F(0) for p in [("x", "u"), ("x", "v"), ("y", "u"), ("y", "v")]}})
    belief = Lps((Measure({(("u",), ("t",)): 1}), Measure({(("v",), ("t",)): 1})))
    # tied at level 1, y wins at level 2 (weak dominance)
    assert best_replies(g, "a", belief) == {"y"}


def test_is_cautious(T, T_noncautious):
    assert is_cautious(T, "a", TA)
    assert is_cautious(T, "b", TBAR)
    assert not is_cautious(T_noncautious, "a", TA)
    with pytest.raises(UnknownType):
        is_cautious(T, "a", "nope")
