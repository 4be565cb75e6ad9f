"""Lexicographic expected payoffs, best replies and cautiousness."""

from __future__ import annotations

import enum
from fractions import Fraction

from .errors import LengthMismatch, UnknownStrategy, UnknownType
from .model import Game, Lps, TypeStructure, marginal_lps


class Order(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def lex_compare(x, y) -> Order:
    """Compare equal-length payoff vectors under the lexicographic order."""
    if len(x) != len(y):
        raise LengthMismatch(f"cannot compare vectors of length {len(x)} and {len(y)}")
    for a, b in zip(x, y):
        if a != b:
            return Order.GREATER if a > b else Order.LESS
    return Order.EQUAL


def lex_expected_payoffs(game: Game, player, s_i, firstorder: Lps) -> tuple:
    """Expected payoff of ``s_i`` at each level of a first-order LPS over ``S_{-i}``."""
    if s_i not in game.strategies[player]:
        raise UnknownStrategy(f"{s_i!r} is not a strategy of {player!r}")
    return tuple(
        sum((p * game.payoff(player, s_i, s_opp) for s_opp, p in mu.items()), Fraction(0))
        for mu in firstorder
    )


def optimal_under(game: Game, player, s_i, belief: Lps) -> bool:
    first = marginal_lps(belief)
    mine = lex_expected_payoffs(game, player, s_i, first)
    return all(
        lex_compare(mine, lex_expected_payoffs(game, player, r, first)) >= Order.EQUAL
        for r in game.strategies[player]
    )


def best_replies(game: Game, player, belief: Lps) -> frozenset:
    first = marginal_lps(belief)
    vectors = {s: lex_expected_payoffs(game, player, s, first) for s in game.strategies[player]}
    # tuples of equal length compare lexicographically
    top = max(vectors.values())
    return frozenset(s for s, v in vectors.items() if v == top)


def is_cautious(structure: TypeStructure, player, t_i) -> bool:
    if t_i not in structure.types[player]:
        raise UnknownType(f"{t_i!r} is not a type of {player!r}")
    covered = marginal_lps(structure.belief(player, t_i)).support()
    return covered == frozenset(structure.game.opponent_profiles(player))
