"""Cautious belief and the iterated cautious-rationality events.

``R[1]`` is the set of cautiously rational pairs and
``R[m+1] = R[m] & B(prod_{j != i} R_j[m])``, where ``B`` is the cautious
belief operator.  On a finite structure the sequence reaches a fixpoint,
which is the common-cautious-belief event.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import EmptyEvent, LevelOutOfRange
from .lex import best_replies, is_cautious
from .model import Event, Lps, TypeStructure, product_event


def _cylinders(event) -> list:
    by_strategy = defaultdict(set)
    for x in event:
        by_strategy[x[0]].add(x)
    return list(by_strategy.values())


def cautiously_believed_at_level(belief: Lps, event, m: int) -> bool:
    if not event:
        raise EmptyEvent("cautious belief is defined for nonempty events only")
    if not 1 <= m <= len(belief):
        raise LevelOutOfRange(f"level {m} outside 1..{len(belief)}")
    prefix = belief.levels[:m]
    if any(mu.prob(event) != 1 for mu in prefix):
        return False
    return all(any(mu.prob(c) > 0 for mu in prefix) for c in _cylinders(event))


def cautiously_believes(belief: Lps, event) -> Optional[int]:
    """Least level at which ``event`` is cautiously believed, or ``None``."""
    if not event:
        raise EmptyEvent("cautious belief is defined for nonempty events only")
    for m in range(1, len(belief) + 1):
        if belief[m - 1].prob(event) != 1:
            # condition (i) fails at m, hence at every later level
            return None
        if cautiously_believed_at_level(belief, event, m):
            return m
    return None


def cautious_belief_operator(structure: TypeStructure, player, event) -> Event:
    """Pairs ``(s_i, t_i)`` whose type cautiously believes ``event``; empty event -> empty."""
    event = frozenset(event)
    if not event:
        return Event(player)
    believers = [t for t in structure.types[player]
                 if cautiously_believes(structure.belief(player, t), event) is not None]
    return Event(player, ((s, t) for s in structure.game.strategies[player] for t in believers))


def cautiously_rational(structure: TypeStructure, player) -> Event:
    pairs = []
    for t in structure.types[player]:
        if is_cautious(structure, player, t):
            pairs.extend((s, t) for s in best_replies(structure.game, player, structure.belief(player, t)))
    return Event(player, pairs)


@dataclass(frozen=True)
class RcbrTrace:
    """``levels[m]`` maps each player to its event at level ``m``.

    ``levels[0]`` is the full state space.  ``stabilized_at`` is the least
    ``m >= 1`` with ``levels[m] == levels[m+1]``; ``at(m)`` answers for any m.
    """

    levels: tuple
    stabilized_at: int

    def at(self, m: int) -> Mapping[str, Event]:
        return self.levels[min(m, self.stabilized_at)]

    def limit(self) -> Mapping[str, Event]:
        return self.levels[self.stabilized_at]


def iterate_assumption(structure: TypeStructure, base: Mapping[str, Event]) -> RcbrTrace:
    players = structure.players
    levels = [{i: structure.full_event(i) for i in players}, dict(base)]
    while True:
        cur = levels[-1]
        nxt = {}
        for i in players:
            joint = product_event(structure.game, {j: cur[j] for j in players if j != i})
            nxt[i] = cur[i] & cautious_belief_operator(structure, i, joint)
        if nxt == cur:
            return RcbrTrace(tuple(levels), len(levels) - 1)
        levels.append(nxt)


def rcbr_iterate(structure: TypeStructure) -> RcbrTrace:
    base = {i: cautiously_rational(structure, i) for i in structure.players}
    return iterate_assumption(structure, base)


def strategy_projection(event: Event) -> frozenset:
    return event.strategies()
