"""Finite games, lexicographic type structures, measures and events.

All probabilities and payoffs are :class:`fractions.Fraction`, so every
identity below is checked exactly.  A belief of player ``i`` lives on
``S_{-i} x T_{-i}``; a ground element is the pair ``(s_opp, t_opp)`` of
opponent strategy and type profiles, both tuples in player order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping

from .errors import (
    DanglingReference,
    EmptyLps,
    IncompletePayoffs,
    MalformedInput,
    NonProbability,
    TooFewPlayers,
)

_RATIONAL = re.compile(r"-?\d+(/\d+)?")
PROFILE_SEP = "|"


def parse_rational(value, path=()) -> Fraction:
    """Accept ``int``, ``Fraction`` or a ``"p/q"`` / ``"p"`` string. Floats are refused."""
    if isinstance(value, bool):
        raise MalformedInput(f"expected a rational, got {value!r}", path)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.fullmatch(value):
        num, _, den = value.partition("/")
        if den and int(den) == 0:
            raise MalformedInput(f"zero denominator in {value!r}", path)
        return Fraction(int(num), int(den) if den else 1)
    raise MalformedInput(f"expected a rational string 'p/q', got {value!r}", path)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class Measure:
    """A finitely supported probability measure, stored sparsely.

    Zero-mass entries are dropped; equality and hashing ignore insertion order.
    """

    __slots__ = ("_mass", "_hash")

    def __init__(self, mass: Mapping[Hashable, Any], path=()):
        clean: dict = {}
        for x, p in mass.items():
            p = parse_rational(p, path)
            if p < 0:
                raise NonProbability(f"negative mass {p} on {x!r}", path)
            if p:
                clean[x] = clean.get(x, 0) + p
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise NonProbability(f"masses sum to {total}, not 1", path)
        self._mass = clean
        self._hash = None

    @classmethod
    def point(cls, x) -> "Measure":
        return cls({x: 1})

    def __getitem__(self, x) -> Fraction:
        return self._mass.get(x, Fraction(0))

    def items(self):
        return self._mass.items()

    def support(self) -> frozenset:
        return frozenset(self._mass)

    def prob(self, event) -> Fraction:
        return sum((p for x, p in self._mass.items() if x in event), Fraction(0))

    def pushforward(self, f: Callable) -> "Measure":
        out: dict = {}
        for x, p in self._mass.items():
            y = f(x)
            out[y] = out.get(y, 0) + p
        return Measure(out)

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return self._mass == other._mass

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._mass.items()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{x!r}: {p}" for x, p in self._mass.items())
        return f"Measure({{{body}}})"


@dataclass(frozen=True)
class Lps:
    """Lexicographic probability system: a nonempty tuple of measures."""

    levels: tuple

    def __post_init__(self):
        if not self.levels:
            raise EmptyLps("an LPS needs at least one level")
        object.__setattr__(self, "levels", tuple(self.levels))

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __getitem__(self, k):
        return self.levels[k]

    def support(self) -> frozenset:
        return frozenset().union(*(mu.support() for mu in self.levels))

    def pushforward(self, f: Callable) -> "Lps":
        """Image LPS: push every level through ``f``; length is preserved."""
        return Lps(tuple(mu.pushforward(f) for mu in self.levels))


def marginal_lps(belief: Lps) -> Lps:
    """Strategy marginal of a belief over ``S_{-i} x T_{-i}``."""
    return belief.pushforward(_strategy_part)


def _strategy_part(x):
    return x[0]


@dataclass(frozen=True)
class Game:
    players: tuple
    strategies: Mapping[str, tuple]
    payoffs: Mapping[str, Mapping[tuple, Fraction]]

    def __post_init__(self):
        if len(self.players) < 2:
            raise TooFewPlayers(f"a game needs at least 2 players, got {len(self.players)}")
        if len(set(self.players)) != len(self.players):
            raise MalformedInput("duplicate player ids")
        for i in self.players:
            if not self.strategies.get(i):
                raise MalformedInput(f"player {i!r} has no strategies", ("strategies", i))
            if len(set(self.strategies[i])) != len(self.strategies[i]):
                raise MalformedInput(f"duplicate strategy ids for {i!r}", ("strategies", i))
        full = set(self.profiles())
        for i in self.players:
            table = self.payoffs.get(i, {})
            if set(table) != full:
                missing = sorted(full - set(table))
                extra = sorted(set(table) - full)
                raise IncompletePayoffs(
                    f"payoff table of {i!r} does not match the profile space "
                    f"(missing {missing[:3]}, unknown {extra[:3]})",
                    ("payoffs", i),
                )

    def index(self, i) -> int:
        return self.players.index(i)

    def opponents(self, i) -> tuple:
        return tuple(j for j in self.players if j != i)

    def profiles(self):
        return itertools.product(*(self.strategies[i] for i in self.players))

    def opponent_profiles(self, i) -> list:
        return list(itertools.product(*(self.strategies[j] for j in self.opponents(i))))

    def join(self, i, s_i, s_opp) -> tuple:
        """Insert ``s_i`` into an opponents' profile to get a full profile."""
        k = self.index(i)
        return tuple(s_opp[:k]) + (s_i,) + tuple(s_opp[k:])

    def payoff(self, i, s_i, s_opp) -> Fraction:
        return self.payoffs[i][self.join(i, s_i, s_opp)]

    def same_strategies(self, other: "Game") -> bool:
        return self.players == other.players and all(
            tuple(self.strategies[i]) == tuple(other.strategies[i]) for i in self.players
        )


@dataclass(frozen=True)
class Event:
    """A subset of ``S_i x T_i`` for one player."""

    player: str
    pairs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair):
        return pair in self.pairs

    def __and__(self, other: "Event") -> "Event":
        return Event(self.player, self.pairs & other.pairs)

    def __le__(self, other: "Event") -> bool:
        return self.pairs <= other.pairs

    def strategies(self) -> frozenset:
        return frozenset(s for s, _ in self.pairs)


@dataclass(frozen=True, eq=False)
class TypeStructure:
    game: Game
    types: Mapping[str, tuple]
    beliefs: Mapping[str, Mapping[str, Lps]]
    name: str = field(default="T")

    def __post_init__(self):
        g = self.game
        for i in g.players:
            ts = self.types.get(i)
            if not ts:
                raise MalformedInput(f"player {i!r} has no types", ("players", g.index(i), "types"))
            if len(set(ts)) != len(ts):
                raise MalformedInput(f"duplicate type ids for {i!r}", ("players", g.index(i), "types"))
        for i in g.players:
            opp = g.opponents(i)
            strat = [set(g.strategies[j]) for j in opp]
            typ = [set(self.types[j]) for j in opp]
            table = self.beliefs.get(i, {})
            for t in self.types[i]:
                if t not in table:
                    raise DanglingReference(f"type {t!r} of {i!r} has no belief",
                                            ("players", g.index(i), "beliefs", t))
            for t, lps in table.items():
                path = ("players", g.index(i), "beliefs", t)
                if t not in self.types[i]:
                    raise DanglingReference(f"belief given for unknown type {t!r}", path)
                for x in lps.support():
                    s_opp, t_opp = x
                    if len(s_opp) != len(opp) or len(t_opp) != len(opp) or not all(
                        a in A for a, A in zip(s_opp, strat)
                    ) or not all(b in B for b, B in zip(t_opp, typ)):
                        raise DanglingReference(f"belief of {t!r} mentions unknown profile {x!r}", path)

    def __eq__(self, other):
        if not isinstance(other, TypeStructure):
            return NotImplemented
        return (self.game == other.game
                and all(tuple(self.types[i]) == tuple(other.types[i]) for i in self.game.players)
                and all(dict(self.beliefs[i]) == dict(other.beliefs[i]) for i in self.game.players))

    __hash__ = None

    @property
    def players(self):
        return self.game.players

    def belief(self, i, t) -> Lps:
        return self.beliefs[i][t]

    def states(self, i) -> list:
        return [(s, t) for s in self.game.strategies[i] for t in self.types[i]]

    def full_event(self, i) -> Event:
        return Event(i, self.states(i))

    def ground(self, i) -> list:
        """All of ``S_{-i} x T_{-i}`` as ``(s_opp, t_opp)`` pairs."""
        opp = self.game.opponents(i)
        t_profiles = itertools.product(*(self.types[j] for j in opp))
        return [(s, t) for s, t in itertools.product(self.game.opponent_profiles(i), list(t_profiles))]

    def event(self, i, pairs: Iterable) -> Event:
        pairs = frozenset(pairs)
        for s, t in pairs:
            if s not in self.game.strategies[i] or t not in self.types[i]:
                raise DanglingReference(f"({s!r}, {t!r}) is not a state of player {i!r}")
        return Event(i, pairs)

    def size(self) -> int:
        """Total number of strategy-type pairs across players."""
        return sum(len(self.game.strategies[i]) * len(self.types[i]) for i in self.game.players)

    def sort_pairs(self, i, pairs) -> list:
        s_ord = {s: k for k, s in enumerate(self.game.strategies[i])}
        t_ord = {t: k for k, t in enumerate(self.types[i])}
        return sorted(pairs, key=lambda p: (s_ord[p[0]], t_ord[p[1]]))

    def sort_strategies(self, i, strategies) -> list:
        order = {s: k for k, s in enumerate(self.game.strategies[i])}
        return sorted(strategies, key=order.__getitem__)

    def replace(self, **changes) -> "TypeStructure":
        kw = dict(game=self.game, types=self.types, beliefs=self.beliefs, name=self.name)
        kw.update(changes)
        return TypeStructure(**kw)


def product_event(game: Game, parts: Mapping[str, Event]) -> frozenset:
    """Joint opponents' event ``prod_j E_j`` as a set of ``(s_opp, t_opp)`` pairs.

    ``parts`` must hold one event for every player but one.
    """
    missing = [i for i in game.players if i not in parts]
    if len(missing) != 1 or len(parts) != len(game.players) - 1:
        raise MalformedInput("parts must cover exactly the opponents of one player")
    opp = game.opponents(missing[0])
    joint = set()
    for combo in itertools.product(*(parts[j].pairs for j in opp)):
        joint.add((tuple(s for s, _ in combo), tuple(t for _, t in combo)))
    return frozenset(joint)


# -- construction from plain (JSON-shaped) data --------------------------------


def _expect(cond, message, path):
    if not cond:
        raise MalformedInput(message, path)


def build_game(raw: Mapping, path=("game",)) -> Game:
    _expect(isinstance(raw, Mapping), "game must be an object", path)
    players_raw = raw.get("players")
    _expect(isinstance(players_raw, list), "game.players must be an array", path + ("players",))
    if len(players_raw) < 2:
        raise TooFewPlayers(f"a game needs at least 2 players, got {len(players_raw)}", path + ("players",))
    players, strategies = [], {}
    for k, p in enumerate(players_raw):
        pp = path + ("players", k)
        _expect(isinstance(p, Mapping) and isinstance(p.get("id"), str), "player needs a string id", pp)
        strats = p.get("strategies")
        _expect(isinstance(strats, list) and strats and all(isinstance(s, str) for s in strats),
                "strategies must be a nonempty array of strings", pp + ("strategies",))
        _expect(not any(PROFILE_SEP in s for s in strats),
                f"strategy ids may not contain {PROFILE_SEP!r}", pp + ("strategies",))
        players.append(p["id"])
        strategies[p["id"]] = tuple(strats)
    payoffs = {}
    for k, p in enumerate(players_raw):
        pp = path + ("players", k, "payoffs")
        table = p.get("payoffs")
        _expect(isinstance(table, Mapping), "payoffs must be an object", pp)
        parsed = {}
        for key, v in table.items():
            parsed[tuple(key.split(PROFILE_SEP))] = parse_rational(v, pp + (key,))
        payoffs[p["id"]] = parsed
    try:
        return Game(tuple(players), strategies, payoffs)
    except IncompletePayoffs as e:
        i = e.path[1] if len(e.path) > 1 else None
        k = players.index(i) if i in players else 0
        raise IncompletePayoffs(str(e), path + ("players", k, "payoffs")) from None
    except MalformedInput as e:
        raise MalformedInput(str(e), path) from None


def build_structure(game: Game, raw: Mapping, path=("structure",)) -> TypeStructure:
    _expect(isinstance(raw, Mapping), "structure must be an object", path)
    players_raw = raw.get("players")
    _expect(isinstance(players_raw, list), "structure.players must be an array", path + ("players",))
    ids = [p.get("id") if isinstance(p, Mapping) else None for p in players_raw]
    _expect(ids == list(game.players),
            f"structure players {ids} must match game players {list(game.players)}", path + ("players",))
    types = {}
    for k, p in enumerate(players_raw):
        ts = p.get("types")
        _expect(isinstance(ts, list) and ts and all(isinstance(t, str) for t in ts),
                "types must be a nonempty array of strings", path + ("players", k, "types"))
        types[p["id"]] = tuple(ts)
    beliefs = {}
    for k, p in enumerate(players_raw):
        i = p["id"]
        opp = game.opponents(i)
        bp = path + ("players", k, "beliefs")
        table = p.get("beliefs")
        _expect(isinstance(table, Mapping), "beliefs must be an object", bp)
        beliefs[i] = {}
        for t, levels in table.items():
            tp = bp + (t,)
            if t not in types[i]:
                raise DanglingReference(f"belief given for unknown type {t!r}", tp)
            _expect(isinstance(levels, list), "a belief must be an array of levels", tp)
            if not levels:
                raise EmptyLps(f"belief of {t!r} has no levels", tp)
            measures = []
            for l, level in enumerate(levels):
                lp = tp + (l,)
                _expect(isinstance(level, list), "a level must be an array of entries", lp)
                mass = {}
                for e, entry in enumerate(level):
                    ep = lp + (e,)
                    _expect(isinstance(entry, Mapping) and isinstance(entry.get("profile"), list),
                            "entry needs a 'profile' array", ep)
                    prof = entry["profile"]
                    _expect(len(prof) == 2 * len(opp) and all(isinstance(v, str) for v in prof),
                            f"profile must list strategy and type for each of {list(opp)}", ep + ("profile",))
                    s_opp, t_opp = tuple(prof[0::2]), tuple(prof[1::2])
                    for j, s, ty in zip(opp, s_opp, t_opp):
                        if s not in game.strategies[j]:
                            raise DanglingReference(f"unknown strategy {s!r} of {j!r}", ep + ("profile",))
                        if ty not in types[j]:
                            raise DanglingReference(f"unknown type {ty!r} of {j!r}", ep + ("profile",))
                    x = (s_opp, t_opp)
                    _expect(x not in mass, f"duplicate profile {prof}", ep)
                    mass[x] = parse_rational(entry.get("p"), ep + ("p",))
                measures.append(Measure(mass, lp))
            beliefs[i][t] = Lps(tuple(measures))
        for t in types[i]:
            if t not in beliefs[i]:
                raise DanglingReference(f"type {t!r} of {i!r} has no belief", bp)
    name = raw.get("name", "T")
    _expect(isinstance(name, str), "name must be a string", path + ("name",))
    return TypeStructure(game, types, beliefs, name)


def validate_structure(raw: Mapping) -> TypeStructure:
    """Build a structure from ``{"game": ..., "players": [...], "name": ...}``.

    Raises NonProbability, DanglingReference, EmptyLps, TooFewPlayers or
    MalformedInput; each carries the document path of the fault.
    """
    _expect(isinstance(raw, Mapping), "structure description must be an object", ())
    game = build_game(raw.get("game"), ("game",))
    return build_structure(game, raw, ())
