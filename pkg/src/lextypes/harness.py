"""Invariance checks, random structures and hierarchy-preserving rewrites."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .epistemic import rcbr_iterate
from .errors import InfeasibleBounds, MismatchedGames
from .hierarchy import (
    Morphism,
    hierarchy_equivalent,
    require_morphism,
    stable_partition,
)
from .model import Game, Lps, Measure, TypeStructure


def _check_same_game(first: TypeStructure, second: TypeStructure):
    if first.game != second.game:
        raise MismatchedGames("structures are attached to different games")


@dataclass(frozen=True)
class ProjectionRow:
    m: int
    player: str
    first: frozenset
    second: frozenset

    @property
    def equal(self) -> bool:
        return self.first == self.second


@dataclass(frozen=True)
class InvarianceReport:
    rows: tuple
    depth: int

    @property
    def verdict(self) -> bool:
        return all(r.equal for r in self.rows)


def verify_invariance(first: TypeStructure, second: TypeStructure) -> InvarianceReport:
    """Compare strategy projections of the R^m events of both structures, level by level."""
    _check_same_game(first, second)
    a, b = rcbr_iterate(first), rcbr_iterate(second)
    _, m_star = stable_partition([first, second])
    depth = max(m_star, a.stabilized_at, b.stabilized_at)
    rows = []
    for m in range(depth + 1):
        for i in first.players:
            rows.append(ProjectionRow(m, i, a.at(m)[i].strategies(), b.at(m)[i].strategies()))
    return InvarianceReport(tuple(rows), depth)


@dataclass(frozen=True)
class TransportRow:
    m: int
    player: str
    inclusion: bool
    projection_identity: bool


@dataclass(frozen=True)
class TransportReport:
    rows: tuple

    @property
    def verdict(self) -> bool:
        return all(r.inclusion and r.projection_identity for r in self.rows)


def transport_check(first: TypeStructure, second: TypeStructure, phi: Morphism) -> TransportReport:
    """Check ``(Id, phi)(R^m) <= R'^m`` and that the image keeps the strategy projection."""
    _check_same_game(first, second)
    require_morphism(first, second, phi)
    a, b = rcbr_iterate(first), rcbr_iterate(second)
    depth = max(a.stabilized_at, b.stabilized_at)
    rows = []
    for m in range(depth + 1):
        for i in first.players:
            ev = a.at(m)[i]
            img = phi.image(ev)
            rows.append(TransportRow(m, i, img <= b.at(m)[i], img.strategies() == ev.strategies()))
    return TransportReport(tuple(rows))


# -- random generation -------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    seed: int
    players: int = 2
    strategies: tuple = (1, 3)
    types: tuple = (1, 3)
    lps_length: tuple = (1, 3)
    denominator: int = 4
    payoff_range: tuple = (-2, 2)
    # >0: draw strategy marginals from a small per-player pool, so that
    # distinct types often agree at low orders and only separate later
    marginal_pool: int = 0

    def check(self):
        for name in ("strategies", "types", "lps_length", "payoff_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InfeasibleBounds(f"{name}: lower bound {lo} exceeds upper bound {hi}")
        for name in ("strategies", "types", "lps_length"):
            if getattr(self, name)[0] < 1:
                raise InfeasibleBounds(f"{name}: lower bound must be at least 1")
        if self.players < 2:
            raise InfeasibleBounds("need at least 2 players")
        if self.denominator < 1:
            raise InfeasibleBounds("denominator bound must be at least 1")
        if self.marginal_pool < 0:
            raise InfeasibleBounds("marginal_pool must be nonnegative")


def random_measure(rng: random.Random, ground: list, denominator: int) -> Measure:
    q = rng.randint(1, denominator)
    k = rng.randint(1, min(len(ground), q))
    support = rng.sample(ground, k)
    units = {x: 1 for x in support}
    for _ in range(q - k):
        units[rng.choice(support)] += 1
    return Measure({x: Fraction(n, q) for x, n in units.items()})


def _split(rng: random.Random, mass: Fraction, cells: list, denominator: int) -> dict:
    r = rng.randint(1, denominator)
    k = rng.randint(1, min(len(cells), r))
    chosen = rng.sample(cells, k)
    units = {x: 1 for x in chosen}
    for _ in range(r - k):
        units[rng.choice(chosen)] += 1
    return {x: mass * Fraction(n, r) for x, n in units.items()}


def gen_structure(params: GenParams) -> TypeStructure:
    params.check()
    rng = random.Random(params.seed)
    players = tuple(f"p{k + 1}" for k in range(params.players))
    strategies = {i: tuple(f"s{n + 1}_{i}" for n in range(rng.randint(*params.strategies)))
                  for i in players}
    lo, hi = params.payoff_range
    payoffs = {i: {} for i in players}
    for prof in itertools.product(*(strategies[i] for i in players)):
        for i in players:
            payoffs[i][prof] = Fraction(rng.randint(lo, hi))
    game = Game(players, strategies, payoffs)
    types = {i: tuple(f"t{n + 1}_{i}" for n in range(rng.randint(*params.types))) for i in players}
    beliefs = {}
    for i in players:
        opp = game.opponents(i)
        s_ground = game.opponent_profiles(i)
        t_ground = list(itertools.product(*(types[j] for j in opp)))
        ground = [(s, t) for s in s_ground for t in t_ground]
        pool = [
            Lps(tuple(random_measure(rng, s_ground, params.denominator)
                      for _ in range(rng.randint(*params.lps_length))))
            for _ in range(params.marginal_pool)
        ]
        beliefs[i] = {}
        for t in types[i]:
            if pool:
                first = rng.choice(pool)
                levels = []
                for mu in first:
                    mass = {}
                    for s, p in mu.items():
                        for (s2, tt), v in _split(rng, p, [(s, tt) for tt in t_ground],
                                                  params.denominator).items():
                            mass[(s2, tt)] = v
                    levels.append(Measure(mass))
                beliefs[i][t] = Lps(tuple(levels))
            else:
                beliefs[i][t] = Lps(tuple(random_measure(rng, ground, params.denominator)
                                          for _ in range(rng.randint(*params.lps_length))))
    return TypeStructure(game, types, beliefs, name=f"gen{params.seed}")


def fuzz_params(seed: int, **overrides) -> GenParams:
    """Default fuzz-corpus bounds: 2-3 players, <=3 strategies, <=3 types, LPS length <=3."""
    rng = random.Random(f"fuzz-params-{seed}")
    kw = dict(seed=seed, players=rng.choice((2, 2, 3)), strategies=(1, 3), types=(1, 3),
              lps_length=(1, 3), denominator=4, marginal_pool=rng.choice((0, 2)))
    kw.update(overrides)
    return GenParams(**kw)


# -- hierarchy-preserving rewrites ---------------------------------------------


def duplicate_type(structure: TypeStructure, player, type_id, new_id,
                   keep_share: Callable[..., Fraction]) -> TypeStructure:
    """Add ``new_id`` as a copy of ``type_id``.

    The copy gets the same belief.  Every other player's mass on a profile
    naming ``type_id`` is split: ``keep_share(observer, observer_type, level,
    element)`` stays, the rest moves to the same profile with ``new_id``.
    Cell totals per level are unchanged, so every hierarchy is preserved.
    """
    if new_id in structure.types[player]:
        raise ValueError(f"type id {new_id!r} already used")
    game = structure.game
    types = dict(structure.types)
    types[player] = tuple(types[player]) + (new_id,)
    beliefs = {i: dict(b) for i, b in structure.beliefs.items()}
    beliefs[player][new_id] = structure.belief(player, type_id)
    for i in game.players:
        if i == player:
            continue
        k = game.opponents(i).index(player)
        for t in structure.types[i]:
            levels = []
            for l, mu in enumerate(structure.belief(i, t)):
                mass = {}
                for x, p in mu.items():
                    s_opp, t_opp = x
                    if t_opp[k] != type_id:
                        mass[x] = mass.get(x, 0) + p
                        continue
                    w = Fraction(keep_share(i, t, l, x))
                    if not 0 <= w <= 1:
                        raise ValueError(f"share {w} outside [0, 1]")
                    twin = (s_opp, t_opp[:k] + (new_id,) + t_opp[k + 1:])
                    mass[x] = mass.get(x, 0) + p * w
                    mass[twin] = mass.get(twin, 0) + p * (1 - w)
                levels.append(Measure(mass))
            beliefs[i][t] = Lps(tuple(levels))
    return structure.replace(types=types, beliefs=beliefs)


def merge_types(structure: TypeStructure, player, keep, drop) -> TypeStructure:
    """Remove ``drop`` and move all mass on it to ``keep``.

    Preserves hierarchies only when ``keep`` and ``drop`` already share one.
    """
    game = structure.game
    types = dict(structure.types)
    types[player] = tuple(t for t in types[player] if t != drop)
    beliefs = {i: dict(b) for i, b in structure.beliefs.items()}
    del beliefs[player][drop]
    for i in game.players:
        if i == player:
            continue
        k = game.opponents(i).index(player)

        def sub(x, k=k):
            s_opp, t_opp = x
            return (s_opp, t_opp[:k] + (keep,) + t_opp[k + 1:]) if t_opp[k] == drop else x

        for t in structure.types[i]:
            beliefs[i][t] = structure.belief(i, t).pushforward(sub)
    return structure.replace(types=types, beliefs=beliefs)


def _collapse(structure: TypeStructure, i, t, origin) -> Lps:
    opp = structure.game.opponents(i)
    return structure.belief(i, t).pushforward(
        lambda x: (x[0], tuple(origin[j][u] for j, u in zip(opp, x[1]))))


@dataclass
class Variant:
    structure: TypeStructure
    forward: Morphism
    backward: Morphism
    steps: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.structure, self.forward, self.backward))


def equivalent_variant(structure: TypeStructure, seed: int, steps: Optional[int] = None,
                       max_steps: int = 3, denominator: int = 4) -> Variant:
    """Randomly duplicate and merge types; returns the new structure and both morphisms."""
    rng = random.Random(seed)
    n = rng.randint(0, max_steps) if steps is None else steps
    origin = {i: {t: t for t in structure.types[i]} for i in structure.players}
    cur = structure
    log = []
    counter = 0
    for _ in range(n):
        merges = []
        for i in cur.players:
            ts = cur.types[i]
            for a in range(len(ts)):
                for b in range(a + 1, len(ts)):
                    u, v = ts[a], ts[b]
                    if origin[i][u] == origin[i][v] and \
                            _collapse(cur, i, u, origin) == _collapse(cur, i, v, origin):
                        merges.append((i, u, v))
        if merges and rng.random() < 0.4:
            i, keep, drop = rng.choice(merges)
            if rng.random() < 0.5:
                keep, drop = drop, keep
            cur = merge_types(cur, i, keep, drop)
            del origin[i][drop]
            log.append(("merge", i, keep, drop))
        else:
            i = rng.choice(cur.players)
            t = rng.choice(cur.types[i])
            counter += 1
            new_id = f"{t}.{counter}"
            while new_id in cur.types[i]:
                counter += 1
                new_id = f"{t}.{counter}"
            shares = {}

            def keep_share(*key):
                if key not in shares:
                    shares[key] = Fraction(rng.randint(0, denominator), denominator)
                return shares[key]

            cur = duplicate_type(cur, i, t, new_id, keep_share)
            origin[i][new_id] = origin[i][t]
            log.append(("duplicate", i, t, new_id))
    cur = cur.replace(name=f"{structure.name}~{seed}")
    backward = Morphism({i: dict(origin[i]) for i in cur.players})
    forward = Morphism({
        i: {t: next(u for u in cur.types[i] if origin[i][u] == t) for t in structure.types[i]}
        for i in structure.players
    })
    return Variant(cur, forward, backward, log)


@dataclass(frozen=True)
class FuzzResult:
    seed: int
    equivalent: bool
    invariance: bool
    transport: bool
    size: int

    @property
    def ok(self) -> bool:
        return self.equivalent and self.invariance and self.transport


def fuzz_one(seed: int) -> FuzzResult:
    base = gen_structure(fuzz_params(seed))
    variant = equivalent_variant(base, seed, steps=1 + seed % 3)
    eq = bool(hierarchy_equivalent(base, variant.structure))
    inv = verify_invariance(base, variant.structure).verdict
    tr = (transport_check(base, variant.structure, variant.forward).verdict
          and transport_check(variant.structure, base, variant.backward).verdict)
    return FuzzResult(seed, eq, inv, tr, base.size())
