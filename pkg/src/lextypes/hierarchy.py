"""Belief hierarchies, hierarchy morphisms and hierarchy-equivalence.

Types are compared through partition refinement on the disjoint union of
one or two structures.  Depth-1 classes group types with equal strategy
marginals; depth-(m+1) classes group types whose beliefs push forward to
equal LPSs over ``(s_opp, opponents' depth-m class labels)``.  Two types
share a depth-m class exactly when their m-th order beliefs coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Optional, Sequence

from .errors import DepthTooLarge, InvalidMorphism, MismatchedGames
from .model import Event, Lps, TypeStructure, marginal_lps

MAX_EXPLICIT_DEPTH = 3


class TaggedType(NamedTuple):
    origin: int
    player: str
    type_id: str


@dataclass(frozen=True)
class HierarchyPartition:
    depth: int
    classes: Mapping[str, tuple]

    def class_of(self, tagged: TaggedType) -> frozenset:
        for c in self.classes[tagged.player]:
            if tagged in c:
                return c
        raise KeyError(tagged)

    def same(self, a: TaggedType, b: TaggedType) -> bool:
        return b in self.class_of(a)

    def refines(self, coarser: "HierarchyPartition") -> bool:
        return all(
            any(c <= d for d in coarser.classes[i])
            for i, cs in self.classes.items() for c in cs
        )


@dataclass(frozen=True)
class Morphism:
    """Per player, a total map from the source structure's types to the target's."""

    maps: Mapping[str, Mapping[str, str]]

    def __call__(self, player, t):
        return self.maps[player][t]

    def image(self, event):
        """``(Id, phi_i)`` applied to an event of player ``i``."""
        m = self.maps[event.player]
        return Event(event.player, ((s, m[t]) for s, t in event.pairs))

    @classmethod
    def identity(cls, structure: TypeStructure) -> "Morphism":
        return cls({i: {t: t for t in structure.types[i]} for i in structure.players})


def _check_games(structures: Sequence[TypeStructure]):
    if not 1 <= len(structures) <= 2:
        raise ValueError("expected one or two structures")
    g = structures[0].game
    for other in structures[1:]:
        if not g.same_strategies(other.game):
            raise MismatchedGames("structures are built on different strategy sets")


def _tagged(structures) -> list:
    return [TaggedType(o, i, t) for o, st in enumerate(structures)
            for i in st.players for t in st.types[i]]


def _relabel(keys: dict) -> dict:
    """Map each tagged type to a small int; equal keys share a label (per player)."""
    seen: dict = {}
    out = {}
    for tt, key in keys.items():
        out[tt] = seen.setdefault((tt.player, key), len(seen))
    return out


def _label_rounds(structures):
    """Yield class labels for depth 1, 2, ... forever."""
    tagged = _tagged(structures)
    game = structures[0].game
    labels = _relabel({tt: marginal_lps(structures[tt.origin].belief(tt.player, tt.type_id))
                       for tt in tagged})
    yield labels
    while True:
        keys = {}
        for tt in tagged:
            o, i = tt.origin, tt.player
            opp = game.opponents(i)
            prev = labels

            def rho(x, o=o, opp=opp, prev=prev):
                s_opp, t_opp = x
                return s_opp, tuple(prev[TaggedType(o, j, t)] for j, t in zip(opp, t_opp))

            keys[tt] = structures[o].belief(i, tt.type_id).pushforward(rho)
        labels = _relabel(keys)
        yield labels


def _partition(structures, labels, depth) -> HierarchyPartition:
    classes: dict = {i: {} for i in structures[0].players}
    for tt in _tagged(structures):
        classes[tt.player].setdefault(labels[tt], []).append(tt)
    return HierarchyPartition(depth, {i: tuple(frozenset(c) for c in cs.values())
                                      for i, cs in classes.items()})


def refine(structures: Sequence[TypeStructure], depth: int) -> HierarchyPartition:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    _check_games(structures)
    for m, labels in enumerate(_label_rounds(structures), start=1):
        if m == depth:
            return _partition(structures, labels, depth)


def refine_all(structures: Sequence[TypeStructure], depth: int) -> list:
    """Partitions for depths ``1..depth``."""
    _check_games(structures)
    out = []
    for m, labels in enumerate(_label_rounds(structures), start=1):
        out.append(_partition(structures, labels, m))
        if m == depth:
            return out


def stable_partition(structures: Sequence[TypeStructure]):
    """Return ``(partition, m_star)`` with ``m_star`` the first depth whose successor is equal."""
    _check_games(structures)
    rounds = _label_rounds(structures)
    prev = _partition(structures, next(rounds), 1)
    m = 1
    while True:
        cur = _partition(structures, next(rounds), m + 1)
        if cur.classes == prev.classes:
            return prev, m
        prev, m = cur, m + 1


@dataclass(frozen=True)
class HierarchyTerm:
    """Literal ``(d^1, ..., d^k)``: level 1 is over ``S_{-i}``; level k+1 over
    ``(x_k, opponents' k-th order beliefs)`` where ``x_k`` is a level-k ground point."""

    depth: int
    levels: tuple

    def coherent(self) -> bool:
        return all(self.levels[k].pushforward(_first) == self.levels[k - 1]
                   for k in range(1, self.depth))


def _first(x):
    return x[0]


def explicit_hierarchy(structure: TypeStructure, player, t_i, depth: int) -> HierarchyTerm:
    if depth > MAX_EXPLICIT_DEPTH:
        raise DepthTooLarge(f"explicit hierarchies are capped at depth {MAX_EXPLICIT_DEPTH}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    game = structure.game
    memo: dict = {}

    def order(i, t, k) -> Lps:
        # k-th order belief of type t of player i
        key = (i, t, k)
        if key not in memo:
            belief = structure.belief(i, t)
            opp = game.opponents(i)

            def ground(x, k=k, opp=opp):
                s_opp, t_opp = x
                point = s_opp
                for r in range(1, k):
                    point = (point, tuple(order(j, tj, r) for j, tj in zip(opp, t_opp)))
                return point

            memo[key] = belief.pushforward(ground)
        return memo[key]

    return HierarchyTerm(depth, tuple(order(player, t_i, k) for k in range(1, depth + 1)))


def is_hierarchy_morphism(first: TypeStructure, second: TypeStructure, phi: Morphism) -> bool:
    part, _ = stable_partition([first, second])
    for i in first.players:
        for t in first.types[i]:
            target = phi.maps.get(i, {}).get(t)
            if target not in second.types[i]:
                return False
            if not part.same(TaggedType(0, i, t), TaggedType(1, i, target)):
                return False
    return True


def find_morphism(first: TypeStructure, second: TypeStructure) -> Optional[Morphism]:
    part, _ = stable_partition([first, second])
    maps = {}
    for i in first.players:
        maps[i] = {}
        for t in first.types[i]:
            cls = part.class_of(TaggedType(0, i, t))
            target = next((u for u in second.types[i] if TaggedType(1, i, u) in cls), None)
            if target is None:
                return None
            maps[i][t] = target
    return Morphism(maps)


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    forward: Optional[Morphism]
    backward: Optional[Morphism]

    def __bool__(self):
        return self.equivalent


def hierarchy_equivalent(first: TypeStructure, second: TypeStructure) -> Equivalence:
    fwd = find_morphism(first, second)
    bwd = find_morphism(second, first)
    ok = fwd is not None and bwd is not None
    return Equivalence(ok, fwd if ok else None, bwd if ok else None)


def require_morphism(first, second, phi: Morphism):
    if not is_hierarchy_morphism(first, second, phi):
        raise InvalidMorphism("map does not preserve belief hierarchies")
