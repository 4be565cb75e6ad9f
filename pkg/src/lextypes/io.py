"""JSON instance files: one game plus one or two type structures.

Layout::

    {"game": {"players": [{"id": "a", "strategies": [...],
                           "payoffs": {"s_a|s_b": "1/1", ...}}, ...]},
     "structures": [{"name": "T",
                     "players": [{"id": "a", "types": [...],
                                  "beliefs": {"t_a": [[{"profile": ["s_b", "t_b"], "p": "1/2"}, ...],
                                                      ...]}}, ...]}]}

A belief profile lists strategy and type for each opponent in player
order.  Rationals are always ``"p/q"`` strings on output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InstanceSyntaxError, MalformedInput
from .model import PROFILE_SEP, Game, TypeStructure, build_game, build_structure, format_rational

FIXTURES = ("example1.json",)


@dataclass(frozen=True)
class Instance:
    game: Game
    structures: tuple


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceSyntaxError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise MalformedInput("document must be a JSON object", ())
    game = build_game(doc.get("game"), ("game",))
    raw = doc.get("structures")
    if not isinstance(raw, list) or not 1 <= len(raw) <= 2:
        raise MalformedInput("'structures' must be an array of one or two structures", ("structures",))
    structures = tuple(build_structure(game, s, ("structures", k)) for k, s in enumerate(raw))
    return Instance(game, structures)


def game_to_dict(game: Game) -> dict:
    players = []
    for i in game.players:
        payoffs = {PROFILE_SEP.join(p): format_rational(game.payoffs[i][p]) for p in game.profiles()}
        players.append({"id": i, "strategies": list(game.strategies[i]), "payoffs": payoffs})
    return {"players": players}


def structure_to_dict(structure: TypeStructure) -> dict:
    game = structure.game
    players = []
    for i in game.players:
        order = {x: k for k, x in enumerate(structure.ground(i))}
        beliefs = {}
        for t in structure.types[i]:
            levels = []
            for mu in structure.belief(i, t):
                entries = []
                for x in sorted(mu.support(), key=order.__getitem__):
                    s_opp, t_opp = x
                    prof = [v for pair in zip(s_opp, t_opp) for v in pair]
                    entries.append({"profile": prof, "p": format_rational(mu[x])})
                levels.append(entries)
            beliefs[t] = levels
        players.append({"id": i, "types": list(structure.types[i]), "beliefs": beliefs})
    return {"name": structure.name, "players": players}


def serialize_instance(game: Game, structures) -> str:
    doc = {"game": game_to_dict(game), "structures": [structure_to_dict(s) for s in structures]}
    return json.dumps(doc, indent=2) + "\n"


def fixture_text(name: str) -> str:
    return resources.files("lextypes").joinpath("data", name).read_text()


def read_instance(path) -> Instance:
    """Parse a file; a bare name of a shipped fixture (e.g. ``example1.json``) also works."""
    p = Path(path)
    if not p.exists() and p.name == str(path) and str(path) in FIXTURES:
        return parse_instance(fixture_text(str(path)))
    return parse_instance(p.read_text())
