"""Command-line driver.

Exit codes: 0 success / property true, 1 property false, 2 usage error,
3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .epistemic import rcbr_iterate
from .errors import LexTypesError
from .harness import (
    GenParams,
    equivalent_variant,
    fuzz_one,
    gen_structure,
    verify_invariance,
)
from .hierarchy import find_morphism, hierarchy_equivalent, refine_all, stable_partition
from .io import read_instance, serialize_instance

OK, FALSE, USAGE, INVALID = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _fmt_set(items) -> str:
    return "{" + ", ".join(items) + "}"


def _fmt_pairs(pairs) -> str:
    return "{" + ", ".join(f"({s},{t})" for s, t in pairs) + "}"


def _two(instance):
    if len(instance.structures) != 2:
        raise LexTypesError("this command needs a file with two structures", ("structures",))
    return instance.structures


def _morphism_dict(phi):
    return {i: dict(m) for i, m in phi.maps.items()}


def _render_morphism(src, dst, phi, out):
    out.append(f"morphism {src.name} -> {dst.name}:")
    for i in src.players:
        body = ", ".join(f"{t} -> {phi(i, t)}" for t in src.types[i])
        out.append(f"  {i}: {body}")


def cmd_solve(args, out):
    inst = read_instance(args.file)
    doc = []
    for st in inst.structures:
        trace = rcbr_iterate(st)
        levels = []
        out.append(f"structure {st.name}: stabilized at m = {trace.stabilized_at}")
        for m, level in enumerate(trace.levels):
            row = {}
            for i in st.players:
                pairs = st.sort_pairs(i, level[i].pairs)
                proj = st.sort_strategies(i, level[i].strategies())
                row[i] = {"pairs": [list(p) for p in pairs], "projection": proj}
                out.append(f"  m={m} {i}: R = {_fmt_pairs(pairs)}  Proj = {_fmt_set(proj)}")
            levels.append(row)
        doc.append({"name": st.name, "stabilized_at": trace.stabilized_at, "levels": levels})
    return OK, {"structures": doc}


def cmd_hierarchy(args, out):
    inst = read_instance(args.file)
    structures = list(inst.structures)
    parts = refine_all(structures, args.depth)
    _, m_star = stable_partition(structures)
    names = [s.name for s in structures]
    out.append(f"stable at depth {m_star}")
    doc = []
    for part in parts:
        out.append(f"depth {part.depth}:")
        row = {}
        for i, classes in part.classes.items():
            rendered = []
            for c in classes:
                members = sorted(c, key=lambda tt: (tt.origin, structures[tt.origin].types[i].index(tt.type_id)))
                rendered.append([f"{names[tt.origin]}:{tt.type_id}" for tt in members])
            row[i] = rendered
            out.append(f"  {i}: " + " | ".join(_fmt_set(r) for r in rendered))
        doc.append({"depth": part.depth, "classes": row})
    return OK, {"stable_depth": m_star, "partitions": doc}


def cmd_morphism(args, out):
    first, second = _two(read_instance(args.file))
    if args.reverse:
        first, second = second, first
    phi = find_morphism(first, second)
    if phi is None:
        out.append(f"no hierarchy morphism {first.name} -> {second.name}")
        return FALSE, {"from": first.name, "to": second.name, "morphism": None}
    _render_morphism(first, second, phi, out)
    return OK, {"from": first.name, "to": second.name, "morphism": _morphism_dict(phi)}


def cmd_equivalent(args, out):
    first, second = _two(read_instance(args.file))
    eq = hierarchy_equivalent(first, second)
    out.append(f"hierarchy-equivalent: {str(eq.equivalent).lower()}")
    doc = {"equivalent": eq.equivalent, "forward": None, "backward": None}
    if eq:
        _render_morphism(first, second, eq.forward, out)
        _render_morphism(second, first, eq.backward, out)
        doc.update(forward=_morphism_dict(eq.forward), backward=_morphism_dict(eq.backward))
    return (OK if eq else FALSE), doc


def cmd_verify(args, out):
    first, second = _two(read_instance(args.file))
    rep = verify_invariance(first, second)
    w = max(12, *(len(_fmt_set(first.game.strategies[i])) + 2 for i in first.players))
    out.append(f"{'m':>3}  {'player':<8}{first.name:<{w}}{second.name:<{w}}equal")
    rows = []
    for r in rep.rows:
        a = first.sort_strategies(r.player, r.first)
        b = first.sort_strategies(r.player, r.second)
        out.append(f"{r.m:>3}  {r.player:<8}{_fmt_set(a):<{w}}{_fmt_set(b):<{w}}{'yes' if r.equal else 'NO'}")
        rows.append({"m": r.m, "player": r.player, "first": a, "second": b, "equal": r.equal})
    out.append(f"verdict: {str(rep.verdict).lower()}")
    return (OK if rep.verdict else FALSE), {"verdict": rep.verdict, "depth": rep.depth, "rows": rows}


def cmd_gen(args, out):
    params = GenParams(seed=args.seed, players=args.players, strategies=tuple(args.strategies),
                       types=tuple(args.types), lps_length=tuple(args.lps_length),
                       denominator=args.denominator, marginal_pool=args.marginal_pool)
    st = gen_structure(params)
    structures = [st]
    if args.variant:
        structures.append(equivalent_variant(st, args.seed).structure)
    text = serialize_instance(st.game, structures)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        out.append(f"wrote {args.output}")
    else:
        out.append(text.rstrip("\n"))
    return OK, None


def cmd_fuzz(args, out):
    seeds = range(args.seed, args.seed + args.iters)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(fuzz_one, seeds, chunksize=16))
    else:
        results = [fuzz_one(s) for s in seeds]
    failed = [r for r in results if not r.ok]
    for r in failed:
        out.append(f"seed {r.seed}: equivalent={r.equivalent} invariance={r.invariance} transport={r.transport}")
    out.append(f"fuzz: {len(results) - len(failed)}/{len(results)} passed")
    doc = {"iters": len(results), "failed": [r.seed for r in failed]}
    return (OK if not failed else FALSE), doc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lextypes", description="Cautious rationality on lexicographic type structures.")
    p.add_argument("--json", action="store_true", help="emit a machine-readable report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="instance file (or the name of a shipped fixture)")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=func)
        return sp

    with_file("solve", cmd_solve, "print the R^m events and their projections")
    sp = with_file("hierarchy", cmd_hierarchy, "print hierarchy classes per depth")
    sp.add_argument("--depth", type=_positive, default=3)
    sp = with_file("morphism", cmd_morphism, "find a hierarchy morphism from the first structure")
    sp.add_argument("--reverse", action="store_true", help="search from the second structure instead")
    with_file("equivalent", cmd_equivalent, "decide hierarchy-equivalence")
    with_file("verify-invariance", cmd_verify, "compare strategy projections of both structures")

    sp = sub.add_parser("gen", help="emit a random instance file")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--players", type=int, default=2)
    sp.add_argument("--strategies", type=int, nargs=2, default=(1, 3), metavar=("LO", "HI"))
    sp.add_argument("--types", type=int, nargs=2, default=(1, 3), metavar=("LO", "HI"))
    sp.add_argument("--lps-length", type=int, nargs=2, default=(1, 3), metavar=("LO", "HI"))
    sp.add_argument("--denominator", type=int, default=4)
    sp.add_argument("--marginal-pool", type=int, default=0)
    sp.add_argument("--variant", action="store_true", help="append a hierarchy-equivalent variant")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("fuzz", help="check the invariance and transport properties on random pairs")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--iters", type=_positive, default=100)
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_fuzz)
    return p


def run_cli(argv=None):
    """Return ``(exit_code, report_text)``."""
    out: list = []
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        return USAGE, str(e)
    except SystemExit as e:  # --help
        return (e.code or 0), ""
    try:
        code, doc = args.func(args, out)
    except (LexTypesError, OSError) as e:
        where = f" at {e.where()}" if isinstance(e, LexTypesError) and e.path else ""
        return INVALID, f"error: {type(e).__name__}{where}: {e}"
    if args.json and doc is not None:
        return code, json.dumps(doc, indent=2)
    return code, "\n".join(out)


def main(argv=None):
    code, text = run_cli(argv)
    if text:
        print(text, file=sys.stderr if code in (USAGE, INVALID) else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
