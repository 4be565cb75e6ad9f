"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from lextypes.cli import run_cli
from lextypes.epistemic import cautious_belief_operator, rcbr_iterate
from lextypes.harness import equivalent_variant, fuzz_params, gen_structure, transport_check, verify_invariance
from lextypes.hierarchy import TaggedType, explicit_hierarchy, hierarchy_equivalent, refine
from lextypes.io import read_instance
from lextypes.lex import Order, lex_compare
from lextypes.model import Event

from conftest import ACCEPTANCE_LINES, SA, SBAR, TA, TBAR, make_T, lps, pt
from oracles import full_ground, oracle_levels

CORPUS_SEEDS = range(500)


def record(label, ok, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
    return ok


@pytest.fixture(scope="module")
def corpus():
    start = time.perf_counter()
    pairs = []
    for seed in CORPUS_SEEDS:
        base = gen_structure(fuzz_params(seed))
        pairs.append((seed, base, equivalent_variant(base, seed, steps=1 + seed % 3)))
    return pairs, time.perf_counter() - start


def test_ac1_example1_equivalence():
    start = time.perf_counter()
    code, text = run_cli(["equivalent", "example1.json"])
    elapsed = time.perf_counter() - start
    ok = (code == 0 and "hierarchy-equivalent: true" in text
          and "morphism T_circ -> T:" in text
          and "  b: tbar_b -> tbar_b, that_b -> tbar_b" in text and elapsed < 1.0)
    assert record("AC1 Example 1 hierarchy-equivalent, both Bob types -> tbar_b", ok, f"{elapsed:.3f}s")


def test_ac2_example1_invariance():
    start = time.perf_counter()
    code, text = run_cli(["--json", "verify-invariance", "example1.json"])
    elapsed = time.perf_counter() - start
    doc = json.loads(text)
    expected = {"a": ["s_a"], "b": ["sbar_b"]}
    rows = [r for r in doc["rows"] if r["m"] >= 1]
    ok = (code == 0 and doc["verdict"] and rows
          and all(r["first"] == r["second"] == expected[r["player"]] for r in rows)
          and elapsed < 1.0)
    # beyond the reported depth the traces repeat; check a few more levels directly
    T, Tc = read_instance("example1.json").structures
    a, b = rcbr_iterate(T), rcbr_iterate(Tc)
    for m in range(1, 8):
        for i in ("a", "b"):
            ok = ok and a.at(m)[i].strategies() == b.at(m)[i].strategies() == set(expected[i])
    assert record("AC2 Example 1 projections {s_a}, {sbar_b} at every m >= 1", ok, f"{elapsed:.3f}s")


def test_ac3_theorem_fuzz(corpus):
    pairs, gen_time = corpus
    start = time.perf_counter()
    failures = [seed for seed, base, v in pairs
                if not (hierarchy_equivalent(base, v.structure) and verify_invariance(base, v.structure).verdict)]
    elapsed = gen_time + time.perf_counter() - start
    ok = len(pairs) >= 500 and not failures and elapsed < 300
    assert record("AC3 invariance verdict on 500 equivalent pairs", ok,
                  f"{len(pairs) - len(failures)}/{len(pairs)}, {elapsed:.1f}s"), failures


def test_ac4_transport_fuzz(corpus):
    pairs, _ = corpus
    levels = bad = 0
    for seed, base, v in pairs:
        for rep in (transport_check(base, v.structure, v.forward),
                    transport_check(v.structure, base, v.backward)):
            levels += len(rep.rows)
            bad += sum(not (r.inclusion and r.projection_identity) for r in rep.rows)
    assert record("AC4 transport inclusion and projection identity", bad == 0,
                  f"{levels - bad}/{levels} levels"), bad


def test_ac5_coherence():
    total = bad = 0
    for seed in range(200):
        st = gen_structure(fuzz_params(seed + 10_000))
        for i in st.players:
            for t in st.types[i]:
                term = explicit_hierarchy(st, i, t, 2)
                total += 1
                bad += term.levels[1].pushforward(lambda x: x[0]) != term.levels[0]
    assert record("AC5 depth-2 terms marginalize to depth-1 terms", bad == 0,
                  f"{total - bad}/{total} types over 200 structures"), bad


def _partition_instances():
    for seed in range(200):
        if seed % 2:
            base = gen_structure(fuzz_params(seed + 20_000, types=(1, 3), marginal_pool=2))
            yield [base, equivalent_variant(base, seed, steps=1).structure]
        else:
            yield [gen_structure(fuzz_params(seed + 20_000, types=(1, 4), marginal_pool=2))]


def test_ac6_refinement_oracle():
    checked = bad = 0
    split_late = 0
    for structures in _partition_instances():
        assert all(len(s.types[i]) <= 4 for s in structures for i in s.players)
        tagged = [TaggedType(o, i, t) for o, s in enumerate(structures) for i in s.players for t in s.types[i]]
        for depth in (1, 2, 3):
            part = refine(structures, depth)
            terms = {x: explicit_hierarchy(structures[x.origin], x.player, x.type_id, depth) for x in tagged}
            for x, y in itertools.combinations(tagged, 2):
                if x.player != y.player:
                    continue
                checked += 1
                same = part.same(x, y)
                bad += same != (terms[x] == terms[y])
                if depth == 2 and not same and refine(structures, 1).same(x, y):
                    split_late += 1
    assert split_late > 0
    assert record("AC6 refinement classes equal explicit-term equality, depths 1-3", bad == 0,
                  f"{checked - bad}/{checked} pairs, {split_late} separations first seen at depth 2"), bad


def test_ac7_epistemic_oracle(corpus):
    pairs, _ = corpus
    small = [st for _, base, v in pairs for st in (base, v.structure) if st.size() <= 6]
    bad = 0
    for st in small:
        tr = rcbr_iterate(st)
        upto = tr.stabilized_at + 2
        for m, level in enumerate(oracle_levels(st, upto)):
            bad += {i: set(tr.at(m)[i].pairs) for i in st.players} != level
    ok = len(small) > 0 and bad == 0
    assert record("AC7 rcbr_iterate equals brute-force evaluator on structures with <= 6 pairs", ok,
                  f"{len(small)} structures"), bad


def test_ac8_belief_properties(corpus):
    T_nc = make_T(lps({pt(SBAR, TBAR): 1}))
    E = {pt(SBAR, TBAR)}
    F = set(full_ground(T_nc, "a"))
    witness = (E < F and cautious_belief_operator(T_nc, "a", E) == Event("a", {(SA, TA)})
               and cautious_belief_operator(T_nc, "a", F) == Event("a"))
    pairs, _ = corpus
    rng = random.Random(8)
    structures = [base for _, base, _ in pairs]
    draws = bad = 0
    while draws < 1000:
        st = rng.choice(structures)
        i = rng.choice(st.players)
        ground = full_ground(st, i)
        big = set(rng.sample(ground, rng.randint(1, len(ground))))
        small = {rng.choice(sorted(x for x in big if x[0] == s)) for s in {x[0] for x in big}}
        small |= {x for x in big if rng.random() < 0.5}
        assert {x[0] for x in small} == {x[0] for x in big} and small <= big
        draws += 1
        bad += not cautious_belief_operator(st, i, small) <= cautious_belief_operator(st, i, big)
    ok = witness and bad == 0
    assert record("AC8 non-monotonicity witness and projection-monotonicity", ok,
                  f"witness={witness}, {draws - bad}/{draws} nested draws"), bad


def test_ac9_structural_invariants(corpus):
    pairs, _ = corpus
    bad = 0
    for _, base, v in pairs:
        for st in (base, v.structure):
            tr = rcbr_iterate(st)
            bad += tr.stabilized_at > st.size() + 1
            for m in range(tr.stabilized_at + 2):
                bad += any(not tr.at(m + 1)[i] <= tr.at(m)[i] for i in st.players)
    rng = random.Random(9)
    vecs = [tuple(Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(3)) for _ in range(10_000)]
    lex_bad = 0
    for k in range(10_000):
        x, y, z = vecs[k], rng.choice(vecs), rng.choice(vecs)
        c = lex_compare(x, y)
        lex_bad += c != -lex_compare(y, x)
        lex_bad += (c is Order.EQUAL) != (x == y)
        if lex_compare(x, y) >= 0 and lex_compare(y, z) >= 0:
            lex_bad += lex_compare(x, z) < 0
    ok = bad == 0 and lex_bad == 0
    assert record("AC9 monotone levels, stabilization bound, lex order total and transitive", ok,
                  f"{bad} level violations, {lex_bad} order violations over 10^4 vectors"), (bad, lex_bad)
