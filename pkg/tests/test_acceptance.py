"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import dataclasses
import random
import time

import pytest

from knowhow.axioms import AXIOMS
from knowhow.corpus import assert_claims
from knowhow.formula import Bot, Strat, Not, format_formula, parse_formula
from knowhow.fuzz import DERIVED, RULES, FuzzConfig, fuzz_soundness, random_formula, random_model, random_subset
from knowhow.proofcheck import TheoremDB, check_proof, load_corpus
from knowhow.semantics import check_validity, extension
from mutations import mutate_formula
import oracle

SEED = 7
FUZZ = FuzzConfig(seed=SEED, num_models=500, states_range=(1, 4), agents_range=(1, 3),
                  votes_range=(1, 3), instances_per_schema=20)


def report(n, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def soundness_run():
    t0 = time.perf_counter()
    rep = fuzz_soundness(FUZZ)
    return rep, time.perf_counter() - t0


def test_claim_table():
    t0 = time.perf_counter()
    results = assert_claims()
    elapsed = time.perf_counter() - t0
    bad = [r for r in results if not r.passed]
    report(1, not bad and elapsed < 1.0,
           f"{len(results) - len(bad)}/{len(results)} claims match in {elapsed:.2f}s")


def test_axiom_soundness(soundness_run):
    rep, elapsed = soundness_run
    checks = [s.name for s in AXIOMS]
    trials = sum(rep.counts[c].trials for c in checks)
    fails = sum(rep.counts[c].failures for c in checks)
    rule_trials = sum(rep.counts[r].trials for r in RULES)
    rule_fails = sum(rep.counts[r].failures for r in RULES)
    ok = (trials == 500 * 11 * 20 and fails == 0 and rule_trials == 3 * 500
          and rule_fails == 0 and elapsed < 60.0)
    report(2, ok, f"{trials} axiom instances, {fails} counterexamples; "
                  f"{rule_trials} rule checks, {rule_fails} counterexamples; {elapsed:.1f}s")


def test_derived_principles(soundness_run):
    rep, _ = soundness_run
    trials = sum(rep.counts[d].trials for d in DERIVED)
    fails = sum(rep.counts[d].failures for d in DERIVED)
    report(3, trials == 500 * 20 * len(DERIVED) and fails == 0,
           f"{trials} derived-principle instances, {fails} counterexamples")


def test_proof_corpus():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    db = TheoremDB()
    accepted = rejected = mutants = 0
    for d in load_corpus():
        res = check_proof(d, db)
        accepted += res.accepted
        for _ in range(100):
            k = rng.randrange(len(d.lines))
            lines = list(d.lines)
            lines[k] = dataclasses.replace(lines[k], formula=mutate_formula(rng, lines[k].formula))
            mutants += 1
            rejected += not check_proof(dataclasses.replace(d, lines=lines), db).accepted
        db.add(d, res)
    elapsed = time.perf_counter() - t0
    n = len(load_corpus())
    report(4, accepted == n == 10 and rejected == mutants and elapsed < 5.0,
           f"{accepted}/{n} proofs accepted, {rejected}/{mutants} mutants rejected in {elapsed:.2f}s")


def test_oracle_agreement():
    cfg = FuzzConfig(seed=SEED, formula_depth=3)
    rng = random.Random(SEED)
    agree = 0
    for i in range(200):
        m = random_model(cfg, i)
        f = random_formula(cfg, cfg.atoms, m.agents, i)
        w = rng.choice(m.states)
        agree += (w in extension(m, f)) == oracle.sat(m, w, f)
    report(5, agree == 200, f"{agree}/200 triples agree with the direct evaluator")


def test_round_trip():
    cfg = FuzzConfig(seed=SEED, formula_depth=5)
    agents = ("a", "b", "c")
    same = sum(
        parse_formula(format_formula(f)) == f
        for f in (random_formula(cfg, ("p", "q", "r"), agents, i) for i in range(10_000))
    )
    report(6, same == 10_000, f"{same}/10000 formulas survive format then parse")


def test_nontermination():
    rng = random.Random(SEED)
    checked = failed = 0
    for i in range(FUZZ.num_models):
        m = random_model(FUZZ, i)
        for _ in range(5):
            C = random_subset(rng, m.agents)
            checked += 1
            failed += not check_validity(m, Not(Strat(C, Bot()))).holds
    report(7, failed == 0, f"!S{{C}} false valid in {checked - failed}/{checked} (model, coalition) pairs")
