import dataclasses
import random

import pytest

from knowhow.axioms import SCHEMAS
from knowhow.formula import Implies, Var, parse_formula
from knowhow.fuzz import FuzzConfig, random_model
from knowhow.proofcheck import (
    CORPUS_FILES,
    ModusPonens,
    ProofSyntaxError,
    TheoremDB,
    check_corpus,
    check_proof,
    format_derivation,
    load_corpus,
    parse_proofs,
)
from knowhow.semantics import check_validity
from mutations import mutate_formula

P = parse_formula


def corpus_db():
    db = TheoremDB()
    assert all(check_corpus(db=db))
    return db


def by_name():
    return {d.name: d for d in load_corpus()}


def test_full_corpus_accepted():
    report = check_corpus()
    assert [r.name for r in report] == [d.name for d in load_corpus()]
    assert all(r.accepted for r in report), [r for r in report if not r.accepted]
    assert len(report) == 2 * len(CORPUS_FILES)


def test_conclusions():
    ds = by_name()
    assert ds["lemma1_a"].conclusion == P("H{a} p -> K{a} H{a} p")
    assert ds["lemma2_a"].conclusion == P("H{a} p -> K{a} S{a} p")
    assert ds["lemma3_a_ab"].conclusion == P("H{a} p -> H{a,b} p")
    assert ds["lemma4_b"].conclusion == P("S{b} (p -> p)")
    assert ds["lemma5_a_ab"].conclusion == P("S{a} p -> S{a,b} p")
    assert ds["lemma5_0_a"].conclusion == P("S{} (p -> q) -> S{a} (p -> q)")


def test_two_ground_instances_per_lemma():
    names = [d.name for d in load_corpus()]
    for i in range(1, 6):
        assert len([n for n in names if n.startswith(f"lemma{i}_")]) == 2


def test_subset_lemma_side_conditions_hold_on_ground_sets():
    for d in load_corpus():
        for line in d.lines:
            j = line.justification
            if getattr(j, "schema", None) in ("Cooperation", "EpistemicCooperation"):
                rest, small = j.coalitions["C"], j.coalitions["D"]
                assert rest & small == frozenset()
                big = rest | small
                assert small <= big and big - small == rest


def test_empty_corpus():
    assert check_corpus([]) == []


def test_corpus_without_k_monotonicity():
    report = check_corpus(schemas=set(SCHEMAS) - {"Monotonicity"})
    assert all(r.accepted for r in report)


def test_corpus_without_strategic_truth_rejects_dependents():
    report = {r.name: r for r in check_corpus(schemas=set(SCHEMAS) - {"StrategicTruth"})}
    assert report["lemma1_a"].accepted
    assert not report["lemma2_a"].accepted and report["lemma2_a"].line == 1
    assert not report["lemma4_b"].accepted
    assert report["lemma5_a_ab"].reason == "unknown theorem 'lemma4_b'"


def test_swapped_mp_premises_rejected_at_that_line():
    d = by_name()["lemma1_a"]
    lines = list(d.lines)
    mp = lines[2]
    lines[2] = dataclasses.replace(mp, justification=ModusPonens(mp.justification.major, mp.justification.minor))
    res = check_proof(dataclasses.replace(d, lines=lines), TheoremDB())
    assert not res.accepted and res.line == 3 and "modus ponens" in res.reason


def test_necessitation_of_hypothesis_rejected():
    (d,) = parse_proofs("theorem bad [hyp: p]\n1. p  by hyp\n2. K{a} p  by necK {a} 1\nqed\n")
    res = check_proof(d)
    assert not res.accepted and res.line == 2 and "depends on hypotheses" in res.reason


def test_modus_ponens_from_hypotheses_allowed():
    text = (
        "theorem ok [hyp: p; p -> q]\n"
        "1. p  by hyp\n"
        "2. p -> q  by hyp\n"
        "3. q  by mp 1,2\n"
        "4. K{a} (r -> r)  by necK {a} 5\n"
        "qed\n"
    )
    (d,) = parse_proofs(text)
    res = check_proof(d)
    assert not res.accepted and "not earlier" in res.reason
    (d,) = parse_proofs(text.replace("4. K{a} (r -> r)  by necK {a} 5\n", ""))
    assert check_proof(d).accepted
    db = TheoremDB()
    with pytest.raises(ValueError, match="hypotheses"):
        db.add(d, check_proof(d))


def test_hypothesis_line_must_be_declared():
    (d,) = parse_proofs("theorem bad [hyp: p]\n1. q  by hyp\nqed\n")
    assert "hypotheses" in check_proof(d).reason


def test_necessitation_under_hypotheses_on_independent_line():
    text = (
        "theorem ok [hyp: p]\n"
        "1. q -> q  by Axiom(PropositionalTautology; phi=q -> q)\n"
        "2. H{a} (q -> q)  by necH {a} 1\n"
        "qed\n"
    )
    (d,) = parse_proofs(text)
    assert check_proof(d).accepted


def test_unknown_theorem():
    (d,) = parse_proofs("theorem t\n1. p -> p  by thm nothing\nqed\n")
    res = check_proof(d, TheoremDB())
    assert not res.accepted and "unknown theorem" in res.reason


def test_theorem_citation_must_match():
    db = corpus_db()
    (d,) = parse_proofs("theorem t\n1. H{b} p -> K{b} H{b} p  by thm lemma1_a\nqed\n")
    res = check_proof(d, db)
    assert not res.accepted and "states" in res.reason


def test_bad_axiom_instance():
    (d,) = parse_proofs("theorem t\n1. K{a} p -> q  by Axiom(Truth; phi=p; C={a})\nqed\n")
    assert "bad instance" in check_proof(d).reason
    (d,) = parse_proofs(
        "theorem t\n1. S{a} (p -> q) -> S{a} p -> S{a} q  by Axiom(Cooperation; phi=p; psi=q; C={a}; D={a})\nqed\n"
    )
    assert "disjointness" in check_proof(d).reason


def test_file_round_trip():
    for d in load_corpus():
        (again,) = parse_proofs(format_derivation(d))
        assert again == d


@pytest.mark.parametrize(
    "text",
    [
        "1. p  by hyp\n",
        "theorem t\n1. p  by hyp\n",
        "theorem t\n1. p  because\nqed\n",
        "theorem t\n1. p ->  by hyp\nqed\n",
        "theorem t\n1. p  by Axiom(Nope; phi=p)\nqed\n",
    ],
)
def test_proof_syntax_errors(text):
    with pytest.raises(ProofSyntaxError):
        parse_proofs(text)


def test_mutations_rejected():
    rng = random.Random(0)
    db = TheoremDB()
    for d in load_corpus():
        for _ in range(20):
            k = rng.randrange(len(d.lines))
            line = d.lines[k]
            lines = list(d.lines)
            lines[k] = dataclasses.replace(line, formula=mutate_formula(rng, line.formula))
            res = check_proof(dataclasses.replace(d, lines=lines), db)
            assert not res.accepted and res.line == line.index
        db.add(d, check_proof(d, db))


def test_accepted_theorems_are_valid_on_random_models():
    db = corpus_db()
    cfg = FuzzConfig(seed=9, agents_range=(2, 3))
    for i in range(40):
        m = random_model(cfg, i)
        for name in db.names():
            assert check_validity(m, db[name]).holds
