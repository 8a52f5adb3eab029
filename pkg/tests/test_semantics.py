import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from knowhow.formula import Bot, Howto, Implies, Know, Not, Strat, format_formula, parse_formula
from knowhow.fuzz import FuzzConfig, gen_formula, random_model
from knowhow.model import UnknownReferenceError, indist_class, successors
from knowhow.semantics import Evaluator, check, check_validity, extension

P = parse_formula
CFG = FuzzConfig(seed=3)


@pytest.mark.parametrize(
    "fixture, state, text, holds",
    [
        ("T1", "u", "S{a} p", True),
        ("T1", "u", "H{a} p", False),
        ("T1", "u", "K{a} S{a} p", True),
        ("T3", "s", "H{a} S{a} p", True),
        ("T3", "s", "H{a} H{a} p", False),
        ("T8", "v", "K{a,b} S{} p", True),
        ("T8", "v", "K{a} S{} p", False),
    ],
)
def test_check_examples(fixtures, fixture, state, text, holds):
    assert check(fixtures[fixture], state, P(text)).holds is holds


def test_strategy_witness(T1):
    v = check(T1, "u", P("S{a} p"))
    assert v.witness == {"a": "L"}
    assert check(T1, "v", P("S{a} p")).witness == {"a": "R"}


def test_know_counterexample(fixtures):
    v = check(fixtures["T8"], "v", P("K{a} S{} p"))
    assert v.counterexample == ("u", None)


def test_howto_counterexample(T1):
    # first profile a=L works at u but sends v to w1
    assert check(T1, "u", P("H{a} p")).counterexample == ("v", "w1")


def test_nontermination_everywhere(fixtures):
    for m in fixtures.values():
        for w in m.states:
            for a in m.agents:
                assert not check(m, w, Strat(frozenset([a]), Bot())).holds


def test_extension_examples(fixtures):
    assert extension(fixtures["T1"], P("p")) == {"w"}
    assert {"u", "v"} <= extension(fixtures["T6"], P("S{a,b} p"))
    for m in fixtures.values():
        assert extension(m, P("true")) == set(m.states)


def test_check_validity_examples(fixtures):
    assert check_validity(fixtures["T1"], P("!S{a} false")).holds
    v = check_validity(fixtures["T1"], P("H{a} p"))
    assert not v.holds and v.counterexample == ("u", None)
    assert check_validity(fixtures["T2"], P("K{a} H{a} p -> H{a} p")).holds


def test_unknown_state_and_agent(T1):
    with pytest.raises(UnknownReferenceError):
        check(T1, "nowhere", P("p"))
    with pytest.raises(UnknownReferenceError):
        check(T1, "u", P("K{zed} p"))
    with pytest.raises(UnknownReferenceError):
        extension(T1, P("p -> S{zed} p"))


def test_undeclared_variable_is_false_everywhere(T1):
    assert extension(T1, P("nothing")) == frozenset()


# --- properties over random models ---------------------------------------------

cases = st.tuples(st.integers(0, 5000), st.randoms(use_true_random=False))


def _setup(index, rnd):
    m = random_model(CFG, index)
    atoms = CFG.atoms
    phi = gen_formula(rnd, 2, atoms, m.agents)
    psi = gen_formula(rnd, 2, atoms, m.agents)
    C = frozenset(a for a in m.agents if rnd.random() < 0.5)
    D = C | frozenset(a for a in m.agents if rnd.random() < 0.5)
    return m, phi, psi, C, D


def _valid(m, f):
    return check_validity(m, f).holds


@settings(max_examples=150, deadline=None)
@given(cases)
def test_knowledge_is_s5(case):
    m, phi, _, C, _ = _setup(*case)
    K = lambda f: Know(C, f)
    assert _valid(m, Implies(K(phi), phi))
    assert _valid(m, Implies(K(phi), K(K(phi))))
    assert _valid(m, Implies(Not(K(phi)), K(Not(K(phi)))))


@settings(max_examples=150, deadline=None)
@given(cases)
def test_strategic_principles(case):
    m, phi, _, C, D = _setup(*case)
    H, S = (lambda f, c=C: Howto(c, f)), (lambda f, c=C: Strat(c, f))
    assert _valid(m, Implies(H(phi), Know(C, H(phi))))
    assert _valid(m, Implies(Not(H(phi)), Know(C, Not(H(phi)))))
    assert _valid(m, Implies(H(phi), S(phi)))
    assert _valid(m, Implies(S(phi), S(phi, D)))
    assert _valid(m, Implies(H(phi), H(phi, D)))


@settings(max_examples=150, deadline=None)
@given(cases)
def test_empty_coalition_characterizations(case):
    m, phi, _, _, _ = _setup(*case)
    E = frozenset()
    ext = extension(m, phi)
    everywhere = ext == set(m.states)
    h_states = extension(m, Howto(E, phi))
    for w in m.states:
        assert check(m, w, Know(E, phi)).holds is everywhere
        assert check(m, w, Strat(E, phi)).holds is (successors(m, w, {}) <= ext)
    assert h_states in (frozenset(), frozenset(m.states))


@settings(max_examples=150, deadline=None)
@given(cases)
def test_witnesses_resimulate(case):
    m, phi, _, C, _ = _setup(*case)
    goal = extension(m, phi)
    for w in m.states:
        v = check(m, w, Strat(C, phi))
        if v.holds:
            assert set(v.witness) == C
            assert successors(m, w, v.witness) <= goal
        v = check(m, w, Howto(C, phi))
        if v.holds:
            for w2 in indist_class(m, C, w):
                assert successors(m, w2, v.witness) <= goal
        else:
            bad_source, bad_target = v.counterexample
            assert bad_source in indist_class(m, C, w) and bad_target not in goal


@settings(max_examples=100, deadline=None)
@given(cases)
def test_extension_matches_direct_recursion(case):
    m, phi, psi, C, D = _setup(*case)
    for f in (phi, psi, Howto(C, Implies(phi, psi)), Know(D, Strat(C, phi))):
        ext = extension(m, f)
        for w in m.states:
            assert (w in ext) is oracle.sat(m, w, f), (format_formula(f), w)


def test_evaluator_memo_is_reused(fixtures):
    ev = Evaluator(fixtures["T6"])
    f = P("K{a,b} S{a,b} p")
    first = ev.extension(f)
    assert ev.extension(f) is first
