"""Seeded random models and formulas, and a soundness fuzzer for the axioms.

Every random draw comes from a ``random.Random`` seeded with a string built
from ``(seed, purpose, index)``, so a model or formula can be regenerated from
the numbers printed in a report.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .axioms import AXIOMS, AxiomSchema, SchemaError, instantiate_schema, is_tautology
from .formula import (
    And,
    Bot,
    Formula,
    Howto,
    Implies,
    Know,
    Not,
    Or,
    Strat,
    Var,
    format_coalition,
    format_formula,
)
from .model import EpistemicTransitionSystem, TransitionPattern
from .semantics import Evaluator

AGENT_NAMES = ("a", "b", "c", "d")
VOTE_NAMES = ("v0", "v1", "v2")
FORMULA_KINDS = ("var", "false", "not", "implies", "and", "or", "know", "strat", "howto")
EMPTY: frozenset[str] = frozenset()


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    num_models: int = 500
    states_range: tuple[int, int] = (1, 4)
    agents_range: tuple[int, int] = (1, 3)
    votes_range: tuple[int, int] = (1, 3)
    pattern_density: float = 0.3
    formula_depth: int = 2
    instances_per_schema: int = 20
    # chance that a state's totality base splits on a random pivot coalition
    # instead of being a single all-wildcard pattern
    pivot_probability: float = 0.5
    atoms: tuple[str, ...] = ("p", "q")
    max_failures_recorded: int = 100

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.num_models < 0 or self.instances_per_schema < 0 or self.formula_depth < 0:
            raise ValueError("counts and depth must be non-negative")
        for name, (lo, hi), cap in (
            ("states_range", self.states_range, None),
            ("agents_range", self.agents_range, len(AGENT_NAMES)),
            ("votes_range", self.votes_range, len(VOTE_NAMES)),
        ):
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must be a nonempty range of positive sizes")
            if cap is not None and hi > cap:
                raise ValueError(f"{name} maximum is {cap}")
        for name in ("pattern_density", "pivot_probability"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not self.atoms:
            raise ValueError("atoms must be nonempty")


def _rng(cfg: FuzzConfig, purpose: str, index: int) -> random.Random:
    return random.Random(f"{cfg.seed}/{purpose}/{index}")


def random_subset(rng: random.Random, pool: Sequence[str]) -> frozenset[str]:
    return frozenset(x for x in pool if rng.random() < 0.5)


def _random_partition(rng: random.Random, states: Sequence[str]) -> tuple[frozenset[str], ...]:
    # refine the one-block partition: each state joins an existing block or opens a new one
    blocks: list[set[str]] = []
    for s in states:
        k = rng.randrange(len(blocks) + 1)
        if k == len(blocks):
            blocks.append({s})
        else:
            blocks[k].add(s)
    return tuple(frozenset(b) for b in blocks)


def random_model(cfg: FuzzConfig, index: int) -> EpistemicTransitionSystem:
    """A random valid model, fully determined by ``(cfg.seed, index)``."""
    rng = _rng(cfg, "model", index)
    n_states = rng.randint(*cfg.states_range)
    n_agents = rng.randint(*cfg.agents_range)
    n_votes = rng.randint(*cfg.votes_range)
    states = tuple(f"s{i}" for i in range(n_states))
    agents = AGENT_NAMES[:n_agents]
    votes = VOTE_NAMES[:n_votes]

    indist = {a: _random_partition(rng, states) for a in agents}
    transitions: list[TransitionPattern] = []
    for s in states:
        if rng.random() < cfg.pivot_probability:
            pivot = sorted(random_subset(rng, agents))
        else:
            pivot = []
        # one pattern per assignment of the pivot agents covers every full profile
        for combo in _assignments(pivot, votes):
            transitions.append(TransitionPattern(s, combo, rng.choice(states)))
        for _ in range(n_states):
            if rng.random() < cfg.pattern_density:
                constraint = tuple((a, rng.choice(votes)) for a in agents if rng.random() < 0.5)
                transitions.append(TransitionPattern(s, constraint, rng.choice(states)))
    valuation = {p: frozenset(s for s in states if rng.random() < 0.5) for p in cfg.atoms}
    return EpistemicTransitionSystem(agents, votes, states, indist, tuple(transitions), valuation)


def _assignments(agents: Sequence[str], votes: Sequence[str]):
    if not agents:
        yield ()
        return
    head, rest = agents[0], agents[1:]
    for v in votes:
        for tail in _assignments(rest, votes):
            yield ((head, v),) + tail


def gen_formula(rng: random.Random, depth: int, atoms: Sequence[str], agents: Sequence[str]) -> Formula:
    kind = rng.choice(FORMULA_KINDS[:2] if depth <= 0 else FORMULA_KINDS)
    if kind == "var":
        return Var(rng.choice(atoms))
    if kind == "false":
        return Bot()
    if kind == "not":
        return Not(gen_formula(rng, depth - 1, atoms, agents))
    if kind in ("implies", "and", "or"):
        node = {"implies": Implies, "and": And, "or": Or}[kind]
        return node(gen_formula(rng, depth - 1, atoms, agents), gen_formula(rng, depth - 1, atoms, agents))
    node = {"know": Know, "strat": Strat, "howto": Howto}[kind]
    c = random_subset(rng, agents)
    return node(c, gen_formula(rng, depth - 1, atoms, agents))


def random_formula(
    cfg: FuzzConfig,
    atoms: Sequence[str],
    agents: Sequence[str],
    index: int,
    depth: int | None = None,
) -> Formula:
    rng = _rng(cfg, "formula", index)
    return gen_formula(rng, cfg.formula_depth if depth is None else depth, tuple(atoms), tuple(sorted(agents)))


# --- instance samplers ----------------------------------------------------------


def sample_instance(rng: random.Random, schema: AxiomSchema, atoms, agents, depth: int):
    """Random bindings for ``schema`` that respect its side condition."""
    phi = gen_formula(rng, depth, atoms, agents) if "phi" in schema.formula_slots else None
    psi = gen_formula(rng, depth, atoms, agents) if "psi" in schema.formula_slots else None
    C = D = None
    if schema.side_condition == "subset":
        D = random_subset(rng, agents)
        C = random_subset(rng, sorted(D))
    elif schema.side_condition == "disjoint":
        C = random_subset(rng, agents)
        D = random_subset(rng, [a for a in agents if a not in C])
    else:
        if "C" in schema.coalition_slots:
            C = random_subset(rng, agents)
        if "D" in schema.coalition_slots:
            D = random_subset(rng, agents)
    return instantiate_schema(schema, phi, psi, C, D)


def _bindings(phi=None, psi=None, C=None, D=None) -> dict:
    out = {}
    for k, v in (("phi", phi), ("psi", psi)):
        if v is not None:
            out[k] = format_formula(v)
    for k, v in (("C", C), ("D", D)):
        if v is not None:
            out[k] = format_coalition(v)
    return out


def _derived_positive_introspection(rng, atoms, agents, depth):
    C = random_subset(rng, agents)
    phi = gen_formula(rng, depth, atoms, agents)
    return Implies(Howto(C, phi), Know(C, Howto(C, phi))), _bindings(phi=phi, C=C)


def _derived_s_monotonicity(rng, atoms, agents, depth):
    D = random_subset(rng, agents)
    C = random_subset(rng, sorted(D))
    phi = gen_formula(rng, depth, atoms, agents)
    return Implies(Strat(C, phi), Strat(D, phi)), _bindings(phi=phi, C=C, D=D)


def _derived_h_monotonicity(rng, atoms, agents, depth):
    D = random_subset(rng, agents)
    C = random_subset(rng, sorted(D))
    phi = gen_formula(rng, depth, atoms, agents)
    return Implies(Howto(C, phi), Howto(D, phi)), _bindings(phi=phi, C=C, D=D)


def _derived_conjunctive_determinicity(rng, atoms, agents, depth):
    C = random_subset(rng, agents)
    phi = gen_formula(rng, depth, atoms, agents)
    psi = gen_formula(rng, depth, atoms, agents)
    f = Implies(And(Know(C, Strat(EMPTY, phi)), Howto(C, psi)), Howto(C, And(phi, psi)))
    return f, _bindings(phi=phi, psi=psi, C=C)


_TAUTOLOGY_SHAPES: tuple[Callable[[Formula, Formula, Formula], Formula], ...] = (
    lambda a, b, c: Implies(a, Implies(b, a)),
    lambda a, b, c: Implies(Implies(a, Implies(b, c)), Implies(Implies(a, b), Implies(a, c))),
    lambda a, b, c: Implies(Implies(Not(a), Not(b)), Implies(b, a)),
    lambda a, b, c: Or(a, Not(a)),
    lambda a, b, c: Implies(And(a, b), Or(b, c)),
    lambda a, b, c: Implies(Bot(), a),
    lambda a, b, c: Implies(Implies(Implies(a, b), a), a),
)


def _derived_tautology(rng, atoms, agents, depth):
    a, b, c = (gen_formula(rng, depth, atoms, agents) for _ in range(3))
    shape = rng.randrange(len(_TAUTOLOGY_SHAPES))
    return _TAUTOLOGY_SHAPES[shape](a, b, c), {"shape": shape, **_bindings(phi=a, psi=b), "chi": format_formula(c)}


DERIVED = {
    "StrategicPositiveIntrospection": _derived_positive_introspection,
    "StrategyMonotonicity": _derived_s_monotonicity,
    "KnowHowMonotonicity": _derived_h_monotonicity,
    "ConjunctiveDeterminicity": _derived_conjunctive_determinicity,
}
RULES = ("NecK", "NecH", "NecS")


def _find_valid_formula(ev: Evaluator, rng, atoms, agents, depth, tries: int = 200) -> Formula | None:
    fallback = None
    for _ in range(tries):
        f = gen_formula(rng, depth, atoms, agents)
        if ev.check_validity(f).holds:
            if not is_tautology(f):
                return f
            fallback = fallback or f
    return fallback


@dataclass
class _Tally:
    trials: int = 0
    failures: int = 0


@dataclass
class FuzzReport:
    config: FuzzConfig
    counts: dict[str, _Tally] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    total_failures: int = 0

    @property
    def ok(self) -> bool:
        return self.total_failures == 0

    def count(self, name: str) -> _Tally:
        return self.counts.setdefault(name, _Tally())

    def to_dict(self) -> dict:
        return {
            "seed": self.config.seed,
            "config": asdict(self.config),
            "checks": {k: {"trials": v.trials, "failures": v.failures} for k, v in self.counts.items()},
            "total_failures": self.total_failures,
            "failures": self.failures,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _record(report: FuzzReport, check: str, index: int, m, formula: Formula, state, bindings) -> None:
    report.count(check).failures += 1
    report.total_failures += 1
    if len(report.failures) < report.config.max_failures_recorded:
        report.failures.append(
            {
                "check": check,
                "seed": report.config.seed,
                "model_index": index,
                "instance": format_formula(formula),
                "bindings": bindings,
                "state": state,
                "model": m.to_dict(),
            }
        )


def fuzz_soundness(
    cfg: FuzzConfig,
    schemas: Iterable[AxiomSchema] = AXIOMS,
    *,
    derived: bool = True,
    rules: bool = True,
) -> FuzzReport:
    """Check axiom instances, derived principles and rule preservation on random models.

    Every counterexample is recorded with enough data to regenerate it.  The
    report lists checks in a fixed order, so equal configs give equal JSON.
    """
    schemas = tuple(schemas)
    report = FuzzReport(cfg)
    for s in schemas:
        report.count(s.name)
    report.count("PropositionalTautology")
    if derived:
        for name in DERIVED:
            report.count(name)
    if rules:
        for name in RULES:
            report.count(name)

    depth = cfg.formula_depth
    for index in range(cfg.num_models):
        m = random_model(cfg, index)
        ev = Evaluator(m)
        agents, atoms = m.agents, cfg.atoms
        rng = _rng(cfg, "instances", index)

        for s in schemas:
            for _ in range(cfg.instances_per_schema):
                try:
                    inst = sample_instance(rng, s, atoms, agents, depth)
                except SchemaError:
                    # a broken template may reject its own bindings; count it as a failure
                    report.count(s.name).trials += 1
                    _record(report, s.name, index, m, Bot(), None, {})
                    continue
                report.count(s.name).trials += 1
                v = ev.check_validity(inst.result)
                if not v.holds:
                    b = _bindings(inst.formulas.get("phi"), inst.formulas.get("psi"),
                                  inst.coalitions.get("C"), inst.coalitions.get("D"))
                    _record(report, s.name, index, m, inst.result, v.counterexample[0], b)

        for _ in range(cfg.instances_per_schema):
            f, b = _derived_tautology(rng, atoms, agents, depth)
            report.count("PropositionalTautology").trials += 1
            if not is_tautology(f):
                _record(report, "PropositionalTautology", index, m, f, None, b)
                continue
            v = ev.check_validity(f)
            if not v.holds:
                _record(report, "PropositionalTautology", index, m, f, v.counterexample[0], b)

        if derived:
            for name, make in DERIVED.items():
                for _ in range(cfg.instances_per_schema):
                    f, b = make(rng, atoms, agents, depth)
                    report.count(name).trials += 1
                    v = ev.check_validity(f)
                    if not v.holds:
                        _record(report, name, index, m, f, v.counterexample[0], b)

        if rules:
            phi = _find_valid_formula(ev, rng, atoms, agents, depth)
            if phi is None:
                phi = sample_instance(rng, AXIOMS[0], atoms, agents, depth).result
            C = random_subset(rng, agents)
            for name, node in zip(RULES, (Know, Howto, Strat)):
                f = node(C, phi)
                report.count(name).trials += 1
                v = ev.check_validity(f)
                if not v.holds:
                    _record(report, name, index, m, f, v.counterexample[0], _bindings(phi=phi, C=C))
    return report
