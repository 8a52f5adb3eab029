"""Satisfaction of K/S/H formulas on a finite epistemic transition system."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

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
    agents_of,
    format_formula,
)
from .model import EpistemicTransitionSystem, profiles


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: dict[str, str] | None = None
    counterexample: tuple[str, str | None] | None = None

    def __bool__(self) -> bool:
        return self.holds


class Evaluator:
    """Bottom-up evaluator for one model; memoizes the extension of every subformula.

    The memo lives on the instance, so sharing an evaluator across many
    formulas over the same model reuses work.
    """

    def __init__(self, model: EpistemicTransitionSystem):
        self.model = model
        self._memo: dict[Formula, frozenset[str]] = {}
        self._all = frozenset(model.states)

    def coalition_profiles(self, c) -> list[dict[str, str]]:
        return list(profiles(c, self.model.votes))

    def _forces(self, w: str, profile: dict[str, str], goal: frozenset[str]) -> bool:
        return self.model.successors(w, profile) <= goal

    def extension(self, f: Formula) -> frozenset[str]:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        m = self.model
        if isinstance(f, Var):
            ext = m.label(f.name) & self._all
        elif isinstance(f, Bot):
            ext = frozenset()
        elif isinstance(f, Not):
            ext = self._all - self.extension(f.sub)
        elif isinstance(f, Implies):
            ext = (self._all - self.extension(f.left)) | self.extension(f.right)
        elif isinstance(f, And):
            ext = self.extension(f.left) & self.extension(f.right)
        elif isinstance(f, Or):
            ext = self.extension(f.left) | self.extension(f.right)
        elif isinstance(f, Know):
            m.require_agents(f.coalition)
            goal = self.extension(f.sub)
            ext = frozenset(w for w in m.states if m.indist_class(f.coalition, w) <= goal)
        elif isinstance(f, Strat):
            m.require_agents(f.coalition)
            goal = self.extension(f.sub)
            profs = self.coalition_profiles(f.coalition)
            ext = frozenset(w for w in m.states if any(self._forces(w, s, goal) for s in profs))
        elif isinstance(f, Howto):
            m.require_agents(f.coalition)
            goal = self.extension(f.sub)
            profs = self.coalition_profiles(f.coalition)
            ext = frozenset(
                w
                for w in m.states
                if any(
                    all(self._forces(v, s, goal) for v in m.indist_class(f.coalition, w))
                    for s in profs
                )
            )
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[f] = ext
        return ext

    def check(self, w: str, f: Formula) -> Verdict:
        m = self.model
        m.require_state(w)
        m.require_agents(agents_of(f))
        holds = w in self.extension(f)
        if isinstance(f, Know):
            if holds:
                return Verdict(True)
            goal = self.extension(f.sub)
            bad = next(v for v in m.states if v in m.indist_class(f.coalition, w) and v not in goal)
            return Verdict(False, counterexample=(bad, None))
        if isinstance(f, (Strat, Howto)):
            goal = self.extension(f.sub)
            sources = [w] if isinstance(f, Strat) else [v for v in m.states if v in m.indist_class(f.coalition, w)]
            for s in self.coalition_profiles(f.coalition):
                if all(self._forces(v, s, goal) for v in sources):
                    return Verdict(True, witness=s)
            # refuted: report the first failure under the first profile
            s = self.coalition_profiles(f.coalition)[0]
            for v in sources:
                out = [u for u in m.states if u in m.successors(v, s) and u not in goal]
                if out:
                    return Verdict(False, counterexample=(v, out[0]))
        return Verdict(holds)

    def check_validity(self, f: Formula) -> Verdict:
        self.model.require_agents(agents_of(f))
        ext = self.extension(f)
        for w in self.model.states:
            if w not in ext:
                return Verdict(False, counterexample=(w, None))
        return Verdict(True)


def check(m: EpistemicTransitionSystem, w: str, f: Formula) -> Verdict:
    """Decide ``w |= f``.

    For a true S/H formula the verdict carries the lexicographically first
    witnessing profile; for a false K/S/H formula it names a refuting state and,
    for S/H, a bad successor reached under the first profile.
    """
    return Evaluator(m).check(w, f)


def extension(m: EpistemicTransitionSystem, f: Formula) -> frozenset[str]:
    m.require_agents(agents_of(f))
    return Evaluator(m).extension(f)


def check_validity(m: EpistemicTransitionSystem, f: Formula) -> Verdict:
    return Evaluator(m).check_validity(f)


def explain(m: EpistemicTransitionSystem, w: str, f: Formula) -> Iterator[str]:
    """Human-readable lines describing a verdict, used by the CLI."""
    v = check(m, w, f)
    yield f"{w} {'|=' if v.holds else '|/='} {format_formula(f)}"
    if v.witness is not None:
        yield "witness: " + (", ".join(f"{a}={x}" for a, x in sorted(v.witness.items())) or "(empty profile)")
    if v.counterexample is not None:
        a, b = v.counterexample
        yield f"counterexample: state {a}" + (f", successor {b}" if b is not None else "")
