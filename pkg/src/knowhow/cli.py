"""Command-line front end.

Exit codes: 0 success / property holds, 1 property fails or proof rejected,
2 usage or parse error, 3 model error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, proofcheck
from .formula import FormulaSyntaxError, format_formula, parse_formula
from .fuzz import FuzzConfig, fuzz_soundness
from .model import ModelError, load_model, validate_model
from .model import ModelSyntaxError, ModelValidationError
from .semantics import Evaluator, explain

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MODEL = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        self.code = code
        self.kind = kind
        super().__init__(message)


def _emit(obj) -> None:
    print(json.dumps(obj))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_USAGE, "io-error", f"{path}: {exc.strerror}") from exc


def _model(path: str):
    try:
        return load_model(_read(path))
    except ModelError as exc:
        raise CliError(EXIT_MODEL, "model-error", f"{path}: {exc}") from exc


def _formula(text: str):
    try:
        return parse_formula(text)
    except FormulaSyntaxError as exc:
        raise CliError(EXIT_USAGE, "parse-error", str(exc)) from exc


def cmd_check(args) -> int:
    m = _model(args.model)
    f = _formula(args.formula)
    try:
        v = Evaluator(m).check(args.state, f)
    except ModelError as exc:
        raise CliError(EXIT_MODEL, "model-error", str(exc)) from exc
    if args.json:
        _emit(
            {
                "state": args.state,
                "formula": format_formula(f),
                "holds": v.holds,
                "witness": v.witness,
                "counterexample": list(v.counterexample) if v.counterexample else None,
            }
        )
    else:
        for line in explain(m, args.state, f):
            print(line)
    return EXIT_OK if v.holds else EXIT_FAIL


def cmd_validate(args) -> int:
    text = _read(args.model)
    try:
        m = load_model(text)
        violations = validate_model(m)
    except ModelValidationError as exc:
        violations = exc.violations
    except ModelSyntaxError as exc:
        raise CliError(EXIT_MODEL, "model-error", f"{args.model}: {exc}") from exc
    if args.json:
        _emit({"model": args.model, "valid": not violations, "violations": [str(v) for v in violations]})
    else:
        if violations:
            for v in violations:
                print(v)
        else:
            print(f"{args.model}: valid")
    return EXIT_OK if not violations else EXIT_MODEL


def cmd_extension(args) -> int:
    m = _model(args.model)
    f = _formula(args.formula)
    try:
        ext = Evaluator(m).extension(f)
    except ModelError as exc:
        raise CliError(EXIT_MODEL, "model-error", str(exc)) from exc
    states = [s for s in m.states if s in ext]
    if args.json:
        _emit({"formula": format_formula(f), "states": states})
    else:
        print("{" + ", ".join(states) + "}")
    return EXIT_OK


def cmd_claims(args) -> int:
    try:
        results = corpus.assert_claims(args.fixture_dir)
    except (OSError, ValueError) as exc:
        raise CliError(EXIT_USAGE, "io-error", str(exc)) from exc
    passed = sum(r.passed for r in results)
    if args.json:
        _emit(
            {
                "passed": passed,
                "total": len(results),
                "rows": [
                    {
                        "fixture": r.claim.fixture,
                        "state": r.claim.state,
                        "formula": r.claim.formula_text,
                        "expected": r.claim.expected,
                        "actual": r.actual,
                        "passed": r.passed,
                        **({"error": r.error} if r.error else {}),
                    }
                    for r in results
                ],
            }
        )
    else:
        for r in results:
            mark = "PASS" if r.passed else "FAIL"
            got = r.error or str(r.actual).lower()
            print(f"{mark}  {r.claim.fixture:<3} {r.claim.state:<3} {r.claim.formula_text:<45} "
                  f"expected={str(r.claim.expected).lower():<5} got={got}")
        print(f"{passed}/{len(results)} claims pass")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_fuzz(args) -> int:
    try:
        cfg = FuzzConfig(
            seed=args.seed,
            num_models=args.models,
            formula_depth=args.depth,
            instances_per_schema=args.instances,
        )
    except ValueError as exc:
        raise CliError(EXIT_USAGE, "usage-error", str(exc)) from exc
    report = fuzz_soundness(cfg)
    if args.json:
        print(report.to_json())
    else:
        print(f"seed {cfg.seed}, {cfg.num_models} models, depth {cfg.formula_depth}, "
              f"{cfg.instances_per_schema} instances per schema")
        for name, tally in report.counts.items():
            print(f"  {name:<32} trials={tally.trials:<7} failures={tally.failures}")
        print(f"{report.total_failures} counterexample(s)")
        for f in report.failures[:10]:
            print(f"  {f['check']} model#{f['model_index']} state {f['state']}: {f['instance']}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_prove(args) -> int:
    try:
        derivations = proofcheck.parse_proofs(_read(args.proof))
    except proofcheck.ProofSyntaxError as exc:
        raise CliError(EXIT_USAGE, "parse-error", f"{args.proof}: {exc}") from exc
    db = proofcheck.TheoremDB()
    if not args.no_corpus:
        proofcheck.check_corpus(db=db)
    results = proofcheck.check_corpus(derivations, db)
    if args.json:
        _emit([{"theorem": r.name, "accepted": r.accepted, "line": r.line, "reason": r.reason} for r in results])
    else:
        for r in results:
            if r.accepted:
                print(f"{r.name}: accepted")
            else:
                where = f" at line {r.line}" if r.line is not None else ""
                print(f"{r.name}: rejected{where}: {r.reason}")
    return EXIT_OK if results and all(r.accepted for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    p = argparse.ArgumentParser(prog="knowhow", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="decide whether a formula holds at a state")
    s.add_argument("model")
    s.add_argument("--state", required=True)
    s.add_argument("--formula", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("validate", parents=[common], help="validate a model file")
    s.add_argument("model")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("extension", parents=[common], help="list the states where a formula holds")
    s.add_argument("model")
    s.add_argument("--formula", required=True)
    s.set_defaults(func=cmd_extension)

    s = sub.add_parser("claims", parents=[common], help="evaluate the claim table over the example systems")
    s.add_argument("fixture_dir", nargs="?", default=None, help="directory with T*.ets and claims.txt (default: bundled)")
    s.set_defaults(func=cmd_claims)

    s = sub.add_parser("fuzz", parents=[common], help="soundness fuzzing of the axioms and rules")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--models", type=int, default=500)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--instances", type=int, default=20)
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("prove", parents=[common], help="check a proof file")
    s.add_argument("proof")
    s.add_argument("--no-corpus", action="store_true", help="do not preload the bundled theorems")
    s.set_defaults(func=cmd_prove)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
