"""Command line interface.

Exit codes: 0 derivable (or: no countermodel, all checks passed), 1 not
derivable (or: countermodel found, some check failed), 2 usage or input
error, 3 search budget or enumeration ceiling exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from .countermodel import VerificationError, extract, verify
from .export import derivation_to_json, derivation_to_latex, hypersequent_to_json
from .formula import Formula, ParseError, parse, render
from .fuzz import DEFAULT_SEED, random_formulas
from .gseq import DEFAULT_BUDGET, BudgetExceeded, GDerivation, g_prove
from .hseq import DEFAULT_CEILING, HCeilingExceeded, HDerivation, Proof, h_prove
from .logics import CALCULUS_LOGICS, LogicId, NoCalculusError, axiom_corpus, cpr_instances, frame_conditions, separation_suite
from .semantics import (
    DEFAULT_MODEL_CEILING,
    ModelBudgetExceeded,
    ModelError,
    NotFoundUpToBound,
    find_semantic_countermodel,
    forces,
    model_from_json,
)

OK, NOT_DERIVABLE, USAGE, OVERFLOW = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _read_formulas(args) -> list[tuple[str, Formula]]:
    texts = list(args.formula or [])
    if args.file:
        try:
            lines = Path(args.file).read_text().splitlines()
        except OSError as e:
            raise _UsageError(f"cannot read {args.file}: {e.strerror}") from None
        for line in lines:
            line = line.split("#", 1)[0].strip()
            if line:
                texts.append(line)
    if not texts:
        raise _UsageError("no formula given")
    out = []
    for t in texts:
        try:
            out.append((t, parse(t)))
        except ParseError as e:
            raise _UsageError(f"parse error: {e}") from None
    return out


def _logic(name: str, need_calculus: bool) -> LogicId:
    try:
        logic = LogicId.parse(name)
    except ValueError as e:
        raise _UsageError(str(e)) from None
    if need_calculus and not logic.has_calculus:
        raise _UsageError(str(NoCalculusError(logic)))
    return logic


def _text_tree(d: GDerivation | HDerivation, resugar: bool) -> str:
    lines: list[str] = []
    stack = [(d, 0)]
    while stack:
        node, depth = stack.pop()
        label = node.rule.label if isinstance(node, GDerivation) else node.rule.describe()
        lines.append(f"{'  ' * depth}{node.conclusion.render('ascii', resugar)}    [{label}]")
        stack.extend((p, depth + 1) for p in reversed(node.premisses))
    return "\n".join(lines)


def _prove_one(text: str, f: Formula, logic: LogicId, args) -> tuple[int, dict, str]:
    doc: dict = {"formula": render(f), "logic": logic.value, "calculus": args.calculus}
    shown = render(f, resugar=args.resugar)
    if args.calculus == "g":
        try:
            d = g_prove(f, logic, budget=args.budget)
        except BudgetExceeded as e:
            doc["status"] = "overflow"
            return OVERFLOW, doc, f"{shown}: {e}"
        if d is None:
            doc["status"] = "not-derivable"
            return NOT_DERIVABLE, doc, f"{shown}: not derivable in G.{logic.name}"
        doc["status"] = "derivable"
        doc["derivation"] = derivation_to_json(d, logic)
        body = derivation_to_latex(d, args.resugar) if args.format == "latex" else _text_tree(d, args.resugar)
        return OK, doc, f"{shown}: derivable in G.{logic.name}\n{body}"
    try:
        r = h_prove(f, logic, ceiling=args.budget)
    except HCeilingExceeded as e:
        doc["status"] = "overflow"
        return OVERFLOW, doc, f"{shown}: {e}"
    doc["steps"] = r.steps
    if isinstance(r, Proof):
        doc["status"] = "derivable"
        doc["derivation"] = derivation_to_json(r.derivation, logic)
        if args.format == "latex":
            body = derivation_to_latex(r.derivation, args.resugar)
        else:
            body = _text_tree(r.derivation, args.resugar)
        return OK, doc, f"{shown}: derivable in H.{logic.name}\n{body}"
    h = r.hypersequent
    doc["status"] = "not-derivable"
    doc["hypersequent"] = hypersequent_to_json(h)
    doc["trace"] = r.trace
    model = extract(h, logic)
    report = verify(h, model, logic, f)
    doc["countermodel"] = report.to_json()
    style = "latex" if args.format == "latex" else "ascii"
    body = "\n".join(
        [
            "saturated hypersequent:",
            *(f"  {n}: {c.render(style, args.resugar)}" for n, c in enumerate(h.components)),
            "countermodel (verified):",
            *("  " + line for line in report.summary().splitlines()),
        ]
    )
    return NOT_DERIVABLE, doc, f"{shown}: not derivable in H.{logic.name}\n{body}"


def cmd_prove(args) -> int:
    logic = _logic(args.logic, True)
    status = OK
    docs = []
    for text, f in _read_formulas(args):
        code, doc, out = _prove_one(text, f, logic, args)
        status = max(status, code)
        docs.append(doc)
        if args.format != "json":
            print(out)
    if args.format == "json":
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    return status


def cmd_check(args) -> int:
    try:
        data = json.loads(Path(args.model).read_text())
    except OSError as e:
        raise _UsageError(f"cannot read {args.model}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise _UsageError(f"{args.model}: invalid JSON: {e}") from None
    try:
        m = model_from_json(data)
    except ModelError as e:
        raise _UsageError(f"{args.model}: {e}") from None
    status = OK
    docs = []
    for text, f in _read_formulas(args):
        values = [forces(m, w, f) for w in m.W]
        if not all(values):
            status = NOT_DERIVABLE
        docs.append({"formula": render(f), "worlds": {str(w): v for w, v in enumerate(values)}, "valid": all(values)})
        if args.format != "json":
            print(render(f, resugar=args.resugar))
            for w, v in enumerate(values):
                print(f"  world {w}: {'true' if v else 'false'}")
    if args.format == "json":
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    return status


def cmd_oracle(args) -> int:
    logic = _logic(args.logic, False)
    conds = frame_conditions(logic)
    status = OK
    docs = []
    for text, f in _read_formulas(args):
        try:
            res = find_semantic_countermodel(f, conds, args.max_worlds, ceiling=args.ceiling)
        except ModelBudgetExceeded as e:
            print(f"{render(f)}: {e}", file=sys.stderr)
            return OVERFLOW
        shown = render(f, resugar=args.resugar)
        if isinstance(res, NotFoundUpToBound):
            docs.append({"formula": render(f), "found": False, "maxWorlds": res.max_worlds, "modelsChecked": res.models_checked})
            if args.format != "json":
                print(f"{shown}: no countermodel with at most {res.max_worlds} worlds ({res.models_checked} models checked)")
        else:
            status = NOT_DERIVABLE
            docs.append({"formula": render(f), "found": True, "model": res.model.to_json(), "world": res.world})
            if args.format != "json":
                print(f"{shown}: countermodel, false at world {res.world}")
                print("  " + str(res.model).replace("\n", "\n  "))
    if args.format == "json":
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    return status


def run_corpus(logic: LogicId, budget: int = DEFAULT_BUDGET) -> list[tuple[str, str, bool]]:
    """Check every expectation for ``logic``; returns ``(kind, formula, passed)``."""
    rows = []
    for f in axiom_corpus(logic):
        ok = h_prove(f, logic).proved and g_prove(f, logic, budget) is not None
        rows.append(("axiom", render(f, resugar=True), ok))
    for _, concl in cpr_instances():
        ok = h_prove(concl, logic).proved and g_prove(concl, logic, budget) is not None
        rows.append(("cpr", render(concl, resugar=True), ok))
    for item in separation_suite():
        if item.weaker is not logic:
            continue
        r = h_prove(item.formula, logic)
        ok = not r.proved and g_prove(item.formula, logic, budget) is None
        if ok:
            try:
                verify(r.hypersequent, extract(r.hypersequent, logic), logic, item.formula)
            except VerificationError:
                ok = False
        rows.append((f"non-theorem ({item.schema.value})", render(item.formula, resugar=True), ok))
    return rows


def cmd_corpus(args) -> int:
    logics = CALCULUS_LOGICS if args.logic == "all" else (_logic(args.logic, True),)
    failed = 0
    docs = []
    for logic in logics:
        t = time.perf_counter()
        rows = run_corpus(logic, args.budget)
        bad = [r for r in rows if not r[2]]
        failed += len(bad)
        docs.append({"logic": logic.value, "checked": len(rows), "failed": [r[1] for r in bad], "seconds": round(time.perf_counter() - t, 3)})
        if args.format != "json":
            print(f"{logic.name}: {len(rows) - len(bad)}/{len(rows)} expectations met")
            for kind, text, _ in bad:
                print(f"  FAIL {kind}: {text}")
    if args.format == "json":
        print(json.dumps(docs, indent=2))
    return OK if failed == 0 else NOT_DERIVABLE


def cmd_fuzz(args) -> int:
    logics = CALCULUS_LOGICS if args.logic == "all" else (_logic(args.logic, True),)
    formulas = list(random_formulas(args.count, args.max_size, args.seed))
    disagreements = 0
    for logic in logics:
        bad = []
        for f in formulas:
            g = g_prove(f, logic, args.budget) is not None
            r = h_prove(f, logic)
            if g != r.proved:
                bad.append(f)
            elif not r.proved:
                verify(r.hypersequent, extract(r.hypersequent, logic), logic, f)
        disagreements += len(bad)
        print(f"{logic.name}: {len(formulas)} formulas, {len(bad)} disagreements")
        for f in bad:
            print(f"  {render(f)}")
    return OK if disagreements == 0 else NOT_DERIVABLE


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpn", description="Decide comparative plausibility logics over neighbourhood models.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, logic_default="n", all_ok=False):
        sp.add_argument("--logic", default=logic_default, help="n, nn, nt, nw, nc, na, nna" + (" or all" if all_ok else ""))
        sp.add_argument("--format", choices=("text", "json", "latex"), default="text")
        sp.add_argument("--resugar", action="store_true", help="print ~, &, |, top where possible")

    def inputs(sp):
        sp.add_argument("formula", nargs="*", help="formula text")
        sp.add_argument("--file", help="read formulas from a file, one per line, '#' starts a comment")

    sp = sub.add_parser("prove", help="decide derivability")
    common(sp)
    inputs(sp)
    sp.add_argument("--calculus", choices=("g", "h"), default="h")
    sp.add_argument("--budget", type=int, default=None, help="expansion budget (g) or safety ceiling (h)")
    sp.set_defaults(run=cmd_prove)

    sp = sub.add_parser("check", help="evaluate formulas in a model file")
    sp.add_argument("model", help="model JSON file")
    inputs(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--resugar", action="store_true")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("oracle", help="search for a small countermodel by enumeration")
    common(sp)
    inputs(sp)
    sp.add_argument("--max-worlds", type=int, default=2)
    sp.add_argument("--ceiling", type=int, default=DEFAULT_MODEL_CEILING, help="maximum number of models")
    sp.set_defaults(run=cmd_oracle)

    sp = sub.add_parser("corpus", help="run the axiom corpus and separation suite")
    common(sp, all_ok=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(run=cmd_corpus)

    sp = sub.add_parser("fuzz", help="compare both calculi on random formulas")
    sp.add_argument("--logic", default="all")
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--max-size", type=int, default=8)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(run=cmd_fuzz)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if getattr(args, "budget", 0) is None:
        args.budget = DEFAULT_BUDGET if args.calculus == "g" else DEFAULT_CEILING
    try:
        return args.run(args)
    except _UsageError as e:
        print(f"cpn: error: {e}", file=sys.stderr)
        return USAGE
    except (BudgetExceeded, HCeilingExceeded, ModelBudgetExceeded) as e:
        print(f"cpn: {e}", file=sys.stderr)
        return OVERFLOW


if __name__ == "__main__":
    sys.exit(main())
