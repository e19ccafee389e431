"""JSON and LaTeX output for sequents, hypersequents, derivations and models.

LaTeX derivations use the ``\\infer`` macro of ``proof.sty``.  JSON documents
validate against the schemas shipped in ``cpnlogic/schemas``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from .formula import CmpPl, Formula, parse, render
from .gseq import GDerivation, GRuleInstance, Sequent
from .hseq import Block, Component, HDerivation, HRuleInstance, Hypersequent
from .logics import LogicId

__all__ = [
    "SCHEMAS",
    "load_schema",
    "validate",
    "sequent_to_json",
    "hypersequent_to_json",
    "hypersequent_from_json",
    "derivation_to_json",
    "derivation_from_json",
    "derivation_to_latex",
]

SCHEMAS = ("model", "hypersequent", "derivation", "report")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in SCHEMAS:
        raise KeyError(f"no schema named {name!r}")
    text = resources.files("cpnlogic").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    schemas = [load_schema(n) for n in SCHEMAS]
    return Registry().with_resources((s["$id"], Resource.from_contents(s)) for s in schemas)


def validate(doc: dict, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` violates schema ``name``."""
    validator = jsonschema.Draft202012Validator(load_schema(name), registry=_registry())
    validator.validate(doc)


# ---------------------------------------------------------------------------
# JSON


def _f(f: Formula) -> str:
    return render(f)


def sequent_to_json(s: Sequent) -> dict:
    return {"ante": [_f(a) for a in s.ante], "succ": [_f(a) for a in s.succ]}


def _block_json(b: Block) -> dict:
    return {"sigma": [_f(x) for x in b.sigma], "head": _f(b.head)}


def hypersequent_to_json(h: Hypersequent) -> dict:
    return {
        "components": [
            {
                "ante": [_f(a) for a in c.ante],
                "succ": [_f(a) for a in c.succ],
                "blocks": [_block_json(b) for b in c.blocks],
            }
            for c in h.components
        ]
    }


def hypersequent_from_json(doc: dict | str) -> Hypersequent:
    if isinstance(doc, str):
        doc = json.loads(doc)
    validate(doc, "hypersequent")
    return Hypersequent(
        Component(
            [parse(a) for a in c["ante"]],
            [parse(a) for a in c["succ"]],
            [Block([parse(x) for x in b["sigma"]], parse(b["head"])) for b in c["blocks"]],
        )
        for c in doc["components"]
    )


def _g_node(d: GDerivation) -> dict:
    r = d.rule
    return {
        "conclusion": sequent_to_json(d.conclusion),
        "rule": r.rule,
        "principal": None if r.principal is None else _f(r.principal),
        "selection": [_f(c) for c in r.selection],
        "premisses": [_g_node(p) for p in d.premisses],
    }


def _h_node(d: HDerivation) -> dict:
    r = d.rule
    if isinstance(r.principal, Block):
        principal = _block_json(r.principal)
    else:
        principal = None if r.principal is None else _f(r.principal)
    return {
        "conclusion": hypersequent_to_json(d.conclusion),
        "rule": r.rule,
        "component": r.k,
        "principal": principal,
        "block": None if r.block is None else _block_json(r.block),
        "target": r.target,
        "premisses": [_h_node(p) for p in d.premisses],
    }


def derivation_to_json(d: GDerivation | HDerivation, logic: LogicId) -> dict:
    if isinstance(d, GDerivation):
        return {"calculus": "g", "logic": logic.value, "root": _g_node(d)}
    return {"calculus": "h", "logic": logic.value, "root": _h_node(d)}


def _block_from(doc: dict) -> Block:
    return Block([parse(x) for x in doc["sigma"]], parse(doc["head"]))


def _g_from(node: dict) -> GDerivation:
    c = node["conclusion"]
    sel = tuple(parse(x) for x in node.get("selection", []))
    if any(not isinstance(x, CmpPl) for x in sel):
        raise ValueError("selection entries must be plausibility formulas")
    p = node.get("principal")
    inst = GRuleInstance(node["rule"], None if p is None else parse(p), sel)
    return GDerivation(
        Sequent([parse(a) for a in c["ante"]], [parse(a) for a in c["succ"]]),
        inst,
        [_g_from(x) for x in node["premisses"]],
    )


def _h_from(node: dict) -> HDerivation:
    p = node.get("principal")
    if isinstance(p, dict):
        principal = _block_from(p)
    else:
        principal = None if p is None else parse(p)
    b = node.get("block")
    inst = HRuleInstance(
        node["rule"], node["component"], principal, None if b is None else _block_from(b), node.get("target")
    )
    c = node["conclusion"]
    h = Hypersequent(
        Component(
            [parse(a) for a in x["ante"]],
            [parse(a) for a in x["succ"]],
            [_block_from(y) for y in x["blocks"]],
        )
        for x in c["components"]
    )
    return HDerivation(h, inst, [_h_from(x) for x in node["premisses"]])


def derivation_from_json(doc: dict | str) -> tuple[GDerivation | HDerivation, LogicId]:
    """Load a derivation; replay it with the checker of its calculus."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    validate(doc, "derivation")
    logic = LogicId.parse(doc["logic"])
    if doc["calculus"] == "g":
        return _g_from(doc["root"]), logic
    return _h_from(doc["root"]), logic


# ---------------------------------------------------------------------------
# LaTeX

_RULE_TEX = {
    "init": r"\mathsf{init}",
    "botL": r"\bot_L",
    "impL": r"\to_L",
    "impR": r"\to_R",
    "cmpL": r"\preccurlyeq_L",
    "cmpR": r"\preccurlyeq_R",
    "jp": r"\mathsf{jp}",
    "W0": r"\mathsf{W}_0",
    "C0": r"\mathsf{C}_0",
    "AL": r"\mathsf{A}_L",
    "AR": r"\mathsf{A}_R",
    "NA": r"\mathsf{N^A}",
}


def _rule_tex(name: str, n: int | None) -> str:
    base = _RULE_TEX.get(name, rf"\mathsf{{{name}}}")
    return base if n is None else f"{base}_{{{n}}}"


def derivation_to_latex(d: GDerivation | HDerivation, resugar: bool = True) -> str:
    """Nested ``\\infer`` commands for ``proof.sty``, wrapped in math mode."""

    def go(node, indent: int) -> str:
        pad = "  " * indent
        if isinstance(node, GDerivation):
            indexed = node.rule.rule in ("CP", "N", "T", "W", "A", "NA")
            label = _rule_tex(node.rule.rule, node.rule.n if indexed else None)
        else:
            label = _rule_tex(node.rule.rule, None)
        concl = node.conclusion.render("latex", resugar)
        if not node.premisses:
            return f"{pad}\\infer[{label}]{{{concl}}}{{}}"
        inner = f"\n{pad}  &\n".join(go(p, indent + 1) for p in node.premisses)
        return f"{pad}\\infer[{label}]{{{concl}}}{{\n{inner}\n{pad}}}"

    return "$$\n" + go(d, 0) + "\n$$"
