"""Comparative plausibility logics over neighbourhood models.

Parsing, model checking, two proof calculi with proof search, and
countermodel extraction for the logics N, NN, NT, NW, NC, NA and NNA.
"""

from .countermodel import ExtractionReport, VerificationError, extract, refute, verify
from .formula import BOT, TOP, Atom, Bot, CmpPl, Formula, Imp, ParseError, parse, render
from .gseq import BudgetExceeded, GDerivation, Sequent, check_derivation, g_prove
from .hseq import Block, Component, HDerivation, Hypersequent, Proof, Refuted, h_prove, is_saturated
from .logics import AxiomSchema, LogicId, axiom_corpus, frame_conditions, instantiate
from .semantics import FrameCondition, NeighbourhoodModel, check_condition, forces, valid_in_model

__all__ = [
    "Atom", "Bot", "Imp", "CmpPl", "Formula", "BOT", "TOP", "ParseError", "parse", "render",
    "NeighbourhoodModel", "FrameCondition", "forces", "valid_in_model", "check_condition",
    "LogicId", "AxiomSchema", "frame_conditions", "instantiate", "axiom_corpus",
    "Sequent", "GDerivation", "BudgetExceeded", "g_prove", "check_derivation",
    "Block", "Component", "Hypersequent", "HDerivation", "Proof", "Refuted", "h_prove", "is_saturated",
    "ExtractionReport", "VerificationError", "extract", "verify", "refute",
]
