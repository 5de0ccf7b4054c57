"""Bundled healthcare case study: a Patient Context and a Patient Model.

The protocol tables in ``models/`` are authored example instantiations at
the dimensions of the original setting (27 readings, 270 context states,
18 context outputs, 1944 patient states); they are not clinical data.
Verification outcomes are frozen under ``golden/``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple, Optional

import numpy as np

from ..analysis import (
    correct_diagnosis_set,
    healthy_set,
    is_global_attractor,
    limit_cycles,
    reconstructibility,
)
from ..dsl import ModelAst, compile_model, interpret, parse
from ..feedback import ClosedLoop, StateSet, compose, reduce_plant
from ..network import Bcn, Bn
from ..stp import CanonicalVector, LogicalMatrix

__all__ = [
    "CD_PREDICATE",
    "H_PREDICATE",
    "LEVELS",
    "INPUT_COMBINATIONS",
    "ASSUMPTIONS",
    "CaseStudyBundle",
    "Targets",
    "model_source",
    "load_bundle",
    "load_case_study",
    "triage_map",
    "triage_table",
    "initial_context_state",
    "closed_loop",
    "redirect_out_of",
    "verify",
    "golden",
]

CD_PREDICATE = "(S1 == H && X1 == H) || (S1 == C && X1 == C) || (S1 == I && X1 == I) || (S1 == LC && X1 == LC)"
H_PREDICATE = "S1 == H && X1 == H"

LEVELS = ("low", "mid", "high")

# All 27 readings (bt, bp, hf) in canonical order, bt most significant.
INPUT_COMBINATIONS = tuple(itertools.product(LEVELS, repeat=3))

ASSUMPTIONS = (
    "Protocol tables are authored examples consistent with the structural constraints, not clinical rules.",
    "Diagnosis X1 is read from (bt, hf): H=(mid, mid), C=(mid, high), I=(high, high), LC=(low, low) with bp low; anything else is UO.",
    "A therapy improves the patient by one level once it has been kept at least two consecutive steps (S3 != 1).",
    "Life-critical patients improve only under Th5 in icu; ill patients under Th3/Th4; convalescent under Th1/Th2.",
    "Patients never worsen and a healthy patient stays healthy; death is not a state.",
    "Th4 and Th5 are given only in icu; home goes only with Th0 or Th1.",
    "A healthy patient's blood pressure alternates between mid and high, giving a two-state limit cycle inside H.",
    "Counters X2 and S3 saturate at ge3.",
    "All 18 therapy/location outputs are kept; from the first step on only Th0/home, Th1/home, Th2/ward, Th3/ward, Th4/icu, Th5/icu are emitted.",
    "Readings are enumerated as the full 3x3x3 product; rows 10-12 are (mid, low, *).",
)


class Targets(NamedTuple):
    cd_predicate: str
    h_predicate: str


@dataclass(frozen=True)
class CaseStudyBundle:
    context_source: str
    plant_source: str
    cd_predicate: str
    h_predicate: str
    triage_map: dict = field(repr=False)
    assumptions: tuple = ASSUMPTIONS


def _models():
    return resources.files(__package__) / "models"


def model_source(name: str) -> str:
    """Text of ``models/<name>.bcn`` (``patient_context``, ``patient_model``, ``patient_model_mutant``)."""
    return (_models() / f"{name}.bcn").read_text(encoding="utf-8")


def golden(name: str):
    return json.loads((resources.files(__package__) / "golden" / f"{name}.json").read_text(encoding="utf-8"))


_AST_CACHE: dict[str, ModelAst] = {}
_BCN_CACHE: dict[str, Bcn] = {}


def _ast(name: str) -> ModelAst:
    if name not in _AST_CACHE:
        _AST_CACHE[name] = parse(model_source(name))
    return _AST_CACHE[name]


def _compiled(name: str) -> Bcn:
    if name not in _BCN_CACHE:
        _BCN_CACHE[name] = compile_model(_ast(name))
    return _BCN_CACHE[name]


def triage_map(reading) -> str:
    """Initial diagnosis X1(0) from the admission reading ``(bt, bp, hf)``.

    Uses the context's own diagnosis rule, which reads only the inputs.
    """
    if isinstance(reading, dict):
        reading = (reading["U1"], reading["U2"], reading["U3"])
    bt, bp, hf = reading
    ast = _ast("patient_context")
    dummy = {d.name: d.values[0] for d in ast.states}
    nxt, _ = interpret(ast, {"U1": bt, "U2": bp, "U3": hf}, dummy)
    return nxt["X1"]


def triage_table() -> list[dict]:
    return [{"row": k, "bt": r[0], "bp": r[1], "hf": r[2], "X1": triage_map(r)} for k, r in enumerate(INPUT_COMBINATIONS, start=1)]


def initial_context_state(reading) -> CanonicalVector:
    """x(0): diagnosis from triage, counter 1, therapy Th0, location home."""
    ast = _ast("patient_context")
    init = ast.initial_state()
    init["X1"] = triage_map(reading)
    return _compiled("patient_context").state_space.encode(init)


def load_bundle() -> CaseStudyBundle:
    return CaseStudyBundle(
        model_source("patient_context"),
        model_source("patient_model"),
        CD_PREDICATE,
        H_PREDICATE,
        {row["bt"] + "," + row["bp"] + "," + row["hf"]: row["X1"] for row in triage_table()},
    )


def load_case_study(mutant: bool = False) -> tuple[Bcn, Bcn, Targets]:
    """Compiled ``(context, plant, targets)``; ``mutant`` swaps in the relapse plant."""
    plant = _compiled("patient_model_mutant" if mutant else "patient_model")
    return _compiled("patient_context"), plant, Targets(CD_PREDICATE, H_PREDICATE)


def closed_loop(mutant: bool = False) -> ClosedLoop:
    context, plant, _ = load_case_study(mutant)
    return compose(context, plant)


def redirect_out_of(net: Bn, target: StateSet) -> tuple[Bn, int, int]:
    """Redirect one transition column so that ``target`` stops being a global attractor.

    Picks the least state ``w`` outside ``target``, follows it to the point
    ``e`` where it first enters a cycle, and points ``e`` back at ``w``.
    Returns the mutated network with ``(e, w)``.
    """
    inside = target.mask()
    outside = np.flatnonzero(~inside)
    if outside.size == 0:
        raise ValueError("target covers the whole space")
    succ = net.successors - 1
    w = int(outside[0])
    seen, path = {}, []
    v = w
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = int(succ[v])
    entry = v
    idx = net.successors.copy()
    idx[entry] = w + 1
    mutated = Bn(net.state_space, LogicalMatrix(net.n_states, net.n_states, idx), net.output_map,
                 net.output_space, (net.name or "bn") + "_redirected")
    return mutated, entry + 1, w + 1


def verify(mutant: bool = False, cl: Optional[ClosedLoop] = None) -> dict:
    """Run both attractor checks on the shipped models; a JSON-ready summary."""
    cl = cl or closed_loop(mutant)
    bn = cl.bn
    cd = correct_diagnosis_set(cl)
    h = healthy_set(cl)
    cd_report = is_global_attractor(bn, cd)
    h_report = is_global_attractor(bn, h)
    recon = reconstructibility(reduce_plant(cl.plant))
    cycles = limit_cycles(bn)
    return {
        "dims": {
            "N_u": cl.context.n_inputs,
            "N_x": cl.context.n_states,
            "N_y": cl.context.n_outputs,
            "N_s": cl.plant.n_states,
            "closed_loop": cl.n_states,
        },
        "correct_diagnosis": {"size": len(cd), **cd_report.to_dict()},
        "successful_therapy": {"size": len(h), **h_report.to_dict()},
        "healthy_subset_of_correct": h.issubset(cd),
        "plant_reconstructibility": recon.to_dict(),
        "limit_cycles": {"count": len(cycles), "lengths": sorted({len(c) for c in cycles})},
        "verdict": bool(cd_report.is_global_attractor and h_report.is_global_attractor and h.issubset(cd)),
    }
