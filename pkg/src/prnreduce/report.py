"""Machine-readable reduction and cover reports.

Reports are plain dicts with a fixed key order so that ``json.dumps`` output
is byte-reproducible. Timing is only included on request.
"""

from __future__ import annotations

import json
import math
from importlib import resources

from .cover import RegulationCoverSet, format_partial, spec_count
from .dynamics import Objective
from .network import PRN, regulator_states
from .reduction import DPRN, PartialTransition, ReductionResult, enabled_count

SCHEMA_VERSION = 1


def render_limit(value) -> int | str:
    if value == math.inf:
        return "+inf"
    if value == -math.inf:
        return "-inf"
    return int(value)


def parse_limit(value) -> float | int:
    if value == "+inf":
        return math.inf
    if value == "-inf":
        return -math.inf
    return int(value)


def objective_label(prn: PRN, obj: Objective) -> str:
    return f"{prn.names[obj.component]}:{obj.start}~>{obj.end}"


def pt_json(prn: PRN, pt: PartialTransition) -> dict:
    ch = pt.change
    return {
        "component": prn.names[ch.component],
        "from": ch.start,
        "to": ch.end,
        "regulators": [prn.names[u] for u in prn.regulators(ch.component)],
        "partial_state": list(pt.partial),
        "text": format_partial(pt.partial),
    }


def limits_json(dprn: DPRN) -> dict:
    prn = dprn.prn
    per_state = []
    for v in range(prn.n):
        entries = []
        for w in regulator_states(prn, v):
            p = prn.parameter_index(v, w)
            entries.append({
                "regulator_state": list(w),
                "activation": render_limit(dprn.activation[p]),
                "inhibition": render_limit(dprn.inhibition[p]),
            })
        per_state.append({
            "component": prn.names[v],
            "regulators": [prn.names[u] for u in prn.regulators(v)],
            "entries": entries,
        })
    act, inh = dprn.component_limits()
    return {
        "per_component": {
            "activation": {n: render_limit(a) for n, a in zip(prn.names, act)},
            "inhibition": {n: render_limit(i) for n, i in zip(prn.names, inh)},
        },
        "per_state": per_state,
    }


def cover_json(prn: PRN, cover: RegulationCoverSet, enabling_states: int | None = None) -> dict:
    ch = cover.change
    n = len(prn.regulators(ch.component))
    out = {
        "component": prn.names[ch.component],
        "from": ch.start,
        "to": ch.end,
        "regulators": [prn.names[u] for u in prn.regulators(ch.component)],
        "members": [format_partial(p) for p in cover.members],
        "spec_count": spec_count(cover.members),
    }
    if enabling_states is not None:
        out["enabling_states"] = enabling_states
        out["concrete_spec_count"] = enabling_states * n
    return out


def reduction_report(result: ReductionResult, lattice0, mode: str, parametrisations: list[str] | None = None,
                     timing: dict | None = None) -> dict:
    prn = result.dprn.prn
    objectives = []
    for obj in result.objectives:
        rule, parent = result.provenance[obj]
        objectives.append({
            "objective": objective_label(prn, obj),
            "component": prn.names[obj.component],
            "from": obj.start,
            "to": obj.end,
            "rule": rule,
            "parent": None if parent is None else objective_label(prn, parent),
            "valid_transitions": len(result.valid.get(obj, [])),
        })
    covers = []
    for ch, cs in result.cover_sets.items():
        covers.append(cover_json(prn, cs))
    g, top = result.goal
    report = {
        "schema_version": SCHEMA_VERSION,
        "components": [{"name": n, "max": m} for n, m in prn.components],
        "initial": {n: k for n, k in zip(prn.names, result.initial)},
        "goal": {"component": prn.names[g], "value": top},
        "mode": mode,
        "parametrisations": parametrisations,
        "objectives": objectives,
        "valid_partial_transitions": [pt_json(prn, pt) for pt in result.valid_transitions],
        "cover_sets": covers,
        "limits": limits_json(result.dprn),
        "enabled_transitions": {
            "before": enabled_count(result.source, lattice0),
            "after": enabled_count(result.dprn, lattice0),
        },
        "stats": {
            "validity_queries": result.validity_queries,
            "configurations": result.configurations,
        },
    }
    if timing is not None:
        report["timing"] = {k: round(v, 6) for k, v in timing.items()}
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def load_schema(name: str = "report.schema.json") -> dict:
    return json.loads(resources.files("prnreduce").joinpath("data", name).read_text(encoding="utf-8"))


def validate_report(report: dict, name: str = "report.schema.json") -> None:
    """Raise ``jsonschema.ValidationError`` if ``report`` does not match the schema."""
    import jsonschema

    jsonschema.validate(report, load_schema(name))
