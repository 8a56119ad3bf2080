"""Line-oriented model files and their JSON mirror.

Text grammar, one declaration per line (``#`` starts a comment)::

    component <name> <max>
    influence <u> -> <v> [+|-][o]
    param <P-name> <v> | <u1>=<k1>,... | <value>
    initial <v1>=<k1>,...
    goal <v>=<k>

Every named parametrisation must list one row per parameter.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .network import PRN, ModelError, State, regulator_states, validate_model
from .parametrisation import ParametrisationSet, initial_lattice, lattice_of, satisfies_constraints

KEYWORDS = ("component", "influence", "param", "initial", "goal")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str = "<model>"):
        self.line, self.column, self.message = line, column, message
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


@dataclass
class Model:
    prn: PRN
    parametrisations: dict[str, tuple[int, ...]] = field(default_factory=dict)
    initial: State | None = None
    goal: tuple[int, int] | None = None

    def parametrisation_set(self) -> ParametrisationSet | None:
        if not self.parametrisations:
            return None
        return ParametrisationSet(self.prn, self.parametrisations.values())

    def lattice(self):
        """Bounds of the named parametrisations, or the full admissible box if none are given."""
        if not self.parametrisations:
            return initial_lattice(self.prn)
        return lattice_of(self.parametrisations.values(), self.prn)

    def __eq__(self, other):
        return (isinstance(other, Model) and self.prn == other.prn
                and self.parametrisations == other.parametrisations
                and self.initial == other.initial and self.goal == other.goal)


def _assignments(text: str, line: int, col: int, src: str) -> list[tuple[str, int, int]]:
    """Parse ``u=k,...`` into (name, value, column) triples."""
    out = []
    if not text.strip():
        return out
    pos = 0
    for part in text.split(","):
        c = col + pos + (len(part) - len(part.lstrip()))
        pos += len(part) + 1
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*=\s*(\d+)\s*", part)
        if not m:
            raise ParseError(f"expected <name>=<value>, got {part.strip()!r}", line, c, src)
        out.append((m.group(1), int(m.group(2)), c))
    return out


def parse_model(text: str, source: str = "<model>") -> Model:
    components: list[tuple[str, int]] = []
    comp_line: dict[str, int] = {}
    influences: list[tuple[str, str, str, int]] = []
    params: dict[str, dict] = {}
    param_order: list[str] = []
    initial = goal = None

    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        words = body.split()
        kw = words[0]
        col = indent + 1
        if kw not in KEYWORDS:
            raise ParseError(f"unknown declaration {kw!r}", ln, col, source)
        rest = body[indent + len(kw):]
        rest_col = indent + len(kw) + 1

        if kw == "component":
            m = re.fullmatch(r"\s+(\S+)\s+(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'component <name> <max>'", ln, col, source)
            name, mx = m.group(1), m.group(2)
            if not _NAME.match(name):
                raise ParseError(f"invalid component name {name!r}", ln, rest_col + m.start(1), source)
            if not mx.isdigit():
                raise ParseError(f"maximum value must be an integer, got {mx!r}", ln,
                                 rest_col + m.start(2), source)
            if name in comp_line:
                raise ParseError(f"duplicate component {name!r} (first declared on line {comp_line[name]})",
                                 ln, rest_col + m.start(1), source)
            comp_line[name] = ln
            components.append((name, int(mx)))

        elif kw == "influence":
            m = re.fullmatch(r"\s+(\S+)\s*->\s*(\S+)(?:\s+(\S+))?\s*", rest)
            if not m:
                raise ParseError("expected 'influence <u> -> <v> [+|-][o]'", ln, col, source)
            labels = m.group(3) or ""
            if not re.fullmatch(r"[+\-o]*", labels) or len(set(labels)) != len(labels):
                raise ParseError(f"invalid constraint labels {labels!r} (expected [+|-][o])", ln,
                                 rest_col + m.start(3), source)
            if "+" in labels and "-" in labels:
                raise ParseError(f"influence {m.group(1)} -> {m.group(2)}: conflicting monotonicity (+ and -)",
                                 ln, rest_col + m.start(3), source)
            if any(u == m.group(1) and v == m.group(2) for u, v, _, _ in influences):
                raise ParseError(f"duplicate influence {m.group(1)} -> {m.group(2)}", ln, col, source)
            influences.append((m.group(1), m.group(2), labels, ln))

        elif kw == "param":
            m = re.fullmatch(r"\s+(\S+)\s+(\S+)\s*\|([^|]*)\|\s*(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'param <P-name> <v> | <u>=<k>,... | <value>'", ln, col, source)
            pname, target, value = m.group(1), m.group(2), m.group(4)
            if not _NAME.match(pname):
                raise ParseError(f"invalid parametrisation name {pname!r}", ln, rest_col + m.start(1), source)
            if not value.isdigit():
                raise ParseError(f"parameter value must be an integer, got {value!r}", ln,
                                 rest_col + m.start(4), source)
            assigns = _assignments(m.group(3), ln, rest_col + m.start(3), source)
            if pname not in params:
                params[pname] = {}
                param_order.append(pname)
            params[pname].setdefault("rows", []).append((target, assigns, int(value), ln, rest_col + m.start(2)))

        elif kw == "initial":
            if initial is not None:
                raise ParseError("duplicate 'initial' declaration", ln, col, source)
            initial = (_assignments(rest, ln, rest_col, source), ln)

        elif kw == "goal":
            if goal is not None:
                raise ParseError("duplicate 'goal' declaration", ln, col, source)
            assigns = _assignments(rest, ln, rest_col, source)
            if len(assigns) != 1:
                raise ParseError("expected 'goal <v>=<k>'", ln, col, source)
            goal = (assigns[0], ln)

    # semantic checks with line information
    for u, v, _, ln in influences:
        for end in (u, v):
            if end not in comp_line:
                raise ParseError(f"unknown component {end!r}", ln, None, source)
    prn = PRN.build(
        components,
        [(u, v) for u, v, _, _ in influences],
        {(u, v): frozenset(labels) for u, v, labels, _ in influences if labels},
        validate=False,
    )
    violations = validate_model(prn)
    if violations:
        raise ParseError("; ".join(violations), None, None, source)

    parametrisations = {}
    for pname in param_order:
        values: dict[int, int] = {}
        for target, assigns, value, ln, c in params[pname]["rows"]:
            if target not in prn.index:
                raise ParseError(f"unknown component {target!r}", ln, c, source)
            v = prn.index[target]
            regs = [prn.names[u] for u in prn.regulators(v)]
            given = {name: (k, cc) for name, k, cc in assigns}
            if len(given) != len(assigns) or sorted(given) != sorted(regs):
                raise ParseError(f"parameter of {target!r} must assign exactly its regulators {regs}",
                                 ln, c, source)
            omega = []
            for name in regs:
                k, cc = given[name]
                if k > prn.max_values[prn.index[name]]:
                    raise ParseError(f"value {k} outside the domain of {name!r}", ln, cc, source)
                omega.append(k)
            if value > prn.max_values[v]:
                raise ParseError(f"parameter value {value} outside the domain of {target!r}", ln, c, source)
            p = prn.parameter_index(v, tuple(omega))
            if p in values:
                raise ParseError(f"duplicate parameter row for {pname} {target} {prn.format_omega(v, omega)}",
                                 ln, c, source)
            values[p] = value
        if len(values) != prn.num_parameters:
            missing = [prn.names[v] + prn.format_omega(v, w)
                       for p, (v, w) in enumerate(prn.parameters) if p not in values]
            raise ParseError(f"parametrisation {pname!r} misses {len(missing)} parameter(s): "
                             + ", ".join(missing[:5]), None, None, source)
        P = tuple(values[p] for p in range(prn.num_parameters))
        if not satisfies_constraints(P, prn):
            raise ParseError(f"parametrisation {pname!r} violates the influence constraints",
                             params[pname]["rows"][0][3], None, source)
        parametrisations[pname] = P

    x = None
    if initial is not None:
        assigns, ln = initial
        x = _resolve_state(prn, assigns, ln, source)
    g = None
    if goal is not None:
        (name, k, c), ln = goal
        g = _resolve_goal(prn, name, k, ln, c, source)
    return Model(prn, parametrisations, x, g)


def _resolve_state(prn: PRN, assigns, ln=None, source="<model>") -> State:
    vals = {}
    for name, k, c in assigns:
        if name not in prn.index:
            raise ParseError(f"unknown component {name!r}", ln, c, source)
        if name in vals:
            raise ParseError(f"component {name!r} assigned twice", ln, c, source)
        if k > prn.max_values[prn.index[name]]:
            raise ParseError(f"value {k} outside the domain of {name!r}", ln, c, source)
        vals[name] = k
    missing = [n for n in prn.names if n not in vals]
    if missing:
        raise ParseError(f"initial state misses component(s) {', '.join(missing)}", ln, None, source)
    return tuple(vals[n] for n in prn.names)


def _resolve_goal(prn: PRN, name: str, k: int, ln=None, c=None, source="<model>") -> tuple[int, int]:
    if name not in prn.index:
        raise ParseError(f"unknown goal component {name!r}", ln, c, source)
    if k > prn.max_values[prn.index[name]]:
        raise ParseError(f"goal value {k} outside the domain of {name!r}", ln, c, source)
    return (prn.index[name], k)


def parse_state(prn: PRN, text: str) -> State:
    return _resolve_state(prn, _assignments(text, None, 1, "--initial"), None, "--initial")


def parse_goal(prn: PRN, text: str) -> tuple[int, int]:
    assigns = _assignments(text, None, 1, "--goal")
    if len(assigns) != 1:
        raise ParseError("expected <component>=<value>", None, None, "--goal")
    name, k, c = assigns[0]
    return _resolve_goal(prn, name, k, None, c, "--goal")


def _format_assign(prn: PRN, comps, values) -> str:
    return ",".join(f"{prn.names[u]}={k}" for u, k in zip(comps, values))


def print_model(model: Model) -> str:
    prn = model.prn
    lines = [f"component {n} {m}" for n, m in prn.components]
    for u, v in prn.influences:
        labels = prn.constraints.get((u, v), frozenset())
        lab = "".join(s for s in "+-o" if s in labels)
        lines.append(f"influence {u} -> {v}" + (f" {lab}" if lab else ""))
    for pname, P in model.parametrisations.items():
        for p, (v, w) in enumerate(prn.parameters):
            lines.append(f"param {pname} {prn.names[v]} | {_format_assign(prn, prn.regulators(v), w)} | {P[p]}")
    if model.initial is not None:
        lines.append("initial " + _format_assign(prn, range(prn.n), model.initial))
    if model.goal is not None:
        g, k = model.goal
        lines.append(f"goal {prn.names[g]}={k}")
    return "\n".join(lines) + "\n"


# -- JSON mirror --------------------------------------------------------------


def model_to_json(model: Model) -> dict:
    prn = model.prn
    out = {
        "components": [{"name": n, "max": m} for n, m in prn.components],
        "influences": [
            {"from": u, "to": v,
             "constraints": "".join(s for s in "+-o" if s in prn.constraints.get((u, v), frozenset()))}
            for u, v in prn.influences
        ],
    }
    if model.parametrisations:
        out["parametrisations"] = {
            pname: [{"component": prn.names[v],
                     "regulators": {prn.names[u]: k for u, k in zip(prn.regulators(v), w)},
                     "value": P[p]} for p, (v, w) in enumerate(prn.parameters)]
            for pname, P in model.parametrisations.items()
        }
    if model.initial is not None:
        out["initial"] = {n: k for n, k in zip(prn.names, model.initial)}
    if model.goal is not None:
        out["goal"] = {"component": prn.names[model.goal[0]], "value": model.goal[1]}
    return out


def model_from_json(data, source: str = "<json>") -> Model:
    """Build a model from the JSON mirror by rendering it to the text grammar."""
    if isinstance(data, str):
        data = json.loads(data)
    allowed = {"components", "influences", "parametrisations", "initial", "goal"}
    unknown = set(data) - allowed
    if unknown:
        raise ParseError(f"unknown key(s) {sorted(unknown)}", None, None, source)
    try:
        lines = [f"component {c['name']} {c['max']}" for c in data.get("components", [])]
        for inf in data.get("influences", []):
            lines.append(f"influence {inf['from']} -> {inf['to']} {inf.get('constraints', '')}".rstrip())
        for pname, rows in data.get("parametrisations", {}).items():
            for row in rows:
                regs = ",".join(f"{u}={k}" for u, k in row["regulators"].items())
                lines.append(f"param {pname} {row['component']} | {regs} | {row['value']}")
        if "initial" in data:
            lines.append("initial " + ",".join(f"{n}={k}" for n, k in data["initial"].items()))
        if "goal" in data:
            lines.append(f"goal {data['goal']['component']}={data['goal']['value']}")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed JSON model: {exc}", None, None, source) from None
    return parse_model("\n".join(lines) + "\n", source)


def load_model(path: str, fmt: str | None = None) -> Model:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt is None:
        fmt = "json" if path.endswith(".json") else "text"
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno, path) from None
        return model_from_json(data, path)
    return parse_model(text, path)


__all__ = [
    "Model", "ParseError", "ModelError", "parse_model", "print_model", "load_model",
    "model_to_json", "model_from_json", "parse_state", "parse_goal", "regulator_states",
]
