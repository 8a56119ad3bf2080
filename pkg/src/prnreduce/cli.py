"""Command-line interface: ``prnreduce {reduce,reach,cover,oracle}``.

Exit codes: 0 success or goal reached, 1 goal unreached, 2 budget exhausted
(verdict unknown), 3 input error. Set ``PRNREDUCE_LOG`` (e.g. ``DEBUG``) for
log output on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from .cover import ValueChange, compute_cover_set, format_partial, spec_count
from .dynamics import BudgetExceeded, SearchMode, enumerate_minimal_traces, reachable
from .modelfile import Model, ParseError, load_model, parse_goal, parse_state
from .network import ModelError, Transition, regulator_states
from .parametrisation import DEFAULT_CAP, CapExceeded, enabled_by_lattice, enumerate_parametrisations
from .reduction import Reducer
from . import report as rep

EXIT_OK, EXIT_UNREACHED, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3

log = logging.getLogger("prnreduce")


class InputError(Exception):
    pass


def _write(text: str, dest: str | None):
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(args) -> Model:
    try:
        return load_model(args.model, args.format)
    except OSError as exc:
        raise InputError(f"cannot read {args.model}: {exc.strerror}") from None


def _initial_goal(args, model: Model, need_goal: bool = True):
    prn = model.prn
    x = parse_state(prn, args.initial) if args.initial else model.initial
    goal = parse_goal(prn, args.goal) if args.goal else model.goal
    if x is None:
        raise InputError("no initial state: declare 'initial' in the model or pass --initial")
    if need_goal and goal is None:
        raise InputError("no goal: declare 'goal' in the model or pass --goal")
    return x, goal


def _fmt_limit(v) -> str:
    return str(rep.render_limit(v))


def cmd_reduce(args) -> int:
    model = _load(args)
    x, goal = _initial_goal(args, model)
    lat0 = model.lattice()
    mode = SearchMode(args.mode)
    t0 = time.perf_counter()
    result = Reducer(model.prn, x, lat0, mode, args.budget).run(goal)
    elapsed = time.perf_counter() - t0
    names = list(model.parametrisations) or None
    report = rep.reduction_report(result, lat0, mode.value, names,
                                  {"reduce_seconds": elapsed} if args.timing else None)
    if args.json:
        _write(rep.dumps(report), args.json)
        if args.json == "-":
            return EXIT_OK
    prn = model.prn
    lines = [f"objectives ({len(report['objectives'])}):"]
    for o in report["objectives"]:
        parent = f" from {o['parent']}" if o["parent"] else ""
        lines.append(f"  {o['objective']}  rule {o['rule']}{parent}")
    lines.append(f"valid partial transitions ({len(report['valid_partial_transitions'])}):")
    for pt in result.valid_transitions:
        ch = pt.change
        lines.append(f"  {prn.names[ch.component]} {ch.start}->{ch.end} "
                     f"{prn.format_omega(ch.component, pt.partial)}")
    act, inh = result.dprn.component_limits()
    lines.append("activation limits: " + " ".join(f"{n}={_fmt_limit(a)}" for n, a in zip(prn.names, act)))
    lines.append("inhibition limits: " + " ".join(f"{n}={_fmt_limit(i)}" for n, i in zip(prn.names, inh)))
    et = report["enabled_transitions"]
    lines.append(f"enabled transitions: {et['before']} -> {et['after']}")
    lines.append(f"validity queries: {result.validity_queries}, configurations: {result.configurations}")
    if args.timing:
        lines.append(f"time: {elapsed:.3f}s")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_reach(args) -> int:
    model = _load(args)
    x, goal = _initial_goal(args, model)
    lat0 = model.lattice()
    mode = SearchMode(args.mode)
    stats = {}
    before = reachable(model.prn, x, goal, lat0, mode, args.budget, subsume=args.subsume)
    stats["unreduced"] = before
    verdict = before.status
    if args.reduce == "on":
        try:
            dprn = Reducer(model.prn, x, lat0, mode, args.budget).run(goal).dprn
        except BudgetExceeded:
            verdict, after = "unknown", None
        else:
            after = reachable(dprn, x, goal, lat0, mode, args.budget, subsume=args.subsume)
            verdict = after.status
        stats["reduced"] = after
    out = {"verdict": verdict, "mode": mode.value, "reduce": args.reduce}
    for k, res in stats.items():
        out[k] = None if res is None else {
            "status": res.status, "states": res.states,
            "configurations": res.configurations, "complete": res.complete}
    if args.json:
        _write(json.dumps(out, indent=2) + "\n", args.json)
    if not args.json or args.json != "-":
        lines = [f"verdict: {verdict}"]
        for k, res in stats.items():
            if res is None:
                lines.append(f"{k}: budget exhausted during reduction")
            else:
                lines.append(f"{k}: {res.states} states, {res.configurations} configurations ({res.status})")
        sys.stdout.write("\n".join(lines) + "\n")
    return {"reached": EXIT_OK, "unreached": EXIT_UNREACHED}.get(verdict, EXIT_UNKNOWN)


def _parse_change(prn, v: int, text: str) -> ValueChange:
    try:
        i, j = (int(s) for s in text.split(":"))
    except ValueError:
        raise InputError(f"--change expects i:j, got {text!r}") from None
    dom = prn.domain(v)
    if i not in dom or j not in dom:
        raise InputError(f"change {i}:{j} outside the domain 0..{prn.max_values[v]} of {prn.names[v]}")
    if abs(i - j) != 1:
        raise InputError(f"change {i}:{j} is not a unit step")
    return ValueChange(v, i, j)


def cmd_cover(args) -> int:
    model = _load(args)
    prn = model.prn
    if args.component not in prn.index:
        raise InputError(f"unknown component {args.component!r}")
    v = prn.index[args.component]
    if args.change:
        changes = [_parse_change(prn, v, args.change)]
    else:
        m = prn.max_values[v]
        changes = [ValueChange(v, i, i + 1) for i in range(m)] + [ValueChange(v, i + 1, i) for i in range(m)]
    lat0 = model.lattice()
    covers = []
    for ch in changes:
        def enabling(w, ch=ch):
            return enabled_by_lattice(Transition(v, ch.start, ch.end, tuple(w)), lat0)
        cs = compute_cover_set(prn, ch, enabling)
        n_enabling = sum(1 for w in regulator_states(prn, v) if enabling(w))
        covers.append(rep.cover_json(prn, cs, n_enabling))
    out = {"component": prn.names[v], "parametrisations": list(model.parametrisations) or None,
           "cover_sets": covers}
    if args.json:
        _write(json.dumps(out, indent=2) + "\n", args.json)
        if args.json == "-":
            return EXIT_OK
    lines = []
    regs = " ".join(prn.names[u] for u in prn.regulators(v))
    for c in covers:
        lines.append(f"{c['component']} {c['from']}->{c['to']} (regulators: {regs or '-'}): "
                     f"{len(c['members'])} members, {c['spec_count']} specs "
                     f"(concrete: {c['concrete_spec_count']})")
        for mbr in c["members"]:
            lines.append(f"  {mbr}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.seed is not None:
        from .campaign import run_campaign

        t0 = time.perf_counter()
        report = run_campaign(args.seed, args.count, args.max_len)
        out = report.to_dict()
        if args.timing:
            out["seconds"] = round(time.perf_counter() - t0, 3)
        _write(json.dumps(out, indent=2) + "\n", args.json)
        return EXIT_OK if not out["failures"] else EXIT_UNREACHED
    if args.model is None:
        raise InputError("oracle needs a model file, or --seed for the random campaign")
    model = _load(args)
    x, goal = _initial_goal(args, model)
    pset = model.parametrisation_set()
    if pset is None:
        try:
            pset = enumerate_parametrisations(model.prn, args.cap)
        except CapExceeded as exc:
            raise InputError(str(exc)) from None
    traces = enumerate_minimal_traces(model.prn, pset, x, goal, args.max_len)
    prn = model.prn
    if args.json:
        out = {"max_len": args.max_len, "count": len(traces), "traces": [
            [{"component": prn.names[t.component], "from": t.start, "to": t.end,
              "regulator_state": list(t.omega)} for t in tr.steps] for tr in traces]}
        _write(json.dumps(out, indent=2) + "\n", args.json)
        if args.json == "-":
            return EXIT_OK
    lines = [f"minimal traces up to length {args.max_len}: {len(traces)}"]
    for k, tr in enumerate(traces, 1):
        steps = ", ".join(prn.format_transition(t) for t in tr.steps)
        lines.append(f"  [{k}] length {len(tr)}: {steps}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prnreduce", description="Goal-oriented reduction of parametric regulatory networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_required=True):
        if model_required:
            p.add_argument("model", help="model file (text grammar or JSON)")
        else:
            p.add_argument("model", nargs="?", help="model file (text grammar or JSON)")
        p.add_argument("--format", choices=["text", "json"], default=None,
                       help="model file format (default: by extension)")
        p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")

    def dynamics(p):
        p.add_argument("--initial", help="initial state, e.g. a=0,b=0")
        p.add_argument("--goal", help="goal, e.g. a=1")
        p.add_argument("--mode", choices=[m.value for m in SearchMode], default="exact",
                       help="validity/reachability semantics (default: exact)")
        p.add_argument("--budget", type=int, default=None, help="configuration budget per search")

    p = sub.add_parser("reduce", help="compute the reduced directed network")
    common(p)
    dynamics(p)
    p.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte reproducibility)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("reach", help="decide goal reachability")
    common(p)
    dynamics(p)
    p.add_argument("--reduce", choices=["on", "off"], default="off", help="reduce before exploring")
    p.add_argument("--subsume", action="store_true", help="merge configurations by lattice inclusion")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("cover", help="regulation cover sets of one component")
    common(p)
    p.add_argument("--component", required=True)
    p.add_argument("--change", help="value change i:j (default: all unit changes)")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("oracle", help="minimal-trace listing or random preservation campaign")
    common(p, model_required=False)
    p.add_argument("--initial")
    p.add_argument("--goal")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--seed", type=int, default=None, help="run the random campaign with this seed")
    p.add_argument("--count", type=int, default=100, help="campaign instances")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="explicit parametrisation set size cap")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("PRNREDUCE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ModelError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
