"""Directed networks and goal-oriented reduction.

A directed network keeps, per parameter (component and regulator state), an
activation limit and an inhibition limit. An increasing transition from value
``i`` fires only if ``i < activation``; a decreasing one only if
``i > inhibition``. ``-inf``/``+inf`` are represented with :data:`math.inf`.

The reduction collects objectives from the goal backwards through valid
partial transitions, then derives the limits that keep exactly the value
changes those partial transitions can realise.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .cover import RegulationCoverSet, ValueChange, compute_cover_set, contains
from .dynamics import (
    Objective,
    SearchMode,
    BudgetExceeded,
    Trace,
    enumerate_minimal_traces,
    objective_search,
)
from .network import (
    PRN,
    State,
    Transition,
    all_transitions,
    apply_transition,
    enabled_in_state,
    regulator_states,
)
from .parametrisation import (
    ParametrisationLattice,
    enabled_by_lattice,
    initial_lattice,
    restrict_lattice,
)

log = logging.getLogger(__name__)

INF = math.inf


@dataclass(frozen=True)
class DPRN:
    prn: PRN
    activation: tuple  # per parameter: int or -inf
    inhibition: tuple  # per parameter: int or +inf

    @classmethod
    def unrestricted(cls, prn: PRN) -> "DPRN":
        act = tuple(prn.max_values[v] for v, _ in prn.parameters)
        return cls(prn, act, (0,) * prn.num_parameters)

    def allows(self, t: Transition) -> bool:
        p = self.prn.parameter_index(t.component, t.omega)
        if t.sign > 0:
            return t.start < self.activation[p]
        return t.start > self.inhibition[p]

    def component_limits(self) -> tuple[list, list]:
        """Per-component display: max activation and min inhibition over regulator states."""
        act, inh = [], []
        for v in range(self.prn.n):
            lo, hi = self.prn.offsets[v], self.prn.offsets[v] + self.prn.table_sizes[v]
            act.append(max(self.activation[lo:hi]))
            inh.append(min(self.inhibition[lo:hi]))
        return act, inh


def as_dprn(model) -> DPRN:
    return model if isinstance(model, DPRN) else DPRN.unrestricted(model)


def dprn_enabled(t: Transition, dprn: DPRN, x: State, lat: ParametrisationLattice) -> bool:
    return enabled_in_state(t, x, dprn.prn) and enabled_by_lattice(t, lat) and dprn.allows(t)


@dataclass(frozen=True, order=True)
class PartialTransition:
    change: ValueChange
    partial: tuple

    @property
    def component(self) -> int:
        return self.change.component


@dataclass
class ReductionResult:
    source: DPRN
    dprn: DPRN
    initial: State
    goal: tuple[int, int]
    objectives: list[Objective]
    provenance: dict  # Objective -> (rule, parent Objective | None)
    valid: dict  # Objective -> list[PartialTransition]
    cover_sets: dict  # ValueChange -> RegulationCoverSet
    validity_queries: int = 0
    configurations: int = 0

    @property
    def valid_transitions(self) -> list[PartialTransition]:
        seen = {pt for pts in self.valid.values() for pt in pts}
        return sorted(seen, key=_pt_key)


def _pt_key(pt: PartialTransition):
    return (pt.change.component, pt.change.start, pt.change.end,
            tuple(-1 if a is None else a for a in pt.partial))


class Reducer:
    """Holds the context of one reduction: model, initial state, lattice and validity mode.

    Cover sets and validity answers are memoized for the lifetime of the object.
    """

    def __init__(self, model, x: State, lattice0: ParametrisationLattice | None = None,
                 mode: SearchMode = SearchMode.EXACT, budget: int | None = None):
        self.dprn = as_dprn(model)
        self.prn = self.dprn.prn
        self.x = tuple(x)
        self.lattice0 = lattice0 if lattice0 is not None else initial_lattice(self.prn)
        self.mode = mode
        self.budget = budget
        self._covers: dict[ValueChange, RegulationCoverSet] = {}
        self._validity: dict[Objective, bool] = {}
        self.queries = 0
        self.configurations = 0

    def enabling(self, change: ValueChange):
        def pred(omega):
            t = Transition(change.component, change.start, change.end, tuple(omega))
            return enabled_by_lattice(t, self.lattice0) and self.dprn.allows(t)
        return pred

    def cover_set(self, change: ValueChange) -> RegulationCoverSet:
        cs = self._covers.get(change)
        if cs is None:
            cs = self._covers[change] = compute_cover_set(self.prn, change, self.enabling(change))
        return cs

    def valid(self, obj: Objective) -> bool:
        ans = self._validity.get(obj)
        if ans is None:
            res = objective_search(obj, self.x, self.dprn, self.lattice0, self.mode, self.budget)
            self.queries += 1
            self.configurations += res.configurations
            if res.status == "unknown":
                raise BudgetExceeded(self.budget)
            ans = self._validity[obj] = res.status == "reached"
        return ans

    def objective_transitions(self, obj: Objective) -> list[PartialTransition]:
        if obj.start == obj.end:
            return []
        s = obj.sign
        out = []
        for k in range(obj.start, obj.end, s):
            ch = ValueChange(obj.component, k, k + s)
            out.extend(PartialTransition(ch, p) for p in self.cover_set(ch))
        return out

    def valid_transitions(self, obj: Objective) -> list[PartialTransition]:
        v = obj.component
        regs = self.prn.regulators(v)
        out = []
        for pt in self.objective_transitions(obj):
            if all(self.valid(Objective(u, self.x[u], k))
                   for u, k in zip(regs, pt.partial) if k is not None):
                out.append(pt)
        return out

    def closure(self, goal: tuple[int, int]):
        """Least objective set closed under the three generation rules.

        Returns ``(objectives in insertion order, provenance, valid sets)``.
        """
        g, top = goal
        seed = Objective(g, self.x[g], top)
        provenance = {seed: (1, None)}
        valid: dict[Objective, list[PartialTransition]] = {}
        by_comp: dict[int, list[Objective]] = {}
        work = deque([seed])
        queued = {seed}

        def add(obj, rule, parent):
            if obj in provenance:
                return
            provenance[obj] = (rule, parent)
            log.debug("objective %s added by rule %d", obj, rule)
            # rule 3 pairs objectives of the same component: revisit them
            for other in by_comp.get(obj.component, []):
                if other not in queued:
                    queued.add(other)
                    work.append(other)
            if obj not in queued:
                queued.add(obj)
                work.append(obj)

        while work:
            obj = work.popleft()
            queued.discard(obj)
            if obj not in valid:
                valid[obj] = self.valid_transitions(obj)
                by_comp.setdefault(obj.component, []).append(obj)
            v = obj.component
            for pt in valid[obj]:
                for u, k in zip(self.prn.regulators(v), pt.partial):
                    if k is not None and u != v:
                        add(Objective(u, self.x[u], k), 2, obj)
            reached = {pt.change.end for pt in valid[obj]}
            for other in list(provenance):
                if other.component != v or other == obj:
                    continue
                for q in sorted(reached):
                    add(Objective(v, q, other.end), 3, obj)
        return list(provenance), provenance, valid

    def limits(self, valid_pts: Sequence[PartialTransition]) -> DPRN:
        prn = self.prn
        act = [-INF] * prn.num_parameters
        inh = [INF] * prn.num_parameters
        for pt in valid_pts:
            v, k = pt.change.component, pt.change.end
            for w in regulator_states(prn, v):
                if not contains(pt.partial, w):
                    continue
                p = prn.parameter_index(v, w)
                if pt.change.sign > 0:
                    act[p] = max(act[p], k)
                else:
                    inh[p] = min(inh[p], k)
        return DPRN(prn, tuple(act), tuple(inh))

    def run(self, goal: tuple[int, int]) -> ReductionResult:
        g, top = goal
        if top not in self.prn.domain(g):
            raise ValueError(f"goal value {top} outside the domain of {self.prn.names[g]}")
        order, provenance, valid = self.closure(goal)
        objectives = sorted(order, key=lambda o: (o.component, o.start, o.end))
        for o in objectives:
            valid.setdefault(o, self.valid_transitions(o))
        result = ReductionResult(
            source=self.dprn, dprn=self.dprn, initial=self.x, goal=goal,
            objectives=objectives, provenance=provenance, valid=valid,
            cover_sets=dict(sorted(self._covers.items())),
        )
        result.dprn = self.limits(result.valid_transitions)
        result.validity_queries = self.queries
        result.configurations = self.configurations
        return result


def objective_transition_set(obj: Objective, reducer: Reducer) -> list[PartialTransition]:
    return reducer.objective_transitions(obj)


def valid_objective_transition_set(x: State, obj: Objective, reducer: Reducer) -> list[PartialTransition]:
    if tuple(x) != reducer.x:
        raise ValueError("reducer was built for a different initial state")
    return reducer.valid_transitions(obj)


def compute_objective_closure(model, x: State, goal: tuple[int, int], lattice0=None,
                              mode: SearchMode = SearchMode.EXACT, budget=None) -> list[Objective]:
    order, _, _ = Reducer(model, x, lattice0, mode, budget).closure(goal)
    return sorted(order, key=lambda o: (o.component, o.start, o.end))


def run_reduction(model, x: State, goal: tuple[int, int], lattice0=None,
                  mode: SearchMode = SearchMode.EXACT, budget=None) -> ReductionResult:
    return Reducer(model, x, lattice0, mode, budget).run(goal)


def reduce(model, x: State, goal: tuple[int, int], lattice0=None,
           mode: SearchMode = SearchMode.EXACT, budget=None) -> DPRN:
    return run_reduction(model, x, goal, lattice0, mode, budget).dprn


def enabled_count(dprn: DPRN, lattice0: ParametrisationLattice) -> int:
    """Transitions of the network allowed by the limits and enabled by ``lattice0``."""
    return sum(1 for t in all_transitions(dprn.prn) if dprn.allows(t) and enabled_by_lattice(t, lattice0))


# -- preservation harness -------------------------------------------------------


@dataclass
class Violation:
    trace: Trace
    step: int
    reason: str


@dataclass
class PreservationReport:
    traces: list[Trace]
    result: ReductionResult
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_trace_preserved(trace: Trace, result: ReductionResult,
                          lattice0: ParametrisationLattice) -> list[Violation]:
    """Every step must be matched by a valid partial transition and stay enabled when reduced."""
    prn = result.dprn.prn
    valid = result.valid_transitions
    out = []
    s, lat = trace.start, lattice0
    for k, t in enumerate(trace.steps):
        ch = ValueChange(*t.change)
        if not any(pt.change == ch and contains(pt.partial, t.omega) for pt in valid):
            out.append(Violation(trace, k, "no valid partial transition covers the step"))
        if not dprn_enabled(t, result.dprn, s, lat):
            out.append(Violation(trace, k, "step disabled in the reduced network"))
        lat = restrict_lattice(lat, t, prn)
        s = apply_transition(s, t)
    return out


def preservation_check(model, pset, x: State, goal: tuple[int, int], max_len: int,
                       lattice0: ParametrisationLattice | None = None,
                       mode: SearchMode = SearchMode.EXACT) -> PreservationReport:
    """Enumerate minimal traces, reduce, and verify every minimal-trace step survives."""
    dprn = as_dprn(model)
    lat0 = lattice0 if lattice0 is not None else initial_lattice(dprn.prn)
    traces = enumerate_minimal_traces(dprn, pset, x, goal, max_len)
    result = run_reduction(dprn, x, goal, lat0, mode)
    report = PreservationReport(traces, result)
    for tr in traces:
        report.violations.extend(check_trace_preserved(tr, result, lat0))
    return report
