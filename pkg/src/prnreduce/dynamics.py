"""Traces, realisability, reachability search and the minimal-trace oracle.

Functions taking a ``model`` accept either a :class:`~prnreduce.network.PRN` or
a directed network (anything with a ``prn`` attribute and an ``allows(t)``
method); in the latter case transitions outside its limits are never fired.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .network import PRN, State, Transition, apply_transition, enabled_in_state, local_transitions
from .parametrisation import (
    ParametrisationLattice,
    enabled_by_lattice,
    initial_lattice,
    psi_abstract,
    restrict_lattice,
)

log = logging.getLogger(__name__)


class SearchMode(enum.Enum):
    EXACT = "exact"
    APPROXIMATE = "approx"


class TraceError(ValueError):
    """A trace is structurally invalid (a step is not enabled in its state)."""


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"search budget of {budget} configurations exhausted")


@dataclass(frozen=True)
class Trace:
    start: State
    steps: tuple[Transition, ...] = ()

    def __len__(self):
        return len(self.steps)

    def states(self) -> list[State]:
        out = [self.start]
        for t in self.steps:
            out.append(apply_transition(out[-1], t))
        return out

    @property
    def end(self) -> State:
        return self.states()[-1]

    def transition_set(self) -> frozenset[Transition]:
        return frozenset(self.steps)


@dataclass(frozen=True)
class Objective:
    """Drive ``component`` from value ``start`` to value ``end``."""

    component: int
    start: int
    end: int

    @property
    def sign(self) -> int:
        return (self.end > self.start) - (self.end < self.start)


@dataclass
class SearchResult:
    status: str  # "reached" | "unreached" | "unknown"
    configurations: int
    states: int
    complete: bool = True

    @property
    def reached(self) -> bool | None:
        return {"reached": True, "unreached": False}.get(self.status)


def _unwrap(model) -> tuple[PRN, Callable[[Transition], bool] | None]:
    if isinstance(model, PRN):
        return model, None
    return model.prn, model.allows


def check_trace(trace: Trace, prn: PRN) -> None:
    x = trace.start
    for k, t in enumerate(trace.steps):
        if not enabled_in_state(t, x, prn):
            raise TraceError(f"step {k + 1} ({prn.format_transition(t)}) is not enabled in state {x}")
        x = apply_transition(x, t)


def trace_realisable(trace: Trace, model, initial: ParametrisationLattice | None = None,
                     pset=None) -> bool:
    """Realisability of a structurally valid trace.

    With ``pset`` (an explicit parametrisation set) the exact check is used:
    some member enables every distinct transition of the trace. Otherwise the
    bound-based semantics folds the distinct transitions into ``initial``.
    Raises :class:`TraceError` if a step is not enabled in its state.
    """
    prn, allows = _unwrap(model)
    check_trace(trace, prn)
    steps = trace.transition_set()
    if allows is not None and not all(allows(t) for t in steps):
        return False
    if pset is not None:
        return pset.admits(steps)
    lat = initial if initial is not None else initial_lattice(prn)
    return not psi_abstract(steps, prn, lat).is_empty


def _successors(x: State, lat, prn: PRN, allows, mode: SearchMode):
    for t in local_transitions(x, prn):
        if allows is not None and not allows(t):
            continue
        if not enabled_by_lattice(t, lat):
            continue
        if mode is SearchMode.EXACT:
            nxt = restrict_lattice(lat, t, prn)
            if nxt.is_empty:
                continue
        else:
            nxt = lat
        yield t, x[:t.component] + (t.end,) + x[t.component + 1:], nxt


def _search(model, x: State, lattice0, mode: SearchMode, budget: int | None,
            phase_of: Callable[[State, bool], bool], accept: Callable[[State, bool], bool],
            stop_at_accept: bool, subsume: bool) -> SearchResult:
    """Breadth-first search over (state, lattice, phase) configurations."""
    prn, allows = _unwrap(model)
    lat0 = lattice0 if lattice0 is not None else initial_lattice(prn)
    if lat0.is_empty:
        return SearchResult("unreached", 0, 0)

    def key(s, lat, ph):
        return (s, lat.key, ph) if mode is SearchMode.EXACT else (s, ph)

    ph0 = phase_of(x, False)
    visited = {key(x, lat0, ph0)}
    seen_states = {x}
    dominant: dict = {}
    if subsume:
        dominant[(x, ph0)] = [lat0]
    queue = deque([(x, lat0, ph0)])
    found = accept(x, ph0)
    if found and stop_at_accept:
        return SearchResult("reached", 1, 1)
    while queue:
        s, lat, ph = queue.popleft()
        for _t, s2, lat2, in _successors(s, lat, prn, allows, mode):
            ph2 = phase_of(s2, ph)
            k = key(s2, lat2, ph2)
            if k in visited:
                continue
            if subsume and mode is SearchMode.EXACT:
                bucket = dominant.setdefault((s2, ph2), [])
                if any(big.includes(lat2) for big in bucket):
                    continue
                bucket[:] = [b for b in bucket if not lat2.includes(b)] + [lat2]
            if budget is not None and len(visited) >= budget:
                status = "reached" if found else "unknown"
                return SearchResult(status, len(visited), len(seen_states), complete=False)
            visited.add(k)
            seen_states.add(s2)
            if accept(s2, ph2):
                found = True
                if stop_at_accept:
                    return SearchResult("reached", len(visited), len(seen_states), complete=False)
            queue.append((s2, lat2, ph2))
    return SearchResult("reached" if found else "unreached", len(visited), len(seen_states))


def reachable(model, x: State, goal: tuple[int, int], lattice0: ParametrisationLattice | None = None,
              mode: SearchMode = SearchMode.EXACT, budget: int | None = None,
              stop_at_goal: bool = False, subsume: bool = False) -> SearchResult:
    """Decide whether ``goal = (component, value)`` is reachable from ``x``.

    Exploration is exhaustive unless ``stop_at_goal`` is set, so the
    configuration and state counts describe the whole reachable space. When
    ``budget`` configurations have been visited without reaching the goal the
    status is ``"unknown"``.
    """
    g, top = goal
    prn, _ = _unwrap(model)
    if top not in prn.domain(g):
        raise ValueError(f"goal value {top} outside the domain of {prn.names[g]}")
    return _search(model, x, lattice0, mode, budget,
                   phase_of=lambda s, ph: True,
                   accept=lambda s, ph: s[g] == top,
                   stop_at_accept=stop_at_goal, subsume=subsume)


def explore(model, x: State, lattice0=None, mode: SearchMode = SearchMode.EXACT,
            budget: int | None = None, subsume: bool = False) -> SearchResult:
    """Exhaustive exploration without a goal (status is always ``unreached`` unless cut)."""
    return _search(model, x, lattice0, mode, budget, lambda s, ph: True, lambda s, ph: False,
                   False, subsume)


def objective_search(obj: Objective, x: State, model, lattice0=None,
                     mode: SearchMode = SearchMode.EXACT, budget: int | None = None) -> SearchResult:
    """Two-phase witness search for ``obj``.

    The phase flips once the component holds ``obj.start`` (possibly already in
    ``x``); the search accepts in the second phase when the component holds
    ``obj.end``.
    """
    v, i, j = obj.component, obj.start, obj.end
    if i == j:
        return SearchResult("reached", 0, 0)
    return _search(model, x, lattice0, mode, budget,
                   phase_of=lambda s, ph: ph or s[v] == i,
                   accept=lambda s, ph: ph and s[v] == j,
                   stop_at_accept=True, subsume=False)


def objective_valid(obj: Objective, x: State, model, lattice0=None,
                    mode: SearchMode = SearchMode.EXACT, budget: int | None = None) -> bool:
    """Whether a realisable trace from ``x`` passes through ``obj.start`` and ends in ``obj.end``.

    Raises :class:`BudgetExceeded` rather than answering ``False`` on an
    incomplete search.
    """
    res = objective_search(obj, x, model, lattice0, mode, budget)
    if res.status == "unknown":
        raise BudgetExceeded(budget)
    return res.status == "reached"


# -- minimal traces -----------------------------------------------------------


def is_subsequence(small: Sequence, big: Sequence) -> bool:
    it = iter(big)
    return all(any(a == b for b in it) for a in small)


def is_minimal(trace: Trace, candidates: Iterable[Trace]) -> bool:
    """False iff some strictly shorter candidate embeds into ``trace`` in order."""
    return not any(len(c) < len(trace) and is_subsequence(c.steps, trace.steps) for c in candidates)


def has_shortcut(start: State, steps: Sequence[Transition], prn: PRN,
                 target: Callable[[State], bool]) -> bool:
    """Whether a strict subsequence of ``steps`` is a valid trace from ``start`` ending in ``target``.

    The subsequence uses only transitions of ``steps``, so it is realisable
    whenever the full sequence is.
    """
    n = len(steps)

    @lru_cache(maxsize=None)
    def go(i: int, s: State, skipped: bool) -> bool:
        if i == n:
            return skipped and target(s)
        if go(i + 1, s, True):
            return True
        t = steps[i]
        if s[t.component] == t.start and enabled_in_state(t, s, prn):
            return go(i + 1, s[:t.component] + (t.end,) + s[t.component + 1:], skipped)
        return False

    return go(0, start, False)


def enumerate_minimal_traces(model, pset, x: State, goal: tuple[int, int], max_len: int) -> list[Trace]:
    """All minimal goal-reaching traces of length at most ``max_len``.

    ``pset`` is an explicit parametrisation set (:class:`ParametrisationSet` or
    :class:`ProductSet`); a trace is realisable when some member enables all of
    its transitions. Depth-first enumeration prunes a prefix as soon as a strict
    subsequence of it reaches the same state, since every extension of such a
    prefix has a shorter embedded trace. Results are sorted by length, then by
    transitions.
    """
    prn, allows = _unwrap(model)
    g, top = goal
    if x[g] == top:
        return [Trace(x)]
    tracker = pset.tracker()
    if not any(tracker.initial):
        return []
    found: list[Trace] = []
    path: list[Transition] = []
    reached = lambda s: s[g] == top  # noqa: E731

    def dfs(s: State, masks):
        if len(path) == max_len:
            return
        for t in local_transitions(s, prn):
            if allows is not None and not allows(t):
                continue
            masks2 = tracker.step(masks, t)
            if masks2 is None:
                continue
            s2 = s[:t.component] + (t.end,) + s[t.component + 1:]
            path.append(t)
            if reached(s2):
                if not has_shortcut(x, path, prn, reached):
                    found.append(Trace(x, tuple(path)))
            elif not has_shortcut(x, path, prn, lambda y, s2=s2: y == s2):
                dfs(s2, masks2)
            path.pop()

    dfs(x, tracker.initial)
    found.sort(key=lambda tr: (len(tr), tr.steps))
    return found
