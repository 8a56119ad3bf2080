"""Partial regulator states and regulation cover set inference.

A partial regulator state is a tuple over the regulators of a component where
``None`` stands for the wildcard. A regulation cover set for a value change is
a set of partial states that (1) witnesses every regulator value of every
enabling regulator state, and (2) contains no non-enabling regulator state.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .network import PRN, RegulatorState, regulator_states

WILDCARD = None
PartialState = tuple  # of int | None

Enabling = Callable[[RegulatorState], bool]


@dataclass(frozen=True, order=True)
class ValueChange:
    component: int
    start: int
    end: int

    def __post_init__(self):
        if abs(self.start - self.end) != 1:
            raise ValueError(f"value change {self.start}->{self.end} is not a unit step")

    @property
    def sign(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class RegulationCoverSet:
    change: ValueChange
    members: tuple[PartialState, ...]  # in inclusion order

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def contains(partial: PartialState, omega: RegulatorState) -> bool:
    return all(a is None or a == k for a, k in zip(partial, omega))


def specified(partial: PartialState) -> int:
    return sum(a is not None for a in partial)


def spec_count(members: Iterable[PartialState]) -> int:
    return sum(specified(p) for p in members)


def format_partial(partial: PartialState) -> str:
    return "<" + "".join("*" if a is None else str(a) for a in partial) + ">"


def members_of(partial: PartialState, domains: Sequence[range]) -> Iterable[RegulatorState]:
    return itertools.product(*((d if a is None else (a,)) for a, d in zip(partial, domains)))


def is_covered(omega: RegulatorState, members: Iterable[PartialState]) -> bool:
    """Every regulator value of ``omega`` is specified by some member containing it.

    Containment by at least one member is also required, which only matters
    for components without regulators.
    """
    holders = [p for p in members if contains(p, omega)]
    if not holders:
        return False
    return all(any(p[k] is not None for p in holders) for k in range(len(omega)))


def concrete_cover(omegas: Iterable[RegulatorState], enabling: Enabling) -> list[PartialState]:
    return [tuple(w) for w in omegas if enabling(w)]


def weight(omega: RegulatorState, level1_enabling: Iterable[PartialState],
           removed: set, n_regulators: int) -> Fraction:
    """Covering flexibility of ``omega``.

    Integer part: enabling single-wildcard partial states containing ``omega``
    not yet removed; fractional part: all of them, over ``n_regulators + 1``.
    """
    incident = [p for p in level1_enabling if contains(p, omega)]
    alive = sum(1 for p in incident if p not in removed)
    return alive + Fraction(len(incident), n_regulators + 1)


def _with_wildcards(omega: RegulatorState, positions) -> PartialState:
    out = list(omega)
    for k in positions:
        out[k] = None
    return tuple(out)


def compute_cover_set(prn: PRN, change: ValueChange, enabling: Enabling) -> RegulationCoverSet:
    """Greedy cover of the enabling regulator states of ``change``.

    Enabling states are processed in increasing weight (ties broken by
    lexicographic order). For each, candidate partial states containing it are
    tried level by level, from the most wildcards down to the state itself,
    keeping only candidates that contain no non-enabling state and have not
    been removed; the first level that completes the cover is added. All
    partial states containing the processed state are then removed.
    """
    v = change.component
    domains = [prn.domain(u) for u in prn.regulators(v)]
    n = len(domains)
    omegas = regulator_states(prn, v)
    ena = {w: bool(enabling(w)) for w in omegas}
    todo = [w for w in omegas if ena[w]]
    if not todo:
        return RegulationCoverSet(change, ())

    safe_cache: dict[PartialState, bool] = {}

    def safe(p: PartialState) -> bool:
        r = safe_cache.get(p)
        if r is None:
            r = safe_cache[p] = all(ena[w] for w in members_of(p, domains))
        return r

    level1 = {w: [p for p in (_with_wildcards(w, (k,)) for k in range(n)) if safe(p)] for w in todo}
    removed: set[PartialState] = set()
    frac = {w: Fraction(len(level1[w]), n + 1) for w in todo}
    alive = {w: len(level1[w]) for w in todo}
    heap = [(alive[w] + frac[w], w) for w in todo]
    heapq.heapify(heap)
    pending = set(todo)
    cover: list[PartialState] = []

    while pending:
        wt, w = heapq.heappop(heap)
        if w not in pending or wt != alive[w] + frac[w]:
            continue
        ext: list[PartialState] = []
        i = max(n - 1, 0)
        while not is_covered(w, cover + ext):
            if i < 0:
                raise AssertionError(f"regulator state {w} cannot be covered")
            ext = [p for p in (_with_wildcards(w, pos) for pos in itertools.combinations(range(n), i))
                   if safe(p) and p not in removed]
            i -= 1
        cover.extend(p for p in ext if p not in cover)
        pending.discard(w)
        for k in range(n):
            p = _with_wildcards(w, (k,))
            if p in removed or not safe(p):
                continue
            for other in members_of(p, domains):
                if other in pending:
                    alive[other] -= 1
                    heapq.heappush(heap, (alive[other] + frac[other], other))
        removed.update(_with_wildcards(w, pos) for r in range(n + 1)
                       for pos in itertools.combinations(range(n), r))
    return RegulationCoverSet(change, tuple(cover))


def verify_cover_set(prn: PRN, cover: RegulationCoverSet | Iterable[PartialState], enabling: Enabling,
                     component: int | None = None) -> bool:
    """Check both cover set conditions against ``enabling`` over all regulator states."""
    if isinstance(cover, RegulationCoverSet):
        component = cover.change.component
        members = list(cover.members)
    else:
        members = list(cover)
    for w in regulator_states(prn, component):
        if enabling(w):
            if not is_covered(w, members):
                return False
        elif any(contains(p, w) for p in members):
            return False
    return True


def optimal_cover_size(prn: PRN, component: int, enabling: Enabling) -> int:
    """Minimum specification count over all valid cover sets (exponential; tiny inputs only)."""
    domains = [prn.domain(u) for u in prn.regulators(component)]
    omegas = regulator_states(prn, component)
    good = [w for w in omegas if enabling(w)]
    if not good:
        return 0
    choices = [tuple(a) for a in itertools.product(*[[None, *d] for d in domains])]
    safe = [p for p in choices if all(enabling(w) for w in members_of(p, domains))]
    safe.sort(key=specified)
    best = spec_count(good)
    for r in range(1, len(safe) + 1):
        for combo in itertools.combinations(safe, r):
            cost = spec_count(combo)
            if cost < best and all(is_covered(w, combo) for w in good):
                best = cost
    return best
