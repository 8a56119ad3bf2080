"""Parametrisations, the constraint-satisfying space and parametrisation set semantics.

Two set representations are provided:

* explicit sets (:class:`ParametrisationSet`, :class:`ProductSet`), used by the
  brute-force oracles and for small models;
* bound pairs (:class:`ParametrisationLattice`), a convex over-approximation that
  never enumerates parametrisations.

A parametrisation is a tuple of values over all parameters in the global
parameter order (component index, then lexicographic regulator state).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Iterator, Sequence

from .network import OBSERVABLE, PRN, Transition

Parametrisation = tuple[int, ...]

DEFAULT_CAP = 1_000_000


class CapExceeded(RuntimeError):
    """The explicit parametrisation space is larger than the allowed cap."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(
            f"explicit parametrisation space has {size} members (cap {cap}); "
            "use the lattice (bound-based) mode instead"
        )


def value_enables(value: int, t: Transition) -> bool:
    """Whether parameter ``value`` lets ``t`` fire: it lies at or beyond ``t.end`` along the sign."""
    if t.sign > 0:
        return value >= t.end
    return value <= t.end


def enables(P: Parametrisation, t: Transition, prn: PRN) -> bool:
    return value_enables(P[prn.parameter_index(t.component, t.omega)], t)


def _component_ok(values: Sequence[int], v: int, prn: PRN, base: int = 0) -> bool:
    """Constraint check restricted to the parameters of ``v``.

    ``values`` is indexed globally minus ``base``.
    """
    for (u, w), labels in prn.labels.items():
        if w != v or not labels:
            continue
        pairs = prn.axis_pairs(u, v)
        if "+" in labels and any(values[p - base] > values[q - base] for p, q in pairs):
            return False
        if "-" in labels and any(values[p - base] < values[q - base] for p, q in pairs):
            return False
        if OBSERVABLE in labels and all(values[p - base] == values[q - base] for p, q in pairs):
            return False
    return True


def satisfies_constraints(P: Parametrisation, prn: PRN) -> bool:
    if len(P) != prn.num_parameters:
        raise ValueError(f"parametrisation has {len(P)} values, model has {prn.num_parameters} parameters")
    for p, (v, _) in enumerate(prn.parameters):
        if not 0 <= P[p] <= prn.max_values[v]:
            return False
    return all(_component_ok(P, v, prn) for v in range(prn.n))


def component_space(prn: PRN, v: int) -> list[tuple[int, ...]]:
    """All admissible parameter tables of ``v`` (lexicographic order)."""
    base = prn.offsets[v]
    tables = itertools.product(prn.domain(v), repeat=prn.table_sizes[v])
    return [tab for tab in tables if _component_ok(tab, v, prn, base)]


class ParametrisationSet:
    """An explicit set of parametrisations.

    Intended for small instances. Realisability queries scan all members.
    """

    def __init__(self, prn: PRN, members: Iterable[Parametrisation]):
        self.prn = prn
        self.members = tuple(sorted(set(tuple(P) for P in members)))

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[Parametrisation]:
        return iter(self.members)

    def __contains__(self, P) -> bool:
        return tuple(P) in set(self.members)

    def __eq__(self, other):
        return set(self) == set(other)

    def __repr__(self):
        return f"ParametrisationSet({len(self)} members)"

    def admitting(self, transitions: Iterable[Transition]) -> "ParametrisationSet":
        ts = list(transitions)
        return ParametrisationSet(self.prn, (P for P in self.members
                                             if all(enables(P, t, self.prn) for t in ts)))

    def admits(self, transitions: Iterable[Transition]) -> bool:
        ts = list(transitions)
        return any(all(enables(P, t, self.prn) for t in ts) for P in self.members)

    def enables(self, t: Transition) -> bool:
        return self.admits([t])

    def tracker(self) -> "_MaskTracker":
        return _MaskTracker.explicit(self)


class ProductSet:
    """A parametrisation set given as a product of per-component tables.

    The admissible space of a model factorises this way because every
    constraint only relates parameters of one target component. Membership and
    realisability are decided per component, which keeps brute-force oracles
    usable on models whose full space is far too large to list.
    """

    def __init__(self, prn: PRN, factors: Sequence[Sequence[tuple[int, ...]]]):
        self.prn = prn
        self.factors = tuple(tuple(f) for f in factors)

    def __len__(self):
        return prod(len(f) for f in self.factors)

    def __iter__(self) -> Iterator[Parametrisation]:
        for combo in itertools.product(*self.factors):
            yield tuple(itertools.chain.from_iterable(combo))

    def __contains__(self, P) -> bool:
        P = tuple(P)
        return all(P[self.prn.offsets[v]:self.prn.offsets[v] + self.prn.table_sizes[v]] in set(f)
                   for v, f in enumerate(self.factors))

    def __repr__(self):
        return f"ProductSet({len(self)} members)"

    def admits(self, transitions: Iterable[Transition]) -> bool:
        by_comp: dict[int, list[Transition]] = {}
        for t in transitions:
            by_comp.setdefault(t.component, []).append(t)
        for v, ts in by_comp.items():
            codes = [(self.prn.omega_code(v, t.omega), t) for t in ts]
            if not any(all(value_enables(tab[c], t) for c, t in codes) for tab in self.factors[v]):
                return False
        return all(self.factors)

    def enables(self, t: Transition) -> bool:
        return self.admits([t])

    def tracker(self) -> "_MaskTracker":
        return _MaskTracker.product(self)


class _MaskTracker:
    """Incremental realisability bookkeeping for explicit sets.

    Keeps, per factor, a bitmask of members still enabling every transition seen
    so far; ``step`` returns the narrowed masks or ``None`` when a factor empties.
    """

    def __init__(self, prn, factors, factor_of, code_of, initial):
        self.prn = prn
        self._factors = factors
        self._factor_of = factor_of
        self._code_of = code_of
        self.initial = initial
        self._cache: dict[Transition, int] = {}

    @classmethod
    def explicit(cls, pset: ParametrisationSet):
        members = pset.members
        return cls(pset.prn, [members], lambda t: 0,
                   lambda t: pset.prn.parameter_index(t.component, t.omega),
                   ((1 << len(members)) - 1,))

    @classmethod
    def product(cls, pset: ProductSet):
        return cls(pset.prn, pset.factors, lambda t: t.component,
                   lambda t: pset.prn.omega_code(t.component, t.omega),
                   tuple((1 << len(f)) - 1 for f in pset.factors))

    def _mask(self, t: Transition) -> int:
        m = self._cache.get(t)
        if m is None:
            f = self._factors[self._factor_of(t)]
            c = self._code_of(t)
            m = 0
            for k, tab in enumerate(f):
                if value_enables(tab[c], t):
                    m |= 1 << k
            self._cache[t] = m
        return m

    def step(self, masks: tuple[int, ...], t: Transition):
        k = self._factor_of(t)
        m = masks[k] & self._mask(t)
        if not m:
            return None
        if m == masks[k]:
            return masks
        return masks[:k] + (m,) + masks[k + 1:]


def product_space(prn: PRN, cap: int | None = None) -> ProductSet:
    """The admissible space in factored form; ``cap`` bounds each factor's raw size."""
    for v in range(prn.n):
        raw = (prn.max_values[v] + 1) ** prn.table_sizes[v]
        if cap is not None and raw > cap:
            raise CapExceeded(raw, cap)
    return ProductSet(prn, [component_space(prn, v) for v in range(prn.n)])


def enumerate_parametrisations(prn: PRN, cap: int = DEFAULT_CAP) -> ParametrisationSet:
    """Every constraint-satisfying parametrisation, in lexicographic parameter order.

    Raises :class:`CapExceeded` when the space (or a per-component raw table
    range) exceeds ``cap``.
    """
    space = product_space(prn, cap)
    if len(space) > cap:
        raise CapExceeded(len(space), cap)
    return ParametrisationSet(prn, space)


@dataclass(frozen=True)
class ParametrisationLattice:
    """Bound pair ``(lower, upper)`` denoting every parametrisation between them."""

    lower: Parametrisation
    upper: Parametrisation
    prn: PRN = field(compare=False, repr=False, hash=False)

    @property
    def is_empty(self) -> bool:
        return any(lo > hi for lo, hi in zip(self.lower, self.upper))

    def __contains__(self, P) -> bool:
        return all(lo <= k <= hi for lo, k, hi in zip(self.lower, P, self.upper))

    def includes(self, other: "ParametrisationLattice") -> bool:
        """Set inclusion ``other ⊆ self`` (an empty ``other`` is included in anything)."""
        if other.is_empty:
            return True
        return (all(a <= b for a, b in zip(self.lower, other.lower))
                and all(a >= b for a, b in zip(self.upper, other.upper)))

    def bounds(self, v: int, omega) -> tuple[int, int]:
        p = self.prn.parameter_index(v, omega)
        return self.lower[p], self.upper[p]

    @property
    def key(self) -> tuple:
        return (self.lower, self.upper)


def _successors(prn: PRN):
    cache = prn.__dict__.get("_order_adjacency")
    if cache is None:
        up = [[] for _ in range(prn.num_parameters)]
        down = [[] for _ in range(prn.num_parameters)]
        for p, q in prn.order_pairs:
            up[p].append(q)
            down[q].append(p)
        cache = (tuple(map(tuple, up)), tuple(map(tuple, down)))
        prn.__dict__["_order_adjacency"] = cache
    return cache


def _propagate(lower: list, upper: list, prn: PRN, seeds_low: Iterable[int], seeds_up: Iterable[int]):
    up, down = _successors(prn)
    work = list(seeds_low)
    while work:
        p = work.pop()
        for q in up[p]:
            if lower[q] < lower[p]:
                lower[q] = lower[p]
                work.append(q)
    work = list(seeds_up)
    while work:
        q = work.pop()
        for p in down[q]:
            if upper[p] > upper[q]:
                upper[p] = upper[q]
                work.append(p)


def monotone_closure(lat: ParametrisationLattice, prn: PRN | None = None) -> ParametrisationLattice:
    """Tighten bounds so both are monotone along every sign-constrained influence.

    Lower bounds are pushed up the order, upper bounds down, until stable.
    """
    prn = prn or lat.prn
    lower, upper = list(lat.lower), list(lat.upper)
    every = range(prn.num_parameters)
    _propagate(lower, upper, prn, every, every)
    return ParametrisationLattice(tuple(lower), tuple(upper), prn)


def full_box(prn: PRN) -> ParametrisationLattice:
    lower = (0,) * prn.num_parameters
    upper = tuple(prn.max_values[v] for v, _ in prn.parameters)
    return ParametrisationLattice(lower, upper, prn)


def initial_lattice(prn: PRN) -> ParametrisationLattice:
    return monotone_closure(full_box(prn), prn)


def lattice_of(pset: Iterable[Parametrisation], prn: PRN) -> ParametrisationLattice:
    """Tightest closed bounds around an explicit set (empty set gives an empty lattice)."""
    members = list(pset)
    if not members:
        box = full_box(prn)
        return ParametrisationLattice(box.upper, box.lower, prn) if prn.num_parameters else box
    lower = tuple(map(min, zip(*members))) if prn.num_parameters else ()
    upper = tuple(map(max, zip(*members))) if prn.num_parameters else ()
    return monotone_closure(ParametrisationLattice(lower, upper, prn), prn)


def enabled_by_lattice(t: Transition, lat: ParametrisationLattice) -> bool:
    if lat.is_empty:
        return False
    lo, hi = lat.bounds(t.component, t.omega)
    if t.sign > 0:
        return hi >= t.end
    return lo <= t.end


def restrict_lattice(lat: ParametrisationLattice, t: Transition, prn: PRN | None = None) -> ParametrisationLattice:
    """Keep only parametrisations enabling ``t``; the result may be empty."""
    prn = prn or lat.prn
    p = prn.parameter_index(t.component, t.omega)
    lower, upper = list(lat.lower), list(lat.upper)
    if t.sign > 0:
        if lower[p] >= t.end:
            return lat
        lower[p] = t.end
        _propagate(lower, upper, prn, [p], [])
    else:
        if upper[p] <= t.end:
            return lat
        upper[p] = t.end
        _propagate(lower, upper, prn, [], [p])
    return ParametrisationLattice(tuple(lower), tuple(upper), prn)


def psi_abstract(transitions: Iterable[Transition], prn: PRN,
                 start: ParametrisationLattice | None = None) -> ParametrisationLattice:
    lat = start if start is not None else initial_lattice(prn)
    for t in set(transitions):
        lat = restrict_lattice(lat, t, prn)
    return lat


def psi_concrete(transitions: Iterable[Transition], prn: PRN,
                 space: ParametrisationSet | None = None, cap: int = DEFAULT_CAP) -> ParametrisationSet:
    space = space if space is not None else enumerate_parametrisations(prn, cap)
    return space.admitting(set(transitions))
