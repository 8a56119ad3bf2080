"""Static model of a parametric regulatory network.

Components are identified by their position in declaration order. States are
plain tuples of values indexed by component; regulator states are tuples of
values ordered by regulator index, and are encoded into parameter indices with
a mixed-radix code (first regulator most significant).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

POSITIVE = "+"
NEGATIVE = "-"
OBSERVABLE = "o"
CONSTRAINT_LABELS = frozenset({POSITIVE, NEGATIVE, OBSERVABLE})

State = tuple[int, ...]
RegulatorState = tuple[int, ...]


class ModelError(ValueError):
    """Raised when a model is structurally invalid."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, order=True)
class Transition:
    """Unit value change of ``component`` from ``start`` to ``end`` under ``omega``."""

    component: int
    start: int
    end: int
    omega: RegulatorState

    @property
    def sign(self) -> int:
        return self.end - self.start

    @property
    def change(self) -> tuple[int, int, int]:
        return (self.component, self.start, self.end)


@dataclass(frozen=True)
class PRN:
    """Influence graph, influence constraints and maximum values.

    ``components`` is a sequence of ``(name, max_value)``; ``influences`` a
    sequence of ``(regulator_name, target_name)``; ``constraints`` maps an
    influence to a subset of ``{"+", "-", "o"}``. The object can hold invalid
    data so that :func:`validate_model` can report on it; derived index
    structures are only available on valid models.
    """

    components: tuple[tuple[str, int], ...]
    influences: tuple[tuple[str, str], ...]
    constraints: Mapping[tuple[str, str], frozenset[str]] = field(default_factory=dict)

    @classmethod
    def build(cls, components, influences, constraints=None, validate=True) -> "PRN":
        cons = {tuple(k): frozenset(v) for k, v in (constraints or {}).items()}
        prn = cls(
            components=tuple((str(n), int(m)) for n, m in components),
            influences=tuple((str(u), str(v)) for u, v in influences),
            constraints=cons,
        )
        if validate:
            violations = validate_model(prn)
            if violations:
                raise ModelError(violations)
        return prn

    def __hash__(self):
        return hash((self.components, self.influences,
                     tuple(sorted((k, tuple(sorted(v))) for k, v in self.constraints.items()))))

    # -- derived structure (valid models only) --

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.components)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @cached_property
    def max_values(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.components)

    @property
    def n(self) -> int:
        return len(self.components)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((self.index[u], self.index[v]) for u, v in self.influences)

    @cached_property
    def labels(self) -> dict[tuple[int, int], frozenset[str]]:
        out = {e: frozenset() for e in self.edges}
        for (u, v), labs in self.constraints.items():
            out[(self.index[u], self.index[v])] = frozenset(labs)
        return out

    @cached_property
    def _regulators(self) -> tuple[tuple[int, ...], ...]:
        regs = [[] for _ in range(self.n)]
        for u, v in self.edges:
            regs[v].append(u)
        return tuple(tuple(sorted(r)) for r in regs)

    def regulators(self, v: int) -> tuple[int, ...]:
        return self._regulators[v]

    def component(self, ref) -> int:
        """Resolve a component name or index to its index."""
        if isinstance(ref, int):
            if not 0 <= ref < self.n:
                raise KeyError(ref)
            return ref
        return self.index[ref]

    @cached_property
    def _strides(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for v in range(self.n):
            regs = self.regulators(v)
            strides = [1] * len(regs)
            for k in range(len(regs) - 2, -1, -1):
                strides[k] = strides[k + 1] * (self.max_values[regs[k + 1]] + 1)
            out.append(tuple(strides))
        return tuple(out)

    @cached_property
    def table_sizes(self) -> tuple[int, ...]:
        sizes = []
        for v in range(self.n):
            size = 1
            for u in self.regulators(v):
                size *= self.max_values[u] + 1
            sizes.append(size)
        return tuple(sizes)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate((0,) + self.table_sizes[:-1]))

    @property
    def num_parameters(self) -> int:
        return sum(self.table_sizes)

    def omega_code(self, v: int, omega: RegulatorState) -> int:
        return sum(k * s for k, s in zip(omega, self._strides[v]))

    def parameter_index(self, v: int, omega: RegulatorState) -> int:
        """Position of parameter ``(v, omega)`` in the global parameter order."""
        return self.offsets[v] + self.omega_code(v, omega)

    @cached_property
    def parameters(self) -> tuple[tuple[int, RegulatorState], ...]:
        return tuple((v, w) for v in range(self.n) for w in regulator_states(self, v))

    def axis_pairs(self, u: int, v: int) -> list[tuple[int, int]]:
        """Parameter index pairs of ``v`` differing only by a unit step of regulator ``u``.

        Each pair is ``(lower, upper)`` where ``upper`` has the larger value of ``u``.
        """
        regs = self.regulators(v)
        pos = regs.index(u)
        stride = self._strides[v][pos]
        base = self.offsets[v]
        pairs = []
        for w in regulator_states(self, v):
            if w[pos] > 0:
                code = self.omega_code(v, w)
                pairs.append((base + code - stride, base + code))
        return pairs

    @cached_property
    def order_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(p, q)`` such that sign constraints force ``P[p] <= P[q]``."""
        out = []
        for (u, v), labels in sorted(self.labels.items()):
            if POSITIVE in labels:
                out.extend(self.axis_pairs(u, v))
            if NEGATIVE in labels:
                out.extend((q, p) for p, q in self.axis_pairs(u, v))
        return tuple(out)

    def domain(self, v: int) -> range:
        return range(self.max_values[v] + 1)

    def states(self) -> Iterator[State]:
        return itertools.product(*(self.domain(v) for v in range(self.n)))

    def state(self, values: Mapping[str, int] | Sequence[int]) -> State:
        if isinstance(values, Mapping):
            missing = set(self.names) - set(values)
            if missing:
                raise ModelError([f"state misses component {sorted(missing)[0]!r}"])
            x = tuple(int(values[n]) for n in self.names)
        else:
            x = tuple(int(k) for k in values)
        if len(x) != self.n or any(not 0 <= k <= m for k, m in zip(x, self.max_values)):
            raise ModelError([f"state {x} outside the state space"])
        return x

    def format_omega(self, v: int, omega: Sequence) -> str:
        parts = [f"{self.names[u]}={'*' if k is None else k}"
                 for u, k in zip(self.regulators(v), omega)]
        return "<" + " ".join(parts) + ">"

    def format_transition(self, t: Transition) -> str:
        return f"{self.names[t.component]} {t.start}->{t.end} {self.format_omega(t.component, t.omega)}"


def validate_model(prn: PRN) -> list[str]:
    """Return the list of violations; empty when the model is valid."""
    violations = []
    names = [n for n, _ in prn.components]
    seen = set()
    for name, m in prn.components:
        if name in seen:
            violations.append(f"duplicate component {name!r}")
        seen.add(name)
        if m < 1:
            violations.append(f"component {name!r}: maximum value must be >= 1, got {m}")
    declared = set(names)
    edges = set()
    for u, v in prn.influences:
        for end in (u, v):
            if end not in declared:
                violations.append(f"influence {u}->{v}: unknown component {end!r}")
        if (u, v) in edges:
            violations.append(f"duplicate influence {u}->{v}")
        edges.add((u, v))
    for (u, v), labels in prn.constraints.items():
        if (u, v) not in edges:
            violations.append(f"constraint on {u}->{v}: not an influence")
        bad = set(labels) - CONSTRAINT_LABELS
        if bad:
            violations.append(f"constraint on {u}->{v}: unknown label(s) {sorted(bad)}")
        if POSITIVE in labels and NEGATIVE in labels:
            violations.append(f"constraint on {u}->{v}: conflicting monotonicity (+ and -)")
    return violations


def regulator_states(prn: PRN, v: int) -> list[RegulatorState]:
    """All regulator states of ``v`` in lexicographic order."""
    return list(itertools.product(*(prn.domain(u) for u in prn.regulators(v))))


def project(x: State, prn: PRN, v: int) -> RegulatorState:
    return tuple(x[u] for u in prn.regulators(v))


def enabled_in_state(t: Transition, x: State, prn: PRN) -> bool:
    return x[t.component] == t.start and project(x, prn, t.component) == t.omega


def apply_transition(x: State, t: Transition, prn: PRN | None = None) -> State:
    if x[t.component] != t.start or (prn is not None and not enabled_in_state(t, x, prn)):
        raise ValueError(f"transition {t} is not enabled in state {x}")
    return x[:t.component] + (t.end,) + x[t.component + 1:]


def transitions_of(prn: PRN, v: int) -> Iterator[Transition]:
    omegas = regulator_states(prn, v)
    for i in range(prn.max_values[v]):
        for w in omegas:
            yield Transition(v, i, i + 1, w)
            yield Transition(v, i + 1, i, w)


def all_transitions(prn: PRN) -> set[Transition]:
    return {t for v in range(prn.n) for t in transitions_of(prn, v)}


def local_transitions(x: State, prn: PRN) -> Iterable[Transition]:
    """The (at most two per component) transitions whose source is ``x``."""
    for v in range(prn.n):
        w = project(x, prn, v)
        k = x[v]
        if k < prn.max_values[v]:
            yield Transition(v, k, k + 1, w)
        if k > 0:
            yield Transition(v, k, k - 1, w)
