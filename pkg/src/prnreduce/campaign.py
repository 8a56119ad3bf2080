"""Seeded random Boolean networks and the minimal-trace preservation campaign."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .dynamics import SearchMode, reachable
from .network import PRN
from .parametrisation import ParametrisationSet, ProductSet, initial_lattice, lattice_of, product_space
from .reduction import preservation_check


def random_prn(rng: random.Random, max_components: int = 4, max_regulators: int = 3,
               min_components: int = 2, max_value: int = 1) -> PRN:
    """A network with random influences and random sign/observability labels.

    Maximum values are drawn from ``1..max_value`` (Boolean by default).
    """
    n = rng.randint(min_components, max_components)
    names = [chr(ord("a") + k) for k in range(n)]
    influences, constraints = [], {}
    for v in names:
        k = rng.randint(0, min(max_regulators, n))
        for u in sorted(rng.sample(names, k)):
            influences.append((u, v))
            labels = set()
            sign = rng.choice(["", "+", "-"])
            if sign:
                labels.add(sign)
            if rng.random() < 0.5:
                labels.add("o")
            if labels:
                constraints[(u, v)] = labels
    return PRN.build([(c, rng.randint(1, max_value)) for c in names], influences, constraints)


def sample_parametrisations(rng: random.Random, space: ProductSet, k: int) -> ParametrisationSet:
    """Up to ``k`` members drawn independently from a factored space."""
    members = []
    for _ in range(k):
        members.append(tuple(itertools.chain.from_iterable(rng.choice(f) for f in space.factors)))
    return ParametrisationSet(space.prn, members)


@dataclass
class Instance:
    index: int
    prn: PRN
    initial: tuple
    goal: tuple
    sampled: bool
    minimal_traces: int
    violations: list
    reached_before: bool | None
    reached_after: bool | None

    @property
    def discrepancy(self) -> bool:
        return self.reached_before != self.reached_after


@dataclass
class CampaignReport:
    seed: int
    max_len: int
    instances: list[Instance] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(len(i.violations) for i in self.instances)

    @property
    def discrepancies(self) -> int:
        return sum(i.discrepancy for i in self.instances)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "max_len": self.max_len,
            "instances": len(self.instances),
            "minimal_traces": sum(i.minimal_traces for i in self.instances),
            "violations": self.violations,
            "reachability_discrepancies": self.discrepancies,
            "failures": [
                {"index": i.index, "components": [n for n, _ in i.prn.components],
                 "influences": [list(e) for e in i.prn.influences],
                 "violations": [v.reason for v in i.violations],
                 "reached_before": i.reached_before, "reached_after": i.reached_after}
                for i in self.instances if i.violations or i.discrepancy
            ],
        }


def run_instance(index: int, rng: random.Random, max_len: int, **shape) -> Instance:
    """One random instance.

    Half of the instances use the whole admissible space; the others a small
    random sample of parametrisations (with its bounding lattice), which makes
    unreachable goals common.
    """
    prn = random_prn(rng, **shape)
    x = tuple(rng.randint(0, m) for m in prn.max_values)
    g = rng.randrange(prn.n)
    goal = (g, rng.choice([k for k in prn.domain(g) if k != x[g]]))
    space = product_space(prn)
    sampled = rng.random() < 0.5 and len(space) > 0
    if sampled:
        pset = sample_parametrisations(rng, space, rng.randint(1, 3))
        lat0 = lattice_of(pset, prn)
    else:
        pset = space
        lat0 = initial_lattice(prn)
    report = preservation_check(prn, pset, x, goal, max_len, lat0)
    before = reachable(prn, x, goal, lat0, SearchMode.EXACT, stop_at_goal=True).reached
    after = reachable(report.result.dprn, x, goal, lat0, SearchMode.EXACT, stop_at_goal=True).reached
    return Instance(index, prn, x, goal, sampled, len(report.traces), report.violations, before, after)


def run_campaign(seed: int, count: int = 100, max_len: int = 8, **shape) -> CampaignReport:
    rng = random.Random(seed)
    report = CampaignReport(seed, max_len)
    for k in range(count):
        report.instances.append(run_instance(k, rng, max_len, **shape))
    return report
