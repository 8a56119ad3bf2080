"""Property-based checks on random small networks."""

import itertools
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from prnreduce.campaign import random_prn
from prnreduce.cover import ValueChange, compute_cover_set, spec_count, verify_cover_set
from prnreduce.dynamics import SearchMode, enumerate_minimal_traces, explore, is_subsequence
from prnreduce.network import PRN, all_transitions, regulator_states
from prnreduce.parametrisation import (
    ParametrisationLattice,
    ParametrisationSet,
    enumerate_parametrisations,
    full_box,
    initial_lattice,
    monotone_closure,
    psi_abstract,
    psi_concrete,
    restrict_lattice,
)
from prnreduce.reduction import reduce

seeds = st.integers(min_value=0, max_value=10**6)
FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def small_prn(seed, max_value=1):
    return random_prn(random.Random(seed), max_components=3, max_regulators=2, max_value=max_value)


def transitions(prn):
    return sorted(all_transitions(prn), key=lambda t: (t.component, t.start, t.end, t.omega))


def random_box(prn, rng):
    lo, hi = [], []
    for v, _ in prn.parameters:
        a, b = sorted(rng.randint(0, prn.max_values[v]) for _ in range(2))
        lo.append(a)
        hi.append(b)
    return ParametrisationLattice(tuple(lo), tuple(hi), prn)


@FAST
@given(seeds, st.integers(1, 2))
def test_closure_idempotent_and_sound(seed, m):
    prn = small_prn(seed, m)
    rng = random.Random(seed)
    box = random_box(prn, rng)
    closed = monotone_closure(box, prn)
    assert monotone_closure(closed, prn) == closed
    assert box.includes(closed) or closed.is_empty
    # no admissible parametrisation inside the box is lost
    if m == 1:
        for P in enumerate_parametrisations(prn):
            if P in box:
                assert P in closed


@FAST
@given(seeds)
def test_restrict_commutes(seed):
    prn = small_prn(seed)
    rng = random.Random(seed)
    ts = transitions(prn)
    t1, t2 = rng.choice(ts), rng.choice(ts)
    lat = initial_lattice(prn)
    a = restrict_lattice(restrict_lattice(lat, t1), t2)
    b = restrict_lattice(restrict_lattice(lat, t2), t1)
    assert a.is_empty == b.is_empty
    if not a.is_empty:
        assert a == b


@FAST
@given(seeds)
def test_antitone_and_sound(seed):
    prn = small_prn(seed)
    rng = random.Random(seed)
    ts = transitions(prn)
    space = enumerate_parametrisations(prn)
    T = set(rng.sample(ts, rng.randint(0, min(4, len(ts)))))
    T2 = T | set(rng.sample(ts, rng.randint(0, min(3, len(ts)))))
    a, a2 = psi_abstract(T, prn), psi_abstract(T2, prn)
    assert a2.is_empty or (not a.is_empty and a.includes(a2))
    c, c2 = set(psi_concrete(T, prn, space)), set(psi_concrete(T2, prn, space))
    assert c2 <= c
    assert all(P in a for P in c)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(0, 4), st.integers(1, 2))
def test_cover_contracts(seed, n_regs, m):
    rng = random.Random(seed)
    comps = [("v", m)] + [(f"r{k}", rng.randint(1, m)) for k in range(n_regs)]
    prn = PRN.build(comps, [(f"r{k}", "v") for k in range(n_regs)])
    table = {w: rng.random() < rng.random() for w in regulator_states(prn, 0)}
    cs = compute_cover_set(prn, ValueChange(0, 0, 1), table.__getitem__)
    assert verify_cover_set(prn, cs, table.__getitem__)
    assert spec_count(cs) <= n_regs * sum(table.values())


def test_parametrisation_independence():
    """A minimal trace stays minimal under every single parametrisation that realises it."""
    rng = random.Random(5)
    checked = 0
    for _ in range(40):
        prn = random_prn(rng, max_components=3, max_regulators=2)
        space = enumerate_parametrisations(prn)
        if not len(space):
            continue
        x = tuple(rng.randint(0, 1) for _ in range(prn.n))
        g = rng.randrange(prn.n)
        goal = (g, 1 - x[g])
        for trace in enumerate_minimal_traces(prn, space, x, goal, 5):
            for P in psi_concrete(trace.steps, prn, space):
                single = enumerate_minimal_traces(prn, ParametrisationSet(prn, [P]), x, goal, len(trace))
                assert trace in single
                checked += 1
    assert checked > 20


@FAST
@given(seeds)
def test_exploration_bounded(seed):
    prn = small_prn(seed)
    rng = random.Random(seed)
    x = tuple(rng.randint(0, 1) for _ in range(prn.n))
    res = explore(prn, x)
    n_states = 2 ** prn.n
    # per Boolean parameter the closed bounds take one of three (L, U) shapes
    assert res.configurations <= n_states * 3 ** prn.num_parameters
    assert res.states <= n_states


@FAST
@given(seeds)
def test_reduction_idempotent_and_approx_permissive(seed):
    prn = small_prn(seed)
    rng = random.Random(seed)
    x = tuple(rng.randint(0, 1) for _ in range(prn.n))
    goal = (rng.randrange(prn.n), rng.randint(0, 1))
    d = reduce(prn, x, goal)
    assert reduce(d, x, goal) == d
    approx = reduce(prn, x, goal, mode=SearchMode.APPROXIMATE)
    assert all(a >= e for a, e in zip(approx.activation, d.activation))
    assert all(a <= e for a, e in zip(approx.inhibition, d.inhibition))


def test_subsequence_helper():
    assert is_subsequence([], [1, 2])
    assert is_subsequence([1, 3], [1, 2, 3])
    assert not is_subsequence([3, 1], [1, 2, 3])
    assert all(is_subsequence(c, "abcd") for r in range(5) for c in itertools.combinations("abcd", r))
