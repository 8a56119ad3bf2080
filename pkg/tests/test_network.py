import pytest

from prnreduce.network import (
    PRN,
    ModelError,
    Transition,
    all_transitions,
    apply_transition,
    enabled_in_state,
    local_transitions,
    project,
    regulator_states,
    transitions_of,
    validate_model,
)

from conftest import tr


def test_four_gene_structure(net):
    assert net.names == ("a", "b", "c", "d")
    assert net.max_values == (1, 1, 1, 1)
    assert len(net.influences) == 6
    assert validate_model(net) == []
    assert [net.names[u] for u in net.regulators(0)] == ["b", "c", "d"]
    assert net.num_parameters == 14


def test_conflicting_monotonicity():
    with pytest.raises(ModelError, match="conflicting monotonicity"):
        PRN.build([("a", 1), ("b", 1)], [("b", "a")], {("b", "a"): "+-"})


def test_unknown_component():
    with pytest.raises(ModelError, match="unknown component"):
        PRN.build([("a", 1)], [("e", "a")])


def test_bad_max_value_and_duplicates():
    violations = validate_model(PRN.build([("a", 0), ("a", 1)], [], validate=False))
    assert any("maximum value" in v for v in violations)
    assert any("duplicate component" in v for v in violations)


def test_regulator_states(net):
    assert regulator_states(net, 0) == [(i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]
    assert regulator_states(net, 1) == [(0,), (1,)]
    lone = PRN.build([("x", 2)], [])
    assert regulator_states(lone, 0) == [()]


def test_parameter_order_is_component_then_lexicographic(net):
    params = net.parameters
    assert params[0] == (0, (0, 0, 0))
    assert params[7] == (0, (1, 1, 1))
    assert params[8] == (1, (0,))
    for p, (v, w) in enumerate(params):
        assert net.parameter_index(v, w) == p


def test_project(net):
    assert project((0, 1, 1, 0), net, 0) == (1, 1, 0)
    assert project((0, 0, 0, 0), net, 1) == (0,)
    lone = PRN.build([("x", 1), ("y", 1)], [("x", "y")])
    assert project((1, 0), lone, 0) == ()


def test_state_enabling(net):
    t = tr(net, "a", 0, 1, (1, 0, 0))
    assert enabled_in_state(t, (0, 1, 0, 0), net)
    assert not enabled_in_state(t, (1, 1, 0, 0), net)
    self_t = tr(net, "b", 0, 1, (1,))
    assert not any(enabled_in_state(self_t, x, net) for x in net.states())


def test_apply_transition(net):
    assert apply_transition((0, 0, 0, 0), tr(net, "b", 0, 1, (0,))) == (0, 1, 0, 0)
    assert apply_transition((0, 1, 1, 0), tr(net, "b", 1, 0, (1,))) == (0, 0, 1, 0)
    t = tr(net, "c", 0, 1, (1,))
    x = (0, 1, 0, 0)
    y = apply_transition(x, t, net)
    assert apply_transition(y, Transition(t.component, t.end, t.start, t.omega), net) == x
    with pytest.raises(ValueError):
        apply_transition((1, 1, 0, 0), tr(net, "a", 0, 1, (1, 0, 0)), net)


def test_transition_counts(net):
    assert len(all_transitions(net)) == 28
    # brute force: every (component, start, end, omega) with unit step
    brute = 0
    for v in range(net.n):
        for w in regulator_states(net, v):
            for i in net.domain(v):
                for j in net.domain(v):
                    brute += abs(i - j) == 1
    assert brute == 28
    assert len(all_transitions(PRN.build([("x", 1)], []))) == 2
    multi = PRN.build([("x", 2), ("y", 1)], [("y", "x")])
    assert len(list(transitions_of(multi, 0))) == 8


def test_local_transitions_are_enabled(net):
    for x in net.states():
        local = list(local_transitions(x, net))
        assert all(enabled_in_state(t, x, net) for t in local)
        assert set(local) == {t for t in all_transitions(net) if enabled_in_state(t, x, net)}


def test_state_helper(net):
    assert net.state({"a": 0, "b": 1, "c": 0, "d": 1}) == (0, 1, 0, 1)
    with pytest.raises(ModelError):
        net.state((0, 2, 0, 0))
