import json

import pytest

from prnreduce.modelfile import (
    ParseError,
    load_model,
    model_from_json,
    model_to_json,
    parse_goal,
    parse_model,
    parse_state,
    print_model,
)

from conftest import MODEL_PATH

HEAD = "component a 1\ncomponent b 1\n"


def test_four_gene_file(ref_model):
    prn = ref_model.prn
    assert prn.n == 4 and len(prn.influences) == 6
    assert set(ref_model.parametrisations) == {"P", "P'"}
    with open(MODEL_PATH, encoding="utf-8") as fh:
        rows = [ln for ln in fh if ln.startswith("param P ")]
    assert len(rows) == 14
    assert ref_model.initial == (0, 0, 0, 0)
    assert ref_model.goal == (0, 1)


def test_round_trip(ref_model):
    assert parse_model(print_model(ref_model)) == ref_model
    data = model_to_json(ref_model)
    assert model_from_json(json.dumps(data)) == ref_model
    assert model_to_json(model_from_json(data)) == data


def test_json_file(tmp_path, ref_model):
    path = tmp_path / "four_gene.json"
    path.write_text(json.dumps(model_to_json(ref_model)), encoding="utf-8")
    assert load_model(str(path)) == ref_model
    assert load_model(str(path), "json") == ref_model


def test_unknown_component_in_influence():
    with pytest.raises(ParseError, match="unknown component 'x'") as exc:
        parse_model("component a 1\ninfluence x -> a +\n")
    assert exc.value.line == 2


@pytest.mark.parametrize("text, line, col, message", [
    ("component a 1\nnode b 1\n", 2, 1, "unknown declaration"),
    ("component a 1\ncomponent a 1\n", 2, 11, "duplicate component"),
    (HEAD + "influence a -> b +\ninfluence a -> b -\n", 4, 1, "duplicate influence"),
    (HEAD + "influence a -> b +x\n", 3, 18, "invalid constraint labels"),
    ("component a one\n", 1, 13, "must be an integer"),
    (HEAD + "initial a=0,b=0\ninitial a=1,b=0\n", 4, 1, "duplicate 'initial'"),
    (HEAD + "goal a=1\ngoal b=1\n", 4, 1, "duplicate 'goal'"),
    (HEAD + "initial a=0,b:0\n", 3, 13, "expected <name>=<value>"),
    (HEAD + "initial a=0,b=2\n", 3, 13, "outside the domain"),
])
def test_diagnostics(text, line, col, message):
    with pytest.raises(ParseError, match=message) as exc:
        parse_model(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert f":{line}:{col}:" in str(exc.value)


def test_semantic_errors():
    with pytest.raises(ParseError, match="conflicting monotonicity"):
        parse_model(HEAD + "influence a -> b +-\n")
    with pytest.raises(ParseError, match="misses component"):
        parse_model(HEAD + "initial a=0\n")
    with pytest.raises(ParseError, match="unknown goal component"):
        parse_model(HEAD + "goal z=1\n")


def test_parametrisation_rows():
    base = HEAD + "influence a -> b +o\n"
    ok = base + "param Q a |  | 1\nparam Q b | a=0 | 0\nparam Q b | a=1 | 1\n"
    m = parse_model(ok)
    assert m.parametrisations == {"Q": (1, 0, 1)}
    with pytest.raises(ParseError, match="misses 1 parameter"):
        parse_model(base + "param Q a |  | 1\nparam Q b | a=0 | 0\n")
    with pytest.raises(ParseError, match="duplicate parameter row"):
        parse_model(ok + "param Q b | a=1 | 1\n")
    with pytest.raises(ParseError, match="exactly its regulators"):
        parse_model(base + "param Q a | b=0 | 1\n")
    with pytest.raises(ParseError, match="violates the influence constraints"):
        parse_model(base + "param Q a |  | 1\nparam Q b | a=0 | 1\nparam Q b | a=1 | 1\n")


def test_comments_and_blank_lines():
    m = parse_model("# header\n\ncomponent a 1   # trailing\n  component b 2\n")
    assert m.prn.components == (("a", 1), ("b", 2))


def test_json_unknown_key():
    with pytest.raises(ParseError, match="unknown key"):
        model_from_json({"components": [], "extras": 1})


def test_flag_parsers(net):
    assert parse_state(net, "a=0,b=1,c=0,d=1") == (0, 1, 0, 1)
    assert parse_goal(net, "c=1") == (2, 1)
    with pytest.raises(ParseError):
        parse_goal(net, "a=1,b=1")
