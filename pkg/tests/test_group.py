import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vageo.group import (
    Element, SpecError, evaluate_word, format_spec, inverse_element, make_spec, multiply, parse_spec,
    parse_word, validate_spec, word_weight,
)


def dinf(cocycle=0, r_t=-1):
    return make_spec("Dinf", 1, 2, {2: [[r_t]]}, {(2, 2): (1, (cocycle,))},
                     [("r", 1, 2, (0,)), ("s", 1, 2, (1,))])


def test_multiply_examples(specs):
    z2, d = specs["z2"], specs["dinf"]
    assert multiply(z2, Element((1, 2), 1), Element((3, -1), 1)) == Element((4, 1), 1)
    assert multiply(d, Element((0,), 2), Element((1,), 2)) == Element((-1,), 1)
    assert multiply(d, Element((1,), 2), Element((0,), 2)) == Element((1,), 1)


def test_evaluate_examples(specs):
    assert evaluate_word(specs["z2"], ("x", "x", "Y")) == Element((2, -1), 1)
    assert evaluate_word(specs["dinf"], ("r", "s", "r")) == Element((-1,), 2)
    for spec in specs.values():
        assert evaluate_word(spec, ()) == spec.identity


def test_inverse_examples(specs):
    assert inverse_element(specs["z2"], Element((3, -2), 1)) == Element((-3, 2), 1)
    assert inverse_element(specs["dinf"], Element((1,), 2)) == Element((1,), 2)
    assert inverse_element(specs["p4"], specs["p4"].identity) == specs["p4"].identity


def test_word_weight():
    spec = make_spec("Z", 1, 1, generators=[("a", 2, 1, (1,)), ("b", 3, 1, (-1,))])
    assert word_weight(spec, ()) == 0
    assert word_weight(spec, ("a", "b")) == 5


def test_validate_examples(specs):
    for spec in specs.values():
        assert validate_spec(spec).ok
    assert validate_spec(dinf()).ok
    # t(tt) = -5 t but (tt)t = 5 t: a nonzero cocycle here breaks associativity
    assert validate_spec(dinf(cocycle=5)).codes() == {"cocycle"}
    rep = validate_spec(dinf(r_t=2))
    assert not rep.ok and "det" in rep.codes()


def test_validate_bad_weight_and_labels():
    spec = make_spec("Z", 1, 1, generators=[("a", 0, 1, (1,)), ("a", 1, 1, (-1,))])
    assert {"weight", "generator"} <= validate_spec(spec).codes()


def test_validate_generation_warning():
    spec = make_spec("Z2", 2, 1, generators=[("x", 1, 1, (1, 0))])
    rep = validate_spec(spec)
    assert rep.ok and rep.warnings


def test_spec_text_roundtrip(specs):
    for spec in specs.values():
        again = parse_spec(format_spec(spec))
        assert again.action == spec.action
        assert again.coset_mul == spec.coset_mul
        assert again.generators == spec.generators


def test_parse_errors():
    with pytest.raises(SpecError):
        parse_spec("group G\nrank 1\nindex 1\ngen a 1 1 x\n")
    with pytest.raises(SpecError):
        parse_spec("gen a 1 1 1\n")


def test_unknown_label(specs):
    with pytest.raises(KeyError):
        evaluate_word(specs["z"], parse_word("a q"))


def _elements(spec):
    return st.lists(st.sampled_from(spec.labels), max_size=6).map(lambda w: evaluate_word(spec, w))


@pytest.mark.parametrize("name", ["z2", "dinf", "p4"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_associative_with_inverses(specs, name, data):
    spec = specs[name]
    a, b, c = (data.draw(_elements(spec)) for _ in range(3))
    assert multiply(spec, multiply(spec, a, b), c) == multiply(spec, a, multiply(spec, b, c))
    assert multiply(spec, a, inverse_element(spec, a)) == spec.identity
    assert multiply(spec, inverse_element(spec, a), a) == spec.identity


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(["r", "s"]), max_size=10), st.lists(st.sampled_from(["r", "s"]), max_size=10))
def test_evaluate_is_a_homomorphism(u, v):
    spec = dinf()
    assert evaluate_word(spec, u + v) == multiply(spec, evaluate_word(spec, u), evaluate_word(spec, v))


def test_mutating_the_action_is_caught(specs):
    spec = specs["p4"]
    action = dict(spec.action)
    m = [list(r) for r in action[2]]
    m[0][0] += 1
    action[2] = tuple(map(tuple, m))
    bad = dataclasses.replace(spec, action=action)
    assert validate_spec(bad).codes() & {"det", "action"}
