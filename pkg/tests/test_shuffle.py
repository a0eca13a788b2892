import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vageo.group import evaluate_word, word_weight
from vageo.shuffle import (
    PatternedWord, ReplacementError, apply_replacements, delta, densify, enumerate_patterns, expand, factor,
    invert_replacements, iter_shuffled, pattern_maps, patterned_word, project, shuffle, shuffle_sparse,
)

from conftest import words_upto


def test_alphabets(yps):
    assert [y.word for y in yps["z"].Y] == [("a",), ("A",)] and yps["z"].P == ()
    d = yps["dinf"]
    assert [y.word for y in d.Y] == [("r", "r"), ("r", "s"), ("s", "r"), ("s", "s")]
    assert [y.element.z for y in d.Y] == [(0,), (-1,), (1,), (0,)]
    assert d.P == (("r",), ("s",)) and d.m == 4
    assert yps["z2"].P == () and yps["z2"].m == 4


def test_factor(yps):
    d = yps["dinf"]
    assert factor(d, ("r", "s")) == ((), 2, ())
    assert factor(d, ("r", "r")) == ((), 1, ())
    assert factor(yps["z2"], ("x",)) == ((), 1, ())


def test_delta_examples(yps):
    d = yps["dinf"]
    eps = d.empty_pattern
    res = delta(d, eps, ("r", "s"))
    assert (res.x, res.pattern.letters, res.word) == (2, (), ())
    res = delta(d, eps, ("r",))
    assert (res.x, res.pattern.letters, res.word) == (None, (("r",),), ())
    res = delta(d, eps, ("s", "s"))
    assert (res.x, res.pattern.letters, res.word) == (4, (), ())


def test_delta_rejects_bad_input(yps):
    d = yps["dinf"]
    with pytest.raises(ValueError):
        delta(d, d.empty_pattern, ())
    with pytest.raises(ValueError):
        delta(d, d.pattern((("r",), ("s",))), ("r",))


def test_delta_drops_weight(yps):
    for name in ("dinf", "p4"):
        yp = yps[name]
        _, strong = enumerate_patterns(yp, max_weight=2)
        for tau in strong:
            for w in words_upto(yp.spec, yp.d):
                if w:
                    res = delta(yp, tau, w)
                    assert yp.weight_of(w) > yp.weight_of(res.word)


def test_last_block_increment(yps):
    """A Y letter after a fresh pattern letter goes to the new last block."""
    yp = yps["p4"]
    sigma = ("r", "x", "x", "x")
    res = delta(yp, yp.empty_pattern, sigma)
    assert res.pattern.letters == (("r",),) and res.word == ("x", "x")
    assert res.x == yp.m + yp.y_index[("x",)]
    pw, _ = shuffle(yp, sigma)
    assert pattern_maps(yp, pw.pattern, pw.v) == (evaluate_word(yp.spec, sigma).z, 4)


def test_shuffle_examples(yps):
    d = yps["dinf"]
    pw, trace = shuffle(d, ())
    assert pw.v == (0,) * 4 and pw.pattern.letters == () and len(trace) == 1
    pw, trace = shuffle(d, ("r", "s", "r"))
    assert pw.v == (0, 1, 0, 0, 0, 0, 0, 0) and str(pw.pattern) == "r"
    assert [(u, str(t), s) for u, t, s in trace.steps] == [
        ((0, 0, 0, 0), "ε", ("r", "s", "r")),
        ((0, 1, 0, 0), "ε", ("r",)),
        ((0, 1, 0, 0, 0, 0, 0, 0), "r", ()),
    ]
    pw, _ = shuffle(yps["z2"], ("x", "X", "y"))
    assert pw.v == (1, 1, 1, 0)


def test_expand_examples(yps):
    d = yps["dinf"]
    assert expand(d, patterned_word(d, (0, 1, 0, 0, 0, 0, 0, 0), [("r",)])) == ("r", "s", "r")
    assert expand(d, patterned_word(d, (0, 0, 0, 0), [])) == ()
    z2 = yps["z2"]
    assert expand(z2, patterned_word(z2, (2, 0, 0, 1), [])) == ("x", "x", "Y")
    with pytest.raises(ValueError):
        expand(d, PatternedWord((0, 1), d.empty_pattern))


def test_pattern_maps_examples(yps):
    d = yps["dinf"]
    assert pattern_maps(d, d.pattern([("r",)]), (0, 1, 0, 0, 0, 0, 0, 0)) == ((-1,), 3)
    assert pattern_maps(d, d.empty_pattern, (0,) * 4) == ((0,), 0)
    z2 = yps["z2"]
    assert pattern_maps(z2, z2.empty_pattern, (2, 0, 0, 1)) == ((2, -1), 3)


def test_enumerate_patterns(yps):
    patt, strong = enumerate_patterns(yps["z2"])
    assert [p.letters for p in patt] == [()] and len(strong) == 1
    patt, strong = enumerate_patterns(yps["dinf"])
    assert sorted(str(p) for p in patt) == sorted(["ε", "r", "s", "r r", "r s", "s r", "s s"])
    assert sorted(str(p) for p in strong) == ["r", "s", "ε"]
    for yp in yps.values():
        assert enumerate_patterns(yp, max_weight=2)[1][0].letters == ()


def test_replacements():
    reps = [(("c",), ("d", "c")), (("b", "a"), ("c", "b")), ((), ("b",))]
    assert apply_replacements(reps, ("a", "z")) == ("d", "c", "b", "z")
    assert apply_replacements(invert_replacements(reps), ("d", "c", "b", "z")) == ("a", "z")
    assert apply_replacements([], ("q",)) == ("q",)
    with pytest.raises(ReplacementError, match="step 2"):
        apply_replacements(reps, ("z",))


def test_project():
    assert project((1, 2), 4) == (1, 2, 0, 0)
    assert project((1, 2, 3, 4), 2) == (1, 2)


@pytest.mark.parametrize("name", ["z", "z2", "dinf", "p4"])
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_shuffle_is_sound(yps, name, data):
    yp = yps[name]
    sigma = tuple(data.draw(st.lists(st.sampled_from(yp.spec.labels), max_size=9)))
    pw, trace = shuffle(yp, sigma)
    assert evaluate_word(yp.spec, expand(yp, pw)) == evaluate_word(yp.spec, sigma)
    assert word_weight(yp.spec, expand(yp, pw)) == word_weight(yp.spec, sigma)
    assert len(trace) <= len(sigma) + 1
    assert apply_replacements(trace.replacements, sigma) == ()
    assert apply_replacements(invert_replacements(trace.replacements), ()) == sigma
    for u, tau, rest in trace.steps[:-1]:
        assert tau.strong and len(u) == yp.dim(tau)
    pat, counts, steps = shuffle_sparse(yp, sigma)
    assert pat == pw.pattern and densify(yp, pat, counts) == pw.v and steps == len(trace) - 1
    assert shuffle(yp, sigma) == (pw, trace)


@pytest.mark.parametrize("name", ["dinf", "p4"])
def test_pattern_maps_on_random_patterned_words(yps, name):
    yp = yps[name]
    rng = random.Random(7)
    patt, _ = enumerate_patterns(yp, max_weight=3)
    for _ in range(1000):
        pat = rng.choice(patt)
        v = [rng.choice([0, 0, 0, 1, 2]) for _ in range(yp.dim(pat))]
        word = expand(yp, PatternedWord(tuple(v), pat))
        assert pattern_maps(yp, pat, v) == (evaluate_word(yp.spec, word).z, word_weight(yp.spec, word))


def test_iter_shuffled_matches_shuffle(yps):
    for name in ("z2", "dinf"):
        yp = yps[name]
        seen = {}
        for sw in iter_shuffled(yp, 5):
            seen[sw.word] = sw
        assert set(seen) == set(words_upto(yp.spec, 5))
        for w, sw in seen.items():
            pw, trace = shuffle(yp, w)
            assert sw.patterned(yp) == pw and sw.steps == len(trace) - 1
