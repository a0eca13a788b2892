import random

import pytest

from vageo.geodesic import build_ball, is_geodesic_oracle
from vageo.paths import (
    Edge, PathError, PathRecord, alpha_vector, build_congruence_dfa, build_gamma, dfa_accepts, edge_projection,
    iter_paths, parikh, path_to_word, word_to_path,
)
from vageo.shuffle import shuffle

from conftest import words_upto


@pytest.fixture(scope="module")
def gammas(yps):
    return {name: build_gamma(yp, eager=False) for name, yp in yps.items()}


def test_gamma_of_z(yps):
    g = build_gamma(yps["z"])
    assert g.start_vertices() == [((), ()), ((), ("a",)), ((), ("A",))]
    out = g.out_edges(((), ("a",)))
    assert {e.target for e in out} == {((), ()), ((), ("a",)), ((), ("A",))}
    assert {e.label for e in out} == {1} and {e.weight for e in out} == {1}
    assert g.out_edges(((), ())) == ()


def test_gamma_of_dinf(yps, gammas):
    g = gammas["dinf"]
    out = g.out_edges(((), ("r", "s")))
    assert len(out) == 7 and {e.label for e in out} == {2} and {e.weight for e in out} == {2}
    for v in g.build().vertices:
        if not v[1]:
            assert g.out_edges(v) == ()
    assert "digraph" in g.to_dot()


def test_path_examples(yps, gammas):
    d, g = yps["dinf"], gammas["dinf"]
    p = word_to_path(d, g, ())
    assert p.start == ((), ()) and p.edges == []
    assert alpha_vector(d, p) == (0,) * 4
    p = word_to_path(d, g, ("r", "s", "r"))
    assert [e.source for e in p.edges] == [((), ("r", "s")), ((), ("r",))]
    assert p.end == ((("r",),), ()) and p.labels() == [2, None]
    assert path_to_word(d, g, p) == ("r", "s", "r")
    assert alpha_vector(d, p) == (0, 1, 0, 0, 0, 0, 0, 0)
    z = yps["z"]
    assert alpha_vector(z, word_to_path(z, gammas["z"], ("a", "a", "a"))) == (3, 0)


def test_bad_paths_rejected(yps, gammas):
    d, g = yps["dinf"], gammas["dinf"]
    p = word_to_path(d, g, ("r", "s", "r"))
    with pytest.raises(PathError):
        path_to_word(d, g, PathRecord(p.start, p.edges[:1]))
    with pytest.raises(PathError):
        path_to_word(d, g, PathRecord(p.start, p.edges[1:]))
    fake = Edge(((), ("r", "s")), 3, ((), ()), 2)
    with pytest.raises(PathError):
        path_to_word(d, g, PathRecord(((), ("r", "s")), [fake]))


@pytest.mark.parametrize("name", ["z", "z2", "dinf"])
def test_bijection(yps, gammas, name):
    yp, g = yps[name], gammas[name]
    words = list(words_upto(yp.spec, 5))
    for w in words:
        p = word_to_path(yp, g, w)
        assert path_to_word(yp, g, p) == w
        assert p.weight == yp.weight_of(w)
        assert alpha_vector(yp, p) == shuffle(yp, w)[0].v
    paths = list(iter_paths(yp, g, 5))
    assert len(paths) == len(words)
    assert {path_to_word(yp, g, p) for p in paths} == set(words)


def test_path_count_matches_geodesic_count(yps, gammas):
    from vageo.growth import path_counts

    for name in ("z", "dinf", "z2"):
        yp = yps[name]
        ball = build_ball(yp.spec, 5)
        expect = [0] * 6
        for w in words_upto(yp.spec, 5):
            if is_geodesic_oracle(yp.spec, ball, w):
                expect[len(w)] += 1
        assert path_counts(yp, 5).spheres == expect


def test_parikh_and_projection(yps, gammas):
    assert parikh("ab", "abba") == (2, 2)
    with pytest.raises(KeyError):
        parikh("ab", "abc")
    d, g = yps["dinf"], gammas["dinf"]
    p = word_to_path(d, g, ("r", "s", "r"))
    pat = d.pattern(p.end[0])
    alphabet = sorted(set(p.edges), key=Edge.key)
    proj = edge_projection(d, pat, alphabet)
    assert proj(parikh(alphabet, p.edges)) == alpha_vector(d, p)
    null = [e for e in alphabet if e.label is None]
    assert proj(parikh(alphabet, null)) == (0,) * d.dim(pat)


def test_dfa_examples():
    dfa = build_congruence_dfa([(1,)], [0], [2], "a")
    assert dfa_accepts(dfa, "aa") and not dfa_accepts(dfa, "a")
    dfa = build_congruence_dfa([(1, -1)], [0], [3], "ab")
    assert not dfa_accepts(dfa, "aab")
    assert dfa_accepts(dfa, "aabb") and dfa_accepts(dfa, "abab")
    assert len(dfa.transitions()) == 3 * 2
    with pytest.raises(ValueError):
        build_congruence_dfa([(1,)], [0], [0], "a")


def test_dfa_matches_parikh_check():
    rng = random.Random(3)
    alphabet = "abc"
    zetas = [(1, 2, 0), (0, -1, 3)]
    etas, thetas = [1, 2], [3, 4]
    dfa = build_congruence_dfa(zetas, etas, thetas, alphabet)
    for _ in range(300):
        w = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        phi = parikh(alphabet, w)
        direct = all(sum(z * x for z, x in zip(zeta, phi)) % t == e % t for zeta, e, t in zip(zetas, etas, thetas))
        assert dfa_accepts(dfa, w) == direct
