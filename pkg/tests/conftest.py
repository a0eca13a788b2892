from itertools import product

import pytest

from vageo.group import corpus_spec
from vageo.shuffle import AlphabetYP

CORPUS = ("z", "z2", "dinf", "p4")


@pytest.fixture(scope="session")
def specs():
    return {name: corpus_spec(name) for name in CORPUS}


@pytest.fixture(scope="session")
def yps(specs):
    return {name: AlphabetYP(spec) for name, spec in specs.items()}


def words_upto(spec, length):
    for k in range(length + 1):
        yield from product(spec.labels, repeat=k)


def random_atom(rng, dim):
    from vageo.polyhedra import Atom, CONG, EQ, GT

    a = tuple(rng.randint(-2, 2) for _ in range(dim))
    kind = rng.choice([EQ, GT, GT, CONG])
    if kind == CONG:
        return Atom(CONG, a, rng.randint(0, 3), rng.randint(1, 4))
    return Atom(kind, a, rng.randint(-4, 4))


def random_polyset(rng, dim, max_basics=3, max_atoms=3):
    from vageo.polyhedra import BasicSet, PolySet

    basics = []
    for _ in range(rng.randint(0, max_basics)):
        atoms = tuple(random_atom(rng, dim) for _ in range(rng.randint(0, max_atoms)))
        basics.append(BasicSet(dim, atoms))
    return PolySet(dim, tuple(basics))
