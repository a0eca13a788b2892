"""The weighted graph of shuffle steps, paths through it, and Parikh tools.

Vertices are pairs ``[tau, w]`` of a pattern and a short word.  A strong
pattern with nonempty ``w`` has edges labelled by the coordinate that
:func:`~vageo.shuffle.delta` increments, and a path from ``[eps, w]`` to
``[pi, eps]`` is the same thing as a run of the shuffle algorithm.  Words and
paths are in weight-preserving bijection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

from .group import Word
from .polyhedra import AffineMap
from .shuffle import (
    AlphabetYP,
    Pattern,
    apply_replacements,
    delta,
    format_pattern,
    prefix,
    shuffle,
)

Vertex = tuple[tuple[Word, ...], Word]  # (pattern letters, word)


@dataclass(frozen=True)
class Edge:
    source: Vertex
    label: Optional[int]
    target: Vertex
    weight: int

    def key(self) -> str:
        """Canonical serialization used as an edge letter."""
        return f"{vertex_str(self.source)}|{'∅' if self.label is None else self.label}|{vertex_str(self.target)}"


def vertex_str(v: Vertex) -> str:
    letters, w = v
    return f"[{format_pattern(letters)}, {''.join(w) if w else 'ε'}]"


class GammaGraph:
    """Reachable part of the graph, expanded lazily from the start vertices."""

    def __init__(self, yp: AlphabetYP):
        self.yp = yp
        self._out: dict[Vertex, tuple[Edge, ...]] = {}

    def words_upto(self, length: int) -> Iterable[Word]:
        for k in range(length + 1):
            yield from product(self.yp.spec.labels, repeat=k)

    def start_vertices(self) -> list[Vertex]:
        return [((), w) for w in self.words_upto(self.yp.d)]

    def out_edges(self, v: Vertex) -> tuple[Edge, ...]:
        edges = self._out.get(v)
        if edges is not None:
            return edges
        yp = self.yp
        letters, w = v
        tau = yp.pattern(letters, strict=False)
        out = []
        if tau is not None and tau.strong and len(w) >= 1:
            res = delta(yp, tau, w)
            weight = yp.weight_of(w) - yp.weight_of(res.word)
            if len(w) == yp.d:
                for xi in self.words_upto(yp.d - len(res.word)):
                    out.append(Edge(v, res.x, (res.pattern.letters, res.word + xi), weight))
            else:
                out.append(Edge(v, res.x, (res.pattern.letters, res.word), weight))
        edges = tuple(out)
        self._out[v] = edges
        return edges

    def has_edge(self, e: Edge) -> bool:
        return e in self.out_edges(e.source)

    def build(self, max_vertices: int = 200_000) -> GammaGraph:
        """Expand everything reachable from the start vertices."""
        stack = self.start_vertices()
        seen = set(stack)
        while stack:
            v = stack.pop()
            for e in self.out_edges(v):
                if e.target not in seen:
                    seen.add(e.target)
                    if len(seen) > max_vertices:
                        raise MemoryError(f"reachable graph exceeds {max_vertices} vertices")
                    stack.append(e.target)
        return self

    @property
    def vertices(self) -> set[Vertex]:
        vs = set(self._out)
        for edges in self._out.values():
            vs.update(e.target for e in edges)
        return vs

    @property
    def edges(self) -> list[Edge]:
        return [e for edges in self._out.values() for e in edges]

    def to_dot(self) -> str:
        lines = ["digraph Gamma {"]
        ids = {v: i for i, v in enumerate(sorted(self.vertices, key=lambda v: (len(v[0]), v)))}
        for v, i in ids.items():
            lines.append(f'  v{i} [label="{vertex_str(v)}"];')
        for e in self.edges:
            lab = "∅" if e.label is None else e.label
            lines.append(f'  v{ids[e.source]} -> v{ids[e.target]} [label="{lab}", weight={e.weight}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_gamma(yp: AlphabetYP, eager: bool = True) -> GammaGraph:
    g = GammaGraph(yp)
    return g.build() if eager else g


@dataclass
class PathRecord:
    start: Vertex
    edges: list[Edge] = field(default_factory=list)

    @property
    def weight(self) -> int:
        return sum(e.weight for e in self.edges)

    @property
    def end(self) -> Vertex:
        return self.edges[-1].target if self.edges else self.start

    def labels(self) -> list[Optional[int]]:
        return [e.label for e in self.edges]


class PathError(ValueError):
    pass


def word_to_path(yp: AlphabetYP, gamma: GammaGraph, sigma: Sequence[str]) -> PathRecord:
    _, trace = shuffle(yp, sigma)
    verts = [(tau.letters, prefix(yp, s)) for _, tau, s in trace.steps]
    path = PathRecord(verts[0])
    for (src, dst), label in zip(zip(verts, verts[1:]), trace.labels):
        w_src = src[1]
        tau = yp.pattern(src[0])
        res = delta(yp, tau, w_src)
        e = Edge(src, label, dst, yp.weight_of(w_src) - yp.weight_of(res.word))
        if not gamma.has_edge(e):
            raise PathError(f"shuffle step {vertex_str(src)} -> {vertex_str(dst)} is not an edge")
        path.edges.append(e)
    return path


def path_to_word(yp: AlphabetYP, gamma: GammaGraph, path: PathRecord) -> Word:
    letters, w = path.start
    if letters or len(w) > yp.d:
        raise PathError(f"paths start at [ε, w] with |w| <= d, got {vertex_str(path.start)}")
    if path.end[1]:
        raise PathError(f"path ends at {vertex_str(path.end)}, not at an empty word")
    cur = path.start
    reps = []
    for i, e in enumerate(path.edges):
        if e.source != cur:
            raise PathError(f"edge {i} starts at {vertex_str(e.source)}, expected {vertex_str(cur)}")
        if not gamma.has_edge(e):
            raise PathError(f"edge {i} is not an edge of the graph")
        res = delta(yp, yp.pattern(e.source[0]), e.source[1])
        reps.append((res.word, e.source[1]))
        cur = e.target
    # sigma = (w1' -> w1)(w2' -> w2) ... (w_q' -> w_q) . eps
    return apply_replacements(reps, ())


def alpha_vector(yp: AlphabetYP, path: PathRecord) -> tuple[int, ...]:
    pat = yp.pattern(path.end[0])
    v = [0] * yp.dim(pat)
    for e in path.edges:
        if e.label is not None:
            v[e.label - 1] += 1
    return tuple(v)


def iter_paths(yp: AlphabetYP, gamma: GammaGraph, max_weight: int):
    """All complete paths of weight at most ``max_weight``, depth first."""
    for start in gamma.start_vertices():
        if yp.weight_of(start[1]) > max_weight and len(start[1]) < yp.d:
            continue
        stack = [(start, [], 0)]
        while stack:
            v, edges, w = stack.pop()
            if not v[1]:
                yield PathRecord(start, edges)
                continue
            for e in gamma.out_edges(v):
                if w + e.weight <= max_weight:
                    stack.append((e.target, edges + [e], w + e.weight))


# --------------------------------------------------------------------------
# Parikh vectors and the congruence automaton


def parikh(alphabet: Sequence, word: Iterable) -> tuple[int, ...]:
    index = {a: i for i, a in enumerate(alphabet)}
    counts = [0] * len(alphabet)
    for letter in word:
        try:
            counts[index[letter]] += 1
        except KeyError:
            raise KeyError(f"letter {letter!r} not in the alphabet") from None
    return tuple(counts)


def edge_projection(yp: AlphabetYP, pattern: Pattern, alphabet: Sequence[Edge]) -> AffineMap:
    """Linear map sending the Parikh vector of an edge word to its label counts in N_pi."""
    dim = yp.dim(pattern)
    rows = []
    for e in alphabet:
        x = e.label
        rows.append(tuple(int(x is not None and i == x - 1) for i in range(dim)))
    return AffineMap(tuple(rows), (0,) * dim)


@dataclass(frozen=True)
class CongruenceDFA:
    """Deterministic automaton over residues, accepting iff zeta_j . Phi(w) = eta_j mod theta_j."""

    alphabet: tuple
    zetas: tuple[tuple[int, ...], ...]
    moduli: tuple[int, ...]
    accept: tuple[int, ...]

    @property
    def initial(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def step(self, state: tuple[int, ...], letter) -> tuple[int, ...]:
        i = self._index[letter]
        return tuple((s + z[i]) % t for s, z, t in zip(state, self.zetas, self.moduli))

    @property
    def _index(self):
        return {a: i for i, a in enumerate(self.alphabet)}

    def states(self):
        return product(*(range(t) for t in self.moduli))

    def transitions(self) -> dict:
        return {(s, a): self.step(s, a) for s in self.states() for a in self.alphabet}


def build_congruence_dfa(zetas, etas, thetas, alphabet) -> CongruenceDFA:
    zetas = tuple(tuple(z) for z in zetas)
    thetas = tuple(int(t) for t in thetas)
    if any(t < 1 for t in thetas):
        raise ValueError("moduli must be positive")
    if any(len(z) != len(alphabet) for z in zetas):
        raise ValueError("coefficient vectors must match the alphabet")
    accept = tuple(e % t for e, t in zip(etas, thetas))
    return CongruenceDFA(tuple(alphabet), zetas, thetas, accept)


def dfa_accepts(dfa: CongruenceDFA, word: Iterable) -> bool:
    index = dfa._index
    state = list(dfa.initial)
    for letter in word:
        i = index[letter]
        for j, (z, t) in enumerate(zip(dfa.zetas, dfa.moduli)):
            state[j] = (state[j] + z[i]) % t
    return tuple(state) == dfa.accept
