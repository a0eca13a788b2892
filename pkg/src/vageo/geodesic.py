"""Deciding geodesicity.

Two independent routes:

* :func:`build_ball` / :func:`is_geodesic_oracle` -- uniform-cost search in the
  weighted Cayley graph over the generators.  This is the brute-force oracle.
* :func:`is_geodesic_pattern` / :func:`is_geodesic_word` -- a patterned word
  ``(v, pi)`` is geodesic iff no patterned word ``(u, tau)`` with the same
  coset ``rho(tau) = rho(pi)`` and the same Z^n part is strictly lighter.
  That existence question is answered either by a search over patterned
  words (``method="search"``) or literally, as lattice-point queries on
  ``{u >= 0, Psi_tau(u) = target, Omega_tau(u) < W}`` for every pattern
  ``tau`` (``method="polyhedral"``; exponential, small specs only).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .group import Element, GroupSpec, Word, evaluate_word, multiply, word_weight
from .polyhedra import BasicSet, eq, exists_point, gt
from .shuffle import (
    AlphabetYP,
    Pattern,
    PatternedWord,
    enumerate_patterns,
    pattern_affine,
    pattern_maps,
    pattern_maps_counts,
    densify,
    shuffle_sparse,
)


class RadiusError(ValueError):
    pass


@dataclass
class BallTable:
    radius: int
    lengths: dict[Element, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.lengths)

    def __contains__(self, e):
        return e in self.lengths

    def length(self, e: Element) -> Optional[int]:
        """Weighted length of ``e``, or None if it exceeds the radius."""
        return self.lengths.get(e)


def build_ball(spec: GroupSpec, radius: int) -> BallTable:
    """Exact weighted lengths of all elements within ``radius`` (Dijkstra)."""
    ball = BallTable(radius, {spec.identity: 0})
    heap = [(0, spec.identity)]
    done = set()
    while heap:
        w, e = heapq.heappop(heap)
        if e in done:
            continue
        done.add(e)
        for g in spec.generators:
            nw = w + g.weight
            if nw > radius:
                continue
            f = multiply(spec, e, g.element)
            if nw < ball.lengths.get(f, radius + 1):
                ball.lengths[f] = nw
                heapq.heappush(heap, (nw, f))
    return ball


def is_geodesic_oracle(spec: GroupSpec, ball: BallTable, sigma: Sequence[str]) -> bool:
    w = word_weight(spec, sigma)
    if w > ball.radius:
        raise RadiusError(f"word weight {w} exceeds ball radius {ball.radius}")
    return ball.lengths[evaluate_word(spec, sigma)] == w


class PatternMetric:
    """Least weight of a patterned word representing each element.

    Dijkstra over states ``(cosets of earlier proper prefixes, element)``:
    a ``Y`` letter extends the current block, and a ``P`` letter may be
    appended only while the current coset is new, which is exactly the
    pattern condition.  The search is resumable, so the radius grows on
    demand.
    """

    def __init__(self, yp: AlphabetYP):
        self.yp = yp
        spec = yp.spec
        ymoves: dict[tuple, int] = {}
        for y in yp.Y:
            key = y.element.z
            ymoves[key] = min(y.weight, ymoves.get(key, y.weight))
        pmoves: dict[Element, int] = {}
        for p in yp.P:
            e, w = yp.element_of(p), yp.weight_of(p)
            pmoves[e] = min(w, pmoves.get(e, w))
        self._ymoves = [(Element(z, 1), w) for z, w in sorted(ymoves.items())]
        self._pmoves = sorted(pmoves.items())
        self._spec = spec
        start = (0, 0, spec.identity)  # (weight, bitmask of used cosets, element)
        self._heap = [start]
        self._dist = {(0, spec.identity): 0}
        self._settled: set = set()
        self.best: dict[Element, int] = {}
        self.radius = -1

    def extend(self, radius: int):
        if radius <= self.radius:
            return
        spec, heap, dist = self._spec, self._heap, self._dist
        while heap and heap[0][0] <= radius:
            w, used, e = heapq.heappop(heap)
            state = (used, e)
            if state in self._settled or dist.get(state, w) < w:
                continue
            self._settled.add(state)
            if w < self.best.get(e, w + 1):
                self.best[e] = w
            for y, wy in self._ymoves:
                self._relax(w + wy, used, multiply(spec, e, y))
            bit = 1 << e.t
            if not used & bit:
                for p, wp in self._pmoves:
                    self._relax(w + wp, used | bit, multiply(spec, e, p))
        self.radius = radius

    def _relax(self, w, used, e):
        state = (used, e)
        if w < self._dist.get(state, w + 1):
            self._dist[state] = w
            heapq.heappush(self._heap, (w, used, e))

    def shortest(self, e: Element, bound: int) -> Optional[int]:
        """Least patterned-word weight for ``e`` if it is at most ``bound``."""
        self.extend(bound)
        w = self.best.get(e)
        return w if w is not None and w <= bound else None


def pattern_metric(yp: AlphabetYP) -> PatternMetric:
    metric = getattr(yp, "_pattern_metric", None)
    if metric is None:
        metric = PatternMetric(yp)
        yp._pattern_metric = metric
    return metric


def lighter_witness(yp: AlphabetYP, target: Element, weight: int):
    """First ``(tau, u)`` with ``u^tau`` equal to ``target`` and lighter than ``weight``.

    Patterns are scanned in :func:`enumerate_patterns` order and each is an
    :func:`exists_point` query on a bounded basic set.
    """
    bound = weight - 1
    if bound < 0:
        return None
    patterns, _ = enumerate_patterns(yp, max_weight=bound)
    for tau in patterns:
        if tau.coset != target.t:
            continue
        rows, offset, weights, base = pattern_affine(yp, tau)
        budget = bound - base
        dim = len(rows)
        atoms = [gt([int(i == j) for j in range(dim)], -1) for i in range(dim)]
        for c in range(yp.n):
            atoms.append(eq([r[c] for r in rows], target.z[c] - offset[c]))
        atoms.append(gt([-x for x in weights], -budget - 1))
        box = [(0, budget // w) for w in weights]
        u = exists_point(BasicSet(dim, tuple(atoms)), box)
        if u is not None:
            return tau, u
    return None


def is_geodesic_pattern(yp: AlphabetYP, pw: PatternedWord, method: str = "search") -> bool:
    z, weight = pattern_maps(yp, pw.pattern, pw.v)
    target = Element(z, pw.pattern.coset)
    if method == "search":
        return pattern_metric(yp).shortest(target, weight - 1) is None
    if method == "polyhedral":
        return lighter_witness(yp, target, weight) is None
    raise ValueError(f"unknown method {method!r}")


def is_geodesic_counts(yp: AlphabetYP, pattern: Pattern, counts: dict[int, int]) -> bool:
    """:func:`is_geodesic_pattern` (search method) on a sparse vector."""
    z, weight = pattern_maps_counts(yp, pattern, counts)
    return pattern_metric(yp).shortest(Element(z, pattern.coset), weight - 1) is None


def is_geodesic_word(yp: AlphabetYP, sigma: Sequence[str], method: str = "search") -> bool:
    pattern, counts, _ = shuffle_sparse(yp, sigma)
    if method == "search":
        return is_geodesic_counts(yp, pattern, counts)
    return is_geodesic_pattern(yp, PatternedWord(densify(yp, pattern, counts), pattern), method)
