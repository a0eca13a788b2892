"""Patterned words and the word shuffling algorithm.

Words of length at most ``d`` are split into ``Y`` (words landing in Z^n) and
``P`` (shorter words that leave Z^n).  A pattern is a word over ``P`` whose
proper prefixes lie in pairwise distinct cosets, and a patterned word
``(v, pi)`` stands for

    (y_1^v_1 ... y_m^v_m) pi_1 (y_1^v_{m+1} ...) pi_2 ... pi_k (... y_m^v_{(k+1)m})

:func:`shuffle` rewrites any word into a patterned word with the same element
and weight by repeatedly replacing a bounded prefix via :func:`delta`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

from .group import (
    Element,
    GroupSpec,
    Matrix,
    Vector,
    Word,
    evaluate_word,
    identity_matrix,
    mat_mul,
    multiply,
    vec_add,
    vec_mat,
    word_weight,
)


@dataclass(frozen=True)
class YWord:
    index: int  # 1-based label b of y_b
    word: Word
    element: Element
    weight: int


@dataclass(frozen=True)
class Pattern:
    letters: tuple[Word, ...]
    cosets: tuple[int, ...]  # rho of every prefix, including the full pattern
    element: Element
    weight: int

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def strong(self) -> bool:
        return len(set(self.cosets)) == len(self.cosets)

    @property
    def coset(self) -> int:
        return self.cosets[-1]

    def word(self) -> Word:
        return tuple(label for letter in self.letters for label in letter)

    def __str__(self):
        return format_pattern(self.letters)


def format_pattern(letters: Sequence[Word]) -> str:
    if not letters:
        return "ε"
    return " ".join(".".join(p) for p in letters)


def parse_pattern(text: str) -> tuple[Word, ...]:
    text = text.strip()
    if text in ("", "ε", "-", "eps"):
        return ()
    return tuple(tuple(tok.split(".")) for tok in text.split())


class AlphabetYP:
    """The alphabets ``Y`` and ``P`` for a spec, with pattern and delta caches.

    Caches are filled lazily; every cached value is a deterministic function
    of its key, so concurrent fills can only ever store identical values.
    """

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.d = spec.index
        self.n = spec.rank
        self._elements: dict[Word, Element] = {(): spec.identity}
        ys, ps = [], []
        for length in range(1, self.d + 1):
            for w in product(spec.labels, repeat=length):
                e = self.element_of(w)
                if e.t == 1:
                    ys.append(w)
                elif length <= self.d - 1:
                    ps.append(w)
        self.Y: tuple[YWord, ...] = tuple(
            YWord(i + 1, w, self.element_of(w), word_weight(spec, w)) for i, w in enumerate(ys)
        )
        self.P: tuple[Word, ...] = tuple(ps)
        self.m = len(self.Y)
        self.y_index = {y.word: y.index for y in self.Y}
        self.p_set = frozenset(self.P)
        self._patterns: dict[tuple[Word, ...], Optional[Pattern]] = {}
        self._delta: dict[tuple[tuple[Word, ...], Word], DeltaResult] = {}
        self._blocks: dict[tuple[Word, ...], tuple[Matrix, ...]] = {}
        self._block_rows: dict[Matrix, tuple[Vector, ...]] = {}
        self.empty_pattern = self.pattern(())

    def element_of(self, word: Word) -> Element:
        e = self._elements.get(word)
        if e is None:
            e = evaluate_word(self.spec, word)
            if len(word) <= self.d:
                self._elements[word] = e
        return e

    def weight_of(self, word: Word) -> int:
        return word_weight(self.spec, word)

    def is_pattern(self, letters: Sequence[Word]) -> bool:
        return self.pattern(tuple(letters), strict=False) is not None

    def pattern(self, letters: Sequence[Word], strict: bool = True) -> Optional[Pattern]:
        """Return the :class:`Pattern` for ``letters``; raise (or return None) if not a pattern."""
        letters = tuple(tuple(p) for p in letters)
        if letters not in self._patterns:
            self._patterns[letters] = self._make_pattern(letters)
        pat = self._patterns[letters]
        if pat is None and strict:
            raise ValueError(f"{format_pattern(letters)} is not a pattern")
        return pat

    def _make_pattern(self, letters):
        if len(letters) > self.d or any(p not in self.p_set for p in letters):
            return None
        e = self.spec.identity
        cosets = [e.t]
        weight = 0
        for p in letters:
            e = multiply(self.spec, e, self.element_of(p))
            cosets.append(e.t)
            weight += self.weight_of(p)
        proper = cosets[:-1]
        if len(set(proper)) != len(proper):
            return None
        return Pattern(letters, tuple(cosets), e, weight)

    def dim(self, pattern: Pattern) -> int:
        return (pattern.length + 1) * self.m


# --------------------------------------------------------------------------
# patterned words


@dataclass(frozen=True)
class PatternedWord:
    v: Vector
    pattern: Pattern

    def __str__(self):
        return f"({' '.join(map(str, self.v))} | {self.pattern})"


@dataclass(frozen=True)
class DeltaResult:
    x: Optional[int]  # 1-based coordinate, or None for the null label
    pattern: Pattern
    word: Word


@dataclass
class ShuffleTrace:
    steps: list[tuple[Vector, Pattern, Word]] = field(default_factory=list)
    # display order: the last replacement applied comes first
    replacements: list[tuple[Word, Word]] = field(default_factory=list)
    labels: list[Optional[int]] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)


def patterned_word(yp: AlphabetYP, v: Sequence[int], pattern) -> PatternedWord:
    if not isinstance(pattern, Pattern):
        pattern = yp.pattern(pattern)
    v = tuple(v)
    if len(v) != yp.dim(pattern):
        raise ValueError(f"vector of length {len(v)} does not fit pattern {pattern} (dim {yp.dim(pattern)})")
    if any(x < 0 for x in v):
        raise ValueError("patterned word vectors are nonnegative")
    return PatternedWord(v, pattern)


def project(u: Sequence[int], dim: int) -> Vector:
    """Pad with zeros or truncate ``u`` to length ``dim``."""
    u = tuple(u)
    if dim >= len(u):
        return u + (0,) * (dim - len(u))
    return u[:dim]


def unit(dim: int, x: Optional[int]) -> Vector:
    if x is None:
        return (0,) * dim
    return tuple(int(i == x - 1) for i in range(dim))


def prefix(yp: AlphabetYP, sigma: Word) -> Word:
    return tuple(sigma[: yp.d])


def factor(yp: AlphabetYP, w: Word) -> tuple[Word, int, Word]:
    """Split ``w = alpha y_b delta`` with ``(|alpha|, |y_b|)`` lexicographically minimal."""
    w = tuple(w)
    if not 1 <= len(w) <= yp.d:
        raise ValueError(f"factor needs 1 <= |w| <= {yp.d}, got {len(w)}")
    if w in yp.p_set:
        raise ValueError("factor is undefined on words of P")
    for i in range(len(w)):
        alpha = w[:i]
        if alpha and alpha not in yp.p_set:
            continue
        for j in range(i + 1, len(w) + 1):
            b = yp.y_index.get(w[i:j])
            if b is not None:
                return alpha, b, w[j:]
    raise AssertionError(f"no factoring of {w}")  # excluded by the pigeonhole argument


def delta(yp: AlphabetYP, tau: Pattern, w: Word) -> DeltaResult:
    w = tuple(w)
    key = (tau.letters, w)
    res = yp._delta.get(key)
    if res is None:
        res = _delta(yp, tau, w)
        yp._delta[key] = res
    return res


def _delta(yp, tau, w):
    if not tau.strong:
        raise ValueError(f"delta needs a strong pattern, got {tau}")
    if not 1 <= len(w) <= yp.d:
        raise ValueError(f"delta needs 1 <= |w| <= {yp.d}, got {len(w)}")
    if w in yp.p_set:
        return DeltaResult(None, yp.pattern(tau.letters + (w,)), ())
    alpha, b, rest = factor(yp, w)
    target = multiply(yp.spec, tau.element, yp.element_of(alpha)).t
    m, k = yp.m, tau.length
    for a, c in enumerate(tau.cosets):
        if c == target:
            return DeltaResult(a * m + b, tau, alpha + rest)
    # the new coset is fresh, so tau.alpha is a longer strong pattern and y_b
    # lands in its last block
    new = yp.pattern(tau.letters + (alpha,))
    return DeltaResult((k + 1) * m + b, new, rest)


def apply_delta(yp, u: Vector, tau: Pattern, sigma: Word):
    w = prefix(yp, sigma)
    res = delta(yp, tau, w)
    u2 = vec_add(project(u, yp.dim(res.pattern)), unit(yp.dim(res.pattern), res.x))
    sigma2 = res.word + tuple(sigma[len(w):])
    return res, u2, sigma2


def shuffle(yp: AlphabetYP, sigma: Iterable[str]) -> tuple[PatternedWord, ShuffleTrace]:
    sigma = tuple(sigma)
    for label in sigma:
        yp.spec.generator(label)
    tau = yp.empty_pattern
    u = (0,) * yp.m
    trace = ShuffleTrace([(u, tau, sigma)])
    while sigma:
        w = prefix(yp, sigma)
        res, u, sigma = apply_delta(yp, u, tau, sigma)
        tau = res.pattern
        trace.steps.append((u, tau, sigma))
        trace.replacements.insert(0, (w, res.word))
        trace.labels.append(res.x)
    return PatternedWord(u, tau), trace


def expand(yp: AlphabetYP, pw: PatternedWord) -> Word:
    pat, v = pw.pattern, pw.v
    if len(v) != yp.dim(pat):
        raise ValueError(f"vector of length {len(v)} does not fit pattern {pat}")
    return expand_counts(yp, pat, {i + 1: x for i, x in enumerate(v) if x})


def expand_counts(yp: AlphabetYP, pat: Pattern, counts: dict[int, int]) -> Word:
    """Expand a patterned word given by its nonzero coordinates (1-based)."""
    m = yp.m
    out: list[str] = []
    keys = sorted(counts)
    pos = 0
    for j in range(pat.length + 1):
        hi = (j + 1) * m
        while pos < len(keys) and keys[pos] <= hi:
            i = keys[pos]
            out.extend(yp.Y[i - j * m - 1].word * counts[i])
            pos += 1
        if j < pat.length:
            out.extend(pat.letters[j])
    return tuple(out)


# --------------------------------------------------------------------------
# sparse runs, for exhaustive enumeration


def _drain(yp: AlphabetYP, tau: Pattern, counts: dict, buf: Word, final: bool):
    """Apply delta while the first ``d`` letters are known (all letters if ``final``).

    Mutates ``counts``; returns the new pattern, buffer, and number of steps.
    """
    d = yp.d
    steps = 0
    while len(buf) >= d or (final and buf):
        w = buf[:d]
        res = delta(yp, tau, w)
        if res.x is not None:
            counts[res.x] = counts.get(res.x, 0) + 1
        tau = res.pattern
        buf = res.word + buf[len(w):]
        steps += 1
    return tau, buf, steps


def shuffle_sparse(yp: AlphabetYP, sigma: Iterable[str]) -> tuple[Pattern, dict[int, int], int]:
    """Same result as :func:`shuffle`, as ``(pattern, nonzero coordinates, number of delta steps)``."""
    sigma = tuple(sigma)
    for label in sigma:
        yp.spec.generator(label)
    counts: dict[int, int] = {}
    tau, _, steps = _drain(yp, yp.empty_pattern, counts, sigma, True)
    return tau, counts, steps


def densify(yp: AlphabetYP, pat: Pattern, counts: dict[int, int]) -> Vector:
    v = [0] * yp.dim(pat)
    for i, x in counts.items():
        v[i - 1] = x
    return tuple(v)


@dataclass
class ShuffledWord:
    word: Word
    weight: int
    pattern: Pattern
    counts: dict[int, int]
    steps: int

    def patterned(self, yp: AlphabetYP) -> PatternedWord:
        return PatternedWord(densify(yp, self.pattern, self.counts), self.pattern)


def iter_shuffled(yp: AlphabetYP, max_weight: int, keep=None) -> Iterator[ShuffledWord]:
    """Every word of weight at most ``max_weight`` with its shuffle, depth first.

    Words sharing a prefix share the delta steps that only look at that
    prefix.  If ``keep`` is given, only words it accepts are yielded or
    extended (use it for factor-closed families such as geodesics).
    """
    gens = yp.spec.generators
    stack = [((), 0, yp.empty_pattern, {}, (), 0)]
    while stack:
        word, w, tau, counts, buf, steps = stack.pop()
        fcounts = dict(counts)
        ftau, _, fsteps = _drain(yp, tau, fcounts, buf, True)
        sw = ShuffledWord(word, w, ftau, fcounts, steps + fsteps)
        if keep is not None and not keep(sw):
            continue
        yield sw
        for g in reversed(gens):
            nw = w + g.weight
            if nw > max_weight:
                continue
            c2 = dict(counts)
            t2, b2, s2 = _drain(yp, tau, c2, buf + (g.label,), False)
            stack.append((word + (g.label,), nw, t2, c2, b2, steps + s2))


def block_matrices(yp: AlphabetYP, pattern: Pattern) -> tuple[Matrix, ...]:
    """Matrix ``M_j`` by which block ``j`` of ``v^pattern`` is conjugated."""
    cached = yp._blocks.get(pattern.letters)
    if cached is None:
        conj: Matrix = identity_matrix(yp.n)
        mats = [conj]
        for p in pattern.letters:
            conj = mat_mul(yp.spec.action[yp.element_of(p).t], conj)
            mats.append(conj)
        cached = yp._blocks[pattern.letters] = tuple(mats)
    return cached


def _block_rows(yp: AlphabetYP, mat: Matrix) -> tuple[Vector, ...]:
    rows = yp._block_rows.get(mat)
    if rows is None:
        rows = yp._block_rows[mat] = tuple(vec_mat(y.element.z, mat) for y in yp.Y)
    return rows


def pattern_affine(yp: AlphabetYP, pattern: Pattern):
    """Coefficient rows of the element and weight maps of ``pattern``.

    Returns ``(rows, offset, weights, base_weight)``: the element part of
    ``v^pattern`` is ``sum v_i rows[i] + offset`` and its weight is
    ``sum v_i weights[i] + base_weight``.
    """
    rows: list[Vector] = []
    for mat in block_matrices(yp, pattern):
        rows.extend(_block_rows(yp, mat))
    weights = [y.weight for y in yp.Y] * (pattern.length + 1)
    return rows, pattern.element.z, weights, pattern.weight


def pattern_maps(yp: AlphabetYP, pattern: Pattern, v: Sequence[int]) -> tuple[Vector, int]:
    """Element (Z^n part) and weight of ``v^pattern`` computed from the affine maps."""
    if not isinstance(pattern, Pattern):
        pattern = yp.pattern(pattern)
    if len(v) != yp.dim(pattern):
        raise ValueError(f"vector of length {len(v)} does not fit pattern {pattern}")
    return pattern_maps_counts(yp, pattern, {i + 1: x for i, x in enumerate(v) if x})


def pattern_maps_counts(yp: AlphabetYP, pattern: Pattern, counts: dict[int, int]) -> tuple[Vector, int]:
    """:func:`pattern_maps` for a vector given by its nonzero coordinates (1-based)."""
    m = yp.m
    mats = block_matrices(yp, pattern)
    z = list(pattern.element.z)
    weight = pattern.weight
    for i, x in counts.items():
        j, r = divmod(i - 1, m)
        row = _block_rows(yp, mats[j])[r]
        for c in range(len(z)):
            z[c] += x * row[c]
        weight += x * yp.Y[r].weight
    return tuple(z), weight


def enumerate_patterns(yp: AlphabetYP, max_weight: Optional[int] = None):
    """All patterns (and the strong ones), shortest first.

    ``max_weight`` prunes patterns heavier than the bound; without it the
    full set is built, which is only sensible for small alphabets.
    """
    patt: list[Pattern] = []
    level = [yp.empty_pattern]
    while level:
        patt.extend(level)
        nxt = []
        for tau in level:
            if not tau.strong:
                continue
            for p in yp.P:
                if max_weight is not None and tau.weight + yp.weight_of(p) > max_weight:
                    continue
                pat = yp.pattern(tau.letters + (p,), strict=False)
                if pat is not None:
                    nxt.append(pat)
        level = nxt
    return patt, [p for p in patt if p.strong]


# --------------------------------------------------------------------------
# prefix replacements


class ReplacementError(ValueError):
    pass


def apply_replacements(replacements: Sequence[tuple[Word, Word]], sigma: Word) -> Word:
    """Apply ``(w_n -> w_n') ... (w_1 -> w_1') . sigma``, rightmost first."""
    sigma = tuple(sigma)
    for step, (w, w2) in enumerate(reversed(replacements), 1):
        w = tuple(w)
        if sigma[: len(w)] != w:
            raise ReplacementError(f"step {step}: {''.join(sigma)!r} does not start with {''.join(w)!r}")
        sigma = tuple(w2) + sigma[len(w):]
    return sigma


def invert_replacements(replacements: Sequence[tuple[Word, Word]]) -> list[tuple[Word, Word]]:
    return [(tuple(w2), tuple(w)) for w, w2 in reversed(replacements)]
