"""Virtually abelian groups given as Z^n-by-finite extension data.

Elements are kept in the normal form ``z . t`` with ``z`` in Z^n and ``t`` a
coset index in ``1..d`` (index 1 is the coset of Z^n itself).  Vectors are
row vectors and act on the right of matrices, so ``x R_t`` is conjugation of
``x`` by the coset representative ``t``.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import sympy

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]
Word = tuple[str, ...]


class SpecError(ValueError):
    """Malformed group file or inconsistent extension data."""


class Element(NamedTuple):
    z: Vector
    t: int

    def __str__(self):
        return f"(({', '.join(map(str, self.z))}), {self.t})"


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_neg(u: Sequence[int]) -> Vector:
    return tuple(-a for a in u)


def vec_mat(v: Sequence[int], m: Matrix) -> Vector:
    """Row vector times matrix."""
    n = len(m[0]) if m else 0
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def det(m: Matrix) -> int:
    return int(sympy.Matrix(m).det()) if m else 1


@dataclass(frozen=True)
class Generator:
    label: str
    weight: int
    element: Element


@dataclass(frozen=True)
class GroupSpec:
    """Extension data for a group G with Z^n normal of index d.

    ``action[t]`` is the matrix R_t with ``x R_t = t x t^-1``; ``coset_mul[(a, b)]``
    is ``(t, c)`` meaning ``t_a t_b = c . t_t``.  Rows with ``a == 1`` or
    ``b == 1`` are filled in automatically by :func:`make_spec`.
    """

    name: str
    rank: int
    index: int
    action: dict[int, Matrix]
    coset_mul: dict[tuple[int, int], tuple[int, Vector]]
    generators: tuple[Generator, ...]
    _by_label: dict[str, Generator] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_label", {g.label: g for g in self.generators})

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.generators)

    def generator(self, label: str) -> Generator:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"unknown generator label {label!r}") from None

    @property
    def identity(self) -> Element:
        return Element((0,) * self.rank, 1)

    def max_weight(self) -> int:
        return max((g.weight for g in self.generators), default=1)


def make_spec(name, rank, index, action=None, coset_mul=None, generators=()) -> GroupSpec:
    """Build a spec, filling in the implied identity coset data.

    ``generators`` is a list of ``(label, weight, t, z)`` tuples.
    """
    action = {int(t): tuple(tuple(r) for r in m) for t, m in (action or {}).items()}
    action.setdefault(1, identity_matrix(rank))
    zero = (0,) * rank
    table = {(int(a), int(b)): (int(t), tuple(c)) for (a, b), (t, c) in (coset_mul or {}).items()}
    for t in range(1, index + 1):
        table.setdefault((1, t), (t, zero))
        table.setdefault((t, 1), (t, zero))
    gens = tuple(Generator(lab, int(w), Element(tuple(z), int(t))) for lab, w, t, z in generators)
    return GroupSpec(name, rank, index, action, table, gens)


# --------------------------------------------------------------------------
# arithmetic


def multiply(spec: GroupSpec, e1: Element, e2: Element) -> Element:
    try:
        t, c = spec.coset_mul[(e1.t, e2.t)]
        r = spec.action[e1.t]
    except KeyError:
        raise SpecError(f"invalid coset index in product of {e1} and {e2}") from None
    z = tuple(a + b + k for a, b, k in zip(e1.z, vec_mat(e2.z, r), c))
    return Element(z, t)


def generator_element(spec: GroupSpec, label: str) -> Element:
    return spec.generator(label).element


def right_multiply(spec: GroupSpec, e: Element, label: str) -> Element:
    """``e`` times a generator, memoized per spec (the cache is not a dataclass field)."""
    cache = spec.__dict__.setdefault("_step_cache", {})
    key = (e, label)
    f = cache.get(key)
    if f is None:
        f = cache[key] = multiply(spec, e, spec.generator(label).element)
    return f


def evaluate_word(spec: GroupSpec, word: Iterable[str]) -> Element:
    e = spec.identity
    for label in word:
        e = right_multiply(spec, e, label)
    return e


def word_weight(spec: GroupSpec, word: Iterable[str]) -> int:
    return sum(spec.generator(label).weight for label in word)


def coset_inverse(spec: GroupSpec, t: int) -> int:
    for s in range(1, spec.index + 1):
        if spec.coset_mul[(t, s)][0] == 1:
            return s
    raise SpecError(f"coset {t} has no inverse in the coset table")


def inverse_element(spec: GroupSpec, e: Element) -> Element:
    # (z, t)(z', s) = (z + z' R_t + c(t, s), 1) = identity, and R_t^-1 = R_s.
    s = coset_inverse(spec, e.t)
    c = spec.coset_mul[(e.t, s)][1]
    z = vec_mat(vec_neg(vec_add(e.z, c)), spec.action[s])
    return Element(z, s)


def parse_word(text: str) -> Word:
    """Words on the command line and in files are whitespace separated labels."""
    return tuple(text.split())


def format_word(word: Sequence[str]) -> str:
    return " ".join(word) if word else "ε"


# --------------------------------------------------------------------------
# validation


@dataclass
class Diagnostic:
    code: str
    message: str
    witness: tuple = ()

    def __str__(self):
        w = f" (witness {self.witness})" if self.witness else ""
        return f"[{self.code}] {self.message}{w}"


@dataclass
class ValidationReport:
    errors: list[Diagnostic] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> set[str]:
        return {d.code for d in self.errors}

    def __str__(self):
        lines = ["ok" if self.ok else "invalid"]
        lines += [f"error: {d}" for d in self.errors]
        lines += [f"warning: {d}" for d in self.warnings]
        return "\n".join(lines)


def validate_spec(spec: GroupSpec, bound: int | None = None) -> ValidationReport:
    """Check every structural invariant of the extension data.

    Generation is only checked up to weight ``bound`` (default
    ``2 * d * max generator weight``) and reported as a warning.
    """
    rep = ValidationReport()
    err = rep.errors.append
    n, d = spec.rank, spec.index
    cosets = range(1, d + 1)

    if n < 1 or d < 1:
        err(Diagnostic("shape", f"rank and index must be positive, got n={n}, d={d}"))
        return rep
    for t in cosets:
        m = spec.action.get(t)
        if m is None or len(m) != n or any(len(row) != n for row in m):
            err(Diagnostic("shape", f"action matrix R_{t} missing or not {n}x{n}", (t,)))
    for a, b in product(cosets, repeat=2):
        entry = spec.coset_mul.get((a, b))
        if entry is None or len(entry[1]) != n or entry[0] not in cosets:
            err(Diagnostic("shape", f"coset product ({a},{b}) missing or malformed", (a, b)))
    if rep.errors:
        return rep

    if spec.action[1] != identity_matrix(n):
        err(Diagnostic("identity", "R_1 is not the identity matrix", (1,)))
    for t in cosets:
        dt = det(spec.action[t])
        if dt not in (1, -1):
            err(Diagnostic("det", f"det(R_{t}) = {dt}, not ±1", (t,)))
    zero = (0,) * n
    for b in cosets:
        if spec.coset_mul[(1, b)] != (b, zero):
            err(Diagnostic("identity", f"coset_mul(1,{b}) must be ({b}, 0)", (1, b)))
        if spec.coset_mul[(b, 1)] != (b, zero):
            err(Diagnostic("identity", f"coset_mul({b},1) must be ({b}, 0)", (b, 1)))

    for a, b in product(cosets, repeat=2):
        t = spec.coset_mul[(a, b)][0]
        if spec.action[t] != mat_mul(spec.action[b], spec.action[a]):
            err(Diagnostic("action", f"R_{t} != R_{b} R_{a} for coset_mul({a},{b})", (a, b)))

    for a, b, e in product(cosets, repeat=3):
        t_ab, c_ab = spec.coset_mul[(a, b)]
        t_be, c_be = spec.coset_mul[(b, e)]
        left_t, left_c = spec.coset_mul[(t_ab, e)]
        right_t, right_c = spec.coset_mul[(a, t_be)]
        if left_t != right_t:
            err(Diagnostic("cocycle-coset",
                           f"coset product not associative: ({a}{b}){e} -> {left_t}, {a}({b}{e}) -> {right_t}",
                           (a, b, e)))
        elif vec_add(vec_mat(c_be, spec.action[a]), right_c) != vec_add(c_ab, left_c):
            err(Diagnostic("cocycle", f"cocycle identity fails for ({a},{b},{e})", (a, b, e)))

    labels = set()
    for g in spec.generators:
        if g.label in labels:
            err(Diagnostic("generator", f"duplicate generator label {g.label!r}"))
        labels.add(g.label)
        if g.weight < 1:
            err(Diagnostic("weight", f"generator {g.label!r} has weight {g.weight} < 1"))
        if g.element.t not in cosets or len(g.element.z) != n:
            err(Diagnostic("generator", f"generator {g.label!r} has malformed normal form"))
    if not spec.generators:
        err(Diagnostic("generator", "no generators"))
    if rep.errors:
        return rep

    bound = 2 * d * spec.max_weight() if bound is None else bound
    reached = _elements_within(spec, bound)
    missing = sorted(set(cosets) - {e.t for e in reached})
    if missing:
        rep.warnings.append(Diagnostic("generation", f"cosets {missing} not reached within weight {bound}"))
    lattice = [e.z for e in reached if e.t == 1 and any(e.z)]
    r = sympy.Matrix(lattice).rank() if lattice else 0
    if r < n:
        rep.warnings.append(Diagnostic("generation",
                                       f"Z^n part reached within weight {bound} spans rank {r} < {n}"))
    return rep


def _elements_within(spec: GroupSpec, bound: int) -> set[Element]:
    seen = {spec.identity: 0}
    heap = [(0, spec.identity)]
    while heap:
        w, e = heapq.heappop(heap)
        if seen.get(e, w) < w:
            continue
        for g in spec.generators:
            nw = w + g.weight
            if nw > bound:
                continue
            f = multiply(spec, e, g.element)
            if nw < seen.get(f, bound + 1):
                seen[f] = nw
                heapq.heappush(heap, (nw, f))
    return set(seen)


# --------------------------------------------------------------------------
# file format


def _ints(tokens, lineno):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise SpecError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def parse_spec(text: str) -> GroupSpec:
    name, rank, index = None, None, None
    action, table, gens = {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "group":
            name = " ".join(rest)
        elif key in ("rank", "index"):
            if len(rest) != 1:
                raise SpecError(f"line {lineno}: '{key}' takes one integer")
            (val,) = _ints(rest, lineno)
            if key == "rank":
                rank = val
            else:
                index = val
        elif key == "action":
            if rank is None:
                raise SpecError(f"line {lineno}: 'action' before 'rank'")
            vals = _ints(rest, lineno)
            if len(vals) != 1 + rank * rank:
                raise SpecError(f"line {lineno}: action needs a coset index and {rank * rank} entries")
            t, flat = vals[0], vals[1:]
            action[t] = tuple(tuple(flat[i * rank:(i + 1) * rank]) for i in range(rank))
        elif key == "cosetmul":
            if rank is None:
                raise SpecError(f"line {lineno}: 'cosetmul' before 'rank'")
            vals = _ints(rest, lineno)
            if len(vals) != 3 + rank:
                raise SpecError(f"line {lineno}: cosetmul needs a, b, t and {rank} cocycle entries")
            table[(vals[0], vals[1])] = (vals[2], tuple(vals[3:]))
        elif key == "gen":
            if rank is None:
                raise SpecError(f"line {lineno}: 'gen' before 'rank'")
            if len(rest) != 3 + rank:
                raise SpecError(f"line {lineno}: gen needs label, weight, t and {rank} entries")
            label, nums = rest[0], _ints(rest[1:], lineno)
            gens.append((label, nums[0], nums[1], tuple(nums[2:])))
        else:
            raise SpecError(f"line {lineno}: unknown keyword {key!r}")
    if rank is None or index is None:
        raise SpecError("group file must declare 'rank' and 'index'")
    return make_spec(name or "unnamed", rank, index, action, table, gens)


def load_spec(path) -> GroupSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def format_spec(spec: GroupSpec) -> str:
    out = [f"group {spec.name}", f"rank {spec.rank}", f"index {spec.index}"]
    for t in range(2, spec.index + 1):
        flat = [x for row in spec.action[t] for x in row]
        out.append(f"action {t} " + " ".join(map(str, flat)))
    for a in range(2, spec.index + 1):
        for b in range(2, spec.index + 1):
            t, c = spec.coset_mul[(a, b)]
            out.append(f"cosetmul {a} {b} {t} " + " ".join(map(str, c)))
    for g in spec.generators:
        out.append(f"gen {g.label} {g.weight} {g.element.t} " + " ".join(map(str, g.element.z)))
    return "\n".join(out) + "\n"


DATA_DIR = Path(__file__).parent / "data"


def corpus_spec(name: str) -> GroupSpec:
    """Load one of the bundled group files (``z``, ``z2``, ``dinf``, ``p4``)."""
    return load_spec(DATA_DIR / f"{name}.grp")
