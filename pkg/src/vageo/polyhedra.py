"""Polyhedral (semilinear) subsets of Z^m.

A :class:`PolySet` is a finite union of :class:`BasicSet` conjunctions of
atoms ``a.z = b``, ``a.z > b`` and ``a.z = b (mod c)``.  The algebra is
exact; emptiness and existential questions are only answered inside boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Iterator, Optional, Sequence

Vector = tuple[int, ...]
Box = Sequence[tuple[int, int]]

EQ, GT, CONG = "eq", "gt", "cong"


def dot(a: Sequence[int], z: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, z))


@dataclass(frozen=True)
class Atom:
    kind: str
    a: Vector
    b: int
    c: int = 0

    def __post_init__(self):
        if self.kind not in (EQ, GT, CONG):
            raise ValueError(f"unknown atom kind {self.kind!r}")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.kind == CONG:
            if self.c < 1:
                raise ValueError("congruence modulus must be positive")
            object.__setattr__(self, "b", self.b % self.c)

    @property
    def dim(self) -> int:
        return len(self.a)

    def holds(self, z: Sequence[int]) -> bool:
        s = dot(self.a, z)
        if self.kind == EQ:
            return s == self.b
        if self.kind == GT:
            return s > self.b
        return (s - self.b) % self.c == 0

    def constant_truth(self) -> Optional[bool]:
        """Truth value when the coefficient vector is zero, else None."""
        if any(self.a):
            return None
        return self.holds(self.a)

    def complement(self) -> list[Atom]:
        """Pairwise disjoint atoms whose union is the complement."""
        neg = tuple(-x for x in self.a)
        if self.kind == EQ:
            return [Atom(GT, self.a, self.b), Atom(GT, neg, -self.b)]
        if self.kind == GT:
            return [Atom(EQ, self.a, self.b), Atom(GT, neg, -self.b)]
        return [Atom(CONG, self.a, r, self.c) for r in range(self.c) if r != self.b]

    def __str__(self):
        coeffs = " ".join(map(str, self.a))
        if self.kind == CONG:
            return f"cong {coeffs} {self.b} {self.c}"
        return f"{self.kind} {coeffs} {self.b}"


def eq(a, b) -> Atom:
    return Atom(EQ, tuple(a), b)


def gt(a, b) -> Atom:
    return Atom(GT, tuple(a), b)


def ge(a, b) -> Atom:
    return Atom(GT, tuple(a), b - 1)


def lt(a, b) -> Atom:
    return Atom(GT, tuple(-x for x in a), -b)


def le(a, b) -> Atom:
    return Atom(GT, tuple(-x for x in a), -b - 1)


def cong(a, b, c) -> Atom:
    return Atom(CONG, tuple(a), b, c)


@dataclass(frozen=True)
class BasicSet:
    dim: int
    atoms: tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for at in self.atoms:
            if at.dim != self.dim:
                raise ValueError(f"atom of dimension {at.dim} in a basic set of dimension {self.dim}")

    def holds(self, z: Sequence[int]) -> bool:
        return all(at.holds(z) for at in self.atoms)

    def simplified(self) -> Optional[BasicSet]:
        """Drop constant-true atoms; None if some atom is constant-false or the set is plainly empty."""
        kept = []
        for at in self.atoms:
            truth = at.constant_truth()
            if truth is False:
                return None
            if truth is None and at not in kept:
                kept.append(at)
        if _conflicting(kept):
            return None
        return BasicSet(self.dim, tuple(kept))

    def counts(self) -> tuple[int, int, int]:
        """Numbers of strict, congruence and equality atoms."""
        kinds = [at.kind for at in self.atoms]
        return kinds.count(GT), kinds.count(CONG), kinds.count(EQ)


def _conflicting(atoms: Sequence[Atom]) -> bool:
    """Cheap sufficient test for emptiness: atoms on the same linear form ``s = a.z`` that no integer ``s`` meets.

    Only atoms sharing a form (up to sign) are compared, so a False answer
    says nothing.
    """
    forms: dict[Vector, list] = {}
    for at in atoms:
        a, sign = at.a, 1
        lead = next(x for x in a if x)
        if lead < 0:
            a, sign = tuple(-x for x in a), -1
        forms.setdefault(a, []).append((sign, at))
    for group in forms.values():
        if len(group) < 2:
            continue
        lo, hi, fixed, congs = None, None, set(), []
        for sign, at in group:
            if at.kind == EQ:
                fixed.add(sign * at.b)
            elif at.kind == GT:
                if sign > 0:
                    lo = at.b + 1 if lo is None else max(lo, at.b + 1)
                else:
                    hi = -at.b - 1 if hi is None else min(hi, -at.b - 1)
            else:
                congs.append(((sign * at.b) % at.c, at.c))
        if len(fixed) > 1:
            return True
        if lo is not None and hi is not None and lo > hi:
            return True
        if fixed:
            (v,) = fixed
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return True
            if any((v - b) % c for b, c in congs):
                return True
        elif congs:
            period = math.lcm(*(c for _, c in congs))
            if not any(all((r - b) % c == 0 for b, c in congs) for r in range(period)):
                return True
    return False


@dataclass(frozen=True, eq=False)
class SparseAtom:
    """An atom whose coefficients are a ``{index: coeff}`` dict with 0-based indices.

    The dict may be shared between atoms and must not be mutated.
    """

    kind: str
    coeffs: dict
    b: int
    c: int = 0

    @classmethod
    def of(cls, at: Atom) -> SparseAtom:
        return cls(at.kind, {i: x for i, x in enumerate(at.a) if x}, at.b, at.c)

    def dense(self, dim: int) -> Atom:
        a = [0] * dim
        for i, x in self.coeffs.items():
            a[i] = x
        return Atom(self.kind, tuple(a), self.b, self.c)

    def value(self, counts: dict[int, int]) -> int:
        """``a . z`` for ``z`` given as nonzero coordinates (0-based)."""
        if len(counts) <= len(self.coeffs):
            get = self.coeffs.get
            return sum(x * get(i, 0) for i, x in counts.items())
        return sum(x * counts.get(i, 0) for i, x in self.coeffs.items())

    def coefficient(self, i: int) -> int:
        return self.coeffs.get(i, 0)

    def key(self) -> tuple:
        return (self.kind, tuple(sorted(self.coeffs.items())))

    def holds_value(self, s: int) -> bool:
        if self.kind == EQ:
            return s == self.b
        if self.kind == GT:
            return s > self.b
        return (s - self.b) % self.c == 0


@dataclass(frozen=True, eq=False)
class SparseBasic:
    """A basic set over a high-dimensional space, stored sparsely."""

    dim: int
    atoms: tuple[SparseAtom, ...]

    @classmethod
    def of(cls, bs: BasicSet) -> SparseBasic:
        return cls(bs.dim, tuple(SparseAtom.of(a) for a in bs.atoms))

    def dense(self) -> BasicSet:
        return BasicSet(self.dim, tuple(a.dense(self.dim) for a in self.atoms))

    def holds_counts(self, counts: dict[int, int]) -> bool:
        return all(a.holds_value(a.value(counts)) for a in self.atoms)

    def holds(self, z: Sequence[int]) -> bool:
        if len(z) != self.dim:
            raise DimensionError(f"point of dimension {len(z)} in a set of dimension {self.dim}")
        return self.holds_counts({i: x for i, x in enumerate(z) if x})

    def counts(self) -> tuple[int, int, int]:
        kinds = [at.kind for at in self.atoms]
        return kinds.count(GT), kinds.count(CONG), kinds.count(EQ)


@dataclass(frozen=True)
class PolySet:
    dim: int
    basics: tuple[BasicSet, ...] = ()
    disjoint: bool = False

    def __post_init__(self):
        object.__setattr__(self, "basics", tuple(self.basics))
        for bs in self.basics:
            if bs.dim != self.dim:
                raise ValueError("basic set dimension mismatch")

    @classmethod
    def of(cls, dim: int, *conjunctions: Iterable[Atom]) -> PolySet:
        return cls(dim, tuple(BasicSet(dim, tuple(c)) for c in conjunctions))

    @classmethod
    def universe(cls, dim: int) -> PolySet:
        return cls(dim, (BasicSet(dim),), True)

    @classmethod
    def empty(cls, dim: int) -> PolySet:
        return cls(dim, (), True)

    def __len__(self):
        return len(self.basics)


class DimensionError(ValueError):
    pass


def _check_point(dim: int, z: Sequence[int]):
    if len(z) != dim:
        raise DimensionError(f"point of dimension {len(z)} for a set of dimension {dim}")


def _check_dims(p: PolySet, q: PolySet):
    if p.dim != q.dim:
        raise DimensionError(f"dimension mismatch: {p.dim} vs {q.dim}")


def member(s: PolySet | BasicSet, z: Sequence[int]) -> bool:
    _check_point(s.dim, z)
    if isinstance(s, BasicSet):
        return s.holds(z)
    return any(bs.holds(z) for bs in s.basics)


def _clean(dim, basics) -> list[BasicSet]:
    out = []
    for bs in basics:
        bs = bs.simplified()
        if bs is not None:
            out.append(bs)
    return out


def intersect(p: PolySet, q: PolySet) -> PolySet:
    _check_dims(p, q)
    basics = [BasicSet(p.dim, a.atoms + b.atoms) for a in p.basics for b in q.basics]
    # pairwise intersections of two disjoint families are disjoint
    return PolySet(p.dim, tuple(_clean(p.dim, basics)), p.disjoint and q.disjoint)


def _shift(at: Atom, before: int, after: int) -> Atom:
    return Atom(at.kind, (0,) * before + at.a + (0,) * after, at.b, at.c)


def product(p: PolySet, q: PolySet) -> PolySet:
    """Cartesian product; coordinates of ``p`` come first."""
    dim = p.dim + q.dim
    basics = []
    for a in p.basics:
        for b in q.basics:
            atoms = tuple(_shift(at, 0, q.dim) for at in a.atoms) + tuple(_shift(at, p.dim, 0) for at in b.atoms)
            basics.append(BasicSet(dim, atoms))
    return PolySet(dim, tuple(basics), p.disjoint and q.disjoint)


def complement_basic(bs: BasicSet) -> list[BasicSet]:
    """Disjoint basics covering Z^m minus ``bs``.

    Uses ``not(A1 and ... and Ar) = notA1 + (A1 and notA2) + ...``.
    """
    pieces = []
    for i, at in enumerate(bs.atoms):
        for neg in at.complement():
            pieces.append(BasicSet(bs.dim, bs.atoms[:i] + (neg,)))
    return _clean(bs.dim, pieces)


def complement(p: PolySet) -> PolySet:
    result = PolySet.universe(p.dim)
    for bs in p.basics:
        result = intersect(result, PolySet(p.dim, tuple(complement_basic(bs)), True))
    return result


def difference(p: PolySet, q: PolySet) -> PolySet:
    _check_dims(p, q)
    return intersect(p, complement(q))


def disjointify(p: PolySet) -> PolySet:
    if p.disjoint:
        return p
    out: list[BasicSet] = []
    for i, bs in enumerate(p.basics):
        # bs minus the earlier basics (not their disjoint pieces, which are more numerous)
        rest = difference(PolySet(p.dim, (bs,), True), PolySet(p.dim, p.basics[:i]))
        out.extend(rest.basics)
    return PolySet(p.dim, tuple(out), True)


def union(p: PolySet, q: PolySet) -> PolySet:
    _check_dims(p, q)
    return PolySet(p.dim, p.basics + q.basics, False)


def union_disjointify(p: PolySet, q: PolySet) -> PolySet:
    """``p`` disjoint-union ``(q - p)``, with every basic pairwise disjoint."""
    _check_dims(p, q)
    left = disjointify(p)
    right = difference(disjointify(q), p)
    return PolySet(p.dim, left.basics + right.basics, True)


@dataclass(frozen=True)
class AffineMap:
    """``v -> vA + b`` from Z^m to Z^n; ``A`` is given as m rows of length n."""

    A: tuple[Vector, ...]
    b: Vector

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(r) for r in self.A))
        object.__setattr__(self, "b", tuple(self.b))
        if any(len(r) != len(self.b) for r in self.A):
            raise DimensionError("affine map rows must match the offset length")

    @property
    def domain_dim(self) -> int:
        return len(self.A)

    @property
    def codomain_dim(self) -> int:
        return len(self.b)

    def __call__(self, v: Sequence[int]) -> Vector:
        _check_point(self.domain_dim, v)
        out = list(self.b)
        for vi, row in zip(v, self.A):
            if vi:
                for j, x in enumerate(row):
                    out[j] += vi * x
        return tuple(out)


def preimage(f: AffineMap, q: PolySet) -> PolySet:
    if f.codomain_dim != q.dim:
        raise DimensionError(f"map codomain {f.codomain_dim} does not match set dimension {q.dim}")

    def pull(at: Atom) -> Atom:
        coeffs = tuple(dot(row, at.a) for row in f.A)
        return Atom(at.kind, coeffs, at.b - dot(at.a, f.b), at.c)

    basics = [BasicSet(f.domain_dim, tuple(pull(at) for at in bs.atoms)) for bs in q.basics]
    return PolySet(f.domain_dim, tuple(_clean(f.domain_dim, basics)), q.disjoint)


# --------------------------------------------------------------------------
# bounded queries


def _points(bs: BasicSet, box: Box) -> Iterator[Vector]:
    """Lattice points of ``bs`` in ``box`` in lexicographic order.

    Depth-first over coordinates; each equality/strict atom narrows the range
    of the next coordinate using the extreme values the remaining
    coordinates can contribute.
    """
    m = bs.dim
    if len(box) != m:
        raise DimensionError(f"box of dimension {len(box)} for a set of dimension {m}")
    if any(lo > hi for lo, hi in box):
        return
    linear = [at for at in bs.atoms if at.kind != CONG]
    congs = [at for at in bs.atoms if at.kind == CONG]
    # suffix extremes: lo_rest[i][j] = min of sum_{k>=j} a_k x_k over the box
    rest_lo, rest_hi = [], []
    for at in linear:
        lo_s, hi_s = [0] * (m + 1), [0] * (m + 1)
        for j in range(m - 1, -1, -1):
            x, y = at.a[j] * box[j][0], at.a[j] * box[j][1]
            lo_s[j] = lo_s[j + 1] + min(x, y)
            hi_s[j] = hi_s[j + 1] + max(x, y)
        rest_lo.append(lo_s)
        rest_hi.append(hi_s)
    cong_tail = [max((k for k in range(m) if at.a[k]), default=-1) for at in congs]

    z = [0] * m
    partial = [0] * len(linear)
    cpartial = [0] * len(congs)

    def rng(j):
        lo, hi = box[j]
        for idx, at in enumerate(linear):
            a = at.a[j]
            s = partial[idx]
            # a*x must lie in [need_lo, need_hi] for the atom to stay satisfiable
            if at.kind == EQ:
                need_lo = at.b - s - rest_hi[idx][j + 1]
                need_hi = at.b - s - rest_lo[idx][j + 1]
            else:
                need_lo = at.b + 1 - s - rest_hi[idx][j + 1]
                need_hi = None
            if a == 0:
                if need_lo > 0 or (need_hi is not None and need_hi < 0):
                    return None
                continue
            if a > 0:
                lo = max(lo, -(-need_lo // a))
                if need_hi is not None:
                    hi = min(hi, need_hi // a)
            else:
                hi = min(hi, need_lo // a)
                if need_hi is not None:
                    lo = max(lo, -(-need_hi // a))
            if lo > hi:
                return None
        return lo, hi

    def rec(j):
        if j == m:
            yield tuple(z)
            return
        r = rng(j)
        if r is None:
            return
        for x in range(r[0], r[1] + 1):
            z[j] = x
            for idx, at in enumerate(linear):
                partial[idx] += at.a[j] * x
            ok = True
            for idx, at in enumerate(congs):
                cpartial[idx] += at.a[j] * x
                if cong_tail[idx] <= j and (cpartial[idx] - at.b) % at.c:
                    ok = False
            if ok:
                yield from rec(j + 1)
            for idx, at in enumerate(linear):
                partial[idx] -= at.a[j] * x
            for idx, at in enumerate(congs):
                cpartial[idx] -= at.a[j] * x

    for at in congs:
        if not any(at.a) and not at.holds(at.a):
            return
    yield from rec(0)


def exists_point(bs: BasicSet, box: Box) -> Optional[Vector]:
    """Lexicographically first lattice point of ``bs`` inside ``box``, or None."""
    return next(_points(bs, box), None)


def enumerate_in_box(s: PolySet | BasicSet, box: Box) -> list[Vector]:
    basics = [s] if isinstance(s, BasicSet) else s.basics
    pts = set()
    for bs in basics:
        pts.update(_points(bs, box))
    return sorted(pts)


def box_points(box: Box) -> Iterator[Vector]:
    return iproduct(*(range(lo, hi + 1) for lo, hi in box))


# --------------------------------------------------------------------------
# text format


def format_polyset(p: PolySet) -> str:
    blocks = []
    for bs in p.basics:
        blocks.append("\n".join(str(at) for at in bs.atoms) if bs.atoms else "true")
    return "\n---\n".join(blocks) + "\n" if blocks else "false\n"


def parse_polyset(text: str, dim: Optional[int] = None) -> PolySet:
    """Parse one union: atoms one per line, basics separated by ``---``."""
    sets = parse_polysets(text, dim)
    if len(sets) != 1:
        raise ValueError(f"expected one union, found {len(sets)}")
    return sets[0]


def parse_polysets(text: str, dim: Optional[int] = None) -> list[PolySet]:
    """Parse several unions separated by ``===``."""
    unions: list[list[list[Atom]]] = [[[]]]
    flags: list[list[bool]] = [[False]]  # whether a basic was written as 'true'
    empty_union = [False]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "===":
            unions.append([[]])
            flags.append([False])
            empty_union.append(False)
            continue
        if line == "---":
            unions[-1].append([])
            flags[-1].append(False)
            continue
        if line == "true":
            flags[-1][-1] = True
            continue
        if line == "false":
            empty_union[-1] = True
            continue
        key, *nums = line.split()
        try:
            vals = [int(x) for x in nums]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer token in {line!r}") from None
        if key in ("eq", "gt", "ge", "lt", "le"):
            if len(vals) < 2:
                raise ValueError(f"line {lineno}: atom needs coefficients and a bound")
            at = {"eq": eq, "gt": gt, "ge": ge, "lt": lt, "le": le}[key](vals[:-1], vals[-1])
        elif key == "cong":
            if len(vals) < 3:
                raise ValueError(f"line {lineno}: cong needs coefficients, residue and modulus")
            at = cong(vals[:-2], vals[-2], vals[-1])
        else:
            raise ValueError(f"line {lineno}: unknown atom kind {key!r}")
        if dim is None:
            dim = at.dim
        if at.dim != dim:
            raise DimensionError(f"line {lineno}: atom of dimension {at.dim}, expected {dim}")
        unions[-1][-1].append(at)
    if dim is None:
        raise ValueError("cannot infer the dimension of a set with no atoms")
    out = []
    for blocks, fl, is_empty in zip(unions, flags, empty_union):
        if is_empty:
            out.append(PolySet.empty(dim))
            continue
        basics = [BasicSet(dim, tuple(b)) for b, f in zip(blocks, fl) if b or f]
        out.append(PolySet(dim, tuple(basics)))
    return out
