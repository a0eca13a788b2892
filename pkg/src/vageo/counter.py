"""Blind multicounter machines and the machine accepting geodesics.

A machine reads its input left to right, may add integer vectors to its
counters on every move, and never inspects them; it accepts in a final state
with the input consumed and every counter at zero.

The geodesic machine guesses a basic set ``B`` of the decomposition of the
geodesics with pattern ``pi``, runs the shuffle algorithm on the input while
its counters track ``C_B(u)`` for the current vector ``u``, and at the end
adds an offset so that the counters can be driven to zero exactly when
``v`` is in ``B``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from .group import DATA_DIR, Word
from .polyhedra import CONG, EQ, GT, PolySet, SparseAtom, SparseBasic, format_polyset, parse_polyset
from .shuffle import AlphabetYP, Pattern, delta, format_pattern, parse_pattern, pattern_maps

EPS = "ε"
DEFAULT_EOT = "$"

Move = tuple[str, Hashable, tuple[int, ...]]  # (symbol, target, counter delta)


class MachineError(ValueError):
    pass


# --------------------------------------------------------------------------
# generic machines


@dataclass
class CounterMachine:
    """Explicit blind k-counter machine.

    ``moves_from`` maps a state to its entries ``(symbol, target, delta)``
    where symbol is an input letter, :data:`EPS`, or the end-of-tape symbol.
    A machine built from a windowed decomposition records the window and the
    letter weights, so that callers can tell when an input is out of range.
    """

    alphabet: tuple[str, ...]
    k: int
    initial: Hashable
    accepting: frozenset
    moves_from: dict = field(default_factory=dict)
    eot: str = DEFAULT_EOT
    extra_states: frozenset = frozenset()
    window: Optional[int] = None
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.eot in self.alphabet or self.eot == EPS:
            raise MachineError(f"end-of-tape symbol {self.eot!r} clashes with the alphabet")
        states = self.states
        for q, entries in self.moves_from.items():
            for sym, p, v in entries:
                if len(v) != self.k:
                    raise MachineError(f"delta on {q} -> {p} has {len(v)} entries, expected {self.k}")
                if sym not in self.alphabet and sym not in (EPS, self.eot):
                    raise MachineError(f"unknown symbol {sym!r} on {q} -> {p}")
        if self.initial not in states:
            raise MachineError("initial state is not a state")
        if not self.accepting <= states:
            raise MachineError("accepting states must be states")

    @property
    def states(self) -> frozenset:
        qs = set(self.extra_states) | set(self.moves_from) | {self.initial} | set(self.accepting)
        for entries in self.moves_from.values():
            qs.update(p for _, p, _ in entries)
        return frozenset(qs)

    def moves(self, q) -> Sequence[Move]:
        return self.moves_from.get(q, ())

    def is_accepting(self, q) -> bool:
        return q in self.accepting

    def in_window(self, sigma: Sequence[str]) -> bool:
        if self.window is None:
            return True
        return sum(self.weights.get(s, 1) for s in sigma) <= self.window

    def transitions(self) -> Iterator[tuple[tuple, tuple]]:
        """Entries in the ``((q, a), (p, v))`` form."""
        for q, entries in self.moves_from.items():
            for sym, p, v in entries:
                yield (q, sym), (p, v)


@dataclass(frozen=True)
class Configuration:
    state: Hashable
    counters: tuple[int, ...]
    remaining: Word  # input still to be read; the end-of-tape symbol is implicit


def step(m, c: Configuration) -> set[Configuration]:
    out = set()
    for sym, p, v in m.moves(c.state):
        if sym == EPS:
            rest = c.remaining
        elif sym == m.eot:
            if c.remaining:
                continue
            rest = c.remaining
        elif c.remaining and c.remaining[0] == sym:
            rest = c.remaining[1:]
        else:
            continue
        out.add(Configuration(p, tuple(a + b for a, b in zip(c.counters, v)), rest))
    return out


class _SignTable:
    """For each state, which counters can still move up or down, and whether letters can still be read."""

    def __init__(self, m):
        self.m = m
        self._cache: dict = {}

    def __call__(self, q):
        hit = self._cache.get(q)
        if hit is not None:
            return hit
        k = self.m.k
        seen = {q}
        stack = [q]
        up, down = [False] * k, [False] * k
        reads = False
        while stack:
            s = stack.pop()
            for sym, p, v in self.m.moves(s):
                if sym not in (EPS, self.m.eot):
                    reads = True
                for j, x in enumerate(v):
                    if x > 0:
                        up[j] = True
                    elif x < 0:
                        down[j] = True
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        hit = (tuple(up), tuple(down), reads)
        self._cache[q] = hit
        return hit

    def hopeless(self, c: Configuration) -> bool:
        up, down, reads = self(c.state)
        if c.remaining and not reads:
            return True
        for x, u, d in zip(c.counters, up, down):
            if (x > 0 and not d) or (x < 0 and not u):
                return True
        return False


ACCEPT, REJECT, BUDGET_EXHAUSTED = "accept", "reject", "budget_exhausted"


def run_bounded(m, sigma: Sequence[str], budget: int) -> str:
    """Breadth-first search of configurations, expanding at most ``budget`` of them.

    Configurations from which no move can ever bring a nonzero counter back
    to zero are dropped, which lets searches with decrement loops terminate.
    """
    signs = _SignTable(m)
    start = Configuration(m.initial, (0,) * m.k, tuple(sigma))
    queue = deque([start])
    seen = {start}
    expanded = 0
    while queue:
        c = queue.popleft()
        if not c.remaining and m.is_accepting(c.state) and not any(c.counters):
            return ACCEPT
        if expanded >= budget:
            return BUDGET_EXHAUSTED
        expanded += 1
        for nxt in step(m, c):
            if nxt not in seen and not signs.hopeless(nxt):
                seen.add(nxt)
                queue.append(nxt)
    return REJECT


# --------------------------------------------------------------------------
# text and DOT formats


def state_name(q) -> str:
    if isinstance(q, str):
        return q
    kind = q[0]
    if kind == "q0":
        return "q0"
    if kind == "run":
        _, tau, w, pi, i = q
        return f"[{_pat(tau)},{''.join(w) or EPS},{_pat(pi)},{i}]"
    if kind == "final":
        _, pi, i = q
        return f"q[{_pat(pi)},{i}]"
    raise MachineError(f"unknown state {q!r}")


def _pat(letters) -> str:
    return "/".join("".join(p) for p in letters) if letters else EPS


def format_machine(m) -> str:
    explicit = m if isinstance(m, CounterMachine) else m.materialize()
    lines = [f"alphabet {' '.join(explicit.alphabet)}", f"counters {explicit.k}", f"eot {explicit.eot}"]
    if explicit.window is not None:
        lines.append(f"window {explicit.window}")
    lines += [f"weight {a} {w}" for a, w in explicit.weights.items()]
    names = sorted(state_name(q) for q in explicit.states)
    lines += [f"state {q}" for q in names]
    lines.append(f"init {state_name(explicit.initial)}")
    lines += [f"accept {q}" for q in sorted(state_name(q) for q in explicit.accepting)]
    for (q, sym), (p, v) in explicit.transitions():
        lines.append(" ".join(["trans", state_name(q), sym, state_name(p), *map(str, v)]))
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> CounterMachine:
    alphabet: list[str] = []
    k = None
    eot = DEFAULT_EOT
    window = None
    weights: dict[str, int] = {}
    states: set[str] = set()
    init = None
    accept: set[str] = set()
    moves: dict[str, list] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            if key == "alphabet":
                alphabet = rest
            elif key == "counters":
                (k,) = map(int, rest)
            elif key == "eot":
                (eot,) = rest
            elif key == "window":
                (window,) = map(int, rest)
            elif key == "weight":
                a, w = rest
                weights[a] = int(w)
            elif key == "state":
                (q,) = rest
                states.add(q)
            elif key == "init":
                (init,) = rest
            elif key == "accept":
                (q,) = rest
                accept.add(q)
            elif key == "trans":
                q, sym, p, *vals = rest
                if sym in ("eps", "-"):
                    sym = EPS
                moves.setdefault(q, []).append((sym, p, tuple(int(x) for x in vals)))
            else:
                raise MachineError(f"unknown keyword {key!r}")
        except ValueError as exc:
            raise MachineError(f"line {lineno}: malformed {key!r} line ({exc})") from None
    if init is None:
        raise MachineError("machine file has no init line")
    if k is None:
        k = max((len(v) for es in moves.values() for _, _, v in es), default=0)
    referenced = set(moves) | {p for es in moves.values() for _, p, _ in es} | accept | {init}
    if states and not referenced <= states:
        raise MachineError(f"undeclared states: {sorted(referenced - states)[:5]}")
    return CounterMachine(tuple(alphabet), k, init, frozenset(accept),
                          {q: tuple(es) for q, es in moves.items()}, eot, frozenset(states), window, weights)


def machine_to_dot(m) -> str:
    explicit = m if isinstance(m, CounterMachine) else m.materialize()
    ids = {q: i for i, q in enumerate(sorted(explicit.states, key=state_name))}
    lines = ["digraph M {", "  rankdir=LR;"]
    for q, i in ids.items():
        shape = "doublecircle" if q in explicit.accepting else "circle"
        lines.append(f'  s{i} [label="{state_name(q)}", shape={shape}];')
    for (q, sym), (p, v) in explicit.transitions():
        lines.append(f'  s{ids[q]} -> s{ids[p]} [label="{sym} / {",".join(map(str, v))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# decompositions of the geodesic sets


@dataclass
class Decomposition:
    """Basic sets ``B_{pi,1..N}`` per pattern; ``window`` is None for exact ones.

    A windowed decomposition is only certified for patterned words whose
    weight is at most ``window``.  Basic sets are stored sparsely since
    pattern spaces can have thousands of coordinates.
    """

    basics: dict[tuple[Word, ...], list[SparseBasic]]
    window: Optional[int] = None

    @property
    def exact(self) -> bool:
        return self.window is None

    def of(self, pattern) -> list[SparseBasic]:
        letters = pattern.letters if isinstance(pattern, Pattern) else tuple(pattern)
        return self.basics.get(letters, [])

    def contains(self, pattern, v) -> bool:
        return any(b.holds(v) for b in self.of(pattern))

    def contains_counts(self, pattern, counts: dict[int, int]) -> bool:
        """Membership of a vector given by its nonzero coordinates (1-based)."""
        zc = {i - 1: x for i, x in counts.items()}
        return any(b.holds_counts(zc) for b in self.of(pattern))

    def in_window(self, yp: AlphabetYP, pattern: Pattern, v) -> bool:
        return self.window is None or pattern_maps(yp, pattern, v)[1] <= self.window

    def size(self) -> int:
        return sum(len(bs) for bs in self.basics.values())

    def validate(self, yp: AlphabetYP):
        for letters, bs in self.basics.items():
            pat = yp.pattern(letters, strict=False)
            if pat is None:
                raise MachineError(f"{format_pattern(letters)} is not a pattern")
            for b in bs:
                if b.dim != yp.dim(pat):
                    raise MachineError(
                        f"basic set for {format_pattern(letters)} has dimension {b.dim}, expected {yp.dim(pat)}")


_ALL_ONES: dict[int, dict[int, int]] = {}


def point_basic(dim: int, counts: dict[int, int]) -> SparseBasic:
    """Singleton ``{v}`` inside the nonnegative orthant, ``v`` given by nonzero coordinates (1-based).

    One equation per nonzero coordinate plus one fixing the sum of all
    coordinates; over nonnegative vectors that pins down ``v``.  The
    all-ones row is shared between basic sets of the same dimension.
    """
    ones = _ALL_ONES.get(dim)
    if ones is None:
        ones = _ALL_ONES[dim] = {i: 1 for i in range(dim)}
    atoms = [SparseAtom(EQ, {i - 1: 1}, x) for i, x in sorted(counts.items())]
    atoms.append(SparseAtom(EQ, ones, sum(counts.values())))
    return SparseBasic(dim, tuple(atoms))


def geodesic_patterned_words(yp: AlphabetYP, max_weight: int) -> Iterator[tuple[Pattern, dict[int, int]]]:
    """All geodesic ``(pi, v)`` of weight at most ``max_weight``, ``v`` as nonzero coordinates (1-based).

    Depth-first over expanded words, Y letters in each block in index order.
    A prefix of a geodesic is geodesic, so non-geodesic prefixes are cut.
    """
    from .geodesic import pattern_metric
    from .group import multiply

    spec = yp.spec
    metric = pattern_metric(yp)
    metric.extend(max_weight)

    def geodesic(e, w):
        return metric.best.get(e) == w

    m = yp.m
    stack = [(yp.empty_pattern, {}, 0, spec.identity, 0)]
    while stack:
        pat, v, last, e, w = stack.pop()
        yield pat, v
        block = pat.length * m
        for y in yp.Y[last:]:
            nw = w + y.weight
            if nw > max_weight:
                continue
            f = multiply(spec, e, y.element)
            if geodesic(f, nw):
                nv = dict(v)
                i = block + y.index
                nv[i] = nv.get(i, 0) + 1
                stack.append((pat, nv, y.index - 1, f, nw))
        if not pat.strong:
            continue
        for p in yp.P:
            nw = w + yp.weight_of(p)
            if nw > max_weight:
                continue
            npat = yp.pattern(pat.letters + (p,), strict=False)
            if npat is None:
                continue
            f = multiply(spec, e, yp.element_of(p))
            if geodesic(f, nw):
                stack.append((npat, v, 0, f, nw))


def windowed_decomposition(yp: AlphabetYP, W: int) -> Decomposition:
    """One singleton basic set per geodesic patterned word of weight at most ``W``."""
    basics: dict[tuple[Word, ...], list[SparseBasic]] = {}
    keys: dict[tuple[Word, ...], list] = {}
    for pat, v in geodesic_patterned_words(yp, W):
        keys.setdefault(pat.letters, []).append(tuple(sorted(v.items())))
    for letters, vs in keys.items():
        dim = yp.dim(yp.pattern(letters))
        basics[letters] = [point_basic(dim, dict(v)) for v in sorted(vs)]
    return Decomposition(basics, W)


def format_decomposition(dec: Decomposition) -> str:
    lines = [f"window {'exact' if dec.exact else dec.window}"]
    for letters in sorted(dec.basics, key=lambda t: (len(t), t)):
        bs = dec.basics[letters]
        if not bs:
            continue
        lines.append(f"pattern {format_pattern(letters)}")
        lines.append(format_polyset(PolySet(bs[0].dim, tuple(b.dense() for b in bs))).rstrip("\n"))
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str, yp: AlphabetYP) -> Decomposition:
    window: Optional[int] = None
    sections: list[tuple[tuple[Word, ...], list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split()[0]
        if key == "window":
            val = line.split(None, 1)[1].strip() if " " in line else ""
            try:
                window = None if val == "exact" else int(val)
            except ValueError:
                raise MachineError(f"line {lineno}: window must be 'exact' or an integer") from None
        elif key == "pattern":
            sections.append((parse_pattern(line[len("pattern"):].strip()), []))
        else:
            if not sections:
                raise MachineError(f"line {lineno}: set data before any pattern line")
            sections[-1][1].append(line)
    basics: dict[tuple[Word, ...], list[SparseBasic]] = {}
    for letters, body in sections:
        pat = yp.pattern(letters, strict=False)
        if pat is None:
            raise MachineError(f"{format_pattern(letters)} is not a pattern")
        try:
            ps = parse_polyset("\n".join(body), yp.dim(pat))
        except ValueError as exc:
            raise MachineError(f"pattern {format_pattern(letters)}: {exc}") from None
        basics.setdefault(letters, []).extend(SparseBasic.of(b) for b in ps.basics)
    dec = Decomposition(basics, window)
    dec.validate(yp)
    return dec


def load_decomposition(path, yp: AlphabetYP) -> Decomposition:
    return parse_decomposition(Path(path).read_text(), yp)


def corpus_decomposition(name: str, yp: AlphabetYP) -> Decomposition:
    return load_decomposition(DATA_DIR / f"{name}.dec", yp)


# --------------------------------------------------------------------------
# the geodesic machine


@dataclass(frozen=True)
class CounterLayout:
    """Counter rows of one basic set: strict, congruence, then equality blocks."""

    strict: tuple  # atoms a.z > b
    congruence: tuple  # atoms a.z = b mod c
    equality: tuple  # atoms a.z = b

    @classmethod
    def of(cls, b: SparseBasic) -> CounterLayout:
        return cls(tuple(a for a in b.atoms if a.kind == GT),
                   tuple(a for a in b.atoms if a.kind == CONG),
                   tuple(a for a in b.atoms if a.kind == EQ))

    @property
    def rows(self):
        return self.strict + self.congruence + self.equality

    def size(self) -> int:
        return len(self.rows)

    def counters(self, counts: dict[int, int], k: int) -> tuple[int, ...]:
        """``C(v)`` for ``v`` given by nonzero coordinates (1-based)."""
        zc = {i - 1: x for i, x in counts.items()}
        vals = [a.value(zc) for a in self.rows]
        return tuple(vals) + (0,) * (k - len(vals))

    def column(self, x: Optional[int], k: int) -> tuple[int, ...]:
        """Counters of the unit vector ``e_x`` (zero for the empty label)."""
        vals = [0 if x is None else a.coefficient(x - 1) for a in self.rows]
        return tuple(vals) + (0,) * (k - len(vals))

    def offset(self, k: int) -> tuple[int, ...]:
        vals = [-a.b - 1 for a in self.strict] + [-a.b for a in self.congruence] + [-a.b for a in self.equality]
        return tuple(vals) + (0,) * (k - len(vals))

    def accepts(self, zc: dict[int, int]) -> bool:
        """``zeroable(counters + offset)`` for ``v`` given 0-based, stopping at the first failing row.

        Equality rows are tried first, sparsest first, since they fail most often.
        """
        order = self.__dict__.get("_order")
        if order is None:
            order = sorted(self.equality, key=lambda a: len(a.coeffs)) + list(self.strict) + list(self.congruence)
            self.__dict__["_order"] = order
        return all(a.holds_value(a.value(zc)) for a in order)

    def zeroable(self, c: Sequence[int]) -> bool:
        """Whether the final loops can bring ``c`` to zero."""
        ns, nc = len(self.strict), len(self.congruence)
        if any(x < 0 for x in c[:ns]):
            return False
        if any(x % a.c for x, a in zip(c[ns:ns + nc], self.congruence)):
            return False
        return not any(c[ns + nc:])


class GeodesicMachine:
    """The geodesic machine over a decomposition, with moves generated on demand.

    States are ``("q0",)``, ``("run", tau, w, pi, i)`` and ``("final", pi, i)``.
    :meth:`materialize` builds the explicit reachable machine, which is only
    practical for small groups.
    """

    def __init__(self, yp: AlphabetYP, dec: Decomposition, k: Optional[int] = None):
        dec.validate(yp)
        self.yp = yp
        self.dec = dec
        self.guesses = [(letters, i) for letters in sorted(dec.basics, key=lambda t: (len(t), t))
                        for i in range(1, len(dec.basics[letters]) + 1)]
        self.layouts = {(letters, i): CounterLayout.of(dec.basics[letters][i - 1]) for letters, i in self.guesses}
        need = max((lay.size() for lay in self.layouts.values()), default=0)
        if k is None:
            k = need
        elif k < need:
            raise MachineError(f"{k} counters are not enough, a basic set needs {need}")
        self.k = k
        self.alphabet = yp.spec.labels
        self.eot = DEFAULT_EOT
        while self.eot in self.alphabet:
            self.eot += "$"
        self.initial = ("q0",)
        self._moves: dict = {}
        self._groups: dict = {}

    def is_accepting(self, q) -> bool:
        return q[0] == "final"

    @property
    def accepting(self) -> frozenset:
        return frozenset(("final", letters, i) for letters, i in self.guesses)

    def moves(self, q) -> tuple[Move, ...]:
        hit = self._moves.get(q)
        if hit is None:
            hit = self._moves[q] = tuple(self._gen_moves(q))
        return hit

    def _gen_moves(self, q) -> Iterator[Move]:
        yp, k = self.yp, self.k
        zero = (0,) * k
        if q[0] == "q0":
            for letters, i in self.guesses:
                yield EPS, ("run", (), (), letters, i), zero
            return
        if q[0] == "final":
            lay = self.layouts[q[1:]]
            ns = len(lay.strict)
            for j in range(ns):
                yield self.eot, q, tuple(-int(t == j) for t in range(k))
            for j, at in enumerate(lay.congruence):
                jj = ns + j
                for sgn in (1, -1):
                    yield self.eot, q, tuple(sgn * at.c * int(t == jj) for t in range(k))
            return
        _, tau_l, w, pi, i = q
        if len(w) < yp.d:
            for s in self.alphabet:
                yield s, ("run", tau_l, w + (s,), pi, i), zero
        tau = yp.pattern(tau_l)
        if tau.strong and w:
            res = delta(yp, tau, w)
            sym = EPS if len(w) == yp.d else self.eot
            yield sym, ("run", res.pattern.letters, res.word, pi, i), self.layouts[(pi, i)].column(res.x, k)
        if not w and tau_l == pi:
            yield self.eot, ("final", pi, i), self.layouts[(pi, i)].offset(k)

    def materialize(self, max_states: int = 100_000) -> CounterMachine:
        moves = {}
        stack = [self.initial]
        seen = {self.initial}
        while stack:
            q = stack.pop()
            moves[q] = self.moves(q)
            for _, p, _ in moves[q]:
                if p not in seen:
                    seen.add(p)
                    if len(seen) > max_states:
                        raise MachineError(f"machine exceeds {max_states} states")
                    stack.append(p)
        weights = {g.label: g.weight for g in self.yp.spec.generators}
        return CounterMachine(self.alphabet, self.k, self.initial, self.accepting, moves, self.eot,
                              window=self.dec.window, weights=weights)

    def candidates(self, letters, counts: dict[int, int]) -> Iterator[int]:
        """Guesses ``i`` for pattern ``letters`` not ruled out by a cheap lookup.

        Basic sets that are single points (as built by :func:`point_basic`)
        are indexed by the point.  The others are grouped by their first
        equality row, so one dot product and a dictionary lookup replace a
        comparison per set.
        """
        groups = self._groups.get(letters)
        if groups is None:
            points: dict = {}
            by_row: dict = {}
            rest = []
            for i, b in enumerate(self.dec.of(letters), 1):
                pt = _as_point(b)
                if pt is not None:
                    points.setdefault(pt, []).append(i)
                    continue
                lay = self.layouts[(letters, i)]
                if lay.strict or lay.congruence or not lay.equality:
                    rest.append(i)
                    continue
                first = lay.equality[0]
                entry = by_row.setdefault(first.key(), (first, {}))
                entry[1].setdefault(first.b, []).append(i)
            groups = self._groups[letters] = (points, list(by_row.values()), rest)
        points, by_row, rest = groups
        zc = {i - 1: x for i, x in counts.items()}
        yield from points.get(frozenset(zc.items()), ())
        yield from rest
        for row, table in by_row:
            yield from table.get(row.value(zc), ())


def _as_point(b: SparseBasic) -> Optional[frozenset]:
    """The single point of ``b`` within the nonnegative orthant if ``b`` has point form, else None.

    Point form: equations ``z_i = v_i > 0`` and ``sum(z) = sum(v)``.
    """
    if any(a.kind != EQ for a in b.atoms):
        return None
    units = {}
    total = None
    for a in b.atoms:
        if len(a.coeffs) == 1 and b.dim > 1:
            (i, x), = a.coeffs.items()
            if x != 1 or a.b <= 0 or i in units:
                return None
            units[i] = a.b
        elif len(a.coeffs) == b.dim and all(x == 1 for x in a.coeffs.values()) and total is None:
            total = a.b
        else:
            return None
    if total is None or total != sum(units.values()):
        return None
    return frozenset(units.items())


def build_geodesic_machine(yp: AlphabetYP, dec: Decomposition, k: Optional[int] = None) -> GeodesicMachine:
    return GeodesicMachine(yp, dec, k)


def shuffle_phase(m: GeodesicMachine, sigma: Sequence[str]):
    """The deterministic part of a run: the (pattern, label) of every delta move, and the final pattern."""
    yp = m.yp
    for s in sigma:
        yp.spec.generator(s)
    tau, w, rest = yp.empty_pattern, (), tuple(sigma)
    steps = []
    while True:
        if rest and len(w) < yp.d:
            w, rest = w + rest[:1], rest[1:]
        elif w and tau.strong and (len(w) == yp.d or not rest):
            res = delta(yp, tau, w)
            steps.append((res.pattern, res.x))
            tau, w = res.pattern, res.word
        else:
            break
    return steps, tau


def machine_accepts(m: GeodesicMachine, sigma: Sequence[str]) -> bool:
    """Decide acceptance by running the shuffle phase once per word.

    For each guess ``(pi, i)`` with ``pi`` the final pattern the counters at
    ``q_{pi,i}`` are ``C_{pi,i}(v)`` plus the final offset, ``v`` being the sum
    of the unit vectors added on the delta moves; the loops can zero them
    iff strict counters are nonnegative, congruence counters are multiples
    of their moduli, and the rest vanish.
    """
    steps, pi = shuffle_phase(m, sigma)
    counts: dict[int, int] = {}
    for _, x in steps:
        if x is not None:
            counts[x] = counts.get(x, 0) + 1
    zc = {i - 1: x for i, x in counts.items()}
    return any(m.layouts[(pi.letters, i)].accepts(zc) for i in m.candidates(pi.letters, counts))
