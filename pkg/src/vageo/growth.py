"""Geodesic growth: census, rate estimates, polynomial/exponential evidence, recurrence fits."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .geodesic import BallTable, RadiusError, is_geodesic_counts, is_geodesic_oracle, is_geodesic_pattern
from .shuffle import AlphabetYP, PatternedWord, iter_shuffled


@dataclass
class GrowthTable:
    """Rows ``(n, sphere(n), cumulative(n))`` for ``n = 0..N``."""

    spheres: list[int]
    label: str = ""

    @property
    def horizon(self) -> int:
        return len(self.spheres) - 1

    @property
    def cumulative(self) -> list[int]:
        out, acc = [], 0
        for s in self.spheres:
            acc += s
            out.append(acc)
        return out

    @property
    def rows(self) -> list[tuple[int, int, int]]:
        return list(zip(range(len(self.spheres)), self.spheres, self.cumulative))

    def __len__(self):
        return len(self.spheres)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "sphere", "cumulative"])
        w.writerows(self.rows)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> GrowthTable:
        reader = csv.DictReader(io.StringIO(text))
        rows = sorted((int(r["n"]), int(r["sphere"])) for r in reader)
        if [n for n, _ in rows] != list(range(len(rows))):
            raise ValueError("growth table rows must be n = 0, 1, 2, ...")
        return cls([s for _, s in rows])


def geodesic_counts(yp: AlphabetYP, ball: Optional[BallTable], N: int, method: str = "pattern") -> GrowthTable:
    """Count geodesic words by weight up to ``N``.

    Walks the tree of geodesics depth first; every prefix of a geodesic is
    geodesic, so only geodesic words are extended.  ``method`` picks the test
    used on each word: the pattern criterion (on the shuffle, computed
    incrementally along the tree) or the ball oracle.
    """
    spec = yp.spec
    if ball is not None and ball.radius < N:
        raise RadiusError(f"ball radius {ball.radius} is smaller than {N}")
    spheres = [0] * (N + 1)
    if method == "pattern":
        keep = lambda sw: is_geodesic_counts(yp, sw.pattern, sw.counts)  # noqa: E731
        for sw in iter_shuffled(yp, N, keep):
            spheres[sw.weight] += 1
        return GrowthTable(spheres, spec.name)
    if method != "oracle":
        raise ValueError(f"unknown method {method!r}")
    if ball is None:
        raise ValueError("the oracle method needs a ball")
    stack = [((), 0)]
    while stack:
        word, w = stack.pop()
        spheres[w] += 1
        for g in spec.generators:
            nw = w + g.weight
            if nw <= N:
                nxt = word + (g.label,)
                if is_geodesic_oracle(spec, ball, nxt):
                    stack.append((nxt, nw))
    return GrowthTable(spheres, spec.name)


def naive_counts(spec, ball: BallTable, N: int) -> GrowthTable:
    """Every word of weight at most ``N``, filtered by the oracle.  Exponential; for cross-checks."""
    spheres = [0] * (N + 1)
    stack = [((), 0)]
    while stack:
        word, w = stack.pop()
        if is_geodesic_oracle(spec, ball, word):
            spheres[w] += 1
        for g in spec.generators:
            if w + g.weight <= N:
                stack.append((word + (g.label,), w + g.weight))
    return GrowthTable(spheres, spec.name)


def path_counts(yp: AlphabetYP, N: int) -> GrowthTable:
    """Count complete paths of the shuffle graph whose label vector is geodesic."""
    from .paths import alpha_vector, build_gamma, iter_paths

    gamma = build_gamma(yp, eager=False)
    spheres = [0] * (N + 1)
    for p in iter_paths(yp, gamma, N):
        pat = yp.pattern(p.end[0])
        if is_geodesic_pattern(yp, PatternedWord(alpha_vector(yp, p), pat)):
            spheres[p.weight] += 1
    return GrowthTable(spheres, yp.spec.name)


# --------------------------------------------------------------------------
# estimates


@dataclass
class RateEstimate:
    horizon: int
    root: float  # cumulative(N) ** (1/N)
    ratio: Optional[Fraction]  # sphere(N) / sphere(N-1)
    agree: bool
    tolerance: float

    def __str__(self):
        r = "undefined" if self.ratio is None else f"{float(self.ratio):.6f}"
        return (f"horizon {self.horizon}: n-th root {self.root:.6f}, sphere ratio {r}, "
                f"{'agree' if self.agree else 'disagree'} within {self.tolerance}")


class DegenerateTable(ValueError):
    pass


def growth_rate_estimate(t: GrowthTable, tolerance: float = 0.1) -> RateEstimate:
    if len(t) < 4:
        raise DegenerateTable(f"need at least 4 rows, got {len(t)}")
    N = t.horizon
    root = t.cumulative[N] ** (1.0 / N)
    prev = t.spheres[N - 1]
    ratio = Fraction(t.spheres[N], prev) if prev else None
    agree = ratio is not None and abs(root - float(ratio)) <= tolerance
    return RateEstimate(N, root, ratio, agree, tolerance)


POLYNOMIAL, EXPONENTIAL, INCONCLUSIVE = "polynomial", "exponential", "inconclusive"


@dataclass
class Classification:
    kind: str
    horizon: int
    sphere_degree: Optional[int] = None
    cumulative_degree: Optional[int] = None
    evidence: str = ""

    def __str__(self):
        s = f"{self.kind} (heuristic, horizon {self.horizon})"
        if self.kind == POLYNOMIAL:
            sd = "eventually zero" if self.sphere_degree is None else f"degree {self.sphere_degree}"
            s += f": spheres {sd}, cumulative degree {self.cumulative_degree}"
        return s + (f"; {self.evidence}" if self.evidence else "")


def _differences(seq):
    return [b - a for a, b in zip(seq, seq[1:])]


def classify_growth(t: GrowthTable, eps: float = 0.05, checks: int = 3) -> Classification:
    """Heuristic evidence for one side of the polynomial/exponential dichotomy.

    Polynomial: some finite difference of the sphere counts vanishes on the
    last ``checks`` or more entries.  Exponential: the last ``checks`` sphere
    ratios all exceed ``1 + eps``.  Otherwise inconclusive.
    """
    N = t.horizon
    if len(t) < 6:
        return Classification(INCONCLUSIVE, N, evidence="fewer than 6 rows")
    tail = t.spheres[1:]
    if not any(tail[-checks:]):
        return Classification(POLYNOMIAL, N, None, 0, "spheres vanish")
    seq = tail
    order = 0
    while len(seq) > checks:
        if not any(seq[-checks:]):
            return Classification(POLYNOMIAL, N, order - 1, order,
                                  f"difference of order {order} vanishes on the last {checks} terms")
        seq = _differences(seq)
        order += 1
    ratios = [Fraction(b, a) for a, b in zip(tail[-checks - 1:], tail[-checks:]) if a]
    if len(ratios) == checks and all(r > 1 + eps for r in ratios):
        return Classification(EXPONENTIAL, N,
                              evidence="sphere ratios " + ", ".join(f"{float(r):.4f}" for r in ratios))
    return Classification(INCONCLUSIVE, N, evidence="no vanishing difference, ratios not bounded away from 1")


@dataclass
class RationalFit:
    """``sum_n c_n z^n = numerator / denominator`` with ``c_n`` the cumulative counts.

    Equivalently ``c_n = sum_j coefficients[j-1] c_{n-j}`` for all ``n >= start``.
    """

    coefficients: list[Fraction]
    start: int
    numerator: list[Fraction]
    denominator: list[Fraction]
    horizon: int
    initial: list[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def predict(self, n: int) -> Fraction:
        vals = [Fraction(x) for x in self.initial]
        while len(vals) <= n:
            k = len(vals)
            vals.append(sum(a * vals[k - j - 1] for j, a in enumerate(self.coefficients)))
        return vals[n]

    def characteristic_roots(self) -> dict:
        """Roots of ``x^r - a_1 x^{r-1} - ... - a_r`` with multiplicities."""
        x = sympy.Symbol("x")
        r = self.order
        poly = x**r - sum(sympy.Rational(a.numerator, a.denominator) * x**(r - j - 1)
                          for j, a in enumerate(self.coefficients))
        return sympy.roots(sympy.Poly(poly, x))

    def __str__(self):
        fmt = lambda cs: " ".join(str(c) for c in cs)  # noqa: E731
        return (f"order {self.order} from n={self.start}: denominator [{fmt(self.denominator)}], "
                f"numerator [{fmt(self.numerator)}], verified to n={self.horizon}")


def _solve_recurrence(c: Sequence[int], r: int, s: int) -> Optional[list[Fraction]]:
    """Coefficients of an order ``r`` recurrence valid for ``s <= n <= N``, or None."""
    if r == 0:
        return [] if not any(c[s:]) else None
    rows = [[c[n - j] for j in range(1, r + 1)] for n in range(s, len(c))]
    A = sympy.Matrix(rows)
    b = sympy.Matrix([c[n] for n in range(s, len(c))])
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    return [Fraction(int(x.p), int(x.q)) for x in sol]


def fit_rational_series(t: GrowthTable, max_order: int = 8) -> Optional[RationalFit]:
    """Minimal linear recurrence with constant rational coefficients for the cumulative counts.

    Orders are tried from 0 upward, and for each order the earliest start.
    A fit needs at least one more equation than unknowns.
    """
    c = t.cumulative
    N = t.horizon
    for r in range(max_order + 1):
        for s in range(r, N + 1):
            if N - s + 1 < r + 1:
                break
            coeffs = _solve_recurrence(c, r, s)
            if coeffs is None:
                continue
            den = [Fraction(1)] + [-a for a in coeffs]
            num = []
            for n in range(s):
                num.append(sum(den[j] * c[n - j] for j in range(min(n, r) + 1)))
            while num and num[-1] == 0:
                num.pop()
            fit = RationalFit(coeffs, s, num, den, N, list(c[:s]))
            if all(fit.predict(n) == c[n] for n in range(N + 1)):
                return fit
    return None


def sphere_ratio(t: GrowthTable, n: Optional[int] = None) -> Optional[float]:
    n = t.horizon if n is None else n
    prev = t.spheres[n - 1]
    return t.spheres[n] / prev if prev else None


def nth_root(t: GrowthTable, n: Optional[int] = None) -> float:
    n = t.horizon if n is None else n
    return math.pow(t.cumulative[n], 1.0 / n)
