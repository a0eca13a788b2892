"""Acceptance criteria 1 to 9, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py``.  The exhaustive checks
take a few minutes, dominated by the wallpaper group.
"""

import dataclasses
import random
import time

import pytest

from vageo.counter import (
    ACCEPT, BUDGET_EXHAUSTED, build_geodesic_machine, corpus_decomposition, machine_accepts, run_bounded,
    windowed_decomposition,
)
from vageo.geodesic import build_ball, is_geodesic_counts, is_geodesic_oracle
from vageo.group import evaluate_word, validate_spec, word_weight
from vageo.growth import (
    EXPONENTIAL, POLYNOMIAL, classify_growth, fit_rational_series, geodesic_counts, growth_rate_estimate,
    naive_counts,
)
from vageo.paths import alpha_vector, build_congruence_dfa, build_gamma, dfa_accepts, parikh, path_to_word, word_to_path
from vageo.polyhedra import (
    AffineMap, box_points, complement, difference, disjointify, intersect, member, preimage, product, union,
    union_disjointify,
)
from vageo.shuffle import densify, expand_counts, iter_shuffled, shuffle_sparse

from conftest import CORPUS, random_polyset, words_upto


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def exhaustive(specs, yps):
    """One pass over every word of weight <= 8 per corpus group, collecting failures for criteria 1 and 2."""
    out = {}
    for name in CORPUS:
        spec, yp = specs[name], yps[name]
        t0 = time.time()
        ball = build_ball(spec, 8)
        words = bad_shuffle = bad_geodesic = 0
        for sw in iter_shuffled(yp, 8):
            words += 1
            e = evaluate_word(spec, sw.word)
            expanded = expand_counts(yp, sw.pattern, sw.counts)
            if (evaluate_word(spec, expanded) != e or word_weight(spec, expanded) != sw.weight
                    or sw.steps + 1 > len(sw.word) + 1):
                bad_shuffle += 1
            if is_geodesic_counts(yp, sw.pattern, sw.counts) != (ball.lengths[e] == sw.weight):
                bad_geodesic += 1
        out[name] = (words, bad_shuffle, bad_geodesic, time.time() - t0)
    return out


def test_criterion_1_shuffle_soundness(capsys, exhaustive):
    total = sum(v[3] for v in exhaustive.values())
    ok = all(v[1] == 0 for v in exhaustive.values()) and total < 300
    detail = ", ".join(f"{k}: {v[0]} words, {v[1]} failures" for k, v in exhaustive.items())
    report(capsys, 1, "shuffle soundness, weight <= 8", ok, f"{detail}; {total:.0f}s")


def test_criterion_2_geodesic_equivalence(capsys, exhaustive):
    ok = all(v[2] == 0 for v in exhaustive.values())
    detail = ", ".join(f"{k}: {v[2]} disagreements" for k, v in exhaustive.items())
    report(capsys, 2, "pattern criterion = oracle, weight <= 8", ok, detail)


def test_criterion_3_bijection(capsys, yps):
    parts, ok = [], True
    for name in CORPUS:
        yp = yps[name]
        gamma = build_gamma(yp, eager=False)
        bad = n = 0
        for w in words_upto(yp.spec, 6):
            n += 1
            p = word_to_path(yp, gamma, w)
            pat, counts, _ = shuffle_sparse(yp, w)
            if (path_to_word(yp, gamma, p) != w or p.weight != yp.weight_of(w)
                    or alpha_vector(yp, p) != densify(yp, pat, counts)):
                bad += 1
        ok &= bad == 0
        parts.append(f"{name}: {n} words, {bad} failures")
    report(capsys, 3, "word/path bijection, weight <= 6", ok, ", ".join(parts))


def test_criterion_4_machines(capsys, yps):
    parts, ok = [], True
    for name in CORPUS:
        yp = yps[name]
        spec = yp.spec
        dec = corpus_decomposition(name, yp) if name in ("z", "dinf") else windowed_decomposition(yp, 6)
        m = build_geodesic_machine(yp, dec)
        ball = build_ball(spec, 6)
        bad = n = 0
        for w in words_upto(spec, 6):
            n += 1
            bad += machine_accepts(m, w) != is_geodesic_oracle(spec, ball, w)
        ok &= bad == 0
        kind = "hand" if dec.exact else f"windowed W={dec.window}, {dec.size()} basics"
        parts.append(f"{name} ({kind}, k={m.k}): {n} words, {bad} disagreements")
    z = yps["z"]
    explicit = build_geodesic_machine(z, corpus_decomposition("z", z)).materialize()
    lazy = build_geodesic_machine(z, corpus_decomposition("z", z))
    bad = 0
    for w in words_upto(z.spec, 4):
        verdict = run_bounded(explicit, w, 10_000)
        bad += verdict == BUDGET_EXHAUSTED or (verdict == ACCEPT) != machine_accepts(lazy, w)
    ok &= bad == 0
    parts.append(f"search vs arithmetic on Z words of length <= 4: {bad} disagreements")
    report(capsys, 4, "machine = oracle inside the window", ok, "; ".join(parts))


def test_criterion_5_growth_values(capsys, specs, yps):
    checks = {}
    z = geodesic_counts(yps["z"], build_ball(specs["z"], 12), 12, "oracle")
    checks["Z cumulative 2n+1"] = z.cumulative == [2 * n + 1 for n in range(13)]
    d = geodesic_counts(yps["dinf"], build_ball(specs["dinf"], 12), 12, "oracle")
    checks["Dinf spheres 2"] = d.spheres[1:] == [2] * 12
    z2 = geodesic_counts(yps["z2"], build_ball(specs["z2"], 10), 10, "oracle")
    checks["Z2 spheres 2^(n+2)-4"] = z2.spheres[1:] == [2 ** (n + 2) - 4 for n in range(1, 11)]
    naive = naive_counts(specs["z2"], build_ball(specs["z2"], 6), 6)
    checks["Z2 naive n<=6"] = naive.spheres == z2.spheres[:7]
    ratio = float(growth_rate_estimate(z2).ratio)
    checks[f"Z2 ratio {ratio:.5f}"] = abs(ratio - 2) <= 0.01
    report(capsys, 5, "growth values", all(checks.values()),
           ", ".join(f"{k} {'ok' if v else 'WRONG'}" for k, v in checks.items()))


def test_criterion_6_dichotomy(capsys, yps):
    expect = {"z": POLYNOMIAL, "dinf": POLYNOMIAL, "z2": EXPONENTIAL, "p4": EXPONENTIAL}
    parts, ok = [], True
    for name, kind in expect.items():
        t = geodesic_counts(yps[name], None, 12)
        c = classify_growth(t)
        ok &= c.kind == kind
        part = f"{name}: {c.kind}"
        if name in ("z", "dinf"):
            fit = fit_rational_series(t)
            good = fit is not None and fit.order <= 3
            ok &= good
            part += f", recurrence order {fit.order if fit else 'none'}"
        parts.append(part)
    report(capsys, 6, "dichotomy at horizon 12", ok, "; ".join(parts))


def test_criterion_7_polyhedra(capsys):
    rng = random.Random(2024)
    box = [(-5, 5)] * 3
    points = list(box_points(box))
    bad = 0
    for _ in range(200):
        p, q = random_polyset(rng, 3), random_polyset(rng, 3)
        P = {z for z in points if member(p, z)}
        Q = {z for z in points if member(q, z)}
        every = set(points)
        results = {
            "intersect": (intersect(p, q), P & Q),
            "union": (union(p, q), P | Q),
            "complement": (complement(p), every - P),
            "difference": (difference(p, q), P - Q),
        }
        for s, want in results.values():
            bad += {z for z in points if member(s, z)} != want
        for s, want in ((union_disjointify(p, q), P | Q), (disjointify(p), P)):
            bad += any(sum(bs.holds(z) for bs in s.basics) != (z in want) for z in points)
        a, b = random_polyset(rng, 1), random_polyset(rng, 2)
        ab = product(a, b)
        bad += any(member(ab, z) != (member(a, z[:1]) and member(b, z[1:])) for z in points)
    bad_pre = 0
    for _ in range(200):
        q = random_polyset(rng, 3)
        f = AffineMap(tuple(tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(3)),
                      tuple(rng.randint(-3, 3) for _ in range(3)))
        pre = preimage(f, q)
        bad_pre += any(member(pre, v) != member(q, f(v)) for v in points)
    report(capsys, 7, "polyhedral algebra", bad == 0 and bad_pre == 0,
           f"200 random pairs on [-5,5]^3: {bad} failures; 200 preimages: {bad_pre} failures")


def mutations(spec):
    """Every single-entry change to the action, the cocycles and the coset targets, with the codes of which one must be reported."""
    for t, m in spec.action.items():
        for i in range(spec.rank):
            for j in range(spec.rank):
                rows = [list(r) for r in m]
                rows[i][j] += 1
                action = dict(spec.action)
                action[t] = tuple(map(tuple, rows))
                codes = {"identity"} if t == 1 else {"det", "action"}
                yield f"R_{t}[{i}][{j}]", dataclasses.replace(spec, action=action), codes
    for (a, b), (t, c) in spec.coset_mul.items():
        for i in range(spec.rank):
            cc = list(c)
            cc[i] += 1
            table = dict(spec.coset_mul)
            table[(a, b)] = (t, tuple(cc))
            codes = {"identity"} if 1 in (a, b) else {"cocycle"}
            yield f"c({a},{b})[{i}]", dataclasses.replace(spec, coset_mul=table), codes
        table = dict(spec.coset_mul)
        table[(a, b)] = (t % spec.index + 1 if spec.index > 1 else 2, c)
        codes = {"identity", "action", "cocycle-coset", "cocycle", "shape"}
        yield f"t({a},{b})", dataclasses.replace(spec, coset_mul=table), codes


def test_criterion_8_validation(capsys, specs):
    parts, ok = [], True
    for name, spec in specs.items():
        n = missed = 0
        for label, bad, codes in mutations(spec):
            n += 1
            rep = validate_spec(bad)
            if rep.ok or not rep.codes() & codes:
                missed += 1
        ok &= missed == 0
        parts.append(f"{name}: {n} mutations, {missed} missed")
    report(capsys, 8, "mutations caught by validation", ok, ", ".join(parts))


def test_criterion_9_congruence_dfa(capsys):
    rng = random.Random(9)
    systems = [
        ("a", [(1,)], [0], [2]),
        ("ab", [(1, -1)], [0], [3]),
        ("abc", [(1, 2, 0), (0, -1, 3)], [1, 2], [3, 4]),
        ("abcd", [(2, 0, 1, 5), (1, 1, 1, 1), (0, 3, -2, 1)], [1, 0, 4], [5, 2, 7]),
    ]
    bad = 0
    for alphabet, zetas, etas, thetas in systems:
        dfa = build_congruence_dfa(zetas, etas, thetas, alphabet)
        for _ in range(500):
            w = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 20)))
            phi = parikh(alphabet, w)
            direct = all((sum(z * x for z, x in zip(zeta, phi)) - e) % t == 0
                         for zeta, e, t in zip(zetas, etas, thetas))
            bad += dfa_accepts(dfa, w) != direct
    report(capsys, 9, "congruence automaton = Parikh check", bad == 0,
           f"{len(systems)} systems x 500 words: {bad} disagreements")
