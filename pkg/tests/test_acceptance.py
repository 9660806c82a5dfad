"""Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL line each.

All comparisons are exact (Fraction / Surd); nothing is checked in floating point.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction

import pytest

from nlcopt import cli
from nlcopt.exact import Surd
from nlcopt.fibers import fiber_integer_point
from nlcopt.harness import (ExplicitFeasibleSet, Instance, brute_force_opt, brute_image_optimum,
                            brute_images, brute_support, brute_vertices, gen_instance)
from nlcopt.io import write_instance
from nlcopt.linalg import dot, matvec
from nlcopt.objectives import (INF, identity, l1_minus_lp, linear, max_coordinate, min_coordinate,
                               negated, pnorm)
from nlcopt.optimizers import norm_max_approx, quasiconvex_max, raycave_min_approx
from nlcopt.rand_intersect import (VectorialMatroidPair, interpolate_support, optimal_common_base,
                                   random_image_optimum)
from nlcopt.runner import solve, verify
from nlcopt.weights import FeasibleMeta, GeneralizedUnaryWeights, materialize

U = GeneralizedUnaryWeights.unary


def S(v):
    return Surd.coerce(v)


def random_points(rng, n, beta, count):
    """``count`` distinct nonnegative integer points with coordinate sum <= beta."""
    if math.comb(n + beta, n) <= 20000:
        pool = [p for p in itertools.product(range(beta + 1), repeat=n) if sum(p) <= beta]
        return sorted(rng.sample(pool, min(count, len(pool))))
    pts = set()
    while len(pts) < count:
        x = [0] * n
        for _ in range(rng.randint(0, beta)):
            x[rng.randrange(n)] += 1
        pts.add(tuple(x))
    return sorted(pts)


# ---------------------------------------------------------------------------
# suite 1: exact quasiconvex maximisation (criteria 1-3)


def suite1_instance(i):
    rng = random.Random(1000 + i)
    d = (1, 2, 3)[i % 3]
    n = rng.randint(2, 8)
    beta = rng.randint(1, 8 if d < 3 else 4)
    pts = random_points(rng, n, beta, rng.randint(1, 200 if d < 3 else 60))
    lo, hi = {1: (-3, 3), 2: (-2, 2), 3: (-1, 1)}[d]
    W = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(d)]
    f = rng.choice([pnorm(1), pnorm(2), pnorm(INF), linear([rng.randint(-3, 3) for _ in range(d)]),
                    max_coordinate()])
    return ExplicitFeasibleSet(tuple(pts), FeasibleMeta(beta, n)), W, f


@pytest.fixture(scope="module")
def suite1():
    rows = []
    t0 = time.perf_counter()
    for i in range(210):
        F, W, f = suite1_instance(i)
        res = quasiconvex_max(F.polytope(), U(W), F.meta, f)
        _, best = brute_force_opt(F, W, f, "max")
        rows.append((F, W, f, res, best))
    return rows, time.perf_counter() - t0


def test_criterion_01_exact_equivalence(suite1, acceptance):
    rows, elapsed = suite1
    bad = [k for k, (F, W, f, res, best) in enumerate(rows)
           if res.value != best or res.x not in F or matvec(W, res.x) != res.u]
    sizes = max(len(r[0]) for r in rows), max(r[0].n for r in rows), max(r[0].meta.beta for r in rows)
    ok = not bad and len(rows) >= 200 and elapsed < 120
    acceptance(1, ok, f"{len(rows) - len(bad)}/{len(rows)} exact matches "
                      f"(max |F|={sizes[0]}, n={sizes[1]}, beta={sizes[2]}), {elapsed:.1f}s")
    assert ok, bad[:5]


def test_criterion_02_fiber_integrality(suite1, acceptance):
    rows, _ = suite1
    count, failures = 0, []
    for k, (F, W, f, res, best) in enumerate(rows):
        for u in res.details["image_vertices"]:
            count += 1
            try:
                x = fiber_integer_point(F.polytope(), W, u)
            except Exception as exc:        # any failure counts against the criterion
                failures.append((k, u, repr(exc)))
                continue
            if not (all(isinstance(v, int) for v in x) and x in F and list(matvec(W, x)) == list(u)):
                failures.append((k, u, x))
    ok = not failures
    acceptance(2, ok, f"{count - len(failures)}/{count} image vertices pulled back to points of F")
    assert ok, failures[:5]


def test_criterion_03_image_vertex_completeness(suite1, acceptance):
    rows, _ = suite1
    bad = []
    for k, (F, W, f, res, best) in enumerate(rows):
        got = {tuple(u) for u in res.details["image_vertices"]}
        if got != set(brute_vertices(brute_images(F, W))):
            bad.append(k)
    ok = not bad
    acceptance(3, ok, f"{len(rows) - len(bad)}/{len(rows)} vertex sets equal the brute-force hull vertices")
    assert ok, bad[:5]


# ---------------------------------------------------------------------------
# criterion 4: norm maximisation


def test_criterion_04_norm_max_ratio(acceptance):
    checked, violations, gaps, max_ratio = 0, [], 0, 1.0
    instances = []
    for i in range(210):
        rng = random.Random(4000 + i)
        d = rng.randint(1, 4)
        n = rng.randint(2, 6)
        beta = rng.randint(1, 5)
        pts = random_points(rng, n, beta, rng.randint(1, 40))
        W = [[rng.randint(0, 4) for _ in range(n)] for _ in range(d)]
        instances.append((ExplicitFeasibleSet(tuple(pts), FeasibleMeta(beta, n)), W))
    # spike/spread family: the row LPs pick the spikes, the optimum is the spread point
    for k in range(2, 12):
        pts = [(k, 0), (0, k), (k - 1, k - 1)]
        instances.append((ExplicitFeasibleSet(tuple(pts), FeasibleMeta(2 * k, 2)), [[1, 0], [0, 1]]))
    for idx, (F, W) in enumerate(instances):
        for p in (1, 2, INF):
            f = pnorm(p)
            res = norm_max_approx(F.polytope(), W, f)
            _, best = brute_force_opt(F, W, f, "max")
            checked += 1
            # f(opt) <= d^(1/p) f(returned), exactly (Surd comparison = comparison of p-th powers)
            if not (res.x in F and S(best) <= S(res.guarantee) * S(res.value)):
                violations.append((idx, p))
            if S(best) > S(res.value):
                gaps += 1
                max_ratio = max(max_ratio, float(S(best)) / float(S(res.value)))
    ok = not violations and len(instances) >= 200 and gaps >= 1
    acceptance(4, ok, f"{checked - len(violations)}/{checked} ratio checks hold over {len(instances)} "
                      f"instances; {gaps} with ratio > 1 (max {max_ratio:.4f})")
    assert ok, violations[:5]


# ---------------------------------------------------------------------------
# criterion 5: ray-concave minimisation


def test_criterion_05_raycave_ratio(acceptance):
    checked, violations, exact_p1 = 0, [], 0
    n_inst = 0
    for i in range(210):
        rng = random.Random(5000 + i)
        d = (1, 2, 3)[i % 3]
        n = rng.randint(2, 6)
        beta = rng.randint(1, 6 if d < 3 else 3)
        pts = random_points(rng, n, beta, rng.randint(1, 40))
        W = [[rng.randint(0, 3 if d < 3 else 1) for _ in range(n)] for _ in range(d)]
        F = ExplicitFeasibleSet(tuple(pts), FeasibleMeta(beta, n))
        n_inst += 1
        fs = [("min-coordinate", min_coordinate()), ("p1", pnorm(1)), ("p2", pnorm(2)),
              ("p3", pnorm(3)), ("pinf", pnorm(INF))]
        if d == 2:
            fs.append(("l1-linf", l1_minus_lp(INF)))
        for name, f in fs:
            res = raycave_min_approx(F.polytope(), W, F.meta, f)
            _, best = brute_force_opt(F, W, f, "min")
            checked += 1
            ok = res.x in F and S(res.value) <= d * S(best)
            if f.kind == "pnorm":
                ok = ok and S(res.value) <= S(res.guarantee) * S(best)
            if name == "p1":
                ok = ok and res.value == best
                exact_p1 += res.value == best
            if not ok:
                violations.append((i, name))
    # tight witness: d=2, 2-norm, ratio^2 = 2
    F = ExplicitFeasibleSet.of([(2, 0), (0, 2), (1, 1)])
    res = raycave_min_approx(F.polytope(), [[1, 0], [0, 1]], F.meta, pnorm(2))
    _, best = brute_force_opt(F, [[1, 0], [0, 1]], pnorm(2), "min")
    tight = S(res.value) * S(res.value) == 2 * S(best) * S(best) and res.guarantee == Surd.root(2, 2)
    ok = not violations and tight and n_inst >= 200
    acceptance(5, ok, f"{checked - len(violations)}/{checked} bound checks over {n_inst} instances; "
                      f"p=1 exact on {exact_p1}; tight witness ratio^2 = 2: {tight}")
    assert ok, violations[:5]


# ---------------------------------------------------------------------------
# criterion 6: determinant identity / interpolation


def test_criterion_06_interpolation(acceptance):
    t0 = time.perf_counter()
    kinds = ("uniform-matroid-pair", "graphic-like", "transversal-like")
    checked, bad, n_inst = 0, [], 0
    for i in range(60):
        rng = random.Random(6000 + i)
        n = rng.randint(2, 6)
        r = rng.randint(1, min(3, n))
        d = rng.randint(1, 2)
        params = {"n": n, "r": r, "d": d, "wmax": rng.randint(1, 3), "generic": i % 2 == 0}
        try:
            inst = gen_instance(kinds[i % 3], params, 6000 + i)
        except Exception:
            continue
        n_inst += 1
        pair, W = inst.feasible, materialize(inst.weights)
        for a in itertools.product((1, 2, 3), repeat=n):
            g = {u: v for u, v in brute_support(pair, W, a).items() if v != 0}
            checked += 1
            if interpolate_support(pair, W, a).entries != g:
                bad.append((i, a))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    acceptance(6, ok, f"{checked - len(bad)}/{checked} (instance, a) pairs match brute-force g_u "
                      f"over {n_inst} instances, {elapsed:.1f}s")
    assert ok, bad[:5]


# ---------------------------------------------------------------------------
# criterion 7: Schwartz bound on the cancellation family


def cancellation_pair(n):
    # columns 0, 1 carry the cancelling bases; the padding columns are loops of M2
    M1 = [[1, 1] + [1] * (n - 2)]
    M2 = [[1, -1] + [0] * (n - 2)]
    return VectorialMatroidPair.validated(M1, M2)


def test_criterion_07_schwartz_bound(acceptance):
    lines, ok = [], True
    for n in (2, 3, 4):
        pair = cancellation_pair(n)
        W = [[0] * n]
        r, s = pair.r, 2 * pair.r * (n + 1)
        misses = 0
        for a in itertools.product(range(1, s + 1), repeat=n):
            misses += (0,) not in interpolate_support(pair, W, a).entries
        p = Fraction(misses, s ** n)
        ok &= p <= Fraction(r, s)
        lines.append(f"n={n}: miss {p} <= r/s={Fraction(r, s)}")
    # sampled version on n=3
    pair, n = cancellation_pair(3), 3
    s = 2 * (n + 1)
    p = Fraction(1, s)
    trials = 10_000
    miss = sum(random_image_optimum(pair, [[0] * n], identity(), seed).outcome is None
               for seed in range(trials))
    sigma = math.sqrt(float(p) * (1 - float(p)) / trials)
    within = abs(miss / trials - float(p)) <= 3 * sigma
    ok &= within
    lines.append(f"sampled {miss}/{trials} = {miss / trials:.4f} vs {float(p):.4f} (3 sigma = {3 * sigma:.4f})")
    acceptance(7, ok, "; ".join(lines))
    assert ok


# ---------------------------------------------------------------------------
# criterion 8: randomized end-to-end success


CANCELLING = [
    # g_0 = a1 - a2 cancels with probability 1/s; minimising u then needs the cancelling bases
    (([[1, 1, 1]], [[1, -1, 1]]), [[0, 0, 1]], negated(identity())),
    (([[1, 1, 1, 1]], [[1, -1, 1, 1]]), [[0, 0, 1, 1]], negated(identity())),
]


def suite8_instance(i):
    if i < len(CANCELLING):
        (M1, M2), W, f = CANCELLING[i]
        return VectorialMatroidPair.validated(M1, M2), W, f
    rng = random.Random(8000 + i)
    kind = ("uniform-matroid-pair", "graphic-like", "transversal-like")[i % 3]
    n = rng.randint(3, 6)
    r = rng.randint(1, min(3, n - 1))
    d = 1 + i % 2
    inst = gen_instance(kind, {"n": n, "r": r, "d": d, "wmax": 3 if d == 1 else 2,
                               "generic": i % 2 == 0}, 8000 + i)
    f = [pnorm(2), pnorm(1), identity() if d == 1 else max_coordinate(),
         negated(pnorm(INF))][i % 4]
    return inst.feasible, materialize(inst.weights), f


def test_criterion_08_randomized_success(acceptance):
    runs = 500
    rates, det_ok = [], 0
    n_inst = 24
    for i in range(n_inst):
        pair, W, f = suite8_instance(i)
        target = f(brute_image_optimum(pair, W, f, "max"))
        hits = 0
        for seed in range(runs):
            res = optimal_common_base(pair, W, f, rng_seed=(i << 32) | seed)
            hits += res.is_common_base and f(res.u) == target
        rates.append(hits / runs)
        res = optimal_common_base(pair, W, f, image_optimum=brute_image_optimum)
        det_ok += res.is_common_base and f(res.u) == target
    ok = min(rates) >= 0.45 and det_ok == n_inst
    acceptance(8, ok, f"{n_inst} instances x {runs} runs: min rate {min(rates):.3f}, "
                      f"mean {sum(rates) / len(rates):.3f}; deterministic variant {det_ok}/{n_inst}")
    assert ok, rates


# ---------------------------------------------------------------------------
# criterion 9: primary objective face


def test_criterion_09_primary_face(acceptance):
    algorithms = ("exact-max", "norm-max", "raycave-min")
    bad, n_inst = [], 0
    for i in range(60):
        rng = random.Random(9000 + i)
        n = rng.randint(2, 5)
        d = rng.randint(1, 2)
        beta = rng.randint(1, 4)
        pts = random_points(rng, n, beta, rng.randint(2, 25))
        W = [[rng.randint(0, 3) for _ in range(n)] for _ in range(d)]
        c = tuple(rng.randint(-2, 2) for _ in range(n))
        F = ExplicitFeasibleSet(tuple(pts), FeasibleMeta(beta, n))
        algo = algorithms[i % 3]
        inst = Instance(F, U(W), "pnorm:2", primary=c)
        res = solve(inst, algo)
        ver = verify(inst, res, algo)
        z = max(dot(c, x) for x in pts)
        n_inst += 1
        if dot(c, res.x) != z or not ver["agree"]:
            bad.append((i, algo))
    ok = not bad and n_inst >= 50
    acceptance(9, ok, f"{n_inst - len(bad)}/{n_inst} instances attain z* and meet the inner guarantee "
                      f"on the c-optimal subset")
    assert ok, bad[:5]


# ---------------------------------------------------------------------------
# criterion 10: determinism


def _report(argv, path):
    assert cli.main(argv + ["--out", str(path)]) == 0
    text = path.read_text()
    rep = json.loads(text)
    rep.pop("timing", None)
    return text, rep


def test_criterion_10_determinism(tmp_path, acceptance):
    files = []
    for k, (kind, params) in enumerate([("random-points", {"n": 4, "beta": 4, "count": 20, "d": 2}),
                                        ("permutation-matrices", {"size": 3, "d": 2}),
                                        ("graphic-like", {"n": 5, "r": 2, "d": 2, "wmax": 2}),
                                        ("uniform-matroid-pair", {"n": 5, "r": 2, "d": 1})]):
        p = tmp_path / f"i{k}.json"
        write_instance(gen_instance(kind, params, 77), p)
        q = tmp_path / f"j{k}.json"
        write_instance(gen_instance(kind, params, 77), q)
        assert p.read_bytes() == q.read_bytes()
        files.append((p, kind))
    identical, value_same, total = 0, 0, 0
    for p, kind in files:
        algos = ["matroid-random"] if "matroid" in kind or "graphic" in kind else []
        algos += ["exact-max", "norm-max", "raycave-min"]
        for algo in algos:
            for cmd in ("solve", "fibers", "support", "verify"):
                if cmd == "support" and algo != "matroid-random":
                    continue
                if cmd == "fibers" and algo != "exact-max":
                    continue
                argv = [cmd, "--instance", str(p)]
                if cmd in ("solve", "verify"):
                    argv += ["--algorithm", algo, "--seed", "12345", "--repeats", "2"]
                if cmd == "support":
                    argv += ["--a", ",".join(["2"] * 5)]
                total += 1
                _, r1 = _report(argv + ["--threads", "1"], tmp_path / "a.json")
                _, r2 = _report(argv + ["--threads", "1"], tmp_path / "b.json")
                identical += r1 == r2
                if cmd in ("solve", "verify"):
                    vals = set()
                    for t in (1, 2, 4):
                        _, r = _report(argv + ["--threads", str(t)], tmp_path / "c.json")
                        vals.add((json.dumps(r["result"]["value"]), tuple(r["result"]["u"])))
                    value_same += len(vals) == 1
                else:
                    value_same += 1
    ok = identical == total and value_same == total
    acceptance(10, ok, f"{identical}/{total} reports identical (timing excluded, digest included); "
                       f"{value_same}/{total} identical solution values across threads 1/2/4")
    assert ok
