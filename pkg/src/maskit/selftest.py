"""Built-in invariant suites, runnable from the CLI without the test harness.

Each suite re-derives expected values from an independent path (matrix
products for the trace recursion, explicit root algebra for cusps, forced
synthetic geometry for the witness) and compares.  The mutation mode flips
the sign of the difference term in the trace recursion before running, to
demonstrate the oracles actually catch that class of bug; it restores the
module state afterwards.
"""

from __future__ import annotations

import cmath
import math
import random

import numpy as np

from . import classify, cusps, farey, moebius, raster, witness


def _random_z(rng, lo=-4.0, hi=4.0) -> complex:
    return complex(rng.uniform(lo, hi), rng.uniform(lo, hi))


def _suite_moebius(rng, checks):
    worst = 0.0
    for _ in range(200):
        rep = moebius.make_sigma_z(_random_z(rng))
        t = moebius.trace(moebius.commutator(rep.A, rep.B))
        worst = max(worst, abs(t + 2.0))
    checks.append(("commutator trace -2", worst < 1e-10, f"worst |t+2| = {worst:.2e}"))

    worst = 0.0
    for _ in range(100):
        m1 = moebius.make_sigma_z(_random_z(rng)).A
        m2 = moebius.word_matrix(moebius.make_sigma_z(_random_z(rng)), "abA")
        lhs = moebius.trace(moebius.compose(m1, m2)) + moebius.trace(
            moebius.compose(m1, moebius.inverse(m2))
        )
        rhs = moebius.trace(m1) * moebius.trace(m2)
        worst = max(worst, abs(lhs - rhs))
    checks.append(("two-generator trace identity", worst < 1e-9, f"worst = {worst:.2e}"))

    worst = 0.0
    for _ in range(100):
        z, w = _random_z(rng), _random_z(rng)
        ext = moebius.make_sigma_zw(z, w)
        t = moebius.trace(moebius.compose(moebius.inverse(ext.C), ext.base.A))
        worst = max(worst, abs(t - 1j * (z - w)))
    checks.append(("extension conjugation trace", worst < 1e-12, f"worst = {worst:.2e}"))

    fixtures = [(2j, 1.0), (2 + 2j, math.sqrt(2.0)), (8j, 2.0)]
    ok = all(abs(moebius.normalized_length(w) - v) < 1e-12 for w, v in fixtures)
    checks.append(("normalized length fixtures", ok, "2i->1, 2+2i->sqrt2, 8i->2"))


def _suite_farey(rng, q_scale, checks):
    pairs = [((1, 2), ((0, 1), (1, 1))), ((2, 5), ((1, 3), (1, 2))), ((3, 5), ((1, 2), (2, 3)))]
    ok = True
    for (p, q), ((lp, lq), (rp, rq)) in pairs:
        l, r = farey.farey_parents(farey.FareySlope(p, q))
        ok = ok and (l.p, l.q, r.p, r.q) == (lp, lq, rp, rq)
    checks.append(("farey parents fixtures", ok, "1/2, 2/5, 3/5"))

    zs = [_random_z(rng) for _ in range(20)]
    worst = 0.0
    for z in zs:
        cache = farey.TraceCache(z)
        rep = moebius.make_sigma_z(z)
        for s in farey.slopes_up_to(min(q_scale, 12), -1.0, 1.0):
            t_rec = cache.trace(s)
            t_mat = moebius.trace(moebius.word_matrix(rep, farey.slope_word(s)))
            # relative once |t| > 1: high slopes reach |t| ~ 1e9 where
            # doubles cannot hold an absolute 1e-8
            err = abs(abs(t_rec) - abs(t_mat)) / max(1.0, abs(t_mat))
            worst = max(worst, err)
    checks.append(
        ("trace recursion vs matrix products", worst < 1e-8, f"worst = {worst:.2e}")
    )

    worst = 0.0
    for z in zs[:10]:
        cache = farey.TraceCache(z)
        x = cache.trace(farey.ZERO)
        y = cache.trace(farey.INFINITY)
        u = cache.trace(farey.FareySlope(1, 1))
        worst = max(worst, abs(x * x + y * y + u * u - x * y * u))
    checks.append(("Markov identity", worst < 1e-10, f"worst = {worst:.2e}"))

    worst = 0.0
    for z in zs[:10]:
        cache = farey.TraceCache(z)
        shifted = farey.TraceCache(z + 2.0)
        mirrored = farey.TraceCache(-z.conjugate())
        for s in farey.slopes_up_to(min(q_scale, 8), -1.0, 1.0):
            base = abs(cache.trace(s))
            t1 = abs(shifted.trace(s))
            t2 = abs(cache.trace(farey.slope(s.p + s.q, s.q)))
            worst = max(worst, abs(t1 - t2))
            t3 = abs(mirrored.trace(farey.slope(-s.p, s.q)))
            worst = max(worst, abs(t3 - base))
            t4 = abs(farey.trace_of_slope(z.conjugate(), s))
            worst = max(worst, abs(t4 - base))
    checks.append(("trace symmetry identities", worst < 1e-9, f"worst = {worst:.2e}"))

    worst = 0.0
    for z in zs[:10]:
        cache = farey.TraceCache(z)
        for s in farey.slopes_up_to(min(q_scale, 10), 0.0, 1.0):
            t = cache.trace(s)
            diff = abs(farey.trace_polynomial(s).evaluate(z) - t) / max(1.0, abs(t))
            worst = max(worst, diff)
    checks.append(
        ("polynomial vs numeric recursion", worst < 1e-8, f"worst = {worst:.2e}")
    )


def _suite_cusps(checks):
    cfg = classify.ClassifierConfig()
    fixtures = [
        ((0, 1), 2j),
        ((1, 1), -2 + 2j),
        ((1, 2), complex(-1.0, math.sqrt(3.0))),
    ]
    ok = True
    detail = []
    for (p, q), expected in fixtures:
        res = cusps.cusp_point(farey.FareySlope(p, q), cfg)
        good = abs(res.z - expected) < 1e-8 and res.residual < 1e-9
        ok = ok and good
        detail.append(f"{p}/{q}@{res.z:.4f}")
    checks.append(("cusp fixtures", ok, ", ".join(detail)))

    roots = sorted(
        cusps.poly_roots(farey.trace_polynomial(farey.FareySlope(1, 2)), 2)
        + cusps.poly_roots(farey.trace_polynomial(farey.FareySlope(1, 2)), -2),
        key=lambda r: (round(r.real, 6), round(r.imag, 6)),
    )
    expected = [-2.0, complex(-1, -math.sqrt(3)), complex(-1, math.sqrt(3)), 0.0]
    ok = len(roots) == 4 and all(abs(a - b) < 1e-9 for a, b in zip(roots, expected))
    checks.append(("1/2 parabolic root set", ok, "{0, -2, -1±i√3}"))

    base = cusps.cusp_point(farey.FareySlope(0, 1), cfg).z
    shifted = cusps.cusp_point(farey.FareySlope(1, 1), cfg).z
    ok = abs(shifted - (base - 2.0)) < 1e-8
    reflected = cusps.cusp_point(farey.FareySlope(-1, 2), cfg).z
    ok = ok and abs(reflected - (-complex(-1, math.sqrt(3.0)).conjugate())) < 1e-8
    checks.append(("cusp translation/reflection laws", ok, "reindex -2; mirror -conj"))


def _suite_classify(checks):
    cfg = classify.ClassifierConfig()
    c1 = classify.classify_point(0.1j, cfg)
    c2 = classify.classify_point(1.5, cfg)
    c3 = classify.classify_point(4j, cfg)
    c4 = classify.classify_point(-4j, cfg)
    ok = (
        c1.verdict is classify.Verdict.OUTSIDE_CERTIFIED
        and c1.witness == farey.FareySlope(0, 1)
        and c2.verdict is classify.Verdict.OUTSIDE_CERTIFIED
        and c3.verdict is classify.Verdict.INSIDE_PLUS
        and c4.verdict is classify.Verdict.INSIDE_MINUS
    )
    checks.append(("classifier fixtures", ok, "0.1i, 1.5, ±4i"))

    # every rejection witness must re-verify against a matrix product
    ok = True
    for z in (0.1j, 1.0 + 0.3j, -1.0 + 1.2j, 3.7 + 0.4j):
        res = classify.classify_point(z, cfg)
        if res.verdict is classify.Verdict.OUTSIDE_CERTIFIED and res.witness:
            t = moebius.trace(
                moebius.word_matrix(
                    moebius.make_sigma_z(z), farey.slope_word(res.witness)
                )
            )
            ok = ok and abs(t) < cfg.reject_threshold + 1e-9
    checks.append(("rejection witnesses re-verify", ok, "matrix |t| < 2"))

    m1 = classify.a_membership(4j, 8j, cfg)
    m2 = classify.a_membership(4j, 5.0, cfg)
    m3 = classify.a_membership(4j, 4j, cfg)
    ok = (
        m1.verdict is classify.AVerdict.MEMBER
        and m1.n == 0
        and m2.verdict is classify.AVerdict.NON_MEMBER_CERTIFIED
        and m3.verdict is classify.AVerdict.NON_MEMBER_CERTIFIED
    )
    checks.append(("membership fixtures", ok, "(4i,8i), (4i,5), (4i,4i)"))


def _suite_raster(checks):
    win = raster.Window.from_bounds(-0.5, 0.5, 0.0, 1.0, 8, 8)
    grid = raster.rasterize_maskit(win, classify.ClassifierConfig())
    ok = bool((grid.cells == raster.CELL_OUTSIDE).all())
    checks.append(("low window all outside", ok, "|z| < 2 seed rejection"))

    cells = np.full((5, 7), raster.CELL_NON_MEMBER, dtype=np.uint8)
    cells[1:3, 1:3] = raster.CELL_MEMBER
    cells[3:5, 4:6] = raster.CELL_MEMBER
    rep = raster.components(
        raster.Raster(window=raster.Window.from_bounds(0, 1, 0, 1, 7, 5), cells=cells, kind="a_slice")
    )
    ok = rep.count == 2 and rep.components[0].cells == 4
    checks.append(("two-block components", ok, f"count = {rep.count}"))

    sym = raster.check_symmetries(classify.ClassifierConfig(), [4j, 0.1j, 1.0])
    ok = all(row["ok"] for row in sym)
    checks.append(("symmetry audit samples", ok, "4i, 0.1i, 1.0"))


def _suite_witness(checks):
    synth = classify.SyntheticSlice()
    cfg = classify.ClassifierConfig()
    q, z = witness.find_rectangle(cfg, classifier=synth)
    report = witness.verify_witness(q, z, cfg, classifier=synth, raster_rows=32)
    counting = witness.components_near_infinity(
        3.0 * z, 3, cfg, rectangle=report.R, classifier=synth, cols=256, rows=32
    )
    ok = report.all_certified and counting.ok and counting.components_found >= 3
    checks.append(
        (
            "synthetic witness pipeline",
            ok,
            f"certified={report.all_certified}, components={counting.components_found}",
        )
    )


def run_selftest(q_scale: int = 12, seed: int = 0, mutate: bool = False):
    """Run all suites; returns (all_passed, list of printable lines)."""
    rng = random.Random(seed)
    checks: list[tuple[str, bool, str]] = []
    original_sign = farey._DIFFERENCE_SIGN
    if mutate:
        farey._DIFFERENCE_SIGN = +1.0
    try:
        _suite_moebius(rng, checks)
        _suite_farey(rng, q_scale, checks)
        _suite_cusps(checks)
        _suite_classify(checks)
        _suite_raster(checks)
        _suite_witness(checks)
    finally:
        farey._DIFFERENCE_SIGN = original_sign
    lines = []
    passed = True
    for name, ok, detail in checks:
        passed = passed and ok
        lines.append(f"{'ok  ' if ok else 'FAIL'} {name}  ({detail})")
    lines.append(
        f"{'all checks passed' if passed else 'SELF-TEST FAILURES PRESENT'}"
        + (" [mutation mode: failures expected]" if mutate else "")
    )
    return passed, lines
