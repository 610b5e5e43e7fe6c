"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 3's convergence-tolerance clause is kept exactly as stated
even though the iterates of the tangent line/ball pair decay like n**-0.5,
which puts the target mathematically out of reach within the budget; that
test is an intentional, documented red.
"""

import math
import time

import numpy as np
import pytest

from conftest import preset_pairs
from projfeas.driver import fit_rate, iterate, probe_fixed_points
from projfeas.operators import (
    AlternatingProjections,
    Combination,
    DouglasRachford,
    SingleProjector,
    check_step_energy_identity,
    dr_two_forms_agree,
)
from projfeas.presets import line_and_ball
from projfeas.regularity import (
    SAFETY_INFLATION,
    Region,
    check_strong_regularity,
    estimate_c,
    estimate_kappa,
    estimate_pair_regularity,
    estimate_subregularity,
    eps_tilde_douglas_rachford,
    eps_tilde_projector,
    eps_tilde_reflector,
    friedrichs_cosine,
    predicted_rates,
)
from projfeas.runner import subspace_iff_sweep
from projfeas.sampling import ball_points
from projfeas.sets import AffineSubspace, KinkedRegion
from projfeas.solution import point_set_solution, singleton_solution

HALF_SQRT2 = math.sqrt(2.0) / 2.0


def _report(criterion, ok, detail):
    print(f"[{criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{criterion}: {detail}"


# ---------------------------------------------------------------------------
# criterion 1: two lines in the plane
# ---------------------------------------------------------------------------


def test_criterion_1_two_lines_rates(lines2):
    a, b, sol = lines2
    t0 = time.perf_counter()
    tr_map = iterate(AlternatingProjections(a, b), [1.0, 0.0], sol, max_iters=500, tol=1e-10)
    fit_map = fit_rate(tr_map)
    tr_dr = iterate(DouglasRachford(a, b), [1.0, 0.0], sol, max_iters=500, tol=1e-10)
    fit_dr = fit_rate(tr_dr)
    elapsed = time.perf_counter() - t0
    ok = (
        tr_map.final_dist_to_s < 1e-10
        and abs(fit_map.observed_rate - 0.5) <= 0.01
        and tr_dr.final_dist_to_s < 1e-10
        and abs(fit_dr.observed_rate - HALF_SQRT2) <= 0.01
        and elapsed < 1.0
    )
    _report(
        "criterion 1",
        ok,
        f"map rate {fit_map.observed_rate:.4f} (want 0.5), dr rate "
        f"{fit_dr.observed_rate:.4f} (want {HALF_SQRT2:.4f}), {elapsed:.2f}s",
    )


# ---------------------------------------------------------------------------
# criterion 2: the same lines in three dimensions
# ---------------------------------------------------------------------------


def test_criterion_2_embedded_lines(lines3):
    a, b, sol = lines3
    op = DouglasRachford(a, b)
    stuck = iterate(op, [0.0, 0.0, 1.0], sol, max_iters=200, tol=1e-10)
    rates = []
    for x0 in ([1.0, 0.5, 0.0], [-0.3, 0.8, 0.0]):  # starts in the span of the pair
        tr = iterate(op, x0, sol, max_iters=300, tol=1e-11)
        rates.append(fit_rate(tr).observed_rate)
    strong = check_strong_regularity(a, b, [0.0, 0.0, 0.0])
    cf = friedrichs_cosine(a.frame, b.frame)
    ok = (
        stuck.stop_reason == "stagnation"
        and abs(stuck.final_dist_to_s - 1.0) <= 1e-12
        and all(abs(r - HALF_SQRT2) <= 0.01 for r in rates)
        and strong is False
        and abs(cf - HALF_SQRT2) <= 1e-10
    )
    _report(
        "criterion 2",
        ok,
        f"stagnation dist {stuck.final_dist_to_s}, in-span rates {np.round(rates, 4)}, "
        f"strong {strong}, friedrichs {cf:.12f}",
    )


# ---------------------------------------------------------------------------
# criterion 3: tangent line and ball
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def tangency_long_run():
    line, ball = line_and_ball()
    sol = singleton_solution((line, ball), [0.0, 0.0])
    trace = iterate(
        AlternatingProjections(line, ball), [1.0, 0.0], sol, max_iters=1_000_000, tol=1e-6
    )
    return line, ball, sol, trace


def test_criterion_3_map_tolerance_within_budget(tangency_long_run):
    # As stated this cannot pass: the iterates obey x_n = (n+1)**-0.5 exactly
    # (the reciprocal squared distance grows by one per cycle), so after 1e6
    # iterations the distance is ~1e-3, far above 1e-6.  Kept faithful to the
    # stated target as an honest red; see the notes in the repository docs.
    _, _, _, trace = tangency_long_run
    _report(
        "criterion 3 (tolerance clause)",
        trace.final_dist_to_s < 1e-6,
        f"dist after {len(trace) - 1} iterations = {trace.final_dist_to_s:.6e} "
        f"(closed form gives (n+1)**-0.5 = {1/math.sqrt(len(trace)):.6e})",
    )


def test_criterion_3_map_sublinear(tangency_long_run):
    _, _, _, trace = tangency_long_run
    fit = fit_rate(trace)
    _report(
        "criterion 3 (sublinearity)",
        fit.linear is False,
        f"linear={fit.linear}, fitted rate {fit.observed_rate:.8f}",
    )


def test_criterion_3_dr_fixed_points_off_intersection(line_ball):
    line, ball, sol = line_ball
    op = DouglasRachford(ball, line)  # reflect across the line first
    res = probe_fixed_points(op, Region(np.array([0.0, 1.0]), 1.5), 32, 7, sol,
                             max_iters=3000, tol=1e-9)
    worst = max(d for _, d in res.limits)
    _report("criterion 3 (spurious fixed points)", worst > 0.01,
            f"largest limit distance {worst:.4f}")


def test_criterion_3_kappa_divergence(line_ball):
    line, ball, sol = line_ball
    vals = [estimate_kappa(line, ball, sol, 1.0, samples=n, seed=5) for n in (512, 1024, 2048)]
    ratios = [vals[i + 1] / vals[i] for i in range(2)]
    _report(
        "criterion 3 (kappa divergence)",
        all(r >= 1.6 for r in ratios),
        f"kappa {np.round(vals, 1)} ratios {np.round(ratios, 3)}",
    )


# ---------------------------------------------------------------------------
# criterion 4: cross and diagonal
# ---------------------------------------------------------------------------


def test_criterion_4_cross_and_diagonal(cross_diag):
    cross, diag, sol = cross_diag
    eps = estimate_subregularity(cross, sol, 1.0, samples=2048, seed=0)
    strong = check_strong_regularity(cross, diag, [0.0, 0.0])
    starts = ball_points(np.zeros(2), 1.0, 120, seed=42)[1:101]
    assert starts.shape[0] == 100
    finals = []
    for algo in (AlternatingProjections(cross, diag), DouglasRachford(cross, diag)):
        for x0 in starts:
            finals.append(iterate(algo, x0, sol, max_iters=300, tol=1e-8).final_dist_to_s)
    ok = eps <= 1e-9 and strong is True and all(d < 1e-8 for d in finals)
    _report(
        "criterion 4",
        ok,
        f"eps {eps:.2e}, strong {strong}, worst of {len(finals)} runs {max(finals):.2e}",
    )


# ---------------------------------------------------------------------------
# criterion 5: circle and line
# ---------------------------------------------------------------------------


def test_criterion_5_circle_line(circle_line):
    circle, line, sol = circle_line
    w = sol.witness
    x0 = w + np.array([0.05, 0.05])
    assert np.linalg.norm(x0 - w) <= 0.1
    tr_map = iterate(AlternatingProjections(circle, line), x0, sol, max_iters=400, tol=1e-13)
    tr_dr = iterate(DouglasRachford(circle, line), x0, sol, max_iters=400, tol=1e-13)
    f_map = fit_rate(tr_map)
    f_dr = fit_rate(tr_dr)
    delta = 0.025
    eps_a = estimate_subregularity(circle, sol, delta, samples=2048, seed=2)
    eps_b = estimate_subregularity(line, sol, delta, samples=2048, seed=2)
    kappa = estimate_kappa(circle, line, sol, delta, samples=2048, seed=2)
    c = estimate_c(circle, line, w, delta, samples=2048, seed=2)
    rep = predicted_rates(
        eps_a, eps_b, kappa, c,
        a_convex=False, b_convex=True, b_affine=True,
        delta=delta, inflation=SAFETY_INFLATION,
    )
    ok = (
        f_map.r_squared >= 0.98
        and f_map.observed_rate <= 0.99
        and f_dr.r_squared >= 0.98
        and f_dr.observed_rate <= 0.99
        and f_dr.observed_rate <= rep.predicted_rate_dr
    )
    _report(
        "criterion 5",
        ok,
        f"map rate {f_map.observed_rate:.4f} (r2 {f_map.r_squared:.4f}), "
        f"dr rate {f_dr.observed_rate:.4f} <= predicted {rep.predicted_rate_dr:.4f} "
        f"(certified={rep.dr_certified})",
    )


# ---------------------------------------------------------------------------
# criterion 6: the kinked region
# ---------------------------------------------------------------------------


def test_criterion_6_kinked_region():
    k = KinkedRegion()
    eps_pair = estimate_pair_regularity(k, [0.0, 0.0], 1.0, samples=4096, seed=0)
    normals = k.proximal_normals([0.0, 0.0])
    ok = 0.70 <= eps_pair <= 0.7072 and normals == []
    _report("criterion 6", ok, f"pair constant {eps_pair:.6f}, corner cone {normals}")


# ---------------------------------------------------------------------------
# criterion 7: identity suite
# ---------------------------------------------------------------------------


def test_criterion_7_identity_suite():
    rng = np.random.default_rng(77)
    pairs = preset_pairs()
    worst_identity = 0.0
    all_agree = True
    per_geometry = 1000 // len(pairs)
    for name, a, b, witness in pairs:
        for _ in range(per_geometry):
            x = witness + rng.normal(size=a.dim)
            y = witness + rng.normal(size=a.dim)
            scale = max(1.0, np.linalg.norm(x) ** 2, np.linalg.norm(y) ** 2)
            worst_identity = max(worst_identity, check_step_energy_identity(a, b, x, y) / scale)
            all_agree &= dr_two_forms_agree(a, b, x)
    worst_affine = 0.0
    affine_sets = [s for _, a, b, _ in pairs for s in (a, b) if isinstance(s, AffineSubspace)]
    for _ in range(1000):
        s = affine_sets[rng.integers(len(affine_sets))]
        x = rng.normal(size=s.dim) * 2
        y = rng.normal(size=s.dim) * 2
        px = s.project(x).selected
        py = s.project(y).selected
        lhs = np.linalg.norm(px - py) ** 2 + np.linalg.norm((x - px) - (y - py)) ** 2
        scale = max(1.0, np.linalg.norm(x - y) ** 2)
        worst_affine = max(worst_affine, abs(lhs - np.linalg.norm(x - y) ** 2) / scale)
    ok = worst_identity <= 1e-9 and all_agree and worst_affine <= 1e-9
    _report(
        "criterion 7",
        ok,
        f"identity residual {worst_identity:.2e}, forms agree {all_agree}, "
        f"affine equality residual {worst_affine:.2e}",
    )


# ---------------------------------------------------------------------------
# criterion 8: inequality suite
# ---------------------------------------------------------------------------


def _solution_for(name, a, b, witness):
    if name == "circle-line":
        return point_set_solution(
            (a, b), [witness, np.array([-HALF_SQRT2, HALF_SQRT2])], witness=witness
        )
    return singleton_solution((a, b), witness)


def test_criterion_8_inequality_suite():
    rng = np.random.default_rng(88)
    deltas = {
        "two-lines-2d": 1.0,
        "two-lines-3d": 1.0,
        "ball-line": 1.0,
        "cross-diagonal": 1.0,
        "circle-line": 0.05,
    }
    worst = {"projector": -np.inf, "reflector": -np.inf, "dr": -np.inf, "transfer": -np.inf}
    for name, a, b, witness in preset_pairs():
        delta = deltas[name]
        sol = _solution_for(name, a, b, witness)
        eps_a = SAFETY_INFLATION * estimate_subregularity(a, sol, delta, samples=1024, seed=1)
        eps_b = SAFETY_INFLATION * estimate_subregularity(b, sol, delta, samples=1024, seed=2)
        kappa = estimate_kappa(a, b, sol, delta, samples=1024, seed=3)
        c_est = estimate_c(a, b, witness, delta, samples=512, seed=4)
        lam = math.sqrt(max(1.0 - c_est, 0.0)) / kappa
        lim_dr = 1.0 + eps_tilde_douglas_rachford(eps_a, eps_b)
        xbar = witness
        for _ in range(1000):
            step = rng.normal(size=a.dim)
            x = witness + step * (delta / 2) / max(np.linalg.norm(step), 1e-12) * rng.uniform()
            scale = max(1.0, np.linalg.norm(x - xbar) ** 2)
            # projector / reflector inequalities for both sets
            for s, eps in ((a, eps_a), (b, eps_b)):
                out = s.project(x)
                if any(np.linalg.norm(p - witness) > delta for p in out.branches):
                    continue
                lim_p = 1.0 + eps_tilde_projector(eps)
                lim_r = 1.0 + eps_tilde_reflector(eps)
                for p in out.branches:
                    lhs = np.linalg.norm(p - xbar) ** 2 + np.linalg.norm(x - p) ** 2
                    worst["projector"] = max(
                        worst["projector"], (lhs - lim_p * np.linalg.norm(x - xbar) ** 2) / scale
                    )
                    r = 2.0 * p - x
                    worst["reflector"] = max(
                        worst["reflector"],
                        (np.linalg.norm(r - xbar) ** 2 - lim_r * np.linalg.norm(x - xbar) ** 2)
                        / scale,
                    )
            # composed reflection step, all branch combinations
            zs = b.project(x).branches
            admissible = all(np.linalg.norm(z - witness) <= delta for z in zs)
            branch_pairs = []
            for z in zs:
                ws = a.project(2.0 * z - x).branches
                admissible &= all(np.linalg.norm(v - witness) <= delta for v in ws)
                branch_pairs.extend((z, v) for v in ws)
            if not admissible:
                continue
            d_x = sol.distance(x)
            for z, v in branch_pairs:
                xp = v - z + x
                lhs = np.linalg.norm(xp - xbar) ** 2 + np.linalg.norm(x - xp) ** 2
                worst["dr"] = max(
                    worst["dr"], (lhs - lim_dr * np.linalg.norm(x - xbar) ** 2) / scale
                )
                # contraction transfer wherever its two hypotheses hold
                firm = lhs <= lim_dr * np.linalg.norm(x - xbar) ** 2 + 1e-12
                coercive = np.linalg.norm(x - xp) >= lam * d_x - 1e-12
                if firm and coercive and d_x > 1e-12:
                    target = (1.0 + (lim_dr - 1.0) - lam**2) * d_x**2
                    worst["transfer"] = max(
                        worst["transfer"], (sol.distance(xp) ** 2 - target) / scale
                    )
    ok = all(v <= 1e-9 for v in worst.values())
    _report(
        "criterion 8",
        ok,
        "worst margins " + ", ".join(f"{k}={v:.2e}" for k, v in worst.items()),
    )


# ---------------------------------------------------------------------------
# criterion 9: random subspace sweep
# ---------------------------------------------------------------------------


def test_criterion_9_subspace_sweep():
    t0 = time.perf_counter()
    verdicts, details = subspace_iff_sweep()
    elapsed = time.perf_counter() - t0
    by_id = {v.claim_id: v for v in verdicts}
    ok = (
        by_id["subspace-iff-rank-test-match"].passed
        and by_id["subspace-dr-rate-bound"].passed
        and elapsed < 30.0
    )
    _report(
        "criterion 9",
        ok,
        f"matches {by_id['subspace-iff-rank-test-match'].measured}, "
        f"bounds {by_id['subspace-dr-rate-bound'].measured}, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# criterion 10: convex combinations
# ---------------------------------------------------------------------------


def test_criterion_10_convex_combination(cross_diag):
    cross, diag, sol = cross_diag
    eps1 = SAFETY_INFLATION * estimate_subregularity(cross, sol, 1.0, samples=1024, seed=0)
    eps2 = SAFETY_INFLATION * estimate_subregularity(diag, sol, 1.0, samples=1024, seed=0)
    eps = max(eps1, eps2)
    rng = np.random.default_rng(10)
    worst = -np.inf
    for lam in (0.25, 0.5, 0.75):
        comb = Combination([(lam, SingleProjector(cross)), (1 - lam, SingleProjector(diag))])
        for _ in range(1000):
            x = rng.normal(size=2) * 1.5
            xp = comb.step(x)
            scale = max(1.0, np.linalg.norm(x) ** 2)
            lhs = np.linalg.norm(xp) ** 2 + np.linalg.norm(x - xp) ** 2
            worst = max(worst, (lhs - (1 + eps) * np.linalg.norm(x) ** 2) / scale)
    _report("criterion 10", worst <= 1e-9, f"worst margin {worst:.2e} at eps {eps:.2e}")
