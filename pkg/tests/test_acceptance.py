"""Acceptance criteria A1 to A9.

Each test records a one-line verdict that is printed in the terminal summary,
then asserts it.  The two campaigns are shared through module fixtures.
"""

import time
from fractions import Fraction

import pytest

from irredundance.analysis import optimize_tilde, optimize_weights, verify_alg1, verify_alg2, verify_winwin
from irredundance.harness import (CampaignOptions, compute_ir, compute_upper_ir, gen_random_graph,
                                  verify_campaign)
from irredundance.labeling import DEFAULT_WEIGHTS

from conftest import ACCEPTANCE

PRUNE_KEYS = ("prune-unsound-simple", "prune-unsound-mc")


def record(name, ok, detail):
    ACCEPTANCE[name] = (bool(ok), detail)
    print(f"{name} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def exhaustive():
    # every labeled graph on at most six vertices, all k, every check switched on
    return verify_campaign(max_n=6, trials=0, exhaustive_n=6,
                           opts=CampaignOptions(check_prunes=True))


@pytest.fixture(scope="module")
def randomized():
    return verify_campaign(max_n=14, trials=500, seed=2024, exhaustive_n=-1,
                           opts=CampaignOptions(check_prunes=False, drivers=True))


def test_a1_exhaustive_oracle_equivalence(exhaustive):
    rep = exhaustive
    wrong = rep.mismatches
    ok = rep.instances == 1 + 1 + 2 + 8 + 64 + 1024 + 32768 and not wrong and rep.wall_time <= 900
    record("A1", ok, f"{rep.instances} graphs, {rep.decisions} decisions, {len(wrong)} mismatches, "
                     f"{rep.wall_time:.0f}s")


def test_a2_kernel_preservation(randomized):
    rep = randomized
    ok = rep.instances == 500 and rep.passed and rep.kernel_size_violations == 0
    record("A2", ok, f"{rep.instances} random graphs (n<=14), {len(rep.mismatches)} mismatches, "
                     f"{rep.kernel_size_violations} size-bound violations")


def test_a3_alg1_constants():
    rep = verify_alg1(3.841)
    printed = {2: 0.9138880316045346, 3: 0.9645844017875586, 4: 0.9576263068932915}
    err = max(abs(rep.value("case 3", d) - v) for d, v in printed.items())
    ok = rep.ok and err <= 1e-12
    record("A3", ok, f"f(2..4) max error {err:.1e}, all case bounds <= 1: {rep.ok}")


def test_a4_alg2_weights():
    rep = verify_alg2(DEFAULT_WEIGHTS, 3.069)
    worst = rep.notes["max_branching_number"]
    w, obj = optimize_weights(Fraction(1, 1000))
    ok = rep.ok and worst <= 3.069 + 1e-3 and obj <= 3.070
    record("A4", ok, f"max branching number {worst:.6f} at default weights; optimizer "
                     f"({float(w.omega_l):.3f}, {float(w.omega_n):.3f}) -> {obj:.6f}")


def test_a5_winwin_bases():
    a = verify_winwin(3.841, 1.99914, 1e-3)
    b = verify_winwin(3.069, 1.96, 5e-3)
    tilde = optimize_tilde()
    threshold_ok = abs(a.threshold - 0.485252) <= 1e-5
    tilde_ok = abs(tilde.base - 2.036) <= 5e-3
    ok = a.ok and b.ok and threshold_ok and tilde_ok
    record("A5", ok, f"3.841 -> {a.base:.5f} (threshold {a.threshold:.6f}), 3.069 -> {b.base:.5f}, "
                     f"vertex-count optimum {tilde.base:.4f} at ({tilde.omega_l:.3f}, {tilde.omega_n:.3f}), "
                     f"stated weights give {tilde.at_stated['measure']:.4f}")


def test_a6_prune_soundness(exhaustive):
    rep = exhaustive
    bad = {k: rep.invariant_violations.get(k, 0) for k in PRUNE_KEYS}
    ok = rep.prunes_checked > 0 and not any(bad.values())
    record("A6", ok, f"{rep.prunes_checked} prunes replayed, violations {bad}")


def test_a7_search_growth(exhaustive, randomized):
    viol = {s: exhaustive.node_bound_violations.get(s, 0) + randomized.node_bound_violations.get(s, 0)
            for s in ("simple", "mc")}
    better = exhaustive.mc_not_worse + randomized.mc_not_worse
    total = exhaustive.mc_compared + randomized.mc_compared
    share = better / total if total else 0.0
    ok = not any(viol.values()) and total > 0 and share >= 0.6
    record("A7", ok, f"node-bound violations {viol}, M&C not worse on {share:.1%} of {total} runs with k>=4")


def test_a8_desk_scale():
    times_up, times_lo = [], []
    for seed in range(5):
        g = gen_random_graph(30, 0.3, seed)
        t0 = time.perf_counter()
        compute_upper_ir(g)
        times_up.append(time.perf_counter() - t0)
        g = gen_random_graph(24, 0.3, seed)
        t0 = time.perf_counter()
        compute_ir(g)
        times_lo.append(time.perf_counter() - t0)
    ok = max(times_up) <= 120 and max(times_lo) <= 120
    record("A8", ok, f"IR n=30 max {max(times_up):.1f}s, ir n=24 max {max(times_lo):.2f}s")


def test_a9_structural_invariants(exhaustive, randomized):
    seen = {}
    for rep in (exhaustive, randomized):
        for k, c in rep.invariant_violations.items():
            if k not in PRUNE_KEYS:
                seen[k] = seen.get(k, 0) + c
    states = exhaustive.states_checked + randomized.states_checked
    rules = exhaustive.rules_seen + randomized.rules_seen
    example = next((v for k, v in sorted(exhaustive.invariant_examples.items()) if k not in PRUNE_KEYS), "")
    ok = states > 0 and rules > 0 and not seen
    record("A9", ok, f"{states} reduced states, {rules} rule firings checked, violations {seen or 'none'}"
                     + (f"; first: {example}" if seen else ""))
