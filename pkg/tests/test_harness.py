import json
import random

import pytest

from irredundance import mc
from irredundance.graph import Graph
from irredundance.harness import (CampaignOptions, CampaignReport, DriverInfo, check_instance,
                                  compute_ir, compute_upper_ir, gen_random_graph,
                                  max_irredundant_by_enumeration, maximal_irredundant_of_size,
                                  verify_campaign)
from irredundance.oracle import domination_chain, is_maximal_irredundant

from conftest import complete, cycle, path, star


def test_upper_ir_examples():
    assert compute_upper_ir(path(3)) == 2
    assert compute_upper_ir(cycle(4)) == 2
    assert compute_upper_ir(star(3)) == 3
    assert compute_upper_ir(Graph(5)) == 5
    assert compute_upper_ir(complete(5)) == 1
    assert compute_upper_ir(Graph(0)) == 0


def test_ir_examples():
    assert compute_ir(path(3)) == 1
    assert compute_ir(path(4)) == 2
    assert compute_ir(cycle(5)) == 2
    assert compute_ir(star(3)) == 1
    assert compute_ir(Graph(4)) == 4


def test_driver_limits():
    with pytest.raises(ValueError):
        compute_upper_ir(Graph(5), limit=4)
    with pytest.raises(ValueError):
        compute_ir(Graph(5), limit=4)


@pytest.mark.parametrize("algo", ["mc", "simple"])
def test_drivers_match_oracle(algo):
    rng = random.Random(17)
    for _ in range(120):
        n = rng.randint(1, 12)
        g = gen_random_graph(n, rng.choice((0.1, 0.3, 0.6)), rng.randrange(10**6))
        c = domination_chain(g)
        assert compute_upper_ir(g, algo=algo) == c.IR
        if algo == "mc":
            assert compute_ir(g) == c.ir


def test_driver_paths_both_used():
    # low thresholds force the enumeration branch, high ones the search
    g = gen_random_graph(10, 0.3, 1)
    c = domination_chain(g)
    for th in (0.0, 0.3, 1.0):
        info = DriverInfo()
        assert compute_upper_ir(g, threshold=th, info=info) == c.IR
        assert info.value == c.IR
    for th in (0.0, 1.0):
        info = DriverInfo()
        assert compute_ir(g, threshold=th, info=info) == c.ir
    info = DriverInfo()
    compute_ir(g, threshold=0.0, info=info)
    assert info.method == "search" and info.k_tried


def test_enumeration_helpers():
    g = star(4)
    assert max_irredundant_by_enumeration(g) == 4
    assert max_irredundant_by_enumeration(g, cap=2) == 2
    hit = maximal_irredundant_of_size(g, 1)
    assert hit is not None and is_maximal_irredundant(g, hit)
    assert maximal_irredundant_of_size(g, 2) is None


def test_gen_random_graph():
    assert gen_random_graph(5, 0, 3).edges() == []
    assert len(gen_random_graph(5, 1, 3).edges()) == 10
    assert gen_random_graph(12, 0.4, 99).edges() == gen_random_graph(12, 0.4, 99).edges()
    assert gen_random_graph(12, 0.4, 99).edges() != gen_random_graph(12, 0.4, 98).edges()
    with pytest.raises(ValueError):
        gen_random_graph(5, 1.5, 0)


def test_check_instance_clean():
    rep = check_instance(cycle(5), CampaignOptions(drivers=True))
    assert rep.passed and rep.decisions == 18
    assert not rep.invariant_violations or set(rep.invariant_violations) <= {"not-degree-below-two"}


def test_small_campaign_is_clean_and_deterministic():
    a = verify_campaign(max_n=9, trials=15, seed=3, exhaustive_n=3)
    b = verify_campaign(max_n=9, trials=15, seed=3, exhaustive_n=3)
    assert a.passed
    assert a.instances == 1 + 1 + 2 + 8 + 15
    assert json.dumps(a.to_json(timing=False), sort_keys=True) == json.dumps(b.to_json(timing=False), sort_keys=True)
    with pytest.raises(ValueError):
        verify_campaign(max_n=15)


def test_parallel_campaign_agrees():
    a = verify_campaign(max_n=8, trials=6, seed=1, exhaustive_n=2)
    b = verify_campaign(max_n=8, trials=6, seed=1, exhaustive_n=2, threads=2)
    assert a.to_json(timing=False) == b.to_json(timing=False)


def test_injected_bug_is_detected(monkeypatch):
    original = mc.MCSearch.reduce

    def broken(self, st, log=None):
        r = original(self, st, log)
        if r is None:
            return None
        adj, present, ki, ke, ge, ng, nk, w, p = r
        # sends one internal king to the wilderness, which costs budget for nothing
        if ki:
            low = ki & -ki
            ki &= ~low
            w |= low
        return adj, present, ki, ke, ge, ng, nk, w, p

    monkeypatch.setattr(mc.MCSearch, "reduce", broken)
    rep = verify_campaign(max_n=6, trials=10, seed=0, exhaustive_n=3,
                          opts=CampaignOptions(solvers=("mc",), kernels=False, monitor=False))
    assert not rep.passed
    assert {m.check for m in rep.mismatches} == {"comaxir-mc"}


def test_report_merge_and_stats():
    a, b = CampaignReport(instances=1), CampaignReport(instances=2)
    a.node_samples = {"mc": {1: [1, 3]}}
    b.node_samples = {"mc": {1: [5]}}
    a.merge(b)
    assert a.instances == 3
    assert a.node_stats()["mc"]["1"]["max"] == 5
