import itertools
import random

import numpy as np
import pytest

from irredundance.graph import Graph, bits
from irredundance.harness import gen_random_graph
from irredundance.oracle import (ChainValues, certify, domination_chain, is_irredundant,
                                 is_maximal_irredundant, lower_ir, subset_tables, upper_ir)

from conftest import all_graphs, complete, cycle, path, star


def test_irredundance_examples(P3):
    assert is_irredundant(P3, [0, 2])
    assert not is_irredundant(P3, [0, 1])
    assert is_irredundant(P3, [])
    assert is_maximal_irredundant(P3, [1])
    assert not is_maximal_irredundant(P3, [0])
    assert is_maximal_irredundant(Graph(4), range(4))


def test_certify_examples(P3):
    assert certify(path(4), [1, 2]) == {1: 0, 2: 3}
    assert certify(P3, [0, 2]) == {0: "internal", 2: "internal"}
    assert certify(Graph(1), [0]) == {0: "internal"}
    with pytest.raises(ValueError):
        certify(P3, [0, 1])


def test_chain_examples():
    assert domination_chain(path(3)) == ChainValues(1, 1, 2, 2)
    assert domination_chain(cycle(4)) == ChainValues(2, 2, 2, 2)
    assert domination_chain(star(3)) == ChainValues(1, 1, 3, 3)
    assert upper_ir(complete(5)) == 1 and lower_ir(Graph(4)) == 4


def test_size_guard():
    with pytest.raises(ValueError):
        domination_chain(Graph(25))
    with pytest.raises(ValueError):
        domination_chain(Graph(19), limit=18)
    assert domination_chain(Graph(19), limit=19).ir == 19


def test_dead_vertices_are_ignored():
    g = path(4)
    g.kill_vertex(3)
    assert domination_chain(g) == domination_chain(path(3))


def _naive(adj):
    """Textbook enumeration with Python sets, independent of the numpy tables."""
    n = len(adj)
    N = [set(bits(a)) for a in adj]
    irr, mx = {}, {}
    for m in range(1 << n):
        I = {v for v in range(n) if m >> v & 1}
        irr[m] = all(not (N[v] & I) or any(N[u] & I == {v} for u in N[v] - I) for v in I)
    for m in range(1 << n):
        mx[m] = irr[m] and not any(irr[m | 1 << v] for v in range(n) if not m >> v & 1)
    return irr, mx


def test_tables_agree_with_naive_enumeration():
    for t in range(150):
        g = gen_random_graph(random.Random(t).randint(1, 8), 0.4, t)
        tab = subset_tables(g.adj)
        irr, mx = _naive(g.adj)
        assert tab.irredundant.tolist() == [irr[m] for m in range(1 << g.n)]
        assert tab.maximal.tolist() == [mx[m] for m in range(1 << g.n)]


def test_chain_inequalities_on_all_small_graphs():
    for n in range(1, 7):
        for g in all_graphs(n):
            c = domination_chain(g)
            assert c.holds(), (g, c)


def _ir_with(g, v):
    t = subset_tables(g.adj)
    S = np.arange(1 << g.n)
    return int(t.size[t.irredundant & ((S >> v) & 1 == 1)].max())


def test_degree_one_vertex_can_be_forced_into_a_maximum_set():
    graphs = [g for n in range(2, 7) for g in all_graphs(n)]
    rng = random.Random(1)
    graphs += [gen_random_graph(7, rng.choice([0.2, 0.3, 0.5]), s) for s in range(2000)]
    checked = 0
    for g in graphs:
        ones = [v for v in range(g.n) if g.degree(v) == 1]
        if not ones:
            continue
        IR = upper_ir(g)
        for v in ones:
            assert _ir_with(g, v) == IR
            checked += 1
    assert checked > 10000


def test_certify_random():
    for t in range(100):
        g = gen_random_graph(8, 0.4, t)
        for I in itertools.combinations(range(8), 3):
            if not is_irredundant(g, I):
                continue
            cert = certify(g, I)
            gardens = [x for x in cert.values() if x != "internal"]
            assert len(gardens) == len(set(gardens))
            Im = set(I)
            for king, x in cert.items():
                if x == "internal":
                    assert not set(g.neighbors(king)) & Im
                else:
                    assert set(g.neighbors(x)) & Im == {king}
