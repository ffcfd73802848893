import random

import pytest

from irredundance.graph import Graph, bits
from irredundance.harness import gen_random_graph
from irredundance.kernel import (Crown, Verdict, crown_is_valid, find_crown, kernel_cominmaxir,
                                 kernel_comaxir, maximal_matching)
from irredundance.oracle import domination_chain

from conftest import complete, cycle, path, star


def _covered(L):
    m = 0
    for u, v in L:
        m |= 1 << u | 1 << v
    return m


def test_cominmaxir_examples():
    out = kernel_cominmaxir(path(4), 2)
    assert out.verdict is Verdict.YES
    out = kernel_cominmaxir(Graph(3, [(0, 1)]), 2)
    assert out.verdict is Verdict.REDUCED
    assert out.forced == [2] and out.n_after == 2 and out.k == 2
    with pytest.raises(ValueError):
        kernel_cominmaxir(path(2), -1)


def test_comaxir_examples():
    assert kernel_comaxir(complete(4), 1).verdict is Verdict.NO
    assert kernel_comaxir(cycle(6), 2).verdict is Verdict.NO
    out = kernel_comaxir(star(5), 1)
    assert out.verdict is Verdict.REDUCED
    assert out.n_after == 0 and out.k == 0
    assert sorted(out.forced) == [1, 2, 3, 4, 5]
    assert out.to_json() == {"verdict": "Reduced", "n_before": 6, "n_after": 0,
                             "k_after": 0, "forced": [1, 2, 3, 4, 5]}


def test_matching_is_maximal_without_short_augmenting_paths():
    rng = random.Random(3)
    for _ in range(300):
        g = gen_random_graph(rng.randint(1, 12), rng.random(), rng.randrange(10**6))
        L = maximal_matching(g)
        cov = _covered(L)
        assert cov.bit_count() == 2 * len(L)
        assert all(g.has_edge(u, v) for u, v in L)
        free = g.vertex_mask() & ~cov
        for v in bits(free):
            assert not g.adj[v] & free
        for x, y in L:
            for a in bits(g.adj[x] & free):
                assert not g.adj[y] & free & ~(1 << a)


def test_crown_examples():
    g = star(3)
    crown = find_crown(g, [(0, 1)])
    assert crown.H == [0] and {2, 3} <= set(crown.C)
    assert crown_is_valid(g, crown)
    assert find_crown(path(2), [(0, 1)]) is None
    crown = find_crown(star(5), [(0, 1)])
    assert crown.H == [0] and len(crown.C) >= 4 and crown_is_valid(star(5), crown)
    with pytest.raises(ValueError):
        find_crown(path(3), [])


def test_crown_validity_rejects_broken_crowns():
    g = star(3)
    assert not crown_is_valid(g, Crown([0, 1], [2], [(2, 1)]))
    assert not crown_is_valid(g, Crown([2, 3], [], []))
    assert not crown_is_valid(g, Crown([2, 3], [0], [(0, 1)]))


def test_crowns_on_random_graphs_are_valid():
    rng = random.Random(11)
    found = 0
    for _ in range(400):
        g = gen_random_graph(rng.randint(4, 14), rng.choice((0.1, 0.2, 0.3)), rng.randrange(10**6))
        L = maximal_matching(g)
        if len(g.vertices()) <= 3 * len(L):
            continue
        crown = find_crown(g, L)
        assert crown is not None and crown_is_valid(g, crown)
        found += 1
    assert found > 50


def test_preservation_and_size_bounds():
    rng = random.Random(2024)
    for _ in range(150):
        n = rng.randint(1, 11)
        g = gen_random_graph(n, rng.choice((0.2, 0.5, 0.8)), rng.randrange(10**6))
        c = domination_chain(g)
        for k in range(n + 1):
            out = kernel_cominmaxir(g, k)
            if out.verdict is Verdict.YES:
                assert c.ir <= n - k
            else:
                h = out.graph
                m = len(h.vertices())
                assert m <= 2 * k - 1
                assert ((domination_chain(h).ir if m else 0) <= m - k) == (c.ir <= n - k)
            out = kernel_comaxir(g, k)
            if out.verdict is Verdict.NO:
                assert c.IR < n - k
            else:
                h = out.graph
                m = len(h.vertices())
                assert m <= 3 * out.k
                assert ((domination_chain(h).IR if m else 0) >= m - out.k) == (c.IR >= n - k)


def test_kernel_leaves_input_untouched():
    g = star(5)
    before = list(g.adj)
    kernel_comaxir(g, 1)
    kernel_cominmaxir(g, 1)
    assert g.adj == before and len(g.vertices()) == 6
