import random
from fractions import Fraction

import pytest

from irredundance.graph import Graph
from irredundance.harness import gen_random_graph
from irredundance.labeling import (DEFAULT_WEIGHTS, UNDECIDED, Label, Labeling, Weights, extends,
                                   is_valid, labeling_of_solution, measure_mc, measure_simple,
                                   not_sets)
from irredundance.oracle import is_irredundant

from conftest import complete, path, star

rng = random.Random(5)


def random_valid_labeling(g, r):
    """Random labels, retried until valid."""
    while True:
        L = Labeling.empty(g.n)
        for v in range(g.n):
            L.label[v] = r.choice([Label.UNLABELED] * 3 + [Label.KI, Label.KE, Label.GE, Label.W])
        L.active = L.expected_active(g)
        if is_valid(g, L):
            return L


def test_validity_examples(P3):
    assert is_valid(P3, Labeling.empty(3))
    assert not is_valid(P3, Labeling.from_sets(3, ki=[1]))
    assert is_valid(P3, Labeling.from_sets(3, ki=[1], w=[0, 2]))
    s = star(3)
    assert not is_valid(s, Labeling.from_sets(4, ke=[0], ge=[1, 2]))
    assert is_valid(s, Labeling.from_sets(4, ke=[0], ge=[1]))
    # a king with no possible garden left
    assert not is_valid(s, Labeling.from_sets(4, ke=[0], w=[1, 2, 3]))


def test_not_sets_examples(P3):
    notg, notk = not_sets(P3, Labeling.from_sets(3, ge=[0], ke=[1]))
    assert 2 in notg and 2 in notk
    assert not_sets(P3, Labeling.empty(3)) == (set(), set())
    tri = complete(3)
    notg, _ = not_sets(tri, Labeling.from_sets(3, ke=[0, 1]))
    assert notg == {2}


def test_not_sets_match_relabel_check():
    for t in range(300):
        g = gen_random_graph(rng.randint(2, 8), 0.4, t)
        L = random_valid_labeling(g, rng)
        notg, notk = not_sets(g, L)
        for v in range(g.n):
            if L.label[v] not in UNDECIDED:
                continue
            L2 = L.copy()
            L2.label[v] = Label.GE
            assert (v in notg) == (not is_valid(g, L2))
            L2.label[v] = Label.KE
            assert (v in notk) == (not is_valid(g, L2))


def test_measure_simple():
    assert measure_simple(5, Labeling.empty(4)) == 5
    L = Labeling.from_sets(4, w=[0], ke=[1, 2], ge=[3])
    assert measure_simple(5, L) == Fraction(5, 2)
    assert measure_simple(0, Labeling.from_sets(1, w=[0])) == -1


def test_measure_mc():
    L = Labeling.from_sets(3, ge=[0], notg=[1])
    assert measure_mc(3, L) == Fraction(2009, 1000)
    L = Labeling.from_sets(2, pairs=[(0, 1)])
    assert measure_mc(2, L) == 1
    assert measure_mc(4, Labeling.empty(3)) == 4


def test_mc_measure_reduces_to_simple():
    half = Weights(Fraction(1, 2), Fraction(0))
    for t in range(200):
        g = gen_random_graph(6, 0.5, t)
        L = random_valid_labeling(g, rng)
        L.active = [True if L.label[v] in (Label.KE, Label.GE) else L.active[v] for v in range(g.n)]
        assert measure_mc(7, L, half) == measure_simple(7, L)


def test_weights_validation():
    assert DEFAULT_WEIGHTS.omega_l == Fraction(7455, 10000)
    with pytest.raises(ValueError):
        Weights(Fraction(6, 10), Fraction(5, 10))
    with pytest.raises(ValueError):
        Weights(Fraction(4, 10), Fraction(1, 10))
    assert Weights.parse("0.75", "1/4") == Weights(Fraction(3, 4), Fraction(1, 4))


def test_extends_examples():
    L = Labeling.from_sets(3, notg=[0], ke=[1])
    assert extends(L, L)
    empty = Labeling.empty(3)
    for t in range(50):
        g = gen_random_graph(3, 0.5, t)
        assert extends(empty, random_valid_labeling(g, rng))
    L2 = Labeling.from_sets(3, ge=[0], ke=[1])
    assert not extends(L, L2)
    L3 = Labeling.from_sets(3, w=[0], ke=[1])
    assert extends(L, L3)


def _rand_labeling(n, r):
    L = Labeling.empty(n)
    for v in range(n):
        L.label[v] = r.choice(list(Label))
        L.active[v] = r.random() < 0.5
    return L


def test_extends_is_a_partial_order():
    r = random.Random(9)
    for _ in range(3000):
        a, b, c = (_rand_labeling(3, r) for _ in range(3))
        if extends(a, b) and extends(b, c):
            assert extends(a, c)
        if extends(a, b) and extends(b, a):
            assert a.label == b.label and a.active == b.active


def test_labeling_of_solution_examples(P3):
    L = labeling_of_solution(P3, [0, 2])
    assert L.label == [Label.KI, Label.W, Label.KI]
    p4 = path(4)
    L = labeling_of_solution(p4, [1, 2])
    assert L.label == [Label.GE, Label.KE, Label.KE, Label.GE]
    assert L.partner[1] == 0 and L.partner[2] == 3
    assert labeling_of_solution(P3, []).label == [Label.W] * 3
    with pytest.raises(ValueError):
        labeling_of_solution(P3, [0, 1])


def test_labeling_of_solution_is_valid_and_complete():
    from itertools import combinations
    for t in range(60):
        g = gen_random_graph(7, 0.4, t)
        for size in range(4):
            for I in combinations(range(7), size):
                if not is_irredundant(g, I):
                    continue
                L = labeling_of_solution(g, I)
                assert is_valid(g, L) and L.is_complete()
                assert L.count(Label.KE) == L.count(Label.GE)
                assert L.active == L.expected_active(g)


def test_json_round_trip():
    L = Labeling.from_sets(5, pairs=[(1, 2)], notg=[0], w=[4])
    d = L.to_json()
    assert d["labels"]["0"] == "NotG" and d["partner"] == [[1, 2]]
    assert Labeling.from_json(d) == L
    assert Labeling.from_json(__import__("json").loads(L.dumps())) == L
