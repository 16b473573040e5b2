import itertools
import json

import pytest

import rashomon

XOR = "0 0 0\n1 0 1\n1 1 0\n0 1 1\n"


def test_xor_optimum():
    d = rashomon.Dataset.parse(XOR)
    e = rashomon.Enumerator(d, depth=2, lam=0.01, epsilon=0.0)
    assert e.optimal_cost == pytest.approx(0.04)
    groups = list(e)
    assert sum(g.count for g in groups) == 2
    for g in groups:
        for t in g.trees():
            assert rashomon.evaluate(t, d, 0.01) == pytest.approx(g.total_cost)


def test_sorted_and_counted():
    d = rashomon.Dataset.synthetic(samples=60, features=6, seed=3)
    e = rashomon.Enumerator(d, depth=3, lam=0.02, epsilon=0.3)
    costs = [g.total_cost for g in e]
    assert costs == sorted(costs)
    assert len(set(costs)) == len(costs)
    assert e.exhausted
    assert costs[-1] <= e.theta + 1e-9


def test_big_counts_are_python_ints():
    d = rashomon.Dataset.synthetic(samples=40, features=8, seed=1)
    e = rashomon.Enumerator(d, depth=3, lam=0.0)
    first = next(iter(e))
    assert isinstance(first.count, int)
    assert e.trees_emitted == first.count


def test_rashomon_set_helper():
    d = rashomon.Dataset.synthetic(samples=50, features=5, seed=2)
    trees = rashomon.rashomon_set(d, depth=2, lam=0.01, epsilon=None, max_trees=25)
    assert len(trees) == 25
    assert all(a[0] <= b[0] for a, b in itertools.pairwise(trees))
    assert isinstance(trees[0][1], dict)


def test_multiplier_and_lofo():
    d = rashomon.Dataset.synthetic(samples=80, features=6, seed=4)
    r = rashomon.find_min_multiplier(d, 100, depth=2, lam=0.01)
    assert r["reached"] and r["achieved"] >= 100 and r["epsilon"] >= 0
    scores = rashomon.lofo(d, 20, depth=2, lam=0.01)
    assert sorted(s[2] for s in scores) == list(range(1, d.num_features + 1))


def test_bad_input():
    with pytest.raises(ValueError):
        rashomon.Dataset.parse("1 0 x\n")
    with pytest.raises(ValueError):
        rashomon.Dataset.parse(XOR, task="ordinal")


def test_regression():
    d = rashomon.Dataset.parse("1.0 0 1\n2.0 1 0\n3.5 1 1\n0.5 0 0\n", task="regression")
    e = rashomon.Enumerator(d, depth=2, lam=0.1, epsilon=0.5)
    for g in e:
        for t in g.trees():
            json.loads(t)
            assert rashomon.evaluate(t, d, 0.1) == pytest.approx(g.total_cost, abs=1e-4)
