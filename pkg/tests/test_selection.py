from __future__ import print_function, division, absolute_import, unicode_literals

import pytest
import numpy as np
import trackcut
from trackcut import selection, mining

import logging
logger = logging.getLogger(__name__)


def pair_instance(**kwargs):
    params = dict(delta=0.3, lam=1., budget=2)
    params.update(kwargs)
    return selection.SelectionInstance([[1., 0.5], [0.5, 1.]], [0.9, 0.2], **params)


def random_instance(rng, n=None, budget=None):
    n = n or rng.randint(1, 9)
    features = rng.randn(n, 4)
    features /= np.linalg.norm(features, axis=1)[:, None]
    w = features.dot(features.T)
    w = (w + w.T)/2.
    budget = budget or rng.randint(1, n + 1)
    return selection.SelectionInstance(w, rng.rand(n), delta=rng.uniform(0, 1.5),
                                       lam=rng.uniform(0, 2), budget=budget)


def test_similarity():
    assert selection.similarity([0.6, 0.8], [0.6, 0.8]) == pytest.approx(1.)
    assert selection.similarity([1., 0.], [0., 1.]) == 0.
    assert selection.similarity([0.6, 0.8], [0.8, 0.6]) == pytest.approx(0.96)
    with pytest.raises(ValueError):
        selection.similarity([1., 0.], [1., 0., 0.])


def test_objective():
    inst = pair_instance()
    assert selection.objective(inst, []) == 0.
    assert selection.objective(inst, [0]) == pytest.approx(2.1)
    assert selection.objective(inst, [0, 1]) == pytest.approx(2.5)


def test_greedy():
    result = selection.greedy_select(pair_instance())
    assert result.selected == (0, 1)
    assert result.objective_value == pytest.approx(2.5)
    assert result.gain_trace == pytest.approx((2.1, 0.4))


def test_greedy_costly():
    result = selection.greedy_select(pair_instance(delta=10.))
    assert result.selected == ()
    assert result.objective_value == 0.


def test_greedy_budget():
    assert selection.greedy_select(pair_instance(budget=1)).selected == (0,)


def test_brute_force():
    result = selection.brute_force_select(pair_instance())
    assert result.selected == (0, 1)
    assert result.objective_value == pytest.approx(2.5)


def test_brute_force_monotone():
    rng = np.random.RandomState(2)
    w = rng.rand(5, 5)
    w = (w + w.T)/2.
    inst = selection.SelectionInstance(w, rng.rand(5), delta=0., lam=0.)
    result = selection.brute_force_select(inst)
    assert result.objective_value == pytest.approx(selection.objective(inst, range(5)))


def test_brute_force_single():
    inst = selection.SelectionInstance([[1.]], [0.5], delta=0.3, lam=1.)
    assert selection.brute_force_select(inst).selected == (0,)


def test_brute_force_limit():
    n = selection.maxbruteforce + 1
    inst = selection.SelectionInstance(np.eye(n), np.zeros(n))
    with pytest.raises(ValueError):
        selection.brute_force_select(inst)


def test_instance_errors():
    with pytest.raises(ValueError):
        selection.SelectionInstance([[1., 0.2], [0.5, 1.]], [0.5, 0.5])
    with pytest.raises(ValueError):
        selection.SelectionInstance(np.eye(2), [0.5, 1.5])
    with pytest.raises(ValueError):
        selection.SelectionInstance(np.eye(2), [0.5, 0.5], budget=3)
    with pytest.raises(ValueError):
        selection.SelectionInstance(np.eye(2), [0.5, 0.5], delta=-1.)


def test_default_budget():
    assert selection.SelectionInstance(np.eye(3), np.zeros(3)).budget == 3


def test_greedy_vs_brute():
    rng = np.random.RandomState(0)
    ratios = []
    for _ in range(500):
        inst = random_instance(rng)
        greedy = selection.greedy_select(inst)
        exact = selection.brute_force_select(inst)

        assert greedy.objective_value <= exact.objective_value + 1e-9
        assert len(greedy.selected) <= inst.budget
        assert greedy.objective_value == pytest.approx(selection.objective(inst, greedy.selected),
                                                       abs=1e-9)
        assert all(gain > 0 for gain in greedy.gain_trace)

        prefix = [selection.objective(inst, greedy.selected[:ii])
                  for ii in range(len(greedy.selected) + 1)]
        assert all(b > a for (a, b) in zip(prefix[:-1], prefix[1:]))
        ratios.append(greedy.objective_value/exact.objective_value if exact.objective_value > 0 else 1.)

    share = np.mean(np.array(ratios) >= 0.95)
    logger.info("Greedy within 0.95 of the optimum on {0:.1%} of instances (worst ratio {1:.3f})."
                .format(share, min(ratios)))


def test_greedy_exact_single():
    rng = np.random.RandomState(10)
    for _ in range(200):
        inst = random_instance(rng, budget=1)
        greedy = selection.greedy_select(inst)
        exact = selection.brute_force_select(inst)
        assert greedy.objective_value == pytest.approx(exact.objective_value, abs=1e-12)


def test_lazy_matches_naive():
    rng = np.random.RandomState(4)
    for _ in range(1000):
        inst = random_instance(rng, n=rng.randint(1, 15))
        lazy = selection.greedy_select(inst, lazy=True)
        naive = selection.greedy_select(inst, lazy=False)
        assert lazy.selected == naive.selected


def test_lazy_ties():
    inst = selection.SelectionInstance(np.eye(4), [0.5]*4, delta=0.1, lam=1.)
    assert selection.greedy_select(inst, lazy=True).selected == (0, 1, 2, 3)
    assert selection.greedy_select(inst, lazy=False).selected == (0, 1, 2, 3)


def test_submodular_coverage():
    rng = np.random.RandomState(5)
    for _ in range(10000):
        inst = random_instance(rng, n=rng.randint(2, 8))
        order = rng.permutation(inst.n)
        jj = order[0]
        sizes = sorted(rng.randint(0, inst.n, size=2))
        small, large = order[1:1 + sizes[0]], order[1:1 + sizes[1]]

        gain_small = np.maximum(inst.w[:, jj] - selection.coverage(inst, small), 0.).sum()
        gain_large = np.maximum(inst.w[:, jj] - selection.coverage(inst, large), 0.).sum()
        assert gain_small >= gain_large


def test_scale():
    rng = np.random.RandomState(6)
    for _ in range(100):
        inst = random_instance(rng, n=rng.randint(1, 7))
        base = selection.brute_force_select(inst)
        for scale in [0.25, 2., 8.]:
            scaled = selection.SelectionInstance(scale*inst.w, inst.phi, delta=scale*inst.delta,
                                                 lam=scale*inst.lam, budget=inst.budget)
            assert selection.brute_force_select(scaled).selected == base.selected


def test_build_instance():
    tracks = [mining.Track(ii, [], feature, 0.5)
              for (ii, feature) in enumerate([[0.6, 0.8], [0.8, 0.6], [1., 0.]])]
    inst = selection.build_instance(tracks, delta=0.2, lam=0.5)
    assert inst.n == 3 and inst.budget == 3
    assert inst.w[0, 1] == pytest.approx(0.96)
    assert (inst.w == inst.w.T).all()


def test_build_empty():
    inst = selection.build_instance([])
    assert inst.n == 0
    assert selection.greedy_select(inst).selected == ()
