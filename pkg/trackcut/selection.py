from __future__ import print_function, division, absolute_import, unicode_literals

import heapq
import itertools
import attr
import numpy as np

import logging
logger = logging.getLogger(__name__)

maxbruteforce = 20


def _as_array(vv):
    return np.asarray(vv, dtype=np.float64)


@attr.s(frozen=True)
class SelectionInstance(object):
    """ Facility-location problem over mined tracks.
    w[i, j] is the similarity of tracks i and j, phi the track confidences,
    delta the cost of opening a facility, lam the weight of the
    discriminative term and budget the largest selection size K.
    """

    w = attr.ib(converter=_as_array, eq=False)
    phi = attr.ib(converter=_as_array, eq=False)
    delta = attr.ib(default=0.3, converter=float)
    lam = attr.ib(default=1.0, converter=float)
    budget = attr.ib(default=None)

    def __attrs_post_init__(self):
        n = len(self.phi)
        if self.w.shape != (n, n):
            raise ValueError("similarity matrix shape {0} does not match {1} tracks"
                             .format(self.w.shape, n))
        if not np.array_equal(self.w, self.w.T):
            raise ValueError("similarity matrix must be symmetric")
        if n and (self.phi.min() < 0. or self.phi.max() > 1.):
            raise ValueError("track confidences must be in [0, 1]")
        if self.delta < 0 or self.lam < 0:
            raise ValueError("delta and lam must be non-negative")

        # frozen, so set the resolved budget through object.__setattr__
        budget = n if self.budget is None else int(self.budget)
        if n and not 1 <= budget <= n:
            raise ValueError("budget {0} outside [1, {1}]".format(budget, n))
        object.__setattr__(self, 'budget', min(budget, n))

    @property
    def n(self):
        return len(self.phi)


@attr.s(frozen=True)
class SelectionResult(object):
    selected = attr.ib(converter=tuple)
    objective_value = attr.ib(converter=float)
    gain_trace = attr.ib(converter=tuple, default=())


def similarity(fa, fb):
    """ Inner product of two track features.
    """

    fa = np.asarray(fa, dtype=np.float64)
    fb = np.asarray(fb, dtype=np.float64)
    if fa.shape != fb.shape:
        raise ValueError("feature dimension mismatch: {0} vs {1}"
                         .format(fa.shape, fb.shape))
    return float(np.dot(fa, fb))


def coverage(inst, selected):
    """ Per-client coverage max(0, max over selected of w). The zero floor
    is the value of the empty selection.
    """

    cover = np.zeros(inst.n)
    for jj in selected:
        cover = np.maximum(cover, inst.w[:, jj])
    return cover


def objective(inst, selected):
    """ Facility location value plus discriminative term.
    Empty selection has value 0.
    """

    selected = sorted(selected)
    if not selected:
        return 0.

    covered = coverage(inst, selected).sum()
    cost = inst.delta*len(selected)
    confidence = inst.lam*inst.phi[selected].sum()
    return float(covered - cost + confidence)


def marginal_gain(inst, cover, jj):
    """ Gain of adding track jj to a selection with the given coverage.
    """

    added = np.maximum(inst.w[:, jj] - cover, 0.).sum()
    return float(added - inst.delta + inst.lam*inst.phi[jj])


def greedy_select(inst, lazy=True):
    """ Greedy maximisation of the selection objective.
    Adds the track of largest marginal gain (smallest index on ties) until
    the best gain is not positive or the budget is reached. The lazy
    variant keeps stale gains in a heap and re-evaluates only the top;
    gains never grow as the selection grows, so it picks the same tracks in
    the same order as the naive loop.
    """

    if lazy:
        selected, gains = _lazy_greedy(inst)
    else:
        selected, gains = _naive_greedy(inst)

    result = SelectionResult(selected, objective(inst, selected), gains)
    logger.info("Selected {0} of {1} track{2} (objective {3:.4f})."
                .format(len(selected), inst.n, 's'[not inst.n-1:],
                        result.objective_value))

    return result


def _naive_greedy(inst):
    selected = []
    gains = []
    cover = coverage(inst, [])
    remaining = list(range(inst.n))
    while remaining and len(selected) < inst.budget:
        best = None
        bestgain = None
        for jj in remaining:
            gain = marginal_gain(inst, cover, jj)
            if bestgain is None or gain > bestgain:
                best, bestgain = jj, gain

        if bestgain <= 0.:
            break

        selected.append(best)
        gains.append(bestgain)
        remaining.remove(best)
        cover = np.maximum(cover, inst.w[:, best])

    return selected, gains


def _lazy_greedy(inst):
    selected = []
    gains = []
    cover = coverage(inst, [])
    step = 0
    heap = [(-marginal_gain(inst, cover, jj), jj, step) for jj in range(inst.n)]
    heapq.heapify(heap)

    while heap and len(selected) < inst.budget:
        neggain, jj, computed = heapq.heappop(heap)
        if computed != step:
            heapq.heappush(heap, (-marginal_gain(inst, cover, jj), jj, step))
            continue

        if -neggain <= 0.:
            break

        selected.append(jj)
        gains.append(-neggain)
        cover = np.maximum(cover, inst.w[:, jj])
        step += 1

    return selected, gains


def brute_force_select(inst):
    """ Exact maximiser over all selections of size up to the budget.
    Ties go to the lexicographically smallest index tuple.
    """

    if inst.n > maxbruteforce:
        raise ValueError("brute force selection limited to {0} tracks (got {1})"
                         .format(maxbruteforce, inst.n))

    best = ()
    bestvalue = 0.
    for size in range(1, inst.budget + 1):
        for subset in itertools.combinations(range(inst.n), size):
            value = objective(inst, subset)
            if value > bestvalue or (value == bestvalue and subset < best):
                best, bestvalue = subset, value

    return SelectionResult(best, bestvalue)


def build_instance(tracks, delta=0.3, lam=1.0, budget=None):
    """ Selection instance from mined tracks, with w[i, j] = <F_i, F_j>.
    """

    if tracks:
        features = np.array([track.feature for track in tracks], dtype=np.float64)
        w = features.dot(features.T)
        w = (w + w.T)/2.
    else:
        w = np.zeros((0, 0))
    phi = [track.phi for track in tracks]

    return SelectionInstance(w, phi, delta=delta, lam=lam, budget=budget)
