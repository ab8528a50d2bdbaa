from __future__ import print_function, division, absolute_import, unicode_literals

import attr
import numpy as np
import networkx as nx
from networkx.algorithms.flow import boykov_kolmogorov

import logging
logger = logging.getLogger(__name__)

source = 's'
sink = 't'


def add_capacity(graph, u, v, capacity):
    """ Add capacity to edge u->v, accumulating over repeated calls.
    Zero capacities add nothing.
    """

    if capacity < 0:
        raise ValueError("negative capacity {0} on edge {1}->{2}".format(capacity, u, v))
    if capacity == 0:
        return
    if graph.has_edge(u, v):
        graph[u][v]['capacity'] += capacity
    else:
        graph.add_edge(u, v, capacity=capacity)


def max_flow(graph, s=source, t=sink):
    """ Maximum s-t flow of a capacitated nx.DiGraph ('capacity' edge
    attribute). Returns the flow value and the source side of a minimum cut.
    """

    graph = graph.copy()
    graph.add_nodes_from([s, t])
    value, (sourceside, _) = nx.minimum_cut(graph, s, t, capacity='capacity',
                                            flow_func=boykov_kolmogorov)
    return value, set(sourceside)


@attr.s(frozen=True)
class PairGraph(object):
    """ Bare undirected graph for energy models: node count and an (E, 2)
    edge array with each edge once.
    """

    nnodes = attr.ib(converter=int)
    edges = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.int64).reshape(-1, 2),
                    eq=False)


def potts(nlabel):
    return 1. - np.eye(nlabel)


def is_metric(distance):
    """ Symmetric, zero only on the diagonal, and obeys the triangle
    inequality.
    """

    distance = np.asarray(distance, dtype=np.float64)
    nlabel = len(distance)
    if not np.allclose(distance, distance.T, rtol=0., atol=1e-12):
        return False
    if np.any(np.diag(distance) != 0):
        return False
    offdiag = ~np.eye(nlabel, dtype=bool)
    if np.any(distance[offdiag] <= 0):
        return False
    through = distance[:, :, None] + distance[None, :, :]
    return bool(np.all(distance[:, None, :] <= through + 1e-12))


@attr.s(frozen=True, eq=False)
class EnergyModel(object):
    """ Labeling energy over a graph.
    unary[i, l] is the cost of giving node i label l; weights[e] the
    similarity weight of graph edge e; a differing pair of labels (a, b) on
    edge e costs lambda_p*weights[e]*distance[a, b]. Label 0 is background.
    """

    unary = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64))
    weights = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64))
    lambda_p = attr.ib(default=0.5, converter=float)
    distance = attr.ib(default=None)

    def __attrs_post_init__(self):
        if self.unary.ndim != 2:
            raise ValueError("unary must be (nodes, labels)")
        if not np.all(np.isfinite(self.unary)):
            raise ValueError("unary costs must be finite")
        if np.any(self.weights < 0) or self.lambda_p < 0:
            raise ValueError("pairwise weights must be non-negative")
        if self.distance is None:
            object.__setattr__(self, 'distance', potts(self.nlabel))
        else:
            object.__setattr__(self, 'distance',
                               np.asarray(self.distance, dtype=np.float64))
        if self.distance.shape != (self.nlabel, self.nlabel):
            raise ValueError("label distance must be {0}x{0}".format(self.nlabel))

    @property
    def nlabel(self):
        return self.unary.shape[1]

    @property
    def nnodes(self):
        return self.unary.shape[0]

    def initial_labeling(self):
        """ Per-node unary argmin (lowest label on ties). """
        return np.argmin(self.unary, axis=1)


def _check_sizes(model, graph, labeling=None):
    if model.nnodes != graph.nnodes:
        raise ValueError("model has {0} nodes, graph has {1}"
                         .format(model.nnodes, graph.nnodes))
    if len(model.weights) != len(graph.edges):
        raise ValueError("model has {0} edge weights, graph has {1} edges"
                         .format(len(model.weights), len(graph.edges)))
    if labeling is not None and len(labeling) != model.nnodes:
        raise ValueError("labeling has {0} entries for {1} nodes"
                         .format(len(labeling), model.nnodes))


def energy_of(model, graph, labeling):
    """ Unary costs of the labeling plus weighted label distances over edges.
    """

    labeling = np.asarray(labeling, dtype=np.int64)
    _check_sizes(model, graph, labeling)

    energy = model.unary[np.arange(model.nnodes), labeling].sum()
    if len(graph.edges):
        ii, jj = graph.edges[:, 0], graph.edges[:, 1]
        dist = model.distance[labeling[ii], labeling[jj]]
        energy += model.lambda_p*np.dot(model.weights, dist)

    return float(energy)


def expansion_move(model, graph, labeling, alpha):
    """ Best labeling within one alpha-expansion of the given labeling.
    Binary variable x_p = 1 switches node p to alpha; the source side of
    the cut keeps its label.
    """

    labeling = np.asarray(labeling, dtype=np.int64)
    flow = nx.DiGraph()
    flow.add_nodes_from([source, sink])
    flow.add_nodes_from(range(model.nnodes))

    # unary terms, e1 relative to e0 after pairwise reparametrisation
    keep = model.unary[np.arange(model.nnodes), labeling].copy()
    switch = model.unary[:, alpha].copy()

    for (pp, qq), weight in zip(graph.edges, model.weights):
        ww = model.lambda_p*weight
        if ww == 0:
            continue
        lp, lq = labeling[pp], labeling[qq]
        aa = ww*model.distance[lp, lq]
        bb = ww*model.distance[lp, alpha]
        cc = ww*model.distance[alpha, lq]
        dd = ww*model.distance[alpha, alpha]
        keep[pp] += aa
        switch[pp] += cc
        switch[qq] += dd - cc
        add_capacity(flow, int(pp), int(qq), max(bb + cc - aa - dd, 0.))

    for pp in range(model.nnodes):
        if switch[pp] >= keep[pp]:
            add_capacity(flow, source, pp, switch[pp] - keep[pp])
        else:
            add_capacity(flow, pp, sink, keep[pp] - switch[pp])

    _, sourceside = max_flow(flow)
    moved = labeling.copy()
    for pp in range(model.nnodes):
        if pp not in sourceside:
            moved[pp] = alpha

    return moved


def alpha_expansion(model, graph, init=None, maxcycles=100):
    """ Minimise the energy by cycling over expansion moves.
    A move is kept only if it lowers the energy; stops after a full cycle
    over labels with no change.
    """

    if not is_metric(model.distance):
        raise ValueError("expansion requires metric pairwise")
    _check_sizes(model, graph)

    labeling = model.initial_labeling() if init is None else np.array(init, dtype=np.int64)
    energy = energy_of(model, graph, labeling)
    logger.debug("Initial energy {0:.6f}".format(energy))

    for cycle in range(maxcycles):
        changed = False
        for alpha in range(model.nlabel):
            moved = expansion_move(model, graph, labeling, alpha)
            moved_energy = energy_of(model, graph, moved)
            assert moved_energy <= energy + 1e-9*max(1., abs(energy)), \
                "expansion move increased energy from {0} to {1}".format(energy, moved_energy)

            if moved_energy < energy:
                logger.debug("Cycle {0}, alpha {1}: energy {2:.6f} -> {3:.6f}"
                             .format(cycle, alpha, energy, moved_energy))
                labeling, energy = moved, moved_energy
                changed = True

        if not changed:
            break
    else:
        logger.warning("Expansion stopped after {0} cycles without converging."
                       .format(maxcycles))

    return labeling
