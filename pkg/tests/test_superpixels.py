from __future__ import print_function, division, absolute_import, unicode_literals

import pytest
import numpy as np
import trackcut
from trackcut import superpixels, regions


def flat(shape, colour=(0.5, 0.5, 0.5)):
    frame = np.zeros(shape + (3,))
    frame[:] = colour
    return frame


def flow(size, dx, dy):
    return (regions.DenseMap(size, np.full(size.shape, float(dx))),
            regions.DenseMap(size, np.full(size.shape, float(dy))))


def test_grid():
    size = regions.FrameSize(10, 6)
    labels = superpixels.grid_superpixels(size, 4)
    assert labels.shape == (6, 10)
    assert labels.max() == 5
    assert sorted(np.unique(labels).tolist()) == list(range(6))
    assert labels[0, 9] == 2 and labels[5, 0] == 3


def test_spatial_eight():
    edges = superpixels.spatial_edges(np.array([[0, 1], [2, 3]]))
    assert sorted(map(tuple, edges.tolist())) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_spatial_stripes():
    edges = superpixels.spatial_edges(np.array([[0, 1, 2]]*3), base=10)
    assert sorted(map(tuple, edges.tolist())) == [(10, 11), (11, 12)]


def test_single_superpixels():
    size = regions.FrameSize(4, 4)
    labels = np.zeros(size.shape, dtype=int)
    graph = superpixels.build_graph([labels, labels], [flat(size.shape)]*2,
                                    [flow(size, 3, -2)])
    assert graph.nnodes == 2
    assert graph.temporal_edges.tolist() == [[0, 1]]
    assert len(graph.spatial_edges) == 0


def test_colocated():
    size = regions.FrameSize(2, 2)
    labels = np.array([[0, 1], [0, 1]])
    graph = superpixels.build_graph([labels, labels], [flat(size.shape)]*2)
    assert sorted(map(tuple, graph.temporal_edges.tolist())) == [(0, 2), (1, 3)]
    assert sorted(map(tuple, graph.spatial_edges.tolist())) == [(0, 1), (2, 3)]


def test_flow_shift():
    size = regions.FrameSize(2, 1)
    labels = np.array([[0, 1]])
    edges = superpixels.temporal_edges(labels, labels, flow(size, 1, 0), 0, 2)
    assert edges.tolist() == [[0, 3]]


def test_one_frame():
    size = regions.FrameSize(4, 4)
    graph = superpixels.build_graph([superpixels.grid_superpixels(size, 2)], [flat(size.shape)])
    assert len(graph.temporal_edges) == 0
    assert graph.nnodes == 4 and graph.nframes == 1


def test_edges_ordered():
    rng = np.random.RandomState(0)
    size = regions.FrameSize(12, 9)
    labels = superpixels.grid_superpixels(size, 3)
    frames = [rng.rand(9, 12, 3) for _ in range(3)]
    graph = superpixels.build_graph([labels]*3, frames, [flow(size, 1, 1)]*2)

    edges = graph.edges
    assert (edges[:, 0] < edges[:, 1]).all()
    assert len(set(map(tuple, edges.tolist()))) == len(edges)
    frame = graph.node_frame
    assert (frame[graph.spatial_edges[:, 0]] == frame[graph.spatial_edges[:, 1]]).all()
    assert (frame[graph.temporal_edges[:, 1]] == frame[graph.temporal_edges[:, 0]] + 1).all()


def test_colours_and_pixels():
    size = regions.FrameSize(4, 2)
    labels = np.array([[0, 0, 1, 1], [0, 0, 1, 2]])
    frame = flat(size.shape)
    frame[:, 2:] = [0.1, 0.2, 0.3]
    frame[1, 3] = [1., 1., 1.]
    graph = superpixels.build_graph([labels], [frame])

    assert graph.colours[0] == pytest.approx([0.5, 0.5, 0.5])
    assert graph.colours[1] == pytest.approx([0.1, 0.2, 0.3])
    assert graph.colours[2] == pytest.approx([1., 1., 1.])
    assert graph.npixels.tolist() == [4, 3, 1]
    assert (graph.to_pixels([2, 5, 7], 0) == [[2, 2, 5, 5], [2, 2, 5, 7]]).all()


def test_node_index():
    size = regions.FrameSize(4, 4)
    labels = superpixels.grid_superpixels(size, 2)
    graph = superpixels.build_graph([labels]*3, [flat(size.shape)]*3)
    assert graph.node_index(2, 1) == 9
    assert graph.frame_nodes(1).tolist() == [4, 5, 6, 7]


def test_mismatch():
    size = regions.FrameSize(4, 4)
    labels = np.zeros(size.shape, dtype=int)
    with pytest.raises(ValueError):
        superpixels.build_graph([labels], [flat((3, 4))])
    with pytest.raises(ValueError):
        superpixels.build_graph([labels, labels], [flat(size.shape)])
    with pytest.raises(ValueError):
        superpixels.build_graph([labels, np.zeros((2, 2), dtype=int)],
                                [flat(size.shape), flat((2, 2))])
    with pytest.raises(ValueError):
        superpixels.build_graph([np.array([[0, 2]])], [flat((1, 2))])
