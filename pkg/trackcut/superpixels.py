from __future__ import print_function, division, absolute_import, unicode_literals

import attr
import numpy as np
from numba import jit
from scipy import ndimage
from trackcut import pooling

import logging
logger = logging.getLogger(__name__)


def _as_int_pairs(vv):
    return np.asarray(vv, dtype=np.int64).reshape(-1, 2)


@attr.s(frozen=True, eq=False)
class SuperpixelGraph(object):
    """ Space-time graph of superpixels.
    Nodes are numbered frame by frame: node offsets[t] + s is superpixel s of
    frame t. Edge arrays hold (i, j) pairs with i < j, each edge once.
    """

    labelmaps = attr.ib(converter=list)
    offsets = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.int64))
    colours = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64))
    npixels = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.int64))
    spatial_edges = attr.ib(converter=_as_int_pairs)
    temporal_edges = attr.ib(converter=_as_int_pairs)

    @property
    def nnodes(self):
        return int(self.offsets[-1])

    @property
    def nframes(self):
        return len(self.labelmaps)

    @property
    def edges(self):
        return np.concatenate([self.spatial_edges, self.temporal_edges])

    @property
    def node_frame(self):
        return np.repeat(np.arange(self.nframes), np.diff(self.offsets))

    def node_index(self, frame_index, label):
        return int(self.offsets[frame_index]) + label

    def frame_nodes(self, frame_index):
        return np.arange(self.offsets[frame_index], self.offsets[frame_index+1])

    def to_pixels(self, labeling, frame_index):
        """ Paint a per-node labeling back onto the pixels of one frame. """

        nodes = np.asarray(labeling)[self.frame_nodes(frame_index)]
        return nodes[self.labelmaps[frame_index]]


def grid_superpixels(size, step=4):
    """ Regular grid of step x step cells, used when no label map is given.
    """

    assert step >= 1, "grid step must be at least 1"
    ncols = -(-size.width//step)
    rows, cols = np.indices(size.shape)
    return ((rows//step)*ncols + cols//step).astype(np.int32)


_neighbour_dy = np.array([0, 1, 1, 1])
_neighbour_dx = np.array([1, -1, 0, 1])


@jit(nopython=True, nogil=True, cache=True)
def _spatial_pairs_jit(labels):
    height, width = labels.shape
    first = np.empty(4*height*width, dtype=np.int64)
    second = np.empty(4*height*width, dtype=np.int64)
    npair = 0
    for y in range(height):
        for x in range(width):
            aa = labels[y, x]
            # right, down-left, down, down-right cover every 8-neighbour once
            for kk in range(4):
                yy = y + _neighbour_dy[kk]
                xx = x + _neighbour_dx[kk]
                if yy < height and 0 <= xx < width:
                    bb = labels[yy, xx]
                    if aa != bb:
                        first[npair] = min(aa, bb)
                        second[npair] = max(aa, bb)
                        npair += 1

    return first[:npair], second[:npair]


@jit(nopython=True, nogil=True, cache=True)
def _temporal_pairs_jit(labels0, labels1, uu, vv):
    height, width = labels0.shape
    first = np.empty(height*width, dtype=np.int64)
    second = np.empty(height*width, dtype=np.int64)
    npair = 0
    for y in range(height):
        for x in range(width):
            xx = x + int(np.floor(uu[y, x] + 0.5))
            yy = y + int(np.floor(vv[y, x] + 0.5))
            if 0 <= yy < height and 0 <= xx < width:
                first[npair] = labels0[y, x]
                second[npair] = labels1[yy, xx]
                npair += 1

    return first[:npair], second[:npair]


def _unique_pairs(first, second, base0, base1):
    if not len(first):
        return np.zeros((0, 2), dtype=np.int64)
    pairs = np.unique(np.stack([first + base0, second + base1], axis=1), axis=0)
    return np.sort(pairs, axis=1)


def spatial_edges(labels, base=0):
    first, second = _spatial_pairs_jit(np.ascontiguousarray(labels, dtype=np.int64))
    return _unique_pairs(first, second, base, base)


def temporal_edges(labels0, labels1, flow, base0=0, base1=0):
    """ Edges (s@t, s'@t+1) for superpixels linked by at least one pixel
    displaced by its rounded flow vector. flow is a (u, v) pair of
    DenseMaps or None for zero motion.
    """

    if flow is None:
        uu = np.zeros(labels0.shape)
        vv = np.zeros(labels0.shape)
    else:
        uu, vv = flow[0].values, flow[1].values
    first, second = _temporal_pairs_jit(np.ascontiguousarray(labels0, dtype=np.int64),
                                        np.ascontiguousarray(labels1, dtype=np.int64),
                                        np.ascontiguousarray(uu), np.ascontiguousarray(vv))
    return _unique_pairs(first, second, base0, base1)


def mean_colours(frame, labels, nlabel):
    """ Mean RGB colour of each superpixel. """

    index = np.arange(nlabel)
    return np.stack([ndimage.mean(frame[..., ch], labels=labels, index=index)
                     for ch in range(3)], axis=1)


def build_graph(superpixel_maps, frames, flows=None):
    """ Build the space-time superpixel graph of a video.
    superpixel_maps and frames are per-frame lists of (h, w) label maps and
    (h, w, 3) RGB arrays in [0, 1]; flows[t] is the (u, v) pair for the
    transition t -> t+1.
    """

    if len(superpixel_maps) != len(frames):
        raise ValueError("{0} superpixel maps for {1} frames"
                         .format(len(superpixel_maps), len(frames)))
    flows = list(flows) if flows is not None else []

    offsets = [0]
    colours = []
    npixels = []
    spatial = []
    labelmaps = []
    for frame_index, (labels, frame) in enumerate(zip(superpixel_maps, frames)):
        labels = np.asarray(labels, dtype=np.int64)
        frame = np.asarray(frame, dtype=np.float64)
        if frame.shape[:2] != labels.shape or frame.ndim != 3:
            raise ValueError("frame {0} shape {1} does not match superpixel map {2}"
                             .format(frame_index, frame.shape, labels.shape))
        if labelmaps and labels.shape != labelmaps[0].shape:
            raise ValueError("superpixel map {0} size differs from frame 0"
                             .format(frame_index))

        nlabel = pooling.check_labels(labels)
        colours.append(mean_colours(frame[..., :3], labels, nlabel))
        npixels.append(np.bincount(labels.ravel(), minlength=nlabel))
        spatial.append(spatial_edges(labels, base=offsets[-1]))
        labelmaps.append(labels)
        offsets.append(offsets[-1] + nlabel)

    temporal = []
    for frame_index in range(len(labelmaps) - 1):
        flow = flows[frame_index] if frame_index < len(flows) else None
        if flow is not None and flow[0].values.shape != labelmaps[frame_index].shape:
            raise ValueError("flow {0} size does not match superpixel map"
                             .format(frame_index))
        temporal.append(temporal_edges(labelmaps[frame_index], labelmaps[frame_index+1],
                                       flow, offsets[frame_index], offsets[frame_index+1]))

    empty = np.zeros((0, 2), dtype=np.int64)
    graph = SuperpixelGraph(labelmaps, offsets,
                            np.concatenate(colours) if colours else np.zeros((0, 3)),
                            np.concatenate(npixels) if npixels else np.zeros(0),
                            np.concatenate(spatial) if spatial else empty,
                            np.concatenate(temporal) if temporal else empty)

    logger.info("Built superpixel graph with {0} nodes, {1} spatial and {2} temporal edges."
                .format(graph.nnodes, len(graph.spatial_edges), len(graph.temporal_edges)))

    return graph
