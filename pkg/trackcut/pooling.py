from __future__ import print_function, division, absolute_import, unicode_literals

import attr
import numpy as np
from scipy import ndimage
from trackcut import regions

import logging
logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class PooledFrame(object):
    frame_index = attr.ib(converter=int)
    map = attr.ib()


def pool_frame(proposals, size=None):
    """ Weighted spatial average pooling of one frame.
    proposals is a list of (mask, confidence) pairs. Each pixel gets the
    summed confidence of the masks covering it divided by the summed
    confidence of all masks on the frame.
    size is needed only when proposals is empty.
    """

    if not len(proposals):
        if size is None:
            raise ValueError("frame size is required to pool an empty frame")
        return regions.DenseMap.zeros(size)

    size = proposals[0][0].size if size is None else size
    num = np.zeros(size.shape)
    den = 0.
    for mask, confidence in proposals:
        if mask.size != size:
            raise ValueError("mask size {0} does not match frame size {1}"
                             .format(mask.size, size))
        assert confidence >= 0, "confidences must be non-negative"
        num += confidence*mask.to_array()
        den += confidence

    if den <= 0.:
        return regions.DenseMap.zeros(size)

    return regions.DenseMap(size, np.clip(num/den, 0., 1.))


def pool_tracks(tracks, frames, size):
    """ Pool the regenerated proposals absorbed by tracks, frame by frame.
    Frames no track covers get an all-zero map.
    """

    byframe = {}
    for track in tracks:
        for entry in track.entries:
            for prop in entry.absorbed:
                byframe.setdefault(entry.frame_index, []).append((prop.mask,
                                                                  prop.confidence))

    pooled = [PooledFrame(frame, pool_frame(byframe.get(frame, []), size=size))
              for frame in frames]
    logger.debug("Pooled {0} track{1} over {2} frames."
                 .format(len(tracks), 's'[not len(tracks)-1:], len(frames)))

    return pooled


def check_labels(labels, size=None):
    """ Superpixel label map must be contiguous 0..S-1 with no empty label.
    Returns S.
    """

    labels = np.asarray(labels)
    if size is not None and labels.shape != size.shape:
        raise ValueError("label map shape {0} does not match frame {1}"
                         .format(labels.shape, size.shape))
    if labels.min() < 0:
        raise ValueError("superpixel labels must be non-negative")

    nlabel = int(labels.max()) + 1
    counts = np.bincount(labels.ravel(), minlength=nlabel)
    if np.any(counts == 0):
        raise ValueError("superpixel label(s) {0} have no pixels"
                         .format(np.nonzero(counts == 0)[0].tolist()))

    return nlabel


def reduce_to_superpixels(map, superpixels):
    """ Mean map value over the pixels of each superpixel.
    """

    nlabel = check_labels(superpixels, map.size)
    means = ndimage.mean(map.values, labels=superpixels, index=np.arange(nlabel))
    return np.clip(np.asarray(means, dtype=np.float64), 0., 1.)
