from __future__ import print_function, division, absolute_import, unicode_literals

import attr
import numpy as np
from numba import jit

import logging
logger = logging.getLogger(__name__)


def _positive(instance, attribute, value):
    if value < 1:
        raise ValueError("{0} must be at least 1 (got {1})"
                         .format(attribute.name, value))


@attr.s(frozen=True)
class FrameSize(object):
    """ Frame dimensions in pixels.
    """

    width = attr.ib(converter=int, validator=_positive)
    height = attr.ib(converter=int, validator=_positive)

    @property
    def npix(self):
        return self.width*self.height

    @property
    def shape(self):
        """ numpy (row, column) shape """
        return (self.height, self.width)


@attr.s(frozen=True)
class BoundingBox(object):
    """ Half-open pixel box [x0, x1) x [y0, y1).
    """

    x0 = attr.ib(converter=int)
    y0 = attr.ib(converter=int)
    x1 = attr.ib(converter=int)
    y1 = attr.ib(converter=int)

    def __attrs_post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("Degenerate box ({0}, {1}, {2}, {3})"
                             .format(self.x0, self.y0, self.x1, self.y1))

    @property
    def area(self):
        return (self.x1 - self.x0)*(self.y1 - self.y0)

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0

    def clamp(self, frame):
        """ Clip to frame, keeping at least one pixel inside it.
        """

        x0 = min(max(self.x0, 0), frame.width - 1)
        y0 = min(max(self.y0, 0), frame.height - 1)
        x1 = max(min(self.x1, frame.width), x0 + 1)
        y1 = max(min(self.y1, frame.height), y0 + 1)
        return BoundingBox(x0, y0, x1, y1)

    def shift(self, dx, dy, frame=None):
        box = BoundingBox(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)
        if frame is not None:
            box = box.clamp(frame)
        return box

    def slices(self):
        return (slice(self.y0, self.y1), slice(self.x0, self.x1))


def iou(a, b):
    """ Intersection over union of two boxes.
    """

    iw = min(a.x1, b.x1) - max(a.x0, b.x0)
    ih = min(a.y1, b.y1) - max(a.y0, b.y0)
    if iw <= 0 or ih <= 0:
        return 0.
    inter = iw*ih
    return inter/(a.area + b.area - inter)


def expand_box(b, margin, frame):
    """ Grow each side of b by margin pixels and clamp to frame.
    Used to cut classifier windows around proposals.
    """

    assert margin >= 0, "margin must be non-negative"
    return BoundingBox(max(b.x0 - margin, 0), max(b.y0 - margin, 0),
                       min(b.x1 + margin, frame.width),
                       min(b.y1 + margin, frame.height)).clamp(frame)


@jit(nopython=True, nogil=True, cache=True)
def _rle_encode_jit(flat):
    n = flat.shape[0]
    starts = np.empty(n//2 + 1, dtype=np.int64)
    lengths = np.empty(n//2 + 1, dtype=np.int64)
    nrun = 0
    i = 0
    while i < n:
        if flat[i]:
            j = i
            while j < n and flat[j]:
                j += 1
            starts[nrun] = i
            lengths[nrun] = j - i
            nrun += 1
            i = j
        else:
            i += 1

    return starts[:nrun], lengths[:nrun]


def _check_runs(instance, attribute, runs):
    npix = instance.size.npix
    end = -1
    for start, length in runs:
        if length < 1 or start < 0:
            raise ValueError("Invalid run {0}:{1}".format(start, length))
        if start <= end:
            raise ValueError("Runs must be sorted and non-overlapping")
        end = start + length - 1
        if end >= npix:
            raise ValueError("Run {0}:{1} exceeds frame of {2} pixels"
                             .format(start, length, npix))


@attr.s(frozen=True)
class BinaryMask(object):
    """ Run-length encoded binary mask over row-major pixel order.
    runs is a tuple of (start, length) pairs.
    """

    size = attr.ib()
    runs = attr.ib(converter=lambda rr: tuple((int(s), int(l)) for (s, l) in rr),
                   validator=_check_runs)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=bool)
        assert arr.ndim == 2, "mask array must be 2d"
        size = FrameSize(arr.shape[1], arr.shape[0])
        starts, lengths = _rle_encode_jit(arr.ravel().astype(np.uint8))
        return cls(size, list(zip(starts.tolist(), lengths.tolist())))

    @classmethod
    def from_box(cls, box, size):
        arr = np.zeros(size.shape, dtype=bool)
        arr[box.clamp(size).slices()] = True
        return cls.from_array(arr)

    @classmethod
    def from_string(cls, rle):
        """ Parse "w h; start:len start:len ..." """

        head, _, body = rle.partition(';')
        width, height = [int(vv) for vv in head.split()]
        runs = []
        for tok in body.split():
            start, length = tok.split(':')
            runs.append((int(start), int(length)))
        return cls(FrameSize(width, height), runs)

    def to_string(self):
        body = ' '.join('{0}:{1}'.format(s, l) for (s, l) in self.runs)
        return '{0} {1}; {2}'.format(self.size.width, self.size.height, body).rstrip()

    def to_array(self):
        flat = np.zeros(self.size.npix, dtype=bool)
        for start, length in self.runs:
            flat[start:start+length] = True
        return flat.reshape(self.size.shape)

    @property
    def area(self):
        return sum(length for (_, length) in self.runs)

    @property
    def box(self):
        """ Tight bounding box, or None for an empty mask. """

        if not self.runs:
            return None
        rows, cols = np.nonzero(self.to_array())
        return BoundingBox(cols.min(), rows.min(), cols.max() + 1, rows.max() + 1)


def mask_area(m):
    return m.area


def _check_values(instance, attribute, values):
    if values.shape != instance.size.shape:
        raise ValueError("map shape {0} does not match frame {1}"
                         .format(values.shape, instance.size.shape))
    if not np.all(np.isfinite(values)):
        raise ValueError("map values must be finite")


@attr.s(frozen=True, eq=False)
class DenseMap(object):
    """ Real-valued map over a frame, stored as a (height, width) array.
    """

    size = attr.ib()
    values = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64),
                     validator=_check_values)

    @classmethod
    def zeros(cls, size):
        return cls(size, np.zeros(size.shape))

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=np.float64)
        return cls(FrameSize(arr.shape[1], arr.shape[0]), arr)


def normalize_feature(vec):
    """ L2-normalize a feature vector. Zero vectors stay zero.
    """

    vec = np.asarray(vec, dtype=np.float64)
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec = vec/norm
    return vec


def _check_confidence(instance, attribute, value):
    if not 0. <= value <= 1.:
        raise ValueError("classifier_confidence {0} outside [0, 1]".format(value))


def _check_feature(instance, attribute, value):
    if np.linalg.norm(value) > 1. + 1e-9:
        raise ValueError("feature norm exceeds 1")


@attr.s(frozen=True)
class RegionProposal(object):
    """ Candidate object region on one frame with its scores.
    Scores that are computed later (motion, combined, rescored) start as None
    and are filled in with attr.evolve.
    """

    frame_index = attr.ib(converter=int)
    mask = attr.ib()
    appearance_score = attr.ib(converter=float)
    classifier_confidence = attr.ib(converter=float, validator=_check_confidence)
    feature = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64),
                      validator=_check_feature, eq=False)
    classname = attr.ib(default=None)
    motion_score = attr.ib(default=None)
    combined_score = attr.ib(default=None)
    rescored = attr.ib(default=None)
    box = attr.ib(default=attr.Factory(lambda self: self.mask.box, takes_self=True))

    def __attrs_post_init__(self):
        if self.mask.area == 0:
            raise ValueError("empty proposal on frame {0}".format(self.frame_index))
        if self.box != self.mask.box:
            raise ValueError("proposal box must be the tight box of its mask")
