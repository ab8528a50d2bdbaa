from __future__ import print_function, division, absolute_import, unicode_literals

import attr
import numpy as np
from scipy import ndimage
from trackcut import regions

import logging
logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class MiningConfig(object):
    """ Settings for proposal regeneration and track mining.
    """

    levels = attr.ib(default=10, converter=int)  # number of thresholds L
    connectivity = attr.ib(default='eight',
                           validator=attr.validators.in_(['four', 'eight']))
    iou_absorb = attr.ib(default=0.5, converter=float)  # inclusive
    rng_seed = attr.ib(default=0, converter=int)
    min_region_area = attr.ib(default=9, converter=int)  # in pixels

    @levels.validator
    def _check_levels(self, attribute, value):
        if value < 1:
            raise ValueError("levels must be at least 1")

    @iou_absorb.validator
    def _check_iou(self, attribute, value):
        if not 0. < value <= 1.:
            raise ValueError("iou_absorb must be in (0, 1]")

    @property
    def thresholds(self):
        """ Uniform levels k/(L+1), k=1..L, in increasing order. """
        return [kk/(self.levels + 1.) for kk in range(1, self.levels + 1)]

    @property
    def structure(self):
        rank = 2 if self.connectivity == 'eight' else 1
        return ndimage.generate_binary_structure(2, rank)


@attr.s(frozen=True)
class RegeneratedProposal(object):
    """ Connected region of a thresholded confidence map.
    """

    frame_index = attr.ib(converter=int)
    mask = attr.ib()
    confidence = attr.ib(converter=float)
    source_level = attr.ib(converter=float)
    feature = attr.ib(default=np.zeros(0), eq=False,
                      converter=lambda vv: np.asarray(vv, dtype=np.float64))
    classname = attr.ib(default=None)
    box = attr.ib(default=attr.Factory(lambda self: self.mask.box, takes_self=True))


@attr.s(frozen=True)
class TrackEntry(object):
    frame_index = attr.ib(converter=int)
    box = attr.ib()
    absorbed = attr.ib(converter=tuple, default=())


@attr.s(frozen=True)
class Track(object):
    """ Chain of regenerated proposals over contiguous frames.
    feature is the mean of the absorbed proposals' features and phi their
    mean confidence.
    """

    id = attr.ib(converter=int)
    entries = attr.ib(converter=tuple)
    feature = attr.ib(eq=False, converter=lambda vv: np.asarray(vv, dtype=np.float64))
    phi = attr.ib(converter=float)

    @property
    def absorbed(self):
        return [prop for entry in self.entries for prop in entry.absorbed]

    @property
    def frames(self):
        """ Frames on which the track absorbed proposals. """
        return [entry.frame_index for entry in self.entries if entry.absorbed]

    def __len__(self):
        return len(self.frames)


class Tracker(object):
    """ Predicts where a box on frame t lies on frame t+1.
    """

    def predict(self, frame_index, box):
        raise NotImplementedError


class FlowShiftTracker(Tracker):
    """ Moves a box by the median optical flow vector inside it.
    flow_fields[t] is the (u, v) pair for the transition t -> t+1; a missing
    (None or absent) pair gives zero shift.
    """

    def __init__(self, flow_fields, size=None):
        self.flow_fields = list(flow_fields)
        if size is None:
            for pair in self.flow_fields:
                if pair is not None:
                    size = pair[0].size
                    break
        self.size = size

    def __repr__(self):
        return 'FlowShiftTracker with {0} transitions'.format(len(self.flow_fields))

    def predict(self, frame_index, box):
        if frame_index >= len(self.flow_fields) or self.flow_fields[frame_index] is None:
            return box if self.size is None else box.clamp(self.size)

        uu, vv = self.flow_fields[frame_index]
        region = box.clamp(uu.size).slices()
        dx = int(np.floor(np.median(uu.values[region]) + 0.5))
        dy = int(np.floor(np.median(vv.values[region]) + 0.5))
        return box.shift(dx, dy, frame=self.size)


def flow_shift_tracker(flow_fields):
    return FlowShiftTracker(flow_fields)


def regenerate(map, cfg, frame_index=0, sources=None, classname=None):
    """ Threshold the confidence map at each level and take connected
    components as new proposals. Exact duplicates across levels keep the
    lowest level. sources are the frame's original proposals; each new
    region inherits the feature of the source it overlaps most, or a zero
    feature when it overlaps none.
    """

    values = map.values
    if sources:
        sourcearrs = [src.mask.to_array() for src in sources]

    seen = set()
    proposals = []
    for level in cfg.thresholds:
        binary = values >= level
        if not binary.any():
            break

        labels, nlabel = ndimage.label(binary, structure=cfg.structure)
        areas = np.bincount(labels.ravel(), minlength=nlabel + 1)
        for label in range(1, nlabel + 1):
            if areas[label] < cfg.min_region_area:
                continue

            region = labels == label
            mask = regions.BinaryMask.from_array(region)
            if mask.runs in seen:
                continue
            seen.add(mask.runs)

            if sources:
                overlaps = [np.count_nonzero(region & arr) for arr in sourcearrs]
                best = int(np.argmax(overlaps))
                if overlaps[best]:
                    feature = sources[best].feature
                else:
                    feature = np.zeros_like(sources[best].feature)
            else:
                feature = np.zeros(0)

            proposals.append(RegeneratedProposal(frame_index=frame_index, mask=mask,
                                                 confidence=values[region].mean(),
                                                 source_level=level, feature=feature,
                                                 classname=classname))

    logger.debug("Regenerated {0} proposals on frame {1}."
                 .format(len(proposals), frame_index))

    return proposals


def mine_tracks(proposals, tracker, cfg, nframes=None, returndiscarded=False):
    """ Iterative tracking and eliminating.
    Repeatedly seeds a track with a random proposal on the earliest frame
    still in the pool, tracks its box to the last frame and absorbs every
    pool proposal whose box overlaps the tracked box by at least
    cfg.iou_absorb. Tracks absorbing on fewer than two frames are
    discarded (optionally returned as a second list).
    """

    rng = np.random.RandomState(cfg.rng_seed)
    if nframes is None:
        nframes = max(pp.frame_index for pp in proposals) + 1 if proposals else 0

    pool = {}
    for ind, pp in enumerate(proposals):
        pool.setdefault(pp.frame_index, []).append(ind)

    tracks = []
    discarded = []
    while pool:
        earliest = min(pool)
        candidates = pool[earliest]
        seed = candidates[rng.randint(len(candidates))]
        box = proposals[seed].box

        entries = []
        for frame in range(earliest, nframes):
            if frame > earliest:
                box = tracker.predict(frame - 1, box)

            if frame == earliest:
                absorbed = [seed] + [ind for ind in pool.get(frame, [])
                                     if ind != seed and
                                     regions.iou(proposals[ind].box, box) >= cfg.iou_absorb]
            else:
                absorbed = [ind for ind in pool.get(frame, [])
                            if regions.iou(proposals[ind].box, box) >= cfg.iou_absorb]
            if absorbed:
                remaining = [ind for ind in pool[frame] if ind not in absorbed]
                if remaining:
                    pool[frame] = remaining
                else:
                    del pool[frame]

            entries.append(TrackEntry(frame, box, [proposals[ind] for ind in absorbed]))

        members = [prop for entry in entries for prop in entry.absorbed]
        feature = np.mean([prop.feature for prop in members], axis=0)
        phi = np.mean([prop.confidence for prop in members])
        nabsorbing = sum(1 for entry in entries if entry.absorbed)

        if nabsorbing >= 2:
            tracks.append(Track(len(tracks), entries, feature, phi))
        else:
            discarded.append(Track(-1, entries, feature, phi))

    logger.info("Mined {0} track{1} from {2} proposals ({3} discarded)."
                .format(len(tracks), 's'[not len(tracks)-1:], len(proposals),
                        len(discarded)))

    if returndiscarded:
        return tracks, discarded
    else:
        return tracks
