from __future__ import print_function, division, absolute_import, unicode_literals

from collections import OrderedDict
import attr
import numpy as np

import logging
logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class ScoringConfig(object):
    """ How appearance, motion and combined scores are normalised per frame.
    """

    normalization = attr.ib(default='per_frame_max',
                            validator=attr.validators.in_(['per_frame_max',
                                                           'per_frame_minmax']))
    epsilon = attr.ib(default=1e-12, converter=float)

    @epsilon.validator
    def _check_epsilon(self, attribute, value):
        if not value > 0:
            raise ValueError("epsilon must be positive")


def motion_score(proposal_mask, motion_map):
    """ Motion score of a region: mean of the motion map inside the mask
    times its sum.
    """

    if proposal_mask.size != motion_map.size:
        raise ValueError("mask size {0} does not match motion map size {1}"
                         .format(proposal_mask.size, motion_map.size))
    if proposal_mask.area == 0:
        raise ValueError("empty proposal")

    inside = motion_map.values[proposal_mask.to_array()]
    return float(inside.mean()*inside.sum())


def normalize_scores(values, cfg):
    """ Normalise a frame's scores into [0, 1].
    All-zero frames stay zero. Under minmax, a frame of equal nonzero
    scores maps to one.
    """

    values = np.asarray(values, dtype=np.float64)
    if not len(values):
        return values

    if np.any(values < 0):
        logger.warning("Clipping {0} negative score(s) to zero before normalization."
                       .format(np.count_nonzero(values < 0)))
        values = np.clip(values, 0., None)

    vmax = values.max()
    if vmax <= cfg.epsilon:
        return np.zeros_like(values)

    if cfg.normalization == 'per_frame_max':
        return values/vmax
    elif cfg.normalization == 'per_frame_minmax':
        vmin = values.min()
        if vmax - vmin <= cfg.epsilon:
            return np.ones_like(values)
        return (values - vmin)/(vmax - vmin)


def combine_scores(frame_proposals, cfg):
    """ Normalise appearance and motion scores over one frame, sum them and
    normalise the sum. Returns new proposals with combined_score set.
    """

    if not len(frame_proposals):
        return []

    assert all(pp.motion_score is not None for pp in frame_proposals), \
        "motion_score must be set before combining"

    appearance = normalize_scores([pp.appearance_score for pp in frame_proposals], cfg)
    motion = normalize_scores([pp.motion_score for pp in frame_proposals], cfg)
    combined = normalize_scores(appearance + motion, cfg)

    return [attr.evolve(pp, combined_score=float(ss))
            for (pp, ss) in zip(frame_proposals, combined)]


def rescore(proposal):
    """ Product of combined score and classifier confidence. """

    assert proposal.combined_score is not None, "combined_score not set"
    return proposal.combined_score*proposal.classifier_confidence


def score_frame(frame_proposals, motion_map, cfg):
    """ Full scoring of the proposals of a single frame.
    """

    withmotion = [attr.evolve(pp, motion_score=motion_score(pp.mask, motion_map))
                  for pp in frame_proposals]
    combined = combine_scores(withmotion, cfg)
    return [attr.evolve(pp, rescored=rescore(pp)) for pp in combined]


def score_proposals(proposals, motion_maps, cfg):
    """ Score all proposals of a video. Normalisation groups are
    (frame, class), so each class tag sees its own frame maxima.
    Input order is preserved.
    """

    groups = OrderedDict()
    for ind, pp in enumerate(proposals):
        groups.setdefault((pp.frame_index, pp.classname), []).append(ind)

    scored = [None]*len(proposals)
    for (frame, classname), inds in groups.items():
        if frame >= len(motion_maps):
            raise ValueError("proposal on frame {0} but only {1} motion maps"
                             .format(frame, len(motion_maps)))
        frameprops = score_frame([proposals[ind] for ind in inds],
                                 motion_maps[frame], cfg)
        for ind, pp in zip(inds, frameprops):
            scored[ind] = pp

    logger.info("Scored {0} proposals in {1} frame/class group{2}."
                .format(len(proposals), len(groups), 's'[not len(groups)-1:]))

    return scored
