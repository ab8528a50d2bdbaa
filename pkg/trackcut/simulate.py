from __future__ import print_function, division, absolute_import, unicode_literals

import os
import attr
import numpy as np
from trackcut import regions

import logging
logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class SceneSpec(object):
    """ Synthetic video: a coloured square moving at constant velocity over
    a flat background, with a static clutter square that the classifier
    fires on in a few "confusion" frames.
    """

    width = attr.ib(default=64, converter=int)
    height = attr.ib(default=64, converter=int)
    nframes = attr.ib(default=10, converter=int)
    object_size = attr.ib(default=16, converter=int)  # square side in pixels
    start = attr.ib(default=(4, 8), converter=tuple)  # (x, y) of object on frame 0
    velocity = attr.ib(default=(2, 0), converter=tuple)  # pixels per frame
    object_colour = attr.ib(default=(0.9, 0.2, 0.2), converter=tuple)
    background_colour = attr.ib(default=(0.2, 0.3, 0.7), converter=tuple)
    background_noise = attr.ib(default=0.02, converter=float)  # pixel noise std
    proposal_noise = attr.ib(default=0.3, converter=float)  # fraction of non-object proposals
    jitter = attr.ib(default=1, converter=int)  # in pixels, for object proposals
    njittered = attr.ib(default=2, converter=int)  # jittered object proposals per frame
    featuredim = attr.ib(default=32, converter=int)
    feature_noise = attr.ib(default=0.05, converter=float)  # per-dimension std
    clutter_size = attr.ib(default=12, converter=int)  # 0 disables clutter
    clutter_position = attr.ib(default=(44, 42), converter=tuple)
    clutter_colour = attr.ib(default=(0.2, 0.8, 0.3), converter=tuple)
    confusion_frames = attr.ib(default=2, converter=int)
    nclutter = attr.ib(default=4, converter=int)  # clutter proposals per confusion frame
    classname = attr.ib(default='object')
    grid_step = attr.ib(default=4, converter=int)  # superpixel grid cell
    annotate_every = attr.ib(default=1, converter=int)

    @property
    def size(self):
        return regions.FrameSize(self.width, self.height)

    def object_box(self, frame_index):
        x0 = self.start[0] + self.velocity[0]*frame_index
        y0 = self.start[1] + self.velocity[1]*frame_index
        return regions.BoundingBox(x0, y0, x0 + self.object_size,
                                   y0 + self.object_size).clamp(self.size)

    @property
    def clutter_box(self):
        if not self.clutter_size:
            return None
        x0, y0 = self.clutter_position
        return regions.BoundingBox(x0, y0, x0 + self.clutter_size,
                                   y0 + self.clutter_size).clamp(self.size)


def _unit(rng, base, noise):
    return regions.normalize_feature(base + noise*rng.randn(len(base)))


def _random_feature(rng, dim):
    return regions.normalize_feature(rng.randn(dim))


def _proposal(frame_index, box, size, appearance, confidence, feature, classname):
    mask = regions.BinaryMask.from_box(box, size)
    return regions.RegionProposal(frame_index=frame_index, mask=mask,
                                  appearance_score=appearance,
                                  classifier_confidence=confidence,
                                  feature=feature, classname=classname)


def make_scene(spec, seed=0):
    """ Build every array and proposal of a synthetic video in memory.
    Returns a dict with frames, motion, flows, superpixels, groundtruth,
    proposals, kinds (per proposal: object, jittered, clutter or
    distractor) and the confusion frame indices.
    """

    rng = np.random.RandomState(seed)
    size = spec.size
    base = _random_feature(rng, spec.featuredim)
    clutter = spec.clutter_box

    candidates = list(range(1, spec.nframes))
    nconfused = min(spec.confusion_frames, len(candidates)) if clutter is not None else 0
    confused = sorted(rng.choice(candidates, nconfused, replace=False).tolist()) if nconfused else []

    scene = {'frames': [], 'motion': [], 'flows': [], 'superpixels': [],
             'groundtruth': [], 'proposals': [], 'kinds': [], 'confused': confused}

    for tt in range(spec.nframes):
        box = spec.object_box(tt)
        objmask = np.zeros(size.shape, dtype=bool)
        objmask[box.slices()] = True
        cluttermask = np.zeros(size.shape, dtype=bool)
        if clutter is not None:
            cluttermask[clutter.slices()] = True
            cluttermask &= ~objmask

        frame = np.empty(size.shape + (3,))
        frame[...] = spec.background_colour
        frame[cluttermask] = spec.clutter_colour
        frame[objmask] = spec.object_colour
        if spec.background_noise > 0:
            frame += spec.background_noise*rng.randn(*frame.shape)
        scene['frames'].append(np.clip(frame, 0., 1.))

        scene['motion'].append(regions.DenseMap(size, objmask.astype(np.float64)))
        scene['groundtruth'].append(objmask.astype(np.int32)
                                    if tt % spec.annotate_every == 0 else None)
        scene['superpixels'].append(boundary_superpixels(size, spec.grid_step,
                                                         [objmask, cluttermask]))

        if tt < spec.nframes - 1:
            uu = np.where(objmask, float(spec.velocity[0]), 0.)
            vv = np.where(objmask, float(spec.velocity[1]), 0.)
            scene['flows'].append((regions.DenseMap(size, uu), regions.DenseMap(size, vv)))

        isconfused = tt in confused
        conf = (0.25, 0.35) if isconfused else (0.85, 0.95)
        scene['proposals'].append(_proposal(tt, box, size, rng.uniform(0.85, 1.0),
                                            rng.uniform(*conf),
                                            _unit(rng, base, spec.feature_noise),
                                            spec.classname))
        scene['kinds'].append('object')

        conf = (0.2, 0.3) if isconfused else (0.75, 0.9)
        for _ in range(spec.njittered):
            dx, dy = rng.randint(-spec.jitter, spec.jitter + 1, size=2)
            scene['proposals'].append(_proposal(tt, box.shift(int(dx), int(dy), frame=size), size,
                                                rng.uniform(0.55, 0.75), rng.uniform(*conf),
                                                _unit(rng, base, spec.feature_noise),
                                                spec.classname))
            scene['kinds'].append('jittered')

        if isconfused:
            for _ in range(spec.nclutter):
                dx, dy = rng.randint(-1, 2, size=2)
                scene['proposals'].append(_proposal(tt, clutter.shift(int(dx), int(dy), frame=size),
                                                    size, rng.uniform(0.85, 1.0),
                                                    rng.uniform(0.9, 1.0),
                                                    _random_feature(rng, spec.featuredim),
                                                    spec.classname))
                scene['kinds'].append('clutter')

    _add_distractors(spec, rng, scene)

    logger.info("Synthetic scene with {0} frames, {1} proposals, confusion frames {2}"
                .format(spec.nframes, len(scene['proposals']), confused))

    return scene


def _add_distractors(spec, rng, scene):
    """ One-off random boxes away from the object and clutter, enough that
    spec.proposal_noise of all proposals are not on the object.
    """

    if spec.proposal_noise <= 0:
        return

    size = spec.size
    nobject = sum(1 for kind in scene['kinds'] if kind in ('object', 'jittered'))
    nclutter = sum(1 for kind in scene['kinds'] if kind == 'clutter')
    ntotal = int(round(nobject/(1. - spec.proposal_noise)))
    ndistract = max(ntotal - nobject - nclutter, 0)

    for ii in range(ndistract):
        tt = ii % spec.nframes
        keepout = [regions.expand_box(spec.object_box(tt), 2, size)]
        if spec.clutter_box is not None:
            keepout.append(regions.expand_box(spec.clutter_box, 2, size))

        for _ in range(100):
            side = rng.randint(6, 13)
            x0 = rng.randint(0, max(size.width - side, 1))
            y0 = rng.randint(0, max(size.height - side, 1))
            box = regions.BoundingBox(x0, y0, x0 + side, y0 + side).clamp(size)
            if all(regions.iou(box, other) == 0 for other in keepout):
                scene['proposals'].append(_proposal(tt, box, size, rng.uniform(0.1, 0.5),
                                                    rng.uniform(0.05, 0.4),
                                                    _random_feature(rng, spec.featuredim),
                                                    spec.classname))
                scene['kinds'].append('distractor')
                break


def boundary_superpixels(size, step, masks):
    """ Grid cells split along the outlines of the given masks, relabelled
    to contiguous ids.
    """

    from trackcut import superpixels

    grid = superpixels.grid_superpixels(size, step).astype(np.int64)
    region = np.zeros(size.shape, dtype=np.int64)
    for ii, mask in enumerate(masks, 1):
        region[mask] = ii
    _, labels = np.unique(grid*(len(masks) + 1) + region, return_inverse=True)
    return labels.reshape(size.shape).astype(np.int32)


def generate_synthetic(spec, seed=0, outdir='.', videoid=None):
    """ Write a synthetic video and its manifest under outdir.
    Returns the manifest path.
    """

    from trackcut import source, metadata

    scene = make_scene(spec, seed=seed)
    videoid = videoid or 'synth{0}'.format(seed)
    datadir = os.path.join(outdir, videoid)
    if not os.path.exists(datadir):
        os.makedirs(datadir)

    def path(name):
        return os.path.join(datadir, name)

    frames, motion, flow_u, flow_v, sps, gts = [], [], [], [], [], []
    for tt in range(spec.nframes):
        frames.append(path('frame_{0}.png'.format(tt)))
        source.write_frame(scene['frames'][tt], frames[-1])
        motion.append(path('motion_{0}.fmap'.format(tt)))
        source.write_fmap(scene['motion'][tt], motion[-1])
        sps.append(path('superpixels_{0}.imap'.format(tt)))
        source.write_imap(scene['superpixels'][tt], sps[-1])
        if scene['groundtruth'][tt] is not None:
            gts.append(path('gt_{0}.imap'.format(tt)))
            source.write_imap(scene['groundtruth'][tt], gts[-1])
        else:
            gts.append('')

    for tt, (uu, vv) in enumerate(scene['flows']):
        flow_u.append(path('flow_u_{0}.fmap'.format(tt)))
        source.write_fmap(uu, flow_u[-1])
        flow_v.append(path('flow_v_{0}.fmap'.format(tt)))
        source.write_fmap(vv, flow_v[-1])

    proposals = path('proposals.txt')
    source.write_proposals(scene['proposals'], proposals)

    meta = metadata.Metadata(videoid=videoid, nframes=spec.nframes, width=spec.width,
                             height=spec.height, classes=(spec.classname,),
                             featuredim=spec.featuredim, frames=frames, proposals=proposals,
                             motion=motion, flow_u=flow_u, flow_v=flow_v, superpixels=sps,
                             groundtruth=gts, basedir=datadir)
    manifest = os.path.join(datadir, 'manifest.txt')
    metadata.write_manifest(meta, manifest)
    logger.info("Wrote synthetic video {0} to {1}".format(videoid, datadir))

    return manifest
