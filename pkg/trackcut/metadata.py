from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import os.path
import attr

import logging
logger = logging.getLogger(__name__)

listkeys = ['classes', 'frames', 'motion', 'flow_u', 'flow_v', 'superpixels',
            'groundtruth']
pathkeys = ['proposals', 'frames', 'motion', 'flow_u', 'flow_v', 'superpixels',
            'groundtruth']
intkeys = ['nframes', 'width', 'height', 'featuredim']


def _tuple(value):
    return tuple(value) if value is not None else ()


@attr.s
class Metadata(object):
    """ Metadata of one video: what the pipeline reads and where it lives.
    Built from nominally immutable attributes.
    To modify metadata, use attr.evolve(inst, key=newval)
    """

    videoid = attr.ib(default=None)
    nframes = attr.ib(default=None)
    width = attr.ib(default=None)  # in pixels
    height = attr.ib(default=None)  # in pixels
    classes = attr.ib(default=(), converter=_tuple)  # video-level tags
    featuredim = attr.ib(default=None)

    # files, one per frame unless noted
    frames = attr.ib(default=(), converter=_tuple)  # RGB png
    proposals = attr.ib(default=None)  # single proposals file
    motion = attr.ib(default=(), converter=_tuple)  # FMAP
    flow_u = attr.ib(default=(), converter=_tuple)  # FMAP, one per transition
    flow_v = attr.ib(default=(), converter=_tuple)  # FMAP, one per transition
    superpixels = attr.ib(default=(), converter=_tuple)  # IMAP, optional
    groundtruth = attr.ib(default=(), converter=_tuple)  # IMAP, optional; '' skips a frame
    basedir = attr.ib(default=None)

    def atdefaults(self):
        """ Is metadata still set at default values? """
        return not any([self.__dict__[ab] for ab in self.__dict__])

    @property
    def annotated(self):
        """ Frame indices with a ground truth map. """
        return [ii for (ii, path) in enumerate(self.groundtruth) if path]

    def validate(self):
        """ Check that the referenced files exist and that list lengths agree
        with the frame count.
        """

        assert self.videoid, "videoid must be set"
        assert self.nframes is not None and self.nframes >= 1, "nframes must be at least 1"
        assert self.width and self.height, "frame size must be set"
        assert len(self.classes), "at least one class tag is required"
        assert self.featuredim is not None and self.featuredim > 0, "featuredim must be positive"

        assert len(self.frames) == self.nframes, ("{0} frame files for {1} frames"
                                                  .format(len(self.frames), self.nframes))
        assert len(self.motion) == self.nframes, ("{0} motion maps for {1} frames"
                                                  .format(len(self.motion), self.nframes))
        assert len(self.flow_u) == len(self.flow_v) == self.nframes - 1, \
            "need one (u, v) flow pair per frame transition"
        for key in ['superpixels', 'groundtruth']:
            assert len(getattr(self, key)) in (0, self.nframes), \
                "{0} must be empty or have one entry per frame".format(key)

        paths = [self.proposals]
        for key in pathkeys[1:]:
            paths += [path for path in getattr(self, key) if path]
        missing = [path for path in paths if not path or not os.path.exists(path)]
        assert not missing, "missing input file(s): {0}".format(', '.join(map(str, missing)))

        return True


def make_metadata(inmeta=None, manifest=None):
    """ Create Metadata from a manifest file, optionally overloaded by a dict.
    """

    if isinstance(inmeta, Metadata):
        return inmeta  # does not overload if Metadata object passed in
    else:
        if inmeta is None:
            inmeta = {}  # passing in dict will overload manifest values

        if manifest is not None:
            meta = read_manifest(manifest)
        else:
            if not inmeta:
                logger.warning("Provide either inmeta or manifest to define metadata. "
                               "Empty metadata being created.")
            meta = {}

        if isinstance(inmeta, dict):
            for key in inmeta:
                meta[key] = inmeta[key]
        else:
            logger.warning("inmeta not dict, Metadata, or None. Not parsed.")

        return Metadata(**meta)


def read_manifest(manifest):
    """ Parse a flat "key = value" manifest into a metadata dict.
    List values are comma separated and relative paths are resolved against
    the manifest directory.
    """

    basedir = os.path.dirname(os.path.abspath(manifest))
    meta = {'basedir': basedir}
    with open(manifest, 'r') as fp:
        for line in fp.readlines():
            line_clean = line.rstrip('\n').split('#')[0]
            if not line_clean.strip() or '=' not in line_clean:
                continue

            key, value = [part.strip() for part in line_clean.split('=', 1)]
            if key not in attr.fields_dict(Metadata):
                raise ValueError("Unknown manifest key {0} in {1}".format(key, manifest))

            if key in listkeys:
                value = [vv.strip() for vv in value.split(',')] if value else []
            elif key in intkeys:
                value = int(value)

            if key in pathkeys:
                if isinstance(value, list):
                    value = [os.path.join(basedir, vv) if vv else '' for vv in value]
                else:
                    value = os.path.join(basedir, value)
            meta[key] = value

    logger.debug("Read manifest {0} for video {1}".format(manifest, meta.get('videoid')))

    return meta


def write_manifest(meta, manifest):
    """ Write Metadata as a manifest. Paths under the manifest directory are
    written relative to it.
    """

    basedir = os.path.dirname(os.path.abspath(manifest))

    def relpath(path):
        if not path:
            return ''
        path = os.path.abspath(path)
        if path.startswith(basedir + os.sep):
            return os.path.relpath(path, basedir)
        return path

    lines = ['# trackcut video manifest']
    for field in attr.fields(Metadata):
        key = field.name
        value = getattr(meta, key)
        if key == 'basedir' or value is None:
            continue
        if key in pathkeys:
            value = [relpath(vv) for vv in value] if key in listkeys else relpath(value)
        if key in listkeys:
            value = ','.join(value)
        lines.append('{0} = {1}'.format(key, value))

    with open(manifest, 'w') as fp:
        fp.write('\n'.join(lines) + '\n')
