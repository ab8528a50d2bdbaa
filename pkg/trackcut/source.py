from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import os.path
import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.image as mpimg
from trackcut import regions

import logging
logger = logging.getLogger(__name__)

fmapheader = 'FMAP'
imapheader = 'IMAP'


def read_proposals(path, size=None, classes=None, featuredim=None):
    """ Read a proposals file into RegionProposals.
    Records are tab separated: frame, rle, appearance, confidence,
    comma-separated feature and an optional class tag (default is the first
    of classes). Features are L2-normalised on reading.
    """

    default_class = classes[0] if classes else None
    proposals = []
    with open(path, 'r') as fp:
        for lineno, line in enumerate(fp, 1):
            line = line.rstrip('\n')
            if not line.strip() or line.startswith('#'):
                continue

            fields = line.split('\t')
            if len(fields) not in (5, 6):
                raise ValueError("{0}:{1}: expected 5 or 6 fields, got {2}"
                                 .format(path, lineno, len(fields)))

            mask = regions.BinaryMask.from_string(fields[1])
            if size is not None and mask.size != size:
                raise ValueError("{0}:{1}: mask size {2} does not match frame size {3}"
                                 .format(path, lineno, mask.size, size))

            feature = np.array([float(vv) for vv in fields[4].split(',') if vv.strip()])
            if featuredim is not None and len(feature) != featuredim:
                raise ValueError("{0}:{1}: feature has {2} values, expected {3}"
                                 .format(path, lineno, len(feature), featuredim))

            classname = fields[5].strip() if len(fields) == 6 else default_class
            if classes and classname not in classes:
                raise ValueError("{0}:{1}: class {2} is not a video tag"
                                 .format(path, lineno, classname))

            proposals.append(regions.RegionProposal(frame_index=int(fields[0]), mask=mask,
                                                    appearance_score=float(fields[2]),
                                                    classifier_confidence=float(fields[3]),
                                                    feature=regions.normalize_feature(feature),
                                                    classname=classname))

    logger.info("Read {0} proposal{1} from {2}"
                .format(len(proposals), 's'[not len(proposals)-1:], path))

    return proposals


def write_proposals(proposals, path):
    lines = ['# frame\trle\tappearance\tconfidence\tfeature\tclass']
    for pp in proposals:
        fields = [str(pp.frame_index), pp.mask.to_string(),
                  '{0:.10g}'.format(pp.appearance_score),
                  '{0:.10g}'.format(pp.classifier_confidence),
                  ','.join('{0:.10g}'.format(vv) for vv in pp.feature)]
        if pp.classname is not None:
            fields.append(pp.classname)
        lines.append('\t'.join(fields))

    _writelines(lines, path)


def write_scored(proposals, path):
    """ Scores of each proposal after the scoring stage. """

    lines = ['# frame\tclass\tappearance\tconfidence\tmotion\tcombined\trescored']
    for pp in proposals:
        lines.append('\t'.join([str(pp.frame_index), str(pp.classname)] +
                               ['{0:.10g}'.format(vv) for vv in
                                (pp.appearance_score, pp.classifier_confidence,
                                 pp.motion_score, pp.combined_score, pp.rescored)]))
    _writelines(lines, path)


def write_windows(proposals, size, margin, path):
    """ Classifier windows: each proposal box grown by margin pixels. """

    lines = ['# frame\tclass\tx0\ty0\tx1\ty1']
    for pp in proposals:
        box = regions.expand_box(pp.box, margin, size)
        lines.append('\t'.join(str(vv) for vv in (pp.frame_index, pp.classname,
                                                  box.x0, box.y0, box.x1, box.y1)))
    _writelines(lines, path)


def write_regenerated(proposals, path):
    lines = ['# frame\trle\tconfidence\tlevel']
    for pp in proposals:
        lines.append('\t'.join([str(pp.frame_index), pp.mask.to_string(),
                                '{0:.10g}'.format(pp.confidence),
                                '{0:.10g}'.format(pp.source_level)]))
    _writelines(lines, path)


def write_tracks(tracks, path):
    """ One line per track: id, phi, absorbing frames, absorbed count. """

    lines = ['# id\tphi\tframes\tnabsorbed']
    for track in tracks:
        lines.append('\t'.join([str(track.id), '{0:.10g}'.format(track.phi),
                                ','.join(str(ff) for ff in track.frames),
                                str(len(track.absorbed))]))
    _writelines(lines, path)


def write_selection(result, path):
    lines = ['# selected\tobjective\tgains',
             '\t'.join([','.join(str(ii) for ii in result.selected),
                        '{0:.10g}'.format(result.objective_value),
                        ','.join('{0:.10g}'.format(gg) for gg in result.gain_trace)])]
    _writelines(lines, path)


def read_instance(path):
    """ Read a selection instance: header "n delta lambda K", then n rows of
    "phi w_i0 ... w_i(n-1)".
    """

    from trackcut import selection

    with open(path, 'r') as fp:
        rows = [line.split() for line in fp
                if line.strip() and not line.startswith('#')]

    if not rows or len(rows[0]) != 4:
        raise ValueError("{0}: header must be 'n delta lambda K'".format(path))
    n = int(rows[0][0])
    delta, lam = float(rows[0][1]), float(rows[0][2])
    budget = int(rows[0][3])
    body = rows[1:]
    if len(body) != n or any(len(row) != n + 1 for row in body):
        raise ValueError("{0}: expected {1} rows of {2} values".format(path, n, n + 1))

    values = np.array([[float(vv) for vv in row] for row in body]).reshape(n, n + 1)
    return selection.SelectionInstance(values[:, 1:], values[:, 0], delta=delta,
                                       lam=lam, budget=budget)


def write_instance(inst, path):
    lines = ['{0} {1!r} {2!r} {3}'.format(inst.n, inst.delta, inst.lam, inst.budget)]
    for ii in range(inst.n):
        lines.append(' '.join(repr(float(vv)) for vv in [inst.phi[ii]] + list(inst.w[ii])))
    _writelines(lines, path)


def _writelines(lines, path):
    with open(path, 'w') as fp:
        fp.write('\n'.join(lines) + '\n')


def _write_binary_map(header, arr, dtype, path):
    height, width = arr.shape
    with open(path, 'wb') as fp:
        fp.write('{0} {1} {2}\n'.format(header, width, height).encode('ascii'))
        fp.write(np.ascontiguousarray(arr, dtype=dtype).tobytes())


def _read_binary_map(header, dtype, path):
    with open(path, 'rb') as fp:
        first = fp.readline().decode('ascii').split()
        if len(first) != 3 or first[0] != header:
            raise ValueError("{0} is not a {1} file".format(path, header))
        width, height = int(first[1]), int(first[2])
        data = np.frombuffer(fp.read(), dtype=dtype)

    if data.size != width*height:
        raise ValueError("{0}: expected {1} values, found {2}"
                         .format(path, width*height, data.size))
    return data.reshape(height, width)


def write_fmap(densemap, path):
    """ Dense map as "FMAP w h" then little-endian float32 row-major. """
    _write_binary_map(fmapheader, densemap.values, '<f4', path)


def read_fmap(path, size=None):
    values = _read_binary_map(fmapheader, '<f4', path).astype(np.float64)
    densemap = regions.DenseMap.from_array(values)
    if size is not None and densemap.size != size:
        raise ValueError("{0}: map size {1} does not match frame size {2}"
                         .format(path, densemap.size, size))
    return densemap


def write_imap(arr, path):
    """ Integer map as "IMAP w h" then little-endian int32 row-major. """
    _write_binary_map(imapheader, np.asarray(arr), '<i4', path)


def read_imap(path, size=None):
    arr = _read_binary_map(imapheader, '<i4', path).astype(np.int32)
    if size is not None and arr.shape != size.shape:
        raise ValueError("{0}: map shape {1} does not match frame {2}"
                         .format(path, arr.shape, size.shape))
    return arr


def read_frame(path, size=None):
    """ RGB png as floats in [0, 1]; alpha is dropped. """

    img = np.asarray(mpimg.imread(path), dtype=np.float64)
    if img.ndim == 2:
        img = np.stack([img]*3, axis=2)
    img = img[..., :3]
    if img.max() > 1.:
        img = img/255.
    if size is not None and img.shape[:2] != size.shape:
        raise ValueError("{0}: frame shape {1} does not match {2}"
                         .format(path, img.shape[:2], size.shape))
    return img


def write_frame(img, path):
    mpimg.imsave(path, np.clip(img, 0., 1.), format='png')


def read_video(st):
    """ Read every per-frame input of a video described by a State.
    Returns a dict with frames, motion maps, flow pairs, superpixel maps,
    ground truth (None on unannotated frames) and proposals.
    """

    meta = st.metadata
    size = st.frame_size

    video = {}
    video['frames'] = [read_frame(path, size) for path in meta.frames]
    video['motion'] = [read_fmap(path, size) for path in meta.motion]
    video['flows'] = [(read_fmap(pu, size), read_fmap(pv, size))
                      for (pu, pv) in zip(meta.flow_u, meta.flow_v)]
    video['superpixels'] = [read_imap(path, size) for path in meta.superpixels]
    video['groundtruth'] = [read_imap(path, size) if path else None
                            for path in meta.groundtruth]
    video['proposals'] = read_proposals(meta.proposals, size=size, classes=meta.classes,
                                        featuredim=meta.featuredim)

    outside = [pp.frame_index for pp in video['proposals']
               if not 0 <= pp.frame_index < meta.nframes]
    if outside:
        raise ValueError("proposals on frames {0} outside video of {1} frames"
                         .format(sorted(set(outside)), meta.nframes))

    logger.info("Read video {0}: {1} frames, {2} proposals"
                .format(meta.videoid, len(video['frames']), len(video['proposals'])))

    return video


def outpath(st, name):
    return os.path.join(st.outdir, name)
