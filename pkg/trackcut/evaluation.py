from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

from collections import OrderedDict
import attr
import numpy as np
import yaml

import logging
logger = logging.getLogger(__name__)


@attr.s
class EvalReport(object):
    """ Segmentation accuracy as intersection over union.
    class_iou maps class name to IoU over every annotated pixel of every
    annotated frame; video_iou maps video id to the mean of its class IoUs.
    counts keeps (intersection, union) per class so reports can be merged.
    """

    class_iou = attr.ib(default=attr.Factory(OrderedDict))
    video_iou = attr.ib(default=attr.Factory(OrderedDict))
    frame_iou = attr.ib(default=attr.Factory(OrderedDict))  # class -> [(video, frame, iou)]
    counts = attr.ib(default=attr.Factory(OrderedDict))

    @property
    def class_average(self):
        return float(np.mean(list(self.class_iou.values()))) if self.class_iou else 0.

    @property
    def video_average(self):
        return float(np.mean(list(self.video_iou.values()))) if self.video_iou else 0.

    def todict(self):
        return OrderedDict([('class_iou', dict(self.class_iou)),
                            ('video_iou', dict(self.video_iou)),
                            ('class_average', self.class_average),
                            ('video_average', self.video_average),
                            ('frame_iou', {name: [list(entry) for entry in entries]
                                           for (name, entries) in self.frame_iou.items()})])


def _label_names(classes, labels):
    if classes is None:
        return OrderedDict((int(ll), str(int(ll))) for ll in labels)
    return OrderedDict((int(ll), classes[int(ll)-1] if 0 < ll <= len(classes) else str(int(ll)))
                       for ll in labels)


def evaluate(pred, gt, classes=None, videoid='video'):
    """ Compare predicted and ground-truth label maps frame by frame.
    Frames whose gt is None are skipped. Label 0 is background and is not
    scored; classes names labels 1..C.
    """

    pairs = [(tt, np.asarray(pp), np.asarray(gg)) for (tt, (pp, gg)) in enumerate(zip(pred, gt))
             if gg is not None]
    if not pairs:
        raise ValueError("no annotated frames to evaluate")

    labels = set()
    for tt, pp, gg in pairs:
        if pp.shape != gg.shape:
            raise ValueError("frame {0}: prediction shape {1} does not match ground truth {2}"
                             .format(tt, pp.shape, gg.shape))
        labels.update(np.unique(pp).tolist())
        labels.update(np.unique(gg).tolist())
    labels.discard(0)

    names = _label_names(classes, sorted(labels))
    report = EvalReport()
    for label, name in names.items():
        inter = union = 0
        frames = []
        for tt, pp, gg in pairs:
            finter = int(np.count_nonzero((pp == label) & (gg == label)))
            funion = int(np.count_nonzero((pp == label) | (gg == label)))
            inter += finter
            union += funion
            if funion:
                frames.append((videoid, tt, finter/funion))
        if union:
            report.counts[name] = (inter, union)
            report.class_iou[name] = inter/union
            report.frame_iou[name] = frames

    if report.class_iou:
        report.video_iou[videoid] = float(np.mean(list(report.class_iou.values())))

    logger.info("Evaluated {0} annotated frame{1} of {2}: class average IoU {3:.3f}"
                .format(len(pairs), 's'[not len(pairs)-1:], videoid, report.class_average))

    return report


def combine_reports(reports):
    """ Merge per-video reports: class IoU from summed counts, video IoU
    kept per video.
    """

    combined = EvalReport()
    for report in reports:
        for name, (inter, union) in report.counts.items():
            i0, u0 = combined.counts.get(name, (0, 0))
            combined.counts[name] = (i0 + inter, u0 + union)
            combined.frame_iou.setdefault(name, []).extend(report.frame_iou.get(name, []))
        combined.video_iou.update(report.video_iou)

    for name, (inter, union) in combined.counts.items():
        combined.class_iou[name] = inter/union

    return combined


def write_report(report, path):
    with open(path, 'w') as fp:
        fp.write(yaml.safe_dump(_plain(report.todict()), default_flow_style=False))


def _plain(value):
    """ Builtin types only, for yaml.safe_dump. """

    if isinstance(value, dict):
        return {str(kk): _plain(vv) for (kk, vv) in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(vv) for vv in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def plot_summary(frames, pooled, confidence, labelmaps, path):
    """ Grid of frame, pooled map, selected-track map and labeling per frame.
    """

    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    nframes = len(frames)
    fig, axes = plt.subplots(nframes, 4, figsize=(8, 2*nframes), squeeze=False)
    for tt in range(nframes):
        panels = [(frames[tt], None, 'frame'),
                  (pooled[tt], 'viridis', 'pooled'),
                  (confidence[tt], 'viridis', 'tracks'),
                  (labelmaps[tt], 'tab10', 'labels')]
        for ax, (img, cmap, title) in zip(axes[tt], panels):
            if img is not None:
                ax.imshow(img, cmap=cmap, interpolation='nearest')
            ax.set_xticks([])
            ax.set_yticks([])
            if tt == 0:
                ax.set_title(title)

    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    logger.info("Wrote summary plot to {0}".format(path))
