from __future__ import print_function, division, absolute_import, unicode_literals

import os
from contextlib import contextmanager
import attr
import numpy as np

import logging
logger = logging.getLogger(__name__)


class StageError(Exception):
    """ Failure inside a pipeline stage. Earlier outputs stay on disk. """

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super(StageError, self).__init__(stage, cause)

    def __str__(self):
        return "stage {0} failed: {1}".format(self.stage, self.cause)


@contextmanager
def stage(name):
    logger.info("Starting stage {0}".format(name))
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        logger.error("Stage {0} failed: {1}".format(name, exc))
        raise StageError(name, exc)


@attr.s
class PipelineResult(object):
    """ What a run produced. Fields are None for stages that did not run.
    """

    videoid = attr.ib()
    stopped_after = attr.ib(default=None)
    pooled = attr.ib(default=None)  # class -> list of DenseMap
    tracks = attr.ib(default=None)  # class -> list of Track
    selection = attr.ib(default=None)  # class -> SelectionResult
    confidence = attr.ib(default=None)  # class -> list of DenseMap
    labelmaps = attr.ib(default=None)
    report = attr.ib(default=None)


def pipeline_video(st, video=None):
    """ Run the stages on one video:
    score, pool, regen, track, select (and pool selected tracks), segment.
    st.prefs.stop_after ends the run after the named stage.
    st.prefs.baseline skips stages: 'pool' segments the pooled proposal
    maps, 'track' segments maps pooled over all mined tracks.
    """

    from trackcut import preferences, source

    if video is None:
        video = source.read_video(st)

    if not os.path.exists(st.outdir):
        os.makedirs(st.outdir)
    preferences.writepreffile(st.prefs, source.outpath(st, 'preferences.yml'))
    if not st.metadata.atdefaults():
        from trackcut import metadata
        metadata.write_manifest(st.metadata, source.outpath(st, 'manifest.txt'))

    result = PipelineResult(videoid=st.metadata.videoid)
    prefs = st.prefs

    with stage('score'):
        scored = score_stage(st, video)
    if prefs.stop_after == 'score':
        return _stopped(result, 'score')

    with stage('pool'):
        result.pooled = pool_stage(st, scored)
    if prefs.stop_after == 'pool':
        return _stopped(result, 'pool')

    if prefs.baseline == 'pool':
        result.confidence = result.pooled
    else:
        with stage('regen'):
            regenerated = regen_stage(st, scored, result.pooled)
        if prefs.stop_after == 'regen':
            return _stopped(result, 'regen')

        with stage('track'):
            result.tracks = track_stage(st, video, regenerated)
        if prefs.stop_after == 'track':
            return _stopped(result, 'track')

        with stage('select'):
            result.selection, result.confidence = select_stage(st, result.tracks)
        if prefs.stop_after == 'select':
            return _stopped(result, 'select')

    with stage('segment'):
        result.labelmaps = segment_stage(st, video, result.confidence)

    if len(st.metadata.annotated):
        from trackcut import evaluation
        result.report = evaluation.evaluate(result.labelmaps, video['groundtruth'],
                                            classes=st.classes, videoid=st.metadata.videoid)
        evaluation.write_report(result.report, source.outpath(st, 'report.yml'))

    if prefs.saveplots:
        from trackcut import evaluation
        first = st.classes[0]
        evaluation.plot_summary(video['frames'],
                                [mm.values for mm in result.pooled[first]],
                                [mm.values for mm in result.confidence[first]],
                                result.labelmaps, source.outpath(st, 'summary.png'))

    result.stopped_after = 'segment'
    return result


def _stopped(result, name):
    logger.info("Stopping after stage {0}".format(name))
    result.stopped_after = name
    return result


def score_stage(st, video):
    """ Motion, combined and rescored scores for every proposal. """

    from trackcut import scoring, source

    scored = scoring.score_proposals(video['proposals'], video['motion'], st.scoring_config)
    source.write_scored(scored, source.outpath(st, 'scored.txt'))
    source.write_windows(scored, st.frame_size, int(st.prefs.box_margin),
                         source.outpath(st, 'windows.txt'))
    return scored


def _by_class_frame(st, proposals):
    grouped = {(cl, tt): [] for cl in st.classes for tt in range(st.metadata.nframes)}
    for pp in proposals:
        grouped[(pp.classname, pp.frame_index)].append(pp)
    return grouped


def pool_stage(st, scored):
    """ Per class and frame, pool proposal masks weighted by rescored score
    (or classifier confidence).
    """

    from trackcut import pooling, source

    grouped = _by_class_frame(st, scored)
    pooled = {}
    for cl in st.classes:
        pooled[cl] = []
        for tt in range(st.metadata.nframes):
            props = grouped[(cl, tt)]
            if st.prefs.pool_weight == 'classifier':
                weighted = [(pp.mask, pp.classifier_confidence) for pp in props]
            else:
                weighted = [(pp.mask, pp.rescored) for pp in props]
            densemap = pooling.pool_frame(weighted, size=st.frame_size)
            pooled[cl].append(densemap)
            source.write_fmap(densemap, source.outpath(st, 'pooled_{0}_{1}.fmap'.format(cl, tt)))

    return pooled


def regen_stage(st, scored, pooled):
    from trackcut import mining, source

    cfg = st.mining_config
    grouped = _by_class_frame(st, scored)
    regenerated = {}
    for cl in st.classes:
        regenerated[cl] = []
        for tt, densemap in enumerate(pooled[cl]):
            regenerated[cl] += mining.regenerate(densemap, cfg, frame_index=tt,
                                                 sources=grouped[(cl, tt)], classname=cl)
        logger.info("Regenerated {0} proposals for class {1}"
                    .format(len(regenerated[cl]), cl))
        source.write_regenerated(regenerated[cl],
                                 source.outpath(st, 'regen_{0}.txt'.format(cl)))

    return regenerated


def track_stage(st, video, regenerated):
    from trackcut import mining, source

    cfg = st.mining_config
    tracker = mining.FlowShiftTracker(video['flows'], size=st.frame_size)
    tracks = {}
    for cl in st.classes:
        tracks[cl] = mining.mine_tracks(regenerated[cl], tracker, cfg,
                                        nframes=st.metadata.nframes)
        source.write_tracks(tracks[cl], source.outpath(st, 'tracks_{0}.txt'.format(cl)))

    return tracks


def select_stage(st, tracks):
    """ Select tracks per class and pool the selected tracks into confidence
    maps. With baseline 'track' every mined track is kept.
    """

    from trackcut import selection, pooling, source

    frames = list(range(st.metadata.nframes))
    selected = {}
    confidence = {}
    for cl in st.classes:
        cltracks = tracks[cl]
        if st.prefs.baseline == 'track':
            result = selection.SelectionResult(range(len(cltracks)), 0.)
        elif cltracks:
            inst = selection.build_instance(cltracks, delta=st.prefs.delta, lam=st.prefs.lam,
                                            budget=st.budget_for(len(cltracks)))
            result = selection.greedy_select(inst, lazy=st.prefs.lazy)
        else:
            logger.warning("No tracks for class {0}; nothing to select.".format(cl))
            result = selection.SelectionResult((), 0.)

        selected[cl] = result
        source.write_selection(result, source.outpath(st, 'selection_{0}.txt'.format(cl)))

        pooled = pooling.pool_tracks([cltracks[ii] for ii in result.selected], frames,
                                     st.frame_size)
        confidence[cl] = [pf.map for pf in pooled]
        for pf in pooled:
            source.write_fmap(pf.map, source.outpath(st, 'confidence_{0}_{1}.fmap'
                                                     .format(cl, pf.frame_index)))

    return selected, confidence


def superpixel_maps(st, video):
    from trackcut import superpixels

    if len(video['superpixels']):
        return video['superpixels']
    grid = superpixels.grid_superpixels(st.frame_size, int(st.prefs.grid_step))
    return [grid]*st.metadata.nframes


def segment_stage(st, video, confidence):
    """ Per-frame label maps from class confidence maps.
    Label 0 is background; label k+1 is the k-th class tag.
    """

    from trackcut import superpixels, pooling, segmentation, source

    spmaps = superpixel_maps(st, video)
    graph = superpixels.build_graph(spmaps, video['frames'], video['flows'])

    nodeconf = np.zeros((len(st.classes), graph.nnodes))
    for kk, cl in enumerate(st.classes):
        for tt in range(st.metadata.nframes):
            nodes = graph.frame_nodes(tt)
            nodeconf[kk, nodes] = pooling.reduce_to_superpixels(confidence[cl][tt],
                                                                graph.labelmaps[tt])

    segmented = segmentation.segment_video(graph, nodeconf, st.segmentation_config)
    for tt, labels in enumerate(segmented.labelmaps):
        source.write_imap(labels, source.outpath(st, 'labels_{0}.imap'.format(tt)))

    return segmented.labelmaps


def run_pipeline(manifest, preffile=None, name=None, inprefs=None):
    """ Build a State for one manifest and run it. """

    from trackcut import state

    st = state.State(manifest=manifest, preffile=preffile, name=name, inprefs=inprefs)
    return pipeline_video(st)


def run_videos(manifests, preffile=None, name=None, inprefs=None, jobs=1):
    """ Run several videos, in parallel processes when jobs > 1.
    Returns the per-video results and the combined EvalReport (None when no
    video has ground truth).
    """

    from trackcut import evaluation

    if jobs > 1 and len(manifests) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(run_pipeline, manifest, preffile, name, inprefs)
                       for manifest in manifests]
            results = [future.result() for future in futures]
    else:
        results = [run_pipeline(manifest, preffile, name, inprefs) for manifest in manifests]

    reports = [result.report for result in results if result.report is not None]
    combined = evaluation.combine_reports(reports) if reports else None
    if combined is not None:
        logger.info("Class average IoU {0:.3f}, video average IoU {1:.3f} over {2} video{3}"
                    .format(combined.class_average, combined.video_average,
                            len(reports), 's'[not len(reports)-1:]))

    return results, combined
