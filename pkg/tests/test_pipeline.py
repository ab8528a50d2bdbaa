from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import os.path
import pytest
import numpy as np
import trackcut
from trackcut import simulate, state, pipeline, source, cli

_install_dir = os.path.abspath(os.path.dirname(__file__))
preffile = os.path.join(_install_dir, 'data/trackcut.yml')


@pytest.fixture(scope="module")
def manifest(tmpdir_factory):
    outdir = str(tmpdir_factory.mktemp('videos'))
    return simulate.generate_synthetic(simulate.SceneSpec(), seed=0, outdir=outdir,
                                       videoid='square')


@pytest.fixture(scope="module")
def workdir(tmpdir_factory):
    return str(tmpdir_factory.mktemp('runs'))


def runstate(manifest, workdir, **inprefs):
    inprefs['workdir'] = workdir
    return state.State(manifest=manifest, preffile=preffile, name='synthetic',
                       inprefs=inprefs, showsummary=False)


@pytest.fixture(scope="module")
def full(manifest, workdir):
    return pipeline.pipeline_video(runstate(manifest, workdir, fileroot='full'))


def test_full_iou(full):
    assert full.stopped_after == 'segment'
    assert full.report.class_iou['object'] >= 0.9
    frames = full.report.frame_iou['object']
    assert len(frames) == 10
    assert min(iou for (_, _, iou) in frames) >= 0.9


def test_full_selection(full, manifest, workdir):
    st = runstate(manifest, workdir, fileroot='full')
    assert st.prefs.budget is None
    assert len(full.selection['object'].selected) == 1
    assert len(full.tracks['object']) >= 2
    assert all(gain > 0 for gain in full.selection['object'].gain_trace)


def test_full_outputs(full, manifest, workdir):
    outdir = os.path.join(workdir, 'full')
    for name in ['preferences.yml', 'manifest.txt', 'scored.txt', 'windows.txt',
                 'regen_object.txt', 'tracks_object.txt', 'selection_object.txt',
                 'pooled_object_0.fmap', 'confidence_object_9.fmap', 'labels_0.imap',
                 'report.yml']:
        assert os.path.exists(os.path.join(outdir, name)), name

    labels = source.read_imap(os.path.join(outdir, 'labels_3.imap'))
    assert (labels == full.labelmaps[3]).all()


def test_saved_preferences(manifest, workdir):
    st = runstate(manifest, workdir, fileroot='full')
    saved = trackcut.preferences.parsepreffile(os.path.join(workdir, 'full', 'preferences.yml'))
    assert trackcut.preferences.Preferences(**saved).name == st.prefs.name


def test_track_baseline(full, manifest, workdir):
    result = pipeline.pipeline_video(runstate(manifest, workdir, fileroot='trackbase',
                                              baseline='track'))
    assert len(result.selection['object'].selected) == len(result.tracks['object'])
    assert result.report.class_iou['object'] < full.report.class_iou['object']
    worst = min(iou for (_, _, iou) in result.report.frame_iou['object'])
    assert worst < 0.9


def test_pool_baseline(manifest, workdir):
    result = pipeline.pipeline_video(runstate(manifest, workdir, fileroot='poolbase',
                                              baseline='pool'))
    assert result.tracks is None
    assert result.labelmaps is not None
    assert 0 <= result.report.class_iou['object'] <= 1


def test_stop_after_pool(manifest, workdir):
    result = pipeline.pipeline_video(runstate(manifest, workdir, fileroot='pooled',
                                              stop_after='pool'))
    outdir = os.path.join(workdir, 'pooled')

    assert result.stopped_after == 'pool'
    assert len(result.pooled['object']) == 10
    assert result.labelmaps is None and result.report is None
    assert os.path.exists(os.path.join(outdir, 'pooled_object_9.fmap'))
    assert not os.path.exists(os.path.join(outdir, 'labels_0.imap'))


def test_deterministic(full, manifest, workdir):
    pipeline.pipeline_video(runstate(manifest, workdir, fileroot='again'))
    assert trackcut.reproduce.compare_outputs(os.path.join(workdir, 'full'),
                                              os.path.join(workdir, 'again')) == []


def test_reproduce(full, workdir, tmpdir):
    differing = trackcut.reproduce.reproduce(os.path.join(workdir, 'full'),
                                             workdir=str(tmpdir))
    assert differing == []


@pytest.fixture(scope="module")
def emptyvideo(tmpdir_factory):
    outdir = str(tmpdir_factory.mktemp('empty'))
    spec = simulate.SceneSpec(nframes=3, width=32, height=32, object_size=8,
                              clutter_size=0)
    manifest = simulate.generate_synthetic(spec, seed=0, outdir=outdir, videoid='empty')
    source.write_proposals([], os.path.join(os.path.dirname(manifest), 'proposals.txt'))
    return manifest


def test_no_proposals(emptyvideo, workdir):
    result = pipeline.pipeline_video(runstate(emptyvideo, workdir))
    assert all((labels == 0).all() for labels in result.labelmaps)
    assert result.report.class_iou['object'] == 0.


@pytest.fixture(scope="module")
def brokenvideo(tmpdir_factory):
    outdir = str(tmpdir_factory.mktemp('broken'))
    spec = simulate.SceneSpec(nframes=2, width=32, height=32, object_size=8,
                              clutter_size=0)
    manifest = simulate.generate_synthetic(spec, seed=0, outdir=outdir, videoid='broken')
    labels = np.zeros((32, 32), dtype=np.int32)
    labels[:, 16:] = 2  # label 1 has no pixels
    source.write_imap(labels, os.path.join(os.path.dirname(manifest), 'superpixels_0.imap'))
    return manifest


def test_stage_error(brokenvideo, workdir):
    with pytest.raises(pipeline.StageError) as excinfo:
        pipeline.pipeline_video(runstate(brokenvideo, workdir))
    assert excinfo.value.stage == 'segment'
    assert 'segment' in str(excinfo.value)
    assert os.path.exists(os.path.join(workdir, 'broken', 'tracks_object.txt'))


def test_run_videos(manifest, emptyvideo, workdir):
    results, combined = pipeline.run_videos([manifest, emptyvideo], preffile=preffile,
                                            name='synthetic', jobs=2,
                                            inprefs={'workdir': workdir, 'stop_after': 'select'})
    assert [result.videoid for result in results] == ['square', 'empty']
    assert all(result.stopped_after == 'select' for result in results)
    assert combined is None


def test_cli_run(manifest, workdir):
    code = cli.main(['run', manifest, '--preffile', preffile, '--prefname', 'synthetic',
                     '--outdir', workdir, '--set', 'fileroot=clirun'])
    assert code == cli.EXIT_OK
    assert os.path.exists(os.path.join(workdir, 'clirun', 'labels_9.imap'))


def test_cli_stage(manifest, workdir):
    code = cli.main(['track', manifest, '--preffile', preffile, '--prefname', 'synthetic',
                     '--outdir', workdir, '--set', 'fileroot=clitrack'])
    assert code == cli.EXIT_OK
    assert os.path.exists(os.path.join(workdir, 'clitrack', 'tracks_object.txt'))
    assert not os.path.exists(os.path.join(workdir, 'clitrack', 'selection_object.txt'))


def test_cli_eval(full, manifest, workdir, tmpdir):
    report = str(tmpdir.join('report.yml'))
    code = cli.main(['eval', manifest, os.path.join(workdir, 'full'), '--report', report])
    assert code == cli.EXIT_OK
    assert os.path.exists(report)


def test_cli_instance(tmpdir):
    path = str(tmpdir.join('instance.txt'))
    with open(path, 'w') as fp:
        fp.write('2 0.3 1.0 2\n0.9 1.0 0.5\n0.2 0.5 1.0\n')
    assert cli.main(['select', '--instance', path]) == cli.EXIT_OK


def test_cli_synth(tmpdir):
    code = cli.main(['synth', '--outdir', str(tmpdir), '--seed', '3', '--videoid', 'cli',
                     '--scene', 'nframes=3'])
    assert code == cli.EXIT_OK
    assert tmpdir.join('cli', 'manifest.txt').check()


def test_cli_input_errors(workdir):
    assert cli.main([]) == cli.EXIT_INPUT
    assert cli.main(['run', '/nonexistent/manifest.txt', '--outdir', workdir]) == cli.EXIT_INPUT
    assert cli.main(['run']) == cli.EXIT_INPUT
    assert cli.main(['synth', '--scene', 'colour=1']) == cli.EXIT_INPUT


def test_cli_unknown_pref(manifest, workdir):
    code = cli.main(['run', manifest, '--outdir', workdir, '--set', 'lamda=1'])
    assert code == cli.EXIT_INPUT


def test_cli_stage_error(brokenvideo, workdir):
    code = cli.main(['run', brokenvideo, '--preffile', preffile, '--prefname', 'synthetic',
                     '--outdir', workdir, '--set', 'fileroot=clibroken'])
    assert code == cli.EXIT_STAGE


def test_run_pipeline(manifest, workdir):
    result = pipeline.run_pipeline(manifest, preffile=preffile, name='synthetic',
                                   inprefs={'workdir': workdir, 'fileroot': 'runpipe',
                                            'stop_after': 'regen'})
    assert result.videoid == 'square'
    assert result.stopped_after == 'regen'
    assert os.path.exists(os.path.join(workdir, 'runpipe', 'regen_object.txt'))
