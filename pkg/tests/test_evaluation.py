from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import pytest
import yaml
import numpy as np
import trackcut
from trackcut import evaluation


@pytest.fixture(scope="module")
def square():
    gt = np.zeros((8, 8), dtype=np.int32)
    gt[2:6, 2:6] = 1
    return gt


def test_exact(square):
    report = evaluation.evaluate([square, square], [square, square], classes=['object'])
    assert report.class_iou == {'object': 1.}
    assert report.class_average == 1. and report.video_average == 1.


def test_background(square):
    report = evaluation.evaluate([np.zeros_like(square)], [square], classes=['object'])
    assert report.class_iou['object'] == 0.


def test_half(square):
    pred = np.zeros_like(square)
    pred[2:6, 4:8] = 1  # half the square, equal area outside it
    report = evaluation.evaluate([pred], [square], classes=['object'])
    assert report.class_iou['object'] == pytest.approx(1/3.)


def test_unannotated(square):
    pred = np.zeros_like(square)
    report = evaluation.evaluate([square, pred], [square, None], classes=['object'])
    assert report.class_iou['object'] == 1.
    assert report.frame_iou['object'] == [('video', 0, 1.)]

    with pytest.raises(ValueError):
        evaluation.evaluate([square], [None])


def test_shape(square):
    with pytest.raises(ValueError):
        evaluation.evaluate([square[:4]], [square])


def test_multiclass():
    gt = np.array([[1, 1, 2, 2], [0, 0, 2, 2]])
    pred = np.array([[1, 0, 2, 2], [0, 0, 2, 2]])
    report = evaluation.evaluate([pred], [gt], classes=['cat', 'dog'], videoid='v')
    assert report.class_iou == {'cat': 0.5, 'dog': 1.}
    assert report.video_iou == {'v': 0.75}


def test_relabel():
    rng = np.random.RandomState(0)
    gt = rng.randint(0, 4, size=(6, 6))
    pred = rng.randint(0, 4, size=(6, 6))
    perm = np.array([0, 3, 1, 2])
    report = evaluation.evaluate([pred], [gt], classes=['a', 'b', 'c'])
    permuted = evaluation.evaluate([perm[pred]], [perm[gt]], classes=['b', 'c', 'a'])
    assert permuted.class_iou == pytest.approx(report.class_iou)


def test_combine(square):
    pred = np.zeros_like(square)
    pred[2:6, 4:8] = 1
    first = evaluation.evaluate([square], [square], classes=['object'], videoid='a')
    second = evaluation.evaluate([pred], [square], classes=['object'], videoid='b')
    combined = evaluation.combine_reports([first, second])

    assert combined.class_iou['object'] == pytest.approx((16 + 8)/(16 + 24.))
    assert combined.video_iou == pytest.approx({'a': 1., 'b': 1/3.})
    assert combined.video_average == pytest.approx(2/3.)


def test_write(square, tmpdir):
    path = str(tmpdir.join('report.yml'))
    evaluation.write_report(evaluation.evaluate([square], [square], classes=['object']), path)
    with open(path, 'r') as fp:
        report = yaml.safe_load(fp)
    assert report['class_iou'] == {'object': 1.}
    assert report['class_average'] == 1.


def test_plot(square, tmpdir):
    path = str(tmpdir.join('summary.png'))
    frames = [np.zeros((8, 8, 3))]*2
    maps = [square.astype(float)]*2
    evaluation.plot_summary(frames, maps, maps, [square]*2, path)
    assert tmpdir.join('summary.png').check()
