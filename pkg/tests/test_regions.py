from __future__ import print_function, division, absolute_import, unicode_literals

import pytest
import numpy as np
import trackcut
from trackcut import regions


@pytest.fixture(scope="module")
def frame():
    return regions.FrameSize(64, 64)


def test_iou_identical():
    box = regions.BoundingBox(3, 4, 10, 12)
    assert regions.iou(box, box) == 1.


def test_iou_disjoint():
    assert regions.iou(regions.BoundingBox(0, 0, 2, 2), regions.BoundingBox(5, 5, 7, 7)) == 0.


def test_iou_partial():
    a = regions.BoundingBox(0, 0, 2, 2)
    b = regions.BoundingBox(1, 0, 3, 2)
    assert regions.iou(a, b) == pytest.approx(1/3.)


def test_degenerate_box():
    with pytest.raises(ValueError):
        regions.BoundingBox(5, 5, 5, 10)


def test_expand_zero(frame):
    box = regions.BoundingBox(5, 5, 10, 10)
    assert regions.expand_box(box, 0, frame) == box


def test_expand_margin(frame):
    box = regions.BoundingBox(5, 5, 10, 10)
    assert regions.expand_box(box, 10, frame) == regions.BoundingBox(0, 0, 20, 20)


def test_expand_border():
    small = regions.FrameSize(4, 4)
    box = regions.BoundingBox(0, 0, 4, 4)
    assert regions.expand_box(box, 2, small) == box


def test_clamp_keeps_pixel(frame):
    box = regions.BoundingBox(70, 70, 80, 80).clamp(frame)
    assert box.area == 1 and box.x1 == 64


def test_mask_area():
    size = regions.FrameSize(4, 4)
    assert regions.mask_area(regions.BinaryMask(size, [])) == 0
    assert regions.mask_area(regions.BinaryMask.from_array(np.ones((4, 4)))) == 16
    assert regions.mask_area(regions.BinaryMask(size, [(0, 3), (6, 5)])) == 8


def test_mask_from_array():
    arr = np.zeros((5, 6), dtype=bool)
    arr[1:3, 2:5] = True
    mask = regions.BinaryMask.from_array(arr)
    assert mask.runs == ((8, 3), (14, 3))
    assert (mask.to_array() == arr).all()
    assert mask.box == regions.BoundingBox(2, 1, 5, 3)


def test_mask_string():
    mask = regions.BinaryMask.from_string('6 5; 8:3 14:3')
    assert mask.size == regions.FrameSize(6, 5)
    assert mask.to_string() == '6 5; 8:3 14:3'


def test_bad_runs():
    size = regions.FrameSize(4, 4)
    with pytest.raises(ValueError):
        regions.BinaryMask(size, [(4, 2), (3, 1)])
    with pytest.raises(ValueError):
        regions.BinaryMask(size, [(14, 3)])


def test_empty_box():
    assert regions.BinaryMask(regions.FrameSize(4, 4), []).box is None


def test_densemap_checks():
    size = regions.FrameSize(3, 2)
    with pytest.raises(ValueError):
        regions.DenseMap(size, np.zeros((3, 2)))
    with pytest.raises(ValueError):
        regions.DenseMap(size, np.full((2, 3), np.nan))
    assert regions.DenseMap.zeros(size).values.sum() == 0


def test_normalize_feature():
    assert np.linalg.norm(regions.normalize_feature([3., 4.])) == pytest.approx(1.)
    assert (regions.normalize_feature(np.zeros(3)) == 0).all()


def test_proposal(frame):
    mask = regions.BinaryMask.from_box(regions.BoundingBox(2, 2, 6, 6), frame)
    prop = regions.RegionProposal(frame_index=0, mask=mask, appearance_score=1.,
                                  classifier_confidence=0.5, feature=[0.6, 0.8])
    assert prop.box == regions.BoundingBox(2, 2, 6, 6)
    assert prop.motion_score is None


def test_proposal_errors(frame):
    mask = regions.BinaryMask.from_box(regions.BoundingBox(2, 2, 6, 6), frame)
    with pytest.raises(ValueError):
        regions.RegionProposal(frame_index=0, mask=regions.BinaryMask(frame, []),
                               appearance_score=1., classifier_confidence=0.5, feature=[1.])
    with pytest.raises(ValueError):
        regions.RegionProposal(frame_index=0, mask=mask, appearance_score=1.,
                               classifier_confidence=1.5, feature=[1.])
    with pytest.raises(ValueError):
        regions.RegionProposal(frame_index=0, mask=mask, appearance_score=1.,
                               classifier_confidence=0.5, feature=[1., 1.])
