from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import os.path
import pytest
import trackcut


def write(path, content):
    with open(path, 'wb') as fp:
        fp.write(content)


@pytest.fixture
def outdirs(tmpdir):
    dir1, dir2 = tmpdir.mkdir('one'), tmpdir.mkdir('two')
    for dd in (dir1, dir2):
        write(str(dd.join('labels_0.imap')), b'IMAP 1 1\n\x00\x00\x00\x00')
        write(str(dd.join('tracks_object.txt')), b'# id\n')
    return str(dir1), str(dir2)


def test_same(outdirs):
    assert trackcut.reproduce.compare_outputs(*outdirs) == []


def test_changed(outdirs):
    write(os.path.join(outdirs[1], 'labels_0.imap'), b'IMAP 1 1\n\x01\x00\x00\x00')
    assert trackcut.reproduce.compare_outputs(*outdirs) == ['labels_0.imap']


def test_missing(outdirs):
    os.remove(os.path.join(outdirs[0], 'tracks_object.txt'))
    assert trackcut.reproduce.compare_outputs(*outdirs) == ['tracks_object.txt']


def test_skipped(outdirs):
    write(os.path.join(outdirs[0], 'preferences.yml'), b'trackcut: {}\n')
    write(os.path.join(outdirs[1], 'summary.png'), b'png')
    assert trackcut.reproduce.compare_outputs(*outdirs) == []


def test_needs_preferences(tmpdir):
    with pytest.raises(IOError):
        trackcut.reproduce.reproduce(str(tmpdir))
