from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import glob
import os.path
import tempfile

import logging
logger = logging.getLogger(__name__)


def reproduce(outdir, workdir=None):
    """ Re-run a video from the preferences and manifest saved in outdir and
    compare the new outputs with the saved ones byte for byte.
    Returns the list of differing file names (empty when reproduced).
    """

    from trackcut import state, pipeline, preferences

    preffile = os.path.join(outdir, 'preferences.yml')
    manifest = os.path.join(outdir, 'manifest.txt')
    for path in (preffile, manifest):
        if not os.path.exists(path):
            raise IOError("Cannot reproduce without {0}".format(path))

    prefs = preferences.parsepreffile(preffile)
    workdir = workdir or tempfile.mkdtemp(prefix='trackcut_')
    prefs['workdir'] = workdir
    prefs['fileroot'] = os.path.basename(os.path.normpath(outdir))

    st = state.State(manifest=manifest, inprefs=prefs, showsummary=False)
    pipeline.pipeline_video(st)

    differing = compare_outputs(outdir, st.outdir)
    if differing:
        logger.warning("Outputs differ from {0}: {1}".format(outdir, ', '.join(differing)))
    else:
        logger.info("Reproduced outputs of {0}".format(outdir))

    return differing


def compare_outputs(dir1, dir2, skip=('preferences.yml', 'manifest.txt', 'summary.png')):
    """ Names of output files that are missing from, or not byte-identical
    in, one of two output directories.
    """

    names1 = set(os.path.basename(path) for path in glob.glob(os.path.join(dir1, '*')))
    names2 = set(os.path.basename(path) for path in glob.glob(os.path.join(dir2, '*')))

    differing = sorted((names1 ^ names2) - set(skip))
    for name in sorted((names1 & names2) - set(skip)):
        with open(os.path.join(dir1, name), 'rb') as fp1, open(os.path.join(dir2, name), 'rb') as fp2:
            if fp1.read() != fp2.read():
                differing.append(name)

    return sorted(differing)
