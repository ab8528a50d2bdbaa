#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# trackcut documentation build configuration file.

import os
import sys

here = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.dirname(here))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
]

# numerical stack is mocked so docs build from dummyreq.txt alone
autodoc_mock_imports = ['numpy', 'scipy', 'sklearn', 'numba', 'networkx', 'matplotlib',
                        'fuzzywuzzy']

source_suffix = '.rst'
master_doc = 'index'

project = u'trackcut'
copyright = u'2017, the trackcut developers'
author = u'the trackcut developers'

with open(os.path.join(here, '..', project, 'version.py')) as f:
    exec(f.read())
version = __version__
release = __version__

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

html_theme = 'alabaster'
htmlhelp_basename = 'trackcutdoc'

latex_documents = [
    (master_doc, 'trackcut.tex', u'trackcut Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'trackcut', u'trackcut Documentation', [author], 1),
]
