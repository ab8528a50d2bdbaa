from __future__ import absolute_import

__all__ = ['regions', 'scoring', 'pooling', 'mining', 'selection',
           'superpixels', 'graphcut', 'segmentation', 'preferences',
           'metadata', 'state', 'source', 'pipeline', 'evaluation',
           'simulate', 'reproduce']


from trackcut import *
from trackcut.version import __version__
import logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
