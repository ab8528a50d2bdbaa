from __future__ import print_function, division, absolute_import, unicode_literals
from io import open

import attr
import yaml
import json
from os import getcwd
from collections import OrderedDict
import hashlib
from trackcut.version import __version__

import logging
logger = logging.getLogger(__name__)

stages = ['score', 'pool', 'regen', 'track', 'select', 'segment']
baselines = ['pool', 'track']


# to parse tuples in yaml
class PrettySafeLoader(yaml.SafeLoader):
    def construct_python_tuple(self, node):
        return tuple(self.construct_sequence(node))
PrettySafeLoader.add_constructor(u'tag:yaml.org,2002:python/tuple',
                                 PrettySafeLoader.construct_python_tuple)


@attr.s
class Preferences(object):
    """ Preferences express half of info needed to
    define state. Using preferences with a video manifest produces a unique
    state and pipeline outcome.
    """

    trackcut_version = attr.ib(default=__version__)

    # scoring and pooling
    normalization = attr.ib(default='per_frame_max')  # 'per_frame_max' or 'per_frame_minmax'
    epsilon = attr.ib(default=1e-12)  # zero test for normalisation denominators
    pool_weight = attr.ib(default='rescored')  # 'rescored' or 'classifier' weight in pooling
    box_margin = attr.ib(default=10)  # in pixels; classifier window around proposal box

    # regeneration and mining
    levels = attr.ib(default=10)  # number of thresholds k/(levels+1)
    connectivity = attr.ib(default='eight')  # 'four' or 'eight'
    iou_absorb = attr.ib(default=0.5)  # box IoU to absorb a proposal into a track
    min_region_area = attr.ib(default=9)  # in pixels
    mining_seed = attr.ib(default=0)

    # selection
    delta = attr.ib(default=0.3)  # cost of opening a facility
    lam = attr.ib(default=1.0)  # weight of track confidence term
    budget = attr.ib(default=None)  # max selected tracks per class; None means all
    lazy = attr.ib(default=True)  # lazy greedy

    # segmentation
    lambda_o = attr.ib(default=1.0)  # semantic unary weight
    lambda_p = attr.ib(default=0.5)  # pairwise weight
    gmm_components = attr.ib(default=5)
    gmm_seed = attr.ib(default=0)
    gmm_maxiter = attr.ib(default=100)
    gmm_tol = attr.ib(default=1e-6)
    eps_cov = attr.ib(default=1e-4)  # covariance floor
    eps_prob = attr.ib(default=1e-8)  # probability floor in -log costs
    fg_threshold = attr.ib(default=0.5)  # confidence to sample foreground colours
    bg_threshold = attr.ib(default=0.5)  # confidence below which background colours are sampled
    grid_step = attr.ib(default=4)  # in pixels; grid superpixels when none supplied

    # processing
    stop_after = attr.ib(default=None)  # stage name
    baseline = attr.ib(default=None)  # None, 'pool' or 'track'
    jobs = attr.ib(default=1)  # parallel videos
    saveplots = attr.ib(default=False)
    workdir = attr.ib(default=getcwd())  # set upon import
    fileroot = attr.ib(default=None)
    loglevel = attr.ib(default='INFO')

    @property
    def ordered(self):
        """ Get OrderedDict of preferences sorted by key
        """

        keys = sorted(self.__dict__)
        return OrderedDict([(key, self.__dict__[key]) for key in keys])

    @property
    def json(self):
        """ json string that can be hashed.
        "workdir" and "jobs" do not change outcomes and are ignored in
        json/name properties.
        """

        excludekeys = ["workdir", "jobs"]
        ordered2 = OrderedDict([(key, value)
                                for (key, value) in self.ordered.items()
                                if key not in excludekeys])
        return json.dumps(ordered2).encode('utf-8')

    @property
    def name(self):
        """ Unique name for an instance of preferences.
        """

        return hashlib.md5(self.json).hexdigest()


def parsejson(jsonstring):
    """ Take json string and creates preference object.
    """

    inprefs = json.loads(jsonstring)
    return Preferences(**inprefs)


def parsepreffile(preffile=None, name=None, inprefs=None):
    """ Read preference file and set parameter values.
    Full file name needed.
    name can be used to select a parameter set if multiple are defined in the
    yaml file.
    """

    # define baseline dicts
    prefs = {}
    if inprefs is None:
        inprefs = {}

    # optionally overload
    if preffile:
        ptype = preffiletype(preffile)

        if ptype == 'yaml':
            prefs = _parsepref_yaml(preffile, name=name)
        elif ptype == 'old':
            prefs = _parsepref_old(preffile)
        else:
            logger.warning('Preffile type ({0}) not recognized.'.format(preffile))

    # optionall overload
    for key in inprefs:
        prefs[key] = inprefs[key]

    return prefs


def parsevalue(value):
    """ Interpret a string from a flat preference file or the command line.
    """

    value = value.strip()
    try:
        parsed = yaml.load(value, Loader=PrettySafeLoader)
    except yaml.YAMLError:
        return value
    if parsed is None and value.lower() not in ('none', 'null', '~', ''):
        return value
    if isinstance(parsed, str):
        if parsed.lower() == 'none':
            return None
        # yaml reads exponents without a dot (1e-12) as strings
        try:
            return float(parsed)
        except ValueError:
            return parsed
    return parsed


def _parsepref_old(preffile):
    """ Parse flat parameter file of "key = value" lines.
    """

    pars = {}
    with open(preffile, 'r') as fp:
        for line in fp.readlines():
            # trim out comments and trailing cr
            line_clean = line.rstrip('\n').split('#')[0]
            if line_clean and '=' in line_clean:   # use valid lines only
                attribute, value = line_clean.split('=', 1)
                pars[attribute.strip()] = parsevalue(value)

    return pars


def _parsepref_yaml(preffile, name=None):
    """ Parse parameter file from yaml format.
    """

    name = 'default' if not name else name
    logger.info("Parsing preffile for preference set {0}".format(name))

    with open(preffile, 'r') as fp:
        yamlpars = yaml.load(fp, Loader=PrettySafeLoader)
        pars = yamlpars['trackcut'][name]

    return dict(pars) if pars else {}


def preffiletype(preffile):
    """ Infer type from first uncommented line in preffile
    """

    line = ''
    with open(preffile, 'r') as fp:
        for rawline in fp:
            line = rawline.split('#')[0].strip()
            if line:
                break

    if '=' in line:
        return 'old'
    elif ':' in line:
        return 'yaml'
    else:
        return None


def writepreffile(prefs, preffile, name='default'):
    """ Save preferences as a yaml preference set, readable by parsepreffile.
    """

    with open(preffile, 'w') as fp:
        yaml.safe_dump({'trackcut': {name: dict(prefs.ordered)}}, fp,
                       default_flow_style=False)
