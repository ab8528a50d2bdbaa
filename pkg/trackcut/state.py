from __future__ import print_function, division, absolute_import, unicode_literals

import os
from trackcut import version

import logging
logger = logging.getLogger(__name__)

seedvar = 'TRACKCUT_SEED'


class State(object):
    """ Defines a pipeline run from preferences and video metadata.
    State properties are used to calculate quantities for each stage.

    Approach:
    1) initial preferences can overload state properties
    2) read metadata from the video manifest
    3) environment may override seeds
    4) run stages on the video.
    """

    def __init__(self, manifest=None, inmeta=None, preffile=None, name=None,
                 inprefs=None, showsummary=True, validate=True):
        """ Initialize preference attributes with text file, preffile.
        name can select preference set from within yaml file.
        preferences are overloaded with inprefs.

        Metadata comes from the manifest file and is overloaded by inmeta, a
        dict (e.g., to mock metadata in a test) or a Metadata object.
        validate argument will use assertions to test state.
        """

        from trackcut import preferences, metadata

        self.manifest = manifest

        # set prefs according to inprefs type
        if isinstance(inprefs, preferences.Preferences):
            self.prefs = inprefs
        else:
            # default values will result in empty dict
            prefs = preferences.parsepreffile(preffile, inprefs=inprefs,
                                              name=name)
            try:
                self.prefs = preferences.Preferences(**prefs)
            except TypeError as exc:
                from fuzzywuzzy import fuzz
                badarg = exc.args[0].split('\'')[1]
                closeprefs = [pref for pref in list(preferences.Preferences().__dict__)
                              if fuzz.ratio(badarg, pref) > 50]
                raise TypeError("Preference {0} not recognized. Did you mean {1}?"
                                .format(badarg, ', '.join(closeprefs)))

        seed = os.environ.get(seedvar)
        if seed:
            import attr
            logger.info("Using seed {0} from {1}".format(seed, seedvar))
            self.prefs = attr.evolve(self.prefs, mining_seed=int(seed),
                                     gmm_seed=int(seed))

        logging.getLogger('trackcut').setLevel(getattr(logging, self.prefs.loglevel))

        self.metadata = metadata.make_metadata(inmeta=inmeta, manifest=manifest)

        if validate:
            assert self.validate() is True

        if showsummary:
            self.summarize()

    def __repr__(self):
        return ('trackcut state with metadata/prefs ({0}/{1})'
                .format(self.metadata.videoid, self.prefs.name))

    def validate(self):
        """ Test validity of state (metadata + preferences) with assertions.
        """

        from trackcut import preferences

        prefs = self.prefs
        assert prefs.normalization in ['per_frame_max', 'per_frame_minmax'], \
            "normalization must be per_frame_max or per_frame_minmax"
        assert float(prefs.epsilon) > 0, "epsilon must be positive"
        assert prefs.pool_weight in ['rescored', 'classifier'], \
            "pool_weight must be rescored or classifier"
        assert int(prefs.box_margin) >= 0, "box_margin must be non-negative"

        assert int(prefs.levels) >= 1, "levels must be at least 1"
        assert prefs.connectivity in ['four', 'eight'], "connectivity must be four or eight"
        assert 0 < float(prefs.iou_absorb) <= 1, "iou_absorb must be in (0, 1]"
        assert int(prefs.min_region_area) >= 1, "min_region_area must be at least 1"

        assert float(prefs.delta) >= 0, "delta must be non-negative"
        assert float(prefs.lam) >= 0, "lam must be non-negative"
        assert prefs.budget is None or int(prefs.budget) >= 1, "budget must be at least 1"

        assert float(prefs.lambda_o) >= 0, "lambda_o must be non-negative"
        assert float(prefs.lambda_p) >= 0, "lambda_p must be non-negative"
        assert int(prefs.gmm_components) >= 1, "gmm_components must be at least 1"
        assert float(prefs.eps_cov) > 0 and float(prefs.eps_prob) > 0, \
            "eps_cov and eps_prob must be positive"
        assert 0 <= float(prefs.fg_threshold) <= 1 and 0 <= float(prefs.bg_threshold) <= 1, \
            "colour sampling thresholds must be in [0, 1]"
        assert int(prefs.grid_step) >= 1, "grid_step must be at least 1"

        assert prefs.stop_after is None or prefs.stop_after in preferences.stages, \
            "stop_after must be one of {0}".format(', '.join(preferences.stages))
        assert prefs.baseline is None or prefs.baseline in preferences.baselines, \
            "baseline must be one of {0}".format(', '.join(preferences.baselines))
        assert not (prefs.baseline == 'pool' and prefs.stop_after in ['regen', 'track', 'select']), \
            "baseline pool skips stage {0}; it cannot stop there".format(prefs.stop_after)
        assert int(prefs.jobs) >= 1, "jobs must be at least 1"

        if not self.metadata.atdefaults():
            assert self.metadata.validate() is True

        return True

    def summarize(self):
        """ Print summary of pipeline state """

        if self.metadata.atdefaults():
            logger.info('Metadata not set. Cannot calculate properties')
        else:
            logger.info('Metadata summary:')
            logger.info('\t Working directory and fileroot: {0}, {1}'
                        .format(self.prefs.workdir, self.fileroot))
            logger.info('\t Video {0} with {1} frame{2} of {3}x{4} pixels'
                        .format(self.metadata.videoid, self.metadata.nframes,
                                's'[not self.metadata.nframes-1:],
                                self.metadata.width, self.metadata.height))
            logger.info('\t Class tags: {0}'.format(', '.join(self.metadata.classes)))
            logger.info('\t Ground truth on {0} frame{1}'
                        .format(len(self.metadata.annotated),
                                's'[not len(self.metadata.annotated)-1:]))
            if not len(self.metadata.superpixels):
                logger.info('\t No superpixel maps. Using {0}-pixel grid.'
                            .format(self.prefs.grid_step))

            logger.info('Pipeline summary:')
            logger.info('\t Scoring with {0} normalization, pooling weight {1}'
                        .format(self.prefs.normalization, self.prefs.pool_weight))
            logger.info('\t Regenerating at {0} levels with {1}-connectivity, '
                        'absorbing at IoU {2}'
                        .format(self.prefs.levels, self.prefs.connectivity,
                                self.prefs.iou_absorb))
            logger.info('\t Selecting with delta={0}, lam={1}, budget={2} ({3} greedy)'
                        .format(self.prefs.delta, self.prefs.lam, self.prefs.budget,
                                'lazy' if self.prefs.lazy else 'naive'))
            logger.info('\t Segmenting with lambda_o={0}, lambda_p={1}, {2} colour components'
                        .format(self.prefs.lambda_o, self.prefs.lambda_p,
                                self.prefs.gmm_components))
            if self.prefs.baseline is not None:
                logger.info('\t Running {0} baseline'.format(self.prefs.baseline))
            if self.prefs.stop_after is not None:
                logger.info('\t Stopping after {0}'.format(self.prefs.stop_after))

    @property
    def version(self):
        if self.prefs.trackcut_version:
            return self.prefs.trackcut_version
        else:
            return version.__version__

    @property
    def fileroot(self):
        if self.prefs.fileroot:
            return self.prefs.fileroot
        else:
            return self.metadata.videoid

    @property
    def outdir(self):
        return os.path.join(self.prefs.workdir, self.fileroot)

    @property
    def frame_size(self):
        from trackcut import regions
        return regions.FrameSize(self.metadata.width, self.metadata.height)

    @property
    def classes(self):
        return list(self.metadata.classes)

    @property
    def thresholds(self):
        return self.mining_config.thresholds

    @property
    def scoring_config(self):
        from trackcut import scoring
        return scoring.ScoringConfig(normalization=self.prefs.normalization,
                                     epsilon=self.prefs.epsilon)

    @property
    def mining_config(self):
        from trackcut import mining
        return mining.MiningConfig(levels=self.prefs.levels,
                                   connectivity=self.prefs.connectivity,
                                   iou_absorb=self.prefs.iou_absorb,
                                   rng_seed=self.prefs.mining_seed,
                                   min_region_area=self.prefs.min_region_area)

    @property
    def segmentation_config(self):
        from trackcut import segmentation
        return segmentation.SegmentationConfig(lambda_o=self.prefs.lambda_o,
                                               lambda_p=self.prefs.lambda_p,
                                               gmm_components=self.prefs.gmm_components,
                                               gmm_seed=self.prefs.gmm_seed,
                                               gmm_maxiter=self.prefs.gmm_maxiter,
                                               gmm_tol=self.prefs.gmm_tol,
                                               eps_cov=self.prefs.eps_cov,
                                               eps_prob=self.prefs.eps_prob,
                                               fg_threshold=self.prefs.fg_threshold,
                                               bg_threshold=self.prefs.bg_threshold)

    def budget_for(self, ntracks):
        """ Selection budget K for ntracks candidates; None means all. """

        if self.prefs.budget is None:
            return ntracks
        return min(int(self.prefs.budget), ntracks)
