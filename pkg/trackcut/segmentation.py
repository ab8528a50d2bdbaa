from __future__ import print_function, division, absolute_import, unicode_literals

import attr
import numpy as np
from scipy.special import logsumexp
from scipy.stats import multivariate_normal
from sklearn.cluster import kmeans_plusplus
from trackcut import graphcut

import logging
logger = logging.getLogger(__name__)


@attr.s(frozen=True, eq=False)
class GaussianMixture(object):
    """ Full-covariance Gaussian mixture over RGB colours.
    """

    weights = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64))
    means = attr.ib(converter=lambda vv: np.atleast_2d(np.asarray(vv, dtype=np.float64)))
    covariances = attr.ib(converter=lambda vv: np.asarray(vv, dtype=np.float64).reshape(-1, 3, 3))

    def __attrs_post_init__(self):
        if not (len(self.weights) == len(self.means) == len(self.covariances)):
            raise ValueError("mixture component arrays differ in length")
        if np.any(self.weights <= 0) or abs(self.weights.sum() - 1.) > 1e-9:
            raise ValueError("mixture weights must be positive and sum to one")

    @property
    def ncomponents(self):
        return len(self.weights)

    def component_logpdf(self, colours):
        colours = np.atleast_2d(colours)
        return np.stack([np.log(ww) + np.atleast_1d(multivariate_normal(mean, cov).logpdf(colours))
                         for (ww, mean, cov) in zip(self.weights, self.means, self.covariances)],
                        axis=1)

    def logpdf(self, colours):
        return logsumexp(self.component_logpdf(colours), axis=1)

    def density(self, colours):
        return np.exp(self.logpdf(colours))


def _mstep(colours, weights, resp, eps_cov):
    nk = np.maximum((weights[:, None]*resp).sum(axis=0), 1e-300)
    means = (weights[:, None]*resp).T.dot(colours)/nk[:, None]
    covs = []
    for kk in range(resp.shape[1]):
        diff = colours - means[kk]
        scatter = np.einsum('n,ni,nj->ij', weights*resp[:, kk], diff, diff)
        covs.append(scatter/nk[kk] + eps_cov*np.eye(3))
    mix = np.maximum(nk/nk.sum(), 1e-300)
    return GaussianMixture(mix/mix.sum(), means, covs)


def _loglike(gmm, colours, weights, total):
    """ Weighted mean log-likelihood. """

    return float(np.dot(weights, gmm.logpdf(colours))/total)


def fit_gmm(colours, weights, ncomponents=5, seed=0, maxiter=100, tol=1e-6,
            eps_cov=1e-4, returntrace=False):
    """ Weighted EM fit of a colour mixture.
    Initial centres come from seeded k-means++ over the weighted samples;
    iteration stops when the weighted log-likelihood improves by less than
    tol. Every covariance is the weighted scatter plus eps_cov*I; with
    eps_cov=0 the iteration is plain EM and the likelihood never decreases.
    Returns the mixture, and the per-iteration log-likelihood if returntrace.
    """

    colours = np.atleast_2d(np.asarray(colours, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    assert len(colours) == len(weights), "one weight per colour sample"
    assert np.all(weights >= 0), "sample weights must be non-negative"

    keep = weights > 0
    colours, weights = colours[keep], weights[keep]
    if not len(colours):
        raise ValueError("no colour samples with positive weight")

    ndistinct = len(np.unique(colours, axis=0))
    if ndistinct < ncomponents:
        logger.warning("Reducing mixture from {0} to {1} components for {2} distinct colour{3}."
                       .format(ncomponents, ndistinct, ndistinct, 's'[not ndistinct-1:]))
        ncomponents = ndistinct

    total = weights.sum()
    centres, _ = kmeans_plusplus(colours, ncomponents, sample_weight=weights,
                                 random_state=seed)
    nearest = np.argmin(((colours[:, None, :] - centres[None, :, :])**2).sum(axis=2), axis=1)
    resp = np.zeros((len(colours), ncomponents))
    resp[np.arange(len(colours)), nearest] = 1.

    gmm = _mstep(colours, weights, resp, eps_cov)
    trace = [_loglike(gmm, colours, weights, total)]
    for ii in range(maxiter):
        logp = gmm.component_logpdf(colours)
        resp = np.exp(logp - logsumexp(logp, axis=1)[:, None])
        gmm = _mstep(colours, weights, resp, eps_cov)
        trace.append(_loglike(gmm, colours, weights, total))
        if trace[-1] - trace[-2] < tol:
            break

    logger.debug("Fit {0}-component mixture in {1} iterations (log-likelihood {2:.4f})."
                 .format(ncomponents, len(trace) - 1, trace[-1]))

    if returntrace:
        return gmm, trace
    else:
        return gmm


def colour_unary(gmm_fg, gmm_bg, colours, eps_prob=1e-8):
    """ Negative log densities of colours under the foreground and
    background mixtures, floored at eps_prob.
    """

    logfloor = np.log(eps_prob)
    cost_fg = -np.maximum(gmm_fg.logpdf(colours), logfloor)
    cost_bg = -np.maximum(gmm_bg.logpdf(colours), logfloor)
    return cost_fg, cost_bg


def semantic_unary(confidence, foreground, eps_prob=1e-8):
    """ -log c for a foreground label, -log(1 - c) for background.
    """

    confidence = np.asarray(confidence, dtype=np.float64)
    prob = confidence if foreground else 1. - confidence
    return -np.log(np.maximum(prob, eps_prob))


def mean_sq_dist(colours, edges, epsilon=1e-12):
    """ Mean squared colour distance over graph edges, at least epsilon.
    """

    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if not len(edges):
        return epsilon
    diff = colours[edges[:, 0]] - colours[edges[:, 1]]
    return max(float((diff**2).sum(axis=1).mean()), epsilon)


def pairwise_weight(colour_i, colour_j, mean_sq_dist):
    """ exp(-|c_i - c_j|^2 / (2 <|c_i - c_j|^2>)), in (0, 1].
    Works on single colours or row-aligned arrays of colours.
    """

    assert mean_sq_dist > 0, "mean squared distance must be positive"
    diff = np.asarray(colour_i, dtype=np.float64) - np.asarray(colour_j, dtype=np.float64)
    return np.exp(-(diff**2).sum(axis=-1)/(2.*mean_sq_dist))


@attr.s(frozen=True)
class SegmentationConfig(object):
    lambda_o = attr.ib(default=1.0, converter=float)
    lambda_p = attr.ib(default=0.5, converter=float)
    gmm_components = attr.ib(default=5, converter=int)
    gmm_seed = attr.ib(default=0, converter=int)
    gmm_maxiter = attr.ib(default=100, converter=int)
    gmm_tol = attr.ib(default=1e-6, converter=float)
    eps_cov = attr.ib(default=1e-4, converter=float)
    eps_prob = attr.ib(default=1e-8, converter=float)
    fg_threshold = attr.ib(default=0.5, converter=float)
    bg_threshold = attr.ib(default=0.5, converter=float)


@attr.s(frozen=True, eq=False)
class SegmentationResult(object):
    """ Node labeling, its per-frame pixel label maps and the final energy.
    """

    labeling = attr.ib()
    labelmaps = attr.ib(converter=list)
    energy = attr.ib(converter=float)
    colour_used = attr.ib(default=True)


def build_unary(colours, confidences, cfg):
    """ Unary costs for labels 0 (background) and 1..C (classes).
    confidences is a (C, nodes) array of per-superpixel class confidences.
    Returns the (nodes, C+1) cost array and whether colour models were used.
    """

    confidences = np.clip(np.atleast_2d(confidences), 0., 1.)
    nclass, nnodes = confidences.shape
    cmax = confidences.max(axis=0) if nclass else np.zeros(nnodes)

    unary = np.zeros((nnodes, nclass + 1))
    unary[:, 0] = cfg.lambda_o*semantic_unary(cmax, False, cfg.eps_prob)
    for kk in range(nclass):
        unary[:, kk+1] = cfg.lambda_o*semantic_unary(confidences[kk], True, cfg.eps_prob)

    bgsel = cmax < cfg.bg_threshold
    fgsels = [confidences[kk] >= cfg.fg_threshold for kk in range(nclass)]
    if not nclass or not bgsel.any() or not all(sel.any() for sel in fgsels):
        logger.warning("Too few confident superpixels for colour models; "
                       "using semantic unary only.")
        return unary, False

    fitkw = dict(ncomponents=cfg.gmm_components, seed=cfg.gmm_seed,
                 maxiter=cfg.gmm_maxiter, tol=cfg.gmm_tol, eps_cov=cfg.eps_cov)
    gmm_bg = fit_gmm(colours[bgsel], 1. - cmax[bgsel], **fitkw)
    for kk, sel in enumerate(fgsels):
        gmm_fg = fit_gmm(colours[sel], confidences[kk][sel], **fitkw)
        cost_fg, cost_bg = colour_unary(gmm_fg, gmm_bg, colours, cfg.eps_prob)
        unary[:, kk+1] += cost_fg
        if kk == 0:
            unary[:, 0] += cost_bg

    return unary, True


def segment_video(graph, confidences, cfg=None):
    """ Label every superpixel of the graph as background (0) or one of the
    classes (1..C) by alpha-expansion on colour, semantic and pairwise
    costs. confidences is a (C, nodes) array.
    """

    cfg = cfg if cfg is not None else SegmentationConfig()
    confidences = np.atleast_2d(np.asarray(confidences, dtype=np.float64))
    if confidences.shape[1] != graph.nnodes:
        raise ValueError("{0} confidences for {1} superpixels"
                         .format(confidences.shape[1], graph.nnodes))

    unary, colour_used = build_unary(graph.colours, confidences, cfg)
    edges = graph.edges
    msd = mean_sq_dist(graph.colours, edges)
    if len(edges):
        weights = pairwise_weight(graph.colours[edges[:, 0]], graph.colours[edges[:, 1]], msd)
    else:
        weights = np.zeros(0)

    model = graphcut.EnergyModel(unary, weights, lambda_p=cfg.lambda_p)
    labeling = graphcut.alpha_expansion(model, graph)
    energy = graphcut.energy_of(model, graph, labeling)
    labelmaps = [graph.to_pixels(labeling, tt).astype(np.int32)
                 for tt in range(graph.nframes)]

    nfg = int(np.count_nonzero(labeling))
    logger.info("Segmented {0} superpixels: {1} foreground, energy {2:.4f}."
                .format(graph.nnodes, nfg, energy))

    return SegmentationResult(labeling, labelmaps, energy, colour_used)
