"""Monte-Carlo volume estimates of the success performance mode."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .classifiers import ParamSpace


def monte_carlo_volume(predicate, n_samples: int, seed: int = 0, space: ParamSpace | None = None, dim: int = 3) -> float:
    """Fraction of the normalized box classified as success, by direct sampling."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    d = space.dim if space is not None else dim
    hits = 0
    for _ in range(n_samples):
        u = rng.uniform(0.0, 1.0, size=d)
        raw = space.from_unit(u) if space is not None else u
        hits += bool(predicate(raw))
    return hits / n_samples


def boundary_volume(samples, n_samples: int, seed: int = 0) -> float:
    """Success fraction using nearest-boundary-point normal sign as the classifier.

    A Monte-Carlo point is on the failure side when it lies along the
    nearest boundary sample's outward (toward-failure) normal.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    samples = list(samples)
    if not samples:
        return 1.0
    dim = samples[0].midpoint.shape[0]
    mids = np.array([s.midpoint for s in samples])
    normals = np.array([s.normal for s in samples])
    tree = cKDTree(mids)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 1.0, size=(n_samples, dim))
    _, idx = tree.query(pts)
    side = np.einsum("ij,ij->i", pts - mids[idx], normals[idx])
    return float(np.mean(side <= 0.0))


def estimate_volume(n_samples: int, classifier=None, boundary=None, seed: int = 0, space: ParamSpace | None = None, dim: int = 3) -> float:
    """Success-mode volume from either a classifier or an explored boundary."""
    if (classifier is None) == (boundary is None):
        raise ValueError("supply exactly one of classifier or boundary")
    if classifier is not None:
        return monte_carlo_volume(classifier, n_samples, seed=seed, space=space, dim=dim)
    return boundary_volume(boundary, n_samples, seed=seed)
