# synthgen.py
"""
Synthetic outliers injected around an inlier dataset.

- local:  Gaussian mixture fitted on the inliers, covariances scaled by alpha
- clump:  same mixture, means scaled by alpha
- global: uniform box spanned by alpha * per-feature min/max, candidates that
          form a Tomek link with an inlier are rejected and redrawn
- mixed:  an even local/clump/global split (remainder assigned in that order)

Every generator takes a seed (int or numpy SeedSequence); identical inputs
and seed give identical output.
"""

import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.datasets import make_moons
from sklearn.exceptions import ConvergenceWarning
from sklearn.mixture import GaussianMixture

from colors import print_colored, print_warning, Colors
from dataset import Dataset

DEFAULT_ALPHA = 5.0
DEFAULT_OUTLIER_RATIO = 0.05
DEFAULT_K_RANGE = range(1, 6)
EM_MAX_ITER = 200
EM_TOL = 1e-6
EM_RESEEDS = 3
KINDS = ("local", "clump", "global", "mixed")
BANANA_SEPARATION = 6.0

@dataclass(frozen=True)
class GmmModel:
    k: int
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    bic: float = float("nan")

    @property
    def mean(self) -> np.ndarray:
        """Mean of the whole mixture."""
        return self.weights @ self.means

    @property
    def covariance(self) -> np.ndarray:
        """Covariance of the whole mixture."""
        mu = self.mean
        second = sum(w * (c + np.outer(m, m)) for w, m, c in zip(self.weights, self.means, self.covariances))
        return second - np.outer(mu, mu)

@dataclass(frozen=True)
class SyntheticOutlierSpec:
    kind: str
    count: int
    alpha: float = DEFAULT_ALPHA
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown outlier kind {self.kind!r}; choose one of {KINDS}")
        if self.count < 1:
            raise ValueError(f"count must be at least 1, got {self.count}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.kind == "mixed" and self.count < 3:
            raise ValueError(f"mixed outliers need count >= 3, got {self.count}")

    @staticmethod
    def default_count(n_inliers: int) -> int:
        return max(1, int(round(DEFAULT_OUTLIER_RATIO * n_inliers)))

def fit_gmm(inliers: Dataset, k_range: Sequence[int] = DEFAULT_K_RANGE, seed=0,
            notes: Optional[List[str]] = None) -> GmmModel:
    """
    Fit a full-covariance Gaussian mixture for each k in k_range and keep the lowest BIC.
    Each k gets up to EM_RESEEDS extra seeds when EM fails to converge.
    """
    X = inliers.points
    n, d = X.shape
    if n < d + 2:
        raise ValueError(f"Need at least d + 2 = {d + 2} inliers to fit a mixture, got {n}")
    cov = np.atleast_2d(np.cov(X, rowvar=False))
    ridge = 1e-6 * float(np.trace(cov)) / d
    if ridge <= 0:
        ridge = 1e-6
    base_seed = int(np.random.default_rng(seed).integers(2**31 - 1))

    best = None
    for k in k_range:
        if k > n:
            continue
        fitted = None
        for attempt in range(EM_RESEEDS + 1):
            gmm = GaussianMixture(n_components=k, covariance_type="full", init_params="k-means++",
                                  max_iter=EM_MAX_ITER, tol=EM_TOL, reg_covar=ridge,
                                  random_state=base_seed + attempt)
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", ConvergenceWarning)
                    gmm.fit(X)
            except (ValueError, np.linalg.LinAlgError):
                continue
            if gmm.converged_:
                fitted = gmm
                break
        if fitted is None:
            print_warning(f"EM did not converge for k={k} after {EM_RESEEDS} re-seeds; skipped", notes)
            continue
        bic = float(fitted.bic(X))
        if best is None or bic < best[0]:
            best = (bic, fitted)

    if best is None:
        raise ValueError(f"EM failed for every component count in {list(k_range)}")
    bic, gmm = best
    weights = gmm.weights_ / gmm.weights_.sum()
    print_colored(f"Mixture fitted: k={gmm.n_components} (BIC {bic:.2f})", Colors.INFO)
    return GmmModel(int(gmm.n_components), weights, gmm.means_.copy(), gmm.covariances_.copy(), bic)

def _sample_mixture(model: GmmModel, count: int, seed, mean_scale: float, cov_scale: float) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = np.empty((count, model.means.shape[1]))
    if count == 0:
        return out
    comps = rng.choice(model.k, size=count, p=model.weights)
    for j in range(model.k):
        idx = np.flatnonzero(comps == j)
        if idx.size:
            out[idx] = rng.multivariate_normal(mean_scale * model.means[j], cov_scale * model.covariances[j],
                                               size=idx.size)
    return out

def gen_local(model: GmmModel, count: int, alpha: float = DEFAULT_ALPHA, seed=0) -> np.ndarray:
    return _sample_mixture(model, count, seed, 1.0, alpha)

def gen_clumps(model: GmmModel, count: int, alpha: float = DEFAULT_ALPHA, seed=0,
               notes: Optional[List[str]] = None) -> np.ndarray:
    if np.allclose(model.means, 0.0):
        print_warning("mixture means are at the origin; scaled clumps will overlap the inliers", notes)
    return _sample_mixture(model, count, seed, alpha, 1.0)

def tomek_linked(inliers: np.ndarray, candidates: np.ndarray, inlier_dist: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Mask of candidates c with a Tomek link: p = nearest inlier of c, and c is the
    nearest point to p among inliers and candidates. Ties go to the lower index
    (inliers before candidates).
    """
    m = candidates.shape[0]
    if m == 0:
        return np.zeros(0, dtype=bool)
    n = inliers.shape[0]
    if inlier_dist is None:
        inlier_dist = cdist(inliers, inliers)
        np.fill_diagonal(inlier_dist, np.inf)
    to_candidates = cdist(candidates, inliers)
    nearest_inlier = to_candidates.argmin(axis=1)
    nearest_of_inlier = np.hstack([inlier_dist, to_candidates.T]).argmin(axis=1)
    return nearest_of_inlier[nearest_inlier] == n + np.arange(m)

def gen_global(inliers: Dataset, count: int, alpha: float = DEFAULT_ALPHA, seed=0,
               max_attempts: Optional[int] = None, notes: Optional[List[str]] = None) -> np.ndarray:
    X = inliers.points
    d = X.shape[1]
    scaled_min, scaled_max = alpha * X.min(axis=0), alpha * X.max(axis=0)
    lo, hi = np.minimum(scaled_min, scaled_max), np.maximum(scaled_min, scaled_max)
    if max_attempts is None:
        max_attempts = 50 * count
    rng = np.random.default_rng(seed)

    inlier_dist = cdist(X, X)
    np.fill_diagonal(inlier_dist, np.inf)
    accepted = np.empty((0, d))
    attempts = 0
    while accepted.shape[0] < count and attempts < max_attempts:
        batch = min(count - accepted.shape[0], max_attempts - attempts)
        attempts += batch
        pool = np.vstack([accepted, rng.uniform(lo, hi, size=(batch, d))])
        # removing a candidate can expose a link hidden behind it
        while pool.shape[0]:
            links = tomek_linked(X, pool, inlier_dist)
            if not links.any():
                break
            pool = pool[~links]
        accepted = pool

    if accepted.shape[0] < count:
        print_warning(f"only {accepted.shape[0]} of {count} global outliers survived "
                      f"Tomek-link filtering after {attempts} attempts", notes)
    return accepted

def gen_mixed(inliers: Dataset, count: int, alpha: float = DEFAULT_ALPHA, seed=0,
              model: Optional[GmmModel] = None, notes: Optional[List[str]] = None) -> Tuple[np.ndarray, np.ndarray]:
    if count < 3:
        raise ValueError(f"mixed outliers need count >= 3, got {count}")
    sizes = [count // 3 + (1 if i < count % 3 else 0) for i in range(3)]
    local_seed, clump_seed, global_seed = np.random.SeedSequence(seed).spawn(3)
    if model is None:
        model = fit_gmm(inliers, seed=seed, notes=notes)
    parts = [gen_local(model, sizes[0], alpha, local_seed),
             gen_clumps(model, sizes[1], alpha, clump_seed, notes),
             gen_global(inliers, sizes[2], alpha, global_seed, notes=notes)]
    kinds = np.concatenate([np.full(p.shape[0], kind, dtype=object)
                            for p, kind in zip(parts, ("local", "clump", "global"))])
    return np.vstack(parts), kinds

def generate(inliers: Dataset, spec: SyntheticOutlierSpec, model: Optional[GmmModel] = None,
             notes: Optional[List[str]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Dispatch on spec.kind. Returns (points, kinds)."""
    if spec.kind == "mixed":
        return gen_mixed(inliers, spec.count, spec.alpha, spec.seed, model, notes)
    if spec.kind == "global":
        points = gen_global(inliers, spec.count, spec.alpha, spec.seed, notes=notes)
    else:
        if model is None:
            model = fit_gmm(inliers, seed=spec.seed, notes=notes)
        if spec.kind == "local":
            points = gen_local(model, spec.count, spec.alpha, spec.seed)
        else:
            points = gen_clumps(model, spec.count, spec.alpha, spec.seed, notes)
    print_colored(f"Generated {points.shape[0]} {spec.kind} outliers (alpha={spec.alpha}, seed={spec.seed})",
                  Colors.SUCCESS)
    return points, np.full(points.shape[0], spec.kind, dtype=object)

def make_banana(n: int = 900, noise: float = 0.1, seed: int = 0,
                separation: float = BANANA_SEPARATION) -> Dataset:
    """
    Two noisy banana-shaped arcs, a stand-in for the banana benchmark.

    Each half-moon is centred on its own mean and moved to x = -separation/2 or
    +separation/2, so both arcs sit away from the origin. Alpha-scaled mixture
    means then land outside the data while the alpha-scaled bounding box still
    covers it.
    """
    if separation < 0:
        raise ValueError(f"separation must be >= 0, got {separation}")
    points, arc = make_moons(n_samples=n, noise=noise, random_state=seed)
    for k, x_shift in ((0, -separation / 2), (1, separation / 2)):
        members = arc == k
        points[members] -= points[members].mean(axis=0)
        points[members, 0] += x_shift
    return Dataset(points, feature_names=("x0", "x1"))
