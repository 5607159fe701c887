"""Triadic k-means baseline: k-means++ seeding and Lloyd iterations."""

from dataclasses import dataclass, field

import numpy as np

from .cw import HardClustering, singleton_clustering, whole_clustering

__all__ = ["KMeansParams", "KMeansResult", "kmeans", "singleton_clustering", "whole_clustering"]

_ASSIGN_BLOCK = 1 << 22


@dataclass(frozen=True)
class KMeansParams:
    k: int
    max_iters: int = 100
    seed: int = 0
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.k < 1 or self.max_iters < 1 or self.tolerance < 0:
            raise ValueError(f"invalid k-means parameters {self}")


@dataclass
class KMeansResult:
    clustering: HardClustering
    centroids: np.ndarray
    labels: np.ndarray
    inertia_history: list = field(default_factory=list)

    @property
    def inertia(self):
        return self.inertia_history[-1]


def _sq_dists(X, C):
    d = (X * X).sum(1)[:, None] - 2.0 * (X @ C.T) + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _assign(X, C):
    block = max(1, _ASSIGN_BLOCK // max(1, len(C)))
    labels = np.empty(len(X), dtype=np.int64)
    cost = np.empty(len(X))
    for s in range(0, len(X), block):
        labels[s:s + block] = _sq_dists(X[s:s + block], C).argmin(1)
    cost[:] = ((X - C[labels]) ** 2).sum(1)
    return labels, cost


def kmeans_plus_plus(X, k, rng):
    n = len(X)
    chosen = [int(rng.integers(n))]
    closest = ((X - X[chosen[0]]) ** 2).sum(1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            i = int(rng.choice(n, p=closest / total))
        else:
            # every point coincides with a centre already; take any unused one
            free = np.setdiff1d(np.arange(n), chosen)
            i = int(rng.choice(free))
        chosen.append(i)
        closest = np.minimum(closest, ((X - X[i]) ** 2).sum(1))
    return X[chosen].copy()


def _means(X, labels, k):
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    starts = np.searchsorted(sorted_labels, np.arange(k))
    sums = np.add.reduceat(X[order], starts, axis=0)
    counts = np.bincount(labels, minlength=k)
    return sums / counts[:, None]


def kmeans(rows, params: KMeansParams) -> KMeansResult:
    """Lloyd's algorithm on Euclidean distance.

    ``inertia_history`` holds the assignment cost of every iteration and never
    increases. A cluster left empty takes over the point farthest from its
    centroid.
    """
    X = np.asarray(rows, dtype=np.float64)
    n, k = len(X), params.k
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points ({n})")
    rng = np.random.default_rng(params.seed)
    C = kmeans_plus_plus(X, k, rng)

    history = []
    for _ in range(params.max_iters):
        labels, cost = _assign(X, C)
        history.append(float(cost.sum()))
        counts = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(counts == 0):
            donors = counts[labels] > 1
            p = int(np.flatnonzero(donors)[np.argmax(cost[donors])])
            counts[labels[p]] -= 1
            labels[p] = j
            counts[j] = 1
            cost[p] = 0.0
        new_C = _means(X, labels, k)
        shift = np.sqrt(((new_C - C) ** 2).sum(1)).max()
        C = new_C
        if shift < params.tolerance:
            break
    labels, cost = _assign(X, C)
    history.append(float(cost.sum()))
    first = {}
    for i, l in enumerate(labels.tolist()):
        first.setdefault(l, i)
    clustering = HardClustering({i: first[l] for i, l in enumerate(labels.tolist())})
    return KMeansResult(clustering, C, labels, history)
