"""Bipartite spectral co-clustering baseline.

Base-stations and users are clustered together: the ``(b+u)``-vertex
bipartite adjacency is normalized symmetrically, the eigenvectors of the
``M`` smallest normalized-Laplacian eigenvalues give an embedding, and
k-means with ``M`` centers labels every vertex.

Two embeddings are offered. ``"ncut"`` (default) rescales the eigenvectors by
``D^-1/2``, which solves the generalized problem ``L v = lambda D v`` of the
normalized-cut relaxation. ``"njw"`` instead scales every row to unit length.
A label that collects users but no base-station makes the outcome a failure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.linalg
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from .errors import ParameterError
from .model import BsPartition, ClusterSystem, ValidationReport, WeightMatrix, as_weights, validate_if_cluster

DEGREE_EPS = 1e-12
KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 100

EMBEDDINGS = ("ncut", "njw")

USER_ONLY_CLUSTER = "user-only-cluster"
EIGENSOLVER_FAILURE = "eigensolver-failure"


@dataclass(frozen=True)
class SpectralOutcome:
    system: ClusterSystem | None = None
    report: ValidationReport | None = None
    failure: str | None = None
    detail: str = ""
    labels: np.ndarray | None = None  # raw k-means label per vertex, BSs first

    @property
    def failed(self) -> bool:
        return self.failure is not None


def spectral_embedding(W: WeightMatrix | Any, M: int, embedding: str = "ncut") -> np.ndarray:
    """Embed all ``b+u`` vertices (base-stations first) into ``M`` dimensions."""
    if embedding not in EMBEDDINGS:
        raise ParameterError(f"unknown embedding {embedding!r}, expected one of {EMBEDDINGS}")
    w = as_weights(W).w
    b, u = w.shape
    n = b + u
    A = np.zeros((n, n))
    A[:b, b:] = w
    A[b:, :b] = w.T
    deg = A.sum(axis=1)
    deg[deg == 0] = DEGREE_EPS
    s = 1.0 / np.sqrt(deg)
    L = np.eye(n) - s[:, None] * A * s[None, :]
    _, vecs = scipy.linalg.eigh(L, subset_by_index=[0, M - 1], check_finite=False)
    if embedding == "ncut":
        return s[:, None] * vecs
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    np.divide(vecs, norms, out=vecs, where=norms > 0)
    return vecs


def spectral_cluster(
    W: WeightMatrix | Any, M: int, seed: int = 0, embedding: str = "ncut"
) -> SpectralOutcome:
    W = as_weights(W)
    b, u = W.shape
    if not 1 <= M <= b + u:
        raise ParameterError(f"M must be in 1..{b + u}, got {M}")
    try:
        X = spectral_embedding(W, M, embedding)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        return SpectralOutcome(failure=EIGENSOLVER_FAILURE, detail=str(e))

    rng = np.random.default_rng(seed)
    km = KMeans(
        n_clusters=M,
        init="k-means++",
        n_init=KMEANS_RESTARTS,
        max_iter=KMEANS_MAX_ITER,
        random_state=int(rng.integers(2**31 - 1)),
    )
    with warnings.catch_warnings():
        # fewer distinct embedded points than M
        warnings.simplefilter("ignore", ConvergenceWarning)
        labels = km.fit_predict(X)

    bs_lab, user_lab = labels[:b], labels[b:]
    orphan = sorted(set(user_lab.tolist()) - set(bs_lab.tolist()))
    if orphan:
        n_users = int(np.isin(user_lab, orphan).sum())
        return SpectralOutcome(
            failure=USER_ONLY_CLUSTER,
            detail=f"{len(orphan)} cluster(s) with {n_users} user(s) and no base-station",
            labels=labels,
        )

    # classes ordered by their smallest base-station; labels without members vanish
    order = list(dict.fromkeys(bs_lab.tolist()))
    remap = {lab: k for k, lab in enumerate(order)}
    bs = [[] for _ in order]
    users = [[] for _ in order]
    for i, lab in enumerate(bs_lab.tolist()):
        bs[remap[lab]].append(i)
    for j, lab in enumerate(user_lab.tolist()):
        users[remap[lab]].append(j)
    system = ClusterSystem(BsPartition(tuple(map(tuple, bs))), tuple(map(tuple, users)))
    return SpectralOutcome(system=system, report=validate_if_cluster(system, W), labels=labels)
