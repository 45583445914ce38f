"""Initial assignments: adjacency spectral clustering and controlled corruption of the truth."""

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from sklearn.cluster import KMeans

from .exceptions import InputError, NumericalError
from .model import HardAssignment, SoftAssignment, make_rng

DENSE_EIGEN_MAX_N = 2000
EIGEN_TOL = 1e-8


def leading_eigenvectors(A, k):
    """Eigenpairs of A with the k largest |eigenvalue|, sorted by decreasing |eigenvalue|."""
    n = A.n
    if n < DENSE_EIGEN_MAX_N:
        values, vectors = scipy.linalg.eigh(A.csr.toarray())
    else:
        try:
            values, vectors = scipy.sparse.linalg.eigsh(A.csr, k=k, which="LM", tol=EIGEN_TOL)
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise NumericalError(
                f"Lanczos eigensolver did not converge: {len(exc.eigenvalues)} of {k} eigenpairs found"
            ) from exc
        residual = np.linalg.norm(A.matmul(vectors) - vectors * values, axis=0)
        scale = max(1.0, float(np.max(np.abs(values))))
        if np.any(residual > EIGEN_TOL * scale * 10):
            raise NumericalError(f"eigenpair residuals too large: {residual.max():.3e}")
    order = np.argsort(-np.abs(values), kind="stable")[:k]
    return values[order], vectors[:, order]


def spectral_init(A, k, seed, n_init=10, max_iter=100):
    """Cluster the rows of the top-k adjacency eigenvectors with seeded k-means.

    k-means++ seeding, ``n_init`` restarts, best inertia kept.
    """
    if A.n < k:
        raise InputError(f"need n >= k, got n={A.n}, k={k}")
    if k == 1:
        return HardAssignment(np.zeros(A.n, dtype=np.int64), 1)
    _, embedding = leading_eigenvectors(A, k)
    rng = make_rng(seed)
    state = int(rng.integers(0, 2**31 - 1))
    km = KMeans(n_clusters=k, init="k-means++", n_init=n_init, max_iter=max_iter, random_state=state)
    labels = km.fit_predict(embedding)
    return HardAssignment(labels, k)


def corrupt_truth(z_star, fraction, seed):
    """Move floor(fraction * n) distinct random nodes to a uniformly chosen wrong community.

    Returns the corrupted assignment embedded as a SoftAssignment.
    """
    if not 0.0 <= fraction < 1.0:
        raise InputError(f"fraction must lie in [0, 1), got {fraction}")
    rng = make_rng(seed)
    n, k = z_star.n, z_star.k
    n_moved = int(np.floor(fraction * n))
    labels = z_star.labels.copy()
    if n_moved and k > 1:
        nodes = rng.choice(n, size=n_moved, replace=False)
        shift = rng.integers(1, k, size=n_moved)
        labels[nodes] = (labels[nodes] + shift) % k
    return SoftAssignment(HardAssignment(labels, k).matrix)
