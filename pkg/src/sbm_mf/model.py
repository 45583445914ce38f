"""Core SBM data types, seeded graph generation and assignment conversions.

Community labels are 0-based everywhere in code and files.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import InputError

ROW_SUM_TOL = 1e-12


def make_rng(seed):
    """Return a PCG64-backed Generator.

    ``seed`` may be an int, a ``numpy.random.SeedSequence`` (for split streams)
    or an existing Generator, which is returned unchanged.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _readonly(arr):
    arr.setflags(write=False)
    return arr


class AdjacencyMatrix:
    """Symmetric binary adjacency matrix with zero diagonal.

    Stored as canonical CSR (sorted indices, no explicit zeros) for every n;
    ``dense()`` materializes a boolean array when one is needed.
    """

    def __init__(self, matrix, validate=True):
        csr = sp.csr_matrix(matrix, dtype=np.float64)
        csr.eliminate_zeros()
        csr.sum_duplicates()
        csr.sort_indices()
        if csr.shape[0] != csr.shape[1]:
            raise InputError(f"adjacency matrix must be square, got {csr.shape}")
        if validate:
            if csr.nnz and not np.all(csr.data == 1.0):
                raise InputError("adjacency entries must be 0 or 1")
            if csr.diagonal().any():
                raise InputError("adjacency matrix must have a zero diagonal")
            if (csr != csr.T).nnz:
                raise InputError("adjacency matrix must be symmetric")
        self._csr = csr
        self.n = csr.shape[0]

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable of (i, j) pairs with i != j (each undirected edge once)."""
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if edges.size == 0:
            return cls(sp.csr_matrix((n, n)), validate=False)
        edges = edges.reshape(-1, 2)
        if np.any(edges < 0) or np.any(edges >= n):
            raise InputError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise InputError("self-loops are not allowed")
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        coo = sp.coo_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
        csr = coo.tocsr()
        if csr.nnz and csr.data.max() > 1:
            raise InputError("duplicate edge")
        return cls(csr, validate=False)

    @property
    def csr(self):
        return self._csr

    @property
    def n_edges(self):
        """Number of undirected edges, i.e. sum_{i<j} A_ij."""
        return self._csr.nnz // 2

    def dense(self):
        return self._csr.toarray().astype(bool)

    def edges(self):
        """Upper-triangular edge list as an (m, 2) int array in row-major order."""
        upper = sp.triu(self._csr, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return np.column_stack([upper.row[order], upper.col[order]]).astype(np.int64)

    def matmul(self, x):
        """A @ x with each output entry summed over j in increasing column order."""
        return self._csr @ x

    def degrees(self):
        return np.diff(self._csr.indptr)

    def __eq__(self, other):
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return self.n == other.n and (self._csr != other._csr).nnz == 0

    def __repr__(self):
        return f"AdjacencyMatrix(n={self.n}, edges={self.n_edges})"


class HardAssignment:
    """One-hot membership matrix, stored as a label vector."""

    def __init__(self, labels, k):
        labels = np.array(labels, dtype=np.int64).reshape(-1)
        k = int(k)
        if k < 1:
            raise InputError(f"k must be >= 1, got {k}")
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise InputError(f"labels must lie in [0, {k})")
        self.labels = _readonly(labels)
        self.k = k
        self.n = labels.size

    @property
    def matrix(self):
        out = np.zeros((self.n, self.k))
        out[np.arange(self.n), self.labels] = 1.0
        return out

    @property
    def sizes(self):
        return np.bincount(self.labels, minlength=self.k)

    @property
    def nbar_min(self):
        """Half the smallest pairwise sum of community sizes."""
        if self.k < 2:
            raise InputError("nbar_min needs at least two communities")
        s = np.sort(self.sizes)
        return (s[0] + s[1]) / 2.0

    def to_soft(self):
        return SoftAssignment(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, HardAssignment):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.labels, other.labels)

    def __repr__(self):
        return f"HardAssignment(n={self.n}, k={self.k}, sizes={self.sizes.tolist()})"


class SoftAssignment:
    """Row-stochastic n x k matrix of community membership probabilities."""

    def __init__(self, probs):
        probs = np.array(probs, dtype=float)
        if probs.ndim != 2:
            raise InputError(f"soft assignment must be 2-d, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise InputError("soft assignment has non-finite entries")
        if np.any(probs < 0) or np.any(probs > 1):
            raise InputError("soft assignment entries must lie in [0, 1]")
        if probs.shape[0] and np.max(np.abs(probs.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
            raise InputError("soft assignment rows must sum to 1")
        self.probs = _readonly(probs)
        self.n, self.k = probs.shape

    @classmethod
    def uniform(cls, n, k):
        return cls(np.full((n, k), 1.0 / k))

    def __eq__(self, other):
        if not isinstance(other, SoftAssignment):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"SoftAssignment(n={self.n}, k={self.k})"


def as_probs(assignment):
    """n x k float array for either assignment type."""
    if isinstance(assignment, HardAssignment):
        return assignment.matrix
    if isinstance(assignment, SoftAssignment):
        return assignment.probs
    if isinstance(assignment, np.ndarray) and assignment.ndim == 2:
        return assignment
    raise InputError(f"expected an assignment, got {type(assignment).__name__}")


@dataclass(frozen=True)
class BlockParams:
    """Two-parameter connectivity: p within communities, q across."""

    p: float
    q: float
    k: int

    def __post_init__(self):
        if not (0.0 <= self.q <= 1.0 and 0.0 <= self.p <= 1.0):
            raise InputError(f"p and q must be probabilities, got p={self.p}, q={self.q}")
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")

    @property
    def assortative(self):
        return 0.0 < self.q < self.p < 1.0 and self.k >= 2

    def matrix(self):
        return self.q * np.ones((self.k, self.k)) + (self.p - self.q) * np.eye(self.k)


class PriorConfig:
    """Categorical prior per node plus Beta priors on p and q."""

    def __init__(self, pi_pri, alpha_p=1.0, beta_p=1.0, alpha_q=1.0, beta_q=1.0):
        if not isinstance(pi_pri, SoftAssignment):
            pi_pri = SoftAssignment(pi_pri)
        if np.any(pi_pri.probs <= 0):
            raise InputError("prior membership probabilities must be strictly positive")
        for name, v in (("alpha_p", alpha_p), ("beta_p", beta_p), ("alpha_q", alpha_q), ("beta_q", beta_q)):
            if not (v > 0 and math.isfinite(v)):
                raise InputError(f"{name} must be positive and finite, got {v}")
        self.pi_pri = pi_pri
        self.alpha_p = float(alpha_p)
        self.beta_p = float(beta_p)
        self.alpha_q = float(alpha_q)
        self.beta_q = float(beta_q)

    @classmethod
    def uniform(cls, n, k, **beta_hyper):
        return cls(SoftAssignment.uniform(n, k), **beta_hyper)

    @property
    def n(self):
        return self.pi_pri.n

    @property
    def k(self):
        return self.pi_pri.k

    @property
    def w(self):
        """Largest within-node ratio of prior membership probabilities."""
        probs = self.pi_pri.probs
        return float(np.max(probs.max(axis=1) / probs.min(axis=1)))

    def permuted(self, perm):
        """Prior with columns reordered as pi_pri[:, perm]."""
        return PriorConfig(self.pi_pri.probs[:, perm], self.alpha_p, self.beta_p, self.alpha_q, self.beta_q)


def sample_assignment(n, k, sizes, seed):
    """Random assignment with prescribed community sizes.

    Node order is a uniform random permutation drawn from ``seed``. The
    quantity nbar_min is available as ``result.nbar_min``.
    """
    sizes = [int(s) for s in sizes]
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if len(sizes) != k:
        raise InputError(f"expected {k} community sizes, got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise InputError("every community size must be >= 1")
    if sum(sizes) != n:
        raise InputError(f"community sizes sum to {sum(sizes)}, expected n={n}")
    rng = make_rng(seed)
    labels = np.repeat(np.arange(k), sizes)
    return HardAssignment(rng.permutation(labels), k)


def balanced_sizes(n, k):
    base, extra = divmod(n, k)
    return [base + (1 if a < extra else 0) for a in range(k)]


def _triangle_pairs(idx):
    # inverse of idx = v(v-1)/2 + u with 0 <= u < v
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(float))) / 2.0).astype(np.int64)
    v -= (v * (v - 1) // 2 > idx)
    v += ((v + 1) * v // 2 <= idx)
    u = idx - v * (v - 1) // 2
    return u, v


def sample_sbm(params, assignment, seed):
    """Draw an SBM graph given block parameters and a hard assignment.

    For every block pair the number of edges is drawn as Binomial(#pairs, prob)
    and the edge set as a uniform subset of that size, which is the same law as
    independent Bernoulli entries but costs O(edges) instead of O(n^2).
    """
    if assignment.k != params.k:
        raise InputError(f"assignment has k={assignment.k} but params have k={params.k}")
    rng = make_rng(seed)
    members = [np.flatnonzero(assignment.labels == a) for a in range(params.k)]
    rows, cols = [], []
    for a in range(params.k):
        for b in range(a, params.k):
            ma, mb = members[a].size, members[b].size
            prob = params.p if a == b else params.q
            n_pairs = ma * (ma - 1) // 2 if a == b else ma * mb
            if n_pairs == 0:
                continue
            n_draw = int(rng.binomial(n_pairs, prob))
            if n_draw == 0:
                continue
            idx = np.sort(rng.choice(n_pairs, size=n_draw, replace=False))
            if a == b:
                u, v = _triangle_pairs(idx)
                rows.append(members[a][u])
                cols.append(members[a][v])
            else:
                rows.append(members[a][idx // mb])
                cols.append(members[b][idx % mb])
    n = assignment.n
    if not rows:
        return AdjacencyMatrix(sp.csr_matrix((n, n)), validate=False)
    edges = np.column_stack([np.concatenate(rows), np.concatenate(cols)])
    return AdjacencyMatrix.from_edges(n, edges)


def labels_from_assignment(assignment):
    return assignment.labels.tolist()


def assignment_from_labels(labels, k):
    return HardAssignment(labels, k)


def harden(pi):
    """Row-wise argmax of a soft assignment; ties go to the smallest index."""
    probs = as_probs(pi)
    return HardAssignment(np.argmax(probs, axis=1), probs.shape[1])
