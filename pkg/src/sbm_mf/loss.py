"""Label-invariant l1 loss between assignment matrices."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import InputError
from .model import HardAssignment, as_probs


def _check_shapes(x, y):
    if x.shape != y.shape:
        raise InputError(f"assignment shapes differ: {x.shape} vs {y.shape}")


def column_cost(pi, z_star):
    """C[a, b] = sum_i |pi[i, a] - z_star[i, b]|."""
    x = as_probs(pi)
    y = as_probs(z_star)
    _check_shapes(x, y)
    return np.abs(x[:, :, None] - y[:, None, :]).sum(axis=0)


def l1_loss(pi, z_star):
    """min over relabelings phi of sum_{i,a} |pi[i,a] - z_star[i, phi(a)]|.

    The objective separates over columns, so the minimum over all k!
    bijections is a linear assignment problem on the k x k column cost
    matrix. Returns ``(loss, phi)`` where ``phi[a]`` is the truth column
    matched to column ``a`` of ``pi``.
    """
    x = as_probs(pi)
    y = as_probs(z_star)
    _check_shapes(x, y)
    cost = np.abs(x[:, :, None] - y[:, None, :]).sum(axis=0)
    _, phi = linear_sum_assignment(cost)
    loss = float(np.abs(x - y[:, phi]).sum())
    return loss, phi


def misclustered_count(z, z_star):
    """Hamming distance between label vectors, minimized over relabelings."""
    if not (isinstance(z, HardAssignment) and isinstance(z_star, HardAssignment)):
        raise InputError("misclustered_count needs two hard assignments")
    if z.n != z_star.n or z.k != z_star.k:
        raise InputError(f"assignment shapes differ: ({z.n}, {z.k}) vs ({z_star.n}, {z_star.k})")
    confusion = np.zeros((z.k, z.k), dtype=np.int64)
    np.add.at(confusion, (z.labels, z_star.labels), 1)
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    return int(z.n - confusion[rows, cols].sum())


def aligned_confusion(z, z_star):
    """Confusion matrix of z against z_star with z's columns relabeled optimally."""
    _, phi = l1_loss(z, z_star)
    confusion = np.zeros((z.k, z.k), dtype=np.int64)
    np.add.at(confusion, (phi[z.labels], z_star.labels), 1)
    return confusion
