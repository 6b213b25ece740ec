"""Tensor Gauss-Legendre expectations over uniform boxes"""

# License: BSD (3-clause)

import numpy as np


def uniform_grid(bounds, n_nodes=64):
    """Tensor Gauss-Legendre nodes and weights for independent uniforms

    Parameters
    ----------
    bounds : list of tuple
        ``(low, high)`` support of each uniform variable.
    n_nodes : int
        Nodes per variable.

    Returns
    -------
    points : array, shape (n_nodes ** n_vars, n_vars)
        The nodes.
    weights : array, shape (n_nodes ** n_vars,)
        Weights of the uniform density, summing to one.
    """
    from scipy.special import roots_legendre
    x, w = roots_legendre(int(n_nodes))
    axes, weights = list(), list()
    for low, high in bounds:
        axes.append(low + (high - low) * (x + 1.) / 2.)
        weights.append(w / 2.)
    points = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing='ij')],
                      axis=-1)
    weights = np.prod([g.ravel() for g in np.meshgrid(*weights,
                                                      indexing='ij')], axis=0)
    return points, weights


def uniform_expectation(func, bounds, n_nodes=64, return_error=False):
    """Expectation of a vectorized function of independent uniforms

    Parameters
    ----------
    func : callable
        ``func(points)`` with ``points`` of shape (n_points, n_vars),
        returning an array of shape (n_points,) or (n_points, n_out).
    bounds : list of tuple
        ``(low, high)`` support of each uniform variable.
    n_nodes : int
        Gauss-Legendre nodes per variable.
    return_error : bool
        If True, also return the absolute change when the node count is
        doubled, as an error estimate.

    Returns
    -------
    value : float | array
        The expectation.
    error : float
        Only if ``return_error``.
    """
    points, weights = uniform_grid(bounds, n_nodes)
    value = np.tensordot(weights, np.asarray(func(points), dtype=float), 1)
    if not return_error:
        return value
    points, weights = uniform_grid(bounds, 2 * n_nodes)
    fine = np.tensordot(weights, np.asarray(func(points), dtype=float), 1)
    return value, float(np.max(np.abs(fine - value)))
