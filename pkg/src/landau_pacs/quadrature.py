"""Quadrature rules shared by the wavefunction and measure modules."""

from functools import lru_cache

import numpy as np
from scipy.special import roots_laguerre, roots_legendre

__all__ = ["gauss_laguerre", "log_singular_rule", "angular_rule"]


@lru_cache(maxsize=None)
def gauss_laguerre(n_nodes):
    """Nodes and weights for ∫_0^∞ e^{-u} f(u) du."""
    u, w = roots_laguerre(n_nodes)
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


@lru_cache(maxsize=None)
def log_singular_rule(n_nodes, split=1.0, power=6):
    """Nodes and weights for ∫_0^∞ e^{-x} f(x) dx when f ~ ln x at the origin.

    Half the nodes are Gauss-Legendre on [0, split] after x = split·t^power,
    which flattens the logarithm; the rest are Gauss-Laguerre on [split, ∞).
    """
    n_inner = n_nodes // 2
    n_outer = n_nodes - n_inner
    t, wt = roots_legendre(n_inner)
    t = 0.5 * (t + 1.0)
    wt = 0.5 * wt
    x_in = split * t**power
    w_in = split * power * t ** (power - 1) * wt * np.exp(-x_in)
    y, wy = roots_laguerre(n_outer)
    x = np.concatenate([x_in, split + y])
    w = np.concatenate([w_in, wy * np.exp(-split)])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def angular_rule(n_nodes):
    """Uniform trapezoid nodes on [0, 2π); exact for e^{ikφ} with |k| < n_nodes."""
    phi = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    return phi, np.full(n_nodes, 2.0 * np.pi / n_nodes)
