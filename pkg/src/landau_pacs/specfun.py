"""Special functions: associated Laguerre polynomials, log-factorials,
upper incomplete gamma of non-positive integer order and the Meijer-G
density G^{2,0}_{1,2}(x | n; 0, 0) used by the completeness measure.
"""

from functools import lru_cache
import math

import numpy as np
from scipy.special import expn, roots_genlaguerre

__all__ = [
    "laguerre_assoc",
    "laguerre_table",
    "log_laguerre_assoc",
    "laguerre_ratio",
    "log_factorial",
    "upper_gamma_nonpos",
    "meijer_density",
    "meijer_density_scaled",
]

# rescale the recurrence before values leave double range
_RESCALE_AT = 1e150

# partial fractions below this argument, integral representation above
_MEIJER_SWITCH = 5.0
_MEIJER_NODES = 64


def laguerre_assoc(n, k, y):
    """Associated Laguerre polynomial L^k_n(y) by the three-term recurrence.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    k : int
        Superscript. Negative integers are accepted; the recurrence defines
        the polynomial for any ``k``.
    y : float or numpy.ndarray
        Argument(s).

    Returns
    -------
    float or numpy.ndarray
        L^k_n(y) with the shape of ``y``.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    scalar = np.ndim(y) == 0
    y = np.asarray(y, dtype=float)
    prev = np.ones_like(y)
    if n == 0:
        return float(prev) if scalar else prev
    cur = 1.0 + k - y
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - y) * cur - (j + k) * prev) / (j + 1)
    return float(cur) if scalar else cur


def laguerre_table(n_max, k, y):
    """All of L^k_0(y) .. L^k_{n_max}(y), stacked along the first axis."""
    y = np.asarray(y, dtype=float)
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + k - y
    for j in range(1, n_max):
        out[j + 1] = ((2 * j + 1 + k - y) * out[j] - (j + k) * out[j - 1]) / (j + 1)
    return out


def log_laguerre_assoc(n, k, y):
    """ln L^k_n(y) for ``k >= 0`` and ``y <= 0``, where every term is positive.

    The recurrence is rescaled on the fly so arbitrarily large |y| or n never
    overflow.
    """
    if k < 0:
        raise ValueError("log form needs a non-negative superscript")
    scalar = np.ndim(y) == 0
    y = np.asarray(y, dtype=float)
    if np.any(y > 0):
        raise ValueError("log form needs y <= 0")
    prev = np.ones_like(y)
    logscale = np.zeros_like(y)
    if n == 0:
        return 0.0 if scalar else logscale
    cur = 1.0 + k - y
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - y) * cur - (j + k) * prev) / (j + 1)
        big = cur > _RESCALE_AT
        if np.any(big):
            s = np.where(big, cur, 1.0)
            prev = prev / s
            cur = cur / s
            logscale = logscale + np.log(s)
    out = np.log(cur) + logscale
    return float(out) if scalar else out


def laguerre_ratio(n_num, k_num, n_den, k_den, y):
    """L^{k_num}_{n_num}(y) / L^{k_den}_{n_den}(y) for y <= 0, overflow-free."""
    return np.exp(log_laguerre_assoc(n_num, k_num, y) - log_laguerre_assoc(n_den, k_den, y))


def log_factorial(n):
    """ln(n!)."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.lgamma(n + 1)


def upper_gamma_nonpos(j, x):
    """Upper incomplete gamma Γ(−j, x) for integer ``j >= 0`` and ``x > 0``.

    Uses Γ(−j, x) = x^{−j} E_{j+1}(x).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Γ(−j, x) diverges for x <= 0")
    if j < 0:
        raise ValueError("order must be non-positive (j >= 0)")
    out = x ** (-j) * expn(j + 1, x)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _meijer_nodes(n):
    v, w = roots_genlaguerre(_MEIJER_NODES, n - 1)
    return v, w / math.factorial(n - 1)


def _partial_fraction_scaled(n, x):
    # e^x Σ_j A_j x^j Γ(−j, x) = Σ_j A_j e^x E_{j+1}(x)
    total = np.zeros_like(x)
    ex = np.exp(x)
    for j in range(n):
        coeff = (-1) ** j / (math.factorial(j) * math.factorial(n - 1 - j))
        total += coeff * ex * expn(j + 1, x)
    return total


def _integral_scaled(n, x):
    # e^x G = 1/(n-1)! ∫ v^{n-1} e^{-v} (x+v)^{-n} dv
    v, w = _meijer_nodes(n)
    return (w[None, :] / (x[:, None] + v[None, :]) ** n).sum(axis=1)


def meijer_density_scaled(n, x):
    """e^x · G^{2,0}_{1,2}(x | n; 0, 0), which tends to x^{-n} for large x.

    For ``n >= 1`` this is the Tricomi function U(n, 1, x).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise ValueError("Meijer density is defined for x > 0")
    if n == 0:
        out = np.ones_like(x)
    else:
        out = np.full_like(x, np.inf)
        pos = x > 0
        small = pos & (x < _MEIJER_SWITCH)
        large = x >= _MEIJER_SWITCH
        if np.any(small):
            out[small] = _partial_fraction_scaled(n, x[small])
        if np.any(large):
            out[large] = _integral_scaled(n, x[large])
    return float(out[0]) if scalar else out


def meijer_density(n, x):
    """G^{2,0}_{1,2}(x | n; 0, 0), the function with Mellin transform Γ(s)²/Γ(n+s).

    For n = 0 this is e^{-x}; for n >= 1 it is Σ_{j<n} A_j x^j Γ(−j, x) with
    A_j = (−1)^j / (j! (n−1−j)!), diverging like −ln(x)/(n−1)! at the origin.
    Its moments are ∫ x^k G dx = k!² / (n+k)!.
    """
    scaled = meijer_density_scaled(n, x)
    with np.errstate(invalid="ignore"):
        out = np.where(np.isinf(scaled), np.inf, scaled * np.exp(-np.asarray(x, dtype=float)))
    return float(out) if np.ndim(x) == 0 else out
