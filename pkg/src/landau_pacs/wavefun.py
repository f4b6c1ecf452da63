"""Position-space (polar) representations of the Landau-level state families.

With c = Mω/2ħ and u = c r², the Landau functions are

    ψ_{n,m}(r, φ) = √(n!/(π (n+m)!)) c^{(m+1)/2} r^m e^{imφ} e^{-u/2} L^m_n(u).

Negative m is evaluated through L^{-s}_n(u) = (n-s)!/n! (-u)^s L^s_{n-s}(u),
which turns the singular-looking r^m into the regular r^{|m|}.
"""

import math
from typing import NamedTuple

import numpy as np

from .fock import NATURAL, index_map
from .quadrature import angular_rule, gauss_laguerre
from .specfun import laguerre_table
from .states import StateLabel, format_complex, pacs_state

__all__ = [
    "PolarPoint",
    "landau_psi",
    "landau_table",
    "displaced_number_psi",
    "two_variable_psi",
    "pacs_psi",
    "basis_sum_psi",
    "plane_integral",
    "landau_gram",
    "write_samples",
]

RADIAL_NODES = 128
ANGULAR_NODES = 256


class PolarPoint(NamedTuple):
    r: float
    phi: float

    @classmethod
    def make(cls, r, phi):
        if r < 0:
            raise ValueError(f"radius must be non-negative, got {r}")
        return cls(float(r), float(phi) % (2.0 * math.pi))


def _coords(r, phi, scales):
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    c = scales.inv_length2
    return r, phi, c


def landau_table(n_a_max, n_b_max, r, phi, scales=NATURAL):
    """ψ_{n_a, n_b - n_a}(r, φ) for all grid occupations.

    Returns an array of shape (n_a_max+1, n_b_max+1) + shape(r).
    """
    r, phi, c = _coords(r, phi, scales)
    r, phi = np.broadcast_arrays(r, phi)
    u = c * r**2
    with np.errstate(divide="ignore"):
        log_u = np.log(u)
    out = np.zeros((n_a_max + 1, n_b_max + 1) + r.shape, dtype=complex)
    prefactor = math.sqrt(c / math.pi)
    lo_max = min(n_a_max, n_b_max)
    for s in range(max(n_a_max, n_b_max) + 1):
        # pairs (lo, lo + s) with superscript s = |m|
        table = laguerre_table(lo_max, s, u)
        for lo in range(lo_max + 1):
            hi = lo + s
            log_mag = 0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1)) - 0.5 * u
            if s > 0:
                radial = np.where(u > 0, np.exp(log_mag + 0.5 * s * log_u), 0.0)
            else:
                radial = np.exp(log_mag)
            radial = prefactor * radial * table[lo]
            if hi <= n_b_max and lo <= n_a_max:
                # n_a = lo, n_b = hi: m = +s
                out[lo, hi] = radial * np.exp(1j * s * phi)
            if s > 0 and hi <= n_a_max and lo <= n_b_max:
                # n_a = hi, n_b = lo: m = -s
                out[hi, lo] = (-1) ** s * radial * np.exp(-1j * s * phi)
    return out


def landau_psi(n, m, p, scales=NATURAL):
    """ψ_{n,m} at polar point(s) ``p``."""
    n_a, n_b = index_map((n, m))
    val = landau_table(n_a, n_b, p.r, p.phi, scales)[n_a, n_b]
    return complex(val) if np.ndim(val) == 0 else val


def _z_bar_shift(r, phi, c):
    # √c r e^{-iφ}
    return math.sqrt(c) * r * np.exp(-1j * phi)


def displaced_number_psi(alpha, n, p, scales=NATURAL):
    """⟨r, φ|α⟩^b_n in closed form."""
    r, phi, c = _coords(p.r, p.phi, scales)
    alpha = complex(alpha)
    zbar = _z_bar_shift(r, phi, c)
    z = np.conj(zbar)
    expo = -0.5 * abs(alpha) ** 2 + alpha * z - 0.5 * c * r**2
    val = math.sqrt(c / math.pi) * (alpha - zbar) ** n / math.sqrt(math.factorial(n)) * np.exp(expo)
    return complex(val) if np.ndim(val) == 0 else val


def two_variable_psi(beta, alpha, p, scales=NATURAL):
    """⟨r, φ|β, α⟩ in closed form."""
    r, phi, c = _coords(p.r, p.phi, scales)
    beta, alpha = complex(beta), complex(alpha)
    zbar = _z_bar_shift(r, phi, c)
    expo = (
        -0.5 * (abs(alpha) ** 2 + abs(beta) ** 2)
        + alpha * beta
        + alpha * np.conj(zbar)
        - beta * zbar
        - 0.5 * c * r**2
    )
    val = math.sqrt(c / math.pi) * np.exp(expo)
    return complex(val) if np.ndim(val) == 0 else val


def basis_sum_psi(state, p, scales=NATURAL):
    """Σ amplitude(n_a, n_b) ψ_{n_a, n_b - n_a}(p) over the state's grid."""
    table = landau_table(state.cutoff_a, state.cutoff_b, p.r, p.phi, scales)
    val = np.tensordot(state.amplitudes, table, axes=([0, 1], [0, 1]))
    return complex(val) if np.ndim(val) == 0 else val


def pacs_psi(label, p, scales=NATURAL, cutoffs=None):
    """⟨r, φ|β, α; n⟩.

    n = 0 and n = 1 use closed forms; higher orders are summed over the
    Fock grid of :func:`pacs_state`.
    """
    if label.n_exc == 0:
        return two_variable_psi(label.beta, label.alpha, p, scales)
    if label.n_exc == 1:
        r, phi, c = _coords(p.r, p.phi, scales)
        factor = (label.alpha - _z_bar_shift(r, phi, c)) / math.sqrt(1.0 + abs(label.beta) ** 2)
        val = factor * two_variable_psi(label.beta, label.alpha, p, scales)
        return complex(val) if np.ndim(val) == 0 else val
    return basis_sum_psi(pacs_state(label, cutoffs), p, scales)


def landau_gram(levels, scales=NATURAL, radial_nodes=RADIAL_NODES, angular_nodes=ANGULAR_NODES):
    """Matrix of ∫∫ conj(ψ_i) ψ_j r dr dφ over the Landau levels ``levels`` = [(n, m), ...]."""
    occ = [index_map(lvl) for lvl in levels]
    n_a_max = max(o.n_a for o in occ)
    n_b_max = max(o.n_b for o in occ)
    c = scales.inv_length2
    u, w = gauss_laguerre(radial_nodes)
    phi, wphi = angular_rule(angular_nodes)
    r = np.sqrt(u / c)
    table = landau_table(n_a_max, n_b_max, r[:, None], phi[None, :], scales)
    funcs = np.array([table[o.n_a, o.n_b] for o in occ])
    weights = (w * np.exp(u) / (2.0 * c))[:, None] * wphi[None, :]
    return np.einsum("irt,jrt,rt->ij", funcs.conj(), funcs, weights)


def plane_integral(fn, scales=NATURAL, radial_nodes=RADIAL_NODES, angular_nodes=ANGULAR_NODES):
    """∫∫ fn(r, φ) r dr dφ over the plane.

    With u = Mωr²/2ħ, r dr = (ħ/Mω) du; the u-integral uses Gauss-Laguerre
    after restoring e^{u}, the angle a uniform trapezoid rule.
    ``fn`` receives broadcastable arrays ``r[:, None]`` and ``phi[None, :]``.
    """
    c = scales.inv_length2
    u, w = gauss_laguerre(radial_nodes)
    phi, wphi = angular_rule(angular_nodes)
    r = np.sqrt(u / c)
    values = np.asarray(fn(r[:, None], phi[None, :]))
    radial_weights = w * np.exp(u) / (2.0 * c)
    return complex(np.einsum("i,j,ij->", radial_weights, wphi, values))


_FAMILIES = ("landau", "displaced", "two_variable", "pacs")


def sample_family(family, label, p, scales=NATURAL, m=0):
    """Evaluate one of the four families by name; ``m`` only applies to ``landau``."""
    if family == "landau":
        return landau_psi(label.n_exc, m, p, scales)
    if family == "displaced":
        return displaced_number_psi(label.alpha, label.n_exc, p, scales)
    if family == "two_variable":
        return two_variable_psi(label.beta, label.alpha, p, scales)
    if family == "pacs":
        return pacs_psi(label, p, scales)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(_FAMILIES)}")


def write_samples(fh, family, label, r, phi, scales=NATURAL):
    """Write ``r,phi,re,im`` rows on the product grid of ``r`` and ``phi``."""
    if not isinstance(label, StateLabel):
        raise TypeError("label must be a StateLabel")
    rr, pp = np.meshgrid(np.asarray(r, float), np.asarray(phi, float) % (2 * math.pi), indexing="ij")
    vals = sample_family(family, label, PolarPoint(rr, pp), scales)
    fh.write(
        f"# family={family} beta={format_complex(label.beta)} "
        f"alpha={format_complex(label.alpha)} n={label.n_exc}\n"
    )
    for rv, pv, z in zip(rr.ravel(), pp.ravel(), np.ravel(vals)):
        fh.write(f"{rv:.12g},{pv:.12g},{z.real:.12g},{z.imag:.12g}\n")
