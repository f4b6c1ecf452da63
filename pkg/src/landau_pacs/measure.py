"""Resolution-of-identity measure for |β, α; n>.

dη_n(β) = K_n(|β|) d²β with K_n = (n!/π) e^{x} L_n(−x) G(x | n; 0, 0),
x = |β|². In the mode-a factor,

    ∫ d²β K_n |β; n⟩⟨β; n| = Σ_{k>=n} |k⟩⟨k|.

Radial integrals in x use the composite rule from :mod:`.quadrature`,
because G has a logarithmic singularity at x = 0 for n >= 1.
"""

from dataclasses import dataclass
import math

import numpy as np

from .quadrature import angular_rule, log_singular_rule
from .specfun import laguerre_assoc, meijer_density_scaled
from .states import pacs_profile

__all__ = [
    "MeasureDensity",
    "density_K",
    "sample_density",
    "moment_exact",
    "verify_moments",
    "ProjectorReport",
    "reconstruct_projector",
    "write_fig1_csv",
]

RADIAL_NODES = 128
ANGULAR_NODES = 256


class QuadratureError(RuntimeError):
    """The quadrature did not reach the requested accuracy."""


@dataclass(frozen=True)
class MeasureDensity:
    n_exc: int
    x: np.ndarray
    values: np.ndarray


def density_K(n_exc, beta_abs):
    """K_n(|β|); +inf at β = 0 for n >= 1 (logarithmic divergence), 1/π for n = 0."""
    x = np.asarray(beta_abs, dtype=float) ** 2
    if np.any(x < 0) or np.any(np.asarray(beta_abs) < 0):
        raise ValueError("|β| must be non-negative")
    # e^x G(x) is evaluated directly, so no exponential cancellation occurs
    out = math.factorial(n_exc) / math.pi * laguerre_assoc(n_exc, 0, -x) * meijer_density_scaled(n_exc, x)
    return float(out) if np.ndim(out) == 0 else out


def sample_density(n_exc, beta_abs):
    beta_abs = np.asarray(beta_abs, dtype=float)
    return MeasureDensity(n_exc, beta_abs**2, np.atleast_1d(density_K(n_exc, beta_abs)))


def moment_exact(n_exc, k):
    """k!² / (n + k)!."""
    return math.exp(2 * math.lgamma(k + 1) - math.lgamma(n_exc + k + 1))


def verify_moments(n_exc, k_max, nodes=RADIAL_NODES, tol=None):
    """Worst relative deviation of ∫ x^k G dx from k!²/(n+k)!, k = 0..k_max.

    Raises :class:`QuadratureError` if ``tol`` is given and exceeded.
    """
    if k_max > 20:
        raise ValueError("k_max must be <= 20")
    x, w = log_singular_rule(nodes)
    scaled = meijer_density_scaled(n_exc, x)
    worst = 0.0
    for k in range(k_max + 1):
        approx = float(np.sum(w * x**k * scaled))
        exact = moment_exact(n_exc, k)
        worst = max(worst, abs(approx - exact) / exact)
    if tol is not None and worst > tol:
        raise QuadratureError(f"moment law off by {worst:.3e} (> {tol:.1e}) at n={n_exc}")
    return worst


@dataclass(frozen=True)
class ProjectorReport:
    matrix: np.ndarray
    target: np.ndarray
    deviation: float
    diagonal_deviation: float
    offdiag_max: float


def reconstruct_projector(
    n_exc, alpha=0j, radial_nodes=RADIAL_NODES, angular_nodes=ANGULAR_NODES, cutoff=None
):
    """∫ d²β K_n |β; n⟩⟨β; n| restricted to mode a, on levels 0..cutoff.

    ``alpha`` only fixes the mode-b factor, which is the same rank-1 coherent
    projector for every β and drops out of the mode-a marginal.
    """
    del alpha
    if cutoff is None:
        cutoff = n_exc + 30
    x, w = log_singular_rule(radial_nodes)
    theta, wtheta = angular_rule(angular_nodes)
    # d²β = ½ dx dθ; the rule's weights carry e^{-x}, restored here
    radial_w = 0.5 * w * np.exp(x) * density_K(n_exc, np.sqrt(x))
    mags = np.empty((x.size, cutoff + 1))
    for i, xi in enumerate(x):
        amp, _ = pacs_profile(math.sqrt(xi), n_exc, cutoff)
        mags[i] = amp.real
    k = np.arange(cutoff + 1)
    phases = np.exp(1j * np.outer(theta, k))
    # coefficient of |k> at β = √x e^{iθ}: |c_k(x)| e^{i(k-n)θ}; the n offset cancels in c c†
    coeffs = mags[:, None, :] * phases[None, :, :]
    weights = radial_w[:, None] * wtheta[None, :]
    matrix = np.einsum("it,itj,itk->jk", weights, coeffs, coeffs.conj())
    target = np.diag((k >= n_exc).astype(float))
    diff = matrix - target
    off = diff - np.diag(np.diag(diff))
    return ProjectorReport(
        matrix=matrix,
        target=target,
        deviation=float(np.abs(diff).max()),
        diagonal_deviation=float(np.abs(np.diag(diff)).max()),
        offdiag_max=float(np.abs(off).max()),
    )


def write_fig1_csv(fh, beta_abs, n_values, meta=None):
    """``beta_abs,K_n0,K_n1,...`` preceded by ``#`` metadata."""
    for key, value in (meta or {}).items():
        fh.write(f"# {key}={value}\n")
    names = [f"K_n{n}" for n in n_values]
    fh.write("# columns=" + ",".join(["beta_abs"] + names) + "\n")
    fh.write(",".join(["beta_abs"] + names) + "\n")
    cols = [np.atleast_1d(density_K(n, beta_abs)) for n in n_values]
    for i, b in enumerate(beta_abs):
        fh.write(",".join([f"{b:.12g}"] + [f"{c[i]:.12g}" for c in cols]) + "\n")
