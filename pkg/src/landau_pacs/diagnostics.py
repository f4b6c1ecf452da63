"""Nonclassicality diagnostics for |β, α; n>: photon-number distribution,
Mandel Q, low-order expectation values, the quadrature covariance matrix
and squeezing scans.

The quadratures are

    x = √(ħ/2Mω) (b + b† − a − a†),   p = (i/2) √(Mħω/2) (b† − b + a − a†),

and σ_uv = ½⟨uv + vu⟩ − ⟨u⟩⟨v⟩.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .fock import NATURAL, apply_ladder, inner
from .specfun import laguerre_ratio, log_laguerre_assoc
from .states import StateLabel, laguerre_number_moments, pacs_state

__all__ = [
    "photon_probability",
    "lowest_level_poisson",
    "distribution_grid",
    "number_moments",
    "mandel_q",
    "Expectations",
    "expectation_table",
    "grid_expectations",
    "CovarianceReport",
    "covariance_report",
    "grid_covariance",
    "grid_commutator",
    "quadrature_actions",
    "pacs_grid_moments",
    "squeezing_scan",
    "write_series_csv",
]

# Fig. 3 reference line, natural units
DEFAULT_REFERENCE_PP = 0.5


def _log_poisson(x, k):
    # ln(e^{-x} x^k / k!), with 0^0 = 1
    if k < 0:
        return -math.inf
    if x == 0:
        return 0.0 if k == 0 else -math.inf
    return -x + k * math.log(x) - math.lgamma(k + 1)


def _log_a_bracket(x, n_exc, n):
    # ln of n!/(𝐧!(n-𝐧)! L_𝐧(-x)) · x^{n-𝐧} e^{-x}/(n-𝐧)!
    j = n - n_exc
    return (
        math.lgamma(n + 1)
        - math.lgamma(n_exc + 1)
        - math.lgamma(j + 1)
        - log_laguerre_assoc(n_exc, 0, -x)
        + _log_poisson(x, j)
    )


def photon_probability(label, n, m):
    """p^𝐧_{n,m}(β, α) = |<n, m|β, α; 𝐧>|², zero outside n >= 𝐧, n + m >= 0."""
    if n < label.n_exc or n + m < 0:
        return 0.0
    xb = abs(label.beta) ** 2
    xa = abs(label.alpha) ** 2
    return math.exp(_log_a_bracket(xb, label.n_exc, n) + _log_poisson(xa, n + m))


def lowest_level_poisson(label, m):
    """The lowest-Landau-level (n = 0) Poisson law: e^{-|β|²} · Poisson_{|α|²}(m).

    It agrees with :func:`photon_probability` only for 𝐧 = 0; for 𝐧 >= 1 the
    level n = 0 is outside the support and the true probability is 0.
    """
    if m < 0:
        return 0.0
    return math.exp(-abs(label.beta) ** 2 + _log_poisson(abs(label.alpha) ** 2, m))


def distribution_grid(label, cutoffs):
    """p^𝐧 on the (n_a, n_b) grid, i.e. entry [n, n + m]."""
    xb = abs(label.beta) ** 2
    xa = abs(label.alpha) ** 2
    pa = np.array(
        [math.exp(_log_a_bracket(xb, label.n_exc, n)) if n >= label.n_exc else 0.0 for n in range(cutoffs[0] + 1)]
    )
    pb = np.array([math.exp(_log_poisson(xa, k)) for k in range(cutoffs[1] + 1)])
    return np.outer(pa, pb)


def number_moments(beta, n_exc):
    """(<N>, <N²>) of mode a in |β, α; 𝐧>."""
    return laguerre_number_moments(beta, n_exc)


def mandel_q(beta, n_exc):
    """Mandel Q of mode a; −1 at β = 0 for 𝐧 >= 1 and 0 at β = 𝐧 = 0."""
    if beta == 0:
        return -1.0 if n_exc >= 1 else 0.0
    mean, second = number_moments(beta, n_exc)
    return (second - mean**2) / mean - 1.0


@dataclass(frozen=True)
class Expectations:
    b: complex
    b2: complex
    bdag_b: float
    a: complex
    a2: complex
    adag_a: float


def expectation_table(label):
    """Closed-form <b>, <b²>, <b†b>, <a>, <a²>, <a†a> in |β, α; 𝐧>."""
    beta, alpha, n = label.beta, label.alpha, label.n_exc
    y = -abs(beta) ** 2
    r1 = float(laguerre_ratio(n, 1, n, 0, y))
    r2 = float(laguerre_ratio(n, 2, n, 0, y))
    return Expectations(
        b=alpha,
        b2=alpha**2,
        bdag_b=abs(alpha) ** 2,
        a=beta * r1,
        a2=beta**2 * r2,
        adag_a=number_moments(beta, n)[0],
    )


def _ladders(state):
    return {
        (mode, d): apply_ladder(state, mode, d)
        for mode in ("a", "b")
        for d in ("lower", "raise")
    }


def grid_expectations(state):
    """The same six expectations evaluated on a Fock grid."""
    lo_a = apply_ladder(state, "a", "lower")
    lo_b = apply_ladder(state, "b", "lower")
    return Expectations(
        b=inner(state, lo_b),
        b2=inner(state, apply_ladder(lo_b, "b", "lower")),
        bdag_b=inner(lo_b, lo_b).real,
        a=inner(state, lo_a),
        a2=inner(state, apply_ladder(lo_a, "a", "lower")),
        adag_a=inner(lo_a, lo_a).real,
    )


@dataclass(frozen=True)
class CovarianceReport:
    sigma_xx: float
    sigma_pp: float
    sigma_xp: float
    delta: float
    squeezed_p: bool
    reference_pp: float
    vacuum_pp: float


def _laguerre_bits(beta, n):
    x = abs(beta) ** 2
    y = -x
    # everything normalised by L_n(-x)
    r_next = float(laguerre_ratio(n + 1, 0, n, 0, y))
    r1 = float(laguerre_ratio(n, 1, n, 0, y))
    r2 = float(laguerre_ratio(n, 2, n, 0, y))
    return x, r_next, r1, r2


def covariance_report(label, scales=NATURAL, reference_pp=DEFAULT_REFERENCE_PP):
    """σ_xx, σ_pp, σ_xp and Δ = σ_xx σ_pp − σ_xp² in closed form."""
    n = label.n_exc
    theta = cmath.phase(label.beta)
    x, r_next, r1, r2 = _laguerre_bits(label.beta, n)
    hbar, mass, omega = scales.hbar, scales.mass, scales.omega
    base = (n + 1) * r_next
    s_xx = hbar / (mass * omega) * (base + x * math.cos(2 * theta) * r2 - 2 * x * math.cos(theta) ** 2 * r1**2)
    s_pp = mass * hbar * omega / 4.0 * (base - x * math.cos(2 * theta) * r2 - 2 * x * math.sin(theta) ** 2 * r1**2)
    s_xp = hbar / 2.0 * x * math.sin(2 * theta) * (r2 - r1**2)
    return CovarianceReport(
        sigma_xx=s_xx,
        sigma_pp=s_pp,
        sigma_xp=s_xp,
        delta=s_xx * s_pp - s_xp**2,
        squeezed_p=s_pp < reference_pp,
        reference_pp=reference_pp,
        vacuum_pp=mass * hbar * omega / 4.0,
    )


def quadrature_actions(state, scales=NATURAL):
    """(x ψ, p ψ) on the grid."""
    lad = _ladders(state)
    cx = math.sqrt(scales.hbar / (2 * scales.mass * scales.omega))
    cp = 0.5j * math.sqrt(scales.mass * scales.hbar * scales.omega / 2)
    x_psi = (lad["b", "lower"] + lad["b", "raise"] - lad["a", "lower"] - lad["a", "raise"]).scaled(cx)
    p_psi = (lad["b", "raise"] - lad["b", "lower"] + lad["a", "lower"] - lad["a", "raise"]).scaled(cp)
    return x_psi, p_psi


def grid_covariance(state, scales=NATURAL):
    """(σ_xx, σ_pp, σ_xp) from the grid; x and p are Hermitian, so
    <u²> = ‖uψ‖² and ½<xp + px> = Re<xψ|pψ>."""
    x_psi, p_psi = quadrature_actions(state, scales)
    mx = inner(state, x_psi).real
    mp = inner(state, p_psi).real
    s_xx = inner(x_psi, x_psi).real - mx**2
    s_pp = inner(p_psi, p_psi).real - mp**2
    s_xp = inner(x_psi, p_psi).real - mx * mp
    return s_xx, s_pp, s_xp


def grid_commutator(state, scales=NATURAL):
    """<[x, p]> on the grid, computed as <xψ|pψ> − <pψ|xψ>."""
    x_psi, p_psi = quadrature_actions(state, scales)
    return inner(x_psi, p_psi) - inner(p_psi, x_psi)


def squeezing_scan(n_values, thetas, beta_abs, scales=NATURAL):
    """σ_pp series keyed by (𝐧, θ), each evaluated on ``beta_abs``."""
    if len(n_values) == 0 or len(thetas) == 0 or len(beta_abs) == 0:
        raise ValueError("scan grids must be non-empty")
    series = {}
    for n in n_values:
        for th in thetas:
            series[(n, th)] = np.array(
                [covariance_report(StateLabel(b * cmath.exp(1j * th), 0, n), scales).sigma_pp for b in beta_abs]
            )
    return series


def write_series_csv(fh, x_name, x, columns, meta=None):
    """Write ``x,series1,...`` with ``#`` metadata lines first.

    ``columns`` maps column names to arrays aligned with ``x``.
    """
    for key, value in (meta or {}).items():
        fh.write(f"# {key}={value}\n")
    names = list(columns)
    fh.write("# columns=" + ",".join([x_name] + names) + "\n")
    fh.write(",".join([x_name] + names) + "\n")
    for i, xv in enumerate(x):
        row = [f"{xv:.12g}"] + [f"{columns[name][i]:.12g}" for name in names]
        fh.write(",".join(row) + "\n")


def pacs_grid_moments(label, cutoffs=None):
    """(<N>, <N²>) of mode a from the Fock grid."""
    state = pacs_state(label, cutoffs)
    probs = np.abs(state.amplitudes) ** 2
    occ = np.arange(state.cutoff_a + 1, dtype=float)[:, None]
    total = probs.sum()
    return float((probs * occ).sum() / total), float((probs * occ**2).sum() / total)
