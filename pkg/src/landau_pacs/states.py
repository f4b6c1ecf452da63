"""State families on Landau levels and their closed-form scalars.

Displaced number states |α>^b_n, two-variable coherent states |β, α> and
the photon-added family |β, α; n> ∝ (a†)^n |β, α>, built directly from
their Fock coefficients.
"""

from dataclasses import dataclass, replace
import cmath
import math
import re

import numpy as np

from .fock import (
    NATURAL,
    TruncationError,
    TwoModeState,
    apply_ladder,
    inner,
    truncation_cutoff,
)
from .specfun import laguerre_assoc, laguerre_ratio, log_laguerre_assoc

__all__ = [
    "StateLabel",
    "parse_complex",
    "format_complex",
    "default_cutoffs",
    "coherent_profile",
    "pacs_profile",
    "displaced_number_state",
    "two_variable_cs",
    "pacs_state",
    "photon_added_unnormalized",
    "pacs_norm_analytic",
    "overlap_analytic",
    "evolve_label",
    "nonlinear_residual",
]

# constructors refuse grids that drop more probability than this
MAX_TAIL = 1e-10

# extra terms summed past the cutoff when estimating the discarded tail
_TAIL_TERMS = 400


@dataclass(frozen=True)
class StateLabel:
    """(β, α, n): the analytic parameters of |β, α; n>."""

    beta: complex = 0j
    alpha: complex = 0j
    n_exc: int = 0

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not (cmath.isfinite(self.beta) and cmath.isfinite(self.alpha)):
            raise ValueError("β and α must be finite")
        if int(self.n_exc) != self.n_exc or self.n_exc < 0:
            raise ValueError(f"n_exc must be a non-negative integer, got {self.n_exc}")
        object.__setattr__(self, "n_exc", int(self.n_exc))

    @property
    def theta(self):
        return cmath.phase(self.beta)


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?(?:{_NUM}))?(?:(?P<im>[+-](?:{_NUM})?)i)?$")


def parse_complex(text):
    """Parse ``a``, ``a+bi`` or ``a-bi`` (decimals with optional exponent, no whitespace)."""
    match = _COMPLEX_RE.match(text)
    if not text or match is None or (match["re"] is None and match["im"] is None):
        raise ValueError(f"cannot parse complex value {text!r}; expected a+bi")
    re_part = float(match["re"]) if match["re"] is not None else 0.0
    im_txt = match["im"]
    if im_txt is None:
        im_part = 0.0
    elif im_txt in "+-":
        im_part = float(im_txt + "1")
    else:
        im_part = float(im_txt)
    return complex(re_part, im_part)


def format_complex(z):
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


def default_cutoffs(label):
    """Cutoffs from the truncation rule for ``label``."""
    return (
        truncation_cutoff(abs(label.beta) ** 2, label.n_exc),
        truncation_cutoff(abs(label.alpha) ** 2),
    )


def _log_coherent_terms(z, k):
    # ln|e^{-|z|²/2} z^k / √k!|
    mag = abs(z)
    with np.errstate(divide="ignore"):
        log_mag = np.where(k == 0, 0.0, k * math.log(mag)) if mag > 0 else np.where(k == 0, 0.0, -np.inf)
    return -0.5 * mag**2 + log_mag - 0.5 * np.array([math.lgamma(j + 1) for j in k])


def coherent_profile(z, cutoff):
    """Single-mode coherent amplitudes e^{-|z|²/2} z^k/√k!, k = 0..cutoff, and tail mass."""
    k = np.arange(cutoff + 1)
    amp = np.exp(_log_coherent_terms(z, k)) * np.exp(1j * k * cmath.phase(z))
    tail = _coherent_tail(z, cutoff)
    return amp, tail


def _coherent_tail(z, cutoff):
    k = np.arange(cutoff + 1, cutoff + 1 + _TAIL_TERMS)
    return float(np.sum(np.exp(2.0 * _log_coherent_terms(z, k))))


def _log_pacs_terms(beta, n_exc, k):
    # ln|c_k| for mode-a amplitudes of |β; n>, k >= n_exc
    x = abs(beta) ** 2
    j = k - n_exc
    log_norm = math.lgamma(n_exc + 1) + log_laguerre_assoc(n_exc, 0, -x)
    if abs(beta) > 0:
        log_pow = j * math.log(abs(beta))
    else:
        log_pow = np.where(j == 0, 0.0, -np.inf)
    lg_k = np.array([math.lgamma(i + 1) for i in k])
    lg_j = np.array([math.lgamma(i + 1) for i in j])
    return -0.5 * x + log_pow + 0.5 * lg_k - lg_j - 0.5 * log_norm


def pacs_profile(beta, n_exc, cutoff):
    """Mode-a amplitudes of the normalised (a†)^n|β>, k = 0..cutoff, and tail mass.

    c_k = e^{-|β|²/2} β^{k-n} √k! / ((k-n)! √(n! L_n(-|β|²))) for k >= n.
    """
    if cutoff < n_exc:
        raise TruncationError(f"cutoff {cutoff} below excitation order {n_exc}")
    amp = np.zeros(cutoff + 1, dtype=complex)
    k = np.arange(n_exc, cutoff + 1)
    with np.errstate(divide="ignore"):
        amp[n_exc:] = np.exp(_log_pacs_terms(beta, n_exc, k)) * np.exp(1j * (k - n_exc) * cmath.phase(beta))
        k_tail = np.arange(cutoff + 1, cutoff + 1 + _TAIL_TERMS)
        tail = float(np.sum(np.exp(2.0 * _log_pacs_terms(beta, n_exc, k_tail))))
    return amp, tail


def _product_state(profile_a, tail_a, profile_b, tail_b, max_tail):
    tail = tail_a + tail_b
    if tail > max_tail:
        raise TruncationError(f"cutoffs discard probability {tail:.3e} > {max_tail:.1e}")
    return TwoModeState(np.outer(profile_a, profile_b), tail)


def displaced_number_state(alpha, n, cutoffs, max_tail=MAX_TAIL):
    """|α>^b_n = e^{-|α|²/2} Σ_{m>=-n} α^{n+m}/√(n+m)! |n, m>."""
    if n > cutoffs[0]:
        raise TruncationError(f"Landau level {n} above cutoff_a {cutoffs[0]}")
    fa = np.zeros(cutoffs[0] + 1, dtype=complex)
    fa[n] = 1.0
    fb, tb = coherent_profile(alpha, cutoffs[1])
    return _product_state(fa, 0.0, fb, tb, max_tail)


def two_variable_cs(beta, alpha, cutoffs, max_tail=MAX_TAIL):
    """|β, α> = e^{-|β|²/2} Σ_n β^n/√n! |α>^b_n."""
    fa, ta = coherent_profile(beta, cutoffs[0])
    fb, tb = coherent_profile(alpha, cutoffs[1])
    return _product_state(fa, ta, fb, tb, max_tail)


def pacs_state(label, cutoffs=None, max_tail=MAX_TAIL):
    """Normalised |β, α; n> = (a†)^n |β, α> / √(n! L_n(-|β|²))."""
    if cutoffs is None:
        cutoffs = default_cutoffs(label)
    fa, ta = pacs_profile(label.beta, label.n_exc, cutoffs[0])
    fb, tb = coherent_profile(label.alpha, cutoffs[1])
    return _product_state(fa, ta, fb, tb, max_tail)


def photon_added_unnormalized(label, cutoffs=None):
    """(a†)^n |β, α> by repeated ladder action on the grid."""
    if cutoffs is None:
        cutoffs = default_cutoffs(label)
    state = two_variable_cs(label.beta, label.alpha, cutoffs)
    for _ in range(label.n_exc):
        state = apply_ladder(state, "a", "raise")
    return state


def pacs_norm_analytic(beta, n_exc):
    """<β, α| a^n (a†)^n |β, α> = n! L_n(-|β|²)."""
    return math.factorial(n_exc) * laguerre_assoc(n_exc, 0, -abs(beta) ** 2)


def overlap_analytic(beta, n1, n2):
    """<β, α; n2 | β, α; n1>.

    For n1 >= n2 this is β̄^{n1-n2} n2! L^{n1-n2}_{n2}(-|β|²) / √(n1! L_{n1} n2! L_{n2});
    the reverse order is the complex conjugate.
    """
    if n1 < 0 or n2 < 0:
        raise ValueError("excitation orders must be non-negative")
    if n1 < n2:
        return overlap_analytic(beta, n2, n1).conjugate()
    x = abs(beta) ** 2
    d = n1 - n2
    if d == 0:
        return 1.0 + 0j
    if x == 0:
        return 0j
    # n2! L^d_{n2} / √(n1! L_{n1} n2! L_{n2}), assembled in logs
    log_mag = (
        d * math.log(abs(beta))
        + math.lgamma(n2 + 1)
        + log_laguerre_assoc(n2, d, -x)
        - 0.5 * (math.lgamma(n1 + 1) + log_laguerre_assoc(n1, 0, -x))
        - 0.5 * (math.lgamma(n2 + 1) + log_laguerre_assoc(n2, 0, -x))
    )
    return math.exp(log_mag) * cmath.exp(-1j * d * cmath.phase(beta))


def evolve_label(label, t, scales=NATURAL):
    """e^{-iHt/ħ}|β, α; n> = phase · |β e^{-iωt}, α; n>; returns (phase, new label)."""
    w = scales.omega
    phase = cmath.exp(-1j * (label.n_exc + 0.5) * w * t)
    return phase, replace(label, beta=label.beta * cmath.exp(-1j * w * t))


def nonlinear_residual(label, cutoffs=None, state=None):
    """‖(1 − n/(N+1)) a ψ − β ψ‖ with N = a†a, for ψ = |β, α; n> (or ``state``)."""
    if state is None:
        state = pacs_state(label, cutoffs)
    lowered = apply_ladder(state, "a", "lower").amplitudes
    n_a = np.arange(state.cutoff_a + 1, dtype=float)[:, None]
    f = 1.0 - label.n_exc / (n_a + 1.0)
    resid = f * lowered - label.beta * state.amplitudes
    return float(np.linalg.norm(resid))


def laguerre_number_moments(beta, n_exc):
    """(<N>, <N²>) of |β, α; n> from Laguerre ratios."""
    y = -abs(beta) ** 2
    r1 = laguerre_ratio(n_exc + 1, 0, n_exc, 0, y)
    r2 = laguerre_ratio(n_exc + 2, 0, n_exc, 0, y)
    mean = (n_exc + 1) * r1 - 1.0
    second = (n_exc + 1) * (n_exc + 2) * r2 - 3.0 * (n_exc + 1) * r1 + 1.0
    return float(mean), float(second)


def grid_overlap(beta, alpha, n1, n2, cutoffs=None):
    """<β, α; n2 | β, α; n1> from the Fock grids."""
    top = max(n1, n2)
    if cutoffs is None:
        cutoffs = default_cutoffs(StateLabel(beta, alpha, top))
    s1 = pacs_state(StateLabel(beta, alpha, n1), cutoffs)
    s2 = pacs_state(StateLabel(beta, alpha, n2), cutoffs)
    return inner(s2, s1)
