"""Truncated two-mode Fock space.

A Landau level |n, m> is stored at grid position (n_a, n_b) = (n, n + m):
mode a carries the Landau level, mode b the angular-momentum ladder.
Flattened views are row-major in (n_a, n_b).
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "TruncationError",
    "LevelIndex",
    "ModeOccupation",
    "PhysicalScales",
    "NATURAL",
    "TwoModeState",
    "index_map",
    "level_index",
    "truncation_cutoff",
    "basis_state",
    "vacuum",
    "apply_ladder",
    "inner",
    "norm",
    "number_moment",
    "apply_hamiltonian",
    "apply_hamiltonian_b_form",
    "propagate",
    "ladder_matrix",
    "dump_state",
    "load_state",
]

DEFAULT_MAX_SPILL = 1e-12


class TruncationError(RuntimeError):
    """Raised when probability would leak out of the truncated grid."""


class LevelIndex(NamedTuple):
    n: int
    m: int


class ModeOccupation(NamedTuple):
    n_a: int
    n_b: int


@dataclass(frozen=True)
class PhysicalScales:
    """ħ, M and the cyclotron frequency ω. All default to 1."""

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def inv_length2(self):
        """Mω/2ħ, the coefficient of r² in the Laguerre argument."""
        return self.mass * self.omega / (2.0 * self.hbar)


NATURAL = PhysicalScales()


def index_map(idx):
    """(n, m) -> (n_a, n_b) = (n, n + m)."""
    n, m = idx
    if n < 0 or n + m < 0:
        raise ValueError(f"invalid Landau index (n={n}, m={m}): need n >= 0 and n + m >= 0")
    return ModeOccupation(n, n + m)


def level_index(occ):
    """Inverse of :func:`index_map`."""
    n_a, n_b = occ
    if n_a < 0 or n_b < 0:
        raise ValueError(f"occupations must be non-negative, got {occ}")
    return LevelIndex(n_a, n_b - n_a)


def truncation_cutoff(mean_photons, n_exc=0):
    """Cutoff n_exc + |z|² + 10√(|z|²+1) + 10, rounded up."""
    return int(math.ceil(n_exc + mean_photons + 10.0 * math.sqrt(mean_photons + 1.0) + 10.0))


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Amplitudes on the (cutoff_a + 1) x (cutoff_b + 1) grid.

    ``tail_bound`` bounds the probability that the truncation discards.
    """

    amplitudes: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.ndim != 2:
            raise ValueError("amplitudes must be a 2-d grid")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def cutoff_a(self):
        return self.amplitudes.shape[0] - 1

    @property
    def cutoff_b(self):
        return self.amplitudes.shape[1] - 1

    @property
    def cutoffs(self):
        return (self.cutoff_a, self.cutoff_b)

    def vector(self):
        return self.amplitudes.reshape(-1)

    def normalized(self):
        return TwoModeState(self.amplitudes / norm(self), self.tail_bound)

    def __add__(self, other):
        _check_same_grid(self, other)
        return TwoModeState(self.amplitudes + other.amplitudes, self.tail_bound + other.tail_bound)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return TwoModeState(self.amplitudes - other.amplitudes, self.tail_bound + other.tail_bound)

    def scaled(self, factor):
        return TwoModeState(self.amplitudes * factor, self.tail_bound * abs(factor) ** 2)

    def __getitem__(self, idx):
        """Amplitude of Landau level ``idx = (n, m)``; zero outside the grid."""
        n_a, n_b = index_map(idx)
        if n_a > self.cutoff_a or n_b > self.cutoff_b:
            return 0.0j
        return complex(self.amplitudes[n_a, n_b])


def _check_same_grid(u, v):
    if u.amplitudes.shape != v.amplitudes.shape:
        raise ValueError(f"grid mismatch {u.cutoffs} vs {v.cutoffs}")


def basis_state(idx, cutoffs):
    """|n, m> on a grid with the given (cutoff_a, cutoff_b)."""
    n_a, n_b = index_map(idx)
    if n_a > cutoffs[0] or n_b > cutoffs[1]:
        raise TruncationError(f"level {tuple(idx)} lies outside cutoffs {tuple(cutoffs)}")
    amp = np.zeros((cutoffs[0] + 1, cutoffs[1] + 1), dtype=complex)
    amp[n_a, n_b] = 1.0
    return TwoModeState(amp)


def vacuum(cutoffs):
    return basis_state((0, 0), cutoffs)


def apply_ladder(state, mode, direction, max_spill=DEFAULT_MAX_SPILL):
    """Apply a, a†, b or b† to ``state``.

    ``mode`` is ``"a"`` or ``"b"``; ``direction`` is ``"lower"`` or ``"raise"``.
    Raising pushes the boundary row (or column) off the grid; if the
    probability pushed out exceeds ``max_spill`` a :class:`TruncationError`
    is raised, otherwise it is added to the tail bound.
    """
    if mode not in ("a", "b"):
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    if direction not in ("lower", "raise"):
        raise ValueError(f"direction must be 'lower' or 'raise', got {direction!r}")
    amp = state.amplitudes
    axis = 0 if mode == "a" else 1
    if axis == 1:
        amp = amp.T
    dim = amp.shape[0]
    sq = np.sqrt(np.arange(1, dim, dtype=float))[:, None]
    out = np.zeros_like(amp)
    # the discarded tail can be pushed into the box by up to a factor ~(cutoff+1)
    tail = state.tail_bound * (dim + 1)
    if direction == "lower":
        out[:-1] = sq * amp[1:]
    else:
        spill = dim * float(np.sum(np.abs(amp[-1]) ** 2))
        if spill > max_spill:
            raise TruncationError(
                f"raising mode {mode} spills probability {spill:.3e} past cutoff {dim - 1}"
            )
        out[1:] = sq * amp[:-1]
        tail += spill
    if axis == 1:
        out = out.T
    return TwoModeState(out, tail)


def inner(u, v):
    """<u|v>, conjugate-linear in ``u``. Smaller grids are zero-padded."""
    a, b = u.amplitudes, v.amplitudes
    if a.shape != b.shape:
        shape = (max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1]))
        a = _embed(a, shape)
        b = _embed(b, shape)
    return complex(np.vdot(a, b))


def _embed(amp, shape):
    out = np.zeros(shape, dtype=complex)
    out[: amp.shape[0], : amp.shape[1]] = amp
    return out


def norm(state):
    return float(np.linalg.norm(state.amplitudes))


def number_moment(state, mode, k):
    """<(mode number operator)^k>, normalised by <ψ|ψ>."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    probs = np.abs(state.amplitudes) ** 2
    if mode == "a":
        occ = np.arange(state.cutoff_a + 1, dtype=float)[:, None]
    elif mode == "b":
        occ = np.arange(state.cutoff_b + 1, dtype=float)[None, :]
    else:
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    return float(np.sum(probs * occ**k) / np.sum(probs))


def _landau_energies(cutoffs, scales):
    n_a = np.arange(cutoffs[0] + 1, dtype=float)[:, None]
    return scales.hbar * scales.omega * (n_a + 0.5) * np.ones((1, cutoffs[1] + 1))


def apply_hamiltonian(state, scales=NATURAL):
    """H = ħω(a†a + ½), diagonal on the grid."""
    return TwoModeState(state.amplitudes * _landau_energies(state.cutoffs, scales), state.tail_bound)


def apply_hamiltonian_b_form(state, scales=NATURAL):
    """The same H written as ħω(b†b + ½) − ωL₃, with L₃|n,m> = ħm|n,m>."""
    n_a = np.arange(state.cutoff_a + 1, dtype=float)[:, None]
    n_b = np.arange(state.cutoff_b + 1, dtype=float)[None, :]
    hw = scales.hbar * scales.omega
    energies = hw * (n_b + 0.5) - scales.omega * scales.hbar * (n_b - n_a)
    return TwoModeState(state.amplitudes * energies, state.tail_bound)


def propagate(state, t, scales=NATURAL):
    """exp(−iHt/ħ) applied exactly (H is diagonal)."""
    phases = np.exp(-1j * _landau_energies(state.cutoffs, scales) * t / scales.hbar)
    return TwoModeState(state.amplitudes * phases, state.tail_bound)


def ladder_matrix(cutoff, direction="lower"):
    """Single-mode a (or a†) as a dense (cutoff+1)-square matrix."""
    low = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)
    if direction == "lower":
        return low
    if direction == "raise":
        return low.T.copy()
    raise ValueError(f"direction must be 'lower' or 'raise', got {direction!r}")


def _fmt(x):
    return f"{x:.12g}"


def dump_state(state, fh):
    """Write ``# cutoff_a=.. cutoff_b=.. tail=..`` then ``n_a,n_b,re,im`` lines."""
    fh.write(f"# cutoff_a={state.cutoff_a} cutoff_b={state.cutoff_b} tail={_fmt(state.tail_bound)}\n")
    amp = state.amplitudes
    for n_a in range(amp.shape[0]):
        for n_b in range(amp.shape[1]):
            z = amp[n_a, n_b]
            fh.write(f"{n_a},{n_b},{_fmt(z.real)},{_fmt(z.imag)}\n")


def load_state(fh):
    """Read the format written by :func:`dump_state`.

    Other ``#`` lines before the cutoff header are ignored.
    """
    meta = None
    amp = None
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if meta is None and "cutoff_a=" in line:
                meta = dict(item.split("=", 1) for item in line[1:].split())
                amp = np.zeros((int(meta["cutoff_a"]) + 1, int(meta["cutoff_b"]) + 1), dtype=complex)
            continue
        if meta is None:
            raise ValueError("missing '# cutoff_a=...' header")
        n_a, n_b, re, im = line.split(",")
        amp[int(n_a), int(n_b)] = complex(float(re), float(im))
    if meta is None:
        raise ValueError("missing '# cutoff_a=...' header")
    return TwoModeState(amp, float(meta["tail"]))
