"""Cavity generation protocols for |β, α⟩ and |β, α; n⟩.

Conventions
-----------
* Atomic basis is ordered (g, e): σ+ = |e⟩⟨g| = [[0, 0], [1, 0]],
  σz = diag(−1, +1). Full state vectors are kron(atom, field), i.e. the
  ground block comes first, each block row-major in (n_a, n_b).
* Hamiltonians are passed as H/ħ (angular-frequency units), so the
  propagator is exp(−iHt).
* The drive and cavity couplings follow the operator definitions of the
  effective propagator R† T†(t) U_eff T(0) R; under those operators the
  excited branch carries α = +iΩ₂t e^{−iφ}/2 and β = iΩ₁t e^{−iφ}/2.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.linalg import expm

from .fock import TruncationError, TwoModeState, inner, ladder_matrix, norm, truncation_cutoff
from .states import StateLabel, default_cutoffs, pacs_state, two_variable_cs

__all__ = [
    "CavityParams",
    "AtomFieldState",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "SIGMA_Z",
    "cavity_cutoffs",
    "initial_superposition",
    "effective_propagator",
    "effective_evolve",
    "cavity_labels",
    "reference_labels",
    "superposition_state",
    "reference_superposition",
    "reference_conditional_fields",
    "cavity_hamiltonian",
    "field_hamiltonian",
    "Propagator",
    "exact_evolve",
    "fidelity",
    "infidelity",
    "AdditionResult",
    "photon_addition_protocol",
    "iterated_photon_addition",
    "exact_vs_effective_fidelity",
    "max_entry_deviation",
    "branch_overlap",
]

SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)

# post-selection on a branch below this probability is refused
MIN_BRANCH_PROBABILITY = 1e-14
UNITARITY_TOL = 1e-10
# largest atom ⊗ field dimension handed to a dense eigendecomposition
MAX_DENSE_DIM = 5000
# ratio g / max(Ω₁, Ω₂) from which the strong-drive regime is flagged
STRONG_DRIVE_RATIO = 10.0


@dataclass(frozen=True)
class CavityParams:
    g: float = 10.0
    omega1: float = 1.0
    omega2: float = 1.0
    phi: float = 0.0
    mu: float = 0.05
    t: float = 1.0

    @property
    def strong_drive(self):
        """True when g ≫ Ω₁, Ω₂ (ratio at least ``STRONG_DRIVE_RATIO``)."""
        weakest = max(abs(self.omega1), abs(self.omega2))
        return weakest == 0 or abs(self.g) >= STRONG_DRIVE_RATIO * weakest


@dataclass(frozen=True, eq=False)
class AtomFieldState:
    ground: TwoModeState
    excited: TwoModeState

    def __post_init__(self):
        if self.ground.cutoffs != self.excited.cutoffs:
            raise ValueError("atomic branches must share field cutoffs")

    @property
    def cutoffs(self):
        return self.ground.cutoffs

    @property
    def tail_bound(self):
        return self.ground.tail_bound + self.excited.tail_bound

    def norm2(self):
        return norm(self.ground) ** 2 + norm(self.excited) ** 2

    def vector(self):
        return np.concatenate([self.ground.vector(), self.excited.vector()])

    @classmethod
    def from_vector(cls, vec, cutoffs, tail_bound=0.0):
        shape = (cutoffs[0] + 1, cutoffs[1] + 1)
        dim = shape[0] * shape[1]
        if vec.shape != (2 * dim,):
            raise ValueError(f"vector length {vec.shape} does not match cutoffs {cutoffs}")
        half = 0.5 * tail_bound
        return cls(TwoModeState(vec[:dim].reshape(shape), half), TwoModeState(vec[dim:].reshape(shape), half))


def cavity_labels(params):
    """(β, α) reached on the excited branch under the effective propagator."""
    rot = np.exp(-1j * params.phi)
    return 0.5j * params.omega1 * params.t * rot, 0.5j * params.omega2 * params.t * rot


def reference_labels(params):
    """Reference labels: α with the opposite sign, α = −iΩ₂t e^{−iφ}/2."""
    beta, alpha = cavity_labels(params)
    return beta, -alpha


def cavity_cutoffs(params):
    beta, alpha = cavity_labels(params)
    return truncation_cutoff(abs(beta) ** 2), truncation_cutoff(abs(alpha) ** 2)


def initial_superposition(cutoffs):
    """(|g⟩ + |e⟩)/√2 ⊗ |0, 0⟩."""
    vac = np.zeros((cutoffs[0] + 1, cutoffs[1] + 1), dtype=complex)
    vac[0, 0] = 1 / math.sqrt(2)
    return AtomFieldState(TwoModeState(vac), TwoModeState(vac))


def _quadrature_op(cutoff, phi):
    # a† e^{−iφ} + a e^{iφ}
    low = ladder_matrix(cutoff, "lower")
    return low.conj().T * np.exp(-1j * phi) + low * np.exp(1j * phi)


def _rotation(params):
    return expm(math.pi / 4 * (SIGMA_PLUS - SIGMA_MINUS)) @ expm(0.5j * params.phi * SIGMA_Z)


def _mode_displacements(params, cutoffs, sign):
    # exp(i·sign·Ω t/2 · X) for each mode
    s1 = 0.5 * params.omega1 * params.t
    s2 = 0.5 * params.omega2 * params.t
    return (
        expm(1j * sign * s1 * _quadrature_op(cutoffs[0], params.phi)),
        expm(1j * sign * s2 * _quadrature_op(cutoffs[1], params.phi)),
    )


def _check_dense(cutoffs):
    dim = 2 * (cutoffs[0] + 1) * (cutoffs[1] + 1)
    if dim > MAX_DENSE_DIM:
        raise ValueError(f"atom-field dimension {dim} exceeds the dense limit {MAX_DENSE_DIM}; reduce the drive or t")


def effective_propagator(params, cutoffs):
    """Dense U(t) = R† T†(t) U_eff T(0) R on atom ⊗ field, T(0) = 1."""
    _check_dense(cutoffs)
    ca, cb = cutoffs
    dim = (ca + 1) * (cb + 1)
    # σz is diagonal, so U_eff is block-diagonal with σz → ∓1 on the (g, e) blocks,
    # and each mode factor exponentiates separately
    u_eff = np.zeros((2 * dim, 2 * dim), dtype=complex)
    for block, sign in enumerate((-1.0, 1.0)):
        da, db = _mode_displacements(params, cutoffs, sign)
        u_eff[block * dim:(block + 1) * dim, block * dim:(block + 1) * dim] = np.kron(da, db)
    rot = np.kron(_rotation(params), np.eye(dim))
    drive = np.kron(expm(1j * params.g * params.t * SIGMA_Z), np.eye(dim))
    return rot.conj().T @ drive.conj().T @ u_eff @ rot


def _apply_effective(params, cutoffs, vec):
    """Same operator as :func:`effective_propagator`, applied factor by factor."""
    shape = (cutoffs[0] + 1, cutoffs[1] + 1)
    blocks = vec.reshape(2, -1)
    rot = _rotation(params)
    blocks = rot @ blocks
    for block, sign in enumerate((-1.0, 1.0)):
        da, db = _mode_displacements(params, cutoffs, sign)
        blocks[block] = (da @ blocks[block].reshape(shape) @ db.T).reshape(-1)
    blocks = expm(1j * params.g * params.t * SIGMA_Z).conj().T @ blocks
    return (rot.conj().T @ blocks).reshape(-1)


def _boundary_mass(amp):
    return float(np.sum(np.abs(amp[-1, :]) ** 2) + np.sum(np.abs(amp[:, -1]) ** 2))


def effective_evolve(params, cutoffs=None, max_spill=1e-12):
    """ψ(t) = U(t) ψ(0) with ψ(0) = (|g⟩ + |e⟩)/√2 ⊗ |0, 0⟩."""
    if cutoffs is None:
        cutoffs = cavity_cutoffs(params)
    _check_dense(cutoffs)
    psi0 = initial_superposition(cutoffs)
    vec = _apply_effective(params, cutoffs, psi0.vector())
    out = AtomFieldState.from_vector(vec, cutoffs)
    drift = abs(out.norm2() - 1.0)
    if drift > UNITARITY_TOL:
        raise RuntimeError(f"effective propagator lost norm {drift:.3e}")
    spill = _boundary_mass(out.ground.amplitudes) + _boundary_mass(out.excited.amplitudes)
    if spill > max_spill:
        raise TruncationError(f"cavity field reaches the cutoff boundary (mass {spill:.3e})")
    return AtomFieldState(
        TwoModeState(out.ground.amplitudes, spill), TwoModeState(out.excited.amplitudes, spill)
    )


def _two_cs(beta, alpha, cutoffs):
    return two_variable_cs(beta, alpha, cutoffs, max_tail=math.inf)


def superposition_state(params, cutoffs=None):
    """Closed form of U(t) ψ(0) derived from the operators themselves.

    ground  = e^{iφ/2}  [e^{−igt} cos(φ/2) |β, α⟩ − i e^{igt} sin(φ/2) |−β, −α⟩] / √2
    excited = e^{−iφ/2} [e^{−igt} cos(φ/2) |β, α⟩ + i e^{igt} sin(φ/2) |−β, −α⟩] / √2
    with (β, α) from :func:`cavity_labels`.
    """
    if cutoffs is None:
        cutoffs = cavity_cutoffs(params)
    beta, alpha = cavity_labels(params)
    plus = _two_cs(beta, alpha, cutoffs)
    minus = _two_cs(-beta, -alpha, cutoffs)
    gt, half = params.g * params.t, 0.5 * params.phi
    c, s = math.cos(half), math.sin(half)
    w_plus = np.exp(-1j * gt) * c / math.sqrt(2)
    w_minus = 1j * np.exp(1j * gt) * s / math.sqrt(2)
    ground = (plus.scaled(w_plus) - minus.scaled(w_minus)).scaled(np.exp(1j * half))
    excited = (plus.scaled(w_plus) + minus.scaled(w_minus)).scaled(np.exp(-1j * half))
    return AtomFieldState(ground, excited)


def reference_superposition(params, cutoffs=None):
    """Reference two-branch superposition, built on :func:`reference_labels`:

    ground  = [e^{−i(gt+φ/2)} cos(φ/2) |β, α⟩ − i e^{i(gt+φ/2)} sin(φ/2) |−β, −α⟩] / √2
    excited = [e^{−i(gt+φ/2)} cos(φ/2) |β, α⟩ + i e^{i(gt+φ/2)} sin(φ/2) |−β, −α⟩] / √2

    Kept for comparison only: it is not the output of :func:`effective_evolve`,
    which :func:`superposition_state` reproduces.
    """
    if cutoffs is None:
        cutoffs = cavity_cutoffs(params)
    beta, alpha = reference_labels(params)
    plus = _two_cs(beta, alpha, cutoffs)
    minus = _two_cs(-beta, -alpha, cutoffs)
    arg = params.g * params.t + 0.5 * params.phi
    c, s = math.cos(0.5 * params.phi), math.sin(0.5 * params.phi)
    w_plus = np.exp(-1j * arg) * c / math.sqrt(2)
    w_minus = 1j * np.exp(1j * arg) * s / math.sqrt(2)
    return AtomFieldState(plus.scaled(w_plus) - minus.scaled(w_minus), plus.scaled(w_plus) + minus.scaled(w_minus))


def reference_conditional_fields(params, cutoffs=None, norm_factor=math.sqrt(2)):
    """Reference conditional fields ψ_g, ψ_e at gt = 2kπ, with N_(g,e) = norm_factor.

    ψ_g = N [e^{−iφ/2} cos(φ/2) |β, α⟩ − i e^{iφ/2} sin(φ/2) |−β, −α⟩], ψ_e with +.
    """
    if cutoffs is None:
        cutoffs = cavity_cutoffs(params)
    beta, alpha = reference_labels(params)
    plus = _two_cs(beta, alpha, cutoffs)
    minus = _two_cs(-beta, -alpha, cutoffs)
    half = 0.5 * params.phi
    w_plus = norm_factor * np.exp(-1j * half) * math.cos(half)
    w_minus = norm_factor * 1j * np.exp(1j * half) * math.sin(half)
    return plus.scaled(w_plus) - minus.scaled(w_minus), plus.scaled(w_plus) + minus.scaled(w_minus)


def cavity_hamiltonian(params, cutoffs):
    """H/ħ = g(σ− e^{iφ} + σ+ e^{−iφ}) − Ω₁(a†σ− + aσ+) − Ω₂(b†σ− + bσ+).

    The drive is the Hermitian form whose rotated frame matches R; the −Ω sign
    is the one whose strong-drive limit is U_eff.
    """
    ca, cb = cutoffs
    eye_a, eye_b = np.eye(ca + 1), np.eye(cb + 1)
    a = np.kron(ladder_matrix(ca, "lower"), eye_b)
    b = np.kron(eye_a, ladder_matrix(cb, "lower"))
    field_eye = np.eye(a.shape[0])
    drive = params.g * (SIGMA_MINUS * np.exp(1j * params.phi) + SIGMA_PLUS * np.exp(-1j * params.phi))
    h = np.kron(drive, field_eye)
    for omega, op in ((params.omega1, a), (params.omega2, b)):
        h = h - omega * (np.kron(SIGMA_MINUS, op.conj().T) + np.kron(SIGMA_PLUS, op))
    return h


def field_hamiltonian(cutoffs, omega=1.0):
    """H/ħ = ω(a†a + ½) on the bare field grid."""
    n_a = np.arange(cutoffs[0] + 1, dtype=float)
    return np.kron(np.diag(omega * (n_a + 0.5)), np.eye(cutoffs[1] + 1)).astype(complex)


class Propagator:
    """exp(−iHt) for Hermitian H, via one cached eigendecomposition."""

    def __init__(self, hamiltonian, herm_tol=1e-12):
        h = np.asarray(hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("Hamiltonian must be a square matrix")
        scale = max(1.0, float(np.abs(h).max()))
        if float(np.abs(h - h.conj().T).max()) > herm_tol * scale:
            raise ValueError("Hamiltonian is not Hermitian")
        self.energies, self.vectors = np.linalg.eigh(h)

    def __call__(self, t):
        return (self.vectors * np.exp(-1j * self.energies * t)) @ self.vectors.conj().T

    def apply(self, vec, t):
        return self.vectors @ (np.exp(-1j * self.energies * t) * (self.vectors.conj().T @ vec))


def exact_evolve(hamiltonian, t, initial):
    """Propagate ``initial`` (AtomFieldState or bare TwoModeState) under H/ħ."""
    prop = hamiltonian if isinstance(hamiltonian, Propagator) else Propagator(hamiltonian)
    vec = initial.vector()
    out = prop.apply(vec, t)
    drift = abs(np.vdot(out, out).real - np.vdot(vec, vec).real)
    if drift > UNITARITY_TOL:
        raise RuntimeError(f"propagator lost norm {drift:.3e}")
    if isinstance(initial, AtomFieldState):
        return AtomFieldState.from_vector(out, initial.cutoffs, initial.tail_bound)
    return TwoModeState(out.reshape(initial.amplitudes.shape), initial.tail_bound)


def infidelity(target, state):
    """1 − |⟨t|s⟩|²/(‖t‖²‖s‖²), computed as the squared orthogonal component.

    This keeps full relative accuracy when the fidelity is within 1e-16 of 1.
    """
    t = target.amplitudes / norm(target)
    s = state.amplitudes / norm(state)
    overlap = np.vdot(t, s)
    residual = s - overlap * t
    return float(np.vdot(residual, residual).real)


def fidelity(target, state):
    return 1.0 - infidelity(target, state)


@lru_cache(maxsize=32)
def _addition_eigensystem(cutoff_a):
    # H/(ħμ) = σ+ a + σ− a† on atom ⊗ mode a, (g, e) blocks
    low = ladder_matrix(cutoff_a, "lower")
    h = np.kron(SIGMA_PLUS, low) + np.kron(SIGMA_MINUS, low.conj().T)
    energies, vectors = np.linalg.eigh(h)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return energies, vectors


def _addition_step(field, mu_t):
    """Evolve |field⟩|e⟩ for μt; returns (ground block, excited block) amplitudes.

    H acts on mode a only, so the b index rides along as extra columns.
    """
    amp = field.amplitudes
    dim_a = amp.shape[0]
    energies, vectors = _addition_eigensystem(dim_a - 1)
    start = np.vstack([np.zeros_like(amp), amp])
    out = vectors @ (np.exp(-1j * energies * mu_t)[:, None] * (vectors.conj().T @ start))
    return out[:dim_a], out[dim_a:]


@dataclass(frozen=True)
class AdditionResult:
    ground_fidelity: float
    excited_fidelity: float
    ground_infidelity: float
    excited_infidelity: float
    ground_probability: float


def photon_addition_protocol(beta, alpha, mu, t, cutoffs=None):
    """Evolve |β, α⟩|e⟩ under H = ħμ(σ+ a + σ− a†) and post-select each branch.

    The ground branch is compared with |β, α; 1⟩, the excited branch with |β, α⟩.
    """
    label = StateLabel(beta, alpha, 1)
    if cutoffs is None:
        cutoffs = default_cutoffs(label)
    start = two_variable_cs(beta, alpha, cutoffs)
    ground, excited = _addition_step(start, mu * t)
    p_g = float(np.vdot(ground, ground).real)
    p_e = float(np.vdot(excited, excited).real)
    if min(p_g, p_e) < MIN_BRANCH_PROBABILITY:
        raise ValueError(f"branch probability below {MIN_BRANCH_PROBABILITY:g}; post-selection refused")
    g_state = TwoModeState(ground, start.tail_bound)
    e_state = TwoModeState(excited, start.tail_bound)
    g_inf = infidelity(pacs_state(label, cutoffs), g_state)
    e_inf = infidelity(start, e_state)
    return AdditionResult(1.0 - g_inf, 1.0 - e_inf, g_inf, e_inf, p_g)


def iterated_photon_addition(beta, alpha, n_rounds, mu, t, cutoffs=None):
    """Repeat (prepare |e⟩, evolve, detect |g⟩) ``n_rounds`` times.

    Returns (infidelity against |β, α; n_rounds⟩, success probability).
    """
    label = StateLabel(beta, alpha, n_rounds)
    if cutoffs is None:
        cutoffs = default_cutoffs(label)
    field = two_variable_cs(beta, alpha, cutoffs)
    success = 1.0
    for _ in range(n_rounds):
        ground, _excited = _addition_step(field, mu * t)
        p_g = float(np.vdot(ground, ground).real)
        if p_g < MIN_BRANCH_PROBABILITY:
            raise ValueError("ground-branch probability too small to post-select")
        success *= p_g
        field = TwoModeState(ground / math.sqrt(p_g), field.tail_bound)
    return infidelity(pacs_state(label, cutoffs), field), success


def exact_vs_effective_fidelity(params, cutoffs=None):
    """|⟨exact|effective⟩|² for the cavity Hamiltonian against U_eff."""
    if cutoffs is None:
        cutoffs = cavity_cutoffs(params)
    _check_dense(cutoffs)
    psi0 = initial_superposition(cutoffs)
    exact = exact_evolve(cavity_hamiltonian(params, cutoffs), params.t, psi0)
    eff = _apply_effective(params, cutoffs, psi0.vector())
    return float(abs(np.vdot(exact.vector(), eff)) ** 2)


def max_entry_deviation(u, v):
    """Largest entry-wise difference between two AtomFieldStates."""
    return float(max(np.abs(u.ground.amplitudes - v.ground.amplitudes).max(),
                     np.abs(u.excited.amplitudes - v.excited.amplitudes).max()))


def branch_overlap(u, v):
    """⟨u|v⟩ summed over both atomic branches."""
    return inner(u.ground, v.ground) + inner(u.excited, v.excited)
