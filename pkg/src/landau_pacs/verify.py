"""Named invariant checks run by ``landau-pacs verify``.

Each check measures a deviation (or a margin) and compares it with its own
tolerance; a user tolerance can only loosen a check, never tighten it past
the documented value.
"""

from dataclasses import dataclass
import cmath
import math
from typing import Callable

import numpy as np

from . import cavity, diagnostics, fock, measure, specfun, states, wavefun
from .states import StateLabel


@dataclass(frozen=True)
class Check:
    name: str
    tol: float
    run: Callable[[float], tuple]
    # "dev": passes when measured <= tol; "flag": run returns (measured, ok)
    kind: str = "dev"


@dataclass(frozen=True)
class Outcome:
    name: str
    measured: float
    tol: float
    passed: bool


def _rng():
    return np.random.default_rng(20240611)


def _random_state(rng, cutoffs=(12, 12), support=8):
    amp = np.zeros((cutoffs[0] + 1, cutoffs[1] + 1), dtype=complex)
    amp[:support, :support] = rng.normal(size=(support, support)) + 1j * rng.normal(size=(support, support))
    return fock.TwoModeState(amp / np.linalg.norm(amp))


def _laguerre_spot(_tol):
    return abs(specfun.laguerre_assoc(2, 2, -1.0) - 10.5)


def _laguerre_recurrence(_tol):
    worst = 0.0
    y = np.linspace(-25, 25, 41)
    for k in range(6):
        table = specfun.laguerre_table(51, k, y)
        for n in range(1, 51):
            lhs = (n + 1) * table[n + 1]
            rhs = (2 * n + k + 1 - y) * table[n] - (n + k) * table[n - 1]
            scale = np.maximum(np.abs(lhs), 1.0)
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
    return worst


def _log_factorial(_tol):
    return abs(specfun.log_factorial(10) - math.log(3628800))


def _upper_gamma(_tol):
    # Γ(0,1) = E1(1); Γ(-1,1) = e^{-1} - Γ(0,1)
    g0 = specfun.upper_gamma_nonpos(0, 1.0)
    g1 = specfun.upper_gamma_nonpos(1, 1.0)
    return max(abs(g0 - 0.21938393439552), abs(g1 - (math.exp(-1) - g0)))


def _moment_law(_tol):
    return max(measure.verify_moments(n, 20) for n in range(6))


def _meijer_positive(_tol):
    x = np.linspace(1e-3, 25, 500)
    low = min(float(specfun.meijer_density(n, x).min()) for n in range(6))
    return low, low > 0


def _commutators(_tol):
    rng = _rng()
    psi = _random_state(rng)
    worst = 0.0
    for mode in ("a", "b"):
        up_down = fock.apply_ladder(fock.apply_ladder(psi, mode, "raise"), mode, "lower")
        down_up = fock.apply_ladder(fock.apply_ladder(psi, mode, "lower"), mode, "raise")
        worst = max(worst, abs(fock.inner(psi, up_down - down_up) - 1.0))
    ab = fock.apply_ladder(fock.apply_ladder(psi, "b", "lower"), "a", "lower")
    ba = fock.apply_ladder(fock.apply_ladder(psi, "a", "lower"), "b", "lower")
    return max(worst, float(np.abs((ab - ba).amplitudes).max()))


def _hamiltonian_forms(_tol):
    psi = _random_state(_rng())
    diff = fock.apply_hamiltonian(psi) - fock.apply_hamiltonian_b_form(psi)
    return float(np.abs(diff.amplitudes).max())


def _index_bijection(_tol):
    bad = 0
    for n_a in range(20):
        for n_b in range(20):
            if tuple(fock.index_map(fock.level_index((n_a, n_b)))) != (n_a, n_b):
                bad += 1
    return float(bad)


def _norm_law(_tol):
    worst = 0.0
    for n in range(6):
        for b in (0.0, 0.5, 1.0 + 0.5j, 2.0j, 3.0):
            label = StateLabel(b, 0.4, n)
            raw = states.photon_added_unnormalized(label)
            n2 = fock.norm(raw) ** 2
            exact = states.pacs_norm_analytic(b, n)
            worst = max(worst, abs(n2 - exact) / exact)
    return worst


def _overlap_law(_tol):
    worst = 0.0
    for b in (0.3, 1.0 + 0.5j, -1.2j):
        for n1 in range(6):
            for n2 in range(6):
                grid = states.grid_overlap(b, 0.5, n1, n2)
                worst = max(worst, abs(grid - states.overlap_analytic(b, n1, n2)))
    return worst


def _overlap_spot(_tol):
    return abs(states.overlap_analytic(1.0, 1, 0) - 1 / math.sqrt(2))


def _tensor_rank(_tol):
    amp = states.pacs_state(StateLabel(1 + 0.5j, 0.7 - 0.2j, 3)).amplitudes
    sv = np.linalg.svd(amp, compute_uv=False)
    return float(sv[1] / sv[0])


def _temporal_stability(_tol):
    worst = 0.0
    for label in (StateLabel(1.0, 0.5, 0), StateLabel(1 + 0.5j, 0.7, 2), StateLabel(-0.8j, 0.3 + 0.3j, 5)):
        psi = states.pacs_state(label)
        for t in np.linspace(0.0, 6.0, 10):
            phase, new = states.evolve_label(label, t)
            target = states.pacs_state(new, psi.cutoffs).scaled(phase)
            worst = max(worst, abs(1.0 - fock.inner(target, fock.propagate(psi, t))))
    return worst


def _nonlinear(_tol):
    return max(states.nonlinear_residual(StateLabel(1 + 0.5j, 0.7, n)) for n in range(6))


def _nonlinear_control(_tol):
    label = StateLabel(1 + 0.5j, 0.7, 2)
    psi = states.pacs_state(label)
    amp = np.array(psi.amplitudes)
    amp[3, 0] += 0.05
    bad = fock.TwoModeState(amp).normalized()
    value = states.nonlinear_residual(label, state=bad)
    return value, value > 1e-3


def _wave_closed_forms(_tol):
    rng = _rng()
    p = wavefun.PolarPoint(rng.uniform(0, 3, 20), rng.uniform(0, 2 * math.pi, 20))
    label = StateLabel(0.8 - 0.4j, 0.6 + 0.3j, 1)
    cut = states.default_cutoffs(label)
    dev = [
        np.abs(wavefun.basis_sum_psi(states.pacs_state(label), p) - wavefun.pacs_psi(label, p)).max(),
        np.abs(
            wavefun.basis_sum_psi(states.two_variable_cs(label.beta, label.alpha, cut), p)
            - wavefun.two_variable_psi(label.beta, label.alpha, p)
        ).max(),
    ]
    for n in range(4):
        s = states.displaced_number_state(label.alpha, n, (n + 2, cut[1]))
        dev.append(np.abs(wavefun.basis_sum_psi(s, p) - wavefun.displaced_number_psi(label.alpha, n, p)).max())
    return float(max(dev))


def _orthonormality(_tol):
    idx = [(n, m) for n in range(5) for m in range(-n, 5)]
    mat = wavefun.landau_gram(idx)
    return float(np.abs(mat - np.eye(len(idx))).max())


def _mandel_flat(_tol):
    return max(abs(diagnostics.mandel_q(b, 0)) for b in np.linspace(0, 5, 200))


def _mandel_band(_tol):
    grid = np.linspace(0, 5, 200)
    margin = math.inf
    shape_ok = True
    for n in range(1, 6):
        q = np.array([diagnostics.mandel_q(b, n) for b in grid])
        margin = min(margin, float(np.min(q + 1)), float(np.min(-q)))
        shape_ok &= diagnostics.mandel_q(5.0, n) > diagnostics.mandel_q(0.5, n)
        shape_ok &= abs(diagnostics.mandel_q(0.0, n) + 1) <= 1e-10
    return margin, margin >= -1e-12 and shape_ok


def _mandel_spot(_tol):
    mean, second = diagnostics.pacs_grid_moments(StateLabel(1.0, 0.0, 1))
    q_grid = (second - mean**2) / mean - 1
    return max(abs(diagnostics.mandel_q(1.0, 1) + 0.5), abs(q_grid + 0.5))


def _min_uncertainty(_tol):
    rng = _rng()
    worst = 0.0
    for _ in range(10):
        b = complex(*rng.normal(size=2))
        a = complex(*rng.normal(size=2))
        rep = diagnostics.covariance_report(StateLabel(b, a, 0))
        worst = max(worst, abs(rep.sigma_pp - 0.25), abs(rep.delta - 0.25))
    return worst


def _delta_above(_tol):
    gap = min(diagnostics.covariance_report(StateLabel(1.0, 0, n)).delta - 0.25 for n in range(1, 6))
    return gap, gap > 0


def _sigma_pp_n1(_tol):
    worst = 0.0
    for b in np.linspace(0, 5, 200):
        x = b * b
        worst = max(worst, abs(diagnostics.covariance_report(StateLabel(b, 0, 1)).sigma_pp - (2 + x) / (4 * (1 + x))))
    return worst


def _sigma_pp_spots(_tol):
    return max(
        abs(diagnostics.covariance_report(StateLabel(1.0, 0, 2)).sigma_pp - 0.464286),
        abs(diagnostics.covariance_report(StateLabel(1j, 0, 2)).sigma_pp - 0.239796),
    )


def _sigma_pp_ceiling(_tol):
    worst = -math.inf
    for n in (0, 1):
        for th in np.linspace(0, 2 * math.pi, 9):
            for b in np.linspace(0.01, 5, 100):
                worst = max(worst, diagnostics.covariance_report(StateLabel(b * cmath.exp(1j * th), 0, n)).sigma_pp)
    at_zero = diagnostics.covariance_report(StateLabel(0, 0, 1)).sigma_pp
    return worst, worst < 0.5 and abs(at_zero - 0.5) < 1e-15


def _covariance_oracle(_tol):
    worst = 0.0
    for n in range(6):
        for th in np.linspace(0, 2 * math.pi, 8, endpoint=False):
            label = StateLabel(1.3 * cmath.exp(1j * th), 0.5 - 0.5j, n)
            rep = diagnostics.covariance_report(label)
            grid = diagnostics.grid_covariance(states.pacs_state(label))
            worst = max(worst, *(abs(u - v) for u, v in zip((rep.sigma_xx, rep.sigma_pp, rep.sigma_xp), grid)))
    return worst


def _canonical_pair(_tol):
    psi = _random_state(_rng())
    return abs(diagnostics.grid_commutator(psi) - 1j)


def _distribution_sum(_tol):
    label = StateLabel(1 + 0.5j, 0.7, 2)
    return abs(float(diagnostics.distribution_grid(label, (80, 60)).sum()) - 1.0)


def _lowest_level(_tol):
    worst = 0.0
    for n in range(1, 6):
        label = StateLabel(1.0, 0.5, n)
        worst = max(worst, max(diagnostics.photon_probability(label, 0, m) for m in range(10)))
    return worst


def _k0_flat(_tol):
    return float(np.abs(measure.density_K(0, np.linspace(0, 5, 50)) - 1 / math.pi).max())


def _projector(_tol):
    return max(measure.reconstruct_projector(n).deviation for n in (0, 2, 5))



def _cavity_closed_form(_tol):
    worst = 0.0
    for phi in (0.0, 0.7, 2.3, math.pi, 2 * math.pi):
        p = cavity.CavityParams(g=2.0, omega1=0.8, omega2=0.6, phi=phi, t=1.3)
        worst = max(worst, cavity.max_entry_deviation(cavity.effective_evolve(p), cavity.superposition_state(p)))
    return worst


def _cavity_limits(_tol):
    worst = 0.0
    for phi, sign in ((2 * math.pi, 1), (math.pi, -1)):
        p = cavity.CavityParams(g=10.0, omega1=0.8, omega2=0.6, phi=phi, t=2 * math.pi / 10.0)
        out = cavity.effective_evolve(p)
        beta, alpha = cavity.cavity_labels(p)
        target = states.two_variable_cs(sign * beta, sign * alpha, out.cutoffs)
        worst = max(worst, cavity.infidelity(target, out.ground), cavity.infidelity(target, out.excited))
    return worst


def _addition_fidelity(_tol):
    res = cavity.photon_addition_protocol(1.0, 0.5, 0.05, 1.0)
    return res.ground_fidelity, res.ground_fidelity >= 0.99


def _addition_exponent(_tol):
    xs = np.logspace(-3, -1, 9)
    inf = [cavity.photon_addition_protocol(1.0, 0.5, x, 1.0).ground_infidelity for x in xs]
    slope = float(np.polyfit(np.log(xs), np.log(inf), 1)[0])
    return slope, abs(slope - 4.0) <= 0.1


def _strong_drive(_tol):
    f10 = cavity.exact_vs_effective_fidelity(cavity.CavityParams(g=5.0, omega1=0.5, omega2=0.5, phi=0.9, t=2.0))
    f100 = cavity.exact_vs_effective_fidelity(cavity.CavityParams(g=50.0, omega1=0.5, omega2=0.5, phi=0.9, t=2.0))
    return 1 - f100, f100 > f10


CHECKS = (
    Check("specfun.laguerre_spot", 1e-12, _laguerre_spot),
    Check("specfun.laguerre_recurrence", 1e-12, _laguerre_recurrence),
    Check("specfun.log_factorial", 1e-12, _log_factorial),
    Check("specfun.upper_gamma", 1e-10, _upper_gamma),
    Check("specfun.meijer_moment_law", 1e-8, _moment_law),
    Check("specfun.meijer_positive", 0.0, _meijer_positive, "flag"),
    Check("fock.commutators", 1e-12, _commutators),
    Check("fock.hamiltonian_two_forms", 1e-12, _hamiltonian_forms),
    Check("fock.index_bijection", 0.0, _index_bijection),
    Check("states.norm_law", 1e-10, _norm_law),
    Check("states.overlap_law", 1e-10, _overlap_law),
    Check("states.overlap_spot", 1e-12, _overlap_spot),
    Check("states.tensor_factorization", 1e-12, _tensor_rank),
    Check("states.temporal_stability", 1e-12, _temporal_stability),
    Check("states.nonlinear_residual", 1e-10, _nonlinear),
    Check("states.nonlinear_negative_control", 1e-3, _nonlinear_control, "flag"),
    Check("wavefun.closed_forms", 1e-8, _wave_closed_forms),
    Check("wavefun.orthonormality", 1e-8, _orthonormality),
    Check("diagnostics.mandel_flat", 1e-10, _mandel_flat),
    Check("diagnostics.mandel_band", 0.0, _mandel_band, "flag"),
    Check("diagnostics.mandel_spot", 1e-10, _mandel_spot),
    Check("diagnostics.minimum_uncertainty", 1e-12, _min_uncertainty),
    Check("diagnostics.uncertainty_excess", 0.0, _delta_above, "flag"),
    Check("diagnostics.sigma_pp_n1", 1e-12, _sigma_pp_n1),
    Check("diagnostics.sigma_pp_spots", 1e-5, _sigma_pp_spots),
    Check("diagnostics.sigma_pp_ceiling", 0.5, _sigma_pp_ceiling, "flag"),
    Check("diagnostics.covariance_oracle", 1e-10, _covariance_oracle),
    Check("diagnostics.canonical_pair", 1e-12, _canonical_pair),
    Check("diagnostics.distribution_sum", 1e-10, _distribution_sum),
    Check("diagnostics.lowest_level_empty", 0.0, _lowest_level),
    Check("measure.k0_flat", 1e-12, _k0_flat),
    Check("measure.projector", 1e-6, _projector),
    Check("cavity.closed_form", 1e-10, _cavity_closed_form),
    Check("cavity.phase_limits", 1e-10, _cavity_limits),
    Check("cavity.addition_fidelity", 0.99, _addition_fidelity, "flag"),
    Check("cavity.addition_exponent", 0.1, _addition_exponent, "flag"),
    Check("cavity.strong_drive_monotone", 0.0, _strong_drive, "flag"),
)


def run_checks(user_tol=0.0, checks=CHECKS):
    """Run every check; returns a list of :class:`Outcome`."""
    results = []
    for check in checks:
        tol = max(check.tol, user_tol) if check.kind == "dev" else check.tol
        try:
            value = check.run(tol)
        except Exception as exc:  # a crash is a failure, reported by name
            results.append(Outcome(f"{check.name} ({type(exc).__name__}: {exc})", math.nan, tol, False))
            continue
        if check.kind == "flag":
            measured, ok = value
        else:
            measured = float(value)
            ok = measured <= tol
        results.append(Outcome(check.name, float(measured), tol, bool(ok)))
    return results
