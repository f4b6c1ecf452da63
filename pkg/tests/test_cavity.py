import math

import numpy as np
import pytest

from landau_pacs import cavity, fock, states
from landau_pacs.cavity import CavityParams
from landau_pacs.states import StateLabel


@pytest.mark.parametrize("phi", [0.0, 0.7, 2.3, math.pi, 4.0, 2 * math.pi])
@pytest.mark.parametrize("g,o1,o2,t", [(2.0, 0.8, 0.6, 1.3), (10.0, 1.0, 0.3, 0.5), (0.0, 0.4, 0.9, 2.0)])
def test_effective_matches_operator_closed_form(phi, g, o1, o2, t):
    p = CavityParams(g=g, omega1=o1, omega2=o2, phi=phi, t=t)
    out = cavity.effective_evolve(p)
    assert cavity.max_entry_deviation(out, cavity.superposition_state(p)) < 1e-10
    assert out.norm2() == pytest.approx(1.0, abs=1e-10)


def test_factorised_propagator_matches_dense():
    p = CavityParams(g=1.5, omega1=0.5, omega2=0.4, phi=1.1, t=1.0)
    cut = (12, 12)
    dense = cavity.effective_propagator(p, cut)
    assert np.abs(dense.conj().T @ dense - np.eye(dense.shape[0])).max() < 1e-10
    vec = cavity.initial_superposition(cut).vector()
    assert np.abs(dense @ vec - cavity.effective_evolve(p, cut).vector()).max() < 1e-12


@pytest.mark.parametrize("phi,sign", [(2 * math.pi, 1), (math.pi, -1)])
def test_phase_limits(phi, sign):
    p = CavityParams(g=10.0, omega1=0.8, omega2=0.6, phi=phi, t=2 * math.pi / 10.0)
    out = cavity.effective_evolve(p)
    beta, alpha = cavity.cavity_labels(p)
    target = states.two_variable_cs(sign * beta, sign * alpha, out.cutoffs)
    assert cavity.infidelity(target, out.ground) < 1e-10
    assert cavity.infidelity(target, out.excited) < 1e-10


def test_reference_form_is_not_the_evolved_state():
    # The reference superposition uses the opposite α sign and another phase
    # placement; it does not equal the evolved state at a generic phase.
    p = CavityParams(g=2.0, omega1=0.8, omega2=0.6, phi=0.7, t=1.3)
    assert cavity.max_entry_deviation(cavity.effective_evolve(p), cavity.reference_superposition(p)) > 1e-2


def test_reference_labels_flip_alpha():
    p = CavityParams(omega1=2.0, omega2=4.0, phi=0.0, t=1.0)
    assert cavity.cavity_labels(p) == pytest.approx((1j, 2j))
    assert cavity.reference_labels(p) == pytest.approx((1j, -2j))


def test_conditional_fields_follow_superposition():
    # at gt = 2kπ each conditional field is the corresponding reference branch
    # rescaled by N·√2 with N = √2
    p = CavityParams(g=1.0, omega1=0.3, omega2=0.2, phi=1.2, t=2 * math.pi)
    reference = cavity.reference_superposition(p)
    psi_g, psi_e = cavity.reference_conditional_fields(p)
    np.testing.assert_allclose(psi_g.amplitudes, 2 * reference.ground.amplitudes, atol=1e-13)
    np.testing.assert_allclose(psi_e.amplitudes, 2 * reference.excited.amplitudes, atol=1e-13)


def test_truncation_guard():
    p = CavityParams(omega1=4.0, omega2=4.0, t=2.0)
    with pytest.raises(fock.TruncationError):
        cavity.effective_evolve(p, cutoffs=(10, 10))


def test_hamiltonian_is_hermitian_and_propagator_unitary():
    p = CavityParams(g=3.0, omega1=0.5, omega2=0.7, phi=0.4)
    h = cavity.cavity_hamiltonian(p, (6, 5))
    assert np.abs(h - h.conj().T).max() == 0.0
    prop = cavity.Propagator(h)
    u = prop(0.9)
    assert np.abs(u.conj().T @ u - np.eye(h.shape[0])).max() < 1e-10
    np.testing.assert_allclose(prop(0.0), np.eye(h.shape[0]), atol=1e-12)


def test_propagator_rejects_non_hermitian():
    with pytest.raises(ValueError):
        cavity.Propagator(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        cavity.Propagator(np.ones((2, 3)))


def test_field_hamiltonian_phases():
    cut = (4, 2)
    psi = fock.basis_state((3, -1), cut)
    out = cavity.exact_evolve(cavity.field_hamiltonian(cut, omega=2.0), 0.6, psi)
    assert out[(3, -1)] == pytest.approx(np.exp(-1j * 3.5 * 2.0 * 0.6))
    assert fock.norm(out) == pytest.approx(1.0)


def test_strong_drive_monotone():
    weak = cavity.exact_vs_effective_fidelity(CavityParams(g=5.0, omega1=0.5, omega2=0.5, phi=0.9, t=2.0))
    strong = cavity.exact_vs_effective_fidelity(CavityParams(g=50.0, omega1=0.5, omega2=0.5, phi=0.9, t=2.0))
    assert strong > weak
    assert 1 - strong < 1e-3


def test_strong_drive_flag():
    assert CavityParams(g=10.0, omega1=1.0, omega2=0.5).strong_drive
    assert not CavityParams(g=5.0, omega1=1.0, omega2=0.5).strong_drive


def test_infidelity_ignores_phase_and_scale():
    psi = states.pacs_state(StateLabel(0.5, 0.3, 1))
    assert cavity.infidelity(psi, psi.scaled(2j)) < 1e-30
    other = states.pacs_state(StateLabel(0.5, 0.3, 2), psi.cutoffs)
    assert cavity.fidelity(psi, other) == pytest.approx(abs(fock.inner(psi, other)) ** 2)


def test_photon_addition_examples():
    res = cavity.photon_addition_protocol(1.0, 0.5, 0.05, 1.0)
    assert res.ground_fidelity >= 0.99
    assert res.excited_fidelity >= 0.99
    assert 0 < res.ground_probability < 0.01
    with pytest.raises(ValueError):
        cavity.photon_addition_protocol(1.0, 0.5, 0.0, 1.0)


def test_photon_addition_improves_as_coupling_shrinks():
    inf = [cavity.photon_addition_protocol(1.0, 0.5, x, 1.0).ground_infidelity for x in (0.1, 0.03, 0.01)]
    assert inf[0] > inf[1] > inf[2]
    assert inf[2] < 1e-6


def test_iterated_addition_approaches_pacs():
    for n in (1, 2, 3):
        coarse, _ = cavity.iterated_photon_addition(0.8, 0.2, n, 0.1, 1.0)
        fine, prob = cavity.iterated_photon_addition(0.8, 0.2, n, 0.01, 1.0)
        assert fine < coarse
        assert fine < 1e-7
        assert 0 < prob < 1


def test_branch_overlap():
    p = CavityParams(g=1.0, omega1=0.3, omega2=0.2, phi=0.5, t=1.0)
    out = cavity.effective_evolve(p)
    assert cavity.branch_overlap(out, out) == pytest.approx(1.0, abs=1e-12)


def test_dense_size_guard():
    p = CavityParams(omega1=40.0, omega2=40.0, t=3.0)
    with pytest.raises(ValueError):
        cavity.exact_vs_effective_fidelity(p)
    with pytest.raises(ValueError):
        cavity.effective_propagator(p, (80, 80))
