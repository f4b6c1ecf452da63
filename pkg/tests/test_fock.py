import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from landau_pacs import fock
from landau_pacs.fock import NATURAL, PhysicalScales, TruncationError, TwoModeState


def random_state(seed, cutoffs=(10, 12), support=7):
    rng = np.random.default_rng(seed)
    amp = np.zeros((cutoffs[0] + 1, cutoffs[1] + 1), dtype=complex)
    amp[:support, :support] = rng.normal(size=(support, support)) + 1j * rng.normal(size=(support, support))
    return TwoModeState(amp / np.linalg.norm(amp))


@pytest.mark.parametrize("idx,occ", [((0, 0), (0, 0)), ((3, -3), (3, 0)), ((1, 2), (1, 3))])
def test_index_map_examples(idx, occ):
    assert fock.index_map(idx) == occ
    assert fock.level_index(occ) == idx


def test_index_map_rejects_invalid():
    with pytest.raises(ValueError):
        fock.index_map((1, -2))
    with pytest.raises(ValueError):
        fock.index_map((-1, 3))
    with pytest.raises(ValueError):
        fock.level_index((-1, 0))


def test_index_map_bijection_on_rectangle():
    seen = set()
    for n_a in range(15):
        for n_b in range(12):
            idx = fock.level_index((n_a, n_b))
            assert fock.index_map(idx) == (n_a, n_b)
            seen.add(idx)
    assert len(seen) == 15 * 12


def test_ladder_examples():
    cut = (6, 8)
    out = fock.apply_ladder(fock.basis_state((1, 0), cut), "a", "lower")
    assert out[(0, 1)] == pytest.approx(1.0)
    assert np.count_nonzero(out.amplitudes) == 1
    assert fock.norm(fock.apply_ladder(fock.basis_state((0, 5), cut), "a", "lower")) == 0.0


def test_ladder_actions_on_levels():
    cut = (8, 8)
    # a†|n-1, m+1> = √n |n, m>
    out = fock.apply_ladder(fock.basis_state((2, 1), cut), "a", "raise")
    assert out[(3, 0)] == pytest.approx(np.sqrt(3))
    # b|n, m> = √(n+m)|n, m-1>
    out = fock.apply_ladder(fock.basis_state((2, 3), cut), "b", "lower")
    assert out[(2, 2)] == pytest.approx(np.sqrt(5))
    # b†|n, m-1> = √(n+m)|n, m>
    out = fock.apply_ladder(fock.basis_state((2, 2), cut), "b", "raise")
    assert out[(2, 3)] == pytest.approx(np.sqrt(5))


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_commutators(seed):
    psi = random_state(seed)
    for mode in ("a", "b"):
        ud = fock.apply_ladder(fock.apply_ladder(psi, mode, "raise"), mode, "lower")
        du = fock.apply_ladder(fock.apply_ladder(psi, mode, "lower"), mode, "raise")
        assert abs(fock.inner(psi, ud - du) - 1.0) < 1e-12
    for other in ("lower", "raise"):
        x = fock.apply_ladder(fock.apply_ladder(psi, "b", other), "a", "lower")
        y = fock.apply_ladder(fock.apply_ladder(psi, "a", "lower"), "b", other)
        assert np.abs((x - y).amplitudes).max() < 1e-12


def test_raise_at_cutoff_is_guarded():
    cut = (4, 4)
    with pytest.raises(TruncationError):
        fock.apply_ladder(fock.basis_state((4, 0), cut), "a", "raise")
    with pytest.raises(TruncationError):
        fock.apply_ladder(fock.basis_state((0, 4), cut), "b", "raise")
    ok = fock.apply_ladder(fock.basis_state((3, 0), cut), "a", "raise")
    assert ok[(4, -1)] == pytest.approx(2.0)


def test_tail_bound_grows_with_spill():
    amp = np.zeros((5, 5), dtype=complex)
    amp[0, 0] = 1.0
    amp[4, 0] = 1e-8
    out = fock.apply_ladder(TwoModeState(amp, 1e-20), "a", "raise")
    assert out.tail_bound >= 5 * 1e-16


def test_bad_mode_and_direction():
    psi = fock.vacuum((2, 2))
    with pytest.raises(ValueError):
        fock.apply_ladder(psi, "c", "lower")
    with pytest.raises(ValueError):
        fock.apply_ladder(psi, "a", "up")


def test_inner_orthonormal_basis():
    cut = (3, 4)
    levels = [(n, m) for n in range(4) for m in range(-n, 5 - n)]
    for i in levels:
        for j in levels:
            assert fock.inner(fock.basis_state(i, cut), fock.basis_state(j, cut)) == (1.0 if i == j else 0.0)


@given(st.integers(0, 2**31 - 1), st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_inner_hermitian_symmetry(s1, s2):
    u, v = random_state(s1), random_state(s2)
    assert fock.inner(u, v) == pytest.approx(np.conj(fock.inner(v, u)), abs=1e-14)
    assert fock.inner(u, u).real >= 0 and abs(fock.inner(u, u).imag) < 1e-15


def test_inner_embeds_smaller_grid():
    u = random_state(1, cutoffs=(8, 8), support=5)
    big = np.zeros((13, 11), dtype=complex)
    big[:9, :9] = u.amplitudes
    assert fock.inner(u, TwoModeState(big)) == pytest.approx(1.0)


def test_number_moments():
    assert fock.number_moment(fock.vacuum((3, 3)), "a", 1) == 0.0
    assert fock.number_moment(fock.vacuum((3, 3)), "b", 2) == 0.0
    # coherent |β|=1 in mode a, built directly
    k = np.arange(41)
    prof = np.exp(-0.5) / np.sqrt([float(math.factorial(int(j))) for j in k])
    amp = np.outer(prof, [1.0])
    assert fock.number_moment(TwoModeState(amp), "a", 1) == pytest.approx(1.0, abs=1e-12)
    assert fock.number_moment(TwoModeState(amp), "a", 2) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        fock.number_moment(TwoModeState(amp), "a", 0)


def test_hamiltonian_examples():
    cut = (4, 4)
    out = fock.apply_hamiltonian(fock.basis_state((2, 0), cut))
    assert out[(2, 0)] == pytest.approx(2.5)
    vac = fock.vacuum(cut)
    np.testing.assert_allclose(fock.apply_hamiltonian(vac).amplitudes, 0.5 * vac.amplitudes)
    scales = PhysicalScales(hbar=2.0, omega=3.0)
    assert fock.apply_hamiltonian(fock.basis_state((1, 2), cut), scales)[(1, 2)] == pytest.approx(9.0)


def test_hamiltonian_two_forms_agree():
    psi = random_state(3)
    for scales in (NATURAL, PhysicalScales(0.5, 2.0, 1.7)):
        diff = fock.apply_hamiltonian(psi, scales) - fock.apply_hamiltonian_b_form(psi, scales)
        assert np.abs(diff.amplitudes).max() < 1e-12


def test_hamiltonian_ladder_commutator():
    psi = random_state(11)
    h_adag = fock.apply_hamiltonian(fock.apply_ladder(psi, "a", "raise"))
    adag_h = fock.apply_ladder(fock.apply_hamiltonian(psi), "a", "raise")
    adag = fock.apply_ladder(psi, "a", "raise")
    assert np.abs((h_adag - adag_h - adag).amplitudes).max() < 1e-12


def test_propagate_phases():
    cut = (5, 3)
    psi = fock.basis_state((3, -1), cut)
    out = fock.propagate(psi, 0.7)
    assert out[(3, -1)] == pytest.approx(np.exp(-1j * 3.5 * 0.7))


def test_truncation_cutoff_rule():
    assert fock.truncation_cutoff(0.0) == 20
    assert fock.truncation_cutoff(25.0, 5) == int(np.ceil(5 + 25 + 10 * np.sqrt(26) + 10))


def test_dump_load_roundtrip():
    psi = random_state(5, cutoffs=(4, 3), support=3)
    buf = io.StringIO()
    fock.dump_state(psi, buf)
    text = buf.getvalue()
    assert text.splitlines()[0].startswith("# cutoff_a=4 cutoff_b=3 tail=")
    assert text.splitlines()[1].count(",") == 3
    back = fock.load_state(io.StringIO(text))
    np.testing.assert_allclose(back.amplitudes, psi.amplitudes, atol=1e-12)


def test_states_are_immutable():
    psi = random_state(2)
    with pytest.raises(ValueError):
        psi.amplitudes[0, 0] = 3.0
    with pytest.raises(ValueError):
        TwoModeState(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        PhysicalScales(hbar=0.0)


def test_ladder_matrix_matches_grid_action():
    low = fock.ladder_matrix(6)
    vec = np.arange(7, dtype=complex)
    amp = fock.apply_ladder(TwoModeState(vec[:, None]), "a", "lower").amplitudes[:, 0]
    np.testing.assert_allclose(low @ vec, amp)
    np.testing.assert_allclose(fock.ladder_matrix(6, "raise"), low.T)
