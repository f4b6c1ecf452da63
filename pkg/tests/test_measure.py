import io
import math

import mpmath
import numpy as np
import pytest

from landau_pacs import measure


def test_k0_is_flat():
    np.testing.assert_allclose(measure.density_K(0, np.linspace(0, 5, 50)), 1 / math.pi, atol=1e-14)


@pytest.mark.parametrize("n", range(1, 6))
def test_density_matches_mpmath(n):
    for b in (0.1, 0.8, 1.5, 3.0, 6.0):
        x = b * b
        ref = mpmath.factorial(n) / mpmath.pi * mpmath.exp(x) * mpmath.laguerre(n, 0, -x) * mpmath.meijerg(
            [[], [n]], [[0, 0], []], x
        )
        assert measure.density_K(n, b) == pytest.approx(float(ref), rel=1e-11)


def test_density_diverges_at_origin_and_is_positive():
    for n in range(1, 6):
        assert measure.density_K(n, 0.0) == math.inf
        assert np.all(measure.density_K(n, np.linspace(0.01, 5, 100)) > 0)
    with pytest.raises(ValueError):
        measure.density_K(1, -0.5)


def test_sample_density():
    d = measure.sample_density(2, [0.5, 1.0])
    assert d.n_exc == 2
    np.testing.assert_allclose(d.x, [0.25, 1.0])
    assert d.values.shape == (2,)


def test_moment_exact():
    assert measure.moment_exact(0, 3) == pytest.approx(6.0)
    assert measure.moment_exact(2, 2) == pytest.approx(4 / 24)


@pytest.mark.parametrize("n", range(6))
def test_moment_law(n):
    assert measure.verify_moments(n, 20) < 1e-8


def test_moment_tolerance_and_bounds():
    with pytest.raises(measure.QuadratureError):
        measure.verify_moments(3, 20, nodes=8, tol=1e-12)
    with pytest.raises(ValueError):
        measure.verify_moments(1, 21)


@pytest.mark.parametrize("n", [0, 1, 3, 5])
def test_projector_step(n):
    rep = measure.reconstruct_projector(n)
    assert rep.deviation <= 1e-6
    diag = np.diag(rep.matrix).real
    np.testing.assert_allclose(diag[:n], 0.0, atol=1e-6)
    np.testing.assert_allclose(diag[n:], 1.0, atol=1e-6)
    assert rep.offdiag_max <= 1e-6


def test_projector_needs_enough_nodes():
    # a coarse rule is visibly wrong, so the fine result is not an accident
    assert measure.reconstruct_projector(2, radial_nodes=8, angular_nodes=8).deviation > 1e-6


def test_fig1_csv():
    buf = io.StringIO()
    measure.write_fig1_csv(buf, np.array([0.5, 1.0]), [0, 1], {"command": "fig1"})
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# command=fig1"
    assert lines[2] == "beta_abs,K_n0,K_n1"
    assert float(lines[3].split(",")[1]) == pytest.approx(1 / math.pi)
