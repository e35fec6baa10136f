"""Fourier inversion: closed-form oracles, normalization, refusals."""

import math

import numpy as np
import pytest
from scipy import special as sp

from levydens.errors import IntegrabilityRefusal, RangeError, UnsupportedModelError
from levydens.inversion import (
    closed_form,
    invert_grid,
    invert_radial,
    multiplier_apply,
    pt_zero,
)
from levydens.levy_core import builtin_model


def test_gaussian_grid_matches_heat_kernel():
    m = builtin_model("gaussian")
    xs = np.arange(-8.0, 8.0 + 1e-9, 0.05)
    f = invert_grid(m, 0.5, xs)
    ref = np.exp(-xs * xs / 2.0) / math.sqrt(2.0 * math.pi)
    np.testing.assert_allclose(f.values, ref, atol=1e-10)
    assert f.mass == pytest.approx(1.0, abs=1e-6)
    assert f.imag_residue < 1e-10


def test_cauchy_grid_matches_poisson_kernel():
    m = builtin_model("cauchy")
    xs = np.arange(-10.0, 10.0 + 1e-9, 0.05)
    f = invert_grid(m, 1.0, xs)
    ref = 1.0 / (math.pi * (1.0 + xs * xs))
    np.testing.assert_allclose(f.values, ref, atol=1e-8)


def test_gamma_subordinator_density():
    # p_t(x) = x^{t-1} e^{-x} / Gamma(t) shifted by the drift, via closed_form
    m = builtin_model("gamma")
    xs = np.arange(0.5, 4.0 + 1e-9, 0.05)
    f = invert_grid(m, 2.0, xs)
    ref = np.array([closed_form("gamma", 2.0, x) for x in xs])
    np.testing.assert_allclose(f.values, ref, atol=1e-6)


def test_closed_form_families():
    assert closed_form("gaussian", 1.0, 0.0) == pytest.approx(
        1.0 / math.sqrt(4.0 * math.pi))
    assert closed_form("cauchy", 2.0, 0.0) == pytest.approx(1.0 / (2.0 * math.pi))
    # t = 1 symmetric gamma is the Laplace density e^{-|x|}/2
    assert closed_form("laplace", 1.0, 1.5) == pytest.approx(0.5 * math.exp(-1.5))
    with pytest.raises(RangeError):
        closed_form("gaussian", 0.0, 0.0)


def test_pt_zero_oracles():
    # gaussian: (2 pi)^{-1} int e^{-t xi^2} = 1 / sqrt(4 pi t)
    for t in (0.25, 1.0, 4.0):
        assert pt_zero(builtin_model("gaussian"), t) == pytest.approx(
            1.0 / math.sqrt(4.0 * math.pi * t), rel=1e-9)
        assert pt_zero(builtin_model("cauchy"), t) == pytest.approx(
            1.0 / (math.pi * t), rel=1e-9)
    # dim 2 gaussian: (2 pi)^{-2} (pi / t) = 1 / (4 pi t)
    assert pt_zero(builtin_model("gaussian", dim=2), 1.0) == pytest.approx(
        1.0 / (4.0 * math.pi), rel=1e-8)


def test_radial_matches_grid():
    rs = np.arange(0.0, 4.0 + 1e-9, 0.05)
    for name in ("gaussian", "cauchy"):
        m = builtin_model(name)
        fr = invert_radial(m, 1.0, rs)
        fg = invert_grid(m, 1.0, rs)
        np.testing.assert_allclose(fr.values, fg.values, atol=1e-8)


def test_radial_dim2_cauchy():
    # 2-d Cauchy kernel: t / (2 pi (t^2 + r^2)^{3/2})
    m = builtin_model("cauchy", dim=2)
    rs = np.array([0.0, 0.5, 1.0, 3.0])
    f = invert_radial(m, 1.0, rs)
    ref = 1.0 / (2.0 * math.pi * (1.0 + rs * rs) ** 1.5)
    np.testing.assert_allclose(f.values, ref, rtol=1e-8)


def test_refusal_below_integrability_threshold():
    m = builtin_model("sym_gamma")
    with pytest.raises(IntegrabilityRefusal):
        pt_zero(m, 0.4)
    with pytest.raises(IntegrabilityRefusal):
        invert_grid(m, 0.4, np.arange(-2.0, 2.0 + 1e-9, 0.1))
    assert pt_zero(m, 0.6) > 0.0


def test_bounded_exponent_refused():
    # dyadic atoms keep Re psi bounded on a subsequence: no density at any t
    with pytest.raises(IntegrabilityRefusal):
        pt_zero(builtin_model("exa4_atoms"), 1.0)


def test_grid_validation():
    m = builtin_model("gaussian")
    with pytest.raises(RangeError):
        invert_grid(m, 1.0, np.array([0.0, 0.1, 0.3]))   # non-uniform
    with pytest.raises(RangeError):
        invert_grid(m, -1.0, np.array([0.0, 0.1]))
    with pytest.raises(UnsupportedModelError):
        invert_radial(builtin_model("gamma"), 1.0, [0.0, 1.0])


def test_multiplier_zero_power_is_identity():
    g = builtin_model("gaussian")
    xs = np.arange(-2.0, 2.0 + 1e-9, 0.25)
    f0 = multiplier_apply(g, g, 0, 1.0, xs)
    base = invert_grid(g, 1.0, xs)
    assert np.array_equal(f0.values, base.values)
    with pytest.raises(RangeError):
        multiplier_apply(g, g, -1, 1.0, xs)


def test_multiplier_gaussian_first_power():
    # phi = xi^2 applied to the heat kernel equals -d^2/dx^2 p_t
    g = builtin_model("gaussian")
    xs = np.arange(-3.0, 3.0 + 1e-9, 0.25)
    f1 = multiplier_apply(g, g, 1, 1.0, xs)
    s2 = 2.0   # variance of p_1 for psi = xi^2
    ref = (1.0 / s2 - xs * xs / (s2 * s2)) * \
        np.exp(-xs * xs / (2.0 * s2)) / math.sqrt(2.0 * math.pi * s2) * (-1.0)
    np.testing.assert_allclose(f1.values, -ref, atol=1e-9)


def test_tail_bound_reported():
    f = invert_grid(builtin_model("gaussian"), 1.0,
                    np.arange(-5.0, 5.0 + 1e-9, 0.1))
    assert 0.0 <= f.tail_bound < 1e-6
