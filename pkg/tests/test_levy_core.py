"""Characteristic exponents: closed forms, quadrature routes, validation."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from levydens import levy_core
from levydens.errors import ModelFormatError, RangeError, UnsupportedModelError
from levydens.levy_core import (
    GAMMA_COMPENSATOR,
    ModelSpec,
    builtin_model,
    eval_psi,
    eval_re_psi,
    g_inverse,
    iso_g,
    quadratic_majorant,
    radial_G,
    radial_tail,
    re_psi_profile,
)
from levydens.measures import MeasureSpec, sphere_surface


def _strip_exact(model: ModelSpec) -> ModelSpec:
    """Same triplet, no attached closed forms: forces the quadrature route."""
    return ModelSpec(dim=model.dim, drift=model.drift, gaussian=model.gaussian,
                     measure=model.measure, isotropic=model.isotropic,
                     name=model.name)


def test_compensator_constant():
    ref, _ = quad(lambda y: math.exp(-y) / (1.0 + y * y), 0.0, np.inf)
    assert GAMMA_COMPENSATOR == pytest.approx(ref, rel=1e-12)


def test_psi_vanishes_at_origin():
    for name in ("gaussian", "cauchy", "sym_gamma", "gamma", "exa4_atoms"):
        assert eval_psi(builtin_model(name), 0.0) == 0.0


def test_gaussian_exponent():
    m = builtin_model("gaussian")
    for xi in (-3.0, 0.5, 7.0):
        assert eval_psi(m, xi) == complex(xi * xi)
    m2 = builtin_model("gaussian", dim=2)
    assert eval_re_psi(m2, [3.0, 4.0]) == pytest.approx(25.0)


def test_stable_exponent_by_quadrature():
    # the jump-measure normalization must reproduce |xi|^alpha without the
    # attached closed form
    for alpha in (0.7, 1.0, 1.5):
        m = _strip_exact(builtin_model("stable", alpha=alpha))
        for xi in (0.3, 1.0, 5.0, 40.0):
            assert eval_re_psi(m, xi) == pytest.approx(xi ** alpha, rel=1e-8)


def test_gamma_exponent_by_quadrature():
    m = _strip_exact(builtin_model("gamma"))
    for xi in (-4.0, -1.0, 0.5, 2.0, 20.0):
        got = eval_psi(m, xi)
        want = complex(0.5 * math.log1p(xi * xi), -math.atan(xi))
        assert got.real == pytest.approx(want.real, rel=1e-8)
        assert got.imag == pytest.approx(want.imag, rel=1e-8, abs=1e-10)


def test_sym_gamma_exponent_by_quadrature():
    m = _strip_exact(builtin_model("sym_gamma"))
    for xi in (0.1, 1.0, 10.0, 100.0):
        assert eval_re_psi(m, xi) == pytest.approx(math.log1p(xi * xi), rel=1e-8)


def test_conjugate_symmetry():
    for m in (_strip_exact(builtin_model("gamma")), builtin_model("exa3_atoms")):
        for xi in (0.7, 3.0, 11.0):
            assert eval_psi(m, -xi) == pytest.approx(eval_psi(m, xi).conjugate())


def test_iso_g_matches_eval_re_psi():
    for name, n in (("tempered_stable", 2), ("truncated_stable", 3)):
        m = builtin_model(name, dim=n)
        for u in (0.5, 2.0, 30.0):
            v = np.zeros(n)
            v[0] = u
            assert iso_g(m, u) == pytest.approx(eval_re_psi(m, v), rel=1e-6)
    with pytest.raises(UnsupportedModelError):
        iso_g(builtin_model("gamma"), 1.0)


def test_re_psi_profile_matches_pointwise():
    m = builtin_model("tempered_stable")
    fn = re_psi_profile(m, 1e4)
    u = np.geomspace(1e-3, 1e3, 25)
    ref = np.array([eval_re_psi(m, x) for x in u])
    np.testing.assert_allclose(fn(u), ref, rtol=1e-6)


def test_g_inverse_roundtrip():
    m = builtin_model("sym_gamma")
    for x in (0.1, 1.0, 5.0):
        s = g_inverse(m, x)
        # g(s) = log(1 + s), so the inverse is e^x - 1
        assert s == pytest.approx(math.expm1(x), rel=1e-9)
    assert g_inverse(m, 0.0) == 0.0
    with pytest.raises(RangeError):
        g_inverse(m, -1.0)


def test_quadratic_majorant_bounds_re_psi():
    for name in ("gaussian", "sym_gamma", "tempered_stable", "exa4_atoms"):
        m = builtin_model(name)
        c, d = quadratic_majorant(m, 1.0)
        for xi in np.geomspace(0.01, 1e3, 31):
            assert eval_re_psi(m, float(xi)) <= c * xi * xi + d + 1e-9
    with pytest.raises(RangeError):
        quadratic_majorant(builtin_model("gaussian"), 0.0)


def test_radial_G_stable_value():
    alpha = 1.5
    m = builtin_model("stable", alpha=alpha)
    prof = m.measure.radial_profile(1)
    for r in (0.5, 1.0, 4.0):
        want = -sphere_surface(1) * prof.c * r ** (-alpha) / alpha
        assert radial_G(m, r) == pytest.approx(want, rel=1e-12)
    with pytest.raises(RangeError):
        radial_G(m, 0.0)
    with pytest.raises(UnsupportedModelError):
        radial_G(builtin_model("gamma"), 1.0)


def test_radial_tail_checks_pass():
    tail = radial_tail(builtin_model("stable", alpha=1.2))
    vals = [tail(r) for r in (0.1, 1.0, 10.0)]
    assert all(v <= 0.0 for v in vals)
    assert vals == sorted(vals)


def test_builtin_rejects_bad_input():
    with pytest.raises(ModelFormatError):
        builtin_model("no_such_model")
    with pytest.raises(ModelFormatError):
        builtin_model("gaussian", alpha=2.0)
    with pytest.raises(ModelFormatError):
        builtin_model("gamma", dim=2)
    with pytest.raises(ModelFormatError):
        builtin_model("exa3_atoms", a=1.5)


def test_modelspec_validation():
    none = MeasureSpec(variant="none")
    with pytest.raises(ModelFormatError):
        ModelSpec(dim=2, drift=(0.0,), gaussian=((1.0, 0.0), (0.0, 1.0)),
                  measure=none)
    with pytest.raises(ModelFormatError):
        ModelSpec(dim=2, drift=(0.0, 0.0), gaussian=((1.0, 0.5), (0.2, 1.0)),
                  measure=none)
    with pytest.raises(ModelFormatError):
        ModelSpec(dim=1, drift=(0.0,), gaussian=((-1.0,),), measure=none)
    with pytest.raises(ModelFormatError):
        ModelSpec(dim=1, drift=(1.0,), gaussian=((0.0,),), measure=none,
                  isotropic=True)
