"""Jump-measure variants: geometry constants, moments, validation."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from levydens.errors import ModelFormatError
from levydens.measures import (
    AtomSpec,
    MeasureSpec,
    ball_volume,
    sphere_surface,
    stable_density_constant,
)


def test_geometry_constants():
    assert sphere_surface(1) == pytest.approx(2.0)
    assert sphere_surface(2) == pytest.approx(2.0 * math.pi)
    assert sphere_surface(3) == pytest.approx(4.0 * math.pi)
    assert ball_volume(1) == pytest.approx(2.0)
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)


def test_stable_constant_cauchy_value():
    # alpha = 1 in dim 1: nu(dy) = (1/pi) y^{-2} dy gives psi = |xi|
    assert stable_density_constant(1, 1.0) == pytest.approx(1.0 / math.pi, rel=1e-12)
    with pytest.raises(ModelFormatError):
        stable_density_constant(1, 2.0)
    with pytest.raises(ModelFormatError):
        stable_density_constant(1, 0.0)


def _profile(variant_kwargs, dim=1):
    return MeasureSpec(**variant_kwargs).radial_profile(dim)


@pytest.mark.parametrize("kwargs", [
    {"variant": "family", "family": "stable", "params": {"alpha": 1.5}},
    {"variant": "family", "family": "tempered_stable",
     "params": {"alpha": 1.2, "lam": 2.0}},
    {"variant": "family", "family": "truncated_stable",
     "params": {"alpha": 0.8, "R": 1.5}},
    {"variant": "family", "family": "log_kernel"},
    {"variant": "family", "family": "gamma_type"},
])
def test_profile_moments_match_quadrature(kwargs):
    prof = _profile(kwargs)
    lo, hi = prof.support
    a = max(lo, 1e-12)
    for r0 in (0.25, 0.9):
        want, _ = quad(lambda r: r * r * float(prof.density(np.array([r]))[0]),
                       a, r0, limit=200)
        assert prof.second_moment(r0) == pytest.approx(want, rel=1e-8)
        want4, _ = quad(lambda r: r ** 4 * float(prof.density(np.array([r]))[0]),
                        a, r0, limit=200)
        assert prof.fourth_moment(r0) == pytest.approx(want4, rel=1e-8)
    b = hi if math.isfinite(hi) else np.inf
    for r in (0.5, 0.99):
        want, _ = quad(lambda s: float(prof.density(np.array([s]))[0]),
                       r, b, limit=200)
        assert prof.tail_mass(r) == pytest.approx(want, rel=1e-7)


def test_levy_integrability_finite():
    prof = _profile({"variant": "family", "family": "stable",
                     "params": {"alpha": 1.5}})
    assert math.isfinite(prof.levy_integrability_check())


def test_table_profile_interpolates_nodes():
    r = (0.5, 1.0, 2.0)
    v = (4.0, 1.0, 0.25)
    prof = MeasureSpec(variant="table", r_nodes=r, rho_values=v,
                       interp="loglog").radial_profile(1)
    got = prof.density(np.array(r))
    np.testing.assert_allclose(got, v, rtol=1e-12)
    # log-log interpolation of an exact power law is exact between nodes
    assert float(prof.density(np.array([math.sqrt(0.5)]))[0]) == pytest.approx(
        2.0, rel=1e-12)


def test_table_profile_linear_variant():
    prof = MeasureSpec(variant="table", r_nodes=(1.0, 2.0),
                       rho_values=(1.0, 3.0), interp="linear").radial_profile(1)
    assert float(prof.density(np.array([1.5]))[0]) == pytest.approx(2.0)


def test_atom_spec_validation():
    AtomSpec(mass=1.0, radius=0.5)
    AtomSpec(mass=1.0, point=(1.0, 0.0))
    with pytest.raises(ModelFormatError):
        AtomSpec(mass=1.0)
    with pytest.raises(ModelFormatError):
        AtomSpec(mass=1.0, radius=0.5, point=(1.0,))
    with pytest.raises(ModelFormatError):
        AtomSpec(mass=-1.0, radius=0.5)


def test_measure_spec_validation():
    with pytest.raises(ModelFormatError):
        MeasureSpec(variant="bogus")
    with pytest.raises(ModelFormatError):
        MeasureSpec(variant="family", family="bogus_family")


def test_radiality_flags():
    assert MeasureSpec(variant="none").is_radial
    assert MeasureSpec(variant="family", family="stable",
                       params={"alpha": 1.0}).is_radial
    assert not MeasureSpec(variant="family", family="gamma_type",
                           onesided=True).is_radial
    radial_atoms = MeasureSpec(variant="atoms",
                               atoms=(AtomSpec(mass=1.0, radius=1.0),))
    assert radial_atoms.is_radial
    point_atoms = MeasureSpec(variant="atoms",
                              atoms=(AtomSpec(mass=1.0, point=(1.0,)),))
    assert not point_atoms.is_radial
