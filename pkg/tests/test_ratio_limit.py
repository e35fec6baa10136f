"""Large-time ratio limits against closed-form oracles."""

import math

import numpy as np
import pytest
from scipy import special as sp

from levydens.errors import RangeError, UnsupportedModelError
from levydens.levy_core import ModelSpec, builtin_model
from levydens.measures import AtomSpec, MeasureSpec
from levydens.ratio_limit import (
    chi_tail_mass,
    inf_re_psi_outside,
    ratio_px_p0,
    ratio_report,
    semigroup_ratio,
)


def test_chi_tail_mass_gaussian_oracle():
    # int_delta^inf e^{-t u^2} / int_0^inf e^{-t u^2} = erfc(delta sqrt(t))
    for t, delta in ((1.0, 0.5), (4.0, 1.0), (100.0, 1.0)):
        got = chi_tail_mass(builtin_model("gaussian"), t, delta)
        want = sp.erfc(delta * math.sqrt(t))
        assert got == pytest.approx(want, rel=1e-8)


def test_chi_tail_mass_cauchy_oracle():
    # exponent |xi|: tail fraction is e^{-t delta}
    got = chi_tail_mass(builtin_model("cauchy"), 10.0, 1.0)
    assert got == pytest.approx(math.exp(-10.0), rel=1e-8)


def test_chi_tail_mass_edge_cases():
    m = builtin_model("gaussian")
    assert chi_tail_mass(m, 1.0, 0.0) == 1.0
    with pytest.raises(RangeError):
        chi_tail_mass(m, 0.0, 1.0)
    with pytest.raises(RangeError):
        chi_tail_mass(m, 1.0, -1.0)


def test_inf_re_psi_outside():
    # monotone exponent: the infimum sits at the ball boundary
    val, flag = inf_re_psi_outside(builtin_model("gaussian"), 2.0)
    assert val == pytest.approx(4.0, rel=1e-9)
    assert not flag
    with pytest.raises(RangeError):
        inf_re_psi_outside(builtin_model("gaussian"), 0.0)


def test_inf_re_psi_lattice_obstruction():
    # a single radius-1 atom: Re psi = 2(1 - cos xi) returns to zero at 2 pi k
    meas = MeasureSpec(variant="atoms", atoms=(AtomSpec(mass=1.0, radius=1.0),))
    m = ModelSpec(dim=1, drift=(0.0,), gaussian=((0.0,),), measure=meas,
                  isotropic=True)
    val, flag = inf_re_psi_outside(m, 5.0)
    assert val == pytest.approx(0.0, abs=1e-8)
    assert flag


def test_ratio_px_p0_cauchy_exact():
    # p_t(x)/p_t(0) = t^2 / (t^2 + x^2)
    m = builtin_model("cauchy")
    for t, x in ((1.0, 1.0), (100.0, 1.0), (10.0, 3.0)):
        assert ratio_px_p0(m, t, x) == pytest.approx(
            t * t / (t * t + x * x), rel=1e-8)
    assert ratio_px_p0(m, 1.0, 0.0) == 1.0


def test_ratio_px_p0_dim2():
    m = builtin_model("cauchy", dim=2)
    got = ratio_px_p0(m, 2.0, np.array([3.0, 4.0]))
    want = (4.0 / (4.0 + 25.0)) ** 1.5
    assert got == pytest.approx(want, rel=1e-7)


def test_semigroup_ratio_converges():
    y = np.linspace(-8.0, 8.0, 1601)
    f = np.exp(-y * y)
    obs, target = semigroup_ratio(builtin_model("gaussian"), y, f, 500.0)
    assert target == pytest.approx(math.sqrt(math.pi) / (2.0 * math.pi), rel=1e-6)
    assert obs == pytest.approx(target, rel=1e-2)
    with pytest.raises(UnsupportedModelError):
        semigroup_ratio(builtin_model("gaussian", dim=2), y, f, 1.0)
    with pytest.raises(RangeError):
        semigroup_ratio(builtin_model("gaussian"), y[::-1], f, 1.0)


def test_ratio_report_ladder():
    rep = ratio_report(builtin_model("cauchy"), delta=1.0, x=1.0)
    assert rep.t_grid == (1.0, 10.0, 100.0, 1000.0)
    # both ladders approach their limits monotonically
    assert all(a >= b for a, b in zip(rep.tail_mass, rep.tail_mass[1:]))
    assert all(a <= b for a, b in zip(rep.ratios, rep.ratios[1:]))
    assert rep.ratios[-1] == pytest.approx(1.0, abs=1e-5)
    assert rep.limits_expected == {"tail_mass": 0.0, "ratio_px_p0": 1.0}
    d = rep.as_dict()
    assert len(d["ratios"]) == 4
