"""Levy measure specifications and radial-profile primitives.

A radial measure is represented through its radial marginal: the measure mu on
(0, inf) with mu((r, inf)) = total mass outside the centered ball of radius r.
For a rotation-invariant density n(|y|) in R^n this marginal has density
rho(r) = omega_{n-1} r^{n-1} n(r), with omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).

Each built-in family exposes closed forms for its truncated second and fourth
moments and its tail mass; the quadrature engine leans on these to tame the
singularity at 0 and the oscillatory tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import special as _sp

from .errors import ModelFormatError, UnsupportedModelError


def sphere_surface(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n)


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    return math.pi ** (0.5 * n) / math.gamma(0.5 * n + 1.0)


def stable_density_constant(n: int, alpha: float) -> float:
    """c(n, alpha) with nu(dy) = c |y|^{-n-alpha} dy giving psi(xi) = |xi|^alpha."""
    if not 0.0 < alpha < 2.0:
        raise ModelFormatError(f"stable index alpha={alpha} must lie in (0, 2)")
    return (
        alpha
        * 2.0 ** (alpha - 1.0)
        * math.gamma(0.5 * (alpha + n))
        / (math.pi ** (0.5 * n) * math.gamma(1.0 - 0.5 * alpha))
    )


def _upper_incomplete_gamma(a: float, x: float) -> float:
    """Gamma(a, x) for a > -2, x > 0, via recurrence into the a > 0 range."""
    if a > 0.0:
        return _sp.gammaincc(a, x) * math.gamma(a)
    if abs(a) < 1e-12:
        return _sp.exp1(x)
    # Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a
    return (_upper_incomplete_gamma(a + 1.0, x) - x ** a * math.exp(-x)) / a


class RadialProfile:
    """Base class for radial marginal measures on (0, inf)."""

    #: (r_lo, r_hi) support; r_hi may be math.inf
    support: Tuple[float, float] = (0.0, math.inf)

    def density(self, r: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def density_ext(self, r: np.ndarray) -> np.ndarray:
        """Smooth natural extension of the density beyond the support.

        Used by the oscillatory tail accelerator; defaults to the density
        itself clipped to the support.
        """
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        out = np.zeros_like(r)
        inside = (r >= lo) & (r <= hi)
        if np.any(inside):
            out[inside] = self.density(r[inside])
        return out

    def second_moment(self, r0: float) -> float:  # int_0^{r0} r^2 rho(r) dr
        raise NotImplementedError

    def fourth_moment(self, r0: float) -> float:  # int_0^{r0} r^4 rho(r) dr
        raise NotImplementedError

    def tail_mass(self, r: float) -> float:  # mu((r, inf))
        raise NotImplementedError

    def total_mass(self) -> float:
        return self.tail_mass(0.0)

    def levy_integrability_check(self) -> float:
        """int (1 ^ r^2) dmu, which must be finite for a Levy measure."""
        return self.second_moment(1.0) + self.tail_mass(1.0)


@dataclass(frozen=True)
class PowerLawProfile(RadialProfile):
    """rho(r) = c r^{-1-alpha} on (0, r_max]; the (truncated) stable family."""

    c: float
    alpha: float
    r_max: float = math.inf

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ModelFormatError(f"alpha={self.alpha} outside (0, 2)")
        if self.c < 0:
            raise ModelFormatError("power-law coefficient must be nonnegative")
        object.__setattr__(self, "support", (0.0, self.r_max))

    def density(self, r):
        return self.c * np.asarray(r, dtype=float) ** (-1.0 - self.alpha)

    def density_ext(self, r):
        # natural smooth continuation (used only inside oscillatory-tail
        # end-point corrections, where the truncation is subtracted off again)
        return self.c * np.asarray(r, dtype=float) ** (-1.0 - self.alpha)

    def second_moment(self, r0):
        r0 = min(r0, self.r_max)
        return self.c * r0 ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def fourth_moment(self, r0):
        r0 = min(r0, self.r_max)
        return self.c * r0 ** (4.0 - self.alpha) / (4.0 - self.alpha)

    def tail_mass(self, r):
        if r >= self.r_max:
            return 0.0
        if r <= 0.0:
            return math.inf
        if math.isinf(self.r_max):
            return self.c * r ** (-self.alpha) / self.alpha
        return self.c * (r ** (-self.alpha) - self.r_max ** (-self.alpha)) / self.alpha


@dataclass(frozen=True)
class TemperedPowerLawProfile(RadialProfile):
    """rho(r) = c r^{-1-alpha} e^{-lam r}: tempered stable."""

    c: float
    alpha: float
    lam: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ModelFormatError(f"alpha={self.alpha} outside (0, 2)")
        if self.lam <= 0:
            raise ModelFormatError("tempering rate must be positive")
        object.__setattr__(self, "support", (0.0, math.inf))

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return self.c * r ** (-1.0 - self.alpha) * np.exp(-self.lam * r)

    def density_ext(self, r):
        return self.density(r)

    def second_moment(self, r0):
        a = 2.0 - self.alpha
        return self.c * self.lam ** (-a) * _sp.gammainc(a, self.lam * r0) * math.gamma(a)

    def fourth_moment(self, r0):
        a = 4.0 - self.alpha
        return self.c * self.lam ** (-a) * _sp.gammainc(a, self.lam * r0) * math.gamma(a)

    def tail_mass(self, r):
        if r <= 0.0:
            return math.inf
        return self.c * self.lam ** self.alpha * _upper_incomplete_gamma(-self.alpha, self.lam * r)


@dataclass(frozen=True)
class LogKernelProfile(RadialProfile):
    """rho(r) = 2 ln(1/r) / r on (0, 1): the slowly-growing exponent example."""

    def __post_init__(self):
        object.__setattr__(self, "support", (0.0, 1.0))

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return 2.0 * np.log(1.0 / r) / r

    def density_ext(self, r):
        # ln(1/r)/r continues smoothly (and negatively) past r = 1
        r = np.asarray(r, dtype=float)
        return 2.0 * np.log(1.0 / r) / r

    def second_moment(self, r0):
        r0 = min(r0, 1.0)
        return -r0 * r0 * math.log(r0) + 0.5 * r0 * r0

    def fourth_moment(self, r0):
        r0 = min(r0, 1.0)
        return -0.5 * r0 ** 4 * math.log(r0) + 0.125 * r0 ** 4

    def tail_mass(self, r):
        if r >= 1.0:
            return 0.0
        if r <= 0.0:
            return math.inf
        return math.log(r) ** 2


@dataclass(frozen=True)
class GammaTypeProfile(RadialProfile):
    """rho(r) = 2 e^{-r} / r: symmetrized Gamma subordinator measure."""

    def __post_init__(self):
        object.__setattr__(self, "support", (0.0, math.inf))

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return 2.0 * np.exp(-r) / r

    def density_ext(self, r):
        return self.density(r)

    def second_moment(self, r0):
        # 2 (1 - e^{-r}(1+r)) written to avoid cancellation at small r
        return 2.0 * (-math.expm1(-r0) - r0 * math.exp(-r0))

    def fourth_moment(self, r0):
        # 2 * lower incomplete gamma(4, r0)
        return 2.0 * _sp.gammainc(4.0, r0) * 6.0

    def tail_mass(self, r):
        if r <= 0.0:
            return math.inf
        return 2.0 * _sp.exp1(r)


@dataclass(frozen=True)
class TableProfile(RadialProfile):
    """Radial marginal density sampled on a grid, log-log interpolated."""

    r_nodes: Tuple[float, ...]
    rho_values: Tuple[float, ...]
    interp: str = "loglog"  # or 'linear'

    def __post_init__(self):
        r = np.asarray(self.r_nodes, dtype=float)
        v = np.asarray(self.rho_values, dtype=float)
        if r.ndim != 1 or r.size < 2:
            raise ModelFormatError("radial table needs at least two nodes", field="measure.r_nodes")
        if np.any(np.diff(r) <= 0) or r[0] <= 0:
            raise ModelFormatError("radial table nodes must be positive and increasing", field="measure.r_nodes")
        if np.any(v < 0):
            raise ModelFormatError("radial table densities must be nonnegative", field="measure.rho_values")
        if self.interp not in ("loglog", "linear"):
            raise ModelFormatError(f"unknown interpolation rule '{self.interp}'", field="measure.interp")
        object.__setattr__(self, "support", (float(r[0]), float(r[-1])))

    def density(self, r):
        r = np.asarray(r, dtype=float)
        rn = np.asarray(self.r_nodes, dtype=float)
        vn = np.asarray(self.rho_values, dtype=float)
        if self.interp == "linear":
            return np.interp(r, rn, vn, left=0.0, right=0.0)
        with np.errstate(divide="ignore"):
            logv = np.where(vn > 0, np.log(vn), -745.0)
        out = np.exp(np.interp(np.log(np.maximum(r, 1e-300)), np.log(rn), logv))
        out[(r < rn[0]) | (r > rn[-1])] = 0.0
        return out

    def _moment(self, power, r0):
        lo, hi = self.support
        r0 = min(r0, hi)
        if r0 <= lo:
            return 0.0
        grid = np.geomspace(lo, r0, 2000)
        vals = self.density(grid) * grid ** power
        return float(np.trapezoid(vals, grid))

    def second_moment(self, r0):
        return self._moment(2, r0)

    def fourth_moment(self, r0):
        return self._moment(4, r0)

    def tail_mass(self, r):
        lo, hi = self.support
        r = max(r, lo)
        if r >= hi:
            return 0.0
        grid = np.geomspace(r, hi, 2000)
        return float(np.trapezoid(self.density(grid), grid))


@dataclass(frozen=True)
class AtomSpec:
    """One atom: either a point in R^n or a radius with symmetric placement."""

    mass: float
    radius: Optional[float] = None
    point: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if (self.radius is None) == (self.point is None):
            raise ModelFormatError("atom needs exactly one of 'radius' or 'point'", field="measure.atoms")
        if self.mass < 0:
            raise ModelFormatError("atom mass must be nonnegative", field="measure.atoms")
        if self.radius is not None and self.radius <= 0:
            raise ModelFormatError("atom radius must be strictly positive", field="measure.atoms")
        if self.point is not None and all(abs(c) == 0.0 for c in self.point):
            raise ModelFormatError("atom point must not be the origin", field="measure.atoms")


@dataclass(frozen=True)
class MeasureSpec:
    """Variant type for the Levy measure of a model.

    variant 'none'   : no jump part
    variant 'atoms'  : finite/countable list of AtomSpec
    variant 'family' : built-in radial family with parameters
    variant 'table'  : sampled radial density
    """

    variant: str
    atoms: Tuple[AtomSpec, ...] = ()
    family: Optional[str] = None
    params: dict = field(default_factory=dict)
    r_nodes: Tuple[float, ...] = ()
    rho_values: Tuple[float, ...] = ()
    interp: str = "loglog"
    onesided: bool = False  # only meaningful for family='gamma_type'

    FAMILIES = ("stable", "tempered_stable", "truncated_stable", "log_kernel", "gamma_type")

    def __post_init__(self):
        if self.variant not in ("none", "atoms", "family", "table"):
            raise ModelFormatError(f"unknown measure variant '{self.variant}'", field="measure.variant")
        if self.variant == "family" and self.family not in self.FAMILIES:
            raise ModelFormatError(f"unknown radial family '{self.family}'", field="measure.family")
        if self.onesided and self.family != "gamma_type":
            raise ModelFormatError("'onesided' is only supported for the gamma_type family", field="measure.onesided")

    @property
    def is_radial(self) -> bool:
        if self.variant == "none":
            return True
        if self.variant in ("family", "table"):
            return not self.onesided
        return all(a.radius is not None for a in self.atoms)

    def radial_profile(self, dim: int) -> Optional[RadialProfile]:
        """Radial marginal of the continuous part (None for atoms / no jumps)."""
        if self.variant == "family":
            p = self.params
            if self.family == "stable":
                alpha = float(p["alpha"])
                c = stable_density_constant(dim, alpha) * sphere_surface(dim)
                return PowerLawProfile(c=c, alpha=alpha)
            if self.family == "truncated_stable":
                alpha = float(p["alpha"])
                c = stable_density_constant(dim, alpha) * sphere_surface(dim)
                return PowerLawProfile(c=c, alpha=alpha, r_max=float(p.get("R", 1.0)))
            if self.family == "tempered_stable":
                alpha = float(p["alpha"])
                c = stable_density_constant(dim, alpha) * sphere_surface(dim)
                return TemperedPowerLawProfile(c=c, alpha=alpha, lam=float(p.get("lam", 1.0)))
            if self.family == "log_kernel":
                if dim != 1:
                    raise UnsupportedModelError("log_kernel family is defined in dimension 1")
                return LogKernelProfile()
            if self.family == "gamma_type":
                if dim != 1:
                    raise UnsupportedModelError("gamma_type family is defined in dimension 1")
                return GammaTypeProfile()
        if self.variant == "table":
            return TableProfile(tuple(self.r_nodes), tuple(self.rho_values), self.interp)
        return None

    def radial_atoms(self) -> Sequence[Tuple[float, float]]:
        """(radius, mass) pairs for radius-type atoms."""
        return [(a.radius, a.mass) for a in self.atoms if a.radius is not None]

    def point_atoms(self) -> Sequence[Tuple[np.ndarray, float]]:
        return [(np.asarray(a.point, dtype=float), a.mass) for a in self.atoms if a.point is not None]
