"""Fourier inversion of e^{-t psi} into transition densities.

Convention: p_t(x) = (2 pi)^{-n} int e^{-t psi(xi)} e^{-i x.xi} d xi.

Grid inversion uses a trapezoid rule on the frequency axis evaluated through a
wrapped FFT (frequencies beyond one DFT period are folded, which is exactly
the aliasing the grid step allows), with one Richardson step-halving pass to
kill the leading h^2 trapezoid error coming from kinks like |xi| at 0.

The xi-window is chosen by a doubling ladder; the leftover tail integral of
the envelope is estimated on a log grid and reported as part of tail_bound.
A tail whose decade contributions do not decrease marks a non-integrable
exponent at this t and raises IntegrabilityRefusal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import special as _sp

from .errors import (
    DimensionMismatchError,
    IntegrabilityRefusal,
    QuadratureError,
    RangeError,
    UnsupportedModelError,
)
from .levy_core import ModelSpec, eval_psi, re_psi_profile
from .measures import sphere_surface
from . import specfun

_POINT_TOL = 1e-4      # pointwise envelope level at the window edge; the
_TAIL_TARGET = math.inf   # analytic tail correction covers what is cut off
_BUDGET = 1 << 20


@dataclass(frozen=True)
class DensityField:
    """A computed density (or multiplier image) on a spatial grid.

    ``nodes`` holds one array per axis for grid fields, or the radius list
    for radial fields.  ``tail_bound`` is the estimated total truncation /
    aliasing error; ``imag_residue`` the largest discarded imaginary part.
    """

    kind: str                      # 'grid' or 'radial'
    dim: int
    t: float
    nodes: Tuple[np.ndarray, ...]
    values: np.ndarray
    mass: float
    tail_bound: float
    imag_residue: float = 0.0

    def to_csv(self, path, metadata: Optional[dict] = None) -> None:
        meta = {"t": self.t, "mass": self.mass, "tail_bound": self.tail_bound}
        if metadata:
            meta.update(metadata)
        with open(path, "w") as fh:
            for k, v in meta.items():
                fh.write(f"# {k}={v}\n")
            if self.kind == "radial":
                fh.write("r,p\n")
                for r, p in zip(self.nodes[0], self.values):
                    fh.write(f"{r!r},{p!r}\n")
            elif self.dim == 1:
                fh.write("x,p\n")
                for x, p in zip(self.nodes[0], self.values):
                    fh.write(f"{x!r},{p!r}\n")
            else:
                fh.write("x,y,p\n")
                xs, ys = self.nodes
                for i, x in enumerate(xs):
                    for j, y in enumerate(ys):
                        fh.write(f"{x!r},{y!r},{self.values[i, j]!r}\n")


def _uniform_step(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise RangeError("grid must be a 1-d array with at least two nodes")
    d = np.diff(x)
    h = d[0]
    if h <= 0 or not np.allclose(d, h, rtol=1e-9, atol=1e-12):
        raise RangeError("grid must be uniformly spaced and increasing")
    return float(h)


_glt_x, _glt_w = np.polynomial.legendre.leggauss(16)


def _decade_piece(env, n, u_lo):
    """GL quadrature of env(u) u^{n-1} du over [u_lo, 10 u_lo], log substitution."""
    a = math.log(u_lo)
    edges = a + math.log(10.0) * np.array([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    pts = mid[:, None] + half[:, None] * _glt_x[None, :]
    u = np.exp(pts.reshape(-1))
    vals = (env(u) * u ** n).reshape(pts.shape)
    return float(np.sum(half * (vals @ _glt_w)))


def _tail_integral(env: Callable[[np.ndarray], np.ndarray], t: float, n: int,
                   xi0: float) -> float:
    """int_{xi0}^{inf} env(u) u^{n-1} du, decade by decade.

    env is the decaying envelope (weight times e^{-t Re psi}).  After the
    probed decades the remainder is extrapolated geometrically from the
    decade-contribution ratio; a non-contracting ratio marks a divergent
    (or not demonstrably convergent) tail and returns inf.
    """
    total = 0.0
    prev = math.inf
    piece = 0.0
    u_lo = max(xi0, 1e-12)
    ratio = 1.0
    for _ in range(24):
        piece = _decade_piece(env, n, u_lo)
        total += piece
        if piece < 1e-18 * max(total, 1e-300) or piece == 0.0:
            return total
        if math.isfinite(prev) and prev > 0.0:
            ratio = piece / prev
        prev = piece
        u_lo *= 10.0
    if ratio >= 0.999:
        return math.inf
    return total + piece * ratio / (1.0 - ratio)


def _choose_window(env, t, n, dxi, tail_target=_TAIL_TARGET,
                   point_tol=_POINT_TOL, budget=_BUDGET):
    """Smallest Xi on a doubling ladder meeting the pointwise and tail goals.

    Returns (Xi, tail_estimate).  If the budget is exhausted the largest
    affordable window is kept with its honest tail estimate; a divergent tail
    raises IntegrabilityRefusal.
    """
    xi = max(64.0 * dxi, 1.0)
    best = None
    while True:
        probes = np.geomspace(xi, 2.0 * xi, 9)
        point = float(np.max(env(probes) * probes ** (n - 1)))
        tail = _tail_integral(env, t, n, xi)
        if math.isinf(tail):
            raise IntegrabilityRefusal(
                f"e^(-t Re psi) tail does not converge at t={t}",
                diagnostics={"window": xi, "pointwise": point})
        best = (xi, tail)
        if point < point_tol and tail < tail_target:
            return best
        if 2.0 * xi / dxi > budget:
            return best
        xi *= 2.0


def _fold_frequency(Ffun, dxi: float, nside: int, M: int) -> np.ndarray:
    """Fold trapezoid samples F(k dxi), k = -nside..nside, into M DFT bins.

    Streams in chunks so multi-million-sample windows never materialize."""
    folded = np.zeros(M, dtype=complex)
    chunk = 1 << 18
    for lo in range(-nside, nside + 1, chunk):
        hi = min(lo + chunk, nside + 1)
        k = np.arange(lo, hi)
        F = np.asarray(Ffun(k * dxi), dtype=complex)
        if lo == -nside:
            F[0] *= 0.5
        if hi == nside + 1:
            F[-1] *= 0.5
        idx = np.mod(k, M)
        folded += (np.bincount(idx, weights=F.real, minlength=M)
                   + 1j * np.bincount(idx, weights=F.imag, minlength=M))
    return folded


def _grid_1d_sum(Ffun, Xi, x0, hx, nx, refine=1, want_edge=True):
    """One trapezoid evaluation; the frequency step is 2 pi over the spatial
    wrap period M hx, so ``refine`` doubling M halves the step at a fixed
    x-grid.  Returns (p complex, |p| on the full wrap window, step, M)."""
    x_reach = max(abs(x0), abs(x0 + (nx - 1) * hx)) + hx
    M = refine << max(8, math.ceil(math.log2(2.0 * x_reach / hx + 2)))
    dxi_eff = 2.0 * math.pi / (M * hx)
    nside = int(math.ceil(Xi / dxi_eff))
    folded = _fold_frequency(Ffun, dxi_eff, nside, M)
    shift = int(round(x0 / hx))
    if abs(x0 / hx - shift) > 1e-8:
        raise RangeError("grid origin must be an integer multiple of the step")
    # one DFT serves both the requested grid and the wrap-edge probe: an
    # integer-step origin is a cyclic shift of the output bins
    spec = np.fft.fft(folded) * (dxi_eff / (2.0 * math.pi))
    p = spec[(np.arange(nx) + shift) % M]
    if not want_edge:
        return p, None, dxi_eff, M
    # wrap-edge density magnitude for the aliasing estimate
    p_full = np.abs(spec[(np.arange(M) - M // 2) % M])
    return p, p_full, dxi_eff, M


_filon_K = 12
_filon_P = np.polynomial.legendre.legvander(_glt_x, _filon_K - 1)  # (16, K)


def _filon_tail(env, Xi: float, x: np.ndarray) -> Tuple[np.ndarray, float]:
    """(1/pi) Re int_Xi^inf env(u) e^{-i x u} du for an array of nonzero x.

    The envelope is expanded in Legendre polynomials on geometric panels and
    integrated against the exact oscillatory moments
    int_{-1}^{1} P_k(tau) e^{-i s tau} d tau = 2 (-i)^k j_k(s), so the
    accuracy is uniform in x.  The remainder beyond the last panel is the
    leading integration-by-parts term.  Returns (values, error estimate).
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.zeros_like(x)
    proj = 0.5 * (2.0 * np.arange(_filon_K) + 1.0)[:, None] * (_filon_P.T * _glt_w)
    even = np.arange(0, _filon_K, 2)
    odd = np.arange(1, _filon_K, 2)
    sgn_e = (-1.0) ** (even // 2)
    sgn_o = (-1.0) ** ((odd - 1) // 2)
    u_lo = Xi
    proj_err = 0.0
    env_lo = float(env(np.array([u_lo]))[0])
    for _ in range(400):
        # panel width: at most +-15 percent of u and at most ~2 e-folds of
        # envelope decay per half-width, so degree 11 resolves the panel
        du = 1e-3 * u_lo
        e_p = float(env(np.array([u_lo + du]))[0])
        lam = max((env_lo - e_p) / (du * max(env_lo, 1e-300)), 0.0)
        width = 0.3 * u_lo
        if lam > 0.0:
            width = min(width, 4.0 / lam)
        u_hi = u_lo + width
        c = 0.5 * (u_lo + u_hi)
        h = 0.5 * (u_hi - u_lo)
        ev = env(c + h * _glt_x)
        a = proj @ ev
        s = ax * h
        A = np.zeros_like(x)
        B = np.zeros_like(x)
        for k, sg in zip(even, sgn_e):
            A += 2.0 * sg * a[k] * _sp.spherical_jn(int(k), s)
        for k, sg in zip(odd, sgn_o):
            B += 2.0 * sg * a[k] * _sp.spherical_jn(int(k), s)
        out += h * (A * np.cos(ax * c) - B * np.sin(ax * c))
        proj_err += 2.0 * h * abs(a[-1])
        u_lo = u_hi
        env_lo = float(env(np.array([u_lo]))[0])
        if env_lo < 1e-25 or u_lo > 1e12:
            break
    U = u_lo
    envU = env_lo
    # leading integration-by-parts term for the remainder past the panels
    out -= envU * np.sin(ax * U) / np.maximum(ax, 1e-300)
    dU = 1e-3 * U
    envp = abs(float(env(np.array([U + dU]))[0]) - float(env(np.array([U - dU]))[0])) / (2.0 * dU)
    x_min = float(np.min(ax))
    rem_err = min(envp / max(x_min, 1e-300) ** 2 + envU / max(U * x_min * x_min, 1e-300),
                  3.0 * envU * U)
    return out / math.pi, (proj_err + rem_err) / math.pi


def _osc_tail_term(Ffun_c, env, t, Xi, x: float, sym: bool) -> Tuple[complex, float]:
    """(1/pi) int_Xi^inf F(xi) e^{-i x xi} d xi by half-period panels.

    For x = 0 and symmetric F (= the envelope) this is the plain tail
    integral.  Returns (value, error estimate)."""
    if x == 0.0:
        if sym:
            tail = _tail_integral(env, t, 1, Xi)
            return complex(tail / math.pi), 1e-8 * tail
        total = 0.0 + 0.0j
        u = Xi
        for _ in range(30):
            pts = np.exp(np.linspace(math.log(u), math.log(10.0 * u), 64))
            total += complex(np.trapezoid(Ffun_c(pts) * pts, np.log(pts)))
            u *= 10.0
            rest = _tail_integral(env, t, 1, u)
            if rest < 1e-16:
                return total / math.pi, 1e-12
        return total / math.pi, rest / math.pi
    ax = abs(x)
    extra = 0.0 + 0.0j
    if ax * Xi < 0.5:
        # phase is slow out to u ~ 1/|x|: march in decades with the phase
        # factor treated as a smooth function, then hand over to half-period
        # panels once the oscillation sets in
        u = Xi
        for _ in range(32):
            u_next = min(10.0 * u, 0.5 / ax)
            la, lb = math.log(u), math.log(u_next)
            edges_l = np.linspace(la, lb, 4)
            mid = 0.5 * (edges_l[:-1] + edges_l[1:])
            half = 0.5 * np.diff(edges_l)
            pts = np.exp(mid[:, None] + half[:, None] * _glt_x[None, :])
            fv = (Ffun_c(pts.reshape(-1)).reshape(pts.shape)
                  * np.exp(-1j * x * pts) * pts)
            extra += complex(np.sum(half[:, None] * _glt_w[None, :] * fv))
            u = u_next
            if u >= 0.5 / ax - 1e-12:
                break
            rest = _tail_integral(env, t, 1, u)
            if rest < 1e-16:
                return extra / math.pi, 1e-12
        Xi = u
    step = math.pi / ax
    nseg = 240
    edges = Xi + step * np.arange(nseg + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    pts = mids[:, None] + 0.5 * step * _gl12_x[None, :]
    fv = Ffun_c(pts.reshape(-1)).reshape(pts.shape)
    terms = 0.5 * step * np.sum(
        _gl12_w[None, :] * fv * np.exp(-1j * x * pts), axis=1)
    leftover = _tail_integral(env, t, 1, edges[-1])
    if leftover < 1e-15:
        # envelope exhausted inside the panel range: plain sum is exact
        return (extra + complex(np.sum(terms))) / math.pi, (1e-14 * float(
            np.sum(np.abs(terms))) + leftover) / math.pi
    re, ere = _accelerated(np.real(terms))
    im, eim = _accelerated(np.imag(terms))
    return (extra + complex(re, im)) / math.pi, (ere + eim) / math.pi


def _invert_1d(model: ModelSpec, t: float, x: np.ndarray,
               weight: Optional[Callable] = None,
               tail_target: float = _TAIL_TARGET) -> DensityField:
    hx = _uniform_step(x)
    x0 = float(x[0])
    nx = x.size
    sym = not (model.measure.onesided or model.measure.point_atoms())
    profile = re_psi_profile(model, 1e9)

    if weight is None:
        env = lambda u: np.exp(-t * profile(np.abs(u)))
    else:
        env = lambda u: np.abs(weight(np.abs(u))) * np.exp(-t * profile(np.abs(u)))
    dxi_cap = math.pi / (max(abs(x0), abs(x[-1])) + hx)
    Xi, tail = _choose_window(env, t, 1, dxi_cap, tail_target=tail_target)

    if sym:
        def Ffun(xi):
            out = np.exp(-t * profile(np.abs(xi)))
            if weight is not None:
                out = out * weight(np.abs(xi))
            return out
        Ffun_c = Ffun
    else:
        def Ffun_c(xi):
            xi = np.asarray(xi, dtype=float)
            if model.psi_exact_vec is not None:
                psis = model.psi_exact_vec(xi.reshape(-1))
            elif model.psi_exact is not None:
                psis = np.array([model.psi_exact(u) for u in xi.reshape(-1)])
            else:
                psis = np.array([eval_psi(model, [u]) for u in xi.reshape(-1)])
            vals = np.exp(-t * psis).reshape(xi.shape)
            if weight is not None:
                vals = vals * weight(np.abs(xi))
            return vals
        Ffun = Ffun_c

    # widen the DFT wrap period until the folded-image (aliasing) level is
    # negligible; heavy-tailed densities need a period far beyond the grid
    x_reach = max(abs(x0), abs(x[-1])) + hx
    refine = 1
    while True:
        p1, edge1, d1, M1 = _grid_1d_sum(Ffun, Xi, x0, hx, nx, refine=refine)
        W = M1 * hx
        x_full = np.arange(M1) * hx - 0.5 * W
        # the nearest image of any output node sits at distance >= W - x_reach
        # >= W/2 from the origin, so the folded magnitude at the wrap edge
        # bounds the per-image contribution for decaying densities
        band = np.abs(x_full) >= 0.5 * W - 4.0 * hx
        alias_est = 2.0 * float(np.max(edge1[band])) if np.any(band) else 0.0
        if alias_est < 1e-8 or M1 >= (1 << 21):
            break
        # predict the wrap period that meets the target from the observed
        # power-law decay between half and full edge, then jump directly
        quarter = np.abs(np.abs(x_full) - 0.25 * W) < 2.0 * hx
        p_quarter = float(np.max(edge1[quarter])) if np.any(quarter) else 0.0
        jump = 2
        if p_quarter > 0.0 and alias_est > 0.0:
            q = math.log(max(2.0 * p_quarter / alias_est, 1.0 + 1e-12)) / math.log(2.0)
            if q > 0.1:
                need = (alias_est / 1e-8) ** (1.0 / q)
                jump = max(2, 1 << math.ceil(math.log2(need)))
        while refine * jump > (1 << 21) // (M1 // refine):
            jump //= 2
        refine *= max(jump, 2)
    # Richardson pass: frequency steps d and d/2 share the x-grid (doubling
    # the DFT length halves the frequency step); truncation edges coincide
    Xi_eff = math.ceil(Xi / d1) * d1
    p2, _, d2, M2 = _grid_1d_sum(Ffun, Xi_eff - 0.25 * d1, x0, hx, nx,
                                 refine=2 * refine, want_edge=False)
    p = (4.0 * p2 - p1) / 3.0

    # analytic continuation of the truncated frequency tail
    corr_err = 0.0
    corr = np.zeros(nx)
    if sym:
        # the two half-axes pair into Re of the one-sided integral; the
        # Filon route evaluates it for every grid node at once
        nz = x != 0.0
        if np.any(nz):
            corr[nz], ce = _filon_tail(env, Xi_eff, x[nz])
            corr_err = max(corr_err, ce)
        if np.any(~nz):
            c0, e0 = _osc_tail_term(Ffun_c, env, t, Xi_eff, 0.0, True)
            corr[~nz] = float(np.real(c0))
            corr_err = max(corr_err, e0)
    else:
        for j, xj in enumerate(x):
            c_pos, e = _osc_tail_term(Ffun_c, env, t, Xi_eff, float(xj), sym)
            corr[j] = float(np.real(c_pos))
            corr_err = max(corr_err, e)
    p = p + corr

    vals = np.real(p)
    residue = float(np.max(np.abs(np.imag(p)))) if p.size else 0.0
    mass = float(np.trapezoid(vals, x))
    tail_bound = alias_est + float(np.max(np.abs(p2 - p1))) / 3.0 + corr_err
    return DensityField(kind="grid", dim=1, t=t, nodes=(np.asarray(x, float),),
                        values=vals, mass=mass, tail_bound=tail_bound,
                        imag_residue=residue)


def _lattice_sum_2d(Fr, dxi: float, n1: int, pts_x: np.ndarray,
                    pts_y: np.ndarray) -> np.ndarray:
    """(dxi/2pi)^2 trapezoid of Fr(|xi|) e^{-i x.xi} on a square lattice.

    Fr takes radii; symmetry makes the result the product of two cosine
    matrices around the radial samples."""
    # evenness in both axes folds the sum onto one quadrant
    xi = np.arange(0, n1 + 1) * dxi
    R = np.hypot(xi[:, None], xi[None, :])
    F = Fr(R.reshape(-1)).reshape(R.shape)
    wfold = np.full_like(xi, 2.0)
    wfold[0] = wfold[-1] = 1.0
    C1 = np.cos(np.outer(pts_x, xi)) * wfold[None, :]
    C2 = np.cos(np.outer(pts_y, xi)) * wfold[None, :]
    return (C1 @ F @ C2.T) * (dxi / (2.0 * math.pi)) ** 2


def _invert_2d(model: ModelSpec, t: float, grid) -> DensityField:
    xs = np.asarray(grid[0], dtype=float)
    ys = np.asarray(grid[1], dtype=float)
    hx = _uniform_step(xs)
    hy = _uniform_step(ys)
    if not model.measure.is_radial or model.measure.onesided:
        raise UnsupportedModelError("two-dimensional inversion needs a symmetric radial model")
    profile = re_psi_profile(model, 1e9)
    env = lambda u: np.exp(-t * profile(u))
    Fr = env
    reach = max(np.max(np.abs(xs)) + hx, np.max(np.abs(ys)) + hy)
    Xi, tail = _choose_window(env, t, 2, math.pi / reach, tail_target=1e-8,
                              point_tol=1e-9, budget=1 << 13)

    # widen the lattice wrap period until the density probed at the wrap
    # edge (the nearest periodic image) is negligible
    W = 4.0 * reach
    alias_est = math.inf
    for _ in range(7):
        dxi = 2.0 * math.pi / W
        n1 = min(int(math.ceil(Xi / dxi)), 1500)
        e = 0.5 * W
        px = np.array([e, e / math.sqrt(2.0), 0.0])
        py = np.array([0.0, e / math.sqrt(2.0), e])
        pv = np.diag(_lattice_sum_2d(Fr, dxi, n1, px, py))
        alias_est = 4.0 * float(np.max(np.abs(pv)))
        if alias_est < 1e-7 or 2.0 * n1 > 3000:
            break
        W *= 2.0
    Xi_eff = n1 * dxi
    tail_eff = _tail_integral(env, t, 2, Xi_eff)

    # Richardson pass in the frequency step for the |xi|-kink error
    p1 = _lattice_sum_2d(Fr, dxi, n1, xs, ys)
    p2 = _lattice_sum_2d(Fr, 0.5 * dxi, 2 * n1, xs, ys)
    vals = (4.0 * p2 - p1) / 3.0
    mass = float(np.trapezoid(np.trapezoid(vals, ys, axis=1), xs))
    tail_bound = (tail_eff / (2.0 * math.pi) ** 2 * 2.0 * math.pi
                  + alias_est + float(np.max(np.abs(p2 - p1))) / 3.0)
    return DensityField(kind="grid", dim=2, t=t, nodes=(xs, ys), values=vals,
                        mass=mass, tail_bound=tail_bound)


def invert_grid(model: ModelSpec, t: float, grid,
                tail_target: float = _TAIL_TARGET) -> DensityField:
    """Density field of model at time t on a uniform spatial grid (dim 1 or 2)."""
    if t <= 0:
        raise RangeError("time t must be positive")
    if model.dim == 1:
        x = np.asarray(grid, dtype=float)
        return _invert_1d(model, t, x, tail_target=tail_target)
    if model.dim == 2:
        return _invert_2d(model, t, grid)
    raise UnsupportedModelError("grid inversion supports dim 1 and 2; use invert_radial")


# -- radial route ---------------------------------------------------------

_gl16_x, _gl16_w = np.polynomial.legendre.leggauss(16)
_gl12_x, _gl12_w = np.polynomial.legendre.leggauss(12)


def _panel_sum(f, edges, gx, gw) -> float:
    a = edges[:-1]
    b = edges[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid[:, None] + half[:, None] * gx[None, :]
    vals = f(pts.reshape(-1)).reshape(pts.shape)
    return float(np.sum(half * (vals @ gw)))


def _accelerated(terms: np.ndarray) -> Tuple[float, float]:
    s = np.cumsum(terms)
    prev = s[-1]
    est = abs(prev)
    while s.size > 2:
        s = 0.5 * (s[:-1] + s[1:])
        est = abs(s[-1] - prev)
        prev = s[-1]
    return float(prev), float(est)


def pt_zero(model: ModelSpec, t: float) -> float:
    """p_t(0) = (2 pi)^{-n} int e^{-t Re psi(xi)} d xi for radial-exponent models."""
    if t <= 0:
        raise RangeError("time t must be positive")
    n = model.dim
    if n > 1 and not model.measure.is_radial:
        raise UnsupportedModelError("pt_zero needs a radial exponent for dim > 1")
    profile = re_psi_profile(model, 1e12)
    env = lambda u: np.exp(-t * profile(u))
    tail_all = _tail_integral(env, t, n, 1e-8)
    if math.isinf(tail_all):
        raise IntegrabilityRefusal(
            f"int e^(-t Re psi) diverges at t={t}",
            diagnostics={"t": t, "dim": n})
    head = 1e-8 ** n / n            # int_0^{1e-8} u^{n-1} du, e^{-t psi} ~ 1
    return sphere_surface(n) * (head + tail_all) / (2.0 * math.pi) ** n


def invert_radial(model: ModelSpec, t: float, radii: Sequence[float]) -> DensityField:
    """p_t(|x|) for isotropic models in any dimension via the radial formula.

    p_t(r) = (2 pi)^{-n} omega_{n-1} int_0^inf e^{-t g(u^2)} u^{n-1}
             H_{(n-2)/2}(u r) du, with half-period oscillatory panels and
    series acceleration for slowly decaying envelopes.
    """
    if not model.isotropic:
        raise UnsupportedModelError("invert_radial needs an isotropic model")
    if t <= 0:
        raise RangeError("time t must be positive")
    n = model.dim
    nu = 0.5 * n - 1.0
    profile = re_psi_profile(model, 1e12)
    env = lambda u: np.exp(-t * profile(u))
    pref = sphere_surface(n) / (2.0 * math.pi) ** n

    radii = np.asarray(radii, dtype=float)
    if np.any(radii < 0):
        raise RangeError("radii must be nonnegative")
    vals = np.empty_like(radii)
    worst_tail = 0.0
    p0 = None
    for i, r in enumerate(radii):
        if r == 0.0:
            if p0 is None:
                p0 = pt_zero(model, t)
            vals[i] = p0
            continue
        f = lambda u: env(u) * u ** (n - 1) * specfun.h_kernel_array(nu, u * r)
        u_knee = min(1.0, 30.0 / r)
        edges = np.geomspace(1e-9, u_knee, 64)
        total = env(np.array([5e-10]))[0] * 1e-9 ** n / n   # [0, 1e-9] head
        total += _panel_sum(f, edges, _gl16_x, _gl16_w)
        u_big = 30.0 / r
        if u_big > u_knee:
            # panel width capped both by the kernel half-period and by a
            # geometric-growth rule that keeps the envelope resolved
            half_period = 0.5 * math.pi / r
            u = u_knee
            while u < u_big:
                du = min(half_period, max(0.25 * u, 1e-3))
                u_next = min(u + du, u_big)
                total += _panel_sum(f, np.array([u, u_next]), _gl16_x, _gl16_w)
                u = u_next
                if env(np.array([u]))[0] * u ** (n - 1) < 1e-22 * abs(total):
                    break
            u_big = u
        # oscillatory tail in half periods of the Bessel kernel
        step = math.pi / r
        terms = []
        u = u_big
        tail_est = 0.0
        for _ in range(240):
            seg = _panel_sum(f, np.array([u, u + step]), _gl12_x, _gl12_w)
            terms.append(seg)
            u += step
            left = _tail_integral(env, t, n, u)
            if math.isinf(left):
                raise IntegrabilityRefusal(
                    f"envelope tail diverges at t={t}", diagnostics={"t": t})
            if left < 1e-16:
                tail_est = left
                total += math.fsum(terms)
                terms = None
                break
        if terms is not None:
            acc, est = _accelerated(np.asarray(terms))
            total += acc
            tail_est = est
        vals[i] = pref * total
        worst_tail = max(worst_tail, pref * tail_est)
    order = np.argsort(radii)
    mass = float(sphere_surface(n) * np.trapezoid(
        vals[order] * radii[order] ** (n - 1), radii[order])) if radii.size > 1 else math.nan
    return DensityField(kind="radial", dim=n, t=t, nodes=(radii,), values=vals,
                        mass=mass, tail_bound=worst_tail)


def multiplier_apply(model: ModelSpec, phi_model: ModelSpec, m: int, t: float,
                     grid) -> DensityField:
    """Field of phi(D)^m p_t, the Fourier multiplier phi^m applied to the density.

    m = 0 delegates to invert_grid and is bit-identical with it.
    """
    if m < 0 or int(m) != m:
        raise RangeError("multiplier power m must be a nonnegative integer")
    if m == 0:
        return invert_grid(model, t, grid)
    if model.dim != 1:
        raise UnsupportedModelError("multiplier fields are one-dimensional here")
    phi_profile = re_psi_profile(phi_model, 1e9)
    weight = lambda u: phi_profile(np.abs(u)) ** m
    return _invert_1d(model, t, np.asarray(grid, dtype=float), weight=weight)


def closed_form(family: str, t: float, x, dim: int = 1) -> float:
    """Closed-form reference densities used as oracles.

    Families: gaussian, cauchy, gamma, sym_gamma_besselk, laplace.
    """
    n = dim
    if t <= 0:
        raise RangeError("time t must be positive")
    if family == "gaussian":
        r2 = float(np.dot(x, x)) if np.ndim(x) else float(x) ** 2
        return (4.0 * math.pi * t) ** (-0.5 * n) * math.exp(-r2 / (4.0 * t))
    if family == "cauchy":
        r2 = float(np.dot(x, x)) if np.ndim(x) else float(x) ** 2
        cn = math.gamma(0.5 * (n + 1)) / math.pi ** (0.5 * (n + 1))
        return cn * t / (t * t + r2) ** (0.5 * (n + 1))
    if family == "gamma":
        xv = float(x)
        if xv <= 0:
            raise RangeError("gamma density needs x > 0")
        return xv ** (t - 1.0) * math.exp(-xv) / math.gamma(t)
    if family in ("sym_gamma_besselk", "laplace"):
        if family == "laplace":
            n = 1
        nu = t - 0.5 * n
        if nu <= 0:
            raise RangeError(
                f"Bessel-form symmetric gamma density needs t > dim/2 (t={t}, dim={n})")
        r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, float))))
        c = 2.0 ** (1.0 - n) / (math.pi ** (0.5 * n) * math.gamma(t))
        if r == 0.0:
            return 0.5 * c * math.gamma(nu)
        kv = specfun.bessel_k(nu, r).value
        return c * (0.5 * r) ** nu * kv
    raise RangeError(f"unknown closed-form family '{family}'")
