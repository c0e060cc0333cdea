"""Principal-value quadratures: interface velocity, slope equation, kernels.

The numerical backbone shared by everything downstream.  Design points that
are load-bearing and worth knowing before editing:

* alpha-quadrature nodes coincide with grid offsets (alpha = j*dx, trapezoid
  weights) and each +-j pair is accumulated in a single expression, so the odd
  part of the integrand cancels in exact floating point.  That is what makes
  the principal value work without an epsilon-limit, and it is why several
  symmetry tests can demand bitwise equality.
* the j = 0 cell is replaced by the analytic limit of the even part of the
  integrand ("origin_patch" = "limit"), or dropped ("skip") for diagnostics.
* outside the covered radius A = outer_radius_factor * X the profile is
  modelled by its linear edge continuation: constant edge value plus edge
  slope.  For genuinely flat far fields the slope is exactly zero and this
  reduces to the constant model; for a globally linear profile it keeps both
  sides of the slope-equation identity exactly zero.  Tails are integrated
  with a 32-point Gauss--Legendre rule in u = 1/alpha after +-pairing, which
  resolves these rational tails to machine accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline

from .errors import (
    ConfigurationError,
    UnresolvableScaleError,
    UnsupportedDimensionError,
)
from .grid import SampledProfile, differentiate

__all__ = [
    "QuadratureConfig",
    "muskat_rhs_1d",
    "muskat_rhs_nd",
    "fx_rhs",
    "kernel_k",
    "kernel_K1_K2",
    "pv_identity_residual",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the PV quadratures.

    outer_radius_factor: covered radius A as a multiple of the half-width X.
        Must be >= 4: past A the integrand is evaluated on the far-field
        model only, and that model needs |x - alpha| to be out of the window
        for every node x.
    k_integral_points: node count for the log-spaced h-integrals of k/h^3.
    origin_patch: "limit" patches the alpha = 0 cell with the analytic
        integrand limit; "skip" drops the cell (second-order hole, useful for
        isolating the patch's contribution in diagnostics).
    """

    outer_radius_factor: float = 8.0
    k_integral_points: int = 200
    origin_patch: str = "limit"

    def __post_init__(self):
        if not self.outer_radius_factor >= 4.0:
            raise ConfigurationError(
                "outer_radius_factor must be >= 4 (far-field model assumes the "
                f"tail sees only edge constants), got {self.outer_radius_factor}"
            )
        if self.k_integral_points < 16:
            raise ConfigurationError(
                f"k_integral_points must be >= 16, got {self.k_integral_points}"
            )
        if self.origin_patch not in ("limit", "skip"):
            raise ConfigurationError(
                f"origin_patch must be 'limit' or 'skip', got {self.origin_patch!r}"
            )


_DEFAULT_QUAD = QuadratureConfig()


def _quad_or_default(quad):
    return _DEFAULT_QUAD if quad is None else quad


# ---------------------------------------------------------------------------
# Far-field closure and tail quadrature
# ---------------------------------------------------------------------------


def _covered_offsets(grid, quad):
    """Number of offsets J and snapped covered radius A = J*dx."""
    J = int(np.ceil(quad.outer_radius_factor * grid.half_width / grid.dx - 1e-12))
    return J, J * grid.dx


def _edge_model(values, slopes, x, half_width):
    """Linear-continuation far field: intercepts P and slopes s per side.

    Beyond the window the height is modelled as
        f(y) = f(-X) + s_l (y + X)   for y < -X,
        f(y) = f(+X) + s_r (y - X)   for y > +X,
    so the increments delta_{+-alpha} f(x) for alpha > A are affine in alpha:
        delta_{+alpha} = P_l + s_l alpha,   delta_{-alpha} = P_r - s_r alpha.
    """
    s_l = float(slopes[0])
    s_r = float(slopes[-1])
    P_l = values - values[0] - s_l * (x + half_width)
    P_r = values - values[-1] - s_r * (x - half_width)
    return P_l, P_r, s_l, s_r


def _padded_height(values, slopes, J, dx):
    left = values[0] + slopes[0] * dx * np.arange(-J, 0)
    right = values[-1] + slopes[-1] * dx * np.arange(1, J + 1)
    return np.concatenate([left, values, right])


def _padded_constant(values, J):
    return np.concatenate(
        [np.full(J, values[0]), values, np.full(J, values[-1])]
    )


@lru_cache(maxsize=32)
def _tail_rule(A: float):
    """Gauss nodes alpha_k and weights for integrals of paired tails.

    For a paired integrand Phi(alpha) = I(alpha) + I(-alpha) decaying like
    alpha^{-2}, substituting u = 1/alpha maps [A, inf) to (0, 1/A] with a
    bounded smooth transform; the returned weights already contain the
    1/u^2 Jacobian, so  integral = sum_k w_k * Phi(alpha_k).
    """
    nodes, weights = leggauss(32)
    half = 0.5 / A
    u = half * (nodes + 1.0)
    w = half * weights / (u * u)
    return 1.0 / u, w


# ---------------------------------------------------------------------------
# Interface velocity, d = 1
# ---------------------------------------------------------------------------


def muskat_rhs_1d(f: SampledProfile, quad: QuadratureConfig | None = None) -> SampledProfile:
    """PV integral  int (alpha f'(x) - delta_alpha f) / (alpha^2 + (delta_alpha f)^2) dalpha.

    The denominator is the flattened form of <Delta_alpha f>^2 alpha^2 with
    <.> = sqrt(1 + .^2).  Returns the time derivative of the height at every
    node.
    """
    quad = _quad_or_default(quad)
    if f.grid.dimension != 1:
        raise UnsupportedDimensionError("muskat_rhs_1d requires a 1-D profile")
    grid = f.grid
    dx = grid.dx
    v = f.values
    fp = differentiate(f).values
    J, A = _covered_offsets(grid, quad)
    vpad = _padded_height(v, fp, J, dx)
    n = grid.nodes_per_axis

    acc = np.zeros(n)
    for j in range(1, J + 1):
        w = dx if j < J else 0.5 * dx
        a = j * dx
        dp = v - vpad[J - j : J - j + n]
        dm = v - vpad[J + j : J + j + n]
        afp = a * fp
        acc += w * ((afp - dp) / (a * a + dp * dp) + (-afp - dm) / (a * a + dm * dm))

    if quad.origin_patch == "limit":
        fpp = differentiate(f.with_values(fp)).values
        acc += dx * fpp / (2.0 * (1.0 + fp * fp))

    x = grid.axis()
    P_l, P_r, s_l, s_r = _edge_model(v, fp, x, grid.half_width)
    alpha_t, w_t = _tail_rule(A)
    for a, w in zip(alpha_t, w_t):
        dl = P_l + s_l * a
        dr = P_r - s_r * a
        afp = a * fp
        acc += w * ((afp - dl) / (a * a + dl * dl) + (-afp - dr) / (a * a + dr * dr))

    return f.with_values(acc, support_radius=grid.half_width)


# ---------------------------------------------------------------------------
# Interface velocity, general d (d = 2 lattice path)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _lattice_bias_table(pad: int):
    """Cumulative ring sums  Q[J] = sum_{0 < |j|_inf <= J} j1^2 / |j|^3.

    Used by the separable singular-model correction: the model
    s(alpha) = alpha^T H alpha / (2 |alpha|^3) integrates over the covered
    square to (tr H / 2) * 4 A_c asinh(1) but lattice-sums to
    (tr H / 2) * dx * Q[J]; the difference removes both the skipped j = 0
    cell and the O(1) lattice bias of the |alpha|^{-3} singularity.
    """
    r = np.arange(-pad, pad + 1)
    j1, j2 = np.meshgrid(r, r, indexing="ij")
    ring = np.maximum(np.abs(j1), np.abs(j2))
    rad = np.sqrt(j1 * j1 + j2 * j2).astype(float)
    rad[pad, pad] = 1.0  # center bin carries zero weight anyway
    w = j1 * j1 / rad**3
    per_ring = np.bincount(ring.ravel(), weights=w.ravel(), minlength=pad + 1)
    return np.cumsum(per_ring)


def muskat_rhs_nd(f: SampledProfile, quad: QuadratureConfig | None = None) -> SampledProfile:
    """Interface velocity in d dimensions; d = 1 delegates to muskat_rhs_1d.

    d = 2 evaluates  int (alpha . grad f - delta_alpha f) / (|alpha|^2 +
    (delta_alpha f)^2)^{3/2} dalpha  by a paired lattice sum over the square
    |alpha|_inf <= A_c(x), plus two analytic pieces: a singular-model
    correction for the origin cell / lattice bias, and the closed-form
    constant-far-field complement over |alpha|_inf > A_c(x).  A_c(x) is
    chosen per node, just large enough that everything beyond it sees only
    the far-field constant.
    """
    quad = _quad_or_default(quad)
    if f.grid.dimension == 1:
        return muskat_rhs_1d(f, quad)
    if f.grid.dimension != 2:
        raise UnsupportedDimensionError(
            f"dimension {f.grid.dimension} not supported (1 and 2 are)"
        )
    from ._fast2d import lattice_sum_2d

    grid = f.grid
    dx = grid.dx
    v = f.values
    gx1 = differentiate(f, axis=0).values
    gx2 = differentiate(f, axis=1).values
    xx, yy = grid.meshgrid()
    mx = np.maximum(np.abs(xx), np.abs(yy))

    jv = np.ceil((mx + f.support_radius) / dx - 0.5 - 1e-12).astype(np.int64) + 1
    np.maximum(jv, 1, out=jv)
    pad = int(jv.max())
    vpad = np.pad(v, pad, mode="edge")

    out = np.empty_like(v)
    lattice_sum_2d(vpad, gx1, gx2, jv, pad, dx, out)

    a_c = (jv + 0.5) * dx
    if quad.origin_patch == "limit":
        f1 = differentiate(f, axis=0)
        f2 = differentiate(f, axis=1)
        tr_h = differentiate(f1, axis=0).values + differentiate(f2, axis=1).values
        bias = _lattice_bias_table(pad)
        out += 0.5 * tr_h * (4.0 * np.arcsinh(1.0) * a_c - dx * bias[jv])

    g = v - f.far_constants()
    out += -4.0 * np.arctan(g * np.sqrt(2.0 * a_c * a_c + g * g) / (a_c * a_c))

    return f.with_values(out, support_radius=grid.half_width)


# ---------------------------------------------------------------------------
# Slope-equation machinery: k, K = K1 + K2, fx_rhs, identity residual
# ---------------------------------------------------------------------------


def _kappa_const(a, fx, g):
    """int_a^inf k/h^3 dh  for the constant far-field model delta = g.

    There k/h^3 collapses to 2 (fx g + h) / (h^2 + g^2)^2, which integrates
    in closed form.  The |g| -> 0 branch switches to the series to avoid the
    g^{-3} cancellation.
    """
    a = np.asarray(a, dtype=float)
    fx = np.asarray(fx, dtype=float)
    g = np.asarray(g, dtype=float)
    small = np.abs(g) < 1e-4 * a
    gs = np.where(small, 1.0, g)  # safe denominator; branch unused where small
    exact = np.arctan(gs / a) / (2.0 * gs**3) - a / (2.0 * gs * gs * (a * a + gs * gs))
    series = 1.0 / (3.0 * a**3) - 2.0 * g * g / (5.0 * a**5)
    quartic = np.where(small, series, exact)
    return 2.0 * fx * g * quartic + 1.0 / (a * a + g * g)


def _kappa_const_integral(a, fx, g):
    """int_a^inf int_s^inf k/h^3 dh ds  for the same constant model."""
    a = np.asarray(a, dtype=float)
    fx = np.asarray(fx, dtype=float)
    g = np.asarray(g, dtype=float)
    small = np.abs(g) < 1e-4 * a
    gs = np.where(small, 1.0, g)
    at = np.arctan(gs / a)
    exact = fx * (1.0 / gs - a * at / (gs * gs)) + at / gs
    series = fx * (g / (3.0 * a * a) - g**3 / (5.0 * a**4)) + 1.0 / a - g * g / (
        3.0 * a**3
    )
    return np.where(small, series, exact)


class _SlopeFields:
    """Shared precomputation for the slope-equation quadratures.

    Bundles the derivative chain, the padded height/slope arrays, and the
    far-field closure so fx_rhs and the identity check literally run the same
    code on the same numbers.
    """

    def __init__(self, f: SampledProfile, quad: QuadratureConfig):
        if f.grid.dimension != 1:
            raise UnsupportedDimensionError("slope-equation quadratures are 1-D")
        self.f = f
        self.quad = quad
        self.grid = f.grid
        self.dx = f.grid.dx
        self.n = f.grid.nodes_per_axis
        self.v = f.values
        self.fp = differentiate(f).values
        self.fpp = differentiate(f.with_values(self.fp)).values
        self.fppp = differentiate(f.with_values(self.fpp)).values
        self.J, self.A = _covered_offsets(f.grid, quad)
        self.vpad = _padded_height(self.v, self.fp, self.J, self.dx)
        self.fppad = _padded_constant(self.fp, self.J)
        x = f.grid.axis()
        self.P_l, self.P_r, self.s_l, self.s_r = _edge_model(
            self.v, self.fp, x, f.grid.half_width
        )
        self.a_off = self.dx * np.arange(1, self.J + 1)
        # Product-integration weights for int k(h)/h^3 dh over each offset
        # cell, with k piecewise-linear between samples.  Plain trapezoid on
        # k/h^3 is useless near the origin (the h^-3 weight makes its first
        # cells ~50% wrong); integrating the weight exactly keeps the error
        # O(dx^2 k'') uniformly.  For constant k these weights are exact.
        hl = self.a_off[:-1]
        hr = self.a_off[1:]
        mom0 = 0.5 * (hl**-2 - hr**-2)  # int h^-3
        mom1 = ((1.0 / hl - 1.0 / hr) - hl * mom0) / self.dx  # int (h-hl)/dx h^-3
        self._wk_left = mom0 - mom1
        self._wk_right = mom1
        # half-<f_x> powers reused by the origin patches
        sq = 1.0 + self.fp * self.fp
        self.k0 = 2.0 / sq
        self.k1 = 3.0 * self.fp * self.fpp / (sq * sq)

    def increments(self, rows):
        """Height and slope increments for a block of x-rows.

        Returns (dp, dm, dfxp, dfxm), each shaped (len(rows), J):
        dp[r, j-1]  = f(x_r) - f(x_r - j dx)      (delta_{+alpha})
        dm[r, j-1]  = f(x_r) - f(x_r + j dx)      (delta_{-alpha})
        and likewise for the slope array.
        """
        rows = np.asarray(rows)
        J = self.J
        win_v = np.lib.stride_tricks.sliding_window_view(self.vpad, J)
        win_s = np.lib.stride_tricks.sliding_window_view(self.fppad, J)
        vb = self.v[rows, None]
        sb = self.fp[rows, None]
        dp = vb - win_v[rows][:, ::-1]
        dm = vb - win_v[rows + J + 1]
        dfxp = sb - win_s[rows][:, ::-1]
        dfxm = sb - win_s[rows + J + 1]
        return dp, dm, dfxp, dfxm

    def k_blocks(self, rows, dp, dm):
        """Kernel values k(x, +-j dx) and k/h^3 for a block of rows."""
        a = self.a_off
        fpb = self.fp[np.asarray(rows), None]
        Dp = dp / a
        Dm = -dm / a
        kp = 2.0 * (fpb * Dp + 1.0) / (1.0 + Dp * Dp) ** 2
        km = 2.0 * (fpb * Dm + 1.0) / (1.0 + Dm * Dm) ** 2
        return kp, km

    def K_blocks(self, rows, kp, km):
        """Total kernel K(x, +-j dx): exact cell moments of k/h^3 plus tail."""
        rows = np.asarray(rows)
        cp = kp[:, :-1] * self._wk_left + kp[:, 1:] * self._wk_right
        cm = km[:, :-1] * self._wk_left + km[:, 1:] * self._wk_right
        Kp = np.zeros_like(kp)
        Km = np.zeros_like(km)
        Kp[:, :-1] = np.cumsum(cp[:, ::-1], axis=1)[:, ::-1]
        Km[:, :-1] = np.cumsum(cm[:, ::-1], axis=1)[:, ::-1]
        Kp += _kappa_const(self.A, self.fp[rows], self.P_l[rows])[:, None]
        Km += _kappa_const(self.A, self.fp[rows], -self.P_r[rows])[:, None]
        return Kp, Km

    def term2_block(self, rows):
        """- int delta_alpha f_x . K(x, alpha) dalpha  for a block of rows."""
        rows = np.asarray(rows)
        dp, dm, dfxp, dfxm = self.increments(rows)
        kp, km = self.k_blocks(rows, dp, dm)
        Kp, Km = self.K_blocks(rows, kp, km)
        inner = dfxp * Kp + dfxm * Km
        total = self.dx * (inner.sum(axis=1) - 0.5 * inner[:, -1])
        if self.quad.origin_patch == "limit":
            total += self.dx * (
                self.fpp[rows] * self.k1[rows] - self.fppp[rows] * self.k0[rows] / 4.0
            )
        total += (self.fp[rows] - self.fppad[0]) * _kappa_const_integral(
            self.A, self.fp[rows], self.P_l[rows]
        )
        total += (self.fp[rows] - self.fppad[-1]) * _kappa_const_integral(
            self.A, self.fp[rows], -self.P_r[rows]
        )
        return -total

    def lhs_block(self, rows):
        """int E_alpha f . k(x, alpha) dalpha / alpha^2  for a block of rows."""
        rows = np.asarray(rows)
        dp, dm, dfxp, dfxm = self.increments(rows)
        kp, km = self.k_blocks(rows, dp, dm)
        a = self.a_off
        fpb = self.fp[rows, None]
        Ep = dp / a - fpb
        Em = -dm / a - fpb
        integ = (Ep * kp + Em * km) / (a * a)
        total = self.dx * (integ.sum(axis=1) - 0.5 * integ[:, -1])
        if self.quad.origin_patch == "limit":
            total += self.dx * (
                self.fppp[rows] * self.k0[rows] / 6.0
                - self.fpp[rows] * self.k1[rows] / 2.0
            )
        # tail: evaluate E k / alpha^2 on the far-field model, +-paired
        alpha_t, w_t = _tail_rule(self.A)
        fp = self.fp[rows]
        P_l = self.P_l[rows]
        P_r = self.P_r[rows]
        for a_t, w in zip(alpha_t, w_t):
            Dp = (P_l + self.s_l * a_t) / a_t
            Dm = (self.s_r * a_t - P_r) / a_t
            kpt = 2.0 * (fp * Dp + 1.0) / (1.0 + Dp * Dp) ** 2
            kmt = 2.0 * (fp * Dm + 1.0) / (1.0 + Dm * Dm) ** 2
            # w already carries the 1/u^2 Jacobian; divide out alpha^2 again
            total += w * ((Dp - fp) * kpt + (Dm - fp) * kmt) / (a_t * a_t)
        return total

    def term1_factor(self, rows):
        """int dalpha / (alpha <Delta_alpha f>^2), antisymmetrized over +-alpha."""
        rows = np.asarray(rows)
        dp, dm, _, _ = self.increments(rows)
        a = self.a_off
        integ = a * (1.0 / (a * a + dp * dp) - 1.0 / (a * a + dm * dm))
        total = self.dx * (integ.sum(axis=1) - 0.5 * integ[:, -1])
        if self.quad.origin_patch == "limit":
            fp = self.fp[rows]
            total += self.dx * fp * self.fpp[rows] / (1.0 + fp * fp) ** 2
        alpha_t, w_t = _tail_rule(self.A)
        P_l = self.P_l[rows]
        P_r = self.P_r[rows]
        for a_t, w in zip(alpha_t, w_t):
            dl = P_l + self.s_l * a_t
            dr = P_r - self.s_r * a_t
            total += w * a_t * (1.0 / (a_t * a_t + dl * dl) - 1.0 / (a_t * a_t + dr * dr))
        return total


def _row_blocks(n, J):
    """Row blocks sized to keep the (rows x J) work arrays around ~8 MB."""
    block = max(1, (1 << 20) // max(J, 1))
    for start in range(0, n, block):
        yield np.arange(start, min(start + block, n))


def fx_rhs(
    f: SampledProfile, sigma: float, quad: QuadratureConfig | None = None
) -> SampledProfile:
    """Time derivative of the slope f_x, evaluated at every node.

        d/dt f_x = -f_xx int dalpha / (alpha <Delta_alpha f>^2)
                   - int delta_alpha f_x . K(x, alpha) dalpha

    The first integral is antisymmetrized over +-alpha before summation (its
    two halves diverge separately); the second uses the total kernel
    K = int_{|alpha|}^{inf} k(x, +-h)/h^3 dh, built by suffix trapezoid over
    the same offset grid.  The result does not depend on the K1/K2 split
    radius; sigma only gates resolvability.
    """
    quad = _quad_or_default(quad)
    if sigma <= 2.0 * f.grid.dx:
        raise UnresolvableScaleError(
            f"sigma = {sigma} is not resolvable on dx = {f.grid.dx} (need sigma > 2 dx)"
        )
    fields = _SlopeFields(f, quad)
    out = np.empty(fields.n)
    for rows in _row_blocks(fields.n, fields.J):
        out[rows] = -fields.fpp[rows] * fields.term1_factor(rows) + fields.term2_block(
            rows
        )
    return f.with_values(out, support_radius=f.grid.half_width)


def _pv_identity_terms(f, x, sigma, quad):
    quad = _quad_or_default(quad)
    if sigma <= 2.0 * f.grid.dx:
        raise UnresolvableScaleError(
            f"sigma = {sigma} is not resolvable on dx = {f.grid.dx} (need sigma > 2 dx)"
        )
    i = (x + f.grid.half_width) / f.grid.dx
    if abs(i - round(i)) > 1e-9:
        raise ConfigurationError(f"x = {x} is not a grid node")
    rows = np.array([int(round(i))])
    fields = _SlopeFields(f, quad)
    lhs = float(fields.lhs_block(rows)[0])
    rhs = float(fields.term2_block(rows)[0])
    return lhs, rhs


def pv_identity_residual(
    f: SampledProfile, x: float, sigma: float, quad: QuadratureConfig | None = None
) -> float:
    """|LHS - RHS| of the integrated-by-parts slope identity at node x.

    LHS integrates (Delta_alpha f - f_x) k(x, alpha) / alpha^2; RHS is the
    kernel form -int delta_alpha f_x K(x, alpha) dalpha.  The two sides share
    only the increment tables, not the quadrature structure, so the residual
    measures real discretization error; the continuum value is 0.
    """
    lhs, rhs = _pv_identity_terms(f, x, sigma, quad)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Pointwise kernels
# ---------------------------------------------------------------------------


class _HeightInterpolant:
    """Cubic-spline height lookup with linear continuation off the window."""

    def __init__(self, f: SampledProfile):
        x = f.grid.axis()
        self.X = f.grid.half_width
        self.dx = f.grid.dx
        self.v = f.values
        self.fp = differentiate(f).values
        self.spline = CubicSpline(x, f.values)
        self.dspline = self.spline.derivative()

    def value(self, y):
        y = np.asarray(y, dtype=float)
        inside = self.spline(np.clip(y, -self.X, self.X))
        lo = self.v[0] + self.fp[0] * (y + self.X)
        hi = self.v[-1] + self.fp[-1] * (y - self.X)
        return np.where(y < -self.X, lo, np.where(y > self.X, hi, inside))

    def slope(self, y):
        y = float(y)
        if abs(y) > self.X:
            return self.fp[0] if y < 0 else self.fp[-1]
        i = (y + self.X) / self.dx
        if abs(i - round(i)) < 1e-9:
            return float(self.fp[int(round(i))])
        return float(self.dspline(y))

    def k(self, x, h):
        delta = self.value(x) - self.value(x - np.asarray(h, dtype=float))
        Dh = delta / h
        return 2.0 * (self.slope(x) * Dh + 1.0) / (1.0 + Dh * Dh) ** 2


def kernel_k(f: SampledProfile, x: float, h) -> float:
    """Pointwise slope-equation kernel k = 2 (f_x Delta_h f + 1) / <Delta_h f>^4.

    h may be a scalar or an array of offsets; h = 0 is undefined.
    """
    h = np.asarray(h, dtype=float)
    if np.any(h == 0.0):
        raise ConfigurationError("kernel_k is undefined at offset h = 0")
    interp = _HeightInterpolant(f)
    out = interp.k(x, h)
    return float(out) if out.ndim == 0 else out


def kernel_K1_K2(
    f: SampledProfile,
    x: float,
    alpha: float,
    sigma: float,
    quad: QuadratureConfig | None = None,
):
    """The near/far kernel split (K1, K2) at one (x, alpha) pair.

    K1 integrates k(x, h)/h^3 from |alpha| to sigma (zero when |alpha| >=
    sigma: empty range, by definition, not an error); K2 integrates from
    max(|alpha|, sigma) out to the covered radius A and closes with the
    constant-model tail.  Both use log-spaced composite trapezoid in ln h,
    which is where k/h^3 varies slowly.
    """
    quad = _quad_or_default(quad)
    if alpha == 0.0:
        raise ConfigurationError("kernel split is undefined at alpha = 0")
    if sigma <= 2.0 * f.grid.dx:
        raise UnresolvableScaleError(
            f"sigma = {sigma} is not resolvable on dx = {f.grid.dx} (need sigma > 2 dx)"
        )
    interp = _HeightInterpolant(f)
    sgn = 1.0 if alpha > 0 else -1.0
    abs_a = abs(alpha)
    m = quad.k_integral_points
    A = quad.outer_radius_factor * f.grid.half_width

    def log_trapz(lo, hi):
        if hi <= lo:
            return 0.0
        u = np.linspace(np.log(lo), np.log(hi), m)
        h = np.exp(u)
        vals = interp.k(x, sgn * h) / (h * h)
        return float(np.trapezoid(vals, u))

    K1 = log_trapz(abs_a, sigma)
    K2 = log_trapz(max(abs_a, sigma), A)
    # constant-model tail past A
    fp_x = interp.slope(x)
    if sgn > 0:
        g = interp.value(x) - f.values[0]
    else:
        g = -(interp.value(x) - f.values[-1])
    K2 += float(_kappa_const(A, fp_x, g))
    return K1, K2
