"""Uniform-grid profiles, the standard cutoff bump, mollification, differentiation.

Everything downstream works on `SampledProfile`: a function sampled on the
uniform tensor grid of `GridSpec`, declared constant outside a compact
`support_radius`.  The far-field constants are what every tail formula in
`kernels` integrates against, so they are first-class here (`far_constants`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import (
    ConfigurationError,
    InputDataError,
    UnresolvableScaleError,
    UnsupportedDimensionError,
)


@dataclass(frozen=True)
class GridSpec:
    """Uniform symmetric grid on [-X, X]^d with N cells (N+1 nodes) per axis."""

    dimension: int
    half_width: float
    cells: int

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise UnsupportedDimensionError(
                f"dimension must be 1 or 2, got {self.dimension}"
            )
        if self.cells < 16 or self.cells % 2 != 0:
            raise ConfigurationError(f"cells must be even and >= 16, got {self.cells}")
        if not self.half_width >= 1:
            raise ConfigurationError(f"half_width must be >= 1, got {self.half_width}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.cells

    @property
    def nodes_per_axis(self) -> int:
        return self.cells + 1

    def axis(self) -> np.ndarray:
        """Node coordinates along one axis, including both endpoints."""
        return -self.half_width + self.dx * np.arange(self.cells + 1)

    def meshgrid(self):
        """Coordinate arrays shaped like a 2-D values array (indexing='ij')."""
        if self.dimension != 2:
            raise UnsupportedDimensionError("meshgrid is for dimension 2")
        x = self.axis()
        return np.meshgrid(x, x, indexing="ij")

    def shape(self) -> tuple:
        return (self.cells + 1,) * self.dimension


@dataclass
class SampledProfile:
    """Function values on a GridSpec, constant outside |x| > support_radius.

    For d = 1 the two far-field constants may differ (a slope profile's height
    integral telescopes between them); for d = 2 the far field is connected, so
    a single constant applies and is taken as the mean of the outermost ring.
    """

    grid: GridSpec
    values: np.ndarray
    support_radius: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape():
            raise InputDataError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape()}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InputDataError("profile contains non-finite values")
        if not 0 <= self.support_radius <= self.grid.half_width:
            raise InputDataError(
                f"support_radius {self.support_radius} outside [0, X={self.grid.half_width}]"
            )

    def far_constants(self):
        """Far-field constants: (c_left, c_right) for d=1, a single float for d=2."""
        if self.grid.dimension == 1:
            return float(self.values[0]), float(self.values[-1])
        ring = np.concatenate(
            [self.values[0, :], self.values[-1, :], self.values[1:-1, 0], self.values[1:-1, -1]]
        )
        return float(ring.mean())

    def validate_far_field(self, atol: float = 1e-9):
        """Check the constant-outside-support invariant to roughly machine scale."""
        x = self.grid.axis()
        scale = max(1.0, float(np.max(np.abs(self.values))))
        if self.grid.dimension == 1:
            left = x < -self.support_radius
            right = x > self.support_radius
            for mask, const in ((left, self.values[0]), (right, self.values[-1])):
                if mask.any() and np.max(np.abs(self.values[mask] - const)) > atol * scale:
                    raise InputDataError(
                        "values are not constant outside the declared support radius"
                    )
        else:
            xx, yy = self.grid.meshgrid()
            mask = np.maximum(np.abs(xx), np.abs(yy)) > self.support_radius
            if mask.any():
                c = self.far_constants()
                if np.max(np.abs(self.values[mask] - c)) > atol * scale:
                    raise InputDataError(
                        "values are not constant outside the declared support radius"
                    )

    def with_values(self, values: np.ndarray, support_radius: float | None = None):
        return SampledProfile(
            self.grid,
            values,
            self.support_radius if support_radius is None else support_radius,
        )


# ---------------------------------------------------------------------------
# The standard cutoff bump chi: 1 on [-1,1], 0 outside [-2,2], |chi^(k)| <= 2^k.
#
# The transition on 1 <= |u| <= 2 is the C^1 "bang-bang" pair of parabolic
# arcs: it is the only shape family that meets |chi'| <= 2 and |chi''| <= 4
# with room to spare nowhere -- any C^2 transition of unit width would need
# max|chi''| > 4.
# ---------------------------------------------------------------------------


def chi(u):
    """Standard symmetric cutoff bump evaluated elementwise."""
    u = np.abs(np.asarray(u, dtype=np.float64))
    s = np.clip(u - 1.0, 0.0, 1.0)
    ramp = np.where(s <= 0.5, 2.0 * s * s, 1.0 - 2.0 * (1.0 - s) ** 2)
    return 1.0 - ramp


def chi_prime(u):
    u = np.asarray(u, dtype=np.float64)
    a = np.abs(u)
    s = np.clip(a - 1.0, 0.0, 1.0)
    dramp = np.where(s <= 0.5, 4.0 * s, 4.0 * (1.0 - s))
    inside = (a > 1.0) & (a < 2.0)
    return np.where(inside, -np.sign(u) * dramp, 0.0)


def chi_second(u):
    """Second derivative where it exists (jumps at |u| = 1.5; measure-zero)."""
    u = np.abs(np.asarray(u, dtype=np.float64))
    out = np.zeros_like(u)
    out[(u > 1.0) & (u < 1.5)] = -4.0
    out[(u > 1.5) & (u < 2.0)] = 4.0
    return out


@dataclass(frozen=True)
class CutoffSpec:
    """A chi window: chi_{sigma,z}(x) = chi((x - z)/sigma)."""

    sigma: float
    center: float

    def window_bounds(self):
        return self.center - 2.0 * self.sigma, self.center + 2.0 * self.sigma


def cutoff_window(spec: CutoffSpec, g: SampledProfile) -> SampledProfile:
    """Pointwise product chi_{sigma,z} * g.  The window must sit inside the domain."""
    if g.grid.dimension != 1:
        raise UnsupportedDimensionError("cutoff_window is one-dimensional")
    lo, hi = spec.window_bounds()
    X = g.grid.half_width
    if lo < -X or hi > X:
        raise ConfigurationError(
            f"window [{lo:g}, {hi:g}] exceeds the domain [-{X:g}, {X:g}]"
        )
    x = g.grid.axis()
    w = chi((x - spec.center) / spec.sigma)
    return g.with_values(w * g.values, support_radius=min(g.grid.half_width, abs(hi) + 0.0))


# ---------------------------------------------------------------------------
# Mollification
# ---------------------------------------------------------------------------


def _bump_kernel(eps: float, dx: float, dimension: int) -> np.ndarray:
    """Sampled exp(-1/(1-r^2)) bump, discretely normalized to unit mass.

    Discrete normalization (divide by the sample sum) rather than the analytic
    mass makes convolution preserve constants exactly, which the far-field
    bookkeeping relies on.
    """
    m = int(np.floor(eps / dx))
    r = np.arange(-m, m + 1) * (dx / eps)
    if dimension == 1:
        rr2 = r * r
    else:
        rr2 = r[:, None] ** 2 + r[None, :] ** 2
    with np.errstate(divide="ignore", over="ignore"):
        k = np.where(rr2 < 1.0, np.exp(-1.0 / np.maximum(1.0 - rr2, 1e-300)), 0.0)
    return k / k.sum()


def mollify(g: SampledProfile, eps: float) -> SampledProfile:
    """Convolution with the standard bump at scale eps, sampled on the same grid."""
    dx = g.grid.dx
    if eps < 2.0 * dx:
        raise UnresolvableScaleError(
            f"mollifier width {eps:g} under 2*dx = {2 * dx:g}: not resolvable"
        )
    kernel = _bump_kernel(eps, dx, g.grid.dimension)
    if g.grid.dimension == 1:
        smoothed = ndimage.convolve1d(g.values, kernel, mode="nearest")
    else:
        smoothed = ndimage.convolve(g.values, kernel, mode="nearest")
    r = min(g.grid.half_width, g.support_radius + 2.0 * eps)
    return g.with_values(smoothed, support_radius=r)


# ---------------------------------------------------------------------------
# Differentiation: 4th-order central, one-sided at the two edge nodes per side.
# ---------------------------------------------------------------------------

_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def _derivative_1d(v: np.ndarray, dx: float) -> np.ndarray:
    d = np.empty_like(v)
    d[2:-2] = (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * dx)
    d[0] = _EDGE0 @ v[:5] / dx
    d[1] = _EDGE1 @ v[:5] / dx
    d[-1] = -(_EDGE0 @ v[-5:][::-1]) / dx
    d[-2] = -(_EDGE1 @ v[-5:][::-1]) / dx
    return d


def differentiate(f: SampledProfile, axis: int = 0) -> SampledProfile:
    """Spatial derivative along `axis`; exact on quartics up to round-off."""
    dx = f.grid.dx
    if f.grid.dimension == 1:
        dv = _derivative_1d(f.values, dx)
    else:
        dv = np.apply_along_axis(_derivative_1d, axis, f.values, dx)
    r = min(f.grid.half_width, f.support_radius + 2.0 * dx)
    return f.with_values(dv, support_radius=r)


def gradient(f: SampledProfile):
    """All first partials of a 2-D profile (or the single derivative in 1-D)."""
    if f.grid.dimension == 1:
        return (differentiate(f),)
    return tuple(differentiate(f, axis=a) for a in range(2))


def translate(g: SampledProfile, nodes: int) -> SampledProfile:
    """Shift a 1-D profile right by `nodes` grid nodes, filling with edge constants."""
    if g.grid.dimension != 1:
        raise UnsupportedDimensionError("translate is one-dimensional")
    v = np.empty_like(g.values)
    if nodes >= 0:
        v[nodes:] = g.values[: len(g.values) - nodes]
        v[:nodes] = g.values[0]
    else:
        v[:nodes] = g.values[-nodes:]
        v[nodes:] = g.values[-1]
    return g.with_values(v, support_radius=min(g.grid.half_width, g.support_radius + abs(nodes) * g.grid.dx))


# ---------------------------------------------------------------------------
# Profile serialization: CSV with a `# d, X, N, R_s` header, one node per row.
# ---------------------------------------------------------------------------


def write_profile_csv(profile: SampledProfile, path):
    g = profile.grid
    x = g.axis()
    with open(path, "w") as fh:
        fh.write(
            "# %d, %.17g, %d, %.17g\n" % (g.dimension, g.half_width, g.cells, profile.support_radius)
        )
        if g.dimension == 1:
            for xi, vi in zip(x, profile.values):
                fh.write("%.17g,%.17g\n" % (xi, vi))
        else:
            for i, xi in enumerate(x):
                for j, yj in enumerate(x):
                    fh.write("%.17g,%.17g,%.17g\n" % (xi, yj, profile.values[i, j]))


def read_profile_csv(path) -> SampledProfile:
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise InputDataError(f"{path}: missing '# d, X, N, R_s' header")
        parts = [p.strip() for p in header[1:].split(",")]
        d, X, N, rs = int(parts[0]), float(parts[1]), int(parts[2]), float(parts[3])
        grid = GridSpec(d, X, N)
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    vals = data[:, -1].reshape(grid.shape())
    return SampledProfile(grid, vals, rs)
