import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from muskat_lab.errors import (
    ConfigurationError,
    InputDataError,
    UnresolvableScaleError,
    UnsupportedDimensionError,
)
from muskat_lab.grid import (
    CutoffSpec,
    GridSpec,
    SampledProfile,
    chi,
    chi_prime,
    chi_second,
    cutoff_window,
    differentiate,
    gradient,
    mollify,
    read_profile_csv,
    translate,
    write_profile_csv,
)


def bump(grid, width=1.0, height=1.0):
    x = grid.axis()
    return SampledProfile(grid, height * np.exp(-((x / width) ** 2) * 4), grid.half_width)


class TestGridSpec:
    def test_axis_symmetric(self):
        g = GridSpec(1, 5.0, 100)
        x = g.axis()
        assert x[0] == -5.0 and x[-1] == 5.0
        assert len(x) == 101
        assert np.allclose(np.diff(x), g.dx)

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            GridSpec(1, 5.0, 15)  # odd
        with pytest.raises(ConfigurationError):
            GridSpec(1, 5.0, 14)  # too few
        with pytest.raises(ConfigurationError):
            GridSpec(1, 0.5, 64)  # half-width below 1
        with pytest.raises(UnsupportedDimensionError):
            GridSpec(3, 5.0, 64)

    def test_shape_2d(self):
        g = GridSpec(2, 2.0, 16)
        assert g.shape() == (17, 17)
        xx, yy = g.meshgrid()
        assert xx.shape == (17, 17)
        assert xx[0, 0] == -2.0 and yy[-1, -1] == 2.0


class TestSampledProfile:
    def test_shape_mismatch(self):
        g = GridSpec(1, 2.0, 32)
        with pytest.raises(InputDataError):
            SampledProfile(g, np.zeros(7), 1.0)

    def test_nonfinite_rejected(self):
        g = GridSpec(1, 2.0, 32)
        v = np.zeros(33)
        v[4] = np.nan
        with pytest.raises(InputDataError):
            SampledProfile(g, v, 1.0)

    def test_far_constants_1d(self):
        g = GridSpec(1, 4.0, 32)
        x = g.axis()
        v = np.where(x < 0, -1.0, 1.0)
        v[np.abs(x) < 1] = x[np.abs(x) < 1]
        p = SampledProfile(g, v, 1.0)
        assert p.far_constants() == (-1.0, 1.0)
        p.validate_far_field()

    def test_far_field_violation_detected(self):
        g = GridSpec(1, 4.0, 32)
        p = SampledProfile(g, g.axis() ** 2, 1.0)
        with pytest.raises(InputDataError):
            p.validate_far_field()


# ---------------------------------------------------------------------------
# cutoff bump
# ---------------------------------------------------------------------------


def test_chi_plateau_and_support():
    u = np.linspace(-3, 3, 601)
    c = chi(u)
    assert np.all(c[np.abs(u) <= 1.0] == 1.0)
    assert np.all(c[np.abs(u) > 2.0] == 0.0)
    assert np.all((0.0 <= c) & (c <= 1.0))


def test_chi_derivative_bounds_dense():
    # |chi^(k)| <= 2^k for k = 0, 1, 2, on a dense grid
    u = np.linspace(-2.5, 2.5, 10_000)
    assert np.max(np.abs(chi(u))) <= 1.0 + 1e-12
    assert np.max(np.abs(chi_prime(u))) <= 2.0 + 1e-12
    assert np.max(np.abs(chi_second(u))) <= 4.0 + 1e-12


def test_chi_prime_consistent_with_chi():
    u = np.linspace(-2.5, 2.5, 4001)
    h = 1e-6
    fd = (chi(u + h) - chi(u - h)) / (2 * h)
    # chi is C^1: the FD derivative matches chi_prime everywhere to O(h)
    assert np.max(np.abs(fd - chi_prime(u))) < 1e-4


@given(st.floats(-10, 10))
def test_chi_even(u):
    assert chi(u) == chi(-u)


def test_cutoff_window_examples():
    g = GridSpec(1, 8.0, 256)
    x = g.axis()
    spec = CutoffSpec(sigma=1.5, center=0.5)
    ones = SampledProfile(g, np.ones_like(x), g.half_width)
    w = cutoff_window(spec, ones)
    assert np.array_equal(w.values, chi((x - 0.5) / 1.5))

    rng = np.random.default_rng(7)
    gprof = SampledProfile(g, rng.standard_normal(x.size), g.half_width)
    wg = cutoff_window(spec, gprof)
    inner = np.abs(x - 0.5) <= 1.5
    outer = np.abs(x - 0.5) >= 3.0
    assert np.array_equal(wg.values[inner], gprof.values[inner])
    assert np.all(wg.values[outer] == 0.0)


def test_cutoff_window_domain_check():
    g = GridSpec(1, 4.0, 64)
    prof = SampledProfile(g, np.zeros(65), g.half_width)
    with pytest.raises(ConfigurationError):
        cutoff_window(CutoffSpec(sigma=1.5, center=3.0), prof)


# ---------------------------------------------------------------------------
# mollify
# ---------------------------------------------------------------------------


def test_mollify_preserves_constants():
    g = GridSpec(1, 4.0, 128)
    c = SampledProfile(g, np.full(129, 3.0), 0.0)
    m = mollify(c, 0.5)
    # unit-mass kernel; deviation is pure round-off of the weight sum
    assert np.max(np.abs(m.values - 3.0)) <= 1e-14


def test_mollify_step_max_slope():
    # unit step smoothed at scale eps: the steepest slope is phi_eps(0), and
    # phi(0) / integral(phi) = 0.82857 for the standard bump.
    g = GridSpec(1, 4.0, 2048)
    x = g.axis()
    step = SampledProfile(g, (x >= 0).astype(float), g.half_width)
    eps = 0.25
    m = mollify(step, eps)
    max_slope = np.max(np.diff(m.values)) / g.dx
    assert max_slope == pytest.approx(0.8285688398691067 / eps, rel=0.02)
    # and the result is resolved: neighboring nodes differ by O(dx/eps)
    assert np.max(np.abs(np.diff(m.values))) < 2 * g.dx / eps


def test_mollify_contraction_sup_norm():
    rng = np.random.default_rng(3)
    g = GridSpec(1, 4.0, 256)
    v = rng.standard_normal(257)
    v[:10] = v[10]
    v[-10:] = v[-11]
    p = SampledProfile(g, v, g.half_width)
    m = mollify(p, 0.3)
    assert np.max(np.abs(m.values)) <= np.max(np.abs(p.values)) + 1e-12


def test_mollify_unresolvable():
    g = GridSpec(1, 4.0, 64)
    p = SampledProfile(g, np.zeros(65), 0.0)
    with pytest.raises(UnresolvableScaleError):
        mollify(p, 0.5 * g.dx)


def test_mollify_commutes_with_differentiate():
    # on smooth edge-flat inputs, d/dx (g * phi) = (dg/dx) * phi up to O(dx^4)-ish
    g = GridSpec(1, 6.0, 1024)
    x = g.axis()
    window = np.exp(-(x**2))
    for vals in (window, np.cos(3 * x) * window, (x**3 - x) * window):
        p = SampledProfile(g, vals, g.half_width)
        a = differentiate(mollify(p, 0.2)).values
        b = mollify(differentiate(p), 0.2).values
        assert np.max(np.abs(a - b)) < 1e-8


def test_mollify_2d_constant():
    g = GridSpec(2, 2.0, 32)
    p = SampledProfile(g, np.full((33, 33), -1.25), 0.0)
    m = mollify(p, 0.5)
    assert np.max(np.abs(m.values + 1.25)) <= 1e-14


# ---------------------------------------------------------------------------
# differentiate
# ---------------------------------------------------------------------------


def test_differentiate_quadratic_exact():
    g = GridSpec(1, 4.0, 64)
    x = g.axis()
    p = SampledProfile(g, x**2, g.half_width)
    d = differentiate(p)
    assert np.max(np.abs(d.values - 2 * x)) <= 1e-10


def test_differentiate_constant_zero():
    g = GridSpec(1, 4.0, 64)
    p = SampledProfile(g, np.full(65, 2.5), 0.0)
    assert np.max(np.abs(differentiate(p).values)) < 1e-13


def test_differentiate_quartic_exact():
    g = GridSpec(1, 2.0, 32)
    x = g.axis()
    p = SampledProfile(g, 0.3 * x**4 - x**3 + 0.5 * x - 2, g.half_width)
    d = differentiate(p)
    exact = 1.2 * x**3 - 3 * x**2 + 0.5
    assert np.max(np.abs(d.values - exact)) <= 1e-10 * np.max(np.abs(exact))


def test_differentiate_refinement_order_sin():
    errs = []
    for N in (512, 1024):
        g = GridSpec(1, 8.0, N)
        x = g.axis()
        p = SampledProfile(g, np.sin(x), g.half_width)
        d = differentiate(p)
        interior = slice(2, -2)
        errs.append(np.max(np.abs(d.values[interior] - np.cos(x)[interior])))
    order = np.log2(errs[0] / errs[1])
    assert order >= 3.8


def test_gradient_2d_plane():
    g = GridSpec(2, 2.0, 32)
    xx, yy = g.meshgrid()
    p = SampledProfile(g, 0.4 * xx - 1.1 * yy, g.half_width)
    g1, g2 = gradient(p)
    assert np.max(np.abs(g1.values - 0.4)) < 1e-12
    assert np.max(np.abs(g2.values + 1.1)) < 1e-12


# ---------------------------------------------------------------------------
# translate, serialization
# ---------------------------------------------------------------------------


def test_translate_shifts_and_fills():
    g = GridSpec(1, 4.0, 64)
    p = bump(g)
    t = translate(p, 3)
    assert np.array_equal(t.values[3:], p.values[:-3])
    assert np.all(t.values[:3] == p.values[0])
    back = translate(t, -3)
    assert np.array_equal(back.values[:-3], p.values[:-3])


@pytest.mark.parametrize("dim,cells", [(1, 32), (2, 16)])
def test_csv_round_trip_exact(tmp_path, dim, cells):
    g = GridSpec(dim, 2.0, cells)
    rng = np.random.default_rng(11)
    vals = rng.standard_normal(g.shape())
    p = SampledProfile(g, vals, 1.5)
    path = tmp_path / "prof.csv"
    write_profile_csv(p, path)
    q = read_profile_csv(path)
    # %.17g round-trips float64 exactly
    assert q.grid == g
    assert q.support_radius == 1.5
    assert np.array_equal(q.values, p.values)


def test_csv_header_required(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0.0,1.0\n")
    with pytest.raises(InputDataError):
        read_profile_csv(path)


@settings(max_examples=25)
@given(st.integers(-20, 20))
def test_translate_round_trip_interior(shift):
    g = GridSpec(1, 4.0, 64)
    p = bump(g, width=0.5)
    t = translate(translate(p, shift), -shift)
    m = 2 * abs(shift)
    if m < p.values.size:
        core = slice(m, p.values.size - m) if shift >= 0 else slice(m, None)
        assert np.array_equal(t.values[core], p.values[core])
