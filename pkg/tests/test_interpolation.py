import numpy as np
import pytest

from kuiper_isometry.kuiper_exception import ValidationError
from kuiper_isometry.utils.interpolation import (
    certified_grid, convex_knots, piecewise_linear_distribution, refine_grid, thin_knots,
)


def _uniform_cdf(t):
    return np.clip((np.asarray(t, dtype=float) + 1) / 2, 0.0, 1.0)


def test_refine_grid_bounds_increments():
    ts, values = refine_grid(_uniform_cdf, -2.0, 2.0, 1e-4)
    assert np.all(np.diff(ts) > 0)
    assert np.all(np.diff(values) <= 1e-4)
    assert values[0] == 0.0 and values[-1] == 1.0


def test_refine_grid_rejects_jumps():
    with pytest.raises(ValidationError, match="jumps"):
        refine_grid(lambda t: (np.asarray(t) >= 0.3).astype(float), -1.0, 1.0, 1e-3)


def test_thin_knots_keeps_the_corners():
    ts = np.linspace(0.0, 3.0, 301)
    values = np.interp(ts, [0.0, 1.0, 2.0, 3.0], [0.0, 0.2, 0.9, 1.0])
    keep = thin_knots(ts, values, 1e-9)
    assert list(ts[keep]) == pytest.approx([0.0, 1.0, 2.0, 3.0])


def test_certified_grid():
    ts, values = certified_grid(_uniform_cdf, 1e-3)
    assert values[0] == 0.0 and values[-1] == 1.0
    assert ts.size < 10
    dense = np.linspace(-3.0, 3.0, 10001)
    assert np.max(np.abs(np.interp(dense, ts, values) - _uniform_cdf(dense))) <= 1e-3 / 2
    with pytest.raises(ValidationError):
        certified_grid(_uniform_cdf, 0.0)


def test_convex_knots_bound_chord_error():
    def exp(x, owner):
        return np.exp(x)

    knots = convex_knots(exp, exp, [0.0], [2.0], 1e-6)
    assert knots[0] == 0.0 and knots[-1] == 2.0
    assert knots.size < 5000
    dense = np.linspace(0.0, 2.0, 20001)
    assert np.max(np.abs(np.interp(dense, knots, np.exp(knots)) - np.exp(dense))) <= 1e-6


def test_convex_knots_per_cell_functions():
    def value(x, owner):
        return np.where(owner == 0, x * x, -x * x)

    def slope(x, owner):
        return np.where(owner == 0, 2 * x, -2 * x)

    knots = convex_knots(value, slope, [-1.0, 0.0], [0.0, 1.0], 1e-4)
    assert 0.0 in knots
    left, right = knots[knots <= 0], knots[knots >= 0]
    dense = np.linspace(-1.0, 0.0, 5001)
    assert np.max(np.abs(np.interp(dense, left, left * left) - dense * dense)) <= 1e-4
    dense = np.linspace(0.0, 1.0, 5001)
    assert np.max(np.abs(np.interp(dense, right, -right * right) + dense * dense)) <= 1e-4


def test_piecewise_linear_distribution():
    mu = piecewise_linear_distribution(np.array([0.0, 1.0, 2.0]), np.array([0.0, 0.25, 1.0]))
    assert mu.is_continuous
    assert mu.cdf(1) == 0.25
    with pytest.raises(ValidationError):
        piecewise_linear_distribution(np.array([0.0, 1.0]), np.array([0.0, 0.5]))
