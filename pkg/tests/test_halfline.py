import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zaremba.halfline import (
    NonpositiveTime,
    RobinParam,
    dirichlet_kernel,
    free_kernel,
    neumann_kernel,
    robin_w,
)
from zaremba.numerics import integrate_adaptive

INV = 1.0 / math.sqrt(4.0 * math.pi)


def test_free_kernel():
    assert free_kernel(1.0, 0.3, 0.3) == pytest.approx(INV, rel=1e-15)
    assert free_kernel(0.7, 0.1, 1.4) == free_kernel(0.7, 1.4, 0.1)
    mass = integrate_adaptive(lambda x: free_kernel(1.0, x, 0.0), 0.0, math.inf)
    assert 2.0 * mass == pytest.approx(1.0, abs=1e-12)


def test_dirichlet_values():
    assert dirichlet_kernel(1.0, 0.0, 1.0) == 0.0
    assert dirichlet_kernel(1.0, 1.0, 1.0) == pytest.approx(INV * (1.0 - math.exp(-1.0)), rel=1e-15)


def test_dirichlet_heat_equation():
    t, r, r2, h = 0.3, 0.7, 1.1, 1e-3
    d_t = (dirichlet_kernel(t + h, r, r2) - dirichlet_kernel(t - h, r, r2)) / (2 * h)
    d_rr = (dirichlet_kernel(t, r + h, r2) - 2 * dirichlet_kernel(t, r, r2) + dirichlet_kernel(t, r - h, r2)) / h**2
    assert abs(d_t - d_rr) < 1e-5


def test_neumann_values():
    assert neumann_kernel(1.0, 1.0, 1.0) == pytest.approx(INV * (1.0 + math.exp(-1.0)), rel=1e-15)
    h = 1e-5
    slope = (-3 * neumann_kernel(0.5, 0, 0.8) + 4 * neumann_kernel(0.5, h, 0.8) - neumann_kernel(0.5, 2 * h, 0.8)) / (
        2 * h
    )
    assert abs(slope) < 1e-6
    mass = integrate_adaptive(lambda r: neumann_kernel(0.4, r, 0.9), 0.0, math.inf)
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_robin_limits():
    rs = np.linspace(0.0, 3.0, 13)
    assert np.allclose(robin_w(0.6, rs, 0.4, 0.0), neumann_kernel(0.6, rs, 0.4), rtol=1e-14, atol=0)
    assert robin_w(0.5, 1.0, 1.0, 1e6) == pytest.approx(dirichlet_kernel(0.5, 1.0, 1.0), abs=1e-4)


@pytest.mark.parametrize("s", [-1.0, 0.0, 2.0, 50.0])
def test_robin_boundary_condition(s):
    t, r2, h = 0.3, 0.8, 1e-6
    f0, f1, f2 = (robin_w(t, k * h, r2, s) for k in range(3))
    slope = (-3 * f0 + 4 * f1 - f2) / (2 * h)
    assert abs(slope - s * f0) <= 1e-4 * max(abs(f0), abs(slope))


def test_robin_large_s_does_not_overflow():
    # exp(t s^2) erfc(...) would overflow without the paired evaluation
    val = robin_w(1.0, 0.5, 0.5, 1e4)
    assert math.isfinite(val)
    assert val == pytest.approx(dirichlet_kernel(1.0, 0.5, 0.5), rel=1e-3)


def test_robin_negative_s_growth_guard():
    with pytest.raises(OverflowError):
        robin_w(10.0, 1.0, 1.0, -10.0)
    # bound state exp(s rho) dominates for large t
    t, s = 40.0, -1.0
    assert robin_w(t, 1.0, 1.0, s) == pytest.approx(-2 * s * math.exp(t * s * s + 2 * s), rel=1e-2)


def test_robin_heat_equation():
    t, r, r2, s, h = 0.4, 0.9, 0.6, 1.7, 1e-3
    d_t = (robin_w(t + h, r, r2, s) - robin_w(t - h, r, r2, s)) / (2 * h)
    d_rr = (robin_w(t, r + h, r2, s) - 2 * robin_w(t, r, r2, s) + robin_w(t, r - h, r2, s)) / h**2
    assert abs(d_t - d_rr) < 1e-5


def test_time_must_be_positive():
    for fn in (free_kernel, dirichlet_kernel, neumann_kernel):
        with pytest.raises(NonpositiveTime):
            fn(0.0, 1.0, 1.0)
    with pytest.raises(NonpositiveTime):
        robin_w(-1.0, 1.0, 1.0, 1.0)


def test_robin_param():
    assert RobinParam(2) == 2.0
    with pytest.raises(ValueError):
        RobinParam(math.inf)


@settings(max_examples=80, deadline=None)
@given(
    t=st.floats(0.01, 5.0),
    r=st.floats(0.0, 5.0),
    r2=st.floats(0.0, 5.0),
    s=st.floats(-3.0, 30.0),
)
def test_robin_symmetric_and_between_limits(t, r, r2, s):
    w = robin_w(t, r, r2, s)
    assert w == pytest.approx(robin_w(t, r2, r, s), rel=1e-13, abs=1e-300)
    if s >= 0:
        # monotone in s between the Neumann and Dirichlet kernels
        assert dirichlet_kernel(t, r, r2) - 1e-14 <= w <= neumann_kernel(t, r, r2) + 1e-14
