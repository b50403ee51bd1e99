import math

import numpy as np
import pytest

from zaremba import spectra
from zaremba.coeffs import BC
from zaremba.spectra import (
    HALF_DN,
    QUARTER_DD,
    CornerRun,
    IncompleteEnumeration,
    SectorSpec,
    angular_orders,
    eigenvalues,
    extract_constant,
    heat_trace,
    heat_traces,
    run_corner_pipeline,
    solve_corners,
)


def test_angular_orders():
    assert angular_orders(HALF_DN, 0) == 0.5
    assert angular_orders(SectorSpec(alpha=math.pi / 2, side_lo_bc="D", side_hi_bc="N"), 0) == 1.0
    assert angular_orders(QUARTER_DD, 0) == 2.0
    assert angular_orders(SectorSpec(alpha=math.pi, side_lo_bc="N", side_hi_bc="N"), 0) == 0.0


def test_half_disc_spectrum():
    lam = eigenvalues(HALF_DN, 500.0)
    assert lam[0] == pytest.approx(math.pi**2, rel=1e-13)
    assert np.any(np.isclose(lam[:4], 4.493409457909064**2, rtol=1e-12))
    weyl = (math.pi / 2) * 500 / (4 * math.pi)
    assert abs(lam.size - weyl) <= (math.pi + 2) * math.sqrt(500) / (4 * math.pi)
    assert np.all(np.diff(lam) >= 0)


def test_radius_scaling():
    small = eigenvalues(SectorSpec(alpha=math.pi, radius=0.5), 2000.0)
    unit = eigenvalues(HALF_DN, 500.0)
    assert small[: unit.size] == pytest.approx(4 * unit, rel=1e-12)


def test_thread_count_does_not_change_results():
    a = eigenvalues(QUARTER_DD, 3000.0, threads=1)
    b = eigenvalues(QUARTER_DD, 3000.0, threads=4)
    assert np.array_equal(a, b)


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("ZAREMBA_THREADS", "0")
    with pytest.raises(ValueError):
        eigenvalues(HALF_DN, 100.0)


def test_non_half_integer_orders_rejected():
    with pytest.raises(ValueError):
        eigenvalues(SectorSpec(alpha=1.0), 100.0)


def test_incomplete_enumeration_is_detected(monkeypatch):
    real = spectra.bessel_j_zeros
    monkeypatch.setattr(spectra, "bessel_j_zeros", lambda nu, x: real(nu, x)[::2])
    with pytest.raises(IncompleteEnumeration):
        eigenvalues(HALF_DN, 2000.0)


def test_heat_trace_behaviour():
    lam = eigenvalues(HALF_DN, 200.0)
    late = heat_trace(HALF_DN, 5.0, 200.0)
    assert late.value == pytest.approx(math.exp(-5 * lam[0]) + math.exp(-5 * lam[1]), rel=1e-12)
    assert late.value == pytest.approx(math.exp(-5 * math.pi**2), rel=1e-2)
    samples = heat_traces(HALF_DN, np.geomspace(0.002, 0.02, 16), 2e4)
    values = [s.value for s in samples]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(s.tail_bound < 1e-12 for s in samples)
    early = heat_trace(HALF_DN, 0.01, 2e4)
    # at t = 0.01 the perimeter term is still ~18% of the area term; compare with both
    t = 0.01
    two_term = math.pi / 2 - math.sqrt(4 * math.pi * t) * math.pi / 4
    assert early.value * 4 * math.pi * t == pytest.approx(two_term, rel=1e-2)


def test_extract_constant_requires_a_decade():
    with pytest.raises(ValueError):
        extract_constant(HALF_DN, t_grid=[0.01, 0.02])


def test_solve_corners_needs_enough_runs():
    run = CornerRun(QUARTER_DD, extract_constant(QUARTER_DD, lambda_max=2e4))
    with pytest.raises(ValueError):
        solve_corners([run, CornerRun(HALF_DN, extract_constant(HALF_DN, lambda_max=2e4))])


@pytest.fixture(scope="module")
def pipeline():
    return run_corner_pipeline()


def test_pipeline_coefficients(pipeline):
    for name in ("DD@pi/2", "DN@pi/2", "DN@pi", "DD@pi", "DD@pi/3"):
        est = pipeline.runs[name].estimate
        assert est.B0 == pytest.approx(est.prediction.B0, rel=1e-3)
        assert est.B1 == pytest.approx(est.prediction.B1, rel=1e-2)


def test_pipeline_constants(pipeline):
    assert pipeline.interface_b2 == pytest.approx(-1 / 16, abs=5e-3)
    assert pipeline.corner_dd_right == pytest.approx(1 / 16, abs=5e-3)
    assert pipeline.corner_dn_right == pytest.approx(-1 / 16, abs=5e-3)
    assert pipeline.corner_dd_right_check == pytest.approx(1 / 16, abs=5e-3)
    assert pipeline.corner_dd_third == pytest.approx(1 / 9, abs=5e-3)


def test_pipeline_bookkeeping(pipeline):
    runs = pipeline.runs
    dd = pipeline.corner_dd_right
    dn = pipeline.corner_dn_right
    # quarter DD: three DD corners; quarter DN: DN vertex, DD and DN arc corners
    assert runs["DD@pi/2"].corner_total == pytest.approx(3 * dd, abs=1e-12)
    assert runs["DN@pi/2"].corner_total == pytest.approx(2 * dn + dd, abs=1e-12)
    assert runs["DN@pi"].corner_total - dd - dn == pytest.approx(pipeline.interface_b2, abs=1e-12)
    assert pipeline.main.rank == 3 and pipeline.extended.n_unknowns == 4


def test_sector_spec_validation():
    with pytest.raises(ValueError):
        SectorSpec(alpha=0.0)
    with pytest.raises(ValueError):
        SectorSpec(alpha=1.0, radius=-1.0)
    assert SectorSpec(alpha=1.0, side_lo_bc="n").side_lo_bc is BC.NEUMANN
