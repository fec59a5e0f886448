"""Frame integration, elastic-curve ODEs, closed-solution shooting."""

import numpy as np
import pytest

from conwill.curves import (
    OdeSolution,
    burstall_ode,
    curve_from_parametric,
    elastica_first_integral,
    elastica_ode,
    integrate_curve,
    shoot_closed_elastica,
)
from conwill.errors import BlowUp, NoSolutionInBox


def test_unit_circle_closure():
    c = integrate_curve(lambda s: 1.0, "Plane", (0.0, 2 * np.pi))
    assert c.closed
    assert c.closure_gap < 1e-8
    # tangent frame is unit by construction
    assert np.max(np.abs(np.linalg.norm(c.tangent, axis=-1) - 1.0)) < 1e-9


def test_great_circle_closure():
    c = integrate_curve(lambda s: 0.0, "Sphere2", (0.0, 2 * np.pi))
    assert c.closed and c.closure_gap < 1e-8
    assert np.max(np.abs(np.linalg.norm(c.position, axis=-1) - 1.0)) < 1e-9


def test_small_circle_length():
    # geodesic curvature 1 on S^2: latitude at colatitude pi/4,
    # closes after length 2 pi sin(pi/4) = pi sqrt(2)
    L = np.pi * np.sqrt(2.0)
    c = integrate_curve(lambda s: 1.0, "Sphere2", (0.0, L))
    assert c.closed and c.closure_gap < 1e-8
    longer = integrate_curve(lambda s: 1.0, "Sphere2", (0.0, 0.9 * L))
    assert not longer.closed


def test_curvature_reproduction():
    # finite-difference curvature of the integrated curve matches the input
    kfun = lambda s: 1.0 + 0.5 * np.sin(s)
    c = integrate_curve(kfun, "Plane", (0.0, 10.0), n_samples=2001)
    xy = c.position
    h = c.ds
    d1 = np.gradient(xy, h, axis=0, edge_order=2)
    d2 = np.gradient(d1, h, axis=0, edge_order=2)
    kfd = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / np.linalg.norm(d1, axis=1) ** 3
    interior = slice(5, -5)
    assert np.max(np.abs(kfd[interior] - c.kappa[interior])) < 1e-5


def test_sphere_frame_orthonormal():
    c = integrate_curve(lambda s: 0.7 * np.cos(s), "Sphere2", (0.0, 12.0))
    dots = np.einsum("ij,ij->i", c.position, c.tangent)
    assert np.max(np.abs(dots)) < 1e-9
    assert np.max(np.abs(np.einsum("ij,ij->i", c.tangent, c.normal))) < 1e-12


def test_elastica_constant_root():
    # 1 - 2 + 1 = 0: kappa == 1 solves the cubic for a = -2, b = 1
    sol = elastica_ode(-2.0, 1.0, 1.0, 0.0, (0.0, 10.0))
    assert np.max(np.abs(sol.kappa - 1.0)) < 1e-13
    assert sol.energy_drift < 1e-14


def test_elastica_zero_equilibrium():
    sol = elastica_ode(0.0, 0.0, 0.0, 0.0, (0.0, 5.0))
    assert np.max(np.abs(sol.kappa)) == 0.0


def test_elastica_first_integral_long_run():
    # ~10^3 oscillations: period near 7.5 for this orbit
    sol = elastica_ode(0.2, 0.4, 1.0, 0.0, (0.0, 7500.0))
    assert sol.energy_drift < 1e-8
    E = elastica_first_integral(sol.kappa, sol.dkappa, 0.2, 0.4)
    assert np.max(np.abs(E - E[0])) / max(1.0, abs(E[0])) < 1e-8


def test_elastica_blowup():
    # bounded first integral rules out true escape; the guard trips when the
    # fixed step cannot resolve an extremely stiff start and overflows
    with pytest.raises(BlowUp):
        elastica_ode(0.0, 0.0, 1e5, 0.0, (0.0, 1.0))


def test_burstall_footnote_run():
    sol = burstall_ode(0.2, 0.02, 1.0, 0.0, (0.0, 60.0))
    assert isinstance(sol, OdeSolution)
    assert np.max(np.abs(sol.kappa)) < 1e2  # no blow-up over the span


def test_burstall_zero_equilibrium():
    sol = burstall_ode(0.2, 0.02, 0.0, 0.0, (0.0, 10.0))
    assert np.max(np.abs(sol.kappa)) == 0.0


def test_burstall_reduces_to_elastica():
    # with a = b = 0 both equations read k'' + k^3/2 = 0
    sb = burstall_ode(0.0, 0.0, 1.0, 0.0, (0.0, 20.0))
    se = elastica_ode(0.0, 0.0, 1.0, 0.0, (0.0, 20.0))
    assert np.max(np.abs(sb.kappa - se.kappa)) < 1e-8


def test_shooting_recovers_circles():
    # equilibria of kappa^3 + a kappa + b close for every curvature c with
    # period 2 pi / sqrt(1 + c^2)
    found = shoot_closed_elastica([-2.0], [1.0], targets=(), include_circles=True,
                                  kappa0_bracket=(0.3, 0.9), n_scan=3)
    circles = [f for f in found if f.n_lobes == 0]
    assert circles
    c = [f for f in circles if abs(f.kappa0 - 1.0) < 1e-9][0]
    assert abs(c.period - 2 * np.pi / np.sqrt(2.0)) < 1e-9
    assert c.closure_gap < 1e-7


def test_shooting_great_circle():
    found = shoot_closed_elastica([0.0], [0.0], targets=(), include_circles=True,
                                  kappa0_bracket=(0.2, 0.4), n_scan=3)
    c = [f for f in found if f.n_lobes == 0][0]
    assert abs(c.kappa0) < 1e-12
    assert abs(c.period - 2 * np.pi) < 1e-9


def test_shooting_wavelike(closed_elastica):
    sol = closed_elastica
    assert sol.n_lobes == 4
    assert sol.closure_gap < 1e-7
    assert sol.curve.closed
    # the curvature function is genuinely non-constant
    assert np.max(sol.curve.kappa) - np.min(sol.curve.kappa) > 0.1
    # closure is Richardson-consistent: a finer re-integration agrees
    fine = integrate_curve(lambda s, spl=sol.curve: spl.kappa_at(s), "Sphere2",
                           (0.0, sol.period), n_samples=8193)
    assert fine.closure_gap < 10 * max(sol.closure_gap, 1e-9)


def test_no_solution_in_box():
    with pytest.raises(NoSolutionInBox):
        shoot_closed_elastica([0.0], [0.0], targets=(), include_circles=False,
                              kappa0_bracket=(0.5, 0.6), n_scan=2)


def test_parametric_ellipse_arclength():
    a, b = 2.0, 1.0
    c = curve_from_parametric(
        "Plane",
        lambda t: np.stack([a * np.cos(t), b * np.sin(t)], axis=-1),
        lambda t: np.stack([-a * np.sin(t), b * np.cos(t)], axis=-1),
        lambda t: np.stack([-a * np.cos(t), -b * np.sin(t)], axis=-1),
        (0.0, 2 * np.pi))
    assert c.closed
    # arc-length parametrization: unit tangents, curvature extremes a/b^2, b/a^2
    assert np.max(np.abs(np.linalg.norm(c.tangent, axis=-1) - 1.0)) < 1e-9
    assert abs(np.max(c.kappa) - a / b ** 2) < 1e-6
    assert abs(np.min(c.kappa) - b / a ** 2) < 1e-6
