"""Variation rates, conformality residuals, finite-difference verification."""

import numpy as np
import pytest

from conwill.builders import (
    disc_profile,
    homogeneous_torus,
    plane_patch,
    sphere_profile,
    surface_of_revolution,
    torus_profile,
)
from conwill.errors import DegenerateDeformation, NotRotationallySymmetric
from conwill.functionals import AREA, VOLUME, WILLMORE, gradient
from conwill.geom_core import anticommutator_defect, integrate_2form
from conwill.variations import (
    Variation,
    conformal_completion_revolution,
    conformality_residual,
    deform,
    fd_functional_derivative,
    jdot_fd_check,
    jdot_normal,
    metric_dot,
)


def _bump(x, half_width):
    t = np.clip(x / half_width, -1.0, 1.0)
    inner = np.maximum(1.0 - t * t, 1e-300)
    return np.where(np.abs(t) < 1.0, np.exp(1.0 - 1.0 / inner), 0.0)


# ---------------------------------------------------------------- metric_dot

def test_metric_dot_plane_zero():
    s = plane_patch(1.0, 1.0, 32, 32)
    u = np.random.default_rng(0).normal(size=(32, 32))
    assert np.max(np.abs(metric_dot(s, u))) == 0.0


def test_metric_dot_sphere(sphere_band):
    fd = sphere_band.fundamental_data()
    ones = np.ones(sphere_band.position.shape[:2])
    md = metric_dot(sphere_band, ones)
    # umbilic with H = sign * 1: II = H g, so gdot = -2 H g
    expect = -2.0 * fd.H[..., None, None] * fd.g
    assert np.max(np.abs(md - expect)) < 1e-9


def test_metric_dot_fd_oracle(circle_cylinder):
    U, V = circle_cylinder.grid.mesh()
    u = _bump(V, 1.5) * (1.0 + 0.3 * np.sin(U))
    base = deform(circle_cylinder, u, 0.0)
    g0 = base.fundamental_data().g
    t = 1e-5
    gt = deform(circle_cylinder, u, t).fundamental_data().g
    rate = (gt - g0) / t
    assert np.max(np.abs(rate - metric_dot(circle_cylinder, u))) < 1e-3


# ---------------------------------------------------------------- jdot

def test_jdot_umbilic_zero(sphere_band):
    u = np.random.default_rng(1).normal(size=sphere_band.position.shape[:2])
    assert np.max(np.abs(jdot_normal(sphere_band, u))) < 1e-10


def test_jdot_zero_variation(homog_torus):
    assert np.max(np.abs(jdot_normal(homog_torus, np.zeros(homog_torus.position.shape[:2])))) == 0.0


def test_jdot_anticommutes(homog_torus):
    u = np.random.default_rng(2).normal(size=homog_torus.position.shape[:2])
    assert anticommutator_defect(homog_torus, jdot_normal(homog_torus, u)) < 1e-9


def test_jdot_fd_first_order_decay(homog_torus, circle_cylinder):
    cases = []
    U, V = homog_torus.grid.mesh()
    cases.append((homog_torus,
                  np.sin(U / 0.6) * np.cos(2 * V / 0.8) * 0.7,
                  np.cos(U / 0.6) / 0.6 * np.cos(2 * V / 0.8) * 0.7,
                  -np.sin(U / 0.6) * np.sin(2 * V / 0.8) * (2 / 0.8) * 0.7))
    Uc, Vc = circle_cylinder.grid.mesh()
    b = _bump(Vc, 1.5)
    t = np.clip(Vc / 1.5, -1.0, 1.0)
    db = np.zeros_like(b)
    inside = np.abs(t) < 1.0 - 1e-12
    inner = 1.0 - t[inside] ** 2
    db[inside] = b[inside] * (-2.0 * t[inside] / 1.5) / inner ** 2
    cases.append((circle_cylinder, b * np.sin(Uc), b * np.cos(Uc), db * np.sin(Uc)))
    for s, u, du, dv in cases:
        r = jdot_fd_check(s, u, (1e-3, 1e-4, 1e-5), du, dv)
        e = r["errors"]
        # first-order decay across the step ladder
        assert e[0] / e[1] > 5.0 and e[1] / e[2] > 5.0
        assert r["extrapolated_mismatch"] < 1e-6


# ---------------------------------------------------------------- conformality residual

def test_conformality_holomorphic_field_flat_torus(homog_torus):
    X = np.zeros(homog_torus.position.shape[:2] + (2,))
    X[..., 0], X[..., 1] = 1.2, -0.3
    v = Variation(homog_torus, np.zeros(homog_torus.position.shape[:2]), X)
    assert conformality_residual(homog_torus, v) < 1e-12


def test_conformality_umbilic_any_u(sphere_band):
    U, V = sphere_band.grid.mesh()
    u = _bump(U, 2.0)
    v = Variation(sphere_band, u)
    assert conformality_residual(sphere_band, v) < 1e-9


def test_conformality_cylinder_bump(circle_cylinder):
    U, V = circle_cylinder.grid.mesh()
    u = _bump(V, 1.5)
    v = Variation(circle_cylinder, u)
    res = conformality_residual(circle_cylinder, v)
    fd = circle_cylinder.fundamental_data()
    D = jdot_normal(circle_cylinder, u)
    mag2 = np.einsum("...ij,...ij->...", D, D)
    expect = np.sqrt(integrate_2form(circle_cylinder, mag2 * fd.dsigma))
    assert res > 0.1
    assert abs(res - expect) < 1e-12


# ---------------------------------------------------------------- functional FD

def test_fd_functional_derivative_homog(homog_torus):
    rng = np.random.default_rng(4)
    U, V = homog_torus.grid.mesh()
    g = homog_torus.grid
    for kind in (AREA, WILLMORE):
        c = rng.normal(size=3) * 0.3
        u = c[0] + c[1] * np.cos(2 * np.pi * U / g.Lu) + c[2] * np.sin(2 * np.pi * V / g.Lv)
        res = fd_functional_derivative(homog_torus, kind, Variation(homog_torus, u))
        assert res["rel_err"] < 1e-3


def test_fd_volume_revolution_torus(revolution_torus):
    U, V = revolution_torus.grid.mesh()
    g = revolution_torus.grid
    u = 0.2 + 0.1 * np.cos(2 * np.pi * U / g.Lu) + 0.05 * np.cos(V)
    v = Variation(revolution_torus, u)
    for kind in (VOLUME, AREA):
        res = fd_functional_derivative(revolution_torus, kind, v)
        assert res["rel_err"] < 1e-3
        # analytic side for the volume is exactly int u dsigma
        if kind == VOLUME:
            fd = revolution_torus.fundamental_data()
            assert np.isclose(res["analytic"], integrate_2form(revolution_torus, u * fd.dsigma))


def test_fd_willmore_noncmc(revolution_torus):
    U, V = revolution_torus.grid.mesh()
    g = revolution_torus.grid
    u = 0.1 + 0.2 * np.cos(2 * np.pi * U / g.Lu + V)
    res = fd_functional_derivative(revolution_torus, WILLMORE, Variation(revolution_torus, u))
    assert res["rel_err"] < 1e-3


def test_fd_area_cylinder_bump(circle_cylinder):
    # analytic int kappa u dsigma against central differences of the area;
    # the cos^4 window vanishes identically on the open-chart margin band
    U, V = circle_cylinder.grid.mesh()
    half = 1.8
    u = np.where(np.abs(V) < half, np.cos(np.pi * V / (2 * half)) ** 4, 0.0) \
        * (1.0 + 0.4 * np.sin(U))
    v = Variation(circle_cylinder, u)
    res = fd_functional_derivative(circle_cylinder, AREA, v)
    fd = circle_cylinder.fundamental_data()
    kappa_u = integrate_2form(circle_cylinder, 1.0 * u * fd.dsigma)  # kappa = 1
    assert abs(res["analytic"] - kappa_u) < 1e-10 * abs(kappa_u)
    assert res["rel_err"] < 1e-3


def test_fd_small_step_invariant(homog_torus, revolution_torus):
    # gradient checks also hold at the single small step 1e-5
    U, V = homog_torus.grid.mesh()
    u = 0.3 + 0.2 * np.cos(U / 0.6)
    res = fd_functional_derivative(homog_torus, AREA, Variation(homog_torus, u),
                                   steps=(1e-5,))
    assert res["rel_err"] < 1e-3
    Ut, Vt = revolution_torus.grid.mesh()
    ut = 0.2 + 0.1 * np.cos(Vt)
    res_v = fd_functional_derivative(revolution_torus, VOLUME,
                                     Variation(revolution_torus, ut), steps=(1e-5,))
    assert res_v["rel_err"] < 1e-3


def test_fd_order_slope(homog_torus):
    # raw central differences converge at order >= 1 (in fact 2) in t;
    # steps stay above the spatial-discretization floor
    U, V = homog_torus.grid.mesh()
    u = 0.3 + 0.2 * np.cos(U / 0.6)
    res = fd_functional_derivative(homog_torus, WILLMORE, Variation(homog_torus, u),
                                   steps=(1e-1, 3e-2, 1e-2))
    errs = [abs(f - res["analytic"]) for f in res["fd_by_step"]]
    assert errs[0] / errs[1] > 10.0 / 3.0
    assert errs[1] / errs[2] > 3.0


def test_deform_quotient_seam_blocked(hopf_clifford):
    with pytest.raises(DegenerateDeformation):
        deform(hopf_clifford, np.ones(hopf_clifford.position.shape[:2]), 1e-3)


def test_variation_support_enforced(circle_cylinder):
    u = np.ones(circle_cylinder.position.shape[:2])
    with pytest.raises(ValueError):
        Variation(circle_cylinder, u)  # no margin decay on the open axis


# ---------------------------------------------------------------- completion

def test_completion_planar_disc():
    s = surface_of_revolution(disc_profile(), x_span=(-2.0, 2.0), nu=128, nv=48)
    U, _ = s.grid.mesh()
    u = _bump(U, 1.2)
    var = conformal_completion_revolution(s, u)
    assert conformality_residual(s, var) < 1e-9
    pairing = integrate_2form(s, gradient(s, AREA) * u)
    assert abs(pairing) < 1e-12  # minimal: H = 0


def test_completion_sphere_band_decreases_area(sphere_band):
    U, _ = sphere_band.grid.mesh()
    fd = sphere_band.fundamental_data()
    u = _bump(U, 1.8) * np.sign(fd.H)
    var = conformal_completion_revolution(sphere_band, u)
    assert conformality_residual(sphere_band, var) < 1e-6
    pairing = integrate_2form(sphere_band, gradient(sphere_band, AREA) * u)
    assert pairing < -1e-3


def test_completion_nontrivial_ode(revolution_torus):
    s = surface_of_revolution(torus_profile(2.0, 0.5), nu=256, nv=48)
    U, _ = s.grid.mesh()
    u = 0.1 * np.sin(2 * np.pi * U / s.grid.Lu) + 0.25 * np.cos(4 * np.pi * U / s.grid.Lu)
    var = conformal_completion_revolution(s, u)
    assert np.max(np.abs(var.X[..., 0])) > 1e-3  # genuinely nonzero X
    assert conformality_residual(s, var) < 1e-6


def test_completion_zero_u(sphere_band):
    u = np.zeros(sphere_band.position.shape[:2])
    var = conformal_completion_revolution(sphere_band, u)
    assert np.max(np.abs(var.X)) == 0.0
    assert conformality_residual(sphere_band, var) == 0.0


def test_completion_rejects_asymmetric(sphere_band):
    U, V = sphere_band.grid.mesh()
    with pytest.raises(NotRotationallySymmetric):
        conformal_completion_revolution(sphere_band, _bump(U, 1.0) * np.sin(V))


def test_completion_rejects_non_revolution(homog_torus):
    with pytest.raises(NotRotationallySymmetric):
        conformal_completion_revolution(homog_torus, np.zeros(homog_torus.position.shape[:2]))
