"""Curvature-prescribed curves in the plane and on S^2, and elastic-curve ODEs.

Curves are recovered from their (geodesic) curvature kappa(s) by fixed-step
classical RK4 integration of the frame equations:

* plane:  theta' = kappa, x' = cos(theta), y' = sin(theta)
* sphere: p' = t, t' = -p + kappa n, n' = -kappa t  (n = p x t)

The generalized elastic-curve equation 2 k'' + k^3 + a k + b = 0 and its
linearly-forced variant k'' + k^3/2 = (a + b s) k are integrated with the
same stepper; closed spherical solutions are found by shooting on the
rotation angle of the frame transfer over one curvature period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BlowUp, NoSolutionInBox, StepTooLarge

try:
    from numba import njit
except Exception:  # pragma: no cover
    def njit(*args, **kwargs):
        def wrapper(func):
            return func
        return wrapper if not (len(args) == 1 and callable(args[0])) else args[0]


PLANE = "Plane"
SPHERE2 = "Sphere2"

MAX_STEP = 1e-3
MIN_STEPS_PER_SPAN = 10_000
BLOWUP_LIMIT = 1e6
FRAME_DRIFT_TOL = 1e-6


def _default_step(span: float) -> float:
    return min(MAX_STEP, span / MIN_STEPS_PER_SPAN)


# ----------------------------------------------------------------------
# numba kernels
# ----------------------------------------------------------------------

@njit(cache=True)
def _elastica_rhs(k, dk, a, b):
    return dk, -0.5 * (k * k * k + a * k + b)


@njit(cache=True)
def _elastica_run(a, b, k0, dk0, h, nsteps, store_every, out):
    """RK4 on 2 k'' + k^3 + a k + b = 0; returns 0 on success, 1 on blow-up."""
    k, dk = k0, dk0
    out[0, 0] = k
    out[0, 1] = dk
    m = 1
    for i in range(nsteps):
        k1, l1 = _elastica_rhs(k, dk, a, b)
        k2, l2 = _elastica_rhs(k + 0.5 * h * k1, dk + 0.5 * h * l1, a, b)
        k3, l3 = _elastica_rhs(k + 0.5 * h * k2, dk + 0.5 * h * l2, a, b)
        k4, l4 = _elastica_rhs(k + h * k3, dk + h * l3, a, b)
        k += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        dk += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4)
        if abs(k) > BLOWUP_LIMIT:
            return 1
        if (i + 1) % store_every == 0:
            out[m, 0] = k
            out[m, 1] = dk
            m += 1
    return 0


@njit(cache=True)
def _burstall_run(a, b, k0, dk0, h, nsteps, store_every, out):
    """RK4 on k'' + k^3/2 = (a + b s) k."""
    k, dk = k0, dk0
    s = 0.0
    out[0, 0] = k
    out[0, 1] = dk
    m = 1
    for i in range(nsteps):
        k1 = dk
        l1 = (a + b * s) * k - 0.5 * k ** 3
        k2 = dk + 0.5 * h * l1
        l2 = (a + b * (s + 0.5 * h)) * (k + 0.5 * h * k1) - 0.5 * (k + 0.5 * h * k1) ** 3
        k3 = dk + 0.5 * h * l2
        l3 = (a + b * (s + 0.5 * h)) * (k + 0.5 * h * k2) - 0.5 * (k + 0.5 * h * k2) ** 3
        k4 = dk + h * l3
        l4 = (a + b * (s + h)) * (k + h * k3) - 0.5 * (k + h * k3) ** 3
        k += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        dk += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4)
        s += h
        if abs(k) > BLOWUP_LIMIT:
            return 1
        if (i + 1) % store_every == 0:
            out[m, 0] = k
            out[m, 1] = dk
            m += 1
    return 0


@njit(cache=True)
def _elastica_step(k, dk, a, b, h):
    k1, l1 = _elastica_rhs(k, dk, a, b)
    k2, l2 = _elastica_rhs(k + 0.5 * h * k1, dk + 0.5 * h * l1, a, b)
    k3, l3 = _elastica_rhs(k + 0.5 * h * k2, dk + 0.5 * h * l2, a, b)
    k4, l4 = _elastica_rhs(k + h * k3, dk + h * l3, a, b)
    return k + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4), dk + h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4)


@njit(cache=True)
def _elastica_half_period(a, b, k0, h, max_steps):
    """Arc length from (k0, 0) to the next dk = 0 crossing; -1.0 if none."""
    k, dk = _elastica_step(k0, 0.0, a, b, h)
    s = h
    if abs(dk) < 1e-300:
        return -1.0
    for _ in range(max_steps):
        kn, dkn = _elastica_step(k, dk, a, b, h)
        if abs(kn) > BLOWUP_LIMIT:
            return -2.0
        if dk * dkn < 0.0:
            lo, hi = 0.0, h
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                _, dmid = _elastica_step(k, dk, a, b, mid)
                if dk * dmid < 0.0:
                    hi = mid
                else:
                    lo = mid
            return s + 0.5 * (lo + hi)
        k, dk = kn, dkn
        s += h
    return -1.0


@njit(cache=True)
def _frame_transfer(a, b, k0, T, h_target):
    """Transfer matrix Psi (3x3) of R' = R K(s) over [0, T], columns (p,t,n)."""
    nsteps = int(math.ceil(T / h_target))
    h = T / nsteps
    k, dk = k0, 0.0
    P = np.eye(3)
    for _ in range(nsteps):
        # joint RK4 for (k, dk, P); K(kappa) = [[0,-1,0],[1,0,-kappa],[0,kappa,0]]
        k1, l1 = _elastica_rhs(k, dk, a, b)
        P1 = _matK(P, k)
        ka, dka = k + 0.5 * h * k1, dk + 0.5 * h * l1
        k2, l2 = _elastica_rhs(ka, dka, a, b)
        P2 = _matK(P + 0.5 * h * P1, ka)
        kb, dkb = k + 0.5 * h * k2, dk + 0.5 * h * l2
        k3, l3 = _elastica_rhs(kb, dkb, a, b)
        P3 = _matK(P + 0.5 * h * P2, kb)
        kc, dkc = k + h * k3, dk + h * l3
        k4, l4 = _elastica_rhs(kc, dkc, a, b)
        P4 = _matK(P + h * P3, kc)
        k += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        dk += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4)
        P = P + h / 6.0 * (P1 + 2 * P2 + 2 * P3 + P4)
    return P


@njit(cache=True)
def _matK(P, kappa):
    out = np.empty((3, 3))
    for i in range(3):
        out[i, 0] = P[i, 1]
        out[i, 1] = -P[i, 0] + kappa * P[i, 2]
        out[i, 2] = -kappa * P[i, 1]
    return out


# ----------------------------------------------------------------------
# curve container
# ----------------------------------------------------------------------

@dataclass
class CurvatureCurve:
    """A curve recovered from kappa(s), with sampled frame and splines."""

    ambient: str
    s: np.ndarray
    kappa: np.ndarray
    position: np.ndarray
    tangent: np.ndarray
    normal: Optional[np.ndarray] = None
    closed: bool = False
    closure_gap: float = float("nan")
    _splines: dict = field(default_factory=dict, repr=False)

    @property
    def length(self) -> float:
        # for closed curves s runs over [0, L); the stored period is L
        return float(self.s[-1] - self.s[0]) + (self.ds if self.closed else 0.0)

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    def _spline(self, name: str, values: np.ndarray) -> CubicSpline:
        key = name
        if key not in self._splines:
            if self.closed:
                ss = np.append(self.s, self.s[0] + self.length)
                vv = np.concatenate([values, values[:1]], axis=0)
                self._splines[key] = CubicSpline(ss, vv, axis=0, bc_type="periodic")
            else:
                self._splines[key] = CubicSpline(self.s, values, axis=0)
        return self._splines[key]

    def _wrap(self, s):
        if self.closed:
            return self.s[0] + np.mod(np.asarray(s, dtype=float) - self.s[0], self.length)
        return np.asarray(s, dtype=float)

    def kappa_at(self, s):
        return self._spline("kappa", self.kappa)(self._wrap(s))

    def position_at(self, s):
        return self._spline("position", self.position)(self._wrap(s))

    def tangent_at(self, s):
        if self.ambient == PLANE:
            th = self.theta_at(s)
            return np.stack([np.cos(th), np.sin(th)], axis=-1)
        return self._spline("tangent", self.tangent)(self._wrap(s))

    def normal_at(self, s):
        if self.ambient == PLANE:
            th = self.theta_at(s)
            return np.stack([-np.sin(th), np.cos(th)], axis=-1)
        return self._spline("normal", self.normal)(self._wrap(s))

    def theta_at(self, s):
        """Tangent angle for plane curves, continuous in s."""
        if self.ambient != PLANE:
            raise ValueError("theta only defined for plane curves")
        theta = self._splines.get("_theta_data")
        if theta is None:
            raise ValueError("curve lacks tangent-angle data")
        slope, spl = theta
        s = self._wrap(s)
        return slope * (s - self.s[0]) + spl(s)

    def second_derivative_at(self, s):
        """gamma''(s) = kappa(s) n(s) (unit-speed Frenet relation)."""
        k = self.kappa_at(s)
        n = self.normal_at(s)
        if self.ambient == SPHERE2:
            # on the sphere gamma'' = -gamma + kappa n
            return -self.position_at(s) + k[..., None] * n
        return k[..., None] * n


def _finish_plane_curve(s, kappa, theta, xy, closed_tol=1e-7):
    # theta from integration (or unwrap) is continuous in s; over one period
    # of a closed curve it gains 2 pi * winding, so store it as that linear
    # part plus a periodic remainder.
    pos = np.asarray(xy)
    tan = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    gap = float(np.linalg.norm(pos[-1] - pos[0])
                + np.linalg.norm(np.mod(theta[-1] - theta[0] + np.pi, 2 * np.pi) - np.pi))
    closed = gap < closed_tol
    total_turn = theta[-1] - theta[0]
    if closed:
        s, kappa, theta, pos, tan = s[:-1], kappa[:-1], theta[:-1], pos[:-1], tan[:-1]
    c = CurvatureCurve(PLANE, s, kappa, pos, tan, None, closed, gap)
    if closed:
        L = c.length
        slope = 2 * np.pi * round(total_turn / (2 * np.pi)) / L
        resid = theta - slope * (s - s[0])
        ss = np.append(s, s[0] + L)
        rr = np.append(resid, resid[0])
        spl = CubicSpline(ss, rr, bc_type="periodic")
    else:
        slope = 0.0
        spl = CubicSpline(s, theta)
    c._splines["_theta_data"] = (slope, spl)
    return c


def integrate_curve(
    kappa: Union[Callable[[float], float], np.ndarray],
    ambient: str,
    s_span: tuple[float, float],
    n_samples: int = 4097,
    p0=None,
    t0=None,
    closed_tol: float = 1e-7,
) -> CurvatureCurve:
    """Recover a curve from its curvature function by frame integration.

    kappa may be a callable of arc length or an array of samples uniform
    over s_span. The result stores n_samples frame samples on the span; a
    curve whose endpoint frame returns to the start within closed_tol is
    marked closed (and the duplicate endpoint sample is dropped).
    """
    s0, s1 = float(s_span[0]), float(s_span[1])
    span = s1 - s0
    if span <= 0:
        raise ValueError("empty arc-length span")
    if ambient not in (PLANE, SPHERE2):
        raise ValueError(f"unknown ambient {ambient!r}")
    if callable(kappa):
        kfun = kappa
    else:
        karr = np.asarray(kappa, dtype=float)
        kgrid = np.linspace(s0, s1, len(karr))
        kfun = CubicSpline(kgrid, karr)

    ds = span / (n_samples - 1)
    m = max(1, int(np.ceil(ds / _default_step(span))))
    h = ds / m
    s = s0 + ds * np.arange(n_samples)

    if ambient == PLANE:
        theta = np.empty(n_samples)
        xy = np.empty((n_samples, 2))
        th, x, y = 0.0, 0.0, 0.0
        theta[0] = th
        xy[0] = (x, y)
        cur = s0
        for i in range(1, n_samples):
            for _ in range(m):
                # RK4 on (x, y, theta)
                k1 = (np.cos(th), np.sin(th), kfun(cur))
                k2 = (np.cos(th + h / 2 * k1[2]), np.sin(th + h / 2 * k1[2]), kfun(cur + h / 2))
                k3 = (np.cos(th + h / 2 * k2[2]), np.sin(th + h / 2 * k2[2]), kfun(cur + h / 2))
                k4 = (np.cos(th + h * k3[2]), np.sin(th + h * k3[2]), kfun(cur + h))
                x += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
                y += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
                th += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
                cur += h
            theta[i] = th
            xy[i] = (x, y)
        kap = np.asarray([kfun(si) for si in s], dtype=float)
        return _finish_plane_curve(s, kap, theta, xy, closed_tol)

    # sphere
    if p0 is None:
        p0 = np.array([0.0, 0.0, 1.0])
    if t0 is None:
        t0 = np.array([1.0, 0.0, 0.0])
    p = np.asarray(p0, dtype=float)
    t = np.asarray(t0, dtype=float)
    p = p / np.linalg.norm(p)
    t = t - (t @ p) * p
    t = t / np.linalg.norm(t)
    n = np.cross(p, t)

    pos = np.empty((n_samples, 3))
    tan = np.empty((n_samples, 3))
    nor = np.empty((n_samples, 3))
    pos[0], tan[0], nor[0] = p, t, n
    drift = 0.0
    cur = s0
    y = np.concatenate([p, t, n])

    def rhs(yy, si):
        pp, tt, nn = yy[:3], yy[3:6], yy[6:9]
        k = kfun(si)
        return np.concatenate([tt, -pp + k * nn, -k * tt])

    for i in range(1, n_samples):
        for _ in range(m):
            k1 = rhs(y, cur)
            k2 = rhs(y + h / 2 * k1, cur + h / 2)
            k3 = rhs(y + h / 2 * k2, cur + h / 2)
            k4 = rhs(y + h * k3, cur + h)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            pp, tt = y[:3], y[3:6]
            drift = max(drift, abs(pp @ pp - 1.0), abs(tt @ tt - 1.0), abs(pp @ tt))
            pp = pp / np.linalg.norm(pp)
            tt = tt - (tt @ pp) * pp
            tt = tt / np.linalg.norm(tt)
            y = np.concatenate([pp, tt, np.cross(pp, tt)])
            cur += h
        pos[i], tan[i], nor[i] = y[:3], y[3:6], y[6:9]
    if drift > FRAME_DRIFT_TOL:
        raise StepTooLarge(f"frame drift {drift:.2e} exceeds {FRAME_DRIFT_TOL:.0e}")

    kap = np.asarray([kfun(si) for si in s], dtype=float)
    gap = float(np.linalg.norm(pos[-1] - pos[0]) + np.linalg.norm(tan[-1] - tan[0]))
    closed = gap < closed_tol
    if closed:
        s, kap, pos, tan, nor = s[:-1], kap[:-1], pos[:-1], tan[:-1], nor[:-1]
    return CurvatureCurve(SPHERE2, s, kap, pos, tan, nor, closed, gap)


def curve_from_parametric(
    ambient: str,
    gamma: Callable,
    dgamma: Callable,
    ddgamma: Callable,
    t_span: tuple[float, float],
    closed: bool = True,
    n_samples: int = 4097,
    n_dense: int = 20001,
) -> CurvatureCurve:
    """Arc-length resample an explicitly parametrized curve.

    gamma, dgamma, ddgamma are vectorized callables of the parameter t.
    Plane curvature is (x' y'' - y' x'') / |gamma'|^3; spherical geodesic
    curvature is det[gamma, gamma', gamma''] / |gamma'|^3 for |gamma| = 1.
    """
    t0, t1 = map(float, t_span)
    td = np.linspace(t0, t1, n_dense)
    speeds = np.linalg.norm(np.asarray(dgamma(td)), axis=-1)
    # cumulative arc length via Simpson on the dense grid
    from scipy.integrate import cumulative_simpson

    sd = np.asarray(cumulative_simpson(speeds, x=td, initial=0.0))
    L = float(sd[-1])
    t_of_s = CubicSpline(sd, td)
    s = np.linspace(0.0, L, n_samples)
    ts = t_of_s(s)
    ts[0], ts[-1] = t0, t1

    P = np.asarray(gamma(ts), dtype=float)
    D1 = np.asarray(dgamma(ts), dtype=float)
    D2 = np.asarray(ddgamma(ts), dtype=float)
    sp = np.linalg.norm(D1, axis=-1)
    tan = D1 / sp[..., None]

    if ambient == PLANE:
        kap = (D1[:, 0] * D2[:, 1] - D1[:, 1] * D2[:, 0]) / sp ** 3
        theta = np.unwrap(np.arctan2(tan[:, 1], tan[:, 0]))
        return _finish_plane_curve(s, kap, theta, P, closed_tol=1e-7 if closed else 0.0)

    if ambient == SPHERE2:
        P = P / np.linalg.norm(P, axis=-1, keepdims=True)
        kap = np.einsum("ij,ij->i", np.cross(P, D1), D2) / sp ** 3
        tan = tan - np.einsum("ij,ij->i", tan, P)[:, None] * P
        tan /= np.linalg.norm(tan, axis=-1, keepdims=True)
        nor = np.cross(P, tan)
        gap = float(np.linalg.norm(P[-1] - P[0]) + np.linalg.norm(tan[-1] - tan[0]))
        is_closed = closed and gap < 1e-7
        if is_closed:
            s, kap, P, tan, nor = s[:-1], kap[:-1], P[:-1], tan[:-1], nor[:-1]
        return CurvatureCurve(SPHERE2, s, kap, P, tan, nor, is_closed, gap)

    raise ValueError(f"unknown ambient {ambient!r}")


# ----------------------------------------------------------------------
# elastic-curve ODEs
# ----------------------------------------------------------------------

@dataclass
class OdeSolution:
    """Sampled solution of a curvature ODE with conservation diagnostics."""

    a: float
    b: float
    s: np.ndarray
    kappa: np.ndarray
    dkappa: np.ndarray
    energy_drift: float = float("nan")

    def kappa_spline(self) -> CubicSpline:
        return CubicSpline(self.s, self.kappa)

    def as_callable(self):
        spl = self.kappa_spline()
        return lambda s: spl(np.clip(s, self.s[0], self.s[-1]))


def elastica_first_integral(kappa, dkappa, a, b):
    """E = (k')^2 + k^4/4 + a k^2/2 + b k, conserved along solutions."""
    k = np.asarray(kappa)
    return np.asarray(dkappa) ** 2 + 0.25 * k ** 4 + 0.5 * a * k ** 2 + b * k


def _run_ode(kernel, a, b, k0, dk0, s_span, step, max_stored):
    s0, s1 = map(float, s_span)
    span = s1 - s0
    if span <= 0:
        raise ValueError("empty span")
    h = step if step is not None else _default_step(span)
    nsteps = int(np.ceil(span / h))
    h = span / nsteps
    store_every = max(1, int(np.ceil(nsteps / (max_stored - 1))))
    nstored = nsteps // store_every + 1
    out = np.empty((nstored, 2))
    status = kernel(a, b, float(k0), float(dk0), h, nsteps, store_every, out)
    if status != 0:
        raise BlowUp(f"|kappa| exceeded {BLOWUP_LIMIT:.0e}")
    s = s0 + h * store_every * np.arange(nstored)
    return s, out[:, 0], out[:, 1]


def elastica_ode(a, b, k0, dk0, s_span, step=None, max_stored=200_001) -> OdeSolution:
    """Integrate 2 k'' + k^3 + a k + b = 0 and monitor its first integral."""
    s, k, dk = _run_ode(_elastica_run, a, b, k0, dk0, s_span, step, max_stored)
    E = elastica_first_integral(k, dk, a, b)
    scale = max(float(np.max(np.abs(E))), 1.0)
    drift = float(np.max(np.abs(E - E[0]))) / scale
    return OdeSolution(a, b, s, k, dk, drift)


def burstall_ode(a, b, k0, dk0, s_span, step=None, max_stored=200_001) -> OdeSolution:
    """Integrate k'' + k^3/2 = (a + b s) k (no conserved quantity)."""
    s, k, dk = _run_ode(_burstall_run, a, b, k0, dk0, s_span, step, max_stored)
    return OdeSolution(a, b, s, k, dk)


# ----------------------------------------------------------------------
# closed solutions by shooting
# ----------------------------------------------------------------------

@dataclass
class ClosedElastica:
    a: float
    b: float
    kappa0: float
    period: float           # total length of the closed curve
    closure_gap: float
    n_lobes: int            # curvature periods until closure (0 for circles)
    winding: int
    curve: CurvatureCurve = field(repr=False, default=None)


def _rotation_angle(R: np.ndarray) -> float:
    return float(np.arccos(np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)))


def _kappa_period(a, b, k0, h=2e-4):
    half = _elastica_half_period(a, b, k0, h, int(2e6))
    if half == -2.0:
        raise BlowUp("kappa blew up during period search")
    if half < 0:
        return None
    return 2.0 * half


def _monodromy_angle(a, b, k0, h=2e-4):
    T = _kappa_period(a, b, k0, h)
    if T is None:
        return None, None
    ang = _rotation_angle(_frame_transfer(a, b, k0, T, h))
    return ang, T


def shoot_closed_elastica(
    a_range: Sequence[float],
    b_range: Sequence[float],
    targets: Sequence[tuple[int, int]] = ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4)),
    kappa0_bracket: tuple[float, float] = (0.1, 3.0),
    n_scan: int = 25,
    include_circles: bool = True,
    h: float = 2e-4,
    max_results: Optional[int] = None,
) -> list[ClosedElastica]:
    """Find closed spherical solutions of 2 k'' + k^3 + a k + b = 0.

    For each (a, b), equilibria of the cubic give circles (closed for every
    geodesic curvature c, length 2 pi / sqrt(1 + c^2)). Oscillatory closed
    solutions are located by matching the rotation angle of the frame
    transfer over one curvature period to 2 pi m / n for target (m, n); the
    curve then closes after n periods with winding m.
    """
    from scipy.optimize import brentq

    results: list[ClosedElastica] = []
    for a in a_range:
        for b in b_range:
            if include_circles:
                roots = np.roots([1.0, 0.0, a, b])
                for r in roots:
                    if abs(r.imag) < 1e-12:
                        c = float(r.real)
                        curve = integrate_curve(
                            lambda s, c=c: c, SPHERE2,
                            (0.0, 2 * np.pi / np.sqrt(1 + c * c)), n_samples=2049)
                        results.append(ClosedElastica(
                            a, b, c, 2 * np.pi / np.sqrt(1 + c * c),
                            curve.closure_gap, 0, 1, curve))

            k_grid = np.linspace(*kappa0_bracket, n_scan)
            angles = np.full(n_scan, np.nan)
            periods = np.full(n_scan, np.nan)
            for i, k0 in enumerate(k_grid):
                if abs(k0 ** 3 + a * k0 + b) < 1e-9:
                    continue
                try:
                    ang, T = _monodromy_angle(a, b, float(k0), h)
                except BlowUp:
                    continue
                if ang is not None:
                    angles[i], periods[i] = ang, T
            for (mw, nl) in targets:
                target = 2 * np.pi * mw / nl
                if not (0.0 < target < np.pi):
                    continue  # arccos only sees [0, pi]
                gvals = angles - target
                for i in range(n_scan - 1):
                    if np.isnan(gvals[i]) or np.isnan(gvals[i + 1]):
                        continue
                    if gvals[i] * gvals[i + 1] < 0:
                        f = lambda k0: _monodromy_angle(a, b, float(k0), h)[0] - target
                        k0 = brentq(f, k_grid[i], k_grid[i + 1], xtol=1e-12, rtol=8.9e-16)
                        T = _kappa_period(a, b, k0, h)
                        sol = elastica_ode(a, b, k0, 0.0, (0.0, nl * T), step=h,
                                           max_stored=8193)
                        curve = integrate_curve(sol.as_callable(), SPHERE2,
                                                (0.0, nl * T), n_samples=4097)
                        if curve.closure_gap < 1e-7:
                            results.append(ClosedElastica(
                                a, b, float(k0), nl * T, curve.closure_gap,
                                nl, mw, curve))
                        if max_results and len(results) >= max_results:
                            return results
    if not results:
        raise NoSolutionInBox("no closed elastic curve found in the search box")
    return results
