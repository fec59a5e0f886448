"""Conformally parametrized surfaces on structured grids in R^3 and S^3.

A surface is a map f(u, v) into the ambient space form sampled on a uniform
(optionally periodic) grid, together with optional analytic derivative
callbacks. All first/second order data (metric, second fundamental form,
Weingarten operator, mean/Gauss curvature, unit normal, area element,
complex structure J) is assembled per node in `fundamental_data`.

Field conventions used throughout the package:

* ScalarField  -- array (nu, nv)
* TwoForm      -- array (nu, nv): the coefficient w of  w dx ^ dy
* VectorField  -- array (nu, nv, 2): components w.r.t. (d/dx, d/dy)
* EndoField    -- array (nu, nv, 2, 2)

Charts are positively oriented by construction; the `orientation` flag of a
surface only flips the unit normal (and with it II, A, H, the trace-free
part and the signed enclosed volume), never the chart orientation or J.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._stencils import diff_uniform, quadrature_weights
from .errors import (
    DegenerateImmersion,
    GridMismatch,
    NotConformal,
)

EUCLIDEAN3 = "Euclidean3"
SPHERE3 = "Sphere3"

# default gate for "is this chart conformal enough to use z = x + iy";
# analytic-callback charts sit at machine precision, finite-difference
# charts carry O(h^4) metric noise and still need to pass
CONFORMAL_GATE = 1e-4

# |f| = 1 tolerance for S^3 charts
SPHERE_TOL = 1e-10

# minimum sine of the coordinate angle for a valid immersion
IMMERSION_TOL = 1e-6


@dataclass(frozen=True)
class SpaceForm:
    """Ambient space form: Euclidean 3-space or the unit 3-sphere."""

    kind: str

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN3, SPHERE3):
            raise ValueError(f"unknown space form {self.kind!r}")

    @property
    def ambient_dim(self) -> int:
        return 3 if self.kind == EUCLIDEAN3 else 4

    @property
    def sectional_curvature(self) -> float:
        return 0.0 if self.kind == EUCLIDEAN3 else 1.0


R3 = SpaceForm(EUCLIDEAN3)
S3 = SpaceForm(SPHERE3)


@dataclass(frozen=True)
class Grid2D:
    """Uniform chart grid: nu x nv nodes, spacing hu = Lu/nu, hv = Lv/nv.

    Periodic axes sample [offset, offset + L); open axes sample the same
    nodes but nothing wraps, and integrals use an interior margin.
    """

    nu: int
    nv: int
    Lu: float
    Lv: float
    periodic_u: bool = True
    periodic_v: bool = True
    u0: float = 0.0
    v0: float = 0.0

    def __post_init__(self):
        if self.nu < 8 or self.nv < 8:
            raise ValueError("grid needs nu, nv >= 8")
        if self.Lu <= 0 or self.Lv <= 0:
            raise ValueError("grid extents must be positive")

    @property
    def hu(self) -> float:
        return self.Lu / self.nu

    @property
    def hv(self) -> float:
        return self.Lv / self.nv

    def u_coords(self) -> np.ndarray:
        return self.u0 + self.hu * np.arange(self.nu)

    def v_coords(self) -> np.ndarray:
        return self.v0 + self.hv * np.arange(self.nv)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.u_coords(), self.v_coords(), indexing="ij")


def _check_field(grid: Grid2D, arr: np.ndarray, trailing: tuple = ()) -> np.ndarray:
    arr = np.asarray(arr)
    want = (grid.nu, grid.nv) + trailing
    if arr.shape != want:
        raise GridMismatch(f"field shape {arr.shape} != {want}")
    return arr


class ParamSurface:
    """A parametrized surface on a Grid2D with optional analytic derivatives.

    Parameters
    ----------
    space_form : SpaceForm
    grid : Grid2D
    position : (nu, nv, dim) array of ambient points.
    callbacks : optional dict with keys among
        {"f", "fu", "fv", "fuu", "fuv", "fvv"}; each maps meshgrid arrays
        (U, V) to an (nu, nv, dim) array.  When first/second derivative
        callbacks are present they are used instead of finite differences.
    orientation : +1 or -1, the normal-sign convention flag.
    conformal : whether the chart claims |f_u| = |f_v|, <f_u, f_v> = 0.
    quotient_seam : the grid wraps in u for fields and quadrature but the
        position itself is only periodic up to an isometry (used for closed
        preimage tori of the fibration chart). Such charts require full
        derivative callbacks and cannot be position-differentiated or
        deformed node-wise.
    """

    def __init__(
        self,
        space_form: SpaceForm,
        grid: Grid2D,
        position: np.ndarray,
        callbacks: Optional[dict] = None,
        orientation: int = 1,
        conformal: bool = False,
        quotient_seam: bool = False,
        metadata: Optional[dict] = None,
    ):
        self.space_form = space_form
        self.grid = grid
        self.position = _check_field(grid, position, (space_form.ambient_dim,))
        self.callbacks = dict(callbacks or {})
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        self.orientation = orientation
        self.conformal = conformal
        self.quotient_seam = quotient_seam
        self.metadata = dict(metadata or {})
        self._deriv_cache: dict[str, np.ndarray] = {}
        self._fund: Optional[FundamentalData] = None
        if quotient_seam and not self.has_analytic_derivatives:
            raise ValueError("quotient-seam charts require analytic derivative callbacks")
        if space_form.kind == SPHERE3:
            r = np.linalg.norm(self.position, axis=-1)
            if np.max(np.abs(r - 1.0)) > SPHERE_TOL:
                raise ValueError("Sphere3 positions must satisfy |f| = 1")

    @property
    def has_analytic_derivatives(self) -> bool:
        return all(k in self.callbacks for k in ("fu", "fv", "fuu", "fuv", "fvv"))

    def with_orientation(self, orientation: int) -> "ParamSurface":
        """Copy of this surface with the normal-sign convention flipped/set."""
        return ParamSurface(
            self.space_form, self.grid, self.position, self.callbacks,
            orientation=orientation, conformal=self.conformal,
            quotient_seam=self.quotient_seam, metadata=self.metadata,
        )

    @property
    def deriv_strategy(self) -> str:
        return "analytic-callback" if self.has_analytic_derivatives else "fourth-order-central-differences"

    def derivative(self, which: str) -> np.ndarray:
        """Position derivative field; which in {fu, fv, fuu, fuv, fvv}."""
        if which in self._deriv_cache:
            return self._deriv_cache[which]
        g = self.grid
        if which in self.callbacks:
            U, V = g.mesh()
            arr = _check_field(g, np.asarray(self.callbacks[which](U, V), dtype=float),
                               (self.space_form.ambient_dim,))
        else:
            if self.quotient_seam:
                raise GridMismatch("cannot finite-difference positions across a quotient seam")
            p = self.position
            if which == "fu":
                arr = diff_uniform(p, g.hu, 1, g.periodic_u, axis=0)
            elif which == "fv":
                arr = diff_uniform(p, g.hv, 1, g.periodic_v, axis=1)
            elif which == "fuu":
                arr = diff_uniform(p, g.hu, 2, g.periodic_u, axis=0)
            elif which == "fvv":
                arr = diff_uniform(p, g.hv, 2, g.periodic_v, axis=1)
            elif which == "fuv":
                arr = diff_uniform(self.derivative("fu"), g.hv, 1, g.periodic_v, axis=1)
            else:
                raise ValueError(f"unknown derivative {which!r}")
        self._deriv_cache[which] = arr
        return arr

    def fundamental_data(self) -> "FundamentalData":
        if self._fund is None:
            self._fund = fundamental_data(self)
        return self._fund

    def conformality_residual(self) -> float:
        """Max relative deviation of the metric from e^{2 lambda} Id."""
        fu, fv = self.derivative("fu"), self.derivative("fv")
        E = np.einsum("ijk,ijk->ij", fu, fu)
        G = np.einsum("ijk,ijk->ij", fv, fv)
        F = np.einsum("ijk,ijk->ij", fu, fv)
        scale = np.maximum(E, G)
        return float(np.max(np.maximum(np.abs(E - G), 2.0 * np.abs(F)) / scale))

    def require_conformal(self, tol: float = CONFORMAL_GATE) -> None:
        if not self.conformal:
            raise NotConformal("surface chart is not flagged conformal")
        res = self.conformality_residual()
        if res > tol:
            raise NotConformal(f"conformality residual {res:.3e} exceeds {tol:.1e}")

    def quadrature(self) -> tuple[np.ndarray, np.ndarray]:
        g = self.grid
        return (
            quadrature_weights(g.nu, g.hu, g.periodic_u),
            quadrature_weights(g.nv, g.hv, g.periodic_v),
        )


@dataclass
class FundamentalData:
    """Per-node first/second order data of an immersed surface.

    g, II, A, A0 (trace-free part of A) and J are (nu, nv, 2, 2); H, G,
    dsigma, e2l are (nu, nv); xi is (nu, nv, ambient_dim).  dsigma is the
    coefficient of the area element w.r.t. dx ^ dy and is positive; e2l is
    the conformal factor (E + G)/2, which equals e^{2 lambda} exactly on
    conformal charts.
    """

    g: np.ndarray
    II: np.ndarray
    A: np.ndarray
    A0: np.ndarray
    H: np.ndarray
    G: np.ndarray
    xi: np.ndarray
    dsigma: np.ndarray
    J: np.ndarray
    e2l: np.ndarray


def _cross4(f: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vector xi with xi . w = det[f; a; b; w] (rows), per node."""
    # 3x3 minors of the 3x4 row matrix [f; a; b], with column i removed
    cols = [f, a, b]

    def minor(i):
        idx = [j for j in range(4) if j != i]
        m = [[cols[r][..., c] for c in idx] for r in range(3)]
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    signs = (-1.0, 1.0, -1.0, 1.0)
    return np.stack([signs[i] * minor(i) for i in range(4)], axis=-1)


def fundamental_data(s: ParamSurface) -> FundamentalData:
    """Assemble metric, shape operator, curvatures, normal, area form, J.

    For Sphere3 charts the unit normal is computed inside T_f S^3 (the
    ambient 4-vector orthogonal to f, f_u, f_v) and G is the extrinsic
    det A; the induced intrinsic curvature is G + 1.
    """
    fu, fv = s.derivative("fu"), s.derivative("fv")
    fuu, fuv, fvv = s.derivative("fuu"), s.derivative("fuv"), s.derivative("fvv")

    E = np.einsum("ijk,ijk->ij", fu, fu)
    F = np.einsum("ijk,ijk->ij", fu, fv)
    Gm = np.einsum("ijk,ijk->ij", fv, fv)
    W2 = E * Gm - F * F
    if np.min(W2) <= (IMMERSION_TOL ** 2) * np.max(E * Gm):
        raise DegenerateImmersion("coordinate tangents nearly collinear")
    W = np.sqrt(W2)

    if s.conformal:
        res = s.conformality_residual()
        if res > CONFORMAL_GATE:
            raise NotConformal(f"chart flagged conformal but residual is {res:.3e}")

    if s.space_form.kind == EUCLIDEAN3:
        xi = np.cross(fu, fv)
    else:
        xi = _cross4(s.position, fu, fv)
    xi = s.orientation * xi / np.linalg.norm(xi, axis=-1, keepdims=True)

    e = np.einsum("ijk,ijk->ij", fuu, xi)
    f2 = np.einsum("ijk,ijk->ij", fuv, xi)
    g2 = np.einsum("ijk,ijk->ij", fvv, xi)

    g = np.empty(E.shape + (2, 2))
    g[..., 0, 0], g[..., 0, 1], g[..., 1, 0], g[..., 1, 1] = E, F, F, Gm
    II = np.empty_like(g)
    II[..., 0, 0], II[..., 0, 1], II[..., 1, 0], II[..., 1, 1] = e, f2, f2, g2

    inv = np.empty_like(g)
    inv[..., 0, 0] = Gm / W2
    inv[..., 0, 1] = -F / W2
    inv[..., 1, 0] = -F / W2
    inv[..., 1, 1] = E / W2
    A = np.einsum("...ik,...kj->...ij", inv, II)

    H = 0.5 * (A[..., 0, 0] + A[..., 1, 1])
    G = A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    A0 = A.copy()
    A0[..., 0, 0] -= H
    A0[..., 1, 1] -= H

    J = np.empty_like(g)
    J[..., 0, 0] = -F / W
    J[..., 0, 1] = -Gm / W
    J[..., 1, 0] = E / W
    J[..., 1, 1] = F / W

    return FundamentalData(
        g=g, II=II, A=A, A0=A0, H=H, G=G, xi=xi,
        dsigma=W, J=J, e2l=0.5 * (E + Gm),
    )


def laplace_beltrami(s: ParamSurface, phi: np.ndarray) -> np.ndarray:
    """Laplace-Beltrami of a scalar field on a conformal chart.

    Returns e^{-2 lambda} (phi_xx + phi_yy); negative spectrum, so that
    sin(x) on a flat unit chart maps to -sin(x).
    """
    s.require_conformal()
    phi = _check_field(s.grid, phi)
    g = s.grid
    lap = diff_uniform(phi, g.hu, 2, g.periodic_u, axis=0)
    lap += diff_uniform(phi, g.hv, 2, g.periodic_v, axis=1)
    return lap / s.fundamental_data().e2l


def integrate_2form(s: ParamSurface, omega: np.ndarray) -> float:
    """Integrate the 2-form with coefficient field omega over the chart.

    Trapezoidal in open directions (interior margin), uniform-weight
    (spectrally accurate) in periodic directions.
    """
    omega = _check_field(s.grid, omega)
    wu, wv = s.quadrature()
    return float(np.einsum("i,j,ij->", wu, wv, omega))


def anticommutator_defect(s: ParamSurface, R: np.ndarray) -> float:
    """Sup norm of R J + J R relative to the scale of R."""
    R = _check_field(s.grid, R, (2, 2))
    J = s.fundamental_data().J
    D = np.einsum("...ik,...kj->...ij", R, J) + np.einsum("...ik,...kj->...ij", J, R)
    scale = max(float(np.max(np.abs(R))), 1e-300)
    return float(np.max(np.abs(D))) / scale
