"""Operators tied to the conformal structure J.

Conventions (verified against closed forms in the test suite):

* a quadratic differential q = phi dz^2 in the chart coordinate z = x + i y
  has real part  Re(q) = Re(phi)(dx^2 - dy^2) - 2 Im(phi) dx dy, i.e. the
  bilinear matrix  B = [[Re phi, -Im phi], [-Im phi, -Re phi]];
* a bilinear form b turns into the 2-form b(_ ^ _) with coefficient
  b(e1, e2) - b(e2, e1) w.r.t. dx ^ dy;
* delta(u) = 2 u A0 J  (A0 the trace-free Weingarten part);
* delta_star(q) = 4 Re(q)(A0 J _ ^ _), the adjoint of delta under the
  pairings  <omega, u> = int omega u  and  <q, R> = int 2 Re(q)(R _ ^ _).

On flat doubly periodic charts the holomorphic quadratic differentials are
exactly the constant-phi ones, so the default torus basis is {dz^2, i dz^2}.
Open charts optionally extend the basis by centered polynomials z^k dz^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._stencils import diff_uniform
from .errors import EmptyBasis, GridMismatch, NotAnticommuting
from .geom_core import ParamSurface, _check_field, integrate_2form

ANTICOMMUTE_TOL = 1e-9


@dataclass
class QuadraticDifferential:
    """q = phi dz^2 in the surface's conformal chart coordinate."""

    surface: ParamSurface
    phi: np.ndarray
    label: str = "qd"

    def __post_init__(self):
        self.phi = _check_field(self.surface.grid, np.asarray(self.phi, dtype=complex))

    @classmethod
    def constant(cls, s: ParamSurface, c: complex, label: Optional[str] = None):
        phi = np.full((s.grid.nu, s.grid.nv), complex(c))
        if label is None:
            label = f"({c})*dz^2"
        return cls(s, phi, label)

    def real_bilinear(self) -> np.ndarray:
        """Matrix field of Re(q) as a symmetric bilinear form."""
        B = np.empty(self.phi.shape + (2, 2))
        B[..., 0, 0] = self.phi.real
        B[..., 1, 1] = -self.phi.real
        B[..., 0, 1] = -self.phi.imag
        B[..., 1, 0] = -self.phi.imag
        return B

    def l2_norm(self) -> float:
        """L2 norm with the metric pointwise norm |q|^2 = |phi|^2 e^{-4 lambda}."""
        fd = self.surface.fundamental_data()
        dens = np.abs(self.phi) ** 2 / fd.e2l ** 2
        return float(np.sqrt(integrate_2form(self.surface, dens * fd.dsigma)))

    def __add__(self, other):
        if other.surface is not self.surface:
            raise GridMismatch("quadratic differentials live on different surfaces")
        return QuadraticDifferential(self.surface, self.phi + other.phi,
                                     f"{self.label}+{other.label}")

    def scaled(self, c: float):
        return QuadraticDifferential(self.surface, c * self.phi, f"{c}*{self.label}")


def chart_z(s: ParamSurface) -> np.ndarray:
    U, V = s.grid.mesh()
    return U + 1j * V


def make_qd_basis(s: ParamSurface, degree: int = 0) -> list[QuadraticDifferential]:
    """Real basis {z~^k dz^2, i z~^k dz^2}, k <= degree, z~ centered/scaled.

    degree 0 is the full space of holomorphic quadratic differentials on a
    flat torus chart; higher degrees only make sense on open charts.
    """
    basis = [QuadraticDifferential.constant(s, 1.0, "dz^2"),
             QuadraticDifferential.constant(s, 1j, "i*dz^2")]
    if degree > 0:
        z = chart_z(s)
        z0 = complex(np.mean(z))
        scale = max(float(np.max(np.abs(z - z0))), 1e-30)
        zt = (z - z0) / scale
        for k in range(1, degree + 1):
            basis.append(QuadraticDifferential(s, zt ** k, f"((z-z0)/{scale:g})^{k}*dz^2"))
            basis.append(QuadraticDifferential(s, 1j * zt ** k, f"i*((z-z0)/{scale:g})^{k}*dz^2"))
    return basis


def delta_op(s: ParamSurface, u: np.ndarray) -> np.ndarray:
    """Infinitesimal change of J under the normal variation u: 2 u A0 J."""
    u = _check_field(s.grid, u)
    fd = s.fundamental_data()
    A0J = np.einsum("...ik,...kj->...ij", fd.A0, fd.J)
    return 2.0 * u[..., None, None] * A0J


def _wedge_coeff(M: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Coefficient of the 2-form B(M _ ^ _): (M^T B)_{12} - (M^T B)_{21}."""
    P = np.einsum("...ki,...kj->...ij", M, B)
    return P[..., 0, 1] - P[..., 1, 0]


def delta_star(s: ParamSurface, q: QuadraticDifferential) -> np.ndarray:
    """Adjoint of delta on q: the 2-form 4 Re(q)(A0 J _ ^ _)."""
    if q.surface is not s:
        raise GridMismatch("quadratic differential belongs to a different surface")
    fd = s.fundamental_data()
    A0J = np.einsum("...ik,...kj->...ij", fd.A0, fd.J)
    return 4.0 * _wedge_coeff(A0J, q.real_bilinear())


def hopf_differential(s: ParamSurface) -> QuadraticDifferential:
    """The quadratic differential Q with Re(Q) = 1/2 g(A0 _, _).

    Satisfies delta_star(Q) = 4 (H^2 - G) dsigma; holomorphic exactly when
    the mean curvature is constant.
    """
    s.require_conformal()
    fd = s.fundamental_data()
    # matrix of g(A0 _, _) is II - H g (symmetric, g-trace-free)
    C = fd.II - fd.H[..., None, None] * fd.g
    phi = 0.25 * (C[..., 0, 0] - C[..., 1, 1]) - 0.5j * C[..., 0, 1]
    return QuadraticDifferential(s, phi, "hopf")


def dbar_vector_field(s: ParamSurface, X: np.ndarray) -> np.ndarray:
    """L_X J as an endomorphism field, from coordinate derivatives.

    (L_X J)_{kj} = X^l d_l J_{kj} - J_{lj} d_l X^k + J_{kl} d_j X^l.
    The result anticommutes with J.
    """
    X = _check_field(s.grid, X, (2,))
    g = s.grid
    fd = s.fundamental_data()
    J = fd.J
    dX = np.stack([
        diff_uniform(X, g.hu, 1, g.periodic_u, axis=0),
        diff_uniform(X, g.hv, 1, g.periodic_v, axis=1),
    ], axis=-1)  # dX[..., k, l] = d_l X^k
    dJ = np.stack([
        diff_uniform(J, g.hu, 1, g.periodic_u, axis=0),
        diff_uniform(J, g.hv, 1, g.periodic_v, axis=1),
    ], axis=-1)  # dJ[..., k, j, l] = d_l J_{kj}
    out = np.einsum("...l,...kjl->...kj", X, dJ)
    out -= np.einsum("...lj,...kl->...kj", J, dX)
    out += np.einsum("...kl,...lj->...kj", J, dX)
    return out


def dbar_residual(q: QuadraticDifferential) -> float:
    """L2 norm over the chart of d phi / d z-bar; ~0 iff q is holomorphic."""
    s = q.surface
    g = s.grid
    px = diff_uniform(q.phi.real, g.hu, 1, g.periodic_u, axis=0) \
        + 1j * diff_uniform(q.phi.imag, g.hu, 1, g.periodic_u, axis=0)
    py = diff_uniform(q.phi.real, g.hv, 1, g.periodic_v, axis=1) \
        + 1j * diff_uniform(q.phi.imag, g.hv, 1, g.periodic_v, axis=1)
    defect = 0.5 * (px + 1j * py)
    wu, wv = s.quadrature()
    return float(np.sqrt(np.einsum("i,j,ij->", wu, wv, np.abs(defect) ** 2)))


def pair_form_function(s: ParamSurface, omega: np.ndarray, u: np.ndarray) -> float:
    """<omega, u> = int omega u."""
    omega = _check_field(s.grid, omega)
    u = _check_field(s.grid, u)
    return integrate_2form(s, omega * u)


def pair_qd_endo(s: ParamSurface, q: QuadraticDifferential, R: np.ndarray,
                 check: bool = True) -> float:
    """<q, R> = int 2 Re(q)(R _ ^ _) for J-anticommuting R."""
    R = _check_field(s.grid, R, (2, 2))
    if check:
        J = s.fundamental_data().J
        D = np.einsum("...ik,...kj->...ij", R, J) + np.einsum("...ik,...kj->...ij", J, R)
        scale = float(np.max(np.abs(R)))
        # absolute floor keeps roundoff-size fields (e.g. delta(u) on a
        # totally umbilic chart) from tripping the structural gate
        if float(np.max(np.abs(D))) > max(ANTICOMMUTE_TOL * scale, 1e-12):
            raise NotAnticommuting(f"R J + J R defect {np.max(np.abs(D)):.2e}")
    return integrate_2form(s, 2.0 * _wedge_coeff(R, q.real_bilinear()))


@dataclass
class IsothermicResult:
    verdict: str                     # "strongly-isothermic" | "not-strongly-isothermic" | "inconclusive"
    q: Optional[QuadraticDifferential]
    coefficients: Optional[np.ndarray]
    sigma_min: float
    tol: float

    @property
    def is_strongly_isothermic(self) -> bool:
        return self.verdict == "strongly-isothermic"


def is_strongly_isothermic(
    s: ParamSurface,
    basis: Sequence[QuadraticDifferential],
    tol: float = 1e-6,
    holo_tol: float = 1e-6,
) -> IsothermicResult:
    """Search the basis span for q != 0 with delta_star(q) = 0.

    Minimizes ||delta_star(q)||_{L2(dsigma)} / ||q|| over the real span; a
    generalized smallest singular value below tol is a positive verdict, a
    value above 10 tol a confident negative, anything between inconclusive.
    """
    from scipy.linalg import eigh

    if len(basis) == 0:
        raise EmptyBasis("strong-isothermicity test needs a basis")
    for q in basis:
        if dbar_residual(q) > holo_tol * max(1.0, q.l2_norm()):
            raise ValueError(f"basis element {q.label} is not holomorphic")

    fd = s.fundamental_data()
    wu, wv = s.quadrature()
    wgt = np.outer(wu, wv) * fd.dsigma
    dens = [delta_star(s, q) / fd.dsigma for q in basis]
    k = len(basis)
    Gd = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            Gd[i, j] = Gd[j, i] = float(np.sum(wgt * dens[i] * dens[j]))
    Gq = np.empty((k, k))
    qdens = [q.phi / fd.e2l for q in basis]
    for i in range(k):
        for j in range(i, k):
            Gq[i, j] = Gq[j, i] = float(np.sum(wgt * (qdens[i] * np.conj(qdens[j])).real))

    vals, vecs = eigh(Gd, Gq)
    lam = max(float(vals[0]), 0.0)
    sigma = float(np.sqrt(lam))
    c = vecs[:, 0]
    if sigma <= tol:
        qfound = basis[0].scaled(c[0])
        for ci, qi in zip(c[1:], basis[1:]):
            qfound = qfound + qi.scaled(ci)
        qfound.label = "isothermic-direction"
        return IsothermicResult("strongly-isothermic", qfound, c, sigma, tol)
    if sigma > 10.0 * tol:
        return IsothermicResult("not-strongly-isothermic", None, None, sigma, tol)
    return IsothermicResult("inconclusive", None, None, sigma, tol)
