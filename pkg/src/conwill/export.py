"""OBJ / CSV artifact writers.

S^3 surfaces are stereographically projected from the pole (0, 0, 0, 1)
before OBJ export. All writers format floats with repr-style %.17g so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .geom_core import SPHERE3, ParamSurface

FLT = "%.17g"


def stereographic_project(points: np.ndarray, clip: float = 1e-12) -> np.ndarray:
    """S^3 -> R^3 from the pole (0, 0, 0, 1): (x1, x2, x3)/(1 - x4)."""
    w = 1.0 - points[..., 3]
    w = np.where(np.abs(w) < clip, np.copysign(clip, w), w)
    return points[..., :3] / w[..., None]


def _triangles(nu: int, nv: int, periodic_u: bool, periodic_v: bool) -> np.ndarray:
    iu = nu if periodic_u else nu - 1
    iv = nv if periodic_v else nv - 1
    tris = []
    for i in range(iu):
        i1 = (i + 1) % nu
        for j in range(iv):
            j1 = (j + 1) % nv
            a = i * nv + j
            b = i1 * nv + j
            c = i1 * nv + j1
            d = i * nv + j1
            tris.append((a, b, c))
            tris.append((a, c, d))
    return np.asarray(tris, dtype=int)


def write_obj(path, s: ParamSurface) -> None:
    pts = s.position
    if s.space_form.kind == SPHERE3:
        pts = stereographic_project(pts)
    g = s.grid
    tris = _triangles(g.nu, g.nv, g.periodic_u, g.periodic_v)
    with open(path, "w") as fh:
        for p in pts.reshape(-1, 3):
            fh.write("v " + " ".join(FLT % c for c in p) + "\n")
        for t in tris:
            fh.write("f %d %d %d\n" % (t[0] + 1, t[1] + 1, t[2] + 1))


def write_surface_csv(path, s: ParamSurface) -> None:
    fd = s.fundamental_data()
    g = s.grid
    dim = s.space_form.ambient_dim
    cols = ["i", "j"] + [f"x{k}" for k in range(dim)] + ["H", "G", "dsigma"]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(g.nu):
            for j in range(g.nv):
                row = [str(i), str(j)]
                row += [FLT % c for c in s.position[i, j]]
                row += [FLT % fd.H[i, j], FLT % fd.G[i, j], FLT % fd.dsigma[i, j]]
                fh.write(",".join(row) + "\n")


def write_qd_csv(path, qd) -> None:
    g = qd.surface.grid
    with open(path, "w") as fh:
        fh.write("i,j,re_phi,im_phi\n")
        for i in range(g.nu):
            for j in range(g.nv):
                fh.write("%d,%d,%s,%s\n" % (
                    i, j, FLT % qd.phi[i, j].real, FLT % qd.phi[i, j].imag))


def write_curve_csv(path, curve) -> None:
    dim = curve.position.shape[-1]
    cols = ["s", "kappa", "x", "y"] + (["z"] if dim == 3 else [])
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for k in range(len(curve.s)):
            row = [FLT % curve.s[k], FLT % curve.kappa[k]]
            row += [FLT % c for c in curve.position[k]]
            fh.write(",".join(row) + "\n")
