"""Geometric parameters of a single triangle or tetrahedron.

Besides the classical quantities (diameter, measure, circumradius, angles)
this module computes the anisotropic parameters ``H_T0`` and ``H_T``, and
the *standard position* of a simplex: a rigid motion (rotation, translation
and possibly a mirror) that brings it to the canonical form

    x = A_T0 (Ã Â x̂) + b_T0,

where Â = diag(alpha) is a dilation and Ã is an upper triangular shear
matrix with unit columns.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import smallmat
from .errors import DegenerateSimplexError, InvalidDimensionError

DEGENERACY_TOL = 1e-14


@dataclass(frozen=True)
class Simplex:
    """A 2-simplex (triangle) or 3-simplex (tetrahedron).

    ``vertices`` has shape ``(dim + 1, dim)``. Construction validates the
    shape and finiteness but not the degeneracy, which operations check
    lazily so that degenerate input can still be described and reported.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] not in (2, 3) or v.shape[0] != v.shape[1] + 1:
            raise InvalidDimensionError(
                f"a simplex needs dim+1 points in dim 2 or 3, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def edge_matrix(self) -> np.ndarray:
        """Columns are ``x_i - x_0`` for i = 1..dim."""
        return (self.vertices[1:] - self.vertices[0]).T

    def transformed(self, rotation, translation=None) -> "Simplex":
        rotation = np.asarray(rotation, dtype=float)
        shift = np.zeros(self.dim) if translation is None else np.asarray(translation, float)
        return Simplex(self.vertices @ rotation.T + shift)

    def scaled(self, factor: float) -> "Simplex":
        return Simplex(self.vertices * factor)


@dataclass(frozen=True)
class Edge:
    length: float
    pair: tuple


@dataclass(frozen=True)
class StandardPosition:
    """Factorisation of a simplex into dilation, shear and rigid motion.

    ``order`` maps the canonical labels x_1..x_{d+1} to input vertex indices.
    ``shear`` holds ``{"s", "t"}`` in 2-D and ``{"s1", "t1", "s21", "s22",
    "t2"}`` in 3-D. ``rotation`` is orthogonal; ``mirrored`` is set when its
    determinant is -1.
    """

    dim: int
    alpha: np.ndarray
    shear: dict
    tet_type: Optional[str]
    rotation: np.ndarray
    translation: np.ndarray
    mirrored: bool
    order: tuple
    diagnostics: tuple = ()

    @property
    def dilation(self) -> np.ndarray:
        return np.diag(self.alpha)

    @property
    def shear_matrix(self) -> np.ndarray:
        sh = self.shear
        if self.dim == 2:
            return np.array([[1.0, sh["s"]], [0.0, sh["t"]]])
        s1 = sh["s1"] if self.tet_type == "i" else -sh["s1"]
        return np.array(
            [[1.0, s1, sh["s21"]], [0.0, sh["t1"], sh["s22"]], [0.0, 0.0, sh["t2"]]]
        )

    @property
    def A_T(self) -> np.ndarray:
        return self.shear_matrix @ self.dilation

    def reference_vertices(self) -> np.ndarray:
        """Vertices of the reference simplex for this position's type."""
        if self.dim == 2:
            return np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        if self.tet_type == "i":
            return np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
        return np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 0, 1]], dtype=float)

    def standard_vertices(self) -> np.ndarray:
        """Vertices x_1..x_{d+1} of T = Φ_T(T̂), in canonical order."""
        return self.reference_vertices() @ self.A_T.T

    def to_physical(self, x) -> np.ndarray:
        """Apply Φ_T0: x ↦ A_T0 x + b_T0 (row vectors accepted)."""
        return np.asarray(x, float) @ self.rotation.T + self.translation

    def to_standard(self, x0) -> np.ndarray:
        return (np.asarray(x0, float) - self.translation) @ self.rotation

    def reconstruct(self) -> np.ndarray:
        """Physical vertices in *input* order, rebuilt from the factorisation."""
        phys = self.to_physical(self.standard_vertices())
        out = np.empty_like(phys)
        for label, idx in enumerate(self.order):
            out[idx] = phys[label]
        return out

    def directions(self) -> np.ndarray:
        """Rows are the unit vectors r_1..r_d in standard-position coordinates."""
        return self.shear_matrix.T.copy()

    def rotated_directions(self) -> np.ndarray:
        """Rows are A_T0 r_i, the directions in physical coordinates."""
        return self.directions() @ self.rotation.T

    @property
    def mathscr_H(self) -> np.ndarray:
        sh = self.shear
        if self.dim == 2:
            return np.array([self.alpha[0], self.alpha[1] * sh["t"]])
        return np.array(
            [self.alpha[0], self.alpha[1] * sh["t1"], self.alpha[2] * sh["t2"]]
        )


@dataclass
class GeometricReport:
    dim: int
    h: float
    measure: float
    H_T0: float
    H_T: float
    H_over_h: float
    alpha_ratio: float
    circumradius: float
    mathscr_H: list
    theta_max: float
    psi_max: Optional[float]
    assumption1_M: Optional[float]
    edges_sorted: list
    alpha: list = field(default_factory=list)
    tet_type: Optional[str] = None
    mirrored: bool = False
    diagnostics: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "h": self.h,
            "measure": self.measure,
            "H_T0": self.H_T0,
            "H_T": self.H_T,
            "H_over_h": self.H_over_h,
            "alpha_ratio": self.alpha_ratio,
            "circumradius": self.circumradius,
            "mathscr_H": list(self.mathscr_H),
            "theta_max": self.theta_max,
            "psi_max": self.psi_max,
            "assumption1_M": self.assumption1_M,
            "edges_sorted": [[e.length, list(e.pair)] for e in self.edges_sorted],
            "alpha": list(self.alpha),
            "tet_type": self.tet_type,
            "mirrored": self.mirrored,
            "diagnostics": list(self.diagnostics),
        }


def as_simplex(s) -> Simplex:
    return s if isinstance(s, Simplex) else Simplex(s)


def _signed_volume_factor(s: Simplex) -> float:
    return smallmat.determinant(s.edge_matrix())


def diameter_and_edges(s) -> tuple:
    """Diameter and the edges sorted by length (ties by vertex pair)."""
    s = as_simplex(s)
    v = s.vertices
    edges = [
        Edge(float(np.linalg.norm(v[j] - v[i])), (i, j))
        for i, j in itertools.combinations(range(s.dim + 1), 2)
    ]
    edges.sort(key=lambda e: (e.length, e.pair))
    return edges[-1].length, edges


def _check_nondegenerate(s: Simplex, vol: float, h: float) -> None:
    if not vol > DEGENERACY_TOL * h**s.dim:
        raise DegenerateSimplexError(
            f"simplex measure {vol:.3e} is below {DEGENERACY_TOL:g} * h^{s.dim}"
        )


def measure(s) -> float:
    """|T| = |det(x_1 - x_0, ..., x_d - x_0)| / d!."""
    s = as_simplex(s)
    vol = abs(_signed_volume_factor(s)) / math.factorial(s.dim)
    h, _ = diameter_and_edges(s)
    _check_nondegenerate(s, vol, h)
    return vol


def circumradius(s) -> float:
    """Radius of the circumscribed circle/sphere.

    The circumcenter c solves 2 (x_i - x_0) . c' = |x_i - x_0|^2 with
    c' = c - x_0.
    """
    s = as_simplex(s)
    measure(s)
    e = s.edge_matrix().T
    rhs = 0.5 * np.sum(e * e, axis=1)
    centre = smallmat.inverse(e) @ rhs
    return float(np.linalg.norm(centre))


def param_H_T0(s) -> float:
    """H_T0 = h^2/|T| * min|L_i| (2-D) or h^2/|T| * |L_(1)||L_(2)| (3-D)."""
    s = as_simplex(s)
    vol = measure(s)
    h, edges = diameter_and_edges(s)
    if s.dim == 2:
        short = edges[0].length
    else:
        short = edges[0].length * edges[1].length
    return h * h / vol * short


def _longest(edges: Sequence[Edge]) -> Edge:
    # longest length first, then lexicographically smallest pair
    return min(edges, key=lambda e: (-e.length, e.pair))


def _frame(origin, p1, p2, p3=None):
    """Orthonormal frame (columns) with u1 along p1, p2 in the (u1,u2) half-plane
    with positive u2 and, in 3-D, p3 on the positive u3 side."""
    u1 = p1 - origin
    u1 = u1 / np.linalg.norm(u1)
    w = p2 - origin
    for _ in range(2):  # second pass restores orthogonality for flat simplices
        w = w - np.dot(w, u1) * u1
    u2 = w / np.linalg.norm(w)
    if p3 is None:
        return np.column_stack([u1, u2])
    u3 = np.cross(u1, u2)
    if np.dot(p3 - origin, u3) < 0:
        u3 = -u3
    return np.column_stack([u1, u2, u3])


def _standard_position_2d(s: Simplex) -> StandardPosition:
    v = s.vertices
    _, edges = diameter_and_edges(s)
    longest = _longest(edges)
    a, b = longest.pair
    apex = ({0, 1, 2} - {a, b}).pop()
    la = np.linalg.norm(v[a] - v[apex])
    lb = np.linalg.norm(v[b] - v[apex])
    # x2 is the farther end from x1 so that alpha_2 <= alpha_1; ties keep index order
    second, third = (a, b) if la >= lb else (b, a)
    order = (apex, second, third)
    x1, x2, x3 = v[apex], v[second], v[third]
    rot = _frame(x1, x2, x3)
    local = (v[list(order)] - x1) @ rot
    alpha1 = float(local[1, 0])
    alpha2 = float(np.linalg.norm(local[2]))
    s_par = float(local[2, 0] / alpha2)
    t_par = float(local[2, 1] / alpha2)
    return StandardPosition(
        dim=2,
        alpha=np.array([alpha1, alpha2]),
        shear={"s": s_par, "t": t_par},
        tet_type=None,
        rotation=rot,
        translation=x1.copy(),
        mirrored=smallmat.determinant(rot) < 0,
        order=order,
    )


def _standard_position_3d(s: Simplex) -> StandardPosition:
    v = s.vertices
    _, edges = diameter_and_edges(s)
    lmin = edges[0]
    p_set = set(lmin.pair)
    neighbours = [e for e in edges if len(p_set & set(e.pair)) == 1]
    lmax_min = _longest(neighbours)
    p = (p_set & set(lmax_min.pair)).pop()  # shared end of L_min and L_max^(min)
    q = (set(lmax_min.pair) - {p}).pop()
    e_idx = (p_set - {p}).pop()  # other end of L_min, always labelled x_3
    f_idx = ({0, 1, 2, 3} - {p, q, e_idx}).pop()

    mid = 0.5 * (v[p] + v[q])
    normal = v[q] - v[p]
    side_e = float(np.dot(v[e_idx] - mid, normal))
    side_f = float(np.dot(v[f_idx] - mid, normal))
    diagnostics = []
    if side_e == 0.0 or side_f == 0.0 or (side_e < 0) == (side_f < 0):
        tet_type = "i"
        x1, x2 = p, q
    else:
        tet_type = "ii"
        x1, x2 = q, p
    side_f_x1 = float(np.dot(v[f_idx] - mid, v[x1] - mid))
    if side_f_x1 < 0:
        # x_4 on the far side of the bisector from x_1: only reachable when x_3
        # lies on the plane, in which case |x_3 x_1| = |x_3 x_2| and swapping
        # x_1, x_2 keeps L_min = x_1 x_3 valid
        x1, x2 = x2, x1
        diagnostics.append("relabelled x1<->x2 so that x1 and x4 share a half-space")
    order = (x1, x2, e_idx, f_idx)

    rot = _frame(v[x1], v[x2], v[e_idx], v[f_idx])
    local = (v[list(order)] - v[x1]) @ rot
    alpha1 = float(local[1, 0])
    if tet_type == "i":
        r2 = local[2]
        sign = 1.0
    else:
        r2 = local[2] - local[1]
        sign = -1.0
    alpha2 = float(np.linalg.norm(r2))
    alpha3 = float(np.linalg.norm(local[3]))
    s1 = float(sign * r2[0] / alpha2)
    t1 = float(r2[1] / alpha2)
    s21, s22, t2 = (float(c) for c in local[3] / alpha3)
    return StandardPosition(
        dim=3,
        alpha=np.array([alpha1, alpha2, alpha3]),
        shear={"s1": s1, "t1": t1, "s21": s21, "s22": s22, "t2": t2},
        tet_type=tet_type,
        rotation=rot,
        translation=v[x1].copy(),
        mirrored=smallmat.determinant(rot) < 0,
        order=order,
        diagnostics=tuple(diagnostics),
    )


def standard_position(s) -> StandardPosition:
    """Bring a simplex to standard position.

    2-D: the longest edge becomes x_2 x_3 and the opposite vertex x_1 is moved
    to the origin with x_2 on the positive first axis.

    3-D: the shortest edge L_min and the longest edge sharing an endpoint with
    it are located; the bisector-plane test on the latter decides between the
    two reference tetrahedra (types "i" and "ii").
    """
    s = as_simplex(s)
    measure(s)
    if s.dim == 2:
        return _standard_position_2d(s)
    return _standard_position_3d(s)


def param_H_T(sp: StandardPosition, measure: float, h: float) -> float:
    """H_T = (prod alpha_i / |T|) h."""
    return float(np.prod(sp.alpha) / measure * h)


def _angle(u, w) -> float:
    c = np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w))
    return float(math.acos(min(1.0, max(-1.0, c))))


def face_angles(s) -> list:
    """Interior angles of every triangular face (all angles for a triangle)."""
    s = as_simplex(s)
    v = s.vertices
    out = []
    for face in itertools.combinations(range(s.dim + 1), 3):
        for k in range(3):
            a = face[k]
            b, c = face[(k + 1) % 3], face[(k + 2) % 3]
            out.append(_angle(v[b] - v[a], v[c] - v[a]))
    return out


def dihedral_angles(s) -> list:
    """Interior dihedral angles along the six edges of a tetrahedron."""
    s = as_simplex(s)
    if s.dim != 3:
        raise InvalidDimensionError("dihedral angles need a tetrahedron")
    v = s.vertices
    out = []
    for i, j in itertools.combinations(range(4), 2):
        k, l = sorted({0, 1, 2, 3} - {i, j})
        axis = (v[j] - v[i]) / np.linalg.norm(v[j] - v[i])
        wk = v[k] - v[i]
        wl = v[l] - v[i]
        wk = wk - np.dot(wk, axis) * axis
        wl = wl - np.dot(wl, axis) * axis
        out.append(_angle(wk, wl))
    return out


def angles(s) -> tuple:
    """(theta_max, psi_max); psi_max is None for triangles."""
    s = as_simplex(s)
    measure(s)
    theta = max(face_angles(s))
    psi = max(dihedral_angles(s)) if s.dim == 3 else None
    return theta, psi


def assumption1_margin(sp: StandardPosition) -> float:
    """Smallest M with |s22| <= M alpha_2 t1 / alpha_3."""
    if sp.dim != 3:
        raise InvalidDimensionError("the s22 condition only exists for tetrahedra")
    a1, a2, a3 = sp.alpha
    return float(abs(sp.shear["s22"]) * a3 / (a2 * sp.shear["t1"]))


def full_report(s) -> GeometricReport:
    s = as_simplex(s)
    vol = measure(s)
    h, edges = diameter_and_edges(s)
    sp = standard_position(s)
    theta, psi = angles(s)
    H0 = param_H_T0(s)
    return GeometricReport(
        dim=s.dim,
        h=h,
        measure=vol,
        H_T0=H0,
        H_T=param_H_T(sp, vol, h),
        H_over_h=H0 / h,
        alpha_ratio=float(np.max(sp.alpha) / np.min(sp.alpha)),
        circumradius=circumradius(s),
        mathscr_H=[float(x) for x in sp.mathscr_H],
        theta_max=theta,
        psi_max=psi,
        assumption1_M=assumption1_margin(sp) if s.dim == 3 else None,
        edges_sorted=edges,
        alpha=[float(a) for a in sp.alpha],
        tet_type=sp.tet_type,
        mirrored=sp.mirrored,
        diagnostics=list(sp.diagnostics),
    )
