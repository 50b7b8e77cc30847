"""Minkowski R^{1,3} / Klein-ball kernel.

Conventions, fixed once for the whole package:

* signature (-,+,+,+), coordinate 0 timelike;
* hyperboloid points p satisfy <p,p> = -1, p0 > 0;
* planes are unit spacelike (de Sitter) normals u, <u,u> = +1, with
  membership  x in H  iff  <x,u> <= 0  (u points outward);
* the Klein ball is the affine chart y = (x1,x2,x3)/x0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergentPlanes, NotAnIsometry

#: Minkowski metric matrix, eta = diag(-1, 1, 1, 1).
ETA = np.diag([-1.0, 1.0, 1.0, 1.0])

#: default clamp tolerance for acos/acosh arguments
CLAMP_TOL = 1e-9

UNIT_TOL = 1e-12


def mink_inner(a, b) -> float:
    """Minkowski inner product -a0*b0 + a1*b1 + a2*b2 + a3*b3.

    Accepts any length-4 array-likes; bilinear and symmetric.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(-a[..., 0] * b[..., 0] + np.sum(a[..., 1:] * b[..., 1:], axis=-1))


def mink_norm_sq(a) -> float:
    return mink_inner(a, a)


@dataclass(frozen=True)
class HPoint:
    """Point on the upper hyperboloid sheet: <v,v> = -1, v0 > 0."""

    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=float).reshape(4)
        object.__setattr__(self, "vec", v)
        if abs(mink_norm_sq(v) + 1.0) > 1e-10:
            raise ValueError(f"not a hyperboloid point, <v,v>={mink_norm_sq(v)}")
        if v[0] <= 0:
            raise ValueError("point on the lower sheet")

    @staticmethod
    def normalize(raw) -> "HPoint":
        """Rescale a timelike vector onto the upper sheet."""
        v = np.asarray(raw, dtype=float).reshape(4)
        s = mink_norm_sq(v)
        if s >= 0:
            raise ValueError("vector is not timelike")
        v = v / np.sqrt(-s)
        if v[0] < 0:
            v = -v
        return HPoint(v)


@dataclass(frozen=True)
class HalfSpace:
    """Half-space of H^3 with outward unit spacelike normal u."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(4)
        object.__setattr__(self, "u", u)
        if abs(mink_norm_sq(u) - 1.0) > 1e-10:
            raise ValueError(f"normal is not de Sitter, <u,u>={mink_norm_sq(u)}")

    @staticmethod
    def normalize(raw) -> "HalfSpace":
        v = np.asarray(raw, dtype=float).reshape(4)
        s = mink_norm_sq(v)
        if s <= 0:
            raise ValueError("vector is not spacelike")
        return HalfSpace(v / np.sqrt(s))

    def contains(self, p: HPoint, tol: float = 0.0) -> bool:
        return mink_inner(p.vec, self.u) <= tol

    def klein_plane(self) -> tuple[np.ndarray, float]:
        """Euclidean trace in the Klein ball: {y : y . n = c}."""
        return self.u[1:].copy(), float(self.u[0])


def _clamp(x: float, lo: float, hi: float, tol: float = CLAMP_TOL) -> float:
    if x < lo - tol or x > hi + tol:
        raise ValueError(f"value {x} outside [{lo},{hi}] beyond tolerance")
    return min(max(x, lo), hi)


def dihedral_angle(h1: HalfSpace, h2: HalfSpace, tol: float = CLAMP_TOL) -> float:
    """Interior dihedral angle between two intersecting planes.

    theta = arccos(-<u1,u2>), in [0,pi]; pi means coincident half-spaces
    (the weak-skeleton boundary).  Raises DivergentPlanes when the planes
    do not meet in H^3.
    """
    c = mink_inner(h1.u, h2.u)
    if abs(c) > 1.0 + tol:
        raise DivergentPlanes(f"<u1,u2> = {c}")
    return float(np.arccos(-min(max(c, -1.0), 1.0)))


def hyp_distance(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance arccosh(-<p,q>), clamped at coincidence."""
    c = -mink_inner(p.vec, q.vec)
    return float(np.arccosh(max(c, 1.0)))


def klein_project(p: HPoint) -> np.ndarray:
    """Central projection onto the open unit ball."""
    return p.vec[1:] / p.vec[0]


def klein_lift(y) -> HPoint:
    """Inverse of klein_project."""
    y = np.asarray(y, dtype=float).reshape(3)
    n2 = float(y @ y)
    if n2 >= 1.0:
        raise ValueError("point outside the open unit ball")
    t = 1.0 / np.sqrt(1.0 - n2)
    return HPoint(np.concatenate(([t], t * y)))


def is_isometry(g, tol: float = 1e-10) -> bool:
    g = np.asarray(g, dtype=float)
    return bool(np.max(np.abs(g.T @ ETA @ g - ETA)) <= tol)


def apply_isometry(g, obj, tol: float = 1e-10):
    """Apply a Lorentz matrix preserving the upper sheet.

    Accepts an HPoint or a HalfSpace and returns the same type.
    """
    g = np.asarray(g, dtype=float)
    resid = np.max(np.abs(g.T @ ETA @ g - ETA))
    if resid > tol:
        raise NotAnIsometry(f"form-preservation residual {resid}")
    if g[0, 0] <= 0:
        raise NotAnIsometry("matrix swaps the hyperboloid sheets")
    if isinstance(obj, HPoint):
        return HPoint(g @ obj.vec)
    if isinstance(obj, HalfSpace):
        return HalfSpace(g @ obj.u)
    raise TypeError(f"cannot transform {type(obj).__name__}")


def boost_x(s: float) -> np.ndarray:
    """Boost of rapidity s along the x1 axis."""
    g = np.eye(4)
    g[0, 0] = g[1, 1] = np.cosh(s)
    g[0, 1] = g[1, 0] = np.sinh(s)
    return g


def rotation_xyz(axis: int, angle: float) -> np.ndarray:
    """Spatial rotation about coordinate axis 1, 2 or 3."""
    i, j = [(2, 3), (3, 1), (1, 2)][axis - 1]
    g = np.eye(4)
    g[i, i] = g[j, j] = np.cos(angle)
    g[i, j] = -np.sin(angle)
    g[j, i] = np.sin(angle)
    return g


def frame_to_isometry(f0: np.ndarray, f1: np.ndarray, f2: np.ndarray,
                      f3: np.ndarray) -> np.ndarray:
    """Lorentz matrix g sending the orthonormal frame (f0..f3) to the
    standard basis (e0..e3).

    The frame must be Minkowski-orthonormal with f0 timelike on the
    upper sheet.  Since M = [f0 f1 f2 f3] satisfies M^T eta M = eta,
    the inverse is eta M^T eta.
    """
    m = np.column_stack([f0, f1, f2, f3])
    g = ETA @ m.T @ ETA
    if not is_isometry(g, tol=1e-8):
        raise NotAnIsometry("frame is not Minkowski-orthonormal")
    return g


def translation_to_origin(p: HPoint) -> np.ndarray:
    """Hyperbolic translation carrying p to (1,0,0,0).

    Pure boost along the geodesic from the origin to p.
    """
    v = p.vec
    y = v[1:]
    n = np.linalg.norm(y)
    if n < 1e-15:
        return np.eye(4)
    d = np.arccosh(v[0])
    axis = y / n
    # conjugate a boost along x1 by a rotation taking axis -> e1
    r = _rotation_taking(axis, np.array([1.0, 0.0, 0.0]))
    R = np.eye(4)
    R[1:, 1:] = r
    return R.T @ boost_x(-d) @ R


def _rotation_taking(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """3x3 rotation with R a = b for unit vectors a, b."""
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    v = np.cross(a, b)
    c = float(a @ b)
    if c < -1 + 1e-14:
        # antipodal: rotate by pi about any axis orthogonal to a
        w = np.array([1.0, 0.0, 0.0])
        if abs(a[0]) > 0.9:
            w = np.array([0.0, 1.0, 0.0])
        w = w - (w @ a) * a
        w /= np.linalg.norm(w)
        return 2.0 * np.outer(w, w) - np.eye(3)
    K = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + K + K @ K / (1.0 + c)


def plane_through_klein_points(y1, y2, y3, interior_point) -> HalfSpace:
    """Half-space whose Klein boundary plane passes through three ball
    points, oriented so ``interior_point`` is inside."""
    y1, y2, y3 = (np.asarray(y, float) for y in (y1, y2, y3))
    n = np.cross(y2 - y1, y3 - y1)
    norm = np.linalg.norm(n)
    if norm < 1e-14:
        raise ValueError("collinear points do not span a plane")
    n = n / norm
    c = float(n @ y1)
    u = np.concatenate(([c], n))
    h = HalfSpace.normalize(u)
    # inside means <lift(p), u> < 0, i.e. p.n - c < 0
    p = np.asarray(interior_point, float)
    if float(p @ h.u[1:]) - h.u[0] > 0:
        h = HalfSpace(-h.u)
    return h


def random_isometry(rng: np.random.Generator, max_rapidity: float = 1.0) -> np.ndarray:
    """Random element of the identity component of O(1,3)."""
    # random rotation via QR on a Gaussian matrix
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    R1 = np.eye(4)
    R1[1:, 1:] = q
    q2, r2 = np.linalg.qr(rng.standard_normal((3, 3)))
    q2 = q2 @ np.diag(np.sign(np.diag(r2)))
    if np.linalg.det(q2) < 0:
        q2[:, 0] = -q2[:, 0]
    R2 = np.eye(4)
    R2[1:, 1:] = q2
    return R1 @ boost_x(rng.uniform(-max_rapidity, max_rapidity)) @ R2
