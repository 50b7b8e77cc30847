"""Dihedral angles as local coordinates.

The state vector stacks all face normals (4 reals per face).  The
constraint system consists of

* unit-norm equations, one per face;
* vertex-coincidence determinants, k-3 per vertex of valence k;
* six linear gauge equations pinning a vertex-edge-face flag: the
  pinned face plane contains the x-axis and is the z=0 plane, the other
  face at the pinned edge contains the x-axis, and a third face at the
  pinned vertex passes through the origin.

Counting degrees of freedom, 4F minus these constraints leaves exactly
one coordinate per edge, so the angle map restricted to the constraint
manifold is square.  Angle targets are imposed through the smooth
residual <u1,u2> + cos(theta), which stays well-behaved at the weak
boundary where theta = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .errors import (AnglesDiffer, ConstraintProjectionFailed, ContinuationStalled,
                     DegenerateFlag, IdealPoint, LeftStratum, NoConvergence,
                     SingularJacobian, SkeletonMismatch)
from .geom import ETA, HalfSpace
from .polyhedron import EPS_DELTA, Realization, SkeletonStatus, signed_distance
from .volume import SchlafliPathRecord

FD_STEP = 1e-6           # centered-difference probe size
INWARD_STEP = 1e-4       # one-sided probe at the weak boundary


@dataclass(frozen=True)
class GaugeChart:
    """Pinned vertex-edge-face flag killing the 6-dim isometry action."""

    vertex: int
    edge: int
    face: int

    def validate(self, r: Realization) -> None:
        g = r.graph
        a, b = g.edges[self.edge]
        if self.vertex not in (a, b):
            raise DegenerateFlag("pinned vertex is not an endpoint of the edge")
        if self.face not in g.edge_faces(self.edge):
            raise DegenerateFlag("pinned face is not adjacent to the edge")


def default_chart(r: Realization) -> GaugeChart:
    """First vertex, its first rotation edge, the face left of it."""
    v = 0
    e = r.graph.rotation[v][0]
    f = r.graph.edge_faces(e)[0]
    return GaugeChart(v, e, f)


def gauge_fix(r: Realization, chart: GaugeChart) -> Realization:
    """Unique isometry mapping the flag to standard position.

    Pinned vertex to the origin, pinned edge along the positive x-axis,
    pinned face into the z=0 plane with normal +e3.
    """
    chart.validate(r)
    g = r.graph
    pts = r.solve_vertices()
    a, b = g.edges[chart.edge]
    w = b if a == chart.vertex else a
    v = pts[chart.vertex].vec
    wv = pts[w].vec
    # unit spacelike tangent at v toward w
    t = wv + geom.mink_inner(wv, v) * v
    t = t / math.sqrt(geom.mink_inner(t, t))
    u = r.planes[chart.face].u
    # complete the frame: Minkowski-orthogonal complement of (v, t, u)
    A = np.array([v, t, u]) @ ETA
    _, _, vt = np.linalg.svd(A)
    z = vt[-1]
    z = z / math.sqrt(geom.mink_inner(z, z))
    if np.linalg.det(np.column_stack([v, t, z, u])) < 0:
        z = -z
    iso = geom.frame_to_isometry(v, t, z, u)
    out = r.transformed(iso)
    # sign branch: pinned-face normal to +e3
    if out.planes[chart.face].u[3] < 0:
        raise DegenerateFlag("frame orientation failed")  # pragma: no cover
    return out


# ---------------------------------------------------------------------------
# constraint system on the stacked normal vector
# ---------------------------------------------------------------------------

class ConstraintSystem:
    """Constraints and angle residuals as functions of the stacked
    face-normal vector x (length 4F)."""

    def __init__(self, graph, chart: GaugeChart):
        self.graph = graph
        self.chart = chart
        self.n_faces = graph.n_faces
        self.n_edges = graph.n_edges
        # coincidence determinant slots: (vertex, 4 consecutive faces)
        self.det_slots: list[tuple[int, ...]] = []
        for v in range(graph.n_vertices):
            faces = graph.vertex_faces(v)
            for j in range(len(faces) - 3):
                self.det_slots.append(tuple(faces[j:j + 4]))
        # gauge slots: (face, component) pairs constrained to zero
        f0 = chart.face
        e_faces = graph.edge_faces(chart.edge)
        fe = e_faces[0] if e_faces[1] == f0 else e_faces[1]
        third = None
        for f in graph.vertex_faces(chart.vertex):
            if f not in (f0, fe):
                third = f
                break
        if third is None:
            raise DegenerateFlag("pinned vertex has no third face")
        self.gauge_slots = [(f0, 0), (f0, 1), (f0, 2),
                            (fe, 0), (fe, 1), (third, 0)]
        self.edge_face_pairs = [graph.edge_faces(e) for e in range(graph.n_edges)]

    # -- state packing ----------------------------------------------------

    def pack(self, r: Realization) -> np.ndarray:
        return np.concatenate([h.u for h in r.planes])

    def unpack(self, x: np.ndarray) -> Realization:
        planes = [HalfSpace.normalize(x[4 * f:4 * f + 4])
                  for f in range(self.n_faces)]
        return Realization(self.graph, planes)

    def normals(self, x: np.ndarray) -> np.ndarray:
        return x.reshape(self.n_faces, 4)

    # -- residuals ----------------------------------------------------------

    def edge_cos(self, x: np.ndarray) -> np.ndarray:
        u = self.normals(x)
        return np.array([geom.mink_inner(u[f1], u[f2])
                         for f1, f2 in self.edge_face_pairs])

    def angles(self, x: np.ndarray) -> np.ndarray:
        # robust near both ends: with d = u1-u2, s = u1+u2 one has
        # <d,d> = 2-2c and <s,s> = 2+2c, so the exterior angle is
        # 2*atan2(|d|, |s|) without the arccos cancellation at c = +-1
        u = self.normals(x)
        out = np.empty(self.n_edges)
        for e, (f1, f2) in enumerate(self.edge_face_pairs):
            d = u[f1] - u[f2]
            s = u[f1] + u[f2]
            nd = math.sqrt(max(geom.mink_inner(d, d), 0.0))
            ns = math.sqrt(max(geom.mink_inner(s, s), 0.0))
            out[e] = math.pi - 2.0 * math.atan2(nd, ns)
        return out

    def constraints(self, x: np.ndarray) -> np.ndarray:
        u = self.normals(x)
        norms = 0.5 * (np.einsum("fi,ij,fj->f", u, ETA, u) - 1.0)
        dets = np.array([np.linalg.det(u[list(slot)]) for slot in self.det_slots]) \
            if self.det_slots else np.empty(0)
        gauge = np.array([u[f, i] for f, i in self.gauge_slots])
        return np.concatenate([norms, dets, gauge])

    def n_constraints(self) -> int:
        return self.n_faces + len(self.det_slots) + 6

    def full_residual(self, x: np.ndarray, cos_target: np.ndarray) -> np.ndarray:
        res = self.edge_cos(x) - cos_target
        me = self.graph.marked_edge
        if me is not None:
            # the cosine equation degenerates quadratically at the
            # coplanar boundary (d cos/d theta = 0 at pi); the chord
            # rho = |u1-u2| = 2 cos(theta/2) is regular there
            f1, f2 = self.edge_face_pairs[me]
            u = self.normals(x)
            d = u[f1] - u[f2]
            rho = math.sqrt(max(geom.mink_inner(d, d), 0.0))
            rho_t = math.sqrt(max(2.0 - 2.0 * cos_target[me], 0.0))
            res[me] = rho - rho_t
        return np.concatenate([res, self.constraints(x)])

    def full_jac(self, x: np.ndarray, cos_target: np.ndarray) -> np.ndarray:
        """Jacobian of full_residual; the chord row is analytic because
        finite differences of |u1-u2| break down once the chord is
        smaller than the step."""
        J = self.jac(lambda z: self.full_residual(z, cos_target), x)
        me = self.graph.marked_edge
        if me is not None:
            f1, f2 = self.edge_face_pairs[me]
            u = self.normals(x)
            d = u[f1] - u[f2]
            rho = math.sqrt(max(geom.mink_inner(d, d), 0.0))
            if rho > 1e-13:
                grad = ETA @ d / rho
                row = np.zeros_like(x)
                row[4 * f1:4 * f1 + 4] = grad
                row[4 * f2:4 * f2 + 4] = -grad
                J[me] = row
        return J

    # -- numerical jacobians ---------------------------------------------------

    def jac(self, func, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
        f0 = func(x)
        J = np.empty((len(f0), len(x)))
        for i in range(len(x)):
            xp = x.copy(); xp[i] += h
            xm = x.copy(); xm[i] -= h
            J[:, i] = (func(xp) - func(xm)) / (2 * h)
        return J

    def project(self, x: np.ndarray, pinvJ: np.ndarray, func,
                tol: float = 1e-12, max_iter: int = 30) -> np.ndarray:
        """Frozen Gauss-Newton reprojection onto func(x)=0."""
        for _ in range(max_iter):
            rvec = func(x)
            if np.max(np.abs(rvec)) < tol:
                return x
            x = x - pinvJ @ rvec
        if np.max(np.abs(func(x))) < 100 * tol:
            return x
        raise ConstraintProjectionFailed(
            f"residual {np.max(np.abs(func(x))):.2e} after {max_iter} iterations")


def _membership_ok(sys: ConstraintSystem, x: np.ndarray,
                   slack: float = EPS_DELTA / 2) -> bool:
    """Quick stratum guard: vertex solves and interior inequalities."""
    try:
        r = sys.unpack(x)
        ys = r.klein_vertices()
    except Exception:
        return False
    if np.any(np.linalg.norm(ys, axis=1) >= 1.0 - 1e-9):
        return False
    pair = r.marked_pair()
    for v in range(sys.graph.n_vertices):
        inc = set(r.incident_faces(v))
        for f in range(sys.graph.n_faces):
            if f in inc:
                continue
            is_weak_slot = (pair is not None and
                            ((f == pair[0] and pair[1] in inc) or
                             (f == pair[1] and pair[0] in inc)))
            d = signed_distance(ys[v], r.planes[f])
            if d < (-slack if is_weak_slot else slack):
                return False
    return True


def solve_to_angles(r0: Realization, target, chart: GaugeChart | None = None,
                    max_iter: int = 60, tol: float = 1e-10,
                    check_stratum: bool = True,
                    initial_x: np.ndarray | None = None) -> Realization:
    """Damped Newton solve for the realization with prescribed angles.

    The target must lie within the local chart's reach; callers perform
    continuation otherwise.
    """
    target = np.asarray(target, dtype=float)
    if chart is None:
        chart = default_chart(r0)
    g = r0.graph
    if len(target) != g.n_edges:
        raise ValueError("target length does not match edge count")
    for e in range(g.n_edges):
        hi = math.pi if e == g.marked_edge else math.pi - 1e-12
        if not (1e-12 < target[e] <= hi):
            raise LeftStratum(f"target angle at edge {e} outside the stratum")

    sys = ConstraintSystem(g, chart)
    x = sys.pack(gauge_fix(r0, chart)) if initial_x is None else initial_x.copy()
    cos_target = -np.cos(target)
    me = g.marked_edge
    if (initial_x is None and me is not None and target[me] < math.pi - 1e-9
            and r0.marked_pair_coplanar()):
        # leaving the weak boundary: Newton cannot start at the conical
        # point of the chord residual, so seed one-sidedly off it
        x = _inward_seed(sys, x, me, r0.marked_pair(), float(cos_target[me]))

    func = lambda z: sys.full_residual(z, cos_target)
    r_prev = func(x)
    for it in range(max_iter):
        if np.max(np.abs(sys.angles(x) - target)) < tol and \
                np.max(np.abs(sys.constraints(x))) < 1e-11:
            break
        J = sys.full_jac(x, cos_target)
        try:
            step = np.linalg.solve(J, -r_prev)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from None
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("non-finite Newton step")
        # Armijo backtracking on the squared residual
        phi0 = float(r_prev @ r_prev)
        lam = 1.0
        accepted = False
        while lam > 1e-8:
            x_new = x + lam * step
            r_new = func(x_new)
            if float(r_new @ r_new) <= (1 - 1e-4 * lam) * phi0:
                if not check_stratum or _membership_ok(sys, x_new):
                    x, r_prev = x_new, r_new
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            if check_stratum and not _membership_ok(sys, x + 1e-8 * step):
                raise LeftStratum("membership inequality blocks every step")
            raise NoConvergence(f"line search failed at iteration {it}")
    else:
        raise NoConvergence(f"no convergence in {max_iter} iterations")

    out = sys.unpack(x)
    report = out.check_membership()
    if report.status is SkeletonStatus.INVALID:
        raise LeftStratum("solution violates membership: " + report.pretty())
    return out


# ---------------------------------------------------------------------------
# angle-map jacobian on the gauge slice
# ---------------------------------------------------------------------------

@dataclass
class AngleJacobian:
    matrix: np.ndarray            # (E, E): d(angles)/d(chart directions)
    condition_number: float
    sigma_min: float
    boundary: bool                # True at a weak-boundary point
    inward_column: int | None     # column index of the one-sided direction
    marked_edge: int | None


def _null_basis(J: np.ndarray, rank_tol: float = 1e-7) -> np.ndarray:
    _, s, vt = np.linalg.svd(J)
    rank = int(np.sum(s > rank_tol * max(s[0], 1.0)))
    return vt[rank:].T


def angle_jacobian(r: Realization, chart: GaugeChart | None = None,
                   h: float = FD_STEP) -> AngleJacobian:
    """Finite-difference Jacobian of the angle map restricted to the
    gauge slice and the coincidence constraint manifold."""
    if chart is None:
        chart = default_chart(r)
    g = r.graph
    sys = ConstraintSystem(g, chart)
    x0 = sys.pack(gauge_fix(r, chart))
    E = g.n_edges

    Jc = sys.jac(sys.constraints, x0)
    pinv = np.linalg.pinv(Jc, rcond=1e-10)
    boundary = r.marked_pair_coplanar()

    if not boundary:
        Q = _null_basis(Jc)
        if Q.shape[1] != E:
            raise ConstraintProjectionFailed(
                f"tangent space dimension {Q.shape[1]}, expected {E}")
        cols = []
        for k in range(E):
            xp = sys.project(x0 + h * Q[:, k], pinv, sys.constraints)
            xm = sys.project(x0 - h * Q[:, k], pinv, sys.constraints)
            cols.append((sys.angles(xp) - sys.angles(xm)) / (2 * h))
        M = np.column_stack(cols)
        s = np.linalg.svd(M, compute_uv=False)
        return AngleJacobian(M, float(s[0] / s[-1]), float(s[-1]),
                             False, None, g.marked_edge)

    # weak boundary: split tangents into boundary-parallel directions
    # (coincident pair preserved) and the one-sided inward direction
    p1, p2 = r.marked_pair()

    def cop(x):
        u = sys.normals(x)
        return u[p1] - u[p2]

    def constraints_bdry(x):
        return np.concatenate([sys.constraints(x), cop(x)])

    Jb = sys.jac(constraints_bdry, x0)
    pinv_b = np.linalg.pinv(Jb, rcond=1e-10)
    B = _null_basis(Jb)
    if B.shape[1] != E - 1:
        raise ConstraintProjectionFailed(
            f"boundary tangent dimension {B.shape[1]}, expected {E - 1}")
    # inward direction: in the full tangent space, orthogonal to B
    Q = _null_basis(Jc)
    if Q.shape[1] != E:
        raise ConstraintProjectionFailed(
            f"tangent space dimension {Q.shape[1]}, expected {E}")
    P = Q @ Q.T - B @ B.T
    w, vecs = np.linalg.eigh(P)
    d = vecs[:, -1]
    # orient inward (marked-edge angle decreasing from pi)
    me = g.marked_edge
    hp = INWARD_STEP
    xp = sys.project(x0 + hp * d, pinv, sys.constraints)
    if sys.angles(xp)[me] >= math.pi - 1e-14 or not _membership_ok(sys, xp, slack=-1e-7):
        d = -d
        xp = sys.project(x0 + hp * d, pinv, sys.constraints)

    a0 = sys.angles(x0)
    cols = [(sys.angles(xp) - a0) / hp]
    for k in range(E - 1):
        xq = sys.project(x0 + h * B[:, k], pinv_b, constraints_bdry)
        xm = sys.project(x0 - h * B[:, k], pinv_b, constraints_bdry)
        cols.append((sys.angles(xq) - sys.angles(xm)) / (2 * h))
    M = np.column_stack(cols)
    s = np.linalg.svd(M, compute_uv=False)
    return AngleJacobian(M, float(s[0] / s[-1]), float(s[-1]),
                         True, 0, me)


# ---------------------------------------------------------------------------
# deformation families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeformationFamily:
    """Angle-target family over a parameter interval.

    kind "scale_one_edge": the marked edge's angle is t * theta_e with
    the base realized at t = 1; all other angles fixed.
    kind "add_diagonal": the marked edge's angle is pi * (1 - t); the
    base is a weak-boundary realization at t = 0.
    """

    base: Realization
    kind: str                      # "scale_one_edge" | "add_diagonal"
    edge: int
    t_range: tuple[float, float]
    chart: GaugeChart | None = None

    def targets(self, t: float) -> np.ndarray:
        base_angles = self.base.angle_vector()
        out = base_angles.copy()
        if self.kind == "scale_one_edge":
            out[self.edge] = t * base_angles[self.edge]
        elif self.kind == "add_diagonal":
            out[self.edge] = math.pi * (1.0 - t)
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")
        return out

    def rates(self) -> np.ndarray:
        """dTheta/dt, constant in t for both families."""
        out = np.zeros(self.base.graph.n_edges)
        if self.kind == "scale_one_edge":
            out[self.edge] = self.base.angle_vector()[self.edge]
        else:
            out[self.edge] = -math.pi
        return out

    def base_t(self) -> float:
        return 1.0 if self.kind == "scale_one_edge" else 0.0


def _inward_seed(sys: ConstraintSystem, x0: np.ndarray, marked: int,
                 pair: tuple[int, int], c_target: float) -> np.ndarray:
    """First step off the weak boundary along the one-sided tangent."""
    Jc = sys.jac(sys.constraints, x0)
    pinv = np.linalg.pinv(Jc, rcond=1e-10)
    p1, p2 = pair

    def constraints_bdry(x):
        u = sys.normals(x)
        return np.concatenate([sys.constraints(x), u[p1] - u[p2]])

    B = _null_basis(sys.jac(constraints_bdry, x0))
    Q = _null_basis(Jc)
    P = Q @ Q.T - B @ B.T
    _, vecs = np.linalg.eigh(P)
    d = vecs[:, -1]
    lam0 = 1e-3
    best = None
    for sign in (1.0, -1.0):
        try:
            xp = sys.project(x0 + sign * lam0 * d, pinv, sys.constraints)
        except ConstraintProjectionFailed:
            continue
        if _membership_ok(sys, xp, slack=-1e-7):
            c = sys.edge_cos(xp)[marked]
            if c < 1.0 - 1e-12:
                best = (sign, 1.0 - c)
                break
    if best is None:
        raise ContinuationStalled(0.0, "no inward direction off the boundary")
    sign, drop = best
    kappa = drop / lam0 ** 2
    lam = math.sqrt(max(1.0 - c_target, 0.0) / kappa)
    return sys.project(x0 + sign * lam * d, pinv, sys.constraints)


def run_family(fam: DeformationFamily, steps: int) -> SchlafliPathRecord:
    """Continuation along the family, recording angles, lengths and
    angle rates on a uniform grid (ts increasing)."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    chart = fam.chart or default_chart(fam.base)
    t0, t1 = fam.t_range
    if steps == 0 or t0 == t1:
        grid = [t0]
    else:
        grid = list(np.linspace(t0, t1, steps + 1))
    base_t = fam.base_t()
    # walk from the grid end nearest the base parameter
    if abs(grid[0] - base_t) <= abs(grid[-1] - base_t):
        order = list(range(len(grid)))
    else:
        order = list(range(len(grid) - 1, -1, -1))

    g = fam.base.graph
    sys = ConstraintSystem(g, chart)
    rates = fam.rates()
    results: dict[int, Realization] = {}
    xs: dict[int, np.ndarray] = {}
    x_base = sys.pack(gauge_fix(fam.base, chart))
    prev: list[int] = []
    for idx in order:
        t = grid[idx]
        target = fam.targets(t)
        if fam.kind == "add_diagonal" and t == 0.0:
            results[idx] = sys.unpack(x_base)
            xs[idx] = x_base
            prev.append(idx)
            continue
        at_boundary = (fam.kind == "add_diagonal" and prev
                       and grid[prev[-1]] == 0.0)
        if prev and not at_boundary:
            if len(prev) >= 2:
                x_guess = 2 * xs[prev[-1]] - xs[prev[-2]]
            else:
                x_guess = xs[prev[-1]].copy()
        elif fam.kind == "add_diagonal":
            pair = fam.base.marked_pair()
            x_guess = _inward_seed(sys, x_base, fam.edge, pair,
                                   float(-math.cos(target[fam.edge])))
        else:
            x_guess = x_base.copy()
        try:
            sol = solve_to_angles(fam.base, target, chart, initial_x=x_guess)
        except (NoConvergence, SingularJacobian, LeftStratum) as exc:
            last_good = grid[prev[-1]] if prev else base_t
            raise ContinuationStalled(last_good, str(exc)) from exc
        results[idx] = sol
        xs[idx] = sys.pack(sol)
        prev.append(idx)

    realizations = [results[i] for i in range(len(grid))]
    return SchlafliPathRecord(
        ts=np.array(grid),
        angles=np.array([r.angle_vector() for r in realizations]),
        lengths=np.array([r.edge_lengths() for r in realizations]),
        angle_rates=np.tile(rates, (len(grid), 1)),
        statuses=[r.check_membership().status for r in realizations],
        realizations=realizations,
    )


# ---------------------------------------------------------------------------
# closed-form boundary angle family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryDerivativeConfig:
    alpha: float
    t: float

    def __post_init__(self):
        if self.alpha <= 1.0:
            raise IdealPoint("alpha <= 1 puts the dual point at infinity")
        if self.t < 0.0:
            raise ValueError("t must be nonnegative")


def boundary_angle_formula(cfg: BoundaryDerivativeConfig) -> float:
    """Angle between the two faces of the add-diagonal family,
    arccos((1-a^2)/sqrt((a^2-1)(a^2+t^2-1)))."""
    a2 = cfg.alpha ** 2
    val = (1.0 - a2) / math.sqrt((a2 - 1.0) * (a2 + cfg.t ** 2 - 1.0))
    return math.acos(max(-1.0, min(1.0, val)))


def boundary_angle_derivative(alpha: float) -> float:
    """One-sided derivative of the boundary angle at t = 0."""
    if alpha <= 1.0:
        raise IdealPoint("alpha <= 1 puts the dual point at infinity")
    return -math.sqrt(1.0 / (alpha ** 2 - 1.0))


def add_diagonal_normal_form(record: SchlafliPathRecord, marked: int):
    """Extract (alpha, t grid, theta grid) from an add-diagonal run.

    alpha is the Klein distance of the pole of the coinciding plane at
    the boundary snapshot (reciprocal of the plane's distance from the
    origin); t is the parameter that puts each realized normal pair into
    the closed-form normalization with that alpha.
    """
    base = record.realizations[0]
    pair = base.marked_pair()
    u0 = base.planes[pair[0]].u
    if u0[0] <= 0:
        raise IdealPoint("coinciding plane does not separate the origin")
    alpha = math.sqrt(1.0 + u0[0] ** 2) / u0[0]
    ts = []
    thetas = []
    for r in record.realizations:
        c = geom.mink_inner(r.planes[pair[0]].u, r.planes[pair[1]].u)
        c = min(c, 1.0)
        ts.append(math.sqrt((alpha ** 2 - 1.0) * (1.0 - c * c)) / c)
        thetas.append(math.acos(-max(-1.0, c)))
    return alpha, np.array(ts), np.array(thetas)


# ---------------------------------------------------------------------------
# Stoker-style comparisons
# ---------------------------------------------------------------------------

EPS_THETA = 1e-9   # angle-match gate
EPS_LEN = 1e-7     # congruence tolerance


def _face_diagonal_pairs(graph, f: int) -> list[tuple[int, int]]:
    cyc = graph.faces[f].vertices
    k = len(cyc)
    out = []
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            out.append((cyc[i], cyc[j]))
    return out


def face_congruent(r1: Realization, f1: int, r2: Realization, f2: int,
                   tol: float = EPS_LEN) -> tuple[bool, float]:
    """Compare corresponding boundary-edge and diagonal lengths of two
    faces; a hyperbolic polygon is pinned by edge and diagonal lengths."""
    g1, g2 = r1.graph, r2.graph
    if g1.faces[f1].edges != g2.faces[f2].edges or \
            g1.faces[f1].vertices != g2.faces[f2].vertices:
        raise SkeletonMismatch("faces do not correspond under the graphs")
    p1 = r1.solve_vertices()
    p2 = r2.solve_vertices()
    dev = 0.0
    for a, b in zip(g1.faces[f1].vertices,
                    np.roll(g1.faces[f1].vertices, -1)):
        dev = max(dev, abs(geom.hyp_distance(p1[a], p1[b]) -
                           geom.hyp_distance(p2[a], p2[b])))
    for a, b in _face_diagonal_pairs(g1, f1):
        dev = max(dev, abs(geom.hyp_distance(p1[a], p1[b]) -
                           geom.hyp_distance(p2[a], p2[b])))
    return dev <= tol, dev


@dataclass
class StokerReport:
    edge_length_diffs: np.ndarray
    diagonal_diffs: dict[int, float]      # face -> max |diagonal length diff|
    face_congruences: dict[int, tuple[bool, float]]
    isometry_max_displacement: float

    @property
    def max_edge_diff(self) -> float:
        return float(np.max(np.abs(self.edge_length_diffs)))

    def all_faces_congruent(self) -> bool:
        return all(ok for ok, _ in self.face_congruences.values())


def stoker_compare(r1: Realization, r2: Realization,
                   eps_theta: float = EPS_THETA) -> StokerReport:
    """Edge-length / diagonal / congruence comparison of two realizations
    with the same skeleton and matching dihedral angles."""
    if r1.graph.edges != r2.graph.edges or r1.graph.n_vertices != r2.graph.n_vertices:
        raise SkeletonMismatch("graphs differ")
    a1, a2 = r1.angle_vector(), r2.angle_vector()
    if np.max(np.abs(a1 - a2)) >= eps_theta:
        raise AnglesDiffer(f"max angle difference {np.max(np.abs(a1 - a2)):.2e}")
    edge_diffs = r1.edge_lengths() - r2.edge_lengths()
    diag = {}
    cong = {}
    p1 = r1.solve_vertices()
    p2 = r2.solve_vertices()
    for f in range(r1.graph.n_faces):
        worst = 0.0
        for a, b in _face_diagonal_pairs(r1.graph, f):
            worst = max(worst, abs(geom.hyp_distance(p1[a], p1[b]) -
                                   geom.hyp_distance(p2[a], p2[b])))
        diag[f] = worst
        cong[f] = face_congruent(r1, f, r2, f)
    chart = default_chart(r1)
    g1 = gauge_fix(r1, chart)
    g2 = gauge_fix(r2, chart)
    disp = max(geom.hyp_distance(p, q)
               for p, q in zip(g1.solve_vertices(), g2.solve_vertices()))
    return StokerReport(edge_diffs, diag, cong, disp)
