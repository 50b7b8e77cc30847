"""Realizations of compact polyhedra as half-space tuples.

A Realization pairs a PlanarGraph (with its rotation system, hence a
face list) with one HalfSpace per face.  Vertices, dihedral angles and
edge lengths are derived quantities.  Membership in the space of
(weak-)skeleton realizations is decided by two families of conditions:

* coincidence: at a vertex of valence k, the k face planes meet in one
  point, expressed as k-3 vanishing 4x4 determinants of consecutive
  normals;
* interior: every vertex has positive signed distance (in the Klein
  model) from every non-incident face plane, with equality allowed only
  for the marked-edge face pair of a weak skeleton.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .errors import BadIncidence, DegenerateVertex, NotCompact, OriginOutside
from .geom import HalfSpace, HPoint
from .graphs import PlanarGraph

EPS_PSI = 1e-8       # determinant residual threshold (unit normals)
EPS_DELTA = 1e-8     # Klein signed-distance threshold
EPS_COPLANAR = 1e-8  # normal coincidence threshold for the marked pair


class SkeletonStatus(enum.Enum):
    STRICT = "StrictSkeleton"
    WEAK_BOUNDARY = "WeakBoundary"
    INVALID = "Invalid"


@dataclass(frozen=True)
class Violation:
    condition: str          # "coincidence" | "interior" | "distinct" | "compact"
    vertex: int | None
    face: int | None
    residual: float

    def __str__(self):
        return (f"{self.condition}(v={self.vertex}, f={self.face}, "
                f"residual={self.residual:.3e})")


@dataclass(frozen=True)
class SkeletonReport:
    status: SkeletonStatus
    violations: tuple[Violation, ...] = ()

    def pretty(self) -> str:
        lines = [f"status: {self.status.value}"]
        for v in self.violations:
            lines.append(f"  violated {v}")
        return "\n".join(lines)


def signed_distance(y, h: HalfSpace) -> float:
    """Euclidean Klein-model distance from y to the boundary plane of h,
    positive iff y lies inside the half-space."""
    n, c = h.klein_plane()
    y = np.asarray(y, dtype=float).reshape(3)
    return float((c - y @ n) / np.linalg.norm(n))


class Realization:
    """Face -> half-space assignment over a planar graph.

    ``planes[i]`` supports ``graph.faces[i]``; the assignment is
    immutable after construction.
    """

    def __init__(self, graph: PlanarGraph, planes):
        if len(planes) != graph.n_faces:
            raise ValueError(
                f"{len(planes)} planes for {graph.n_faces} faces")
        self.graph = graph
        self.planes: tuple[HalfSpace, ...] = tuple(planes)
        self._klein_vertices: np.ndarray | None = None

    # -- vertices ---------------------------------------------------------

    def incident_faces(self, v: int) -> list[int]:
        return self.graph.vertex_faces(v)

    def vertex_klein(self, v: int) -> np.ndarray:
        """Least-squares intersection of all incident face planes, in
        Klein coordinates."""
        faces = self.incident_faces(v)
        if len(faces) < 3:
            raise BadIncidence(f"vertex {v} lies on {len(faces)} faces")
        rows = []
        rhs = []
        for f in faces:
            n, c = self.planes[f].klein_plane()
            rows.append(n)
            rhs.append(c)
        a = np.array(rows)
        b = np.array(rhs)
        if np.linalg.matrix_rank(a, tol=1e-9) < 3:
            raise DegenerateVertex(f"normals at vertex {v} span < 3 dims")
        y, *_ = np.linalg.lstsq(a, b, rcond=None)
        return y

    def klein_vertices(self) -> np.ndarray:
        if self._klein_vertices is None:
            self._klein_vertices = np.array(
                [self.vertex_klein(v) for v in range(self.graph.n_vertices)])
        return self._klein_vertices

    def solve_vertices(self) -> list[HPoint]:
        """Vertex positions as hyperboloid points."""
        return [geom.klein_lift(y) for y in self.klein_vertices()]

    def vertex_solve_residual(self, v: int) -> float:
        y = self.klein_vertices()[v]
        return max(abs(signed_distance(y, self.planes[f]))
                   for f in self.incident_faces(v))

    # -- membership conditions ---------------------------------------------

    def vertex_coincidence_residuals(self, v: int) -> list[float]:
        """The k-3 determinants of consecutive normal 4-tuples at a
        vertex of valence k (rotation order); empty when k = 3."""
        faces = self.incident_faces(v)
        k = len(faces)
        if k < 3:
            raise BadIncidence(f"vertex {v} lies on {k} faces")
        out = []
        for j in range(k - 3):
            m = np.array([self.planes[faces[j + i]].u for i in range(4)])
            out.append(float(np.linalg.det(m)))
        return out

    def marked_pair(self) -> tuple[int, int] | None:
        """The two faces adjacent to the marked edge, if any."""
        e = self.graph.marked_edge
        if e is None:
            return None
        return self.graph.edge_faces(e)

    def marked_pair_coplanar(self, tol: float = EPS_COPLANAR) -> bool:
        pair = self.marked_pair()
        if pair is None:
            return False
        u1, u2 = self.planes[pair[0]].u, self.planes[pair[1]].u
        return bool(np.max(np.abs(u1 - u2)) < tol)

    def check_membership(self,
                         eps_psi: float = EPS_PSI,
                         eps_delta: float = EPS_DELTA) -> SkeletonReport:
        """Classify as StrictSkeleton / WeakBoundary / Invalid."""
        g = self.graph
        violations: list[Violation] = []
        pair = self.marked_pair()

        try:
            ys = self.klein_vertices()
        except (BadIncidence, DegenerateVertex):
            return SkeletonReport(SkeletonStatus.INVALID,
                                  (Violation("coincidence", None, None, np.inf),))

        # compactness
        for v in range(g.n_vertices):
            r = float(np.linalg.norm(ys[v]))
            if r >= 1.0 - 1e-9:
                violations.append(Violation("compact", v, None, r))

        # coincidence determinants, plus consistency of the least-squares
        # vertex with every incident plane
        for v in range(g.n_vertices):
            for psi in self.vertex_coincidence_residuals(v):
                if abs(psi) >= eps_psi:
                    violations.append(Violation("coincidence", v, None, abs(psi)))
            res = self.vertex_solve_residual(v)
            if res >= eps_psi:
                violations.append(Violation("coincidence", v, None, res))

        # pairwise distinct vertices
        for v in range(g.n_vertices):
            for w in range(v + 1, g.n_vertices):
                d = float(np.linalg.norm(ys[v] - ys[w]))
                if d <= eps_delta:
                    violations.append(Violation("distinct", v, w, d))

        # interior conditions
        weak_binding = False
        for v in range(g.n_vertices):
            inc = set(self.incident_faces(v))
            for f in range(g.n_faces):
                if f in inc:
                    continue
                delta = signed_distance(ys[v], self.planes[f])
                is_weak_slot = (pair is not None and
                                ((f == pair[0] and pair[1] in inc) or
                                 (f == pair[1] and pair[0] in inc)))
                if is_weak_slot:
                    if delta < -eps_delta:
                        violations.append(Violation("interior", v, f, delta))
                    elif abs(delta) <= eps_delta:
                        weak_binding = True
                elif delta <= eps_delta:
                    violations.append(Violation("interior", v, f, delta))

        if violations:
            return SkeletonReport(SkeletonStatus.INVALID, tuple(violations))

        if pair is not None and self.marked_pair_coplanar():
            # boundary stratum: the binding equality must be realized by
            # actually coincident planes (the paper's Pi_1 = Pi_2).
            return SkeletonReport(SkeletonStatus.WEAK_BOUNDARY)
        if pair is not None and weak_binding:
            # binding distance without coincident planes: degenerate
            return SkeletonReport(
                SkeletonStatus.INVALID,
                (Violation("interior", None, pair[0], 0.0),))
        return SkeletonReport(SkeletonStatus.STRICT)

    # -- derived per-edge data ----------------------------------------------

    def angle_vector(self) -> np.ndarray:
        """Per-edge interior dihedral angles, indexed by graph edge."""
        out = np.empty(self.graph.n_edges)
        for e in range(self.graph.n_edges):
            f1, f2 = self.graph.edge_faces(e)
            out[e] = geom.dihedral_angle(self.planes[f1], self.planes[f2])
        return out

    def edge_lengths(self) -> np.ndarray:
        """Per-edge hyperbolic lengths between endpoint vertices."""
        pts = self.solve_vertices()
        out = np.empty(self.graph.n_edges)
        for e, (a, b) in enumerate(self.graph.edges):
            out[e] = geom.hyp_distance(pts[a], pts[b])
        return out

    # -- transforms ------------------------------------------------------------

    def transformed(self, g) -> "Realization":
        """Apply a Lorentz isometry to every face plane."""
        return Realization(self.graph,
                           [geom.apply_isometry(g, h) for h in self.planes])

    def scaled(self, factor: float) -> "Realization":
        """Euclidean homothety of the Klein picture, centered at 0."""
        planes = []
        for h in self.planes:
            n, c = h.klein_plane()
            planes.append(HalfSpace.normalize(np.concatenate(([factor * c], n))))
        return Realization(self.graph, planes)


@dataclass(frozen=True)
class DualResult:
    realization: Realization
    scale: float                     # homothety factor applied to the poles
    face_of_primal_vertex: tuple[int, ...]  # dual face index per primal vertex
    vertex_of_primal_face: tuple[int, ...]  # dual vertex index per primal face
                                            # (coplanar marked pairs share one)


def polar_dual(r: Realization) -> DualResult:
    """Euclidean polar dual in the Klein ball, shrunk into radius 1/2.

    The pole of the plane {y.n = c} is n/c; the dual face supported at a
    primal vertex v is the plane {y.v = 1}.  All poles are rescaled by
    1/(2*rho), rho the pole circumradius, so the dual is a compact
    hyperbolic polyhedron.  For a weak-boundary realization the two
    coplanar faces share one pole and the dual graph is the dual of the
    graph with the marked edge removed.
    """
    g = r.graph
    offsets = [h.klein_plane()[1] for h in r.planes]
    if min(offsets) <= 1e-12:
        raise OriginOutside("origin is not interior to every half-space")
    poles = np.array([h.klein_plane()[0] / h.klein_plane()[1] for h in r.planes])
    rho = float(np.max(np.linalg.norm(poles, axis=1)))
    lam = 1.0 / (2.0 * rho)

    weak = r.marked_pair_coplanar()
    if weak:
        base = g.without_edge(g.marked_edge)
        kept = [i for i in range(g.n_edges) if i != g.marked_edge]
        # supporting primal face for each base face, matched by edge set
        # (the merged face is the union of the two marked faces)
        face_plane = []
        for f in base.faces:
            orig_edges = {kept[e] for e in f.edges}
            match = None
            for i, pf in enumerate(g.faces):
                if set(pf.edges) == orig_edges:
                    match = i
                    break
            if match is None:
                p1, p2 = g.edge_faces(g.marked_edge)
                union = (set(g.faces[p1].edges) | set(g.faces[p2].edges)) - {g.marked_edge}
                if union == orig_edges:
                    match = p1
            if match is None:
                raise ValueError("could not match base face to a primal face")
            face_plane.append(match)
        dual_graph = base.dual()
        dual_poles = lam * poles[np.array(face_plane)]
        # map each primal face to its dual vertex
        vertex_of_face = [0] * g.n_faces
        p1, p2 = g.edge_faces(g.marked_edge)
        for dv, pf in enumerate(face_plane):
            vertex_of_face[pf] = dv
            if pf in (p1, p2):
                vertex_of_face[p1] = dv
                vertex_of_face[p2] = dv
    else:
        base = g
        dual_graph = g.dual()
        dual_poles = lam * poles
        vertex_of_face = list(range(g.n_faces))

    # each dual face surrounds one primal vertex: it is the unique vertex
    # common to all the primal faces listed around that dual face
    ys = r.klein_vertices()
    dual_planes = [None] * dual_graph.n_faces
    face_of_vertex = [None] * g.n_vertices
    for df, face in enumerate(dual_graph.faces):
        prim_faces = [face_plane[i] for i in face.vertices] if weak else list(face.vertices)
        common = set(g.faces[prim_faces[0]].vertices)
        for pf in prim_faces[1:]:
            common &= set(g.faces[pf].vertices)
        if len(common) != 1:
            raise ValueError(f"dual face {df} does not surround a unique vertex")
        v = common.pop()
        face_of_vertex[v] = df
        n = ys[v]
        if np.linalg.norm(n) <= lam + 1e-12:
            raise OriginOutside(
                "a primal vertex is too close to the center for dual scaling")
        dual_planes[df] = HalfSpace.normalize(np.concatenate(([lam], n)))

    dual = Realization(dual_graph, dual_planes)
    return DualResult(dual, lam, tuple(face_of_vertex), tuple(vertex_of_face))
