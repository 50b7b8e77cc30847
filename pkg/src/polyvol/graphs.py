"""Abstract 1-skeleta: planar multigraphs with a rotation system.

A dart is a pair ``(edge_index, direction)``; direction 0 travels from
``edges[e][0]`` to ``edges[e][1]``.  Faces are the orbits of the
face-successor permutation induced by the rotation system; a valid
embedding of a connected graph satisfies V - E + F = 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

Dart = tuple[int, int]


@dataclass(frozen=True)
class Face:
    """One face of the embedding: vertices and edges in cyclic order."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


class PlanarGraph:
    """Planar multigraph with rotation system and optional marked edge.

    Parameters
    ----------
    n_vertices : number of vertices (indexed 0..n-1)
    edges : list of (a, b) pairs, a != b (parallel edges allowed)
    rotation : per vertex, the incident edge indices in cyclic order
    marked_edge : optional edge index (the diagonal of a weak skeleton)
    """

    def __init__(self, n_vertices: int, edges, rotation, marked_edge: int | None = None):
        self.n_vertices = int(n_vertices)
        self.edges = [tuple(int(x) for x in e) for e in edges]
        for a, b in self.edges:
            if a == b:
                raise ValueError("loops are not supported")
        self.rotation = [list(map(int, rot)) for rot in rotation]
        if len(self.rotation) != self.n_vertices:
            raise ValueError("rotation system size mismatch")
        for v, rot in enumerate(self.rotation):
            want = sorted(i for i, (a, b) in enumerate(self.edges) if v in (a, b))
            if sorted(rot) != want:
                raise ValueError(f"rotation at vertex {v} does not list its edges")
        self.marked_edge = marked_edge
        self._faces: list[Face] | None = None
        self._dart_face: dict[Dart, int] | None = None

    # -- basic structure ------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.edges[e]

    def dart_tail(self, d: Dart) -> int:
        e, s = d
        return self.edges[e][s]

    def dart_head(self, d: Dart) -> int:
        e, s = d
        return self.edges[e][1 - s]

    def _next_dart(self, d: Dart) -> Dart:
        """Face successor: arrive via d, leave along the rotation
        successor of d's edge at the head vertex."""
        w = self.dart_head(d)
        rot = self.rotation[w]
        i = rot.index(d[0])
        e2 = rot[(i + 1) % len(rot)]
        return (e2, 0 if self.edges[e2][0] == w else 1)

    # -- faces -----------------------------------------------------------

    def _trace_faces(self) -> None:
        seen: set[Dart] = set()
        faces: list[Face] = []
        dart_face: dict[Dart, int] = {}
        for e, s in itertools.product(range(self.n_edges), (0, 1)):
            d0 = (e, s)
            if d0 in seen:
                continue
            cycle = []
            d = d0
            while True:
                cycle.append(d)
                seen.add(d)
                d = self._next_dart(d)
                if d == d0:
                    break
            idx = len(faces)
            faces.append(Face(
                vertices=tuple(self.dart_tail(d) for d in cycle),
                edges=tuple(d[0] for d in cycle),
            ))
            for d in cycle:
                dart_face[d] = idx
        self._faces = faces
        self._dart_face = dart_face

    @property
    def faces(self) -> list[Face]:
        if self._faces is None:
            self._trace_faces()
        return self._faces

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def edge_faces(self, e: int) -> tuple[int, int]:
        """The two faces adjacent to edge e (equal only for degenerate
        embeddings)."""
        if self._dart_face is None:
            self._trace_faces()
        return (self._dart_face[(e, 0)], self._dart_face[(e, 1)])

    def vertex_faces(self, v: int) -> list[int]:
        """Faces incident to v, in rotation order (one per corner)."""
        if self._dart_face is None:
            self._trace_faces()
        out = []
        for e in self.rotation[v]:
            s = 0 if self.edges[e][0] == v else 1
            out.append(self._dart_face[(e, s)])
        return out

    def vertex_edges(self, v: int) -> list[int]:
        return list(self.rotation[v])

    # -- derived graphs ---------------------------------------------------

    def without_edge(self, e: int) -> "PlanarGraph":
        """The graph minus edge e, rotation system inherited."""
        remap = {old: new for new, old in enumerate(i for i in range(self.n_edges) if i != e)}
        edges = [ed for i, ed in enumerate(self.edges) if i != e]
        rotation = [[remap[i] for i in rot if i != e] for rot in self.rotation]
        return PlanarGraph(self.n_vertices, edges, rotation)

    def dual(self) -> "PlanarGraph":
        """Planar dual: one vertex per face, one edge per edge; the
        rotation at a dual vertex is the cyclic edge order of the face."""
        rotation = [list(f.edges) for f in self.faces]
        edges = [self.edge_faces(e) for e in range(self.n_edges)]
        return PlanarGraph(self.n_faces, edges, rotation)

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n_vertices))
        for i, (a, b) in enumerate(self.edges):
            g.add_edge(a, b, key=i)
        return g

    def validate_embedding(self) -> None:
        if self.euler_characteristic() != 2:
            raise ValueError(
                f"rotation system has Euler characteristic {self.euler_characteristic()}")
        if self.marked_edge is not None:
            e = self.marked_edge
            a, b = self.edges[e]
            g2 = self.without_edge(e)
            if not any(a in f.vertices and b in f.vertices for f in g2.faces):
                raise ValueError("marked edge endpoints share no face of graph-minus-e")


@dataclass
class SteinitzCertificate:
    ok: bool
    reason: str = ""
    separating_pair: tuple[int, int] | None = None
    separating_vertex: int | None = None


def steinitz_check(g: PlanarGraph) -> tuple[bool, SteinitzCertificate]:
    """Planar + 3-connected test with a failure witness.

    True iff the graph has more than three vertices, is planar, and no
    set of at most two vertices disconnects it.
    """
    if g.n_vertices <= 3:
        return False, SteinitzCertificate(False, "has three or fewer vertices")
    nxg = g.to_networkx()
    if not nx.is_connected(nxg):
        return False, SteinitzCertificate(False, "disconnected")
    planar, _ = nx.check_planarity(nxg)
    if not planar:
        return False, SteinitzCertificate(False, "non-planar")
    simple = nx.Graph(nxg)
    for v in simple.nodes:
        h = simple.copy()
        h.remove_node(v)
        if h.number_of_nodes() and not nx.is_connected(h):
            return False, SteinitzCertificate(False, "cut vertex", separating_vertex=v)
    for a, b in itertools.combinations(simple.nodes, 2):
        h = simple.copy()
        h.remove_nodes_from((a, b))
        if h.number_of_nodes() and not nx.is_connected(h):
            return False, SteinitzCertificate(False, "separating pair",
                                              separating_pair=(a, b))
    return True, SteinitzCertificate(True, "planar and 3-connected")
