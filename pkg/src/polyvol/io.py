"""Polyhedron file format (structured text).

Layout::

    # polyvol polyhedron v1
    [graph]
    vertices 4
    edge 0 1
    ...
    rotation 0: 0 1 2
    ...
    marked_edge 12          # optional
    [planes]
    plane 0: <x0> <x1> <x2> <x3>

Plane components are written with 17 significant digits.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .geom import HalfSpace
from .graphs import PlanarGraph
from .polyhedron import Realization

HEADER = "# polyvol polyhedron v1"


def dumps(r: Realization) -> str:
    g = r.graph
    lines = [HEADER, "[graph]", f"vertices {g.n_vertices}"]
    for a, b in g.edges:
        lines.append(f"edge {a} {b}")
    for v, rot in enumerate(g.rotation):
        lines.append(f"rotation {v}: " + " ".join(map(str, rot)))
    if g.marked_edge is not None:
        lines.append(f"marked_edge {g.marked_edge}")
    lines.append("[planes]")
    for i, h in enumerate(r.planes):
        comps = " ".join(f"{x:.17g}" for x in h.u)
        lines.append(f"plane {i}: {comps}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Realization:
    section = None
    n_vertices = None
    edges: list[tuple[int, int]] = []
    rotation: dict[int, list[int]] = {}
    marked = None
    planes: dict[int, np.ndarray] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[graph]":
            section = "graph"
            continue
        if line == "[planes]":
            section = "planes"
            continue
        if section == "graph":
            if line.startswith("vertices"):
                n_vertices = int(line.split()[1])
            elif line.startswith("edge "):
                _, a, b = line.split()
                edges.append((int(a), int(b)))
            elif line.startswith("rotation"):
                head, rest = line.split(":", 1)
                v = int(head.split()[1])
                rotation[v] = [int(x) for x in rest.split()]
            elif line.startswith("marked_edge"):
                marked = int(line.split()[1])
            else:
                raise ValueError(f"unrecognized graph line: {raw!r}")
        elif section == "planes":
            if not line.startswith("plane"):
                raise ValueError(f"unrecognized planes line: {raw!r}")
            head, rest = line.split(":", 1)
            i = int(head.split()[1])
            planes[i] = np.array([float(x) for x in rest.split()])
        else:
            raise ValueError(f"content before any section: {raw!r}")
    if n_vertices is None:
        raise ValueError("missing vertex count")
    rot_list = [rotation[v] for v in range(n_vertices)]
    graph = PlanarGraph(n_vertices, edges, rot_list, marked_edge=marked)
    graph.validate_embedding()
    plane_list = [HalfSpace(planes[i]) for i in range(len(planes))]
    return Realization(graph, plane_list)


def save(r: Realization, path) -> None:
    Path(path).write_text(dumps(r))


def load(path) -> Realization:
    return loads(Path(path).read_text())
