import itertools

import networkx as nx
import pytest

from polyvol.catalog import catalog_build
from polyvol.graphs import PlanarGraph, steinitz_check

TET_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
TET_ROTATION = [[0, 1, 2], [0, 4, 3], [1, 3, 5], [2, 5, 4]]


def tet_graph():
    return PlanarGraph(4, TET_EDGES, TET_ROTATION)


def brute_force_steinitz(g: PlanarGraph) -> bool:
    """Independent oracle: planarity plus exhaustive <=2-vertex cuts."""
    if g.n_vertices <= 3:
        return False
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n_vertices))
    nxg.add_edges_from(g.edges)
    if not nx.is_connected(nxg):
        return False
    if not nx.check_planarity(nxg)[0]:
        return False
    for k in (1, 2):
        for cut in itertools.combinations(range(g.n_vertices), k):
            h = nxg.copy()
            h.remove_nodes_from(cut)
            if h.number_of_nodes() and not nx.is_connected(h):
                return False
    return True


def test_rotation_validation():
    bad = [[0, 1], [0, 4, 3], [1, 3, 5], [2, 5, 4]]   # vertex 0 missing edge 2
    with pytest.raises(ValueError):
        PlanarGraph(4, TET_EDGES, bad)
    with pytest.raises(ValueError):
        PlanarGraph(2, [(0, 0)], [[0], [0]])           # loop


def test_euler_formula_on_catalog():
    for entry in catalog_build(verify=False):
        g = entry.realization.graph
        assert g.n_vertices - g.n_edges + len(g.faces) == 2


def test_tet_faces():
    g = tet_graph()
    assert len(g.faces) == 4
    assert all(len(f.vertices) == 3 for f in g.faces)


def test_face_walk_closes():
    for entry in catalog_build(verify=False):
        g = entry.realization.graph
        # every dart lies on exactly one face
        dart_count = sum(len(f.edges) for f in g.faces)
        assert dart_count == 2 * g.n_edges


def test_steinitz_accepts_catalog():
    for entry in catalog_build(verify=False):
        ok, cert = steinitz_check(entry.realization.graph)
        assert ok, f"{entry.name}: {cert.reason}"


def test_steinitz_rejects_small():
    g = PlanarGraph(3, [(0, 1), (1, 2), (2, 0)], [[0, 2], [0, 1], [1, 2]])
    ok, cert = steinitz_check(g)
    assert not ok and "three or fewer" in cert.reason


def make_cut_pair_graph():
    """Two tetrahedra sharing an edge (0,1): vertices {0,1} separate."""
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
             (0, 4), (0, 5), (1, 4), (1, 5), (4, 5)]
    rotation = [sorted(i for i, e in enumerate(edges) if v in e)
                for v in range(6)]
    return PlanarGraph(6, edges, rotation)


def test_steinitz_rejects_separating_pair():
    g = make_cut_pair_graph()
    ok, cert = steinitz_check(g)
    assert not ok
    assert cert.separating_pair == (0, 1)


def test_steinitz_matches_brute_force():
    graphs = [entry.realization.graph for entry in catalog_build(verify=False)]
    graphs.append(make_cut_pair_graph())
    graphs.append(PlanarGraph(4, TET_EDGES[:-1],
                              [[0, 1, 2], [0, 4, 3], [1, 3], [2, 4]]))
    for g in graphs:
        assert g.n_vertices <= 10
        ok, _ = steinitz_check(g)
        assert ok == brute_force_steinitz(g)


def test_marked_edge_metadata(cube_diagonal):
    g = cube_diagonal.graph
    assert g.marked_edge is not None
    a, b = g.edges[g.marked_edge]
    assert a != b
