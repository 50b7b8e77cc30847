import numpy as np
import pytest

from polyvol import io
from polyvol.catalog import catalog_build


def test_roundtrip_exact(entries, tmp_path):
    for entry in entries:
        path = tmp_path / f"{entry.name}.poly"
        io.save(entry.realization, path)
        back = io.load(path)
        g0, g1 = entry.realization.graph, back.graph
        assert g0.edges == g1.edges
        assert g0.rotation == g1.rotation
        assert g0.marked_edge == g1.marked_edge
        # 17 significant digits round-trip doubles exactly
        for h0, h1 in zip(entry.realization.planes, back.planes):
            assert np.array_equal(h0.u, h1.u)


def test_dumps_stable(tet_medium):
    assert io.dumps(tet_medium) == io.dumps(tet_medium)
    assert io.dumps(tet_medium).startswith(io.HEADER)


def test_loads_rejects_garbage():
    with pytest.raises(ValueError):
        io.loads("not a polyhedron file\n")
    with pytest.raises(ValueError):
        io.loads("[graph]\nwidgets 4\n")


def test_loads_rejects_missing_vertices():
    with pytest.raises(ValueError):
        io.loads("[graph]\nedge 0 1\n")
