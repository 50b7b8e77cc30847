"""Hyperbolic volume oracles.

In the Klein ball a compact polyhedron is a Euclidean convex polytope
and its hyperbolic volume is the integral of (1-|y|^2)^{-2} over it.
Two independent oracles are provided: deterministic adaptive quadrature
over a simplex decomposition, and rejection-sampling Monte Carlo.  A
third route integrates the Schlafli identity along deformation paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexMismatch, NotCompact, PathBroken
from .polyhedron import Realization, SkeletonStatus

def _grundmann_moller(s: int, n: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Grundmann-Moller rule of degree 2s+1 on the n-simplex.

    Returns (barycentric points, weights) with weights summing to 1.
    """
    d = 2 * s + 1
    pts = []
    wts = []
    for i in range(s + 1):
        denom = d + n - 2 * i
        w = ((-1) ** i * 2.0 ** (-2 * s) * denom ** d
             / (math.factorial(i) * math.factorial(d + n - i)))
        for k in _compositions(s - i, n + 1):
            pts.append([(2 * kj + 1) / denom for kj in k])
            wts.append(w)
    pts = np.array(pts)
    wts = np.array(wts)
    wts /= wts.sum()
    return pts, wts


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# degree-5 (15-point) and degree-3 (5-point) rules on the tetrahedron
_RULE_BARY, _RULE_W = _grundmann_moller(2)


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    method: str                 # "Quadrature" | "MonteCarlo" | "Schlafli"
    error_bound: float          # absolute; 1 sigma for Monte Carlo
    samples: int = 0            # MC samples or quadrature cells used

    def __post_init__(self):
        if self.value < -1e-12 or self.error_bound < 0:
            raise ValueError("volume and error bound must be nonnegative")


def klein_density(y: np.ndarray) -> np.ndarray:
    """Hyperbolic volume element (1-|y|^2)^{-2} in the Klein ball."""
    r2 = np.sum(np.square(y), axis=-1)
    return (1.0 - r2) ** -2


def _check_compact(r: Realization) -> np.ndarray:
    ys = r.klein_vertices()
    radii = np.linalg.norm(ys, axis=1)
    if np.any(radii >= 1.0 - 1e-9):
        raise NotCompact(f"max vertex radius {radii.max()}")
    return ys


def simplex_decomposition(r: Realization) -> np.ndarray:
    """Fan decomposition from the vertex centroid over triangulated
    boundary faces; shape (n, 4, 3)."""
    ys = _check_compact(r)
    center = ys.mean(axis=0)
    simplices = []
    for face in r.graph.faces:
        cyc = face.vertices
        for i in range(1, len(cyc) - 1):
            simplices.append([center, ys[cyc[0]], ys[cyc[i]], ys[cyc[i + 1]]])
    return np.array(simplices)


def _simplex_volumes(s: np.ndarray) -> np.ndarray:
    d = s[:, 1:] - s[:, :1]
    return np.abs(np.linalg.det(d)) / 6.0


def _rule(s: np.ndarray, f) -> np.ndarray:
    """Degree-5 rule applied to a batch of simplices (n,4,3)."""
    pts = np.einsum("qj,njk->nqk", _RULE_BARY, s)
    vals = f(pts)
    return _simplex_volumes(s) * (vals @ _RULE_W)


def _subdivide(s: np.ndarray) -> np.ndarray:
    """Red refinement of each simplex into 8 children; (n,4,3)->(8n,4,3)."""
    v0, v1, v2, v3 = s[:, 0], s[:, 1], s[:, 2], s[:, 3]
    m01 = 0.5 * (v0 + v1)
    m02 = 0.5 * (v0 + v2)
    m03 = 0.5 * (v0 + v3)
    m12 = 0.5 * (v1 + v2)
    m13 = 0.5 * (v1 + v3)
    m23 = 0.5 * (v2 + v3)
    children = [
        (v0, m01, m02, m03), (m01, v1, m12, m13),
        (m02, m12, v2, m23), (m03, m13, m23, v3),
        (m01, m02, m03, m13), (m01, m02, m12, m13),
        (m02, m03, m13, m23), (m02, m12, m13, m23),
    ]
    return np.concatenate([np.stack(c, axis=1) for c in children])


def integrate_polytope(simplices: np.ndarray, f, tol: float = 1e-6,
                       max_levels: int = 22) -> tuple[float, float, int]:
    """Adaptive level-synchronous subdivision quadrature.

    Returns (value, error_bound, cells).  A cell is accepted when the
    coarse/fine Richardson discrepancy is below its volume share of the
    global tolerance.
    """
    total_vol = float(_simplex_volumes(simplices).sum())
    active = simplices
    value = 0.0
    err = 0.0
    cells = 0
    for _ in range(max_levels):
        if len(active) == 0:
            break
        coarse = _rule(active, f)
        kids = _subdivide(active)
        fine = _rule(kids, f).reshape(8, -1).sum(axis=0)
        disc = np.abs(fine - coarse)
        share = tol * _simplex_volumes(active) / total_vol
        done = disc <= share
        value += float(fine[done].sum())
        err += float(disc[done].sum())
        cells += int(done.sum())
        active = kids.reshape(8, -1, 4, 3)[:, ~done].reshape(-1, 4, 3)
    if len(active):
        # tolerance not reached at max depth: accept the fine estimate
        coarse = _rule(active, f)
        value += float(coarse.sum())
        err += float(np.abs(coarse).sum() * 1e-10 + tol)
        cells += len(active)
    return value, err, cells


def volume_quadrature(r: Realization, tol: float = 1e-6,
                      max_levels: int = 22) -> VolumeEstimate:
    """Deterministic hyperbolic volume by adaptive simplex quadrature."""
    simplices = simplex_decomposition(r)
    value, err, cells = integrate_polytope(simplices, klein_density,
                                           tol=tol, max_levels=max_levels)
    return VolumeEstimate(value, "Quadrature", err, cells)


def volume_mc(r: Realization, n_samples: int = 10_000_000,
              seed: int = 0, chunk: int = 1 << 20) -> VolumeEstimate:
    """Rejection-sampling Monte Carlo volume with a counter-based
    generator; bit-reproducible for a fixed seed and chunk size."""
    ys = _check_compact(r)
    lo = ys.min(axis=0)
    hi = ys.max(axis=0)
    box_vol = float(np.prod(hi - lo))
    normals = np.array([h.klein_plane()[0] for h in r.planes])
    offsets = np.array([h.klein_plane()[1] for h in r.planes])

    sums: list[float] = []
    sqsums: list[float] = []
    done = 0
    idx = 0
    base = np.random.Philox(key=seed)
    while done < n_samples:
        m = min(chunk, n_samples - done)
        rng = np.random.Generator(base.jumped(idx))
        y = lo + (hi - lo) * rng.random((m, 3))
        inside = np.all(y @ normals.T <= offsets, axis=1)
        g = np.where(inside, klein_density(y), 0.0)
        sums.append(float(g.sum()))
        sqsums.append(float(np.square(g).sum()))
        done += m
        idx += 1
    s1 = math.fsum(sums)
    s2 = math.fsum(sqsums)
    mean = s1 / n_samples
    var = max(s2 / n_samples - mean * mean, 0.0)
    sigma = box_vol * math.sqrt(var / max(n_samples - 1, 1))
    return VolumeEstimate(box_vol * mean, "MonteCarlo", sigma, n_samples)


def schlafli_rate(lengths, angle_rates) -> float:
    """Instantaneous Schlafli volume derivative -(1/2) sum_i l_i dtheta_i."""
    lengths = np.asarray(lengths, dtype=float)
    angle_rates = np.asarray(angle_rates, dtype=float)
    if lengths.shape != angle_rates.shape:
        raise IndexMismatch(
            f"lengths {lengths.shape} vs rates {angle_rates.shape}")
    return float(-0.5 * np.sum(lengths * angle_rates))


@dataclass
class SchlafliPathRecord:
    """Snapshot record of a deformation path on a uniform-in-t grid."""

    ts: np.ndarray                     # strictly increasing grid
    angles: np.ndarray                 # (m, E)
    lengths: np.ndarray                # (m, E)
    angle_rates: np.ndarray            # (m, E), dTheta/dt along the family
    statuses: list[SkeletonStatus]
    realizations: list[Realization] = field(default_factory=list)

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        if len(self.ts) > 1 and np.any(np.diff(self.ts) <= 0):
            raise ValueError("grid must be strictly increasing")

    def rates(self) -> np.ndarray:
        return np.array([schlafli_rate(l, a)
                         for l, a in zip(self.lengths, self.angle_rates)])

    def volume_difference(self) -> float:
        return _integrate_grid(self.ts, self.rates())


def _integrate_grid(ts: np.ndarray, vals: np.ndarray) -> float:
    """Composite Simpson on a uniform grid (3/8 patch for an odd number
    of intervals); 4th-order accurate."""
    n = len(ts) - 1
    if n == 0:
        return 0.0
    if n == 1:
        return float(0.5 * (ts[1] - ts[0]) * (vals[0] + vals[1]))
    h = (ts[-1] - ts[0]) / n
    if not np.allclose(np.diff(ts), h, rtol=1e-9, atol=1e-12):
        raise ValueError("grid is not uniform")
    total = 0.0
    start = 0
    if n % 2 == 1:
        if n >= 3:
            total += 3.0 * h / 8.0 * (vals[0] + 3 * vals[1] + 3 * vals[2] + vals[3])
            start = 3
        else:
            return float(np.trapz(vals, ts))
    seg = vals[start:]
    m = len(seg) - 1
    total += h / 3.0 * (seg[0] + seg[-1] + 4 * seg[1:-1:2].sum() + 2 * seg[2:-1:2].sum())
    return float(total)


def volume_by_continuation(path: SchlafliPathRecord, v0: float) -> float:
    """Integrate the Schlafli rate along the path starting from v0."""
    for i, st in enumerate(path.statuses):
        if st is SkeletonStatus.INVALID:
            raise PathBroken(f"invalid realization at grid index {i}")
    return v0 + path.volume_difference()
