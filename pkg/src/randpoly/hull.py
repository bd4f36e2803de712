"""Facet enumeration for simplicial polytopes spanned by points in R^n.

``beneath_beyond`` inserts points one at a time and keeps the full facet
list plus ridge adjacency (the double description) of the current hull.
``brute_force_facets`` tests every n-subset and is the correctness oracle.

Vertex ids index the cloud's rows.  When the origin is added as an extra
point (the polytope ``conv(0, a_1, ..., a_m)``) it gets id ``m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DegenerateInputError, OriginNotInteriorError, ValidationError
from .sampler import PointCloud

__all__ = [
    "FacetRecord",
    "Polytope",
    "HullStats",
    "hyperplanes",
    "beneath_beyond",
    "brute_force_facets",
    "hausdorff_to_sphere",
    "vertex_degrees",
    "contains_origin",
    "polytope_edges",
]

SIDE_TOL = 1e-9
DET_TOL = 1e-12
# sidedness ties; float error in <b, a> - h is ~1e-16, genuine gaps on dense samples reach 1e-10
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FacetRecord:
    """A simplex facet: sorted vertex ids, outward unit normal and offset.

    ``offset`` is signed: it is the distance from the origin to the facet
    hyperplane when the origin is inside, and negative for facets that face
    the origin.
    """

    vertices: tuple
    normal: np.ndarray
    offset: float

    def __repr__(self):
        return f"FacetRecord(vertices={self.vertices}, offset={self.offset:.6g})"


@dataclass(frozen=True, eq=False)
class Polytope:
    cloud: PointCloud
    includes_origin: bool
    facets: tuple
    ridges: dict

    @property
    def n(self):
        return self.cloud.n

    @property
    def origin_id(self):
        return self.cloud.m if self.includes_origin else None

    @property
    def points(self):
        """Cloud coordinates, with the origin appended when it is a generator."""
        return _augmented(self.cloud, self.includes_origin)

    @property
    def normals(self):
        return np.array([f.normal for f in self.facets]).reshape(len(self.facets), self.n)

    @property
    def offsets(self):
        return np.array([f.offset for f in self.facets])

    @property
    def vertex_array(self):
        return np.array([f.vertices for f in self.facets], dtype=int).reshape(len(self.facets), self.n)

    def facet_set(self):
        return frozenset(f.vertices for f in self.facets)

    def __len__(self):
        return len(self.facets)

    @classmethod
    def from_facets(cls, cloud, includes_origin, facets):
        facets = tuple(sorted(facets, key=lambda f: f.vertices))
        ridges = {}
        for idx, f in enumerate(facets):
            for r in _ridges_of(f.vertices):
                ridges.setdefault(r, []).append(idx)
        ridges = {r: tuple(v) for r, v in ridges.items()}
        return cls(cloud, bool(includes_origin), facets, ridges)


@dataclass
class HullStats:
    """Operation counters for one Beneath-Beyond run.

    ``f_counts[t]`` is the number of facets after the (t+1)-th inserted
    point, starting with the initial simplex.
    """

    sidedness_tests: int = 0
    facets_created: int = 0
    facets_deleted: int = 0
    skipped_points: int = 0
    f_counts: list = field(default_factory=list)

    def as_dict(self):
        return {
            "sidedness_tests": self.sidedness_tests,
            "facets_created": self.facets_created,
            "facets_deleted": self.facets_deleted,
            "skipped_points": self.skipped_points,
            "f_count": self.f_counts[-1] if self.f_counts else 0,
        }


def _augmented(cloud, includes_origin):
    if includes_origin:
        return np.vstack([cloud.points, np.zeros((1, cloud.n))])
    return np.asarray(cloud.points)


def _ridges_of(verts):
    return [verts[:i] + verts[i + 1:] for i in range(len(verts))]


def hyperplanes(X):
    """Unnormalized normals of the hyperplanes through each row-simplex of ``X``.

    ``X`` has shape (B, n, n): B simplices of n points in R^n.  Returns the
    generalized cross product of the edge vectors; its norm is (n-1)! times
    the (n-1)-volume of the simplex.
    """
    X = np.asarray(X, dtype=float)
    B, n, _ = X.shape
    M = X[:, 1:, :] - X[:, :1, :]
    if n == 2:
        return np.stack([M[:, 0, 1], -M[:, 0, 0]], axis=1)
    if n == 3:
        return np.cross(M[:, 0, :], M[:, 1, :])
    N = np.empty((B, n))
    cols = np.arange(n)
    for i in range(n):
        N[:, i] = (-1) ** i * np.linalg.det(M[:, :, cols != i])
    return N


def _unit_hyperplanes(X):
    N = hyperplanes(X)
    norm = np.linalg.norm(N, axis=1)
    if np.any(norm <= DET_TOL):
        raise DegenerateInputError("degenerate-input: simplex with near-zero spanning determinant")
    N = N / norm[:, None]
    h = np.einsum("bi,bi->b", N, X[:, 0, :])
    return N, h


class _FacetStore:
    """Growable facet arrays plus the ridge -> cofacets map."""

    def __init__(self, n, capacity=64):
        self.n = n
        self.normals = np.empty((capacity, n))
        self.offsets = np.empty(capacity)
        self.alive = np.zeros(capacity, dtype=bool)
        self.verts = []
        self.size = 0
        self.n_alive = 0
        self.ridges = {}

    def add(self, verts_list, N, h):
        k = len(verts_list)
        need = self.size + k
        if need > len(self.offsets):
            cap = max(2 * len(self.offsets), need)
            normals = np.empty((cap, self.n))
            offsets = np.empty(cap)
            alive = np.zeros(cap, dtype=bool)
            normals[: self.size] = self.normals[: self.size]
            offsets[: self.size] = self.offsets[: self.size]
            alive[: self.size] = self.alive[: self.size]
            self.normals, self.offsets, self.alive = normals, offsets, alive
        self.normals[self.size:need] = N
        self.offsets[self.size:need] = h
        self.alive[self.size:need] = True
        for fid, verts in enumerate(verts_list, start=self.size):
            self.verts.append(verts)
            for r in _ridges_of(verts):
                self.ridges.setdefault(r, []).append(fid)
        self.size = need
        self.n_alive += k

    def delete(self, fids):
        for fid in fids:
            self.alive[fid] = False
            for r in _ridges_of(self.verts[fid]):
                cof = self.ridges[r]
                cof.remove(fid)
                if not cof:
                    del self.ridges[r]
        self.n_alive -= len(fids)

    def compact(self):
        keep = np.flatnonzero(self.alive[: self.size])
        remap = {int(old): new for new, old in enumerate(keep)}
        self.normals[: len(keep)] = self.normals[keep]
        self.offsets[: len(keep)] = self.offsets[keep]
        self.alive[:] = False
        self.alive[: len(keep)] = True
        self.verts = [self.verts[i] for i in keep]
        self.ridges = {r: [remap[f] for f in cof] for r, cof in self.ridges.items()}
        self.size = len(keep)

    def live_ids(self):
        return np.flatnonzero(self.alive[: self.size])


def beneath_beyond(cloud, includes_origin=False, step_hook=None):
    """Incremental (Beneath-Beyond) convex hull of a point cloud.

    Points are inserted in cloud order after an initial simplex made of the
    first n+1 points (or the origin and the first n points when
    ``includes_origin``).  Every live facet is tested against each new point;
    visible facets are deleted and each horizon ridge is coned to the new
    point.

    Parameters
    ----------
    cloud : PointCloud
    includes_origin : bool
        Build ``conv(0, a_1, ..., a_m)`` instead of ``conv(a_1, ..., a_m)``.
    step_hook : callable, optional
        Called as ``step_hook(point_id, ridges)`` after every insertion, where
        ``ridges`` maps each ridge to the list of its live cofacets.

    Returns
    -------
    (Polytope, HullStats)

    Raises
    ------
    DegenerateInputError
        If a simplex is flat or a point lies within tolerance of a facet
        hyperplane.
    """
    n, m = cloud.n, cloud.m
    if includes_origin:
        if m < n:
            raise ValidationError(f"need at least n={n} points with the origin, got {m}")
    elif m < n + 1:
        raise ValidationError(f"need at least n+1={n + 1} points, got {m}")
    P = _augmented(cloud, includes_origin)
    if includes_origin:
        init = [m] + list(range(n))
        order = list(range(n, m))
    else:
        init = list(range(n + 1))
        order = list(range(n + 1, m))

    stats = HullStats()
    store = _FacetStore(n, capacity=max(64, 4 * m))
    centre = P[init].mean(axis=0)
    verts0 = [tuple(sorted(c)) for c in combinations(init, n)]
    N, h = _unit_hyperplanes(P[np.array(verts0)])
    N, h = _orient(N, h, centre)
    store.add(verts0, N, h)
    stats.facets_created += len(verts0)
    stats.f_counts.append(store.n_alive)

    for j in order:
        p = P[j]
        size = store.size
        off = store.offsets[:size]
        d = store.normals[:size] @ p - off
        tol = TIE_TOL * np.maximum(1.0, np.abs(off))
        alive = store.alive[:size]
        stats.sidedness_tests += store.n_alive
        if np.any(alive & (np.abs(d) <= tol)):
            raise DegenerateInputError(f"degenerate-input: point {j} lies on a facet hyperplane")
        visible = np.flatnonzero(alive & (d > tol))
        if len(visible) == 0:
            stats.skipped_points += 1
            stats.f_counts.append(store.n_alive)
            continue
        vis = set(visible.tolist())
        horizon = []
        for f in visible.tolist():
            for r in _ridges_of(store.verts[f]):
                for g in store.ridges[r]:
                    if g != f and g not in vis:
                        horizon.append(r)
        store.delete(list(vis))
        new_verts = [tuple(sorted(r + (j,))) for r in horizon]
        N, h = _unit_hyperplanes(P[np.array(new_verts)])
        N, h = _orient(N, h, centre)
        store.add(new_verts, N, h)
        stats.facets_deleted += len(vis)
        stats.facets_created += len(new_verts)
        stats.f_counts.append(store.n_alive)
        if store.size > 2 * store.n_alive + 256:
            store.compact()
        if step_hook is not None:
            step_hook(j, store.ridges)

    live = store.live_ids()
    facets = [
        FacetRecord(store.verts[i], store.normals[i].copy(), float(store.offsets[i])) for i in live
    ]
    return Polytope.from_facets(cloud, includes_origin, facets), stats


def _orient(N, h, inside):
    s = N @ inside - h
    if np.any(np.abs(s) <= DET_TOL):
        raise DegenerateInputError("degenerate-input: facet hyperplane passes through interior point")
    flip = s > 0
    N = np.where(flip[:, None], -N, N)
    h = np.where(flip, -h, h)
    return N, h


def brute_force_facets(cloud, includes_origin=False):
    """All facets by testing every n-subset of the points; O(m^(n+1)).

    A subset spans a facet iff every other point lies strictly on one side
    of its hyperplane; a point within ``1e-12`` of it is a tie.  The facet
    normal points away from the other points.
    """
    n = cloud.n
    P = _augmented(cloud, includes_origin)
    M = len(P)
    if M < n + 1:
        raise ValidationError(f"need at least n+1={n + 1} generators, got {M}")
    combos = np.array(list(combinations(range(M), n)), dtype=int)
    N, h = _unit_hyperplanes(P[combos])
    flip = h < 0
    N[flip] *= -1
    h[flip] *= -1
    d = N @ P.T - h[:, None]
    member = np.zeros_like(d, dtype=bool)
    np.put_along_axis(member, combos, True, axis=1)
    if np.any(~member & (np.abs(d) <= TIE_TOL)):
        raise DegenerateInputError("degenerate-input: n+1 points on a common hyperplane")
    below = np.all(member | (d < 0.0), axis=1)
    above = np.all(member | (d > 0.0), axis=1)
    facets = []
    for i in np.flatnonzero(below | above):
        sign = 1.0 if below[i] else -1.0
        facets.append(FacetRecord(tuple(int(x) for x in combos[i]), sign * N[i], float(sign * h[i])))
    return Polytope.from_facets(cloud, includes_origin, facets)


def contains_origin(P):
    """True iff the origin lies strictly inside ``P`` (all offsets positive)."""
    return bool(np.all(P.offsets > 0.0))


def hausdorff_to_sphere(P):
    """``1 - min facet offset``: width of the shell around ``P`` under S^{n-1}."""
    off = P.offsets
    if not np.all(off > 0.0):
        raise OriginNotInteriorError("origin-not-interior: some facet offset is <= 0")
    return float(1.0 - off.min())


def vertex_degrees(P):
    """``[(vertex_id, number of facets containing it), ...]`` sorted by id."""
    counts = np.bincount(P.vertex_array.ravel(), minlength=len(P.points))
    return [(int(v), int(c)) for v, c in enumerate(counts) if c > 0]


def polytope_edges(P):
    """Set of vertex-id pairs forming the edges (1-faces) of a simplicial ``P``."""
    edges = set()
    for f in P.facets:
        edges.update(combinations(f.vertices, 2))
    return edges
