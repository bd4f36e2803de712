"""Dual shadow-vertex solver for  max <v, x>  s.t.  <a_i, x> <= 1.

The LP is solved in its dual form: find the facet of
``Y = conv(0, a_1, ..., a_m)`` pierced by the ray ``R+ v``.  The solver
works dimension by dimension.  At stage k the points are projected to their
first k coordinates.  The optimal facet of the previous stage is lifted to a
boundary simplex, and the solver pivots along the polygon cut from the
projected polytope by ``span(e_k, v_k)``, where ``v_k`` is the projected
objective.  No hull is ever built.  Each pivot is one gift-wrapping rotation
about a ridge.

All angles are measured in an oriented frame (u, w) of the section plane,
chosen so the walk always runs counter-clockwise toward the ray.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGeometryError,
    DegenerateSectionError,
    OriginNotInteriorError,
    SingularSystemError,
    ValidationError,
)
from .hull import SIDE_TOL, TIE_TOL, hyperplanes
from .sampler import PointCloud

__all__ = [
    "LPInstance",
    "LPSolution",
    "SectionCount",
    "solve_shadow_vertex",
    "recover_primal",
    "section_edge_count",
]

ANGLE_TOL = 1e-12
COND_LIMIT = 1e12
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class LPInstance:
    cloud: PointCloud
    objective: np.ndarray

    def __post_init__(self):
        v = np.array(self.objective, dtype=float).reshape(-1)
        if v.shape != (self.cloud.n,):
            raise ValidationError(f"objective must have dimension {self.cloud.n}, got {v.shape}")
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0.0:
            raise ValidationError("objective must be a finite nonzero vector")
        v = v / norm
        v.setflags(write=False)
        object.__setattr__(self, "objective", v)


@dataclass(frozen=True, eq=False)
class LPSolution:
    """Result of :func:`solve_shadow_vertex`.

    ``facet`` is ``None`` when the ray leaves ``Y`` through a face that
    contains the origin, i.e. the primal LP is unbounded.  ``walks[i]``
    lists ``(facet ids, entry angle)`` for every facet visited at stage
    ``k = i + 2``.
    """

    status: str
    facet: tuple | None
    x_star: np.ndarray | None
    pivots_by_dim: tuple
    walks: tuple

    @property
    def total_pivots(self):
        return sum(self.pivots_by_dim)

    def as_dict(self):
        return {
            "facet": None if self.facet is None else list(self.facet),
            "x_star": None if self.x_star is None else [float(x) for x in self.x_star],
            "pivots_by_dim": list(self.pivots_by_dim),
            "total_pivots": self.total_pivots,
        }


@dataclass(frozen=True, eq=False)
class SectionCount:
    """Edges of the polygon cut from a polytope by the plane ``span(u, v)``.

    ``u`` and ``v`` are the orthonormalized plane basis; ``segments[i]``
    holds the two endpoints of the edge contributed by facet ``facets[i]``.
    """

    u: np.ndarray
    v: np.ndarray
    edge_count: int
    facets: tuple
    segments: np.ndarray


def recover_primal(normals):
    """Solve ``<a_i, x> = 1`` for the n facet-defining constraint vectors."""
    A = np.atleast_2d(np.asarray(normals, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise ValidationError(f"need n vectors in R^n, got shape {A.shape}")
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(f"singular-system: condition estimate {cond:.3g}")
    ones = np.ones(A.shape[0])
    x = np.linalg.solve(A, ones)
    if np.max(np.abs(A @ x - ones)) > SIDE_TOL:
        raise SingularSystemError("singular-system: residual above 1e-9")
    return x


def _unit(x):
    return x / np.linalg.norm(x)


def _gift_wrap(P, ridge, normal0, tilt, exclude):
    """Rotate a supporting hyperplane about ``ridge`` until it hits a point.

    ``normal0`` is the outward normal of a hyperplane that contains the ridge
    and has every point of ``P`` on its closed inner side.  The normal turns
    toward ``tilt`` inside the pencil of hyperplanes through the ridge.
    Returns the first point touched and the new outward unit normal.
    """
    k = P.shape[1]
    r0 = P[ridge[0]]
    if len(ridge) > 1:
        _, _, vt = np.linalg.svd(P[ridge[1:]] - r0)
        comp = vt[len(ridge) - 1:]
    else:
        comp = np.eye(k)
    n0 = _unit(comp.T @ (comp @ normal0))
    w = comp.T @ (comp @ tilt)
    w = w - (w @ n0) * n0
    wn = np.linalg.norm(w)
    if wn <= SIDE_TOL:
        raise DegenerateGeometryError("degenerate-geometry: rotation direction lies in the ridge")
    w = w / wn

    cand = np.ones(len(P), dtype=bool)
    cand[list(exclude)] = False
    ids = np.flatnonzero(cand)
    Q = P[ids] - r0
    x = Q @ n0
    y = Q @ w
    if np.any(x > TIE_TOL):
        raise DegenerateGeometryError("degenerate-geometry: hyperplane is not supporting")
    if np.any(np.abs(x) <= TIE_TOL):
        raise DegenerateGeometryError("degenerate-geometry: extra point on the supporting hyperplane")
    phi = np.arctan2(-x, y)
    if len(phi) > 1:
        two = np.partition(phi, 1)[:2]
        if two[1] - two[0] <= ANGLE_TOL:
            raise DegenerateGeometryError("degenerate-geometry: pivot tie in gift-wrapping step")
    best = int(np.argmin(phi))
    j = int(ids[best])
    turned = math.cos(phi[best]) * n0 + math.sin(phi[best]) * w
    verts = np.array(list(ridge) + [j])
    exact = hyperplanes(P[verts][None])[0]
    exact = _unit(exact)
    if exact @ turned < 0:
        exact = -exact
    return j, exact


def _walk(P, facet, normal, entering, theta_in, u, w, ray, theta_ray, origin_id, max_steps):
    """Pivot along the section polygon until the facet pierced by ``ray``.

    Returns ``(facet, normal, pivots, trace)``; ``facet`` is ``None`` when
    the walk reaches a facet through the origin first.
    """
    pivots = 0
    trace = [(tuple(sorted(facet)), theta_in)]
    rhs = np.column_stack([ray, u, w])
    while True:
        if origin_id in facet:
            return None, None, pivots, trace
        A = P[facet].T
        try:
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            raise DegenerateGeometryError("degenerate-geometry: singular facet simplex") from None
        mu, p, q = sol[:, 0], sol[:, 1], sol[:, 2]
        scale = np.abs(mu).sum()
        if mu.min() >= -TIE_TOL * scale:
            if mu.min() <= TIE_TOL * scale:
                raise DegenerateGeometryError("degenerate-geometry: objective ray meets a ridge")
            return facet, normal, pivots, trace

        # downward zero of mu_i(theta) = p_i cos(theta) + q_i sin(theta)
        roots = np.arctan2(p, -q)
        delta = np.mod(roots - theta_in, _TWO_PI)
        delta[facet.index(entering)] = np.inf
        order = np.argsort(delta)
        if delta[order[1]] - delta[order[0]] <= ANGLE_TOL:
            raise DegenerateGeometryError("degenerate-geometry: section vertex on two ridges")
        i = int(order[0])
        theta_out = theta_in + float(delta[i])
        if theta_out > theta_ray + ANGLE_TOL:
            raise DegenerateGeometryError("degenerate-geometry: shadow walk passed the objective ray")

        drop = facet[i]
        ridge = facet[:i] + facet[i + 1:]
        tilt = P[ridge[0]] - P[drop]
        j, normal = _gift_wrap(P, ridge, normal, tilt, exclude=facet)
        facet = ridge + [j]
        entering = j
        theta_in = theta_out
        pivots += 1
        trace.append((tuple(sorted(facet)), theta_in))
        if pivots > max_steps:
            raise DegenerateGeometryError("degenerate-geometry: shadow walk did not terminate")


def solve_shadow_vertex(inst):
    """Find the facet of ``conv(0, a_1, ..., a_m)`` hit by the objective ray.

    Returns an :class:`LPSolution` with the optimal facet (ids into the
    cloud), the primal optimum ``x*`` and the pivot counts for stages
    k = 2, ..., n.  Raises :class:`DegenerateGeometryError` on ties.
    """
    cloud, v = inst.cloud, inst.objective
    n, m = cloud.n, cloud.m
    if m < n:
        raise ValidationError(f"need at least n={n} constraints, got {m}")
    P = np.vstack([cloud.points, np.zeros((1, n))])
    origin = m
    max_steps = 10 * (m + 10)
    pivots, walks = [], []

    def no_facet():
        pad = [0] * (n - 1 - len(pivots))
        return LPSolution("no-facet", None, None, tuple(pivots + pad), tuple(walks))

    # stage 2: walk the planar shadow from the vertex extreme toward v
    d = v[:2]
    dn = np.linalg.norm(d)
    if dn <= SIDE_TOL:
        raise DegenerateGeometryError("degenerate-geometry: objective projects to zero in the plane")
    u = d / dn
    P2 = P[:, :2]
    vals = P2 @ u
    top = np.argsort(vals)[-3:]
    w0 = np.array([-u[1], u[0]])
    tied = vals[top[2]] - vals[top[1]] <= TIE_TOL
    if tied and vals[top[1]] - vals[top[0]] <= TIE_TOL:
        raise DegenerateGeometryError("degenerate-geometry: three-way tie for the extreme vertex")
    j0 = int(top[2])
    if j0 == origin:
        pivots.append(0)
        walks.append(())
        return no_facet()
    theta_p = math.atan2(P2[j0] @ w0, P2[j0] @ u)
    if abs(theta_p) <= ANGLE_TOL:
        raise DegenerateGeometryError("degenerate-geometry: objective ray hits a vertex")
    if tied:
        # two vertices share the supporting line normal to u: start on their edge
        j1 = int(top[1])
        theta_1 = math.atan2(P2[j1] @ w0, P2[j1] @ u)
        if abs(theta_1) <= ANGLE_TOL:
            raise DegenerateGeometryError("degenerate-geometry: objective ray hits a vertex")
        s = 1.0 if min(theta_p, theta_1) < 0 else -1.0
        w = s * w0
        if s * theta_p > s * theta_1:
            j0, j1 = j1, j0
        theta_in = math.atan2(P2[j0] @ w, P2[j0] @ u)
        normal = u
    else:
        w = w0 if theta_p < 0 else -w0
        j1, normal = _gift_wrap(P2, [j0], u, w, exclude=[j0])
        theta_in = -abs(theta_p)
    facet, normal, piv, trace = _walk(
        P2, [j0, j1], normal, j1, theta_in, u, w, d, 0.0, origin, max_steps
    )
    pivots.append(piv)
    walks.append(tuple(trace))
    if facet is None:
        return no_facet()

    for k in range(3, n + 1):
        Pk = P[:, :k]
        vprev = v[: k - 1]
        vn = np.linalg.norm(vprev)
        if vn <= SIDE_TOL:
            raise DegenerateGeometryError("degenerate-geometry: projected objective vanishes")
        # lift: the pierce point of the previous facet, raised onto its ridge in R^k
        mu = np.linalg.solve(P[facet, : k - 1].T, vprev)
        sigma = mu.sum()
        beta_s = (mu / sigma) @ P[facet, k - 1]
        alpha_s = vn / sigma
        theta_s = math.atan2(beta_s, alpha_s)
        theta_v = math.atan2(v[k - 1], vn)
        if abs(theta_v - theta_s) <= ANGLE_TOL:
            raise DegenerateGeometryError("degenerate-geometry: objective ray meets the lifted ridge")
        sign = 1.0 if theta_v > theta_s else -1.0
        u = np.append(vprev / vn, 0.0)
        w = np.zeros(k)
        w[k - 1] = sign
        n0 = np.append(normal, 0.0)
        j, normal = _gift_wrap(Pk, facet, n0, w, exclude=facet)
        facet, normal, piv, trace = _walk(
            Pk, facet + [j], normal, j, sign * theta_s, u, w, v[:k], sign * theta_v, origin, max_steps
        )
        pivots.append(piv)
        walks.append(tuple(trace))
        if facet is None:
            return no_facet()

    facet = tuple(sorted(int(i) for i in facet))
    x_star = recover_primal(cloud.points[list(facet)])
    return LPSolution("optimal", facet, x_star, tuple(pivots), tuple(walks))


def section_edge_count(P, u, v):
    """Count facets of ``P`` whose simplex meets the plane ``span(u, v)``.

    For each facet the plane cuts the facet hyperplane in a line; the
    barycentric coordinates along that line are affine in the line
    parameter, and the facet contributes an edge iff the parameter interval
    on which all of them are nonnegative has positive length.
    """
    offsets = P.offsets
    if not np.all(offsets > 0.0):
        raise OriginNotInteriorError("origin-not-interior: section needs the origin inside P")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    e1 = _unit(u)
    v2 = v - (v @ e1) * e1
    if np.linalg.norm(v2) <= 1e-12:
        raise ValidationError("u and v must be linearly independent")
    e2 = _unit(v2)

    N = P.normals
    c1, c2 = N @ e1, N @ e2
    c = np.hypot(c1, c2)
    if np.any(c <= SIDE_TOL):
        raise DegenerateSectionError("degenerate-section: plane parallel to a facet hyperplane")
    base = (offsets / c**2)[:, None] * (c1[:, None] * e1 + c2[:, None] * e2)
    direction = (-c2 / c)[:, None] * e1 + (c1 / c)[:, None] * e2

    A = np.transpose(P.points[P.vertex_array], (0, 2, 1))
    lam = np.linalg.solve(A, np.stack([base, direction], axis=2))
    lam0, lamd = lam[:, :, 0], lam[:, :, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -lam0 / lamd
    lo = np.where(lamd > 0, t, -np.inf).max(axis=1)
    hi = np.where(lamd < 0, t, np.inf).min(axis=1)
    flat_bad = np.any((lamd == 0) & (lam0 < 0), axis=1)
    hit = (hi - lo > TIE_TOL) & ~flat_bad
    idx = np.flatnonzero(hit)
    segs = np.stack(
        [base[idx] + lo[idx, None] * direction[idx], base[idx] + hi[idx, None] * direction[idx]], axis=1
    )
    return SectionCount(e1, e2, _distinct_segments(segs), tuple(int(i) for i in idx), segs)


def _distinct_segments(segs):
    # a plane through a ridge meets both cofacets in the same segment
    if len(segs) < 2:
        return len(segs)
    a, b = segs[:, 0], segs[:, 1]

    def close(x, y):
        return np.max(np.abs(x[:, None, :] - y[None, :, :]), axis=2) <= SIDE_TOL

    same = (close(a, a) & close(b, b)) | (close(a, b) & close(b, a))
    earlier = np.tril(same, k=-1).any(axis=1)
    return int(len(segs) - earlier.sum())
