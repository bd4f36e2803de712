import math

import numpy as np
import pytest
from scipy.optimize import linprog

from randpoly.errors import DegenerateSectionError, OriginNotInteriorError, SingularSystemError, ValidationError
from randpoly.hull import beneath_beyond, brute_force_facets
from randpoly.sampler import PointCloud, Seed, sample_polytope, sample_sphere_points
from randpoly.shadow import LPInstance, recover_primal, section_edge_count, solve_shadow_vertex


def pierced_facet(cloud, v):
    """Facet of conv(0, a_1..a_m) whose simplex the ray R+ v crosses, or None."""
    Y = brute_force_facets(cloud, includes_origin=True)
    X = Y.points
    hits = []
    for f in Y.facets:
        if cloud.m in f.vertices:
            continue
        mu = np.linalg.solve(X[list(f.vertices)].T, v)
        if mu.min() >= 0:
            hits.append(f.vertices)
    assert len(hits) <= 1
    return hits[0] if hits else None


def random_objective(n, seed):
    return sample_sphere_points(n, 1, Seed(seed, 999).generator())[0]


class TestSmallExamples:
    def test_square(self):
        c = PointCloud([[1, 0], [0, 1], [-1, 0], [0, -1]])
        sol = solve_shadow_vertex(LPInstance(c, [1 / math.sqrt(2), 1 / math.sqrt(2)]))
        assert sol.status == "optimal"
        assert sol.facet == (0, 1)
        assert np.allclose(sol.x_star, [1.0, 1.0], atol=1e-12)

    def test_single_candidate_facet(self):
        # three points of a tetrahedron face plus the origin
        tri = np.array([[1.0, 0.2, 0.3], [0.1, 1.0, 0.2], [0.3, 0.1, 1.0]])
        v = tri.mean(axis=0)
        sol = solve_shadow_vertex(LPInstance(PointCloud(tri), v))
        assert sol.facet == (0, 1, 2)
        assert sol.total_pivots == 0

    def test_named_seed(self):
        c = sample_polytope(4, 10, Seed(5))
        v = random_objective(4, 5)
        sol = solve_shadow_vertex(LPInstance(c, v))
        assert sol.facet == pierced_facet(c, v)

    def test_no_facet_half_plane(self):
        t = np.array([-1.0, -0.3, 0.4, 1.2])
        c = PointCloud(np.column_stack([np.cos(t), np.sin(t)]))
        sol = solve_shadow_vertex(LPInstance(c, [-1.0, 0.05]))
        assert sol.status == "no-facet"
        assert sol.facet is None and sol.x_star is None
        assert sol.as_dict()["facet"] is None

    def test_no_facet_three_dimensional(self):
        pts = np.array([[1.0, 0.1, 0.2], [0.9, -0.3, 0.1], [0.8, 0.2, -0.4], [0.95, -0.1, -0.2]])
        sol = solve_shadow_vertex(LPInstance(PointCloud(pts), [-0.3, 0.8, 0.5]))
        assert sol.status == "no-facet"
        assert len(sol.pivots_by_dim) == 2

    def test_validation(self):
        c = sample_polytope(3, 6, Seed(0))
        with pytest.raises(ValidationError):
            LPInstance(c, [1.0, 0.0])
        with pytest.raises(ValidationError):
            LPInstance(c, [0.0, 0.0, 0.0])
        with pytest.raises(ValidationError):
            solve_shadow_vertex(LPInstance(sample_polytope(3, 2, Seed(0)), [1, 0, 0]))


class TestAgainstOracles:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_pierced_facet(self, n):
        for seed in range(30):
            for m in range(n, 13, 2):
                c = sample_polytope(n, m, Seed(seed, m))
                v = random_objective(n, seed * 100 + m)
                sol = solve_shadow_vertex(LPInstance(c, v))
                expected = pierced_facet(c, v)
                assert sol.facet == expected
                if expected is not None:
                    assert np.max(c.points @ sol.x_star) <= 1 + 1e-9
                    assert np.allclose(c.points[list(sol.facet)] @ sol.x_star, 1.0, atol=1e-9)

    @pytest.mark.parametrize("n,m", [(3, 40), (4, 40), (5, 60), (6, 80)])
    def test_linprog(self, n, m):
        for seed in range(10):
            c = sample_polytope(n, m, Seed(seed))
            v = random_objective(n, seed)
            sol = solve_shadow_vertex(LPInstance(c, v))
            res = linprog(-v, A_ub=c.points, b_ub=np.ones(m), bounds=[(None, None)] * n, method="highs")
            if res.status == 3:
                assert sol.status == "no-facet"
            else:
                assert res.status == 0
                assert sol.status == "optimal"
                assert sol.x_star @ v == pytest.approx(-res.fun, rel=1e-8)
                assert np.allclose(sol.x_star, res.x, atol=1e-6)


class TestRecoverPrimal:
    def test_identity(self):
        assert np.allclose(recover_primal([[1, 0], [0, 1]]), [1, 1])

    def test_orthogonal(self):
        Q, _ = np.linalg.qr(np.random.default_rng(1).normal(size=(5, 5)))
        assert np.allclose(recover_primal(Q), Q.T @ np.ones(5), atol=1e-12)

    def test_singular(self):
        with pytest.raises(SingularSystemError):
            recover_primal([[1, 0], [2, 0]])
        with pytest.raises(ValidationError):
            recover_primal([[1, 0, 0], [0, 1, 0]])


class TestWalkStructure:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_angles_strictly_increase(self, n):
        for seed in range(40):
            c = sample_polytope(n, 60, Seed(seed))
            sol = solve_shadow_vertex(LPInstance(c, random_objective(n, seed)))
            for walk in sol.walks:
                angles = [theta for _, theta in walk]
                assert all(b > a for a, b in zip(angles, angles[1:]))
            for k, walk in enumerate(sol.walks):
                assert len(walk) == sol.pivots_by_dim[k] + 1

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_adjacent_pivots_share_ridge(self, n):
        for seed in range(20):
            c = sample_polytope(n, 80, Seed(seed))
            sol = solve_shadow_vertex(LPInstance(c, random_objective(n, seed)))
            for walk in sol.walks:
                for (f, _), (g, _) in zip(walk, walk[1:]):
                    assert len(set(f) & set(g)) == len(f) - 1

    @pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e4])
    def test_scaling_invariance(self, scale):
        for seed in range(10):
            c = sample_polytope(4, 50, Seed(seed))
            v = random_objective(4, seed)
            a = solve_shadow_vertex(LPInstance(c, v))
            b = solve_shadow_vertex(LPInstance(c, scale * v))
            assert a.facet == b.facet
            assert a.pivots_by_dim == b.pivots_by_dim
            assert [[f for f, _ in w] for w in a.walks] == [[f for f, _ in w] for w in b.walks]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_walk_matches_section_of_projected_hull(self, n):
        """Every walked facet is a facet of conv(0, proj_k a_i) crossed by the section plane."""
        checked = 0
        for seed in range(15):
            c = sample_polytope(n, 10, Seed(seed, 7))
            v = random_objective(n, seed + 50)
            sol = solve_shadow_vertex(LPInstance(c, v))
            if sol.status != "optimal":
                continue
            for k, walk in zip(range(2, n + 1), sol.walks):
                proj = PointCloud(c.points[:, :k])
                Y = brute_force_facets(proj, includes_origin=True)
                facets = Y.facet_set()
                if k == 2:
                    u = v[:2] / np.linalg.norm(v[:2])
                    perp = np.array([-u[1], u[0]])
                    theta_ray = 0.0
                else:
                    u = np.append(v[: k - 1] / np.linalg.norm(v[: k - 1]), 0.0)
                    perp = np.eye(k)[k - 1]
                    theta_ray = math.atan2(v[k - 1], np.linalg.norm(v[: k - 1]))
                ok = False
                for s in (1.0, -1.0):
                    w = s * perp
                    stops = [theta for _, theta in walk] + [s * theta_ray]
                    if any(b <= a for a, b in zip(stops, stops[1:])):
                        continue
                    good = True
                    for (f, a), b in zip(walk, stops[1:]):
                        if f not in facets:
                            good = False
                            break
                        mid = 0.5 * (a + b)
                        d = math.cos(mid) * u + math.sin(mid) * w
                        mu = np.linalg.solve(Y.points[list(f)].T, d)
                        good &= bool(mu.min() > 0)
                    ok |= good
                assert ok
                checked += 1
        assert checked > 0


class TestSection:
    def test_octahedron(self, octahedron):
        s = section_edge_count(octahedron, [1, 0, 0], [0, 1, 0])
        assert s.edge_count == 4

    def test_requires_interior_origin(self):
        t = np.array([0.1, 0.7, 1.4])
        P = brute_force_facets(PointCloud(np.column_stack([np.cos(t), np.sin(t)])))
        with pytest.raises(OriginNotInteriorError):
            section_edge_count(P, [1, 0], [0, 1])

    def test_parallel_plane(self):
        P, _ = beneath_beyond(PointCloud([[1, 0, 1], [-0.5, 0.8, 1], [-0.5, -0.8, 1], [0, 0, -1]]))
        with pytest.raises(DegenerateSectionError):
            section_edge_count(P, [1, 0, 0], [0, 1, 0])

    def test_dependent_plane(self):
        P, _ = beneath_beyond(sample_polytope(3, 30, Seed(1)))
        with pytest.raises(ValidationError):
            section_edge_count(P, [1, 0, 0], [2, 0, 0])

    @pytest.mark.parametrize("seed", range(8))
    def test_angular_sweep(self, seed):
        c = sample_polytope(3, 40, Seed(seed))
        P, _ = beneath_beyond(c)
        rng = Seed(seed, 5).generator()
        u, v = sample_sphere_points(3, 2, rng)
        s = section_edge_count(P, u, v)
        theta = np.linspace(0, 2 * np.pi, 400_000, endpoint=False)
        D = np.outer(np.cos(theta), s.u) + np.outer(np.sin(theta), s.v)
        proj = D @ P.normals.T
        with np.errstate(divide="ignore"):
            t = np.where(proj > 0, P.offsets / proj, np.inf)
        swept = set(np.unique(np.argmin(t, axis=1)).tolist())
        assert swept == set(s.facets)
        assert s.edge_count == len(swept)

    def test_tetrahedron_enumeration(self):
        tet = PointCloud([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
        P, _ = beneath_beyond(tet)
        rng = np.random.default_rng(3)
        seen = set()
        for _ in range(200):
            u, v = rng.normal(size=(2, 3))
            s = section_edge_count(P, u, v)
            # direct enumeration: a facet meets the plane iff its vertices are not all on one side
            nrm = np.cross(s.u, s.v)
            side = P.points @ nrm
            direct = sum(1 for f in P.facets if side[list(f.vertices)].min() < 0 < side[list(f.vertices)].max())
            assert s.edge_count == direct
            seen.add(direct)
        assert seen == {3, 4}

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_closed_polygon(self, n):
        for seed in range(10):
            P, _ = beneath_beyond(sample_polytope(n, 80, Seed(seed)))
            u, v = sample_sphere_points(n, 2, Seed(seed, 3).generator())
            s = section_edge_count(P, u, v)
            assert s.edge_count >= 3
            ends = s.segments.reshape(-1, n)
            for i, p in enumerate(ends):
                d = np.max(np.abs(ends - p), axis=1)
                d[i] = np.inf
                d[i ^ 1] = np.inf
                assert np.sum(d <= 1e-9) == 1
            # segments lie in the plane and on the facet hyperplanes
            plane_n = ends - np.outer(ends @ s.u, s.u) - np.outer(ends @ s.v, s.v)
            assert np.max(np.abs(plane_n)) <= 1e-9
