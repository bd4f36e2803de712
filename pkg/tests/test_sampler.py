import math

import numpy as np
import pytest

from randpoly.errors import ValidationError
from randpoly.sampler import (
    PointCloud,
    Seed,
    cloud_from_csv,
    cloud_to_csv,
    sample_polytope,
    sample_sphere_point,
    sample_sphere_points,
    splitmix64,
)

DRAWS = 1_000_000


@pytest.fixture(scope="module", params=[2, 3, 5])
def big_sample(request):
    n = request.param
    return n, sample_sphere_points(n, DRAWS, Seed(11, n).generator())


def test_unit_norms(big_sample):
    _, pts = big_sample
    assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) <= 1e-12


def test_mean_near_zero(big_sample):
    n, pts = big_sample
    assert np.all(np.abs(pts.mean(axis=0)) <= 4 * math.sqrt(n) / 1000)


def test_second_moment(big_sample):
    n, pts = big_sample
    x2 = pts[:, 0] ** 2
    se = x2.std() / math.sqrt(DRAWS)
    assert abs(x2.mean() - 1.0 / n) <= 4 * se


def test_half_space_balance(big_sample):
    n, pts = big_sample
    rng = np.random.default_rng(3)
    for _ in range(3):
        b = rng.normal(size=n)
        frac = np.mean(pts @ b > 0)
        assert abs(frac - 0.5) <= 4 * 0.0005


def test_single_point():
    rng = Seed(1).generator()
    p = sample_sphere_point(4, rng)
    assert p.shape == (4,)
    assert abs(np.linalg.norm(p) - 1) <= 1e-12


def test_determinism():
    a = sample_polytope(3, 10, Seed(5))
    b = sample_polytope(3, 10, Seed(5))
    assert a == b
    assert a.points.tobytes() == b.points.tobytes()


def test_seeds_differ():
    a = sample_polytope(4, 100, Seed(5))
    b = sample_polytope(4, 100, Seed(6))
    assert not np.array_equal(a.points[:, 0], b.points[:, 0])


def test_circle_points():
    c = sample_polytope(2, 5, Seed(0))
    assert c.n == 2 and c.m == 5
    assert np.allclose(np.linalg.norm(c.points, axis=1), 1.0, atol=1e-12)


def test_streams_independent_of_order():
    root = Seed(9)
    first = [root.split(3, m, t) for m in (10, 20) for t in range(3)]
    second = [root.split(3, m, t) for m in (20, 10) for t in reversed(range(3))]
    assert set(first) == set(second)
    assert len(set(first)) == 6
    assert root.split(1) != root


def test_splitmix_known_values():
    # reference outputs of SplitMix64 seeded at 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert splitmix64(0x9E3779B97F4A7C15) == 0x6E789E6AA1B965F4


def test_seed_validation():
    with pytest.raises(ValidationError):
        Seed(-1)
    with pytest.raises(ValidationError):
        Seed(2**64)


class TestPointCloud:
    def test_immutable(self):
        c = sample_polytope(3, 4, Seed(0))
        with pytest.raises(ValueError):
            c.points[0, 0] = 2.0

    def test_rejects_duplicates(self):
        with pytest.raises(ValidationError):
            PointCloud([[1.0, 0.0], [1.0, 0.0]])

    @pytest.mark.parametrize("bad", [[], [[1.0]], [[np.nan, 0.0]], [1.0, 2.0]])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValidationError):
            PointCloud(bad)

    def test_csv_round_trip(self):
        c = sample_polytope(4, 25, Seed(8))
        text = cloud_to_csv(c)
        assert text.splitlines()[0] == "x1,x2,x3,x4"
        assert cloud_from_csv(text) == c

    @pytest.mark.parametrize("text", ["", "a,b\n1,2\n", "x1,x2\n1,oops\n", "x1,x2\n1,2,3\n"])
    def test_csv_errors(self, text):
        with pytest.raises(ValidationError):
            cloud_from_csv(text)
