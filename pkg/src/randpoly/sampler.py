"""Seeded sampling of m i.i.d. uniform points on the unit sphere S^{n-1}.

Random bits come from numpy's counter-based Philox generator keyed by a
:class:`Seed`.  Normal variates use the Box-Muller transform on those
uniforms instead of numpy's ziggurat, so the mapping from bits to points is
spelled out here.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "Seed",
    "PointCloud",
    "splitmix64",
    "standard_normals",
    "sample_sphere_point",
    "sample_sphere_points",
    "sample_polytope",
    "cloud_to_csv",
    "cloud_from_csv",
]

_MASK64 = (1 << 64) - 1
_MIN_NORM = 1e-100


def splitmix64(x):
    """One round of the SplitMix64 finalizer; used to derive stream ids."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class Seed:
    """A 64-bit seed plus a 64-bit stream id.

    Equal ``(value, stream)`` pairs always give the same random sequence.
    ``split(*keys)`` derives an independent child stream, so trials can be
    generated in any order or in parallel.
    """

    value: int
    stream: int = 0

    def __post_init__(self):
        for name in ("value", "stream"):
            x = getattr(self, name)
            if int(x) != x or not 0 <= x <= _MASK64:
                raise ValidationError(f"seed {name} must be a 64-bit unsigned integer, got {x!r}")

    def split(self, *keys):
        s = self.stream
        for k in keys:
            s = splitmix64(s ^ splitmix64(int(k) & _MASK64))
        return Seed(self.value, s)

    def generator(self):
        seq = np.random.SeedSequence(self.value, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(seq))


def standard_normals(rng, shape):
    """Standard normal variates from Box-Muller pairs of uniforms.

    Uniform pairs are drawn interleaved, so a longer request extends a
    shorter one with the same leading values.
    """
    size = int(np.prod(shape))
    pairs = (size + 1) // 2
    u = rng.random((pairs, 2))
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))  # 1 - u in (0, 1]
    angle = 2.0 * np.pi * u[:, 1]
    z = np.empty((pairs, 2))
    z[:, 0] = radius * np.cos(angle)
    z[:, 1] = radius * np.sin(angle)
    return z.reshape(-1)[:size].reshape(shape)


def sample_sphere_points(n, m, rng):
    """``m`` independent uniform points on S^{n-1} as an (m, n) array."""
    if int(n) != n or n < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {n!r}")
    if int(m) != m or m < 1:
        raise ValidationError(f"m must be a positive integer, got {m!r}")
    x = standard_normals(rng, (m, n))
    norms = np.linalg.norm(x, axis=1)
    for i in np.flatnonzero(norms < _MIN_NORM):
        while norms[i] < _MIN_NORM:
            x[i] = standard_normals(rng, (n,))
            norms[i] = np.linalg.norm(x[i])
    return x / norms[:, None]


def sample_sphere_point(n, rng):
    """A single uniform point on S^{n-1}: n Gaussians, normalized."""
    return sample_sphere_points(n, 1, rng)[0]


@dataclass(frozen=True, eq=False)
class PointCloud:
    """An ordered set of m distinct points in R^n (the candidate vertices).

    Sampled clouds lie on the unit sphere; clouds read from files need not.
    """

    points: np.ndarray
    seed: Seed | None = field(default=None)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 2:
            raise ValidationError(f"points must be an (m, n) array with m >= 1, n >= 2, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("points must be finite")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValidationError("points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[1]

    @property
    def m(self):
        return self.points.shape[0]

    def __len__(self):
        return self.m

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.points.shape == other.points.shape and np.array_equal(self.points, other.points)

    __hash__ = None


def sample_polytope(n, m, seed):
    """Draw the vertex sample of a random polytope from the P(n, m) model."""
    if not isinstance(seed, Seed):
        seed = Seed(int(seed))
    pts = sample_sphere_points(n, m, seed.generator())
    return PointCloud(pts, seed=seed)


def cloud_to_csv(cloud):
    buf = io.StringIO()
    buf.write(",".join(f"x{i + 1}" for i in range(cloud.n)) + "\n")
    for row in cloud.points:
        buf.write(",".join(f"{x:.17g}" for x in row) + "\n")
    return buf.getvalue()


def cloud_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValidationError("empty cloud CSV")
    header = [h.strip() for h in rows[0]]
    if header != [f"x{i + 1}" for i in range(len(header))]:
        raise ValidationError(f"cloud CSV header must be x1,...,xn, got {rows[0]!r}")
    try:
        data = [[float(x) for x in r] for r in rows[1:] if r]
    except ValueError as exc:
        raise ValidationError(f"non-numeric cloud CSV entry: {exc}") from None
    if any(len(r) != len(header) for r in data):
        raise ValidationError("ragged cloud CSV")
    return PointCloud(np.array(data, dtype=float).reshape(len(data), len(header)))
