"""Closed-form constants and bounds for random polytopes on the sphere."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .geometry import cap_fraction

__all__ = [
    "BoundValue",
    "gamma_seq",
    "facet_constant",
    "facet_survival_probability",
    "facet_upper_bound",
    "borgwardt_bound",
    "UPPER_BOUND_CONSTANT_SHIFT",
]

# the facet bound uses the "(n + 2) log m" form of the cap estimate
UPPER_BOUND_CONSTANT_SHIFT = 2


@dataclass(frozen=True)
class BoundValue:
    value: float
    kind: str

    def __float__(self):
        return float(self.value)


def _dim(n):
    if int(n) != n or n < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


def gamma_seq(K):
    """``[gamma_0, ..., gamma_K]`` with gamma_0 = 1/2, gamma_{k+1} = 1/(2 pi (k+1) gamma_k)."""
    if int(K) != K or K < 0:
        raise ValidationError(f"K must be a nonnegative integer, got {K!r}")
    g = [0.5]
    for k in range(int(K)):
        g.append(1.0 / (2.0 * math.pi * (k + 1) * g[-1]))
    return g


def facet_constant(n):
    """Limit of E[#facets] / m for P(n, m): ``(2/n) gamma_{(n-1)^2} gamma_{n-1}^{-(n-1)}``."""
    n = _dim(n)
    g = gamma_seq((n - 1) ** 2)
    try:
        value = (2.0 / n) * g[(n - 1) ** 2] * g[n - 1] ** (-(n - 1))
    except OverflowError:
        value = math.inf
    if not math.isfinite(value):
        raise OverflowError(f"facet constant overflows double precision at n={n}")
    return BoundValue(value, "facet-limit-constant")


def facet_survival_probability(n, m, h):
    """Chance that the m - n other points all avoid the cap cut off at distance h.

    ``(1 - SA_n(1 - h) / s_n) ** (m - n)``.
    """
    n = _dim(n)
    if int(m) != m or m <= n:
        raise ValidationError(f"need m > n, got m={m!r}, n={n}")
    h = float(h)
    if not 0.0 <= h <= 1.0:
        raise ValidationError(f"h must lie in [0, 1], got {h!r}")
    base = 1.0 - cap_fraction(n, 1.0 - h)
    return BoundValue(base ** (int(m) - n), "survival-probability")


def facet_upper_bound(n, m, shift=UPPER_BOUND_CONSTANT_SHIFT):
    """Explicit expectation bound on the facet count assembled from the proof.

    ``m * C(m-1, n-1) * (16 * 4^((n-1)/2) * (n + shift) * log m / m)^(n-1) + 1``;
    the trailing 1 covers the hyperplanes far from the sphere.
    """
    n = _dim(n)
    if int(m) != m or m < 2 * n:
        raise ValidationError(f"need m >= 2n, got m={m!r}, n={n}")
    m = int(m)
    cap = 16.0 * 4.0 ** ((n - 1) / 2.0) * (n + shift) * math.log(m) / m
    return BoundValue(m * math.comb(m - 1, n - 1) * cap ** (n - 1) + 1.0, "facet-upper-bound")


def borgwardt_bound(n, m):
    """Average pivot bound ``m^(1/(n-1)) (n+1)^4 (2 pi / 5)(1 + e pi / 2)``."""
    n = _dim(n)
    if int(m) != m or m < 1:
        raise ValidationError(f"m must be a positive integer, got {m!r}")
    value = m ** (1.0 / (n - 1)) * (n + 1) ** 4 * (2.0 * math.pi / 5.0) * (1.0 + math.e * math.pi / 2.0)
    return BoundValue(value, "borgwardt-pivot-bound")
