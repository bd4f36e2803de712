"""Lebesgue measures of unit balls, spherical caps and spherical belts.

A cap of height ``h`` is ``{x in B_n : x_n >= 1 - h}``; a belt of radius
``r`` is ``{x in B_n : x_1^2 + x_2^2 >= r^2}``.  "Volume" is the
n-dimensional measure of the set, "surface" the (n-1)-dimensional measure
of its intersection with the unit sphere.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import ThresholdUnattainableError, ValidationError

__all__ = [
    "ball_volume",
    "sphere_surface",
    "cap_volume",
    "cap_surface",
    "cap_fraction",
    "belt_volume",
    "belt_surface",
    "cap_volume_asymptotic",
    "cap_height_for_fraction",
    "solve_delta",
]

_GL_ORDER = 15
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
QUAD_RTOL = 1e-13
_MAX_PANELS = 4096


def _check_dim(n, minimum):
    if int(n) != n or n < minimum:
        raise ValidationError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_unit(name, x):
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {x!r}")
    return x


@lru_cache(maxsize=None)
def _ball_volume(n):
    if n == 1:
        return 2.0
    if n == 2:
        return math.pi
    return 2.0 * math.pi * _ball_volume(n - 2) / n


def ball_volume(n):
    """Volume ``v_n`` of the unit ball in R^n via ``v_n = 2 pi v_{n-2} / n``."""
    return _ball_volume(_check_dim(n, 1))


def sphere_surface(n):
    """Surface measure ``s_n = n v_n`` of the unit sphere in R^n."""
    n = _check_dim(n, 2)
    return n * _ball_volume(n)


def _half_angle(h):
    # polar angle of the cap rim; 1 - cos(t) = 2 sin^2(t/2) avoids cancellation
    return 2.0 * math.asin(math.sqrt(h / 2.0))


def _gl(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def _adaptive_gl(f, a, b, rtol=QUAD_RTOL):
    """Adaptive composite Gauss-Legendre quadrature of a vectorized ``f``."""
    if b <= a:
        return 0.0
    total = 0.0
    stack = [(a, b, _gl(f, a, b))]
    panels = 0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _gl(f, lo, mid)
        right = _gl(f, mid, hi)
        refined = left + right
        panels += 1
        scale = max(abs(refined), 1e-300)
        if abs(refined - whole) <= rtol * scale or panels > _MAX_PANELS:
            total += refined
        else:
            stack.append((lo, mid, left))
            stack.append((mid, hi, right))
    return total


def _cap_volume_quad(n, h):
    # y = cos(t) turns (1 - y^2)^((n-1)/2) dy into sin(t)^n dt, which stays
    # smooth at the pole even when (n-1)/2 is a half-integer.
    theta = _half_angle(h)
    integral = _adaptive_gl(lambda t: np.sin(t) ** n, 0.0, theta)
    return _ball_volume(n - 1) * integral


def cap_volume(n, h, method="auto"):
    """Volume of the cap ``C_n(h)``.

    Evaluates ``v_{n-1} * integral_{1-h}^{1} (1 - y^2)^((n-1)/2) dy``.  With
    ``method="auto"`` the closed forms for n <= 3 are used; ``method="quad"``
    always integrates.
    """
    n = _check_dim(n, 2)
    h = _check_unit("cap height", h)
    if h == 0.0:
        return 0.0
    if method == "auto" and n == 2:
        t = _half_angle(h)
        return t - math.sin(t) * math.cos(t)
    if method == "auto" and n == 3:
        return math.pi * h * h * (3.0 - h) / 3.0
    if method not in ("auto", "quad"):
        raise ValidationError(f"unknown method {method!r}")
    return _cap_volume_quad(n, h)


def cap_surface(n, h, method="auto"):
    """Sphere measure of the cap of height ``h``.

    Uses the limit formula
    ``s_n * (sqrt(2h - h^2)^(n-1) v_{n-1} (1 - h) / (n v_n) + V(C_n(h)) / v_n)``
    with closed forms (arc length, Archimedes) for n <= 3 under ``"auto"``.
    """
    n = _check_dim(n, 2)
    h = _check_unit("cap height", h)
    if h == 0.0:
        return 0.0
    if method == "auto" and n == 2:
        return 2.0 * _half_angle(h)
    if method == "auto" and n == 3:
        return 2.0 * math.pi * h
    vn = _ball_volume(n)
    rim = math.sqrt(h * (2.0 - h)) ** (n - 1) * _ball_volume(n - 1) * (1.0 - h) / (n * vn)
    return n * vn * (rim + cap_volume(n, h, method=method) / vn)


def cap_fraction(n, h, method="auto"):
    """Probability that a uniform point of S^{n-1} lands in the cap of height h."""
    return cap_surface(n, h, method=method) / sphere_surface(n)


def belt_volume(n, r):
    """Volume ``v_n (1 - r^2)^(n/2)`` of the belt ``L_n(r)``."""
    n = _check_dim(n, 2)
    r = _check_unit("belt radius", r)
    return _ball_volume(n) * (1.0 - r * r) ** (n / 2.0)


def belt_surface(n, r):
    """Sphere measure ``s_n (1 - r^2)^((n-2)/2)`` of the belt ``L_n(r)``."""
    n = _check_dim(n, 2)
    r = _check_unit("belt radius", r)
    return sphere_surface(n) * (1.0 - r * r) ** ((n - 2) / 2.0)


def cap_volume_asymptotic(n, h):
    """Leading term ``v_{n-1} sqrt(2h - h^2)^(n+1) / (n+1)`` of the cap volume as h -> 0.

    It is the exact value of the volume integral with the extra weight y,
    which tends to 1 on the shrinking interval [1-h, 1].
    """
    n = _check_dim(n, 2)
    h = _check_unit("cap height", h)
    return _ball_volume(n - 1) * math.sqrt(h * (2.0 - h)) ** (n + 1) / (n + 1)


def cap_height_for_fraction(n, fraction, max_iter=200):
    """Invert :func:`cap_fraction` by bisection on [0, 1].

    Stops once the bracket is narrower than ``1e-14`` relative to its upper
    end (or after ``max_iter`` halvings).
    """
    n = _check_dim(n, 2)
    fraction = float(fraction)
    if not fraction > 0.0:
        raise ValidationError(f"cap fraction must be positive, got {fraction!r}")
    if fraction > 0.5:
        raise ThresholdUnattainableError(
            f"cap fraction {fraction:.6g} exceeds 1/2, the hemisphere maximum"
        )
    if fraction == 0.5:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if cap_fraction(n, mid) < fraction:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def solve_delta(n, m, c):
    """Cap height whose sphere fraction equals ``c log(m) / m``."""
    if int(m) != m or m < 2:
        raise ValidationError(f"m must be an integer >= 2, got {m!r}")
    if not c > 0:
        raise ValidationError(f"c must be positive, got {c!r}")
    return cap_height_for_fraction(n, c * math.log(m) / m)
