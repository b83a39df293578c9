"""Frequency-window construction: a smooth cutoff bump and the normalized
tensor-product window family on the integer frequency lattice.

Windows are evaluated analytically on demand; only 1-D per-axis value tables
are ever cached.  The per-axis normalizer sums the (at most three) neighbor
bumps covering a frequency, so the family sums to one wherever the retained
lattice covers every neighbor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Tuple

import numpy as np

__all__ = [
    "BumpProfile",
    "WindowFamily",
    "eval_eta",
    "eval_window",
    "window_values",
    "eval_mixed_window",
    "window_support",
]


@dataclass(frozen=True)
class BumpProfile:
    """Even C-infinity bump: 1 on |t| <= 1, 0 on |t| >= 2, smooth between.

    The transition uses S(u) = B(u) / (B(u) + B(1-u)) with B(u) = exp(-a/u),
    a = ``transition_sharpness``, evaluated at u = 2 - |t|.  S(u) + S(1-u) = 1
    makes the transition symmetric about |t| = 1.5, so eta(1.5) = 1/2 for
    every sharpness.
    """

    transition_sharpness: float = 1.0
    evaluation_cache_resolution: int = 1024

    def __post_init__(self):
        if not self.transition_sharpness > 0:
            raise ValueError("transition_sharpness must be positive")
        if self.evaluation_cache_resolution < 1:
            raise ValueError("evaluation_cache_resolution must be a positive integer")

    def table(self) -> Tuple[np.ndarray, np.ndarray]:
        """Optional tabulation of eta on [-2, 2] at the cache resolution."""
        t = np.linspace(-2.0, 2.0, 4 * self.evaluation_cache_resolution + 1)
        return t, eval_eta(self, t)


def eval_eta(profile: BumpProfile, t):
    """Evaluate the bump at ``t`` (scalar or array).

    The plateau and the tail are exact: 1.0 for |t| <= 1 and 0.0 for
    |t| >= 2, bit-for-bit, not merely to roundoff.
    """
    a = profile.transition_sharpness
    tt = np.abs(np.asarray(t, dtype=float))
    out = np.zeros(tt.shape)
    out[tt <= 1.0] = 1.0
    mid = (tt > 1.0) & (tt < 2.0)
    if np.any(mid):
        u = 2.0 - tt[mid]
        # S(u) = 1 / (1 + exp(a/u - a/(1-u))); clip keeps exp() finite.
        d = np.clip(a / u - a / (1.0 - u), -700.0, 700.0)
        out[mid] = 1.0 / (1.0 + np.exp(d))
    if np.ndim(t) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class WindowFamily:
    """Normalized tensor-product windows phi_k centered at integer lattice
    points k with max_i |k_i| <= truncation_radius.

    phi_k(xi) = prod_i eta(2(xi_i - k_i)) / prod_i D(xi_i), where D sums the
    bump over all integer centers.  Each phi_k is supported in the open box
    prod_i (k_i - 1, k_i + 1) and the family sums to one for
    max_i |xi_i| <= truncation_radius - 1.
    """

    dimension: int
    truncation_radius: int
    bump: BumpProfile = field(default_factory=BumpProfile)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        if self.truncation_radius < 1:
            raise ValueError("truncation_radius must be a positive integer")

    def lattice(self) -> Iterator[Tuple[int, ...]]:
        """Retained centers in lexicographic order."""
        span = range(-self.truncation_radius, self.truncation_radius + 1)
        return itertools.product(span, repeat=self.dimension)

    def contains(self, k) -> bool:
        k = np.asarray(k, dtype=int)
        return k.shape == (self.dimension,) and np.all(
            np.abs(k) <= self.truncation_radius
        )


def _axis_normalizer(bump: BumpProfile, xi: np.ndarray) -> np.ndarray:
    """Sum of eta(2(xi - m)) over every integer m (only neighbors survive)."""
    xi = np.asarray(xi, dtype=float)
    lo = int(math.floor(float(xi.min()))) - 1
    hi = int(math.ceil(float(xi.max()))) + 1
    total = np.zeros(xi.shape)
    for m in range(lo, hi + 1):
        total += eval_eta(bump, 2.0 * (xi - m))
    return total


def axis_window_values(
    bump: BumpProfile, radius: int, xi: np.ndarray
) -> np.ndarray:
    """Rows of normalized per-axis window values.

    Returns an array of shape (2*radius + 1, len(xi)) whose row for center c
    holds eta(2(xi - c)) / D(xi); row index is c + radius.
    """
    xi = np.asarray(xi, dtype=float)
    den = _axis_normalizer(bump, xi)
    rows = np.stack(
        [eval_eta(bump, 2.0 * (xi - c)) for c in range(-radius, radius + 1)]
    )
    return rows / den


def eval_window(family: WindowFamily, k, xi) -> float:
    """Evaluate phi_k at a single frequency point; result lies in [0, 1].

    Computed from the shifted coordinates xi - k, so phi_k(xi) and
    phi_0(xi - k) run through identical arithmetic.
    """
    k = np.asarray(k, dtype=int)
    xi = np.asarray(xi, dtype=float)
    if k.shape != (family.dimension,) or xi.shape != (family.dimension,):
        raise ValueError(
            f"expected {family.dimension}-dimensional k and xi, "
            f"got shapes {k.shape} and {xi.shape}"
        )
    if np.any(np.abs(k) > family.truncation_radius):
        raise ValueError(f"center {tuple(k)} outside truncation radius")
    t = xi - k
    value = 1.0
    for ti in t:
        num = eval_eta(family.bump, 2.0 * ti)
        if num == 0.0:
            return 0.0
        base = math.floor(ti)
        den = sum(
            eval_eta(family.bump, 2.0 * (ti - m))
            for m in range(base - 1, base + 3)
        )
        value *= num / den
    return value


def window_values(family: WindowFamily, k, points: np.ndarray) -> np.ndarray:
    """phi_k at an (m, n) array of frequency points (vectorized
    :func:`eval_window`, same shifted-coordinate arithmetic)."""
    k = np.asarray(k, dtype=int)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if k.shape != (family.dimension,) or pts.shape[1] != family.dimension:
        raise ValueError("k and points must match the family dimension")
    if np.any(np.abs(k) > family.truncation_radius):
        raise ValueError(f"center {tuple(k)} outside truncation radius")
    t = pts - k
    vals = np.zeros(pts.shape[0])
    inside = np.all(np.abs(t) < 1.0, axis=1)  # exact zero off the support box
    if not np.any(inside):
        return vals
    sub = t[inside]
    acc = np.ones(sub.shape[0])
    for i in range(family.dimension):
        ti = sub[:, i]
        num = eval_eta(family.bump, 2.0 * ti)
        base = np.floor(ti)
        den = np.zeros(ti.shape)
        for off in (-1.0, 0.0, 1.0, 2.0):
            den += eval_eta(family.bump, 2.0 * (ti - (base + off)))
        acc *= num / den
    vals[inside] = acc
    return vals


def eval_mixed_window(
    family_n: WindowFamily,
    family_trace: WindowFamily,
    kbar,
    l,
    xi,
) -> float:
    """Product window phi_{kbar}(xi_bar) * phi_l(xi) used by the mixed band
    operator; xi_bar drops the last coordinate of xi."""
    n = family_n.dimension
    if family_trace.dimension != n - 1:
        raise ValueError("trace family must have one dimension fewer")
    kbar = np.asarray(kbar, dtype=int)
    l = np.asarray(l, dtype=int)
    xi = np.asarray(xi, dtype=float)
    if l.shape != (n,) or xi.shape != (n,):
        raise ValueError("l and xi must match the full dimension")
    if kbar.shape != (n - 1,):
        raise ValueError(
            f"kbar has dimension {kbar.shape[0] if kbar.ndim == 1 else '?'}, "
            f"expected {n - 1}"
        )
    return eval_window(family_trace, kbar, xi[:-1]) * eval_window(family_n, l, xi)


def window_support(family: WindowFamily, k) -> Tuple[Tuple[float, float], ...]:
    """Open axis-aligned box outside which phi_k vanishes identically."""
    k = np.asarray(k, dtype=int)
    if not family.contains(k):
        raise ValueError(f"center {tuple(k)} outside truncation radius")
    return tuple((float(ki - 1), float(ki + 1)) for ki in k)
