"""Weighted amalgam norms over band decompositions, and the matching
weighted mixed sequence norms.

All aggregations take the inner frequency-index layer first and the spatial
L^p quadrature last.  Exponents may be any positive real or inf; nothing
here assumes a triangle inequality, so the quasi-norm range 0 < p, q < 1 is
handled by exactly the same code.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .bands import BandComponent, BandSet, _maximal_magnitudes

__all__ = [
    "NormSpec",
    "WeightedSequence",
    "bracket",
    "wiener_norm",
    "aniso_norm",
    "aniso2_norm",
    "maximal_wiener_norm",
    "sequence_mixed_norm",
    "evaluate_norm",
    "VARIANTS",
]

VARIANTS = (
    "isotropic",
    "aniso_last",
    "aniso_last2",
    "maximal_isotropic",
    "maximal_aniso",
)

_NEEDS_R = ("aniso_last", "aniso_last2", "maximal_aniso")


def _as_exponent(v) -> float:
    x = float(v)
    if not (x > 0 or x == math.inf):
        raise ValueError("exponents must be positive or inf")
    return x


@dataclass(frozen=True)
class NormSpec:
    """Selector for one norm: exponents, regularity weight, and variant.

    ``r`` is present exactly for the anisotropic variants; ``b`` (the
    maximal weight exponent) exactly for the maximal variants.
    """

    p: float
    q: float
    r: Optional[float] = None
    s: float = 0.0
    variant: str = "isotropic"
    b: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "p", _as_exponent(self.p))
        object.__setattr__(self, "q", _as_exponent(self.q))
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant in _NEEDS_R:
            if self.r is None:
                raise ValueError(f"variant {self.variant!r} requires r")
            object.__setattr__(self, "r", _as_exponent(self.r))
        elif self.r is not None:
            raise ValueError(f"variant {self.variant!r} does not take r")
        if self.variant.startswith("maximal"):
            if self.b is None:
                raise ValueError(f"variant {self.variant!r} requires b")
            if not float(self.b) > 0:
                raise ValueError("b must be positive")
            object.__setattr__(self, "b", float(self.b))
        elif self.b is not None:
            raise ValueError(f"variant {self.variant!r} does not take b")


@dataclass(frozen=True)
class WeightedSequence:
    """Nonnegative values on a finite set of lattice points."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=int))
        vals = np.asarray(self.values, dtype=float).ravel()
        if pts.shape[0] != vals.shape[0]:
            raise ValueError("points and values must have equal length")
        if pts.shape[0] == 0:
            raise ValueError("support must be nonempty")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite and nonnegative")
        if np.unique(pts, axis=0).shape[0] != pts.shape[0]:
            raise ValueError("support points must be distinct")
        pts.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


def bracket(k, s: float) -> float:
    """Polynomial weight (1 + |k|^2)^(s/2) with |k| Euclidean."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return float((1.0 + np.sum(k * k)) ** (s / 2.0))


def _bracket_many(points: np.ndarray, s: float) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return (1.0 + np.sum(points * points, axis=1)) ** (s / 2.0)


def _power_reduce(values: np.ndarray, exponent: float, axis=0) -> np.ndarray:
    """(sum v^e)^(1/e) along ``axis``; max for e = inf.  Values nonnegative."""
    if exponent == math.inf:
        return np.max(values, axis=axis)
    return np.sum(values**exponent, axis=axis) ** (1.0 / exponent)


def _lp_quadrature(g: np.ndarray, p: float, cell_volume: float) -> float:
    if p == math.inf:
        return float(g.max())
    return float((cell_volume * np.sum(g**p)) ** (1.0 / p))


def _iso_pointwise(mags: Dict[Tuple[int, ...], np.ndarray], s, q) -> np.ndarray:
    keys = sorted(mags)
    acc = None
    for k in keys:
        term = bracket(k, s) * mags[k]
        if q == math.inf:
            acc = term if acc is None else np.maximum(acc, term)
        else:
            term = term**q
            acc = term if acc is None else acc + term
    return acc if q == math.inf else acc ** (1.0 / q)


def _aniso_pointwise(
    mags: Dict[Tuple[int, ...], np.ndarray], s, q, r, trailing: int
) -> np.ndarray:
    """l^r over the last ``trailing`` index coordinates of l^q over the rest,
    weighted by the bracket of the leading coordinates only."""
    groups: Dict[Tuple[int, ...], list] = {}
    for k in sorted(mags):
        groups.setdefault(k[-trailing:], []).append(k)
    outer = None
    for tail in sorted(groups):
        inner = None
        for k in groups[tail]:
            term = bracket(k[:-trailing], s) * mags[k]
            if q == math.inf:
                inner = term if inner is None else np.maximum(inner, term)
            else:
                term = term**q
                inner = term if inner is None else inner + term
        if q != math.inf:
            inner = inner ** (1.0 / q)
        if r == math.inf:
            outer = inner if outer is None else np.maximum(outer, inner)
        else:
            inner = inner**r
            outer = inner if outer is None else outer + inner
    return outer if r == math.inf else outer ** (1.0 / r)


def _require(bands: BandSet, norm_spec: NormSpec, variant: str) -> None:
    if norm_spec.variant != variant:
        raise ValueError(f"expected variant {variant!r}, got {norm_spec.variant!r}")
    if not bands.components:
        raise ValueError("empty band set")


def wiener_norm(bands: BandSet, norm_spec: NormSpec) -> float:
    """Isotropic amalgam norm: at each sample the weighted l^q over all
    bands, (sum_k <k>^{sq} |band_k(x)|^q)^{1/q}, then the spatial L^p."""
    _require(bands, norm_spec, "isotropic")
    g = _iso_pointwise(bands.magnitudes(), norm_spec.s, norm_spec.q)
    return _lp_quadrature(g, norm_spec.p, bands.spec.cell_volume)


def aniso_norm(bands: BandSet, norm_spec: NormSpec) -> float:
    """Last-axis anisotropic norm: l^r over k_n of the weighted l^q over
    kbar, with weight <kbar>^s (not <k>^s), then the spatial L^p."""
    _require(bands, norm_spec, "aniso_last")
    if bands.spec.dimension < 2:
        raise ValueError("anisotropic norm needs dimension >= 2")
    g = _aniso_pointwise(
        bands.magnitudes(), norm_spec.s, norm_spec.q, norm_spec.r, trailing=1
    )
    return _lp_quadrature(g, norm_spec.p, bands.spec.cell_volume)


def aniso2_norm(bands: BandSet, norm_spec: NormSpec) -> float:
    """Two-trailing-axes anisotropic norm: l^r over (k_{n-1}, k_n) of the
    weighted l^q over the leading indices, weight from the leading indices."""
    _require(bands, norm_spec, "aniso_last2")
    if bands.spec.dimension < 3:
        raise ValueError("two-axis anisotropic norm needs dimension >= 3")
    g = _aniso_pointwise(
        bands.magnitudes(), norm_spec.s, norm_spec.q, norm_spec.r, trailing=2
    )
    return _lp_quadrature(g, norm_spec.p, bands.spec.cell_volume)


def maximal_wiener_norm(bands: BandSet, norm_spec: NormSpec) -> float:
    """Same aggregations with each |band_k| replaced by its shift-penalized
    maximal function.

    Equivalence with the plain norms needs b > n / min(p, q); below that the
    value is still computed (a warning is issued) so the failure region can
    be probed.
    """
    if norm_spec.variant not in ("maximal_isotropic", "maximal_aniso"):
        raise ValueError(f"expected a maximal variant, got {norm_spec.variant!r}")
    if not bands.components:
        raise ValueError("empty band set")
    n = bands.spec.dimension
    threshold = n / min(norm_spec.p, norm_spec.q)
    if norm_spec.b <= threshold:
        warnings.warn(
            f"b = {norm_spec.b} is at or below the equivalence threshold "
            f"n/min(p, q) = {threshold}",
            stacklevel=2,
        )
    mags = {
        k: _maximal_magnitudes(bands.components[k], norm_spec.b) for k in bands
    }
    if norm_spec.variant == "maximal_isotropic":
        g = _iso_pointwise(mags, norm_spec.s, norm_spec.q)
    else:
        if n < 2:
            raise ValueError("anisotropic norm needs dimension >= 2")
        g = _aniso_pointwise(mags, norm_spec.s, norm_spec.q, norm_spec.r, trailing=1)
    return _lp_quadrature(g, norm_spec.p, bands.spec.cell_volume)


def evaluate_norm(bands: BandSet, norm_spec: NormSpec) -> float:
    """Dispatch on the variant."""
    if norm_spec.variant == "isotropic":
        return wiener_norm(bands, norm_spec)
    if norm_spec.variant == "aniso_last":
        return aniso_norm(bands, norm_spec)
    if norm_spec.variant == "aniso_last2":
        return aniso2_norm(bands, norm_spec)
    return maximal_wiener_norm(bands, norm_spec)


def sequence_mixed_norm(
    a: WeightedSequence, q, r=None, s: float = 0.0, mode: str = "iso"
) -> float:
    """Weighted mixed sequence norm of a finitely supported sequence.

    mode "iso":        (sum_k (<k>^s a_k)^q)^{1/q}
    mode "aniso_last": (sum_{k_n} (sum_{kbar} (<kbar>^s a_k)^q)^{r/q})^{1/r}

    with sups replacing sums for infinite exponents.
    """
    q = _as_exponent(q)
    if mode == "iso":
        weighted = _bracket_many(a.points, s) * a.values
        return float(_power_reduce(weighted, q))
    if mode != "aniso_last":
        raise ValueError(f"unknown mode {mode!r}")
    if a.dimension < 2:
        raise ValueError("aniso_last mode needs dimension >= 2")
    r = _as_exponent(r)
    weighted = _bracket_many(a.points[:, :-1], s) * a.values
    last = a.points[:, -1]
    inner = [
        _power_reduce(weighted[last == v], q) for v in np.unique(last)
    ]
    return float(_power_reduce(np.asarray(inner), r))
