"""Restriction to the last-axis zero hyperplane and its explicit right
inverse built from a narrow frequency bump on the last axis.

The extension multiplies an (n-1)-dimensional field by the inverse transform
of a bump supported in (-1/4, 1/4), normalized so the weight equals one at
the hyperplane; restriction then recovers the field exactly.  Because the
window family factors per axis, every band of an extension factors as
(band of the field) x (band of the weight).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple

import numpy as np

from .bands import BandComponent, _maximal_magnitudes, box_op, mixed_box_op
from .fields import GridSpec, SampledField, slice_last_axis
from .windows import BumpProfile, WindowFamily, eval_eta

__all__ = [
    "ExtensionProfile",
    "trace",
    "extend",
    "extension_weight",
    "trace_band_identity_residual",
    "band_margin",
    "pointwise_maximal_bound_margin",
]


@dataclass(frozen=True)
class ExtensionProfile:
    """Frequency-side bump for the extension operator: smooth, supported in
    (-support_radius, support_radius), unit integral.

    ``normalization`` is fixed at construction by one fine quadrature of the
    raw bump; the extension itself re-normalizes on the target frequency
    lattice so that the spatial weight is exactly one at x_n = 0.
    """

    bump: BumpProfile = field(default_factory=BumpProfile)
    support_radius: float = 0.25
    normalization: float = 0.0

    def __post_init__(self):
        if not 0 < self.support_radius <= 0.25:
            raise ValueError("support_radius must lie in (0, 1/4]")
        # Riemann quadrature at 2^-16 of the support width; frozen afterwards.
        grid = np.linspace(
            -self.support_radius, self.support_radius, (1 << 16) + 1
        )
        raw = eval_eta(self.bump, 2.0 * grid / self.support_radius)
        step = grid[1] - grid[0]
        object.__setattr__(self, "normalization", 1.0 / float(raw.sum() * step))

    def eta_prime(self, xi) -> np.ndarray:
        """Evaluate the normalized bump (unit integral) at frequencies xi."""
        xi = np.asarray(xi, dtype=float)
        return self.normalization * eval_eta(self.bump, 2.0 * xi / self.support_radius)


@lru_cache(maxsize=32)
def _weight_samples(
    sharpness: float, support_radius: float, L: int, N: int
) -> np.ndarray:
    """Spatial weight on a 1-d grid: inverse transform of the bump sampled
    on the frequency lattice, rescaled so the weight at x = 0 is exactly 1
    (equivalently, the lattice quadrature of the bump is exactly 1)."""
    from .fields import Spectrum, inverse_transform  # local: avoid cycle at import

    profile = ExtensionProfile(BumpProfile(sharpness), support_radius)
    spec1d = GridSpec((L,), (N,))
    coeffs = profile.eta_prime(spec1d.freq_coords(0)).astype(np.complex128)
    total = float(coeffs.real.sum())
    if total <= 0:
        raise ValueError("frequency lattice too coarse to resolve the bump")
    coeffs *= L / total
    w = inverse_transform(Spectrum(spec1d, coeffs)).values
    w.setflags(write=False)
    return w


def extension_weight(profile: ExtensionProfile, L: int, N: int) -> np.ndarray:
    """Spatial extension weight w = (1-d inverse transform of the bump) on
    an (L, N) axis, with w(0) = 1 exactly."""
    return _weight_samples(
        profile.bump.transition_sharpness, profile.support_radius, int(L), int(N)
    )


def trace(f: SampledField) -> SampledField:
    """Restriction x -> (xbar, 0); the samples on the last-axis zero plane."""
    return slice_last_axis(f)


def extend(
    f: SampledField, profile: ExtensionProfile, target: GridSpec
) -> SampledField:
    """Tensor extension g(xbar, x_n) = w(x_n) f(xbar) onto ``target``.

    The target's leading axes must match the field's grid; its last axis
    carries the weight.  trace(extend(f)) == f to roundoff.
    """
    if target.dimension != f.dimension + 1:
        raise ValueError("target must add exactly one axis")
    if (
        target.period[:-1] != f.spec.period
        or target.samples[:-1] != f.spec.samples
    ):
        raise ValueError("target leading axes disagree with the field grid")
    w = extension_weight(profile, target.period[-1], target.samples[-1])
    return SampledField(target, f.values[..., None] * w)


def trace_band_identity_residual(
    f: SampledField,
    kbar,
    family: WindowFamily,
    trace_family: WindowFamily,
) -> float:
    """Max absolute mismatch between the kbar band of the traced field and
    the traced sum of mixed bands over l with max |kbar - lbar| <= 1.

    Exact (up to roundoff) whenever the spectrum of ``f`` stays within
    max_i |xi_i| <= K - 1.
    """
    if f.dimension < 2:
        raise ValueError("needs dimension >= 2")
    kbar = tuple(int(v) for v in np.atleast_1d(kbar))
    lhs = box_op(trace(f), kbar, trace_family).field.values

    K = family.truncation_radius
    rhs = np.zeros(lhs.shape, dtype=np.complex128)
    lbar_ranges = [
        range(max(c - 1, -K), min(c + 1, K) + 1) for c in kbar
    ]
    import itertools

    for lbar in itertools.product(*lbar_ranges):
        for ln in range(-K, K + 1):
            comp = mixed_box_op(f, kbar, lbar + (ln,), family, trace_family)
            rhs += slice_last_axis(comp.field).values
    return float(np.max(np.abs(lhs - rhs)))


def band_margin(band: BandComponent, b: float) -> float:
    """Margin of the pointwise restriction bound for one band.

    The maximal takes integer-lattice translates on the leading axes and
    every grid translate along the last axis: the bound compares the band
    at (xbar, 0) with the maximal at (xbar, x_n), which needs the last-axis
    shift y_n = x_n, a dense shift on the grid.  Only the samples with
    |x_n| <= 1 enter the minimum, so the maximal is evaluated just there.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    spec = band.field.spec
    if spec.dimension < 2:
        raise ValueError("needs dimension >= 2")
    from .bands import _lattice_shifts, _roll_steps  # shared folding rules

    mag = np.abs(band.field.values)
    at_zero = np.abs(slice_last_axis(band.field).values)
    L_last, N_last = spec.period[-1], spec.samples[-1]
    x_last = spec.x_coords(spec.dimension - 1)
    keep = np.nonzero(np.abs(x_last) <= 1.0 + 1e-12)[0]
    j = np.arange(N_last)
    z = ((j + N_last // 2) % N_last - N_last // 2) * (L_last / N_last)
    gather = (keep[None, :] - j[:, None]) % N_last  # (N_last, nkeep)
    lead = GridSpec(spec.period[:-1], spec.samples[:-1])
    lead_axes = tuple(range(spec.dimension - 1))
    star = None
    for ybar in _lattice_shifts(lead):
        shifted = (
            np.roll(mag, _roll_steps(lead, ybar), axis=lead_axes)
            if any(ybar)
            else mag
        )
        lead_sq = float(sum(v * v for v in ybar))
        weights = 1.0 + np.sqrt(lead_sq + z * z) ** b
        cand = (shifted[..., gather] / weights[:, None]).max(axis=-2)
        star = cand if star is None else np.maximum(star, cand)
    margins = 2.0 * star - at_zero[..., None]
    return float(margins.min())


def pointwise_maximal_bound_margin(
    f: SampledField, k, family: WindowFamily, b: float
) -> float:
    """Minimum over samples with |x_n| <= 1 of
    2 * (penalized maximal of band k)(xbar, x_n) - |band_k(xbar, 0)|.

    The factor 2 bounds the shift weight 1 + |y_n|^b on |y_n| <= 1.  The
    maximal takes lattice shifts on the leading axes and dense grid shifts
    along the last axis (so the certifying shift y_n = x_n is available at
    every sample); a nonnegative return certifies the bound.
    """
    if f.dimension < 2:
        raise ValueError("needs dimension >= 2")
    return band_margin(box_op(f, k, family), b)
