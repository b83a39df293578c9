"""Band decomposition: spectral masking by the window family, reconstruction,
the mixed trace-window operator, and shift-penalized maximal functions.

A decomposition performs exactly one forward transform; each band is a
pointwise spectral mask followed by one inverse transform.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from .fields import (
    GridSpec,
    SampledField,
    Spectrum,
    _forward_values,
    _inverse_values,
    read_amf,
    write_amf,
)
from .windows import BumpProfile, WindowFamily, axis_window_values

__all__ = [
    "BandComponent",
    "BandSet",
    "box_op",
    "decompose",
    "reconstruct",
    "mixed_box_op",
    "maximal_op",
    "shift_maximal",
    "band_leakage",
    "export_band_set",
    "load_band_set",
]


@dataclass(frozen=True)
class BandComponent:
    """One band: the lattice center k and the filtered field."""

    index: Tuple[int, ...]
    field: SampledField

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(int(v) for v in self.index))


@dataclass(frozen=True)
class BandSet:
    """Dense family of bands over max_i |k_i| <= truncation_radius, all on
    one grid."""

    spec: GridSpec
    truncation_radius: int
    components: Dict[Tuple[int, ...], BandComponent]

    def __post_init__(self):
        K = self.truncation_radius
        n = self.spec.dimension
        expected = (2 * K + 1) ** n
        if len(self.components) != expected:
            raise ValueError(
                f"band set must be dense: {len(self.components)} components, "
                f"expected {expected}"
            )
        for k, comp in self.components.items():
            if len(k) != n or max(abs(v) for v in k) > K:
                raise ValueError(f"component index {k} outside the lattice")
            if comp.field.spec != self.spec:
                raise ValueError("all components must share one grid")

    def __iter__(self):
        return iter(sorted(self.components))

    def magnitudes(self) -> Dict[Tuple[int, ...], np.ndarray]:
        return {k: np.abs(self.components[k].field.values) for k in self}


def _check_geometry(spec: GridSpec, family: WindowFamily) -> None:
    if spec.dimension != family.dimension:
        raise ValueError(
            f"grid dimension {spec.dimension} != family dimension "
            f"{family.dimension}"
        )
    if not spec.admits_radius(family.truncation_radius):
        raise ValueError(
            "incompatible geometry: need N/(2L) > K + 1 on every axis "
            f"(max frequencies {spec.max_frequency}, K = "
            f"{family.truncation_radius})"
        )


@lru_cache(maxsize=32)
def _axis_tables(
    sharpness: float, radius: int, period: Tuple[int, ...], samples: Tuple[int, ...]
) -> Tuple[np.ndarray, ...]:
    """Per-axis normalized window rows on the grid's frequency lattice."""
    bump = BumpProfile(sharpness)
    tables = []
    for L, N in zip(period, samples):
        xi = (np.arange(N) - N // 2) / L
        tab = axis_window_values(bump, radius, xi)
        tab.setflags(write=False)
        tables.append(tab)
    return tuple(tables)


def _window_mask(family: WindowFamily, spec: GridSpec, k) -> np.ndarray:
    tables = _axis_tables(
        family.bump.transition_sharpness,
        family.truncation_radius,
        spec.period,
        spec.samples,
    )
    K = family.truncation_radius
    n = spec.dimension
    mask = np.array(1.0)
    for axis in range(n):
        row = tables[axis][k[axis] + K]
        shape = [1] * n
        shape[axis] = spec.samples[axis]
        mask = mask * row.reshape(shape)
    return mask


def box_op(f: SampledField, k, family: WindowFamily) -> BandComponent:
    """Bandpass at lattice center k: multiply the spectrum by phi_k, invert."""
    _check_geometry(f.spec, family)
    k = tuple(int(v) for v in np.atleast_1d(k))
    if not family.contains(k):
        raise ValueError(f"center {k} outside truncation radius")
    coeffs = _forward_values(f.spec, f.values)
    banded = coeffs * _window_mask(family, f.spec, k)
    return BandComponent(k, SampledField(f.spec, _inverse_values(f.spec, banded)))


def decompose(f: SampledField, family: WindowFamily) -> BandSet:
    """Dense band decomposition over the truncated lattice.

    One forward transform of ``f``; per-band work is a spectral mask plus an
    inverse transform.
    """
    _check_geometry(f.spec, family)
    spec = f.spec
    coeffs = _forward_values(spec, f.values)
    tables = _axis_tables(
        family.bump.transition_sharpness,
        family.truncation_radius,
        spec.period,
        spec.samples,
    )
    K = family.truncation_radius
    n = spec.dimension
    components: Dict[Tuple[int, ...], BandComponent] = {}
    for k in family.lattice():
        mask = np.array(1.0)
        for axis in range(n):
            row = tables[axis][k[axis] + K]
            shape = [1] * n
            shape[axis] = spec.samples[axis]
            mask = mask * row.reshape(shape)
        banded = coeffs * mask
        components[k] = BandComponent(
            k, SampledField(spec, _inverse_values(spec, banded))
        )
    return BandSet(spec, K, components)


def reconstruct(bands: BandSet) -> SampledField:
    """Pointwise sum of every band; inverts :func:`decompose` on fields whose
    spectrum stays within max_i |xi_i| <= K - 1."""
    total = np.zeros(bands.spec.samples, dtype=np.complex128)
    for k in bands:
        total += bands.components[k].field.values
    return SampledField(bands.spec, total)


def mixed_box_op(
    f: SampledField,
    kbar,
    l,
    family: WindowFamily,
    trace_family: WindowFamily,
) -> BandComponent:
    """Spectral multiplication by phi_{kbar}(xi_bar) * phi_l(xi).

    Identically zero when max |kbar - lbar| >= 2 (disjoint supports); that
    case short-circuits without a transform.
    """
    _check_geometry(f.spec, family)
    n = f.dimension
    if trace_family.dimension != n - 1:
        raise ValueError("trace family must have one dimension fewer")
    kbar = tuple(int(v) for v in np.atleast_1d(kbar))
    l = tuple(int(v) for v in np.atleast_1d(l))
    if len(kbar) != n - 1 or len(l) != n:
        raise ValueError("index dimensions do not match the grid")
    if not trace_family.contains(kbar):
        raise ValueError(f"center {kbar} outside trace truncation radius")
    if not family.contains(l):
        raise ValueError(f"center {l} outside truncation radius")
    if max(abs(a - b) for a, b in zip(kbar, l[:-1])) >= 2:
        zeros = np.zeros(f.spec.samples, dtype=np.complex128)
        return BandComponent(l, SampledField(f.spec, zeros))

    tables_n = _axis_tables(
        family.bump.transition_sharpness,
        family.truncation_radius,
        f.spec.period,
        f.spec.samples,
    )
    tables_t = _axis_tables(
        trace_family.bump.transition_sharpness,
        trace_family.truncation_radius,
        f.spec.period[:-1],
        f.spec.samples[:-1],
    )
    Kn = family.truncation_radius
    Kt = trace_family.truncation_radius
    mask = np.array(1.0)
    for axis in range(n):
        row = tables_n[axis][l[axis] + Kn]
        if axis < n - 1:
            row = row * tables_t[axis][kbar[axis] + Kt]
        shape = [1] * n
        shape[axis] = f.spec.samples[axis]
        mask = mask * row.reshape(shape)
    coeffs = _forward_values(f.spec, f.values)
    return BandComponent(
        l, SampledField(f.spec, _inverse_values(f.spec, coeffs * mask))
    )


def _lattice_shifts(spec: GridSpec):
    """Integer translation classes mod the period, as minimal-norm
    representatives; per axis |y_i| <= L_i / 2."""
    reps = []
    for L in spec.period:
        reps.append([c if c <= L // 2 else c - L for c in range(L)])
    return itertools.product(*reps)


def _roll_steps(spec: GridSpec, y) -> Tuple[int, ...]:
    steps = []
    for yi, L, N in zip(y, spec.period, spec.samples):
        if N % L != 0:
            raise ValueError(
                "integer translates must land on the grid (need L | N)"
            )
        steps.append(yi * (N // L))
    return tuple(steps)


def _compose_shift_index(
    samples: Tuple[int, ...], axis_steps: Tuple[Tuple[int, ...], ...]
) -> np.ndarray:
    """Flat gather table: entry [shift, pos] is the row-major index of
    pos - step(shift), with the shift set the product of the per-axis step
    lists (product order)."""
    flat = None
    for N, steps in zip(samples, axis_steps):
        pos = np.arange(N)
        A = (pos[None, :] - np.asarray(steps, dtype=np.int64)[:, None]) % N
        if flat is None:
            flat = A
        else:
            flat = (flat[:, None, :, None] * N + A[None, :, None, :]).reshape(
                flat.shape[0] * A.shape[0], flat.shape[1] * N
            )
    return flat.astype(np.int32, copy=False)


@lru_cache(maxsize=32)
def _lattice_shift_table(period: Tuple[int, ...], samples: Tuple[int, ...]):
    """(squared shift norms, gather index) for the integer-lattice
    translates, in matching product order."""
    reps = [
        tuple(c if c <= L // 2 else c - L for c in range(L)) for L in period
    ]
    axis_steps = []
    for axis, L in enumerate(period):
        N = samples[axis]
        if N % L != 0:
            raise ValueError(
                "integer translates must land on the grid (need L | N)"
            )
        axis_steps.append(tuple(r * (N // L) for r in reps[axis]))
    index = _compose_shift_index(samples, tuple(axis_steps))
    norms2 = np.zeros(1)
    for r in reps:
        arr = np.asarray(r, dtype=float) ** 2
        norms2 = (norms2[:, None] + arr[None, :]).reshape(-1)
    index.setflags(write=False)
    norms2.setflags(write=False)
    return norms2, index


@lru_cache(maxsize=32)
def _dense_shift_norms(period: Tuple[int, ...], samples: Tuple[int, ...]):
    """Squared torus distance of every grid shift, flattened row-major."""
    norms2 = np.zeros(1)
    for L, N in zip(period, samples):
        j = np.arange(N)
        z = ((j + N // 2) % N - N // 2) * (L / N)
        norms2 = (norms2[:, None] + (z * z)[None, :]).reshape(-1)
    norms2.setflags(write=False)
    return norms2


def _penalized_max(
    mag: np.ndarray, index: np.ndarray, weights: np.ndarray, chunk: int = 1 << 22
) -> np.ndarray:
    """max over shifts of mag[pos - shift] / weights[shift], chunked so the
    gather never materializes more than ``chunk`` elements."""
    flat = mag.reshape(-1)
    out = np.full(flat.shape, -np.inf)
    rows = max(1, chunk // flat.size)
    for start in range(0, index.shape[0], rows):
        block = flat[index[start : start + rows]]
        block /= weights[start : start + rows, None]
        np.maximum(out, block.max(axis=0), out=out)
    return out.reshape(mag.shape)


def _maximal_magnitudes(band: BandComponent, b: float) -> np.ndarray:
    if not b > 0:
        raise ValueError("b must be positive")
    spec = band.field.spec
    norms2, index = _lattice_shift_table(spec.period, spec.samples)
    weights = 1.0 + norms2 ** (b / 2.0)
    return _penalized_max(np.abs(band.field.values), index, weights)


def maximal_op(band: BandComponent, b: float) -> SampledField:
    """Shift-penalized band maximal sup_y |band(x - y)| / (1 + |y|^b) over
    integer lattice translates y, folded periodically to the minimal-norm
    representative with max_i |y_i| <= L_i / 2."""
    return SampledField(
        band.field.spec, _maximal_magnitudes(band, b).astype(np.complex128)
    )


def shift_maximal(band: BandComponent, b: float, scale: float = 1.0) -> SampledField:
    """Dense variant: max over every grid shift z (not just integer lattice
    points) of |band(x - z)| / (1 + |scale * z|^b), z folded to the torus.

    This is the continuum reading of the penalized maximal; with
    scale = diameter of the band's support box it matches the compactly
    supported maximal inequality setup.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    spec = band.field.spec
    mag = np.abs(band.field.values)
    norms2 = _dense_shift_norms(spec.period, spec.samples)
    weights = 1.0 + (scale * np.sqrt(norms2)) ** b
    count = mag.size
    if count * count <= (1 << 26):
        axis_steps = tuple(tuple(range(N)) for N in spec.samples)
        index = _dense_shift_index(spec.samples, axis_steps)
        out = _penalized_max(mag, index, weights)
    else:
        # gather table would be too large; fall back to rolling
        out = mag.copy()
        axes = tuple(range(spec.dimension))
        for flat_idx, idx in enumerate(np.ndindex(*spec.samples)):
            if not any(idx):
                continue
            shifted = np.roll(mag, idx, axis=axes)
            np.maximum(out, shifted / weights[flat_idx], out=out)
    return SampledField(spec, out.astype(np.complex128))


@lru_cache(maxsize=8)
def _dense_shift_index(
    samples: Tuple[int, ...], axis_steps: Tuple[Tuple[int, ...], ...]
) -> np.ndarray:
    index = _compose_shift_index(samples, axis_steps)
    index.setflags(write=False)
    return index


def band_leakage(band: BandComponent, family: WindowFamily) -> float:
    """Relative spectral mass of a band outside its support box (should be
    at roundoff level by construction)."""
    spec = band.field.spec
    coeffs = _forward_values(spec, band.field.values)
    inside = np.ones(spec.samples, dtype=bool)
    n = spec.dimension
    for axis in range(n):
        xi = spec.freq_coords(axis)
        ok = np.abs(xi - band.index[axis]) < 1.0
        shape = [1] * n
        shape[axis] = spec.samples[axis]
        inside &= ok.reshape(shape)
    total = float(np.linalg.norm(coeffs))
    if total == 0.0:
        return 0.0
    return float(np.linalg.norm(coeffs[~inside])) / total


def _band_name(k: Tuple[int, ...]) -> str:
    return "band_" + "_".join(str(v) for v in k) + ".amf"


def export_band_set(bands: BandSet, family: WindowFamily, out_dir) -> None:
    """Write one AMF file per band plus an index.json describing the grid,
    the truncation radius, and the window profile."""
    os.makedirs(out_dir, exist_ok=True)
    for k in bands:
        write_amf(bands.components[k].field, os.path.join(out_dir, _band_name(k)))
    index = {
        "grid": {
            "n": bands.spec.dimension,
            "L": list(bands.spec.period),
            "N": list(bands.spec.samples),
        },
        "K": bands.truncation_radius,
        "window": {
            "transition_sharpness": family.bump.transition_sharpness,
            "evaluation_cache_resolution": family.bump.evaluation_cache_resolution,
        },
    }
    with open(os.path.join(out_dir, "index.json"), "w") as fh:
        json.dump(index, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_band_set(in_dir) -> Tuple[BandSet, WindowFamily]:
    """Read a band-set directory written by :func:`export_band_set`."""
    with open(os.path.join(in_dir, "index.json")) as fh:
        index = json.load(fh)
    spec = GridSpec(tuple(index["grid"]["L"]), tuple(index["grid"]["N"]))
    K = int(index["K"])
    bump = BumpProfile(
        index["window"]["transition_sharpness"],
        index["window"].get("evaluation_cache_resolution", 1024),
    )
    family = WindowFamily(spec.dimension, K, bump)
    components = {}
    for k in family.lattice():
        path = os.path.join(in_dir, _band_name(k))
        if not os.path.exists(path):
            raise ValueError(f"band set incomplete: missing {_band_name(k)}")
        f = read_amf(path)
        if f.spec != spec:
            raise ValueError(f"band {k} grid disagrees with index.json")
        components[k] = BandComponent(k, f)
    return BandSet(spec, K, components), family
