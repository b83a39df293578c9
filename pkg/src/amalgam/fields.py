"""Periodic sampled fields on the torus [-L/2, L/2)^n.

Holds grid geometry, the exactly invertible centered Fourier transform pair,
Lebesgue quasi-norms by Riemann quadrature, restriction to the last-axis
zero hyperplane, and the AMF file format.

Transform convention: f_hat(xi) = sum_x f(x) e^{-2 pi i x.xi} * prod(L_i/N_i),
so a pure tone e^{2 pi i k.x} with integer k carries a single coefficient of
value prod(L_i) at xi = k.  Frequencies live on the lattice xi_i = j_i / L_i
with j_i in [-N_i/2, N_i/2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

__all__ = [
    "GridSpec",
    "SampledField",
    "Spectrum",
    "forward_transform",
    "inverse_transform",
    "lp_norm",
    "slice_last_axis",
    "tone",
    "read_amf",
    "write_amf",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: per-axis integer period L and sample count N.

    Axis i covers [-L_i/2, L_i/2) with spacing L_i/N_i; the frequency grid
    has spacing 1/L_i and spans [-N_i/(2 L_i), N_i/(2 L_i)).
    """

    period: Tuple[int, ...]
    samples: Tuple[int, ...]

    def __post_init__(self):
        period = tuple(int(v) for v in np.atleast_1d(self.period))
        samples = tuple(int(v) for v in np.atleast_1d(self.samples))
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "samples", samples)
        if len(period) != len(samples) or not period:
            raise ValueError("period and samples must be equal-length, nonempty")
        if any(L < 1 for L in period) or any(N < 1 for N in samples):
            raise ValueError("period and samples must be positive integers")

    @property
    def dimension(self) -> int:
        return len(self.period)

    @property
    def cell_volume(self) -> float:
        return float(np.prod([L / N for L, N in zip(self.period, self.samples)]))

    @property
    def max_frequency(self) -> Tuple[float, ...]:
        return tuple(N / (2 * L) for L, N in zip(self.period, self.samples))

    def x_coords(self, axis: int) -> np.ndarray:
        L, N = self.period[axis], self.samples[axis]
        return -L / 2 + np.arange(N) * (L / N)

    def freq_indices(self, axis: int) -> np.ndarray:
        N = self.samples[axis]
        return np.arange(N) - N // 2

    def freq_coords(self, axis: int) -> np.ndarray:
        return self.freq_indices(axis) / self.period[axis]

    def admits_radius(self, radius: int) -> bool:
        """True when every window centered in max|k| <= radius is fully
        representable: N/(2L) > radius + 1 on each axis."""
        return all(m > radius + 1 for m in self.max_frequency)

    def traced(self) -> "GridSpec":
        if self.dimension < 2:
            raise ValueError("cannot drop the last axis of a 1-d grid")
        return GridSpec(self.period[:-1], self.samples[:-1])

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.period, tuple(N * factor for N in self.samples))


def _freeze(values: np.ndarray, shape) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, order="C")
    if arr.shape != tuple(shape):
        raise ValueError(f"values shape {arr.shape} != grid shape {tuple(shape)}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SampledField:
    """Immutable complex samples of a periodic function on a GridSpec."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values, self.spec.samples))

    @property
    def dimension(self) -> int:
        return self.spec.dimension


@dataclass(frozen=True)
class Spectrum:
    """Centered Fourier coefficients on the lattice xi_i = j_i / L_i."""

    spec: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _freeze(self.coefficients, self.spec.samples)
        )


@lru_cache(maxsize=64)
def _phase_signs(period: Tuple[int, ...], samples: Tuple[int, ...]) -> np.ndarray:
    """(-1)^{j_1 + ... + j_n} over the centered index grid: the exact phase
    e^{-2 pi i x_0 . xi_j} for the leftmost sample x_0 = -L/2."""
    n = len(samples)
    total = np.ones(samples)
    for axis, N in enumerate(samples):
        j = np.arange(N) - N // 2
        signs = 1.0 - 2.0 * (np.abs(j) % 2)
        shape = [1] * n
        shape[axis] = N
        total = total * signs.reshape(shape)
    total.setflags(write=False)
    return total


def _scale(spec: GridSpec) -> float:
    return float(np.prod([L / N for L, N in zip(spec.period, spec.samples)]))


def _forward_values(spec: GridSpec, values: np.ndarray) -> np.ndarray:
    F = np.fft.fftshift(np.fft.fftn(values))
    return F * (_phase_signs(spec.period, spec.samples) * _scale(spec))


def _inverse_values(spec: GridSpec, coefficients: np.ndarray) -> np.ndarray:
    signs = _phase_signs(spec.period, spec.samples)
    return np.fft.ifftn(np.fft.ifftshift(coefficients * signs)) / _scale(spec)


def forward_transform(f: SampledField) -> Spectrum:
    """Centered discrete Fourier coefficients of ``f`` (integral convention)."""
    return Spectrum(f.spec, _forward_values(f.spec, f.values))


def inverse_transform(spectrum: Spectrum) -> SampledField:
    """Exact inverse of :func:`forward_transform` up to roundoff."""
    return SampledField(
        spectrum.spec, _inverse_values(spectrum.spec, spectrum.coefficients)
    )


def lp_norm(f: SampledField, p) -> float:
    """Riemann-sum L^p quasi-norm, ((prod L_i/N_i) sum |f|^p)^(1/p).

    Valid for every p > 0 (no triangle inequality is used anywhere); p = inf
    takes the max of |f| over samples.
    """
    p = float(p)
    mag = np.abs(f.values)
    if p == math.inf:
        return float(mag.max())
    if p <= 0:
        raise ValueError("p must be positive or inf")
    return float((f.spec.cell_volume * np.sum(mag**p)) ** (1.0 / p))


def slice_last_axis(f: SampledField) -> SampledField:
    """Samples on the hyperplane where the last coordinate equals zero."""
    if f.dimension < 2:
        raise ValueError("slice_last_axis needs dimension >= 2")
    N = f.spec.samples[-1]
    if N % 2 != 0:
        raise ValueError("last axis needs an even sample count to contain x = 0")
    return SampledField(f.spec.traced(), f.values[..., N // 2])


def tone(spec: GridSpec, k) -> SampledField:
    """Pure exponential e^{2 pi i k.x} sampled on the grid."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (spec.dimension,):
        raise ValueError("tone frequency must match the grid dimension")
    phase = np.zeros(spec.samples)
    n = spec.dimension
    for axis in range(n):
        shape = [1] * n
        shape[axis] = spec.samples[axis]
        phase = phase + k[axis] * spec.x_coords(axis).reshape(shape)
    return SampledField(spec, np.exp(2j * np.pi * phase))


AMF_DTYPE = "c128"


def write_amf(f: SampledField, path) -> None:
    """Write the AMF container: one JSON header line, then raw little-endian
    interleaved (re, im) float64 samples in row-major order."""
    header = {
        "n": f.dimension,
        "L": list(f.spec.period),
        "N": list(f.spec.samples),
        "dtype": AMF_DTYPE,
    }
    flat = np.ravel(f.values, order="C")
    inter = np.empty(2 * flat.size, dtype="<f8")
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("ascii") + b"\n")
        fh.write(inter.tobytes())


def read_amf(path) -> SampledField:
    """Read an AMF file; validates the header and the sample count."""
    with open(path, "rb") as fh:
        head = fh.readline()
        raw = fh.read()
    try:
        header = json.loads(head.decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"bad AMF header: {exc}") from exc
    for key in ("n", "L", "N", "dtype"):
        if key not in header:
            raise ValueError(f"AMF header missing {key!r}")
    if header["dtype"] != AMF_DTYPE:
        raise ValueError(f"unsupported AMF dtype {header['dtype']!r}")
    spec = GridSpec(tuple(header["L"]), tuple(header["N"]))
    if spec.dimension != header["n"]:
        raise ValueError("AMF header dimension disagrees with L/N lists")
    count = int(np.prod(spec.samples))
    data = np.frombuffer(raw, dtype="<f8")
    if data.size != 2 * count:
        raise ValueError(
            f"AMF payload holds {data.size // 2} samples, expected {count}"
        )
    values = (data[0::2] + 1j * data[1::2]).reshape(spec.samples)
    return SampledField(spec, values)
