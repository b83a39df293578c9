"""Experiment configuration and deterministic test-field generation.

Corpus members are drawn as grid-independent spectral recipes (frequency
indices plus coefficients) confined to the admissible box
max_i |xi_i| <= K - 1, then materialized on a grid.  The same seed therefore
yields the same band-limited function on a grid and on its refinement, and
every member reconstructs exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields as dc_fields
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import GridSpec, SampledField, Spectrum, inverse_transform, lp_norm
from .windows import BumpProfile, WindowFamily

__all__ = ["ExperimentConfig", "default_cases", "generate_corpus", "make_corpus"]


def default_cases() -> Tuple[Dict, ...]:
    """Admissible embedding-case parameters covering every regime, finite
    and infinite exponents, and the quasi-norm range."""
    return (
        {"case_id": "I-i", "s": 0.0, "q": "inf", "r": "inf"},
        {"case_id": "I-i", "s": 1.5, "q": "inf", "r": "inf"},
        {"case_id": "I-ii", "s": 1.0, "q": 0.5, "r": 0.5},
        {"case_id": "I-ii", "s": 0.0, "q": 2.0, "r": 2.0},
        {"case_id": "I-ii", "s": 1.5, "q": 2.0, "r": 2.0},
        {"case_id": "II-i", "s": 2.5, "q": "inf", "r": 0.5, "epsilon": 0.2},
        {"case_id": "II-i", "s": 1.5, "q": "inf", "r": 1.0, "epsilon": 0.2},
        {"case_id": "II-i", "s": 1.0, "q": "inf", "r": 2.0, "epsilon": 0.1},
        {"case_id": "II-ii", "s": 1.0, "q": 2.0, "r": 1.0, "epsilon": 0.2},
        {"case_id": "II-ii", "s": 1.5, "q": 1.0, "r": 0.5, "epsilon": 0.2},
        {"case_id": "II-ii", "s": 0.75, "q": 4.0, "r": 2.0, "epsilon": 0.2},
        {"case_id": "III-i", "s": 0.0, "q": 0.5, "r": "inf"},
        {"case_id": "III-i", "s": 1.0, "q": 2.0, "r": "inf"},
        {"case_id": "III-ii", "s": 0.0, "q": 1.0, "r": 2.0},
        {"case_id": "III-ii", "s": 1.0, "q": 0.5, "r": 1.0},
        {"case_id": "III-ii", "s": 1.0, "q": 2.0, "r": 4.0},
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """Reproducible description of a verification run.

    Desk-scale defaults: the short axes use period 2 so the truncation
    radius fits inside the representable band (N/(2L) > K + 1); the last
    axis of the trace grid uses period 16 so the extension bump is resolved
    by the frequency lattice.
    """

    period: Tuple[int, ...] = (2, 16)
    samples: Tuple[int, ...] = (32, 192)
    radius: int = 4
    sharpness: float = 1.0
    seed: int = 20160919
    corpus_size: int = 50
    trace_corpus_size: int = 100
    pq_pairs: Tuple[Tuple[float, float], ...] = ((2, 2), (2, 1), (4, 0.5), (1, 2))
    s: float = 0.5
    b: Optional[float] = None
    epsilon: float = 0.1
    sequences_per_case: int = 1000
    sequence_dims: Tuple[int, ...] = (2, 3)
    sequence_radius: int = 16
    cases: Tuple[Dict, ...] = field(default_factory=default_cases)
    refine_factor: int = 2
    triebel_period: Tuple[int, ...] = (2, 2)
    triebel_samples: Tuple[int, ...] = (32, 32)
    triebel_corpus: int = 10
    triebel_r: float = 1.0
    triebel_pq: Tuple[float, float] = (2, 2)
    maximal_pq: Tuple[Tuple[float, float], ...] = ((2, 2),)
    workers: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "period", tuple(int(v) for v in self.period))
        object.__setattr__(self, "samples", tuple(int(v) for v in self.samples))
        if len(self.period) != len(self.samples):
            raise ValueError("period and samples must have equal length")
        if self.radius < 1:
            raise ValueError("radius must be a positive integer")
        grid = self.grid()
        if not grid.admits_radius(self.radius):
            raise ValueError(
                "grid cannot represent the window family: need N/(2L) > K + 1"
            )

    @property
    def dimension(self) -> int:
        return len(self.period)

    def grid(self) -> GridSpec:
        return GridSpec(self.period, self.samples)

    def family(self) -> WindowFamily:
        return WindowFamily(self.dimension, self.radius, BumpProfile(self.sharpness))

    def trace_family(self) -> WindowFamily:
        return WindowFamily(
            self.dimension - 1, self.radius, BumpProfile(self.sharpness)
        )

    def auto_b(self, p: float, q: float) -> float:
        """Default maximal weight exponent, just above the equivalence
        threshold n / min(p, q)."""
        if self.b is not None:
            return self.b
        return self.dimension / min(p, q) + 0.01

    def to_dict(self) -> Dict:
        out = {}
        for f in dc_fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = _tuple_to_list(v)
            out[f.name] = v
        return out

    @classmethod
    def from_dict(cls, data: Dict) -> "ExperimentConfig":
        known = {f.name for f in dc_fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in data.items():
            if isinstance(value, list):
                value = _list_to_tuple(value)
            kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _tuple_to_list(v):
    return [_tuple_to_list(x) if isinstance(x, tuple) else x for x in v]


def _list_to_tuple(v):
    return tuple(_list_to_tuple(x) if isinstance(x, list) else x for x in v)


CORPUS_KINDS = ("tone", "trig", "gauss", "separable")


def _draw_recipe(rng, kind: str, period: Tuple[int, ...], radius: int):
    """One spectral recipe: integer frequency indices (j, frequency j/L) and
    complex coefficients, all inside |j_a| <= (radius - 1) * L_a."""
    n = len(period)
    bounds = [(radius - 1) * L for L in period]
    if kind == "tone":
        k = rng.integers(-(radius - 1), radius, size=n)
        idx = np.array([k * np.array(period)])
        return idx.astype(int), np.ones(1, dtype=np.complex128)
    if kind == "trig":
        count = int(rng.integers(2, 41))
        idx = np.stack(
            [rng.integers(-b, b + 1, size=count) for b in bounds], axis=1
        )
        coeffs = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        return idx.astype(int), coeffs
    if kind == "gauss":
        reach = max(radius - 2, 0)
        k = rng.integers(-reach, reach + 1, size=n)
        width = max((radius - 1) / 3.0, 0.5)
        axes = [np.arange(-b, b + 1) for b in bounds]
        mesh = np.meshgrid(*axes, indexing="ij")
        idx = np.stack([m.ravel() for m in mesh], axis=1)
        xi = idx / np.array(period, dtype=float)
        envelope = np.exp(-np.sum((xi - k) ** 2, axis=1) / (2.0 * width**2))
        phases = rng.uniform(0.0, 2.0 * np.pi, size=idx.shape[0])
        return idx.astype(int), envelope * np.exp(1j * phases)
    if kind == "separable":
        per_axis = []
        for b in bounds:
            count = int(rng.integers(1, 6))
            js = rng.integers(-b, b + 1, size=count)
            cs = rng.standard_normal(count) + 1j * rng.standard_normal(count)
            per_axis.append((js, cs))
        import itertools

        idx_rows = []
        coeffs = []
        for combo in itertools.product(*(range(len(js)) for js, _ in per_axis)):
            idx_rows.append([per_axis[a][0][i] for a, i in enumerate(combo)])
            c = 1.0 + 0.0j
            for a, i in enumerate(combo):
                c *= per_axis[a][1][i]
            coeffs.append(c)
        return np.array(idx_rows, dtype=int), np.array(coeffs, dtype=np.complex128)
    raise ValueError(f"unknown corpus kind {kind!r}")


def _materialize(spec: GridSpec, idx: np.ndarray, coeffs: np.ndarray) -> SampledField:
    grid_coeffs = np.zeros(spec.samples, dtype=np.complex128)
    offsets = np.array([N // 2 for N in spec.samples])
    flat = np.ravel_multi_index((idx + offsets).T, spec.samples)
    np.add.at(grid_coeffs.reshape(-1), flat, coeffs)
    f = inverse_transform(Spectrum(spec, grid_coeffs))
    scale = lp_norm(f, 2)
    if scale == 0.0:  # cancellation wiped the draw; fall back to the dc tone
        grid_coeffs[tuple(offsets)] = 1.0
        f = inverse_transform(Spectrum(spec, grid_coeffs))
        scale = lp_norm(f, 2)
    return SampledField(spec, f.values / scale)


def make_corpus(
    spec: GridSpec,
    radius: int,
    size: int,
    seed,
    kinds: Sequence[str] = CORPUS_KINDS,
) -> List[SampledField]:
    """Deterministic mixture of unit-energy band-limited fields with spectrum
    inside max_i |xi_i| <= radius - 1.

    Kinds cycle through: single tones at integer centers, random
    trigonometric polynomials, Gaussian spectral envelopes riding a tone,
    and separable per-axis products.  The draws never consult the sample
    counts, so refining the grid reproduces the same functions.
    """
    rng = np.random.default_rng([int(seed), radius, size, *spec.period])
    out: List[SampledField] = []
    for i in range(size):
        idx, coeffs = _draw_recipe(rng, kinds[i % len(kinds)], spec.period, radius)
        out.append(_materialize(spec, idx, coeffs))
    return out


def generate_corpus(config: ExperimentConfig) -> List[SampledField]:
    """Corpus on the configured grid (seeded, size as configured)."""
    return make_corpus(config.grid(), config.radius, config.corpus_size, config.seed)
