"""Sequence-level oracles for the embeddings between the isotropic and the
last-axis anisotropic weighted norms, with the explicit constants the
estimate chains produce.

The embeddings are pointwise-in-space sequence inequalities, so they are
checked on abstract nonnegative sequences: for each admissible case,

    ||a||_{l^r_{k_n} l^q_{kbar}, <kbar>^{s'}}  <=  C * ||a||_{l^q_k, <k>^s}

with C = 1 when the aggregation is a plain regrouping or an index-monotone
step, and C a convergent one-dimensional weight sum otherwise.  Truncated
sums always carry an analytic tail bound so a reported pass is sound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional

import numpy as np

from .norms import WeightedSequence, sequence_mixed_norm
from .report import ReportRow

__all__ = [
    "CASE_IDS",
    "EmbeddingCase",
    "embedding_bound",
    "check_embedding",
    "random_sequences",
]

CASE_IDS = ("I-i", "I-ii", "II-i", "II-ii", "III-i", "III-ii")

INF = math.inf


@dataclass(frozen=True)
class EmbeddingCase:
    """One embedding instance, classified by how r compares with q.

    I  (r = q):  "-i" both infinite, "-ii" both finite; constant 1, s >= 0.
    II (r < q):  "-i" q infinite, "-ii" q finite; needs s > 1/r resp.
                 s > 1/r - 1/q, lands at s' = s - 1/r - eps resp.
                 s - (1/r - 1/q) - eps.
    III (q < r): "-i" r infinite, "-ii" r finite; constant 1, s >= 0.
    """

    case_id: str
    s: float
    q: float
    r: float
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.case_id not in CASE_IDS:
            raise ValueError(f"unknown case id {self.case_id!r}")
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "r", float(self.r))
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", float(self.epsilon))
        s, q, r, eps = self.s, self.q, self.r, self.epsilon
        cid = self.case_id
        if cid in ("I-i", "I-ii", "III-i", "III-ii"):
            if s < 0:
                raise ValueError(f"case {cid} needs s >= 0")
            if eps is not None:
                raise ValueError(f"case {cid} does not take epsilon")
        if cid == "I-i" and not (q == INF and r == INF):
            raise ValueError("case I-i needs q = r = inf")
        if cid == "I-ii" and not (q == r and q < INF):
            raise ValueError("case I-ii needs q = r finite")
        if cid == "II-i":
            if not (q == INF and r < INF):
                raise ValueError("case II-i needs q = inf and finite r")
            if eps is None or eps <= 0:
                raise ValueError("case II-i needs epsilon > 0")
            if not s > 1.0 / r:
                raise ValueError("inadmissible: case II-i needs s > 1/r")
            if s - 1.0 / r - eps < 0:
                raise ValueError("epsilon too large: the derived s' must be >= 0")
        if cid == "II-ii":
            if not (r < q < INF):
                raise ValueError("case II-ii needs r < q, both finite")
            if eps is None or eps <= 0:
                raise ValueError("case II-ii needs epsilon > 0")
            gap = 1.0 / r - 1.0 / q
            if not s > gap:
                raise ValueError("inadmissible: case II-ii needs s > 1/r - 1/q")
            if s - gap - eps < 0:
                raise ValueError("epsilon too large: the derived s' must be >= 0")
        if cid == "III-i" and not (q < INF and r == INF):
            raise ValueError("case III-i needs finite q and r = inf")
        if cid == "III-ii" and not (q < r < INF):
            raise ValueError("case III-ii needs q < r finite")

    @property
    def s_prime(self) -> float:
        if self.case_id == "II-i":
            return self.s - 1.0 / self.r - self.epsilon
        if self.case_id == "II-ii":
            return self.s - (1.0 / self.r - 1.0 / self.q) - self.epsilon
        return self.s

    @property
    def alpha(self) -> Optional[float]:
        """Interpolation weight of the finite-q overlapping-sum split."""
        if self.case_id != "II-ii":
            return None
        return 1.0 - self.r / self.q + self.epsilon * self.r


def _bracket_power_sum(beta: float, truncation: int) -> float:
    """sum over integer m of (1 + m^2)^(-beta/2), as truncated sum plus an
    analytic tail majorant (never the bare truncation)."""
    if beta <= 1.0:
        raise ValueError("weight sum diverges for exponent <= 1")
    m = np.arange(1, truncation + 1, dtype=float)
    partial = 1.0 + 2.0 * float(np.sum((1.0 + m * m) ** (-beta / 2.0)))
    # (1 + m^2)^(1/2) >= m, so the tail is below 2 * int_M^inf x^-beta dx.
    tail = 2.0 * truncation ** (1.0 - beta) / (beta - 1.0)
    return partial + tail


def _sup_weight_factor(case: EmbeddingCase, window: int = 64) -> float:
    """sup_k <kbar>^{s'} <k_n>^{alpha/r} <k>^{-s}, scanned over a lattice
    window.  With these brackets each term is <= 1 and the value 1 is
    attained at k = 0; terms vanish at infinity, so the window captures it."""
    sp, s = case.s_prime, case.s
    ar = case.alpha / case.r
    u = np.arange(0, window * window + 1, dtype=float)  # attainable |kbar|^2
    m = np.arange(0, window + 1, dtype=float)
    U, M = np.meshgrid(u, m, indexing="ij")
    vals = (
        (1.0 + U) ** (sp / 2.0)
        * (1.0 + M * M) ** (ar / 2.0)
        * (1.0 + U + M * M) ** (-s / 2.0)
    )
    return float(vals.max())


@lru_cache(maxsize=256)
def embedding_bound(case: EmbeddingCase, truncation: int = 100_000) -> float:
    """Constant C with LHS <= C * RHS for the case's estimate chain.

    Regrouping/monotone cases return exactly 1.  The r < q cases return the
    convergent one-dimensional weight sums of their chains:

    II-i:  (sum_m <m>^{-(s - s') r})^{1/r}, exponent (s - s') r = 1 + eps r.
    II-ii: Hoelder factor (sum_m <m>^{-alpha (q/r)'})^{1/((q/r)' r)} times
           the sup weight factor (= 1 for these brackets).
    """
    if case.case_id in ("I-i", "I-ii", "III-i", "III-ii"):
        return 1.0
    if case.case_id == "II-i":
        gamma = (case.s - case.s_prime) * case.r  # = 1 + eps * r > 1
        return _bracket_power_sum(gamma, truncation) ** (1.0 / case.r)
    # II-ii
    qr = case.q / case.r
    conj = qr / (qr - 1.0)
    beta = case.alpha * conj  # = 1 + eps / (1/r - 1/q) > 1
    hoelder = _bracket_power_sum(beta, truncation) ** (1.0 / (conj * case.r))
    return hoelder * _sup_weight_factor(case)


def check_embedding(case: EmbeddingCase, a: WeightedSequence) -> ReportRow:
    """Compare the anisotropic norm at the derived regularity against the
    isotropic norm at s, with the case's analytic constant."""
    if a.dimension < 2:
        raise ValueError("embedding check needs sequences of dimension >= 2")
    lhs = sequence_mixed_norm(a, q=case.q, r=case.r, s=case.s_prime, mode="aniso_last")
    rhs = sequence_mixed_norm(a, q=case.q, s=case.s, mode="iso")
    bound = embedding_bound(case)
    eps = "" if case.epsilon is None else f",eps={case.epsilon:g}"
    params = (
        f"case={case.case_id},n={a.dimension},q={case.q:g},r={case.r:g},"
        f"s={case.s:g}{eps}"
    )
    return ReportRow.build("embedding", params, lhs, rhs, bound)


def random_sequences(
    seed, count: int, dimension: int, radius: int = 16
) -> List[WeightedSequence]:
    """Deterministic corpus of finitely supported nonnegative sequences with
    support in max|k| <= radius; starts with a few structured members."""
    rng = np.random.default_rng(seed)
    out: List[WeightedSequence] = []
    zero = np.zeros((1, dimension), dtype=int)
    out.append(WeightedSequence(zero, np.ones(1)))
    corner = np.full((1, dimension), radius, dtype=int)
    out.append(WeightedSequence(corner, np.ones(1)))
    box = np.array(
        np.meshgrid(*([range(-1, 2)] * dimension), indexing="ij")
    ).reshape(dimension, -1).T
    out.append(WeightedSequence(box, np.ones(box.shape[0])))
    while len(out) < count:
        size = int(rng.integers(1, 48))
        pts = rng.integers(-radius, radius + 1, size=(size, dimension))
        pts = np.unique(pts, axis=0)
        vals = rng.exponential(scale=1.0, size=pts.shape[0])
        out.append(WeightedSequence(pts, vals))
    return out[:count]
