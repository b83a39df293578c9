"""Verification suites: independent jobs over (check x corpus member) run on
a thread pool, assembled deterministically.

Every job is a pure function of seeded inputs, and rows are gathered in
submission order, so two runs with the same config produce byte-identical
reports regardless of scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence

import numpy as np

from .bands import decompose
from .corpus import ExperimentConfig, make_corpus
from .checks import (
    check_maximal_equivalence,
    check_trace_inequality,
    check_triebel_maximal,
)
from .embeddings import EmbeddingCase, check_embedding, random_sequences
from .fields import GridSpec, SampledField
from .norms import NormSpec, aniso_norm, wiener_norm
from .report import ReportRow
from .traceops import (
    ExtensionProfile,
    band_margin,
    extend,
    extension_weight,
    trace,
    trace_band_identity_residual,
)
from .windows import BumpProfile, WindowFamily

__all__ = ["SUITES", "run_suites"]


def _case_from_dict(data: Dict) -> EmbeddingCase:
    def exponent(v):
        return math.inf if v in ("inf", "Infinity") else float(v)

    return EmbeddingCase(
        case_id=data["case_id"],
        s=float(data["s"]),
        q=exponent(data["q"]),
        r=exponent(data["r"]),
        epsilon=data.get("epsilon"),
    )


def _embeddings_suite(config: ExperimentConfig, pool: ThreadPoolExecutor):
    jobs = []
    for n in config.sequence_dims:
        for case_index, case_data in enumerate(config.cases):
            case = _case_from_dict(case_data)
            jobs.append((n, case_index, case))

    def run(job):
        n, case_index, case = job
        seqs = random_sequences(
            [config.seed, case_index, n],
            config.sequences_per_case,
            n,
            config.sequence_radius,
        )
        rows = []
        for i, a in enumerate(seqs):
            row = check_embedding(case, a)
            rows.append(
                ReportRow(
                    row.check,
                    row.params + f",seq={i}",
                    row.lhs,
                    row.rhs,
                    row.ratio,
                    row.bound,
                    row.passed,
                )
            )
        return rows

    out: List[ReportRow] = []
    for rows in pool.map(run, jobs):
        out.extend(rows)
    return out


def _trace_suite(config: ExperimentConfig, pool: ThreadPoolExecutor):
    """Band identity residuals, pointwise-bound margins, trace-norm ratios,
    and the grid-refinement stability of the corpus max ratio."""
    grid = config.grid()
    family = config.family()
    trace_family = config.trace_family()
    corpus = make_corpus(grid, config.radius, config.trace_corpus_size, config.seed)
    margin_corpus_len = min(config.corpus_size, len(corpus))
    K = config.radius

    def run(item):
        i, f = item
        rows: List[ReportRow] = []
        bands = decompose(f, family)
        if i < margin_corpus_len:
            kbar_span = range(-(K - 1), K)
            import itertools

            residual = max(
                trace_band_identity_residual(f, kbar, family, trace_family)
                for kbar in itertools.product(
                    kbar_span, repeat=f.dimension - 1
                )
            )
            rows.append(
                ReportRow.build(
                    "trace_band_identity", f"field={i}", residual, 1.0, bound=1e-9
                )
            )
            b = config.auto_b(*config.pq_pairs[0])
            worst = min(
                band_margin(bands.components[k], b) for k in bands
            )
            rows.append(
                ReportRow.build(
                    "pointwise_maximal_bound",
                    f"field={i},b={b:g}",
                    max(0.0, -worst),
                    1.0,
                    bound=0.0,
                )
            )
        for p, q in config.pq_pairs:
            rows.append(
                check_trace_inequality(
                    f, family, trace_family, p, q, config.s,
                    bands=bands, tag=f"field={i}",
                )
            )
        return rows

    out: List[ReportRow] = []
    ratio_max: Dict = {pq: 0.0 for pq in config.pq_pairs}
    for rows in pool.map(run, list(enumerate(corpus))):
        out.extend(rows)
        for row in rows:
            if row.check == "trace_inequality" and math.isfinite(row.ratio):
                for pq in config.pq_pairs:
                    if row.params.startswith(f"p={pq[0]:g},q={pq[1]:g},"):
                        ratio_max[pq] = max(ratio_max[pq], row.ratio)

    # Same spectra on the refined grid: the max ratio is a quadrature of the
    # same functions, so it should move very little.
    fine_grid = grid.refined(config.refine_factor)
    fine_corpus = make_corpus(
        fine_grid, config.radius, config.trace_corpus_size, config.seed
    )

    def run_fine(item):
        i, f = item
        bands = decompose(f, family)
        return [
            check_trace_inequality(
                f, family, trace_family, p, q, config.s,
                bands=bands, tag=f"field={i},refined=1",
            )
            for p, q in config.pq_pairs
        ]

    fine_max: Dict = {pq: 0.0 for pq in config.pq_pairs}
    fine_rows: List[ReportRow] = []
    for rows in pool.map(run_fine, list(enumerate(fine_corpus))):
        fine_rows.extend(rows)
        for row in rows:
            if math.isfinite(row.ratio):
                for pq in config.pq_pairs:
                    if row.params.startswith(f"p={pq[0]:g},q={pq[1]:g},"):
                        fine_max[pq] = max(fine_max[pq], row.ratio)
    out.extend(fine_rows)
    for pq in config.pq_pairs:
        base, fine = ratio_max[pq], fine_max[pq]
        out.append(
            ReportRow.build(
                "trace_ratio_stability",
                f"p={pq[0]:g},q={pq[1]:g},s={config.s:g},"
                f"refine={config.refine_factor}",
                abs(fine - base),
                base,
                bound=0.05,
            )
        )
    return out


def _retraction_suite(config: ExperimentConfig, pool: ThreadPoolExecutor):
    """Extension-side rows: exact retraction identity, vanishing of bands
    with |k_n| >= 2, the tensor factorization of extension bands, the norm
    ratio, and its collapse to a single weight factor on tones."""
    grid = config.grid()
    family = config.family()
    trace_family = config.trace_family()
    traced = grid.traced()
    profile = ExtensionProfile(BumpProfile(config.sharpness))
    corpus = make_corpus(traced, config.radius, config.corpus_size, config.seed + 1)
    K = config.radius
    L_last, N_last = grid.period[-1], grid.samples[-1]
    w_field = SampledField(
        GridSpec((L_last,), (N_last,)),
        extension_weight(profile, L_last, N_last),
    )
    w_bands = decompose(w_field, WindowFamily(1, K, BumpProfile(config.sharpness)))
    p, q = config.pq_pairs[0]
    s = config.s

    def run(item):
        i, g = item
        rows: List[ReportRow] = []
        extension = extend(g, profile, grid)
        back = trace(extension)
        err = float(np.linalg.norm(back.values - g.values))
        ref = float(np.linalg.norm(g.values))
        rows.append(
            ReportRow.build(
                "retraction_identity", f"field={i}", err, ref, bound=1e-10
            )
        )
        ext_bands = decompose(extension, family)
        g_bands = decompose(g, trace_family)
        ext_scale = float(np.linalg.norm(extension.values))
        vanish = math.sqrt(
            sum(
                float(np.linalg.norm(ext_bands.components[k].field.values)) ** 2
                for k in ext_bands
                if abs(k[-1]) >= 2
            )
        )
        rows.append(
            ReportRow.build(
                "extension_band_vanishing", f"field={i}", vanish, ext_scale,
                bound=1e-12,
            )
        )
        factor_err = 0.0
        for k in ext_bands:
            tensor = (
                g_bands.components[k[:-1]].field.values[..., None]
                * w_bands.components[(k[-1],)].field.values
            )
            diff = float(
                np.linalg.norm(ext_bands.components[k].field.values - tensor)
            )
            factor_err = max(factor_err, diff)
        rows.append(
            ReportRow.build(
                "extension_band_factorization", f"field={i}", factor_err,
                ext_scale, bound=1e-10,
            )
        )
        num = aniso_norm(
            ext_bands, NormSpec(p=p, q=q, r=min(1.0, q), s=s, variant="aniso_last")
        )
        den = wiener_norm(g_bands, NormSpec(p=p, q=q, s=s))
        rows.append(
            ReportRow.build(
                "retraction_ratio", f"p={p:g},q={q:g},s={s:g},field={i}", num, den
            )
        )
        return rows

    out: List[ReportRow] = []
    tone_ratios: List[float] = []
    for (i, _), rows in zip(enumerate(corpus), pool.map(run, list(enumerate(corpus)))):
        out.extend(rows)
        if i % 4 == 0:  # corpus kind cycle starts with tones
            for row in rows:
                if row.check == "retraction_ratio":
                    tone_ratios.append(row.ratio)
    spread = float(np.std(tone_ratios) / np.mean(tone_ratios))
    out.append(
        ReportRow.build(
            "retraction_tone_spread",
            f"p={p:g},q={q:g},s={s:g},tones={len(tone_ratios)}",
            spread,
            1.0,
            bound=1e-6,
        )
    )
    return out


def _maximal_suite(config: ExperimentConfig, pool: ThreadPoolExecutor):
    grid = config.grid()
    family = config.family()
    corpus = make_corpus(grid, config.radius, config.corpus_size, config.seed)
    n = config.dimension

    def run(item):
        i, f = item
        bands = decompose(f, family)
        rows: List[ReportRow] = []
        for p, q in config.maximal_pq:
            rows.extend(
                check_maximal_equivalence(
                    f, family, p, q, 0.0, config.auto_b(p, q),
                    bands=bands, tag=f"field={i}",
                )
            )
            if i == 0:  # probe below the threshold once; reported, exempt
                rows.extend(
                    check_maximal_equivalence(
                        f, family, p, q, 0.0, 0.5 * n / min(p, q),
                        bands=bands, tag=f"field={i}", enforce_lower=False,
                    )
                )
        return rows

    out: List[ReportRow] = []
    for rows in pool.map(run, list(enumerate(corpus))):
        out.extend(rows)
    return out


def _triebel_suite(config: ExperimentConfig, pool: ThreadPoolExecutor):
    """Spot checks of the compact-support maximal inequality with the dense
    (continuum-reading) shift maximal, plus dense-read equivalence ratios so
    both readings of the penalized maximal are on record."""
    spec = GridSpec(config.triebel_period, config.triebel_samples)
    n = spec.dimension
    if not spec.admits_radius(config.radius):
        raise ValueError("triebel grid cannot represent the window family")
    family = WindowFamily(n, config.radius, BumpProfile(config.sharpness))
    corpus = make_corpus(spec, config.radius, config.triebel_corpus, config.seed + 2)
    p, q = config.triebel_pq

    def run(item):
        i, f = item
        bands = decompose(f, family)
        rows = [
            check_triebel_maximal(
                bands, p, q, config.triebel_r, tag=f"field={i}"
            )
        ]
        if i < 3:
            from .bands import shift_maximal
            from .norms import _iso_pointwise, _lp_quadrature

            b = config.auto_b(p, q)
            mags = {
                k: np.abs(shift_maximal(bands.components[k], b).values)
                for k in bands
            }
            dense = _lp_quadrature(
                _iso_pointwise(mags, 0.0, q), p, spec.cell_volume
            )
            plain = wiener_norm(bands, NormSpec(p=p, q=q, s=0.0))
            rows.append(
                ReportRow.build(
                    "maximal_upper_dense",
                    f"p={p:g},q={q:g},b={b:g},field={i}",
                    dense,
                    plain,
                )
            )
        return rows

    out: List[ReportRow] = []
    for rows in pool.map(run, list(enumerate(corpus))):
        out.extend(rows)
    return out


SUITES = {
    "embeddings": _embeddings_suite,
    "trace": _trace_suite,
    "retraction": _retraction_suite,
    "maximal": _maximal_suite,
    "triebel": _triebel_suite,
}

SUITE_ORDER = ("embeddings", "trace", "retraction", "maximal", "triebel")


def run_suites(
    config: ExperimentConfig, names: Sequence[str]
) -> Dict[str, List[ReportRow]]:
    """Run the named suites; returns rows grouped by suite in canonical
    order.  Jobs execute on a shared thread pool; assembly order is fixed."""
    expanded: List[str] = []
    for name in names:
        if name == "all":
            expanded.extend(SUITE_ORDER)
        elif name in SUITES:
            expanded.append(name)
        else:
            raise ValueError(f"unknown suite {name!r}")
    ordered = [s for s in SUITE_ORDER if s in expanded]
    workers = config.workers or None
    results: Dict[str, List[ReportRow]] = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for name in ordered:
            results[name] = SUITES[name](config, pool)
    return results
