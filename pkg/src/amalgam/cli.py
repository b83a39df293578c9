"""Command-line interface: decompose fields, evaluate norms, trace/extend,
run the verification suites, and scan trace ratios against regularity.

`verify` writes the CSV report, a JSON summary, and one ratio figure per
suite next to the report; its exit code is 0 exactly when every bounded
check passes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional

import numpy as np

from .bands import decompose, export_band_set
from .corpus import ExperimentConfig, make_corpus
from .checks import regularity_scan
from .fields import GridSpec, read_amf, write_amf
from .norms import NormSpec, evaluate_norm
from .report import (
    all_bounded_pass,
    render_scan_figure,
    render_suite_figure,
    write_report,
    write_summary,
)
from .suites import SUITE_ORDER, run_suites
from .traceops import ExtensionProfile, extend, trace
from .windows import BumpProfile, WindowFamily

VARIANT_NAMES = {
    "isotropic": "isotropic",
    "aniso-last": "aniso_last",
    "aniso-last2": "aniso_last2",
    "maximal": "maximal_isotropic",  # becomes maximal_aniso when --r is given
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amalgam",
        description="Frequency-uniform band toolkit and verification harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="write a band-set directory")
    p_dec.add_argument("--input", required=True)
    p_dec.add_argument("--K", type=int, required=True, dest="radius")
    p_dec.add_argument("--out", required=True)
    p_dec.add_argument("--sharpness", type=float, default=1.0)

    p_norm = sub.add_parser("norm", help="evaluate one amalgam norm")
    p_norm.add_argument("--input", required=True)
    p_norm.add_argument("--p", required=True)
    p_norm.add_argument("--q", required=True)
    p_norm.add_argument("--s", type=float, default=0.0)
    p_norm.add_argument(
        "--variant", choices=sorted(VARIANT_NAMES), default="isotropic"
    )
    p_norm.add_argument("--r", default=None)
    p_norm.add_argument("--b", type=float, default=None)
    p_norm.add_argument("--K", type=int, required=True, dest="radius")
    p_norm.add_argument("--sharpness", type=float, default=1.0)

    p_tr = sub.add_parser("trace", help="restrict to the last-axis zero plane")
    p_tr.add_argument("--input", required=True)
    p_tr.add_argument("--out", required=True)

    p_ext = sub.add_parser("extend", help="extend with the frequency bump weight")
    p_ext.add_argument("--input", required=True)
    p_ext.add_argument("--L", type=int, required=True)
    p_ext.add_argument("--N", type=int, required=True)
    p_ext.add_argument("--out", required=True)
    p_ext.add_argument("--sharpness", type=float, default=1.0)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument(
        "--suite",
        default="all",
        choices=("all",) + SUITE_ORDER,
    )
    p_ver.add_argument("--config", default=None)
    p_ver.add_argument("--report", required=True)

    p_scan = sub.add_parser(
        "scan", help="trace-ratio scan over a regularity grid (exploratory)"
    )
    p_scan.add_argument("--p", type=float, required=True)
    p_scan.add_argument("--q", type=float, required=True)
    p_scan.add_argument("--s-grid", required=True, dest="s_grid")
    p_scan.add_argument("--epsilon", type=float, default=None)
    p_scan.add_argument("--config", default=None)
    p_scan.add_argument("--report", required=True)
    return parser


def _exponent(text) -> float:
    if text is None:
        return None
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _load_config(path: Optional[str]) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    return ExperimentConfig.from_file(path)


def _cmd_decompose(args) -> int:
    f = read_amf(args.input)
    family = WindowFamily(f.dimension, args.radius, BumpProfile(args.sharpness))
    bands = decompose(f, family)
    export_band_set(bands, family, args.out)
    print(f"wrote {len(bands.components)} bands to {args.out}")
    return 0


def _cmd_norm(args) -> int:
    f = read_amf(args.input)
    variant = VARIANT_NAMES[args.variant]
    r = _exponent(args.r)
    if args.variant == "maximal" and r is not None:
        variant = "maximal_aniso"
    b = args.b
    if variant.startswith("maximal") and b is None:
        p, q = _exponent(args.p), _exponent(args.q)
        b = f.dimension / min(p, q) + 0.01
    spec = NormSpec(
        p=_exponent(args.p),
        q=_exponent(args.q),
        r=r,
        s=args.s,
        variant=variant,
        b=b,
    )
    family = WindowFamily(f.dimension, args.radius, BumpProfile(args.sharpness))
    value = evaluate_norm(decompose(f, family), spec)
    print(format(value, ".12g"))
    return 0


def _cmd_trace(args) -> int:
    write_amf(trace(read_amf(args.input)), args.out)
    return 0


def _cmd_extend(args) -> int:
    g = read_amf(args.input)
    target = GridSpec(g.spec.period + (args.L,), g.spec.samples + (args.N,))
    profile = ExtensionProfile(BumpProfile(args.sharpness))
    write_amf(extend(g, profile, target), args.out)
    return 0


def _cmd_verify(args) -> int:
    config = _load_config(args.config)
    results = run_suites(config, [args.suite])
    rows = [row for name in results for row in results[name]]
    write_report(rows, args.report)
    stem, _ = os.path.splitext(args.report)
    write_summary(rows, config.to_dict(), stem + ".summary.json")
    for name, suite_rows in results.items():
        render_suite_figure(suite_rows, args.report, name)
    ok = all_bounded_pass(rows)
    bounded = sum(r.passed is not None for r in rows)
    passed = sum(bool(r.passed) for r in rows if r.passed is not None)
    print(f"{len(rows)} rows, {passed}/{bounded} bounded checks passed")
    return 0 if ok else 1


def _parse_s_grid(text: str) -> List[float]:
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise ValueError("--s-grid must look like start:stop:step") from exc
    if step <= 0 or b < a:
        raise ValueError("--s-grid must have stop >= start and step > 0")
    return [float(v) for v in np.arange(a, b + step / 2, step)]


def _cmd_scan(args) -> int:
    config = _load_config(args.config)
    s_values = _parse_s_grid(args.s_grid)
    epsilon = config.epsilon if args.epsilon is None else args.epsilon
    corpus = make_corpus(
        config.grid(), config.radius, config.corpus_size, config.seed
    )
    rows = regularity_scan(
        args.p,
        args.q,
        s_values,
        corpus,
        config.family(),
        config.trace_family(),
        epsilon,
    )
    write_report(rows, args.report)
    stem, _ = os.path.splitext(args.report)
    write_summary(rows, config.to_dict(), stem + ".summary.json")
    render_scan_figure(s_values, [r.ratio for r in rows], args.report)
    return 0


_COMMANDS = {
    "decompose": _cmd_decompose,
    "norm": _cmd_norm,
    "trace": _cmd_trace,
    "extend": _cmd_extend,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
