"""Report rows, delimited/JSON emission, and the figures rendered next to
each report.

Rows compare a left and a right quantity; when an analytic bound is present
the row participates in the pass contract: pass <=> lhs <= bound * rhs up to
a fixed absolute slack.  Formatting is pinned so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

__all__ = [
    "ABS_SLACK",
    "ReportRow",
    "format_value",
    "write_report",
    "write_summary",
    "render_suite_figure",
    "render_scan_figure",
]

# Absolute slack applied to every bounded comparison (roundoff headroom).
ABS_SLACK = 1e-12

CSV_HEADER = "check,params,lhs,rhs,ratio,bound,pass"


@dataclass(frozen=True)
class ReportRow:
    check: str
    params: str
    lhs: float
    rhs: float
    ratio: float
    bound: Optional[float]
    passed: Optional[bool]

    @classmethod
    def build(
        cls,
        check: str,
        params: str,
        lhs: float,
        rhs: float,
        bound: Optional[float] = None,
    ) -> "ReportRow":
        """Assemble a row; 0/0 is reported as ratio 1 and flagged degenerate."""
        lhs = float(lhs)
        rhs = float(rhs)
        if rhs == 0.0:
            if lhs <= ABS_SLACK:
                ratio = 1.0
                params = params + ",degenerate=1" if params else "degenerate=1"
            else:
                ratio = math.inf
        else:
            ratio = lhs / rhs
        passed = None
        if bound is not None:
            bound = float(bound)
            passed = lhs <= bound * rhs + ABS_SLACK
        return cls(check, params, lhs, rhs, ratio, bound, passed)

    def key(self) -> tuple:
        return (self.check, self.params)


def format_value(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def _csv_line(row: ReportRow) -> str:
    passed = "" if row.passed is None else str(row.passed).lower()
    params = row.params.replace(",", ";")  # keep the delimiter unambiguous
    return ",".join(
        [
            row.check,
            params,
            format_value(row.lhs),
            format_value(row.rhs),
            format_value(row.ratio),
            format_value(row.bound),
            passed,
        ]
    )


def write_report(rows: Sequence[ReportRow], path) -> None:
    lines = [CSV_HEADER] + [_csv_line(r) for r in rows]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def all_bounded_pass(rows: Sequence[ReportRow]) -> bool:
    return all(r.passed for r in rows if r.passed is not None)


def write_summary(rows: Sequence[ReportRow], config: Dict, path) -> None:
    """JSON digest: per-check counts and extreme ratios, plus the config."""
    per_check: Dict[str, Dict] = {}
    for r in rows:
        agg = per_check.setdefault(
            r.check,
            {"rows": 0, "bounded": 0, "passed": 0, "max_ratio": None},
        )
        agg["rows"] += 1
        if r.passed is not None:
            agg["bounded"] += 1
            agg["passed"] += int(r.passed)
        if math.isfinite(r.ratio):
            prev = agg["max_ratio"]
            agg["max_ratio"] = r.ratio if prev is None else max(prev, r.ratio)
    summary = {
        "config": config,
        "checks": per_check,
        "all_bounded_pass": all_bounded_pass(rows),
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _figure_path(report_path, tag: str) -> str:
    stem, _ = os.path.splitext(str(report_path))
    return f"{stem}_{tag}.png"


def render_suite_figure(rows: Sequence[ReportRow], report_path, suite: str) -> str:
    """Render the suite's ratio profile (sorted, log scale when spread) with
    any analytic bounds overlaid; saved next to the report."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = _figure_path(report_path, suite)
    finite = [r for r in rows if math.isfinite(r.ratio)]
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    if finite:
        ratios = sorted(r.ratio for r in finite)
        ax.plot(range(len(ratios)), ratios, ".", ms=3, label="ratio")
        bounds = sorted({r.bound for r in finite if r.bound is not None})
        for bval in bounds:
            ax.axhline(bval, color="crimson", lw=1.0, ls="--")
        if bounds:
            ax.plot([], [], color="crimson", lw=1.0, ls="--", label="bound")
        positive = [v for v in ratios if v > 0]
        if positive and max(positive) / min(positive) > 50:
            ax.set_yscale("log")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("check (sorted by ratio)")
    ax.set_ylabel("lhs / rhs")
    ax.set_title(f"suite: {suite}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_scan_figure(
    s_values: Sequence[float], ratios: Sequence[float], report_path
) -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = _figure_path(report_path, "scan")
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(list(s_values), list(ratios), "o-", ms=4)
    ax.set_xlabel("regularity s of the traced side")
    ax.set_ylabel("max corpus ratio")
    ax.set_title("trace ratio against regularity")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
