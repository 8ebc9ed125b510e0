"""CSV emission (schema-versioned) and optional figure rendering.

All numeric fields carry 9 significant digits with a `.` decimal separator;
fields are comma separated, lines end with `\\n`, and the first line is the
schema marker comment. Figures are an opt-in convenience rendered next to
the CSV; the CSV stays the canonical artifact.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

SCHEMA_LINE = "# schema=1"


def format_field(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    x = float(value)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_field(v) for v in row) + "\n")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_lines(
    path: str,
    series: dict[str, tuple[Sequence[float], Sequence[float]]],
    xlabel: str,
    ylabel: str,
    logy: bool = False,
) -> None:
    """One line per named series; written as a PNG."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, (x, y) in series.items():
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.4)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_cdf(path: str, series: dict[str, Sequence[float]], xlabel: str) -> None:
    """Empirical CDF plot, one step curve per named sorted sample set."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, samples in series.items():
        n = len(samples)
        if n == 0:
            continue
        ax.step(samples, [(i + 1) / n for i in range(n)], where="post", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("empirical CDF")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
