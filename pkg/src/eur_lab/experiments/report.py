"""Summaries with verdicts, plus per-experiment data files and plot scripts.

The summary groups records by (experiment, N, L, statistic) and attaches the
theory value and tri-state verdict the suite declares. Plot emission writes,
for every experiment present, a small CSV of group summaries next to a
standalone matplotlib script, then runs the script so the rendered figure
lands alongside the delimited output. All emitted text files are
deterministic for a given record list.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .config import CSV_HEADER, ExperimentRecord
from .suites import SUITES

DATA_COLUMNS = "experiment,N,L,statistic,count,mean,se,min,max,median,theory"


def load_records(path) -> list:
    """Read records from a records.csv file or a run directory containing one."""
    if os.path.isdir(path):
        path = os.path.join(path, "records.csv")
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path} does not start with the expected record header")
    return [ExperimentRecord.from_csv_row(row) for row in lines[1:] if row]


def _group(records):
    grouped: dict = {}
    order: list = []
    for rec in records:
        key = (rec.experiment, rec.N, rec.L, rec.statistic)
        if key not in grouped:
            grouped[key] = ([], [])
            order.append(key)
        grouped[key][0].append(rec.value)
        grouped[key][1].append(rec.certified)
    return grouped, order


def summarize(records) -> dict:
    """Aggregate records into groups with theory values and verdicts.

    Verdicts are tri-state: True/False for asserted comparisons, None for
    reported-only groups. The top-level "ok" flag is False as soon as any
    group verdict or cross check fails.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    grouped, order = _group(records)
    groups: list = []
    ok = True
    for key in order:
        exp, N, L, stat = key
        vals, certs = grouped[key]
        arr = np.asarray(vals, dtype=float)
        spec = SUITES.get(exp)
        theory = spec.theory(N, L, stat) if spec else None
        verdict = spec.group_verdict(N, L, stat, vals, certs) if spec else None
        if verdict is False:
            ok = False
        groups.append(
            {
                "experiment": exp,
                "N": N,
                "L": L,
                "statistic": stat,
                "count": int(arr.size),
                "mean": float(arr.mean()),
                "se": float(arr.std(ddof=1) / math.sqrt(arr.size))
                if arr.size > 1
                else 0.0,
                "min": float(arr.min()),
                "max": float(arr.max()),
                "median": float(np.median(arr)),
                "certified_count": int(sum(certs)),
                "theory": None if theory is None else float(theory),
                "verdict": verdict,
            }
        )
    checks: list = []
    by_exp: dict = {}
    for key in order:
        by_exp.setdefault(key[0], {})[key[1:]] = grouped[key]
    for exp, sub in by_exp.items():
        spec = SUITES.get(exp)
        if spec is None:
            continue
        for chk in spec.cross_checks(sub):
            if not chk.get("passed", True):
                ok = False
            checks.append({"experiment": exp, **chk})
    return {"schema": 1, "groups": groups, "checks": checks, "ok": ok}


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Render @PNG@ from @DATA@: group means with 3 SE bars and theory overlays."""

import csv
import os
import re

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
FAMILY = re.compile(r"^(.*(?:_n|_k))(\\d+)$")

rows = []
with open(os.path.join(HERE, "@DATA@"), newline="") as fh:
    for row in csv.DictReader(fh):
        row["N"] = int(row["N"])
        row["L"] = int(row["L"])
        for key in ("count", "mean", "se", "min", "max", "median"):
            row[key] = float(row[key])
        row["theory"] = float(row["theory"]) if row["theory"] else None
        rows.append(row)

series = {}
cats = {}
for row in rows:
    hit = FAMILY.match(row["statistic"])
    if hit:
        key = (hit.group(1), row["N"], row["L"])
        series.setdefault(key, []).append((int(hit.group(2)), row))
    else:
        cats.setdefault(row["statistic"], []).append(row)

panels = int(bool(series)) + int(bool(cats))
fig, grid = plt.subplots(panels, 1, figsize=(7.5, 4.0 * panels), squeeze=False)
axes = [pair[0] for pair in grid]
slot = 0

if series:
    ax = axes[slot]
    slot += 1
    for (prefix, N, L), points in sorted(series.items()):
        points.sort()
        xs = [p[0] for p in points]
        means = [p[1]["mean"] for p in points]
        errs = [3.0 * p[1]["se"] for p in points]
        label = prefix + "* N=%d" % N + (" L=%d" % L if L != 1 else "")
        ax.errorbar(xs, means, yerr=errs, fmt="o-", ms=3, lw=1, capsize=2,
                    label=label)
        theo = [(p[0], p[1]["theory"]) for p in points
                if p[1]["theory"] is not None]
        if theo:
            ax.plot([t[0] for t in theo], [t[1] for t in theo], "k--", lw=1)
    ax.set_xlabel("index within the statistic family")
    ax.set_ylabel("mean over trials")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3)

if cats:
    ax = axes[slot]
    for stat in sorted(cats):
        group = sorted(cats[stat], key=lambda r: (r["N"], r["L"]))
        xs = [r["N"] for r in group]
        means = [r["mean"] for r in group]
        errs = [3.0 * r["se"] for r in group]
        ax.errorbar(xs, means, yerr=errs, fmt="o-", ms=4, lw=1, capsize=2,
                    label=stat)
        theo = [(r["N"], r["theory"]) for r in group
                if r["theory"] is not None]
        if theo:
            ax.plot([t[0] for t in theo], [t[1] for t in theo], "--", lw=1,
                    color="gray")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel("mean over trials")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3)

fig.suptitle("@EXPERIMENT@")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "@PNG@"), dpi=120,
            metadata={"Software": "eur-lab"})
plt.close(fig)
'''


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _render_script(script_path: str) -> None:
    with open(script_path, encoding="utf-8") as fh:
        source = fh.read()
    code = compile(source, script_path, "exec")
    namespace = {"__file__": os.path.abspath(script_path), "__name__": "__render__"}
    exec(code, namespace)


def emit_plots(records, output_dir: str) -> list:
    """Write per-experiment data CSVs and plot scripts, then render the PNGs.

    Returns the list of written paths. Data and script files are byte-stable
    across reruns on the same records.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to plot")
    os.makedirs(output_dir, exist_ok=True)
    summary = summarize(records)
    by_exp: dict = {}
    for group in summary["groups"]:
        by_exp.setdefault(group["experiment"], []).append(group)
    written: list = []
    for exp, groups in by_exp.items():
        data_name = f"{exp}_data.csv"
        script_name = f"{exp}_plot.py"
        png_name = f"{exp}.png"
        lines = [DATA_COLUMNS]
        for g in groups:
            theory = "" if g["theory"] is None else repr(g["theory"])
            lines.append(
                f"{g['experiment']},{g['N']},{g['L']},{g['statistic']},"
                f"{g['count']},{g['mean']!r},{g['se']!r},{g['min']!r},"
                f"{g['max']!r},{g['median']!r},{theory}"
            )
        data_path = os.path.join(output_dir, data_name)
        _write_text(data_path, "\n".join(lines) + "\n")
        script = (
            _PLOT_TEMPLATE.replace("@EXPERIMENT@", exp)
            .replace("@DATA@", data_name)
            .replace("@PNG@", png_name)
        )
        script_path = os.path.join(output_dir, script_name)
        _write_text(script_path, script)
        _render_script(script_path)
        written += [data_path, script_path, os.path.join(output_dir, png_name)]
    return written
