"""Delimited run artifacts and their companion figures.

Every CLI run that takes ``--out BASE`` leaves three files: ``BASE.json``
(the canonical object in its documented serialization), ``BASE.csv`` (one
row per reported item), and ``BASE.png`` (a rendered summary).  All three
are byte-deterministic: rows arrive pre-sorted from the caller, JSON is
dumped with sorted keys, and the figures are drawn on the Agg backend
from the row data alone.
"""

from __future__ import annotations

import csv
import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

__all__ = [
    "report_rows",
    "write_json",
    "write_report_csv",
    "render_report_figure",
    "table_rows",
    "write_table_csv",
    "render_table_figure",
]

_PASS_COLOR = "#2e7d46"
_FAIL_COLOR = "#b03a2e"
_SKIP_COLOR = "#8a8a8a"


def _canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
        fh.write("\n")


def report_rows(reports):
    """Flatten verification reports into (identity, params, status, detail).

    status is "pass", "FAIL" or "skipped"; detail carries the serialized
    difference on failure (or the skip reason) and stays empty otherwise.
    """
    rows = []
    for rep in reports:
        status = "pass" if rep.passed else "FAIL"
        detail = "" if rep.passed else _canonical_dumps(rep.difference.to_obj())
        params = {k: v for k, v in rep.params.items() if k != "skipped"}
        rows.append((rep.identity_name, _canonical_dumps(params), status, detail))
        for name, ok in rep.parts or []:
            rows.append(
                (
                    "%s/%s" % (rep.identity_name, name),
                    _canonical_dumps(params),
                    "pass" if ok else "FAIL",
                    "",
                )
            )
        for entry in rep.params.get("skipped", []):
            rows.append(
                (
                    "%s/%s" % (rep.identity_name, entry["generator"]),
                    _canonical_dumps(params),
                    "skipped",
                    entry["status"],
                )
            )
    return rows


def write_report_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["identity", "params", "status", "detail"])
        writer.writerows(rows)


def render_report_figure(path, rows, title):
    """One horizontal bar per row, colored by status; names label the axis
    while they still fit, a count summary takes over for long reports."""
    colors = {"pass": _PASS_COLOR, "FAIL": _FAIL_COLOR, "skipped": _SKIP_COLOR}
    statuses = [row[2] for row in rows]
    if len(rows) <= 40:
        height = max(2.0, 0.28 * len(rows) + 0.8)
        fig, ax = plt.subplots(figsize=(7.0, height), dpi=100)
        ys = range(len(rows))
        ax.barh(
            list(ys),
            [1] * len(rows),
            color=[colors[s] for s in statuses],
            edgecolor="none",
        )
        ax.set_yticks(list(ys))
        ax.set_yticklabels([row[0] for row in rows], fontsize=7)
        ax.invert_yaxis()
        ax.set_xticks([])
    else:
        fig, ax = plt.subplots(figsize=(5.0, 3.2), dpi=100)
        order = ["pass", "FAIL", "skipped"]
        counts = [statuses.count(s) for s in order]
        ax.bar(order, counts, color=[colors[s] for s in order])
        for i, c in enumerate(counts):
            ax.text(i, c, str(c), ha="center", va="bottom", fontsize=9)
        ax.set_ylabel("rows")
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, format="png")
    plt.close(fig)


def table_rows(tables):
    """Rows (m1, m2, index, coefficient, degK) over one or more tables."""
    from .spherical import TIndex

    rows = []
    for table in tables:
        m1 = _canonical_dumps(table.m1.to_obj())
        m2 = _canonical_dumps(table.m2.to_obj())
        for m in sorted(table.entries, key=TIndex.sort_key):
            coeff = table.entries[m]
            rows.append(
                (m1, m2, _canonical_dumps(m.to_obj()), str(coeff), coeff.degree_in("K"))
            )
    return rows


def write_table_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["m1", "m2", "index", "coefficient", "degK"])
        writer.writerows(rows)


def render_table_figure(path, rows, title):
    """Histogram of the K-degrees across all table entries."""
    degs = [row[4] for row in rows]
    top = max(degs) if degs else 0
    counts = [degs.count(d) for d in range(top + 1)]
    fig, ax = plt.subplots(figsize=(5.0, 3.2), dpi=100)
    ax.bar(range(top + 1), counts, color=_PASS_COLOR)
    ax.set_xticks(range(top + 1))
    ax.set_xlabel("K-degree of coefficient")
    ax.set_ylabel("entries")
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, format="png")
    plt.close(fig)
