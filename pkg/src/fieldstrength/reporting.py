"""Render the computed tables as CSV, JSON, and Markdown.

The bundle holds full-precision values; every rounding convention lives
here (2 decimals for strength indicators, 1 for percentages, integer
euro for costs) and nothing upstream ever rounds. Rendering is pure:
identical bundles produce byte-identical files, with no timestamps.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Optional

from .errors import InputIOError

FORMATS = ("csv", "json", "markdown")
_EXT = {"csv": "csv", "json": "json", "markdown": "md"}

# column kinds drive both string formatting and json rounding
K_STR = "str"
K_INT = "int"
K_FSS = "fss"      # strength indicators: 2 decimals
K_PCT = "pct"      # percentages: 1 decimal
K_COST = "cost"    # euro: integer
K_CORR = "corr"    # correlations: 3 decimals, may be undefined
K_RANK = "rank"    # fractional ranks / averages: 2 decimals


@dataclass
class ReportBundle:
    """Everything the report tables need, in full precision."""

    percentiles: list[str]  # percentile labels, e.g. ["5", "10"]
    summary_rows: list[dict[str, Any]]
    summary_overall: dict[str, Any]
    discipline_rows: list[dict[str, Any]]
    discipline_overall: Optional[dict[str, Any]]  # None for an empty corpus
    field_rows: list[dict[str, Any]]
    correlation: dict[str, Any]
    quadrant: dict[str, Any]
    avg_rank: dict[str, Any]
    rankings: dict[str, list[dict[str, Any]]]
    top_bottom_k: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ReportBundle":
        return cls(**data)


def _fmt(value: Any, kind: str) -> str:
    if value is None:
        return ""
    if kind == K_STR:
        return str(value)
    if kind == K_INT:
        return str(int(value))
    if kind == K_FSS:
        return f"{value:.2f}"
    if kind == K_PCT:
        return f"{value:.1f}"
    if kind == K_COST:
        return f"{value:.0f}"
    if kind == K_CORR:
        return f"{value:.3f}"
    if kind == K_RANK:
        return f"{value:.2f}"
    raise ValueError(f"unknown column kind {kind!r}")


def _jr(value: Any, kind: str) -> Any:
    if value is None or kind == K_STR:
        return value
    if kind == K_INT:
        return int(value)
    if kind == K_FSS:
        return round(value, 2)
    if kind == K_PCT:
        return round(value, 1)
    if kind == K_COST:
        return round(value)
    if kind == K_CORR:
        return round(value, 3)
    if kind == K_RANK:
        return round(value, 2)
    raise ValueError(f"unknown column kind {kind!r}")


@dataclass
class _Table:
    name: str
    columns: list[tuple[str, str]]  # (column name, kind)
    rows: list[dict[str, Any]]
    notes: list[str]


def _summary_table(bundle: ReportBundle) -> _Table:
    columns = [("uda", K_STR), ("uda_name", K_STR), ("n_sds", K_INT),
               ("n_professors", K_INT), ("n_publications", K_INT)]
    for pl in bundle.percentiles:
        columns.append((f"hca_{pl}", K_INT))
        columns.append((f"hca_{pl}_share", K_PCT))
    rows = []
    for raw in bundle.summary_rows + [bundle.summary_overall]:
        row = dict(raw)
        for pl in bundle.percentiles:
            pubs = row["n_publications"]
            row[f"hca_{pl}_share"] = 100.0 * row[f"hca_{pl}"] / pubs if pubs else 0.0
        rows.append(row)
    return _Table("summary", columns, rows,
                  ["overall publication and HCA counts de-duplicate articles "
                   "co-authored across disciplines"])


def _discipline_table(bundle: ReportBundle) -> _Table:
    columns = [("uda", K_STR), ("n_sds", K_INT), ("n_professors", K_INT),
               ("total_cost", K_COST)]
    for pl in bundle.percentiles:
        columns += [(f"ts_{pl}", K_INT), (f"ts_{pl}_share", K_PCT)]
    for pl in bundle.percentiles:
        columns.append((f"fss_ts_{pl}", K_FSS))
    for pl in bundle.percentiles:
        columns.append((f"fss_fhca_{pl}", K_FSS))
    rows = list(bundle.discipline_rows)
    if bundle.discipline_overall is not None:
        rows.append(bundle.discipline_overall)
    return _Table("disciplines", columns, rows,
                  ["indicators aggregated over member fields weighted by total cost"])


def _field_table(bundle: ReportBundle) -> _Table:
    columns = [("sds", K_STR), ("uda", K_STR), ("n_assistant", K_INT),
               ("n_associate", K_INT), ("n_full", K_INT), ("n_professors", K_INT),
               ("total_cost", K_COST)]
    for pl in bundle.percentiles:
        columns.append((f"ts_{pl}", K_INT))
    for pl in bundle.percentiles:
        columns.append((f"fss_ts_{pl}", K_FSS))
    for pl in bundle.percentiles:
        columns.append((f"fss_fhca_{pl}", K_FSS))
    columns.append(("fallback_flags", K_STR))
    return _Table("fields", columns, bundle.field_rows, [])


def _correlation_table(bundle: ReportBundle) -> _Table:
    ids = bundle.correlation["indicator_ids"]
    columns = [("indicator", K_STR)] + [(i, K_CORR) for i in ids]
    rows = []
    for indicator, line in zip(ids, bundle.correlation["matrix"]):
        row: dict[str, Any] = {"indicator": indicator}
        row.update({i: v for i, v in zip(ids, line)})
        rows.append(row)
    return _Table("correlations", columns, rows,
                  ["empty cells are undefined (zero rank variance)"])


def _quadrant_table(bundle: ReportBundle) -> _Table:
    ids = bundle.correlation["indicator_ids"]
    columns = [("set", K_STR), ("sds", K_STR), ("uda", K_STR)]
    columns += [(i, K_FSS) for i in ids]
    rows = []
    for group in ("strong", "weak"):
        for entry in bundle.quadrant[group]:
            row: dict[str, Any] = {"set": group}
            row.update(entry)
            rows.append(row)
    medians = ", ".join(
        f"{key}={_fmt(value, K_FSS)}" for key, value in sorted(bundle.quadrant["medians"].items())
    )
    notes = [f"strong = above both medians at some percentile; weak = below both; "
             f"medians: {medians or 'n/a'}"]
    ambiguous = bundle.quadrant.get("ambiguous", [])
    if ambiguous:
        notes.append("strong at one percentile but weak at another, listed in neither: "
                     + ", ".join(ambiguous))
    return _Table("quadrants", columns, rows, notes)


def _avg_rank_table(bundle: ReportBundle) -> _Table:
    ids = bundle.correlation["indicator_ids"]
    columns = [("group", K_STR), ("sds", K_STR), ("uda", K_STR)]
    for i in ids:
        columns += [(f"{i}_value", K_FSS), (f"{i}_rank", K_RANK)]
    columns += [("avg_rank", K_RANK), ("position", K_INT)]
    rows = []
    for group in ("top", "bottom"):
        for entry in bundle.avg_rank[group]:
            row = dict(entry)
            row["group"] = group
            rows.append(row)
    notes = []
    if bundle.avg_rank.get("truncated"):
        notes.append(f"fewer than {bundle.top_bottom_k} fields; lists truncated")
    return _Table("avg_rank", columns, rows, notes)


def _tables(bundle: ReportBundle) -> list[_Table]:
    return [
        _summary_table(bundle),
        _discipline_table(bundle),
        _field_table(bundle),
        _correlation_table(bundle),
        _quadrant_table(bundle),
        _avg_rank_table(bundle),
    ]


def _write_csv(table: _Table, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([name for name, _ in table.columns])
        for row in table.rows:
            writer.writerow([_fmt(row.get(name), kind) for name, kind in table.columns])


def _write_json(table: _Table, path: Path) -> None:
    payload = {
        "table": table.name,
        "notes": table.notes,
        "rows": [
            {name: _jr(row.get(name), kind) for name, kind in table.columns}
            for row in table.rows
        ],
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _md_section(title: str, columns: list[tuple[str, str]], rows: list[dict[str, Any]],
                notes: list[str]) -> list[str]:
    lines = [f"## {title}", ""]
    lines.append("| " + " | ".join(name for name, _ in columns) + " |")
    lines.append("|" + "|".join(" --- " for _ in columns) + "|")
    for row in rows:
        lines.append("| " + " | ".join(_fmt(row.get(name), kind) for name, kind in columns) + " |")
    for note in notes:
        lines += ["", f"*{note}*"]
    lines.append("")
    return lines


def _write_markdown(table: _Table, bundle: ReportBundle, path: Path) -> None:
    lines = _md_section(table.name, table.columns, table.rows, table.notes)
    if table.name == "fields":
        # strongest / weakest lists per indicator
        k = bundle.top_bottom_k
        for indicator, entries in bundle.rankings.items():
            columns = [("sds", K_STR), ("value", K_FSS), ("rank", K_RANK)]
            lines += _md_section(f"strongest {k}: {indicator}", columns, entries[:k], [])
            lines += _md_section(f"weakest {k}: {indicator}", columns, entries[-k:], [])
    path.write_text("\n".join(lines), encoding="utf-8")


def render(bundle: ReportBundle, fmt: str, out_dir: Path) -> list[dict[str, Any]]:
    """Write one file per table in the given format under out_dir/reports.

    Returns manifest entries (relative path + row count), sorted by path.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    reports_dir = Path(out_dir) / "reports"
    try:
        reports_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputIOError(f"cannot create {reports_dir}: {exc}") from exc

    entries = []
    for table in _tables(bundle):
        path = reports_dir / f"{table.name}.{_EXT[fmt]}"
        try:
            if fmt == "csv":
                _write_csv(table, path)
            elif fmt == "json":
                _write_json(table, path)
            else:
                _write_markdown(table, bundle, path)
        except OSError as exc:
            raise InputIOError(f"cannot write {path}: {exc}") from exc
        entries.append({"path": str(path.relative_to(out_dir)), "rows": len(table.rows)})
    entries.sort(key=lambda e: e["path"])
    return entries
