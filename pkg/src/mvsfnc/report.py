"""Report emission as JSON, CSV or an aligned text table."""
from __future__ import annotations

import csv
import io
import json

FORMATS = ("json", "csv", "table")
TABLE_LIST_LIMIT = 16


def _is_scalar(v) -> bool:
    return v is None or isinstance(v, (str, int, float, bool))


def _scalar_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def report_rows(report) -> list[dict]:
    """Flat CSV rows: a summary row per report, then one row per listed curve or value."""
    if isinstance(report, list):
        return [row for r in report for row in report_rows(r)]
    if "rows" in report and isinstance(report["rows"], list):
        return [{k: v for k, v in r.items() if _is_scalar(v)} for r in report["rows"]]
    head = {k: report[k] for k in ("q", "type", "field") if k in report and _is_scalar(report[k])}
    rows = [dict({"set": "summary"}, **{k: v for k, v in report.items() if _is_scalar(v)})]
    for key, value in report.items():
        if isinstance(value, list) and value and all(_is_scalar(x) for x in value):
            rows += [dict(head, set=key, item=x) for x in value]
        elif isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
            rows += [dict(head, set=key, **{k: v for k, v in x.items() if _is_scalar(v)}) for x in value]
    return rows


def emit_csv(report) -> str:
    rows = report_rows(report)
    columns: list[str] = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns)
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _scalar_text(r.get(k)) for k in columns})
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, list):
        items = [_cell(x) for x in v[:TABLE_LIST_LIMIT]]
        if len(v) > TABLE_LIST_LIMIT:
            items.append(f"... ({len(v)} total)")
        return "[" + ", ".join(items) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_cell(x)}" for k, x in v.items()) + "}"
    return _scalar_text(v)


def emit_table(report) -> str:
    if isinstance(report, list):
        rows = [{k: v for k, v in r.items() if _is_scalar(v)} for r in report]
        columns: list[str] = []
        for r in rows:
            for k in r:
                if k not in columns:
                    columns.append(k)
        cells = [[_scalar_text(r.get(k)) for k in columns] for r in rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
        return "\n".join(line.rstrip() for line in lines) + "\n"
    width = max((len(k) for k in report), default=0)
    return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in report.items())


def emit_report(report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report) + "\n"
    if fmt == "csv":
        return emit_csv(report)
    if fmt == "table":
        return emit_table(report)
    raise ValueError(f"unknown format {fmt!r}")


def mismatch_flags(report) -> list[str]:
    """Keys ending in 'match' whose value is false, searched recursively."""
    bad: list[str] = []
    if isinstance(report, list):
        for r in report:
            bad += mismatch_flags(r)
    elif isinstance(report, dict):
        for k, v in report.items():
            if k.endswith("match") and v is False:
                bad.append(k)
            elif isinstance(v, (dict, list)):
                bad += mismatch_flags(v)
    return bad
