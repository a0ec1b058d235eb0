import csv
import io
import json
from typing import Any

from cli.models import OutputFormat, Table


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def to_json(table: Table) -> str:
    """One JSON object per line."""
    return "".join(json.dumps(record) + "\n" for record in table.records)


def to_csv(table: Table) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(c) for c in row])
    return out.getvalue()


_LATEX_ESCAPES = {"\\": r"\textbackslash{}", "_": r"\_", "&": r"\&", "%": r"\%", "#": r"\#",
                  "$": r"\$", "{": r"\{", "}": r"\}", "|": r"$|$", "^": r"\^{}", "~": r"\~{}"}


def _latex(value: Any) -> str:
    return "".join(_LATEX_ESCAPES.get(ch, ch) for ch in _cell(value))


def to_latex(table: Table) -> str:
    lines = [r"\begin{tabular}{" + "l" * len(table.columns) + "}", r"\hline",
             " & ".join(_latex(c) for c in table.columns) + r" \\", r"\hline"]
    lines += [" & ".join(_latex(c) for c in row) + r" \\" for row in table.rows]
    lines += [r"\hline", r"\end{tabular}"]
    return "\n".join(lines) + "\n"


def render(table: Table, fmt: OutputFormat) -> str:
    return {OutputFormat.JSON: to_json, OutputFormat.CSV: to_csv, OutputFormat.LATEX: to_latex}[OutputFormat(fmt)](table)
