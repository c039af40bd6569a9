import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from tabulate import tabulate

from algebra.reports import AxiomReport
from algebra.scalars import array_to_json, is_exact, scalar_to_json

REPORT_HEADERS = ['Subject', 'Identity', 'Residual', 'Status', 'Witness']


@dataclass
class RunResults:
    """
    Everything one subcommand produced, ready to be written. Only `reports`
    and `checks` decide the exit status; `audits` are informational.
    """
    command: str
    config: Dict[str, Any]
    reports: List[AxiomReport] = field(default_factory=list)
    audits: List[AxiomReport] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Tuple[Sequence[str], List[List[Any]]]] = field(default_factory=dict)
    documents: Dict[str, Any] = field(default_factory=dict)
    text_files: Dict[str, str] = field(default_factory=dict)
    summary: List[Tuple[str, Sequence[str], List[List[Any]]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports) and all(self.checks.values())

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "passed": self.passed,
            "config": self.config,
            "reports": [report.to_json() for report in self.reports],
            "audits": [report.to_json() for report in self.audits],
            "checks": self.checks,
            "details": self.details,
        }


def _json_default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return scalar_to_json(value)
    if isinstance(value, np.ndarray):
        return array_to_json(value) if is_exact(value) else value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(data: Any) -> str:
    return json.dumps(data, indent=4, sort_keys=True, default=_json_default)


def write_csv(path: Path, headers: Sequence[str], rows: List[List[Any]]) -> None:
    with open(path, 'w', newline='') as csvfile:
        writer = csv.writer(csvfile)
        writer.writerow(headers)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def summary_text(results: RunResults) -> str:
    lines = [f"{results.command}: {'PASS' if results.passed else 'FAIL'}", "=" * 50, ""]
    rows = [row for report in results.reports + results.audits for row in report.rows()]
    if rows:
        lines.append(tabulate(rows, headers=REPORT_HEADERS, tablefmt='grid'))
        lines.append("")
    if results.checks:
        lines.append(tabulate([[name, 'PASS' if ok else 'FAIL'] for name, ok in results.checks.items()],
                              headers=['Check', 'Status'], tablefmt='grid'))
        lines.append("")
    for title, headers, table in results.summary:
        lines.append(title)
        lines.append(tabulate(table, headers=headers, tablefmt='grid'))
        lines.append("")
    return "\n".join(lines)


def emit_report(results: RunResults, output_dir: Path) -> List[Path]:
    """
    Write report.json, summary.txt and every table, document and text file
    of the run into output_dir

    Raises:
        OSError: when the output directory cannot be written
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []

    report_file = output_dir / "report.json"
    with open(report_file, 'w') as f:
        f.write(dumps(results.to_json()))
    written.append(report_file)

    summary_file = output_dir / "summary.txt"
    with open(summary_file, 'w') as f:
        f.write(summary_text(results))
    written.append(summary_file)

    for name, (headers, rows) in results.tables.items():
        path = output_dir / name
        write_csv(path, headers, rows)
        written.append(path)
    for name, data in results.documents.items():
        path = output_dir / name
        with open(path, 'w') as f:
            f.write(dumps(data))
        written.append(path)
    for name, text in results.text_files.items():
        path = output_dir / name
        with open(path, 'w') as f:
            f.write(text)
        written.append(path)

    for path in written:
        print(f"Report written to {path}")
    return written
