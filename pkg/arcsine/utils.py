from fractions import Fraction
from io import StringIO
from typing import Any, Iterable, Union
import csv
import json
import logging

from .exactnum import QPi2
from .models.reports import VerifyReport
from .powerseries import TruncSeries

logger = logging.getLogger(__name__)

def format_exact(value: Union[int, Fraction, QPi2]) -> str:
    """num/den for rationals, 'r + p*pi^2' for QPi2 values with a pi^2 part."""
    if isinstance(value, QPi2):
        return str(value.r) if value.is_rational else str(value)

    return str(Fraction(value))

def report_to_dict(report: VerifyReport) -> dict[str, Any]:
    failure = None

    if report.first_failure is not None:
        failure = {
            "n": report.first_failure.n,
            "lhs": report.first_failure.lhs,
            "rhs": report.first_failure.rhs
        }

        if report.first_failure.error is not None:
            failure["error"] = report.first_failure.error

    return {
        "identity": report.identity,
        "form": report.form,
        "range": [report.n_lo, report.n_hi],
        "status": report.status.value,
        "first_failure": failure,
        "checked": report.checked,
        "fail_count": report.fail_count,
        "elapsed_ms": round(report.elapsed_ms, 3)
    }

def reports_to_json(reports: Iterable[VerifyReport]) -> str:
    return json.dumps([report_to_dict(r) for r in reports], indent=2, ensure_ascii=False) + "\n"

CSV_HEADER = ["identity", "form", "n_lo", "n_hi", "status", "fail_n", "lhs", "rhs"]

def reports_to_csv(reports: Iterable[VerifyReport]) -> str:
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)

    for report in reports:
        failure = report.first_failure
        writer.writerow([
            report.identity,
            report.form or "",
            report.n_lo,
            report.n_hi,
            report.status.value,
            failure.n if failure else "",
            failure.lhs if failure else "",
            failure.rhs if failure else ""
        ])

    return buffer.getvalue()

def write_report(reports: list[VerifyReport], path: str, fmt: str = "json") -> None:
    content = reports_to_csv(reports) if fmt == "csv" else reports_to_json(reports)

    with open(path, "w", encoding="utf-8") as fp:
        fp.write(content)

    logger.info(f"Wrote {len(reports)} report(s) to {path} as {fmt}")

def series_lines(s: TruncSeries) -> list[str]:
    return [f"{j}\t{c}" for j, c in enumerate(s.coeffs)]

def summary_line(report: VerifyReport) -> str:
    if report.passed:
        return f"{report.label}: PASS ({report.checked} values)"

    failure = report.first_failure
    line = f"{report.label}: FAIL at n={failure.n} (lhs={failure.lhs}, rhs={failure.rhs})"

    if failure.error:
        line += f" [{failure.error}]"

    return line
