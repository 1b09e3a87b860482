from typing import Optional, Generic, TypeVar
from pydantic import BaseModel, Field, model_validator
import logging

from .catalog import build_series, catalog_consistency
from .dsl import load_identity_file, verify_ast
from .exactnum import central_binomial_integral_report
from .identities import (
    coefficient_route_check,
    errata_suite,
    forms_of,
    get_identity,
    identity_ids,
    verify_range,
)
from .models.reports import QuadratureReport, VerifyReport
from .models.run_config import RunConfig
from .signals import ArcsineError, ArgumentError
from .utils import series_lines, summary_line, write_report

logger = logging.getLogger(__name__)

QUADRATURE_TOLERANCE = 1e-6

_generic_type = TypeVar('_generic_type')
class ResponseMessage(BaseModel, Generic[_generic_type]):
    result: Optional[_generic_type] = None
    error: Optional[str] = None
    success: bool = True

    @model_validator(mode="after")
    def refine_status(self):
        if self.error is not None:
            self.success = False
        return self

class CommandOutcome(BaseModel):
    lines: list[str] = Field(default_factory=list)
    reports: list[VerifyReport] = Field(default_factory=list)
    quadrature: list[QuadratureReport] = Field(default_factory=list)
    refuted: bool = False

def _from_reports(reports: list[VerifyReport]) -> CommandOutcome:
    return CommandOutcome(
        lines=[summary_line(r) for r in reports],
        reports=reports,
        refuted=any(not r.passed for r in reports)
    )

def verify_identities(config: RunConfig) -> CommandOutcome:
    specs = [get_identity(identity, config.form) for identity in config.ids]

    return _from_reports([
        verify_range(spec, config.n_lo, config.n_hi, keep_going=config.keep_going, jobs=config.jobs)
        for spec in specs
    ])

def verify_file(config: RunConfig) -> CommandOutcome:
    entries = load_identity_file(config.path)

    if not entries:
        raise ArgumentError(f"{config.path}: no identities to verify")

    return _from_reports([
        verify_ast(
            entry.ast,
            config.n_lo,
            config.n_hi,
            name=entry.name,
            keep_going=config.keep_going,
            jobs=config.jobs
        )
        for entry in entries
    ])

def dump_series(config: RunConfig) -> CommandOutcome:
    return CommandOutcome(lines=series_lines(build_series(config.series, config.order)))

def run_errata(config: RunConfig) -> CommandOutcome:
    return _from_reports(errata_suite(config.n_hi, jobs=config.jobs, keep_going=config.keep_going))

def run_consistency(config: RunConfig) -> CommandOutcome:
    return _from_reports(catalog_consistency(config.order))

def run_routes(config: RunConfig) -> CommandOutcome:
    return _from_reports([coefficient_route_check(route, config.n_hi) for route in ("A", "B")])

def run_integral(config: RunConfig) -> CommandOutcome:
    outcome = CommandOutcome()

    for n in range(config.n_lo, config.n_hi + 1):
        report = central_binomial_integral_report(n, config.steps, config.cutoff)
        ok = report.relative_error <= QUADRATURE_TOLERANCE

        outcome.quadrature.append(report)
        outcome.lines.append(
            f"{n}\t{report.estimate:.12g}\t{report.exact}\t{report.relative_error:.3e}\t{'PASS' if ok else 'FAIL'}"
        )
        outcome.refuted = outcome.refuted or not ok

    return outcome

def list_identities(_: RunConfig) -> CommandOutcome:
    lines = []

    for identity in identity_ids():
        forms = [form for form in forms_of(identity) if form is not None]
        lines.append(f"{identity}\t{','.join(forms) if forms else '-'}")

    return CommandOutcome(lines=lines)

_HANDLERS = {
    "verify": verify_identities,
    "verify-file": verify_file,
    "series": dump_series,
    "errata": run_errata,
    "consistency": run_consistency,
    "routes": run_routes,
    "integral": run_integral,
    "list": list_identities,
}

def execute_command(config: RunConfig) -> ResponseMessage[CommandOutcome]:
    response_model = ResponseMessage[CommandOutcome]
    handler = _HANDLERS.get(config.command)

    if handler is None:
        return response_model(error=f"Unknown command: {config.command}")

    try:
        outcome = handler(config)
    except ArcsineError as e:
        logger.error(f"Command {config.command} failed: {e}")
        return response_model(error=str(e))
    except OSError as e:
        logger.error(f"Command {config.command} failed on I/O: {e}")
        return response_model(error=f"{e.filename or 'file'}: {e.strerror or e}")

    if config.report and outcome.reports:
        try:
            write_report(outcome.reports, config.report, config.format)
        except OSError as e:
            logger.error(f"Failed to write report: {e}")
            return response_model(error=f"cannot write report {config.report}: {e.strerror or e}")

    return response_model(result=outcome)
