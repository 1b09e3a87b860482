import logging
import os

logging.basicConfig(level=os.getenv("ARCSINE_LOG_LEVEL", "WARNING").upper())

from argparse import ArgumentParser, ArgumentTypeError
from dotenv import load_dotenv
from pydantic import ValidationError
from typing import Optional
import sys

from arcsine.commands import execute_command
from arcsine.models.run_config import RunConfig

logger = logging.getLogger(__name__)

if not load_dotenv():
    logger.warning(".env not found, using environment and defaults")

DEFAULT_JOBS = int(os.getenv("ARCSINE_JOBS", 1))
ERRATA_N_HI = int(os.getenv("ARCSINE_ERRATA_N_HI", 300))
QUAD_STEPS = int(os.getenv("ARCSINE_QUAD_STEPS", 200_000))
QUAD_CUTOFF = float(os.getenv("ARCSINE_QUAD_CUTOFF", 1000))

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2

def parse_range(text: str) -> tuple[int, int]:
    """'lo..hi' inclusive, or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise ArgumentTypeError(f"invalid range {text!r}, expected lo..hi or an integer")

def add_sweep_options(parser: ArgumentParser, with_range: bool = True) -> None:
    if with_range:
        parser.add_argument("--n", type=parse_range, required=True, help="range lo..hi (inclusive)")
    parser.add_argument("--report", type=str, default=None, help="write a structured report to this path")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--jobs", type=int, default=None, help="worker threads per sweep (default: $ARCSINE_JOBS)")
    parser.add_argument("--keep-going", action="store_true", help="sweep the whole range after a failure")

def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="arcsine", description="Exact verification of central binomial identities.")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="verify built-in identities over a range of n")
    verify.add_argument("--id", type=str, required=True, help="comma separated identity ids")
    verify.add_argument("--form", choices=["printed", "corrected"], default=None)
    add_sweep_options(verify)

    verify_file = commands.add_parser("verify-file", help="verify identities written in the identity language")
    verify_file.add_argument("path", type=str)
    add_sweep_options(verify_file)

    series = commands.add_parser("series", help="dump the coefficients of a named series")
    series.add_argument("name", type=str)
    series.add_argument("--order", type=int, required=True)

    errata = commands.add_parser("errata", help="printed displays against their forced corrections")
    add_sweep_options(errata, with_range=False)

    consistency = commands.add_parser("consistency", help="series-level consistency checks")
    consistency.add_argument("--order", type=int, required=True)
    consistency.add_argument("--report", type=str, default=None)
    consistency.add_argument("--format", choices=["json", "csv"], default="json")

    routes = commands.add_parser("routes", help="both coefficient routes up to n_max")
    routes.add_argument("--n", type=parse_range, required=True, help="n_max, or lo..hi using hi")
    routes.add_argument("--report", type=str, default=None)
    routes.add_argument("--format", choices=["json", "csv"], default="json")

    integral = commands.add_parser("integral", help="quadrature of the integral representation of binom(2n,n)")
    integral.add_argument("--n", type=parse_range, required=True)
    integral.add_argument("--steps", type=int, default=QUAD_STEPS)
    integral.add_argument("--cutoff", type=float, default=QUAD_CUTOFF)

    commands.add_parser("list", help="list identity ids and their forms")

    return parser

def to_run_config(args) -> RunConfig:
    n_lo, n_hi = getattr(args, "n", None) or (0, 0)

    if args.command == "errata":
        n_lo, n_hi = 0, ERRATA_N_HI

    jobs = getattr(args, "jobs", None)

    return RunConfig(
        command=args.command,
        ids=[i.strip() for i in args.id.split(",") if i.strip()] if getattr(args, "id", None) else [],
        path=getattr(args, "path", None),
        form=getattr(args, "form", None),
        n_lo=n_lo,
        n_hi=n_hi,
        series=getattr(args, "name", None),
        order=args.order if getattr(args, "order", None) is not None else 16,
        report=getattr(args, "report", None),
        format=getattr(args, "format", "json"),
        jobs=jobs if jobs is not None else DEFAULT_JOBS,
        keep_going=getattr(args, "keep_going", False),
        steps=getattr(args, "steps", QUAD_STEPS),
        cutoff=getattr(args, "cutoff", QUAD_CUTOFF),
    )

def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        config = to_run_config(args)
    except ValidationError as err:
        for problem in err.errors():
            print(f"error: {problem['msg']}", file=sys.stderr)
        return EXIT_USAGE

    response = execute_command(config)

    if not response.success:
        print(f"error: {response.error}", file=sys.stderr)
        return EXIT_USAGE

    for line in response.result.lines:
        print(line)

    return EXIT_REFUTED if response.result.refuted else EXIT_OK

if __name__ == '__main__':
    sys.exit(main())
