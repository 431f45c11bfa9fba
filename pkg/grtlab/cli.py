"""
Command-line front end for grtlab.

Usage examples::

    python -m grtlab project hexagon "[x,y]" --max-degree 4
    python -m grtlab residual pentagon "[x,[x,y]] - [y,[y,x]]" --max-degree 3
    python -m grtlab dk dims --n 4 --max-degree 5
    python -m grtlab lab group z3hexagon --group S3 --seed 1
    python -m grtlab lab torsor gamma-diff
    python -m grtlab fivecycle fp --prime 11
    python -m grtlab suite --jobs 4 --out-dir reports/

Exit status is 0 when every requested check passes, 1 when a check fails
(the first counterexample goes to stderr) and 2 on a usage or input error.
Reports are written to stdout, logs to stderr.
"""
import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .config import RunConfig
from .dk_pentagon import QuotientElement, dk_aliases, drinfeld_kohno, pentagon_residual
from .five_cycle import run_fivecycle_bw, run_fivecycle_fp
from .group_lab import LAB_GROUP_ALIASES, LAB_GROUP_PROPS, run_lab_group
from .grt_ops import (LIE2, antihexagon_project, antihexagon_residual, drinfeld_eq3_residual, hexagon_project,
                      hexagon_residual, ihara_bracket, skew_symmetrize)
from .lie_core import LieSeries
from .lie_format import format_series, parse, to_dict
from .orchestrator import run_suite, write_suite
from .reports import VerificationFailure, VerificationReport, first_violation, render_reports
from .torsor_lab import LAB_TORSOR_PROPS, run_lab_torsor
from .utils import get_logger

logger = get_logger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PROJECTORS: Dict[str, Callable[[LieSeries], LieSeries]] = {
    "hexagon": hexagon_project,
    "antihexagon": antihexagon_project,
    "skew": skew_symmetrize,
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=None, help="Output format")
    common.add_argument("--seed", type=int, default=None, help="Seed for every randomised sweep")
    common.add_argument("--jobs", type=int, default=None, help="Parallel jobs for the suite (-1: all cores)")
    common.add_argument("--log-dir", dest="log_dir", default=None, help="Also write logs to this directory")
    common.add_argument("--max-degree", dest="max_degree", type=int, default=None, help="Truncation degree")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="grtlab", description="Exact verification lab for hexagon-type symmetries")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    lie = sub.add_parser("lie", help="Parse and normalise Lie expressions").add_subparsers(dest="action", required=True)
    for action in ("eval", "json"):
        p = lie.add_parser(action, parents=[common])
        p.add_argument("expr")
        p.add_argument("--alphabet", default="x,y", help="Comma-separated generator names")

    p = sub.add_parser("project", parents=[common], help="Apply a projector to an expression in x, y")
    p.add_argument("kind", choices=sorted(PROJECTORS))
    p.add_argument("expr")

    p = sub.add_parser("residual", parents=[common], help="Residual of an equation at an expression in x, y")
    p.add_argument("kind", choices=["hexagon", "antihexagon", "eq3", "pentagon"])
    p.add_argument("expr")

    p = sub.add_parser("ihara", parents=[common], help="Ihara bracket of two expressions in x, y")
    p.add_argument("left")
    p.add_argument("right")

    dk = sub.add_parser("dk", help="Drinfeld-Kohno algebras t_n").add_subparsers(dest="action", required=True)
    p = dk.add_parser("dims", parents=[common])
    p.add_argument("--n", type=int, default=4)
    p = dk.add_parser("reduce", parents=[common])
    p.add_argument("expr")
    p.add_argument("--n", type=int, default=4)

    lab = sub.add_parser("lab", help="Exhaustive checks over finite groups and torsors")
    lab_sub = lab.add_subparsers(dest="action", required=True)
    p = lab_sub.add_parser("group", parents=[common])
    p.add_argument("prop", choices=sorted(list(LAB_GROUP_PROPS) + list(LAB_GROUP_ALIASES)))
    p.add_argument("--group", default=None, help="Source group spec, e.g. Z5, Z3^2, S3")
    p.add_argument("--target", default=None, help="Target group spec")
    p.add_argument("--arity", type=int, default=None)
    p.add_argument("--pairing", default=None, help="Catalog pairing name")
    p = lab_sub.add_parser("torsor", parents=[common])
    p.add_argument("prop", choices=sorted(LAB_TORSOR_PROPS))
    p.add_argument("--torsor", default=None, help="Group spec or JSON table file")
    p.add_argument("--target", default=None, help="Target group spec")
    p.add_argument("--pairing", default=None, help="Catalog pairing name")

    five = sub.add_parser("fivecycle", help="The five-cycle over F_p and the Bloch-Wigner relation")
    five_sub = five.add_subparsers(dest="action", required=True)
    p = five_sub.add_parser("fp", parents=[common])
    p.add_argument("--prime", type=int, default=None)
    p.add_argument("--target", default=None, help="Coefficient group for the projector (default Z3)")
    p = five_sub.add_parser("bw", parents=[common])
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--margin", type=float, default=None)

    p = sub.add_parser("suite", parents=[common], help="Run the full verification suite")
    p.add_argument("--out-dir", dest="out_dir", default=None, help="Write suite_report.json and suite_summary.csv")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k != "subcommand"}
    return RunConfig.from_cli(subcommand=args.subcommand, **values)


def _lie2(text: str, cfg: RunConfig, headroom: int = 0) -> LieSeries:
    return parse(text, LIE2, cfg.max_degree).with_max_degree(cfg.max_degree + headroom)


def _text(value) -> str:
    return str(value) if isinstance(value, QuotientElement) else format_series(value)


def _emit_series(value, fmt: Optional[str], out: TextIO) -> None:
    if fmt == "json":
        payload = value.to_dict() if isinstance(value, QuotientElement) else to_dict(value)
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(_text(value) + "\n")


def _run_lie(args, cfg: RunConfig, out: TextIO) -> int:
    alphabet = tuple(a.strip() for a in args.alphabet.split(",") if a.strip())
    value = parse(args.expr, alphabet, cfg.max_degree)
    _emit_series(value, "json" if args.action == "json" else cfg.format, out)
    return EXIT_OK


def _run_project(args, cfg: RunConfig, out: TextIO) -> int:
    _emit_series(PROJECTORS[args.kind](_lie2(args.expr, cfg)), cfg.format, out)
    return EXIT_OK


def _run_residual(args, cfg: RunConfig, out: TextIO) -> int:
    if args.kind == "pentagon":
        value = pentagon_residual(_lie2(args.expr, cfg), cfg.max_degree)
    elif args.kind == "eq3":
        value = drinfeld_eq3_residual(_lie2(args.expr, cfg, headroom=1))
    elif args.kind == "hexagon":
        value = hexagon_residual(_lie2(args.expr, cfg))
    else:
        value = antihexagon_residual(_lie2(args.expr, cfg))
    _emit_series(value, cfg.format, out)
    if not value.is_zero():
        sys.stderr.write(f"{args.kind} residual is non-zero: {_text(value)}\n")
        return EXIT_FAIL
    return EXIT_OK


def _top_degree(s: LieSeries) -> int:
    return max((len(w) for w in s.coeffs), default=0)


def _run_ihara(args, cfg: RunConfig, out: TextIO) -> int:
    f, g = _lie2(args.left, cfg), _lie2(args.right, cfg)
    top = max(cfg.max_degree, _top_degree(f) + _top_degree(g))
    _emit_series(ihara_bracket(f.with_max_degree(top), g.with_max_degree(top)), cfg.format, out)
    return EXIT_OK


def _run_dk(args, cfg: RunConfig, out: TextIO) -> int:
    algebra = drinfeld_kohno(args.n, cfg.max_degree)
    if args.action == "dims":
        if cfg.format == "json":
            out.write(json.dumps(algebra.describe(), sort_keys=True) + "\n")
        else:
            out.write(" ".join(str(d) for d in algebra.dimensions()) + "\n")
        return EXIT_OK
    value = algebra.reduce(parse(args.expr, algebra.generators, cfg.max_degree, aliases=dk_aliases(args.n)))
    _emit_series(value, cfg.format, out)
    return EXIT_OK


def _run_lab(args, cfg: RunConfig, out: TextIO) -> List[VerificationReport]:
    if args.action == "group":
        return run_lab_group(args.prop, group=cfg.group, target=cfg.target, arity=cfg.arity,
                             pairing=cfg.pairing, seed=cfg.seed)
    return run_lab_torsor(args.prop, torsor=cfg.torsor, target=cfg.target, pairing=cfg.pairing, seed=cfg.seed)


def _run_fivecycle(args, cfg: RunConfig, out: TextIO) -> List[VerificationReport]:
    if args.action == "fp":
        return run_fivecycle_fp(cfg.prime, cfg.target or "Z3", cfg.seed)
    return run_fivecycle_bw(cfg.samples, cfg.seed, cfg.tolerance, cfg.margin)


def _run_suite(args, cfg: RunConfig, out: TextIO) -> List[VerificationReport]:
    reports = run_suite(cfg.seed, cfg.jobs)
    if args.out_dir:
        write_suite(reports, args.out_dir)
    return reports


SERIES_COMMANDS = {"lie": _run_lie, "project": _run_project, "residual": _run_residual, "ihara": _run_ihara,
                   "dk": _run_dk}
REPORT_COMMANDS = {"lab": _run_lab, "fivecycle": _run_fivecycle, "suite": _run_suite}


def _emit_reports(reports: List[VerificationReport], cfg: RunConfig, out: TextIO) -> int:
    out.write(render_reports(reports, cfg.format or "json") + "\n")
    failed = first_violation(reports)
    if failed is not None:
        sys.stderr.write(f"{failed.construction} [{failed.group}] failed; first counterexample: "
                         f"{json.dumps(failed.to_dict()['violations'][0], sort_keys=True)}\n")
        return EXIT_FAIL
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """Parse `argv`, run the requested command and return the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        if cfg.log_dir:
            get_logger(__name__, log_dir=cfg.log_dir)
        logger.debug(f"Running {args.subcommand} with {cfg.model_dump()}")
        if args.subcommand in SERIES_COMMANDS:
            return SERIES_COMMANDS[args.subcommand](args, cfg, out)
        return _emit_reports(REPORT_COMMANDS[args.subcommand](args, cfg, out), cfg, out)
    except VerificationFailure as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAIL
    except (ValueError, KeyError, ValidationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
