"""Command-line interface.

Exit codes: 0 success, 1 a suite check or fixture failed, 2 bad input or numerical failure.
`compute` also exits 2 when its single pair violates a proven inequality or a value range.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import BaseModel, ValidationError

from .algorithms import nqp_decide, pp_hybrid_accept
from .config import configure_logging, load_search_config, load_tolerances
from .divergences import compute_report
from .errors import (
    DimensionOverflow,
    FixtureFailure,
    InputError,
    NumericalError,
    QdivlabError,
    ScheduleViolation,
)
from .harness import conjecture_search, reproduce_counterexamples, run_inequality_suite
from .inequalities import evaluate_report
from .polarization import make_schedule, polarize
from .reductions import hardness_param_map, qjsp_to_qedp
from .reporting import emit_report
from .schemas import ComputeResult, SuiteConfig
from .states import StatePair, dump_state, load_state, make_pair

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


# =============================================================================
# Helpers
# =============================================================================


def _dims(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _load_pair(args: argparse.Namespace) -> StatePair:
    tolerances = load_tolerances()
    return make_pair(load_state(args.a, tolerances), load_state(args.b, tolerances))


def _write(report: BaseModel, fmt: str, path: Optional[Path]) -> None:
    data = emit_report(report, fmt)
    if path is None:
        sys.stdout.write(data.decode())
    else:
        path.write_bytes(data)
        logger.info(f"[cli] wrote {fmt} report to {path}")


def _add_pair_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", required=True, type=Path, help="State file for rho0")
    parser.add_argument("--b", required=True, type=Path, help="State file for rho1")


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=["json", "text"], default="json", help="Output format (default: json)"
    )
    parser.add_argument("--json", dest="out", type=Path, help="Write JSON to this file")


def _output(args: argparse.Namespace) -> tuple[str, Optional[Path]]:
    return ("json", args.out) if args.out else (args.format, None)


# =============================================================================
# Commands
# =============================================================================


def cmd_compute(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    tolerances = load_tolerances()
    search = load_search_config()
    if args.restarts is not None:
        search = search.model_copy(update={"restarts": args.restarts})
    if args.refine:
        search = search.model_copy(update={"refine": True})
    report = compute_report(pair, alpha=args.alpha, search=search, tolerances=tolerances)
    result = ComputeResult(report=report, verdicts=evaluate_report(report, tolerances.slack))
    _write(result, *_output(args))
    for problem in result.range_violations:
        logger.error(f"[compute] {problem}")
    return EXIT_OK if result.passed else EXIT_INPUT


def cmd_polarize(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    schedule = make_schedule(args.alpha, args.beta, args.k, args.kind, strict=args.strict)
    run = polarize(pair, schedule, cap=args.cap, tolerances=load_tolerances())
    _write(run, *_output(args))
    return EXIT_OK if run.certified else EXIT_FAILED


def cmd_reduce_qedp(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    tolerances = load_tolerances()
    reduction = qjsp_to_qedp(pair, args.alpha, args.beta, tolerances)
    if args.out_a:
        dump_state(reduction.pair_out.rho0, args.out_a)
    if args.out_b:
        dump_state(reduction.pair_out.rho1, args.out_b)
    _write(reduction, *_output(args))
    return EXIT_OK


def cmd_reduce_params(args: argparse.Namespace) -> int:
    thresholds = hardness_param_map(args.n, args.epsilon, args.target)
    _write(thresholds, *_output(args))
    return EXIT_OK if thresholds.chain_holds else EXIT_FAILED


def cmd_decide(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    decision = nqp_decide(pair) if args.procedure == "nqp" else pp_hybrid_accept(pair)
    _write(decision, *_output(args))
    return EXIT_OK


def _suite_config(args: argparse.Namespace, conjecture_mode: bool = False) -> SuiteConfig:
    return SuiteConfig(
        seed=args.seed,
        trials_per_dim=args.trials,
        dims=args.dims,
        slack=getattr(args, "slack", 1e-9),
        threads=args.threads,
        conjecture_mode=conjecture_mode,
        search_restarts=getattr(args, "restarts", 0),
    )


def cmd_verify(args: argparse.Namespace) -> int:
    config = _suite_config(args, conjecture_mode=args.conjectures)
    report = run_inequality_suite(config, with_fixtures=args.fixtures, tolerances=load_tolerances())
    if args.csv:
        _write(report, "csv", args.csv)
    if args.out:
        _write(report, "json", args.out)
    if not (args.csv or args.out):
        _write(report, args.format, None)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_fixtures(args: argparse.Namespace) -> int:
    report = reproduce_counterexamples(strict=args.strict, tolerances=load_tolerances())
    _write(report, *_output(args))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_conjectures(args: argparse.Namespace) -> int:
    config = _suite_config(args, conjecture_mode=True)
    _write(conjecture_search(config, tolerances=load_tolerances()), *_output(args))
    return EXIT_OK


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdivlab", description="Quantum state divergences, polarization and reductions"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="Every divergence of one pair")
    _add_pair_args(p)
    p.add_argument("--alpha", type=float, default=0.5, help="Exponent for QTD_alpha")
    p.add_argument("--restarts", type=int, default=None, help="Random bases for measured QJS")
    p.add_argument("--refine", action="store_true", help="Refine the best measurement basis")
    _add_output_args(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("polarize", help="Run the three-stage polarization")
    _add_pair_args(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kind", choices=["meas_qtd", "qtd"], default="meas_qtd")
    p.add_argument("--cap", type=int, default=None, help="Largest dimension to materialize")
    p.add_argument("--strict", action="store_true", help="Fail on any schedule check")
    _add_output_args(p)
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser("reduce", help="Reduction constructions")
    reduce_sub = p.add_subparsers(dest="reduction", required=True)
    r = reduce_sub.add_parser("qjsp-to-qedp", help="Build the QEDP pair from a QJSP pair")
    _add_pair_args(r)
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--beta", type=float, required=True)
    r.add_argument("--out-a", type=Path, help="Write rho'_0 to this state file")
    r.add_argument("--out-b", type=Path, help="Write rho'_1 to this state file")
    _add_output_args(r)
    r.set_defaults(func=cmd_reduce_qedp)
    r = reduce_sub.add_parser("params", help="Hardness thresholds")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--epsilon", type=float, required=True)
    r.add_argument("--target", choices=["qjsp", "meas_qtdp", "qedp"], required=True)
    _add_output_args(r)
    r.set_defaults(func=cmd_reduce_params)

    p = sub.add_parser("decide", help="NQP or PP acceptance probabilities")
    p.add_argument("procedure", choices=["nqp", "pp"])
    _add_pair_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="Monte-Carlo suite over the proven inequalities")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000, help="Trials per dim and profile")
    p.add_argument("--dims", type=_dims, default=[2, 3, 4, 8], help="e.g. 2,3,4,8")
    p.add_argument("--slack", type=float, default=1e-9)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--restarts", type=int, default=0, help="Random bases for measured QJS")
    p.add_argument("--fixtures", action="store_true", help="Include the counterexample fixtures")
    p.add_argument("--conjectures", action="store_true", help="Include the conjecture search")
    p.add_argument("--csv", type=Path, help="Write CSV to this file")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixtures", help="Reproduce the published example pairs")
    p.add_argument("--strict", action="store_true", help="Raise on the first failed relation")
    _add_output_args(p)
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("conjectures", help="Explore the open bounds")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000, help="Trials per dim")
    p.add_argument("--dims", type=_dims, default=[2, 3, 4])
    p.add_argument("--threads", type=int, default=1)
    _add_output_args(p)
    p.set_defaults(func=cmd_conjectures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.verbose)
        return args.func(args)
    except (ScheduleViolation, FixtureFailure) as e:
        print(f"qdivlab: {e}", file=sys.stderr)
        return EXIT_FAILED
    except ValidationError as e:
        print(f"qdivlab: invalid arguments: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, NumericalError, DimensionOverflow) as e:
        print(f"qdivlab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except QdivlabError as e:
        print(f"qdivlab: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
