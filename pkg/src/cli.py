"""
Command line for the experiment runner

    layered-noise <kind> [flags]      run one experiment
    layered-noise verify <manifest>   recompute a manifest's channel constants

Exit codes: 0 success, 1 other failure, 2 invalid spec or config,
3 infeasible graph, 4 numerical failure.
"""
from typing import List, Optional
import argparse
import logging
import sys

from . import __version__
from .channels.channel import ChannelError
from .liouville.linalg import DimensionError, NumericalError
from .parsers.spec_parser import SpecParseError
from .qaoa.circuit import QaoaError
from .qaoa.graphs import GraphError
from .services.config import FLAG_FIELDS, KINDS, ConfigError, ExperimentConfig, RunManifest
from .services.experiment_pipeline import ExperimentError, ExperimentPipeline
from .services.output_service import OutputError
from .toymodel.simulation import ToyModelError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_GRAPH = 3
EXIT_NUMERICAL = 4

EXIT_CODES = (
    (GraphError, EXIT_GRAPH),
    (NumericalError, EXIT_NUMERICAL),
    ((SpecParseError, ConfigError, ChannelError, QaoaError, ToyModelError, DimensionError, FileNotFoundError),
     EXIT_INVALID),
    ((ExperimentError, OutputError), EXIT_FAILURE),
)


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config whose keys mirror the long flag names")
    parser.add_argument("--n", type=int, help="number of qubits")
    parser.add_argument("--channel", help="channel spec, e.g. ad:0.004^6")
    parser.add_argument("--graph", help="graph spec: reg:<n>:<d>:<seed> | er:<n>:<p>:<seed> | file:<path> | universal:<n>")
    parser.add_argument("--layers", type=int, help="largest depth L (default: 10)")
    parser.add_argument("--samples", type=int, help="Monte-Carlo samples (default: 128)")
    parser.add_argument("--seed", type=int, help="64-bit unsigned run seed (default: 0)")
    parser.add_argument("--output", help="output directory (default: results)")
    parser.add_argument("--workers", type=int, help="worker processes (default: 1)")
    parser.add_argument("--p-max", dest="p_max", type=float, help="Hoeffding probability bound (default: 0.01)")
    parser.add_argument("--peff", type=float, help="amplitude damping on every qubit with this p_eff")
    parser.add_argument("--ell", type=int, help="differentiated layer for variance-check (default: 1)")
    parser.add_argument("--g-samples", dest="g_samples", type=int,
                        help="samples for the G coefficient of variance-check (default: 20000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layered-noise",
        description="Layered-noise density-matrix experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for kind in KINDS:
        _add_experiment_flags(subparsers.add_parser(kind, help=f"run the {kind} experiment"))

    verify = subparsers.add_parser("verify", help="recompute the constants stored in a manifest")
    verify.add_argument("manifest", help="path to manifest.json")
    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """ExperimentConfig from parsed flags, layered over --config when given"""
    values = {flag: getattr(args, name, None) for flag, name in FLAG_FIELDS.items() if flag != "kind"}
    values["n"] = args.n
    values["kind"] = args.command
    if args.config:
        return ExperimentConfig.from_json(args.config, overrides=values)
    return ExperimentConfig.from_mapping(values)


def exit_code_for(error: BaseException) -> int:
    for types, code in EXIT_CODES:
        if isinstance(error, types):
            return code
    return EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        if args.command == "verify":
            RunManifest.load(args.manifest).verify()
            print(f"{args.manifest}: constants verified")
            return EXIT_OK

        result = ExperimentPipeline(config_from_args(args)).run()
        if args.command == "coeffs":
            sys.stdout.write(result.table.read_text())
        else:
            print(result.table)
        return EXIT_OK
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e}")
        if code == EXIT_FAILURE and not isinstance(e, (ExperimentError, OutputError)):
            raise
        return code


if __name__ == "__main__":
    sys.exit(main())
