import argparse
import os
import sys

from colorama import init
from pydantic import ValidationError

from src.data.models import CheckResult, RunConfig, SL2Matrix
from src.utils.config import load_environment
from src.utils.display import print_check_output, print_error
from src.utils.experiments import EXPERIMENT_CONFIG, EXPERIMENT_ORDER, get_check
from src.utils.progress import progress
from src.utils.report import EmptyReportError, ReportWriteError, emit_report

EXIT_OK, EXIT_VIOLATION = 0, 1
DEFAULT_SEED = RunConfig.model_fields["seed"].default


def parse_matrix(text: str) -> SL2Matrix:
    try:
        return SL2Matrix.parse(text)
    except ValidationError as e:
        raise argparse.ArgumentTypeError(e.errors()[0]["msg"])
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ergolab", description="Run the quantum ergodicity checks", allow_abbrev=False)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"Seed for randomized trials. Defaults to {DEFAULT_SEED}")
    common.add_argument("--output", type=str, help="Report path (a directory for 'all'). Defaults to no report file")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Report format. Defaults to json")

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, parents=[common], help=help, allow_abbrev=False)

    torus = add("torus-check", "Quantization morphism, hermiticity and trace invariants")
    torus.add_argument("--n-min", type=int, default=3, help="Smallest level. Defaults to 3")
    torus.add_argument("--n-max", type=int, default=40, help="Largest level. Defaults to 40")

    weil = add("weil-check", "Unitarity, projectivity and exact Egorov identity of the Weil representation")
    weil.add_argument("--n-min", type=int, default=2, help="Smallest level. Defaults to 2")
    weil.add_argument("--n-max", type=int, default=64, help="Largest level. Defaults to 64")

    catmap = add("catmap", "Eigenspace states of a quantum cat map against the classical state")
    catmap.add_argument("--matrix", type=parse_matrix, default=SL2Matrix.of(2, 1, 1, 1), help="Anosov matrix as m11,m12,m21,m22. Defaults to 2,1,1,1")
    catmap.add_argument("--n-values", type=parse_int_list, default=(), help="Comma-separated levels. Defaults to the primes in [11,41] and [150,250]")
    catmap.add_argument("--eps", type=float, default=0.3, help="Concentration radius. Defaults to 0.3")
    catmap.add_argument("--family-size", type=int, default=25, help="Number of test observables. Defaults to 25")
    catmap.add_argument("--ceiling", type=float, default=0.1, help="Dimension fraction above which outliers are reported. Defaults to 0.1")
    catmap.add_argument("--scar-threshold", type=float, default=0.3, help="Distance above which blocks are listed as scars. Defaults to 0.3")

    convex = add("convex", "Randomized separating-functional bound trials and the 1/r schedule")
    convex.add_argument("--trials", type=int, default=1000, help="Number of random clouds. Defaults to 1000")
    convex.add_argument("--r-max", type=int, default=50, help="Largest r in the schedule. Defaults to 50")

    verlinde = add("verlinde", "Verlinde dimension, or the integrality sweep without --p")
    verlinde.add_argument("--genus", type=int, default=2, help="Surface genus. Defaults to 2")
    verlinde.add_argument("--p", type=int, help="Level")

    spin = add("spin", "Spin decomposition dimensions, or the partition sweep without --r/--p")
    spin.add_argument("--genus", type=int, default=2, help="Surface genus. Defaults to 2")
    spin.add_argument("--r", type=int, help="Level is 4r")
    spin.add_argument("--p", type=int, help="Level, must be divisible by 4")

    asymptotics = add("asymptotics", "Normalised Verlinde dimensions and spin summand shares")
    asymptotics.add_argument("--genus", type=int, default=2, help="Surface genus. Defaults to 2")
    asymptotics.add_argument("--r-values", type=parse_int_list, default=(100, 200, 500), help="Increasing r values. Defaults to 100,200,500")

    add("all", "Run every check with its defaults")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {key: value for key, value in vars(args).items() if value is not None and key in RunConfig.model_fields}
    return RunConfig(**fields)


def parse_config(parser: argparse.ArgumentParser, argv: list[str]) -> RunConfig:
    """Parse argv into a RunConfig, exiting with status 2 on usage errors."""
    args = parser.parse_args(argv)
    if args.subcommand == "spin" and args.r is None and args.p is not None and args.p % 4:
        parser.error(f"spin needs a level divisible by 4, got --p {args.p}")
    try:
        return config_from_args(args)
    except ValidationError as e:
        parser.error("; ".join(error["msg"] for error in e.errors()))


def write_report(result: CheckResult, config: RunConfig, path: str) -> None:
    columns = EXPERIMENT_CONFIG[result.name]["csv_columns"]
    records = result.rows if config.format == "csv" and result.rows else result.records
    emit_report(records, config.format, path, columns if config.format == "csv" else None)


def run(config: RunConfig, parser: argparse.ArgumentParser | None = None) -> int:
    """Execute one subcommand (or all of them) and return the exit code."""
    parser = parser or build_parser()
    if config.subcommand == "all":
        configs = [parse_config(parser, [name, "--seed", str(config.seed), "--format", config.format]) for _, name in EXPERIMENT_ORDER]
    else:
        configs = [config]

    results: list[CheckResult] = []
    progress.start()
    try:
        for check_config in configs:
            results.append(get_check(check_config.subcommand)(check_config))
    except ValueError as e:
        print_error(f"Error: {e}")
        return EXIT_VIOLATION
    finally:
        progress.stop()

    for result in results:
        if result.name == "verlinde" and config.p is not None and config.subcommand == "verlinde":
            print(result.records[0]["dimension"])
        else:
            print_check_output(result, EXPERIMENT_CONFIG[result.name]["csv_columns"])

    if config.output:
        try:
            if config.subcommand == "all":
                os.makedirs(config.output, exist_ok=True)
                for result in results:
                    write_report(result, config, os.path.join(config.output, f"{result.name}.{config.format}"))
            else:
                write_report(results[0], config, config.output)
        except (ReportWriteError, EmptyReportError) as e:
            print_error(f"Error: {e}")
            return EXIT_VIOLATION

    return EXIT_OK if all(result.passed for result in results) else EXIT_VIOLATION


def main(argv: list[str] | None = None) -> int:
    # Load environment variables from .env file
    load_environment()
    init(autoreset=True)

    parser = build_parser()
    config = parse_config(parser, sys.argv[1:] if argv is None else argv)
    return run(config, parser)


def cli():
    sys.exit(main())


if __name__ == "__main__":
    cli()
