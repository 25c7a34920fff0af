"""
Polytope Orderings: command-line entry point.

This module exposes every toolkit operation as a subcommand:
1. faces / fvector / graph: face lattice, f- and h*-vectors, polytope graph
2. check-ordering / enumerate / verify: K-orderings and shelling orderings
3. reconstruct: face lattice from the graph alone, with an optional oracle
4. cube / experiment / corpus: cube polytopes and their experiments

Results go to stdout as JSON (JSON-lines for streams); logs, progress bars
and the run manifest go to stderr.

Exit codes:
- 0: success
- 1: usage error
- 2: validation error (not a matroid polytope, not simple, bad input)
- 3: partial result (budget exhausted)
"""

import argparse
import logging
import os
import sys
from typing import Callable, Dict, List, Optional

# Add project root for nested imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.adapters.repositories.json_files import (
    InputFileError,
    load_configuration,
    load_graph,
    save_configuration,
    write_json,
    write_json_lines,
)
from src.core.cube_models import (
    CubeConfig,
    CubeDimensionError,
    corpus,
    cube,
    cube_h_star_identity,
    problem_experiment,
)
from src.core.face_lattice import NotAFaceError, NotAMatroidPolytopeError, euler_sum, f_from_h_star, faces
from src.core.orderings import (
    EnumerationConfig,
    EnumerationMode,
    LinearOrdering,
    NotAKOrderingError,
    OrderingFilter,
    PolytopeContext,
    enumerate_orderings,
    verify_theorems,
)
from src.core.oriented_matroid import ConfigurationError, OrientedMatroid, UnknownElementError
from src.core.polytope_graph import CollinearFaceError, InvalidOrderingError, NotSimpleError, graph, is_simple
from src.core.reconstruction import (
    AbstractGraph,
    GraphValidationError,
    ReconstructionFailedError,
    compare_lattices,
    reconstruct,
)
from src.core.sign_vectors import AmbientSizeError, ElementIndexError, SignParseError
from src.utils.logger import LEVELS, setup_logger
from src.utils.manifest import RunManifest

logger = logging.getLogger(__name__)


# ============================================================================
# CONSTANTS
# ============================================================================

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_PARTIAL = 3

VALIDATION_ERRORS = (
    AmbientSizeError,
    ElementIndexError,
    SignParseError,
    ConfigurationError,
    UnknownElementError,
    NotAMatroidPolytopeError,
    NotAFaceError,
    CollinearFaceError,
    InvalidOrderingError,
    NotSimpleError,
    NotAKOrderingError,
    GraphValidationError,
    ReconstructionFailedError,
    CubeDimensionError,
    InputFileError,
)


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_search_arguments(parser: argparse.ArgumentParser, default_mode: Optional[str]) -> None:
    parser.add_argument(
        "--mode",
        choices=[mode.value for mode in EnumerationMode],
        default=default_mode,
        help="Exhaustive lexicographic walk or uniform random sampling",
    )
    parser.add_argument("--seed", type=int, default=EnumerationConfig.DEFAULT_SEED, help="Sampling seed")
    parser.add_argument(
        "--budget",
        type=_positive_int,
        default=None,
        help="Orderings classified individually (sample size in sampling mode)",
    )
    parser.add_argument("--workers", type=_positive_int, default=1, help="Worker processes")


def build_parser() -> CliArgumentParser:
    """
    Builds the command-line parser.

    Returns:
        Parser with one subcommand per operation.
    """
    parser = CliArgumentParser(
        prog="polytope-orderings",
        description="Face lattices, K-orderings and shelling orderings of matroid polytopes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python run.py faces --input square.json
  python run.py check-ordering --input square.json --ordering e1,e4,e2,e3
  python run.py enumerate --input square.json --filter k-not-shelling
  python run.py reconstruct --graph cube3_graph.json --oracle cube3.json
  python run.py experiment --dim 3 --mode exhaustive --workers 4
        """
    )
    parser.add_argument("--log-level", choices=LEVELS, default="WARNING", help="Diagnostics on stderr")
    parser.add_argument("--log-dir", default=None, help="Also write logs to <dir>/app.log")
    parser.add_argument("--quiet", action="store_true", help="Disable progress bars")
    parser.add_argument("--manifest", default=None, help="Also write the run manifest to this file")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    sub = commands.add_parser("faces", help="Face lattice with f- and h*-vectors")
    sub.add_argument("--input", required=True, help="Point configuration JSON")

    sub = commands.add_parser("fvector", help="f- and h*-vectors")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="Point configuration JSON")
    source.add_argument("--h-star", help="Comma-separated h*-vector to convert back to an f-vector")

    sub = commands.add_parser("graph", help="Polytope graph in the graph exchange format")
    sub.add_argument("--input", required=True, help="Point configuration JSON")

    sub = commands.add_parser("check-ordering", help="Classify one linear ordering")
    sub.add_argument("--input", required=True, help="Point configuration JSON")
    sub.add_argument("--ordering", required=True, help='Comma-separated labels, least first, e.g. "e3,e1,e2"')

    sub = commands.add_parser("enumerate", help="Stream orderings matching a filter")
    sub.add_argument("--input", required=True, help="Point configuration JSON")
    sub.add_argument("--filter", choices=[f.value for f in OrderingFilter], default=OrderingFilter.K.value)
    sub.add_argument("--limit", type=int, default=None, help="Emit at most this many reports")
    _add_search_arguments(sub, EnumerationMode.EXHAUSTIVE.value)

    sub = commands.add_parser("verify", help="Brute-force check of the ordering theorems")
    sub.add_argument("--input", required=True, help="Point configuration JSON")
    _add_search_arguments(sub, EnumerationMode.EXHAUSTIVE.value)

    sub = commands.add_parser("reconstruct", help="Face lattice from the graph alone")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--graph", help="Graph JSON (vertices, edges)")
    source.add_argument("--input", help="Point configuration JSON whose graph is used")
    sub.add_argument("--oracle", help="Point configuration JSON to compare against")
    sub.add_argument("--budget", type=_positive_int, default=None, help="Orderings scored in the orientation search")
    sub.add_argument("--workers", type=_positive_int, default=1, help="Worker processes")

    sub = commands.add_parser("cube", help="Cube configuration C^d")
    sub.add_argument("--dim", type=int, required=True)
    sub.add_argument("--identity", action="store_true", help="Check the cube h*-identity instead")
    sub.add_argument("--samples", type=_positive_int, default=CubeConfig.DEFAULT_FUNCTIONAL_SAMPLES,
                     help="Functional orderings sampled for the identity beyond exhaustive scale")
    sub.add_argument("--seed", type=int, default=EnumerationConfig.DEFAULT_SEED)

    sub = commands.add_parser("experiment", help="Search K-orderings of C^d that are not shellings")
    sub.add_argument("--dim", type=int, required=True)
    sub.add_argument("--limit", type=int, default=None, help="Report at most this many witnesses")
    _add_search_arguments(sub, None)

    sub = commands.add_parser("corpus", help="Test corpus as JSON-lines configurations")
    sub.add_argument("--write-dir", default=None, help="Also save one <name>.json per polytope here")

    return parser


# ============================================================================
# COMMANDS
# ============================================================================

def _progress(args: argparse.Namespace) -> bool:
    return not args.quiet and sys.stderr.isatty()


def _context(path: str, manifest: RunManifest) -> PolytopeContext:
    manifest.add_input(path)
    return PolytopeContext.from_configuration(load_configuration(path))


def cmd_faces(args: argparse.Namespace, manifest: RunManifest) -> int:
    manifest.add_input(args.input)
    config = load_configuration(args.input)
    lattice = faces(OrientedMatroid.from_points(config))
    write_json(lattice.to_dict(), sys.stdout)
    return EXIT_OK


def cmd_fvector(args: argparse.Namespace, manifest: RunManifest) -> int:
    if args.h_star:
        try:
            h = [int(part) for part in args.h_star.split(",")]
        except ValueError:
            raise ConfigurationError(f"h*-vector must be comma-separated integers: {args.h_star!r}") from None
        f = f_from_h_star(h)
        write_json({"h_star": h, "f": list(f), "euler_ok": euler_sum(f) == 0}, sys.stdout)
        return EXIT_OK

    manifest.add_input(args.input)
    config = load_configuration(args.input)
    lattice = faces(OrientedMatroid.from_points(config))
    write_json(
        {"name": lattice.name, "f": list(lattice.f_vector), "h_star": list(lattice.h_star()),
         "euler_ok": lattice.euler_ok()},
        sys.stdout,
    )
    return EXIT_OK


def cmd_graph(args: argparse.Namespace, manifest: RunManifest) -> int:
    manifest.add_input(args.input)
    config = load_configuration(args.input)
    lattice = faces(OrientedMatroid.from_points(config))
    g = graph(lattice)
    document = g.to_dict()
    document.update({"name": config.name, "rank": lattice.rank, "simple": is_simple(g, lattice.rank)})
    write_json(document, sys.stdout)
    return EXIT_OK


def cmd_check_ordering(args: argparse.Namespace, manifest: RunManifest) -> int:
    context = _context(args.input, manifest)
    report = context.classify(LinearOrdering.parse(args.ordering))
    write_json(report.to_dict(), sys.stdout)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace, manifest: RunManifest) -> int:
    context = _context(args.input, manifest)
    manifest.seed, manifest.budget = args.seed, args.budget
    result = enumerate_orderings(
        context,
        filter=OrderingFilter(args.filter),
        mode=EnumerationMode(args.mode),
        seed=args.seed,
        budget=args.budget,
        limit=args.limit,
        workers=args.workers,
        progress=_progress(args),
    )
    write_json_lines((report.to_dict() for report in result.reports), sys.stdout)
    write_json(result.summary.to_dict(), sys.stdout)
    return EXIT_PARTIAL if result.summary.partial else EXIT_OK


def cmd_verify(args: argparse.Namespace, manifest: RunManifest) -> int:
    context = _context(args.input, manifest)
    manifest.seed, manifest.budget = args.seed, args.budget
    report = verify_theorems(
        context,
        mode=EnumerationMode(args.mode),
        seed=args.seed,
        budget=args.budget,
        workers=args.workers,
        progress=_progress(args),
    )
    write_json(report.to_dict(), sys.stdout)
    return EXIT_PARTIAL if report.partial else EXIT_OK


def cmd_reconstruct(args: argparse.Namespace, manifest: RunManifest) -> int:
    manifest.budget = args.budget
    if args.graph:
        manifest.add_input(args.graph)
        abstract = load_graph(args.graph)
        name = os.path.splitext(os.path.basename(args.graph))[0]
    else:
        context = _context(args.input, manifest)
        abstract = AbstractGraph.from_polytope_graph(context.graph)
        name = context.name

    result = reconstruct(abstract, budget=args.budget, workers=args.workers, progress=_progress(args), name=name)
    document = {
        "lattice": result.lattice.to_dict() if result.lattice is not None else None,
        "search": result.search.to_dict(),
    }
    if args.oracle:
        manifest.add_input(args.oracle)
        oracle = faces(OrientedMatroid.from_points(load_configuration(args.oracle)))
        if result.lattice is not None:
            document["comparison"] = compare_lattices(oracle, result.lattice).to_dict()
    write_json(document, sys.stdout)
    return EXIT_PARTIAL if result.search.partial else EXIT_OK


def cmd_cube(args: argparse.Namespace, manifest: RunManifest) -> int:
    if args.identity:
        manifest.seed = args.seed
        report = cube_h_star_identity(args.dim, seed=args.seed, samples=args.samples)
        write_json(report.to_dict(), sys.stdout)
    else:
        write_json(cube(args.dim).to_dict(), sys.stdout)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace, manifest: RunManifest) -> int:
    manifest.seed, manifest.budget = args.seed, args.budget
    report = problem_experiment(
        args.dim,
        mode=EnumerationMode(args.mode) if args.mode else None,
        seed=args.seed,
        budget=args.budget,
        limit=args.limit,
        workers=args.workers,
        progress=_progress(args),
    )
    write_json_lines((witness.to_dict() for witness in report.witnesses), sys.stdout)
    write_json(report.to_dict(), sys.stdout)
    return EXIT_PARTIAL if report.summary.partial else EXIT_OK


def cmd_corpus(args: argparse.Namespace, manifest: RunManifest) -> int:
    configurations = corpus()
    write_json_lines((config.to_dict() for config in configurations), sys.stdout)
    if args.write_dir:
        for config in configurations:
            save_configuration(config, os.path.join(args.write_dir, f"{config.name.replace('^', '')}.json"))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunManifest], int]] = {
    "faces": cmd_faces,
    "fvector": cmd_fvector,
    "graph": cmd_graph,
    "check-ordering": cmd_check_ordering,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "reconstruct": cmd_reconstruct,
    "cube": cmd_cube,
    "experiment": cmd_experiment,
    "corpus": cmd_corpus,
}


# ============================================================================
# MAIN
# ============================================================================

def main(argv: Optional[List[str]] = None) -> int:
    """
    Parses arguments, runs one command and returns its exit code.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:]).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return exit_request.code if isinstance(exit_request.code, int) else EXIT_USAGE

    setup_logger("src", args.log_level, args.log_dir)
    manifest = RunManifest(command=args.command)
    logger.info(f">>> {args.command}")

    try:
        code = COMMANDS[args.command](args, manifest)
    except VALIDATION_ERRORS as e:
        logger.error(f"[ERROR] {e}")
        sys.stderr.write(f"error: {e}\n")
        code = EXIT_VALIDATION
    except Exception as e:
        logger.exception(f"[ERROR] Unexpected failure in {args.command}: {e}")
        code = EXIT_USAGE

    manifest.finish(code)
    manifest.emit(args.manifest)
    if code == EXIT_PARTIAL:
        logger.warning("[WARN] Result is partial: budget exhausted")
    return code


if __name__ == "__main__":
    sys.exit(main())
