"""
Command-line port for the benchmark.
Subcommands: run (one manifest), suite (a manifest list), info (partition
statistics) and serve (HTTP port).
"""

import argparse
import json
import logging
import shlex
import sys
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from src.config.settings import DEFAULT_HOST, DEFAULT_METRICS_PATH, DEFAULT_PORT
from src.domain.errors import BspError, ConfigurationError, GraphFormatError
from src.domain.models import (
    AlgorithmName, EngineMode, GraphFormat, MatchingProgramName, PartitionScheme, RunManifest
)
from src.domain.repository import CsvMetricsRepository
from src.service.bench_service import BenchService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_IO = 3


class UsageError(Exception):
    """Bad command line or manifest."""


class _Parser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--graph", dest="graph_path", help="Input graph file")
    source.add_argument("--gen", dest="generator",
                        help="Generator: grid:WxH, bipartite:LxR:P, powerlaw:N:M or random:N:P[:MAXW]")
    parser.add_argument("--format", dest="graph_format", choices=[f.value for f in GraphFormat])
    parser.add_argument("--undirected", action="store_true", default=None,
                        help="Expand every edge-list line into two directed edges")
    parser.add_argument("--k", type=int, help="Partition count")
    parser.add_argument("--part", dest="partition", choices=[p.value for p in PartitionScheme])
    parser.add_argument("--part-file", dest="partition_file", help="'vertex partition' map for --part file")
    parser.add_argument("--seed", type=int)


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--algo", required=True, choices=[a.value for a in AlgorithmName])
    parser.add_argument("--engine", required=True, choices=[e.value for e in EngineMode])
    _add_graph_arguments(parser)
    parser.add_argument("--boundary-participation", action=argparse.BooleanOptionalAction, default=None,
                        help="Boundary vertices take part in local phases (default: per algorithm)")
    parser.add_argument("--async-local", dest="async_local_messaging", action="store_true", default=None)
    parser.add_argument("--no-combiner", dest="combiner", action="store_false", default=None)
    parser.add_argument("--delta", type=float, help="PageRank tolerance")
    parser.add_argument("--source", type=int, help="SSSP source vertex (input id)")
    parser.add_argument("--budget", type=int, help="Plain PageRank update budget")
    parser.add_argument("--bm-program", choices=[p.value for p in MatchingProgramName],
                        help="Matching program (default: standard on the standard engine, handshake elsewhere)")
    parser.add_argument("--max-iterations", type=int)
    parser.add_argument("--sequential", dest="parallel", action="store_false", default=None,
                        help="Run partition workers round-robin on one thread")
    parser.add_argument("--out", dest="output", help=f"Metrics CSV (default {DEFAULT_METRICS_PATH})")
    parser.add_argument("--dump-values", help="Write 'vertexId value' lines to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bsp-bench", description="Vertex-centric BSP engine benchmark")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_run_arguments(subparsers.add_parser("run", help="Execute one run and append its metrics"))

    suite = subparsers.add_parser("suite", help="Execute every manifest of a suite file")
    suite.add_argument("suite_file", help="JSON list of manifests, or one 'run' argument line per manifest")
    suite.add_argument("--out", dest="output", default=DEFAULT_METRICS_PATH, help="Metrics CSV")

    info = subparsers.add_parser("info", help="Print partition statistics of a graph")
    _add_graph_arguments(info)

    serve = subparsers.add_parser("serve", help="Start the HTTP port")
    serve.add_argument("--host", default=DEFAULT_HOST)
    serve.add_argument("--port", type=int, default=DEFAULT_PORT)
    return parser


_NON_MANIFEST = {"command", "suite_file", "host", "port"}


def manifest_from_args(args: argparse.Namespace, **overrides) -> RunManifest:
    """Unset flags fall back to RunManifest defaults."""
    fields: Dict[str, object] = {
        key: value for key, value in vars(args).items() if key not in _NON_MANIFEST and value is not None
    }
    fields.update(overrides)
    try:
        return RunManifest(**fields)
    except ValidationError as e:
        raise UsageError(str(e)) from e


def load_suite(path: str) -> List[RunManifest]:
    """Read a JSON manifest list, or text with one run argument line per manifest."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise UsageError(f"{path}: not valid UTF-8 text") from e
    if text.lstrip().startswith("["):
        try:
            return [RunManifest(**entry) for entry in json.loads(text)]
        except (ValidationError, TypeError, json.JSONDecodeError) as e:
            raise UsageError(f"{path}: {e}") from e

    run_parser = _Parser(prog="suite entry")
    _add_run_arguments(run_parser)
    manifests = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = shlex.split(line)
        if tokens[0] == "run":
            tokens = tokens[1:]
        try:
            manifests.append(manifest_from_args(run_parser.parse_args(tokens)))
        except UsageError as e:
            raise UsageError(f"{path}:{line_number}: {e}") from e
    return manifests


def _cmd_run(args: argparse.Namespace) -> int:
    manifest = manifest_from_args(args)
    service = BenchService(CsvMetricsRepository(manifest.output or DEFAULT_METRICS_PATH))
    outcome = service.run(manifest)
    print(outcome.record.model_dump_json())
    return EXIT_OK if outcome.record.converged else EXIT_NOT_CONVERGED


def _cmd_suite(args: argparse.Namespace) -> int:
    manifests = load_suite(args.suite_file)
    service = BenchService(CsvMetricsRepository(args.output))
    outcomes = service.run_suite(manifests)
    for outcome in outcomes:
        print(outcome.record.model_dump_json())
    return EXIT_OK if all(o.success for o in outcomes) else EXIT_NOT_CONVERGED


def _cmd_info(args: argparse.Namespace) -> int:
    # info needs no algorithm; these two only satisfy the manifest schema
    manifest = manifest_from_args(args, algo=AlgorithmName.PAGERANK_INC, engine=EngineMode.STANDARD)
    service = BenchService(CsvMetricsRepository(DEFAULT_METRICS_PATH))
    print(json.dumps(service.describe(manifest), indent=2))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    logger.info(f"Starting BSP bench HTTP port on {args.host}:{args.port}")
    uvicorn.run("src.api:app", host=args.host, port=args.port, log_level="info")
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "suite": _cmd_suite, "info": _cmd_info, "serve": _cmd_serve}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse `argv` and dispatch; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError) as e:
        logger.error(f"Usage error: {e}")
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphFormatError) as e:
        logger.error(f"I/O error: {e}")
        print(str(e), file=sys.stderr)
        return EXIT_IO
    except BspError as e:
        logger.error(f"Run failed: {e}")
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
