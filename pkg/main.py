import argparse
import sys
from typing import Any, Callable, Dict, List, Optional

import anyio
from loguru import logger
from pydantic import ValidationError

from config import CACHE_DIR, DEFAULT_FORMAT, LOG_LEVEL

# Import all command modules
try:
    from cli.emit import render
    from cli.models import COMMANDS, JobConfig
    from cli.tools import (
        cmd_crystal, cmd_klpoly, cmd_mult_hecke, cmd_mult_schur, cmd_pcan, cmd_verify, cmd_weights
    )
    logger.info("Successfully imported all command modules")
except ImportError as e:
    logger.error(f"Failed to import modules: {e}")
    raise

HANDLERS: Dict[str, Callable[[JobConfig], Any]] = {
    "pcan": cmd_pcan,
    "klpoly": cmd_klpoly,
    "mult-schur": cmd_mult_schur,
    "mult-hecke": cmd_mult_hecke,
    "crystal": cmd_crystal,
    "weights": cmd_weights,
    "verify": cmd_verify,
}

# ============= ARGUMENT PARSING =============


def _int_list(text: str) -> List[int]:
    try:
        return [int(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of integers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcanon", description="p-canonical bases and decomposition numbers")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "pcan": "Tabulate p-canonical basis elements",
        "klpoly": "Tabulate the Kazhdan-Lusztig basis",
        "mult-schur": "Decomposition numbers of the cyclotomic Schur algebra",
        "mult-hecke": "Decomposition numbers of the cyclotomic Hecke algebra",
        "crystal": "Signatures and crystal operators on a multipartition",
        "weights": "Replay a Littelmann chain with its dot polynomials",
        "verify": "Run the invariant suites and check the cache",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--kind", choices=["finite", "affine"], default="finite")
        p.add_argument("--rank", type=int)
        p.add_argument("--e", type=int)
        p.add_argument("--p", dest="primes", action="append", default=[],
                       help="A prime or 'rational'; repeat for several")
        p.add_argument("--charges", type=_int_list, default=[])
        p.add_argument("--m-vector", dest="m_vector", type=_int_list, default=[])
        p.add_argument("--max-length", dest="max_length", type=int, default=3)
        p.add_argument("--lambda", dest="lam", help='Multipartition such as "2,2|3,1,1,1"')
        p.add_argument("--mu")
        p.add_argument("--n", type=int)
        p.add_argument("--order", choices=["schur", "negative-level"], default="schur")
        p.add_argument("--word", type=_int_list, default=[])
        p.add_argument("--weight", type=_int_list, default=[])
        p.add_argument("--color", type=int)
        p.add_argument("--format", default=DEFAULT_FORMAT, help="json, csv or latex")
        p.add_argument("--cache-dir", dest="cache_dir", default=CACHE_DIR)
        p.add_argument("--no-cache", dest="use_cache", action="store_false")
    return parser


# ============= ENTRY POINT =============


def main(argv: Optional[List[str]] = None) -> int:
    logger.remove()
    logger.add(sys.stderr, level=LOG_LEVEL)
    args = build_parser().parse_args(argv)
    try:
        config = JobConfig(**vars(args))
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return 2
    logger.info(f"Starting {config.command}")
    result = anyio.run(HANDLERS[config.command], config)
    if "table" in result:
        sys.stdout.write(render(result["table"], config.format))
    if "error" in result:
        logger.error(f"{config.command} failed: {result['error']} {result.get('details', '')}")
        return result.get("exit_code", 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
