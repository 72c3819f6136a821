#!/usr/bin/env python
"""
Command line for flagpave.

    flagpave roots --type E --rank 6 --maximal
    flagpave ar e6_ar --dot e6.dot
    flagpave pave a3 --root 1,1,1 --d 2 --strict --all-f

Exit codes: 0 success, 1 usage or parse error, 2 verification mismatch,
3 unresolved paving, 4 enumeration budget exceeded.
"""

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .config import get_settings, reset_settings
from .errors import FlagPaveError, InputFormatError, exit_code_for
from .tools import (
    ARSeqTool,
    ARTool,
    ClassifyTool,
    CountTool,
    ExtQuiverTool,
    ExtTool,
    HomTool,
    IndecTool,
    PaveTool,
    PhiTool,
    RootsTool,
    SecMonoTool,
    TauTool,
    VerifyTool,
    XSTool,
)

logger = logging.getLogger("flagpave")

STATUS_EXIT = {"verified": 0, "mismatch": 2, "unresolved": 3}

TOOLS = {
    "roots": RootsTool,
    "classify": ClassifyTool,
    "indec": IndecTool,
    "hom": HomTool,
    "ext": ExtTool,
    "extquiver": ExtQuiverTool,
    "phi": PhiTool,
    "ar": ARTool,
    "tau": TauTool,
    "arseq": ARSeqTool,
    "secmono": SecMonoTool,
    "xs": XSTool,
    "count": CountTool,
    "pave": PaveTool,
    "verify": VerifyTool,
}


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors share exit code 1."""

    def error(self, message):
        raise InputFormatError(f"{self.prog}: {message}")


def _selectors(p: argparse.ArgumentParser, required_root: bool = False) -> None:
    p.add_argument("quiver", help="Quiver file or bundled name (a2, a3, a4, d4, e6_ar, e7_alt, e8, ...)")
    if required_root:
        p.add_argument("--root", required=True, help="Dimension vector, comma separated in quiver vertex order")
        return
    p.add_argument("--root", help="Dimension vector, comma separated; '+' joins summands")
    p.add_argument("--rep", help="Representation file")


def _depth(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, default=1, help="Flag length")
    p.add_argument("--strict", action="store_true", help="Strict flags")


def _targets(p: argparse.ArgumentParser) -> None:
    p.add_argument("--f", help="Extended dimension vector, level-major, comma separated")
    p.add_argument("--all-f", action="store_true", help="Every admissible extended dimension vector")
    p.add_argument("--q", type=int, nargs="+", help="Primes (default QP_PRIMES)")


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--json", action="store_true", help="Print the JSON document")
    shared.add_argument("--max-nodes", type=int, help="Enumeration budget (overrides QP_MAX_NODES)")
    shared.add_argument("--seed", type=int, help="Seed for sampling (overrides QP_SEED)")
    shared.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    parser = _Parser(prog="flagpave", description="Affine pavings of quiver flag varieties for Dynkin quivers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", parents=[shared], help=RootsTool().description)
    p.add_argument("--type", required=True, help="A, D, E, affA, affD or affE")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--maximal", action="store_true", help="Only the maximal root")
    p.add_argument("--delta", action="store_true", help="Only the minimal imaginary root")

    p = sub.add_parser("classify", parents=[shared], help=ClassifyTool().description)
    p.add_argument("quiver")

    p = sub.add_parser("indec", parents=[shared], help=IndecTool().description)
    _selectors(p)

    for name in ("hom", "ext"):
        p = sub.add_parser(name, parents=[shared], help=TOOLS[name]().description)
        _selectors(p)
        p.add_argument("--root2", help="Second module as a dimension vector")
        p.add_argument("--rep2", help="Second module as a representation file")
        if name == "ext":
            _depth(p)
            p.add_argument("--bound", help="First module as a bound module file")
            p.add_argument("--bound2", help="Second module as a bound module file")

    p = sub.add_parser("extquiver", parents=[shared], help=ExtQuiverTool().description)
    p.add_argument("quiver")
    _depth(p)

    p = sub.add_parser("phi", parents=[shared], help=PhiTool().description)
    _selectors(p)
    _depth(p)

    p = sub.add_parser("ar", parents=[shared], help=ARTool().description)
    p.add_argument("quiver")
    p.add_argument("--dot", help="Write the DOT rendering to this file")

    for name in ("tau", "arseq", "secmono"):
        p = sub.add_parser(name, parents=[shared], help=TOOLS[name]().description)
        _selectors(p, required_root=True)

    p = sub.add_parser("xs", parents=[shared], help=XSTool().description)
    _selectors(p)
    p.add_argument("--x", help="X as dimension vectors joined by '+'")
    p.add_argument("--s", help="S as dimension vectors joined by '+'")
    p.add_argument("--p", type=int, help="Also compute S^X by brute force over F_p")

    p = sub.add_parser("count", parents=[shared], help=CountTool().description)
    _selectors(p)
    _depth(p)
    _targets(p)
    p.add_argument("--oracle", choices=["submodules", "chains"], default="submodules")
    p.add_argument("--cross-check", action="store_true", help="Run both oracles and compare")
    p.add_argument("--fit", action="store_true", help="Interpolate counting polynomials")

    p = sub.add_parser("pave", parents=[shared], help=PaveTool().description)
    _selectors(p)
    _depth(p)
    _targets(p)

    p = sub.add_parser("verify", parents=[shared], help=VerifyTool().description)
    p.add_argument("quiver")
    _depth(p)
    p.add_argument("--root", help="Restrict the count comparison to this indecomposable")
    p.add_argument("--q", type=int, nargs="+", help="Primes (default QP_PRIMES)")
    p.add_argument("--sample", type=int, default=0, help="Sample at most this many items per check (0 = all)")
    return parser


def _configure(args: argparse.Namespace) -> None:
    if args.max_nodes is not None:
        os.environ["QP_MAX_NODES"] = str(args.max_nodes)
    if args.seed is not None:
        os.environ["QP_SEED"] = str(args.seed)
    reset_settings()
    level = "DEBUG" if args.verbose else get_settings().log_level
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _fail(exc: BaseException, code: int) -> int:
    print(json.dumps({"error": str(exc), "type": type(exc).__name__}, indent=2))
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        _configure(args)
        tool = TOOLS[args.command]()
        fields = tool.args_schema.model_fields
        kwargs = {k: v for k, v in vars(args).items() if k in fields and v is not None}
        output = tool.safe_run(**kwargs)
    except ValidationError as exc:
        return _fail(exc, 1)
    except FlagPaveError as exc:
        logger.debug("command failed", exc_info=True)
        return _fail(exc, exit_code_for(exc))
    except (OSError, ValueError) as exc:
        return _fail(exc, 1)
    payload = json.loads(output)
    if "error" in payload:
        logger.debug("%s failed: %s", args.command, payload["error"])
        print(output)
        return payload["exit_code"]
    print(output if args.json else tool.format_text(payload))
    return STATUS_EXIT.get(payload.get("status", "verified"), 0)


if __name__ == "__main__":
    sys.exit(run())
