"""
ccs command line
Parses an ideal from text, runs the characteristic class pipeline and prints
the result as text or JSON. ``ccs batch FILE`` runs one request per line.
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import Config
from services.algebra_core import FieldSpec
from services.classes import AFFINE_METHODS, CharacteristicClassService, excess_count
from services.errors import (
    AlgebraError,
    GenericityFailure,
    InvalidField,
    ParseError,
    UnknownVariable,
    UnsupportedField,
)
from services.parser import parse_class, parse_ideal
from services.renderer import FORMATS, render, to_payload

logger = logging.getLogger(__name__)

COMMANDS = ("segre", "fulton", "csm", "milnor", "euler", "euleraffine", "degrees", "excess")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_GENERICITY = 3
EXIT_UNSUPPORTED = 4


class Request(BaseModel):
    """One pipeline invocation, shared by the CLI, batch mode and the HTTP app"""
    command: str
    generators: str
    vars: Optional[List[str]] = None
    field: str = "q"
    seed: int = Field(default_factory=lambda: Config.SEED)
    format: str = "text"
    force: bool = False
    simplify: bool = False
    method: str = "limit"
    workers: Optional[int] = None
    d: Optional[int] = None
    n: Optional[int] = None

    @field_validator("command")
    @classmethod
    def known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command {value!r}, expected one of {', '.join(COMMANDS)}")
        return value

    @field_validator("format")
    @classmethod
    def known_format(cls, value: str) -> str:
        if value not in FORMATS:
            raise ValueError(f"unknown format {value!r}, expected one of {', '.join(FORMATS)}")
        return value

    @field_validator("method")
    @classmethod
    def known_method(cls, value: str) -> str:
        if value not in AFFINE_METHODS:
            raise ValueError(f"unknown method {value!r}, expected one of {', '.join(AFFINE_METHODS)}")
        return value

    @field_validator("vars")
    @classmethod
    def clean_vars(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return None
        names = [name.strip() for name in value if name.strip()]
        return names or None

    @model_validator(mode="after")
    def excess_arguments(self) -> "Request":
        if self.command == "excess":
            if self.d is None or self.n is None:
                raise ValueError("excess needs both d and n")
            if self.n < 0:
                raise ValueError(f"n must be >= 0, got {self.n}")
        return self


def result_key(command: str) -> str:
    return "excess" if command == "excess" else "euler"


def execute(request: Request):
    """Run one request and return the raw result object.

    Raises:
        AlgebraError: any failure of the parser or the class pipeline
    """
    if request.command == "excess":
        s = parse_class(request.generators, request.n)
        return excess_count(s, request.d)

    field = FieldSpec.parse(request.field)
    ideal = parse_ideal(request.generators, request.vars, field)
    logger.info(f"{request.command} of {ideal}")
    service = CharacteristicClassService(seed=request.seed, max_workers=request.workers,
                                         force=request.force, simplify=request.simplify)
    if request.command == "degrees":
        return service.projective_degrees(ideal)
    if request.command == "euleraffine":
        return service.euler_affine(ideal, request.method)
    return getattr(service, request.command)(ideal)


def exit_code(error: Exception) -> int:
    if isinstance(error, (ParseError, UnknownVariable, InvalidField, ValidationError)):
        return EXIT_USAGE
    if isinstance(error, GenericityFailure):
        return EXIT_GENERICITY
    if isinstance(error, UnsupportedField):
        return EXIT_UNSUPPORTED
    return EXIT_FAILURE


def describe_error(error: Exception, source: str = "") -> str:
    """One-line message; parse errors get the offending source with a caret."""
    if isinstance(error, ValidationError):
        return "; ".join(e["msg"] for e in error.errors())
    position = getattr(error, "position", None)
    if source and position is not None and "\n" not in source:
        return f"{error}\n  {source}\n  {' ' * position}^"
    return str(error)


def run_batch_line(number: int, line: str, defaults: Dict[str, Any]) -> Dict[str, Any]:
    """Run ``<command>; <vars>; <field>; <generators>`` and tag the outcome with its line number.

    For ``excess`` the vars slot carries ``d,n``.
    """
    parts = [part.strip() for part in line.split(";", 3)]
    if len(parts) != 4:
        return {"line": number, "error": "expected '<command>; <vars>; <field>; <generators>'",
                "exit_code": EXIT_USAGE}
    command, names, field, generators = parts
    try:
        fields: Dict[str, Any] = dict(defaults, command=command, generators=generators,
                                      field=field or "q", format="json")
        if command == "excess":
            d, n = (int(v) for v in names.split(","))
            fields.update(d=d, n=n)
        elif names:
            fields["vars"] = names.split(",")
        request = Request(**fields)
        result = execute(request)
        return {"line": number, "command": command,
                "result": to_payload(result, result_key(command))}
    except (AlgebraError, ValidationError, ValueError) as e:
        logger.error(f"Line {number}: {e}")
        code = EXIT_USAGE if type(e) is ValueError else exit_code(e)
        return {"line": number, "command": command, "error": describe_error(e),
                "exit_code": code}


def read_batch(path: str) -> List[Tuple[int, str]]:
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    return [(k, line) for k, line in enumerate(lines, start=1)
            if line.strip() and not line.lstrip().startswith("#")]


def run_batch(path: str, defaults: Dict[str, Any], workers: int) -> int:
    """Stream JSON lines for every request in ``path``; returns the worst exit code."""
    entries = read_batch(path)
    logger.info(f"Batch {path}: {len(entries)} request(s) on {workers} worker(s)")

    def run(entry: Tuple[int, str]) -> Dict[str, Any]:
        return run_batch_line(entry[0], entry[1], defaults)

    worst = EXIT_OK
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = pool.map(run, entries)
            for outcome in outcomes:
                print(json.dumps(outcome), flush=True)
                worst = max(worst, outcome.get("exit_code", EXIT_OK))
    else:
        for entry in entries:
            outcome = run(entry)
            print(json.dumps(outcome), flush=True)
            worst = max(worst, outcome.get("exit_code", EXIT_OK))
    return worst


def _vars(text: str) -> List[str]:
    return [name.strip() for name in text.split(",") if name.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q (rationals) or fp:<p>")
    common.add_argument("--vars", type=_vars, default=None,
                        help="comma separated ring variables; inferred when omitted")
    common.add_argument("--seed", type=int, default=None,
                        help=f"master seed for slicing forms (default $CCS_SEED or {Config.DEFAULT_SEED})")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--force", action="store_true",
                        help="allow CSM and Euler computations over a prime field")
    common.add_argument("--simplify", action="store_true",
                        help="drop redundant generators before inclusion-exclusion")
    common.add_argument("--workers", type=int, default=None,
                        help="threads for inclusion-exclusion subsets and batch lines")

    parser = argparse.ArgumentParser(
        prog="ccs",
        description="Segre, Fulton, CSM and Milnor classes and Euler characteristics of projective schemes")
    commands = parser.add_subparsers(dest="command", required=True)

    helps = {
        "segre": "push-forward of the Segre class",
        "fulton": "Chern-Fulton class",
        "csm": "Chern-Schwartz-MacPherson class of the support",
        "milnor": "Fulton, CSM and Milnor classes with the Euler characteristic",
        "euler": "Euler characteristic of the support in P^n",
        "euleraffine": "Euler characteristic of an affine scheme in A^n",
        "degrees": "projective degrees of the graph of the rational map",
    }
    for name, help_text in helps.items():
        sub = commands.add_parser(name, parents=[common], help=help_text)
        if name == "euleraffine":
            sub.add_argument("--method", choices=AFFINE_METHODS, default="limit")
        sub.add_argument("generators", help='generators, e.g. "x*y, x*z, y*z"')

    excess = commands.add_parser("excess", parents=[common],
                                 help="d^n minus the contribution of the base scheme")
    excess.add_argument("-d", type=int, required=True, help="degree of the hypersurfaces")
    excess.add_argument("-n", type=int, required=True, help="ambient dimension")
    excess.add_argument("generators", metavar="segre", help='Segre class, e.g. "3*H^2 - 10*H^3"')

    batch = commands.add_parser("batch", parents=[common], help="run one request per line of FILE")
    batch.add_argument("file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=Config.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )
    seed = Config.SEED if args.seed is None else args.seed
    workers = args.workers or Config.MAX_WORKERS

    if args.command == "batch":
        defaults = {"seed": seed, "force": args.force, "simplify": args.simplify}
        try:
            return run_batch(args.file, defaults, workers)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE

    fields: Dict[str, Any] = {
        "command": args.command,
        "generators": args.generators,
        "vars": args.vars,
        "field": args.field,
        "seed": seed,
        "format": args.format,
        "force": args.force,
        "simplify": args.simplify,
        "workers": args.workers,
    }
    if args.command == "euleraffine":
        fields["method"] = args.method
    if args.command == "excess":
        fields.update(d=args.d, n=args.n)

    try:
        request = Request(**fields)
        result = execute(request)
    except (AlgebraError, ValidationError) as e:
        logger.debug(f"{args.command} failed: {e!r}")
        print(f"error: {describe_error(e, args.generators)}", file=sys.stderr)
        return exit_code(e)

    print(render(result, request.format, result_key(request.command)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
