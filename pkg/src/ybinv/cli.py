"""Command line interface: ``ybinv``.

Exit codes: 0 success, 1 parse error, 2 parameter validation failure,
3 size guard, 4 a requested Markov-move check found a mismatch.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .algebra import MAX_DIMENSION, dimension
from .errors import ParameterError, ParseError, SizeGuardError
from .exact import CyclotomicScalar, parse_cyclotomic
from .invariant import (
    BraidWordB,
    compute_invariant,
    invariant_equal,
    markov_move,
    parse_braid,
)
from .rep import REP_SIZE_LIMIT
from .trace import SubsetSolution, TraceParams, subset_solution

__all__ = ["main", "ParameterSpec", "parse_parameter_file", "build_parameters"]

EXIT_OK, EXIT_PARSE, EXIT_PARAMS, EXIT_SIZE, EXIT_MARKOV = 0, 1, 2, 3, 4


@dataclass
class ParameterSpec:
    """Parameters gathered from a file and/or the command line."""

    d: int | None = None
    subset: list[int] | None = None
    alpha: dict[int, str] = field(default_factory=dict)
    x: dict[int, str] = field(default_factory=dict)
    y: dict[int, str] = field(default_factory=dict)


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise ParseError(f"{what}: expected an integer, got {text!r}") from exc


def _parse_assignment(text: str, what: str) -> tuple[int, str]:
    if "=" not in text:
        raise ParseError(f"{what}: expected 'k=literal', got {text!r}")
    key, value = text.split("=", 1)
    return _parse_int(key, what), value.strip()


def parse_subset(text: str) -> list[int]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    return [_parse_int(p, "subset") for p in parts]


def parse_alpha(text: str) -> dict[int, str]:
    out: dict[int, str] = {}
    for chunk in text.split(";"):
        if chunk.strip():
            k, v = _parse_assignment(chunk, "alpha")
            out[k] = v
    return out


def parse_parameter_file(text: str) -> ParameterSpec:
    """Directives, one per line: ``d <int>``, ``subset a,b``, ``alpha s=lit``,
    ``x k=lit``, ``y k=lit``.  ``#`` starts a comment."""
    spec = ParameterSpec()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        where = f"line {lineno}"
        if key == "d":
            spec.d = _parse_int(rest, where)
        elif key == "subset":
            spec.subset = parse_subset(rest)
        elif key in ("alpha", "x", "y"):
            k, v = _parse_assignment(rest, where)
            getattr(spec, key)[k] = v
        else:
            raise ParseError(f"{where}: unknown directive {key!r}")
    return spec


def build_parameters(spec: ParameterSpec) -> SubsetSolution | TraceParams:
    """Turn a ParameterSpec into a subset solution or raw trace parameters.

    Without a subset the solution for S = {0} is used; alpha defaults to 1 on
    every element of S.
    """
    d = spec.d
    if d is None or d < 1:
        raise ParseError("the framing modulus d must be given as a positive integer")
    if spec.x or spec.y:
        if spec.subset is not None or spec.alpha:
            raise ParseError("give either raw x/y values or subset/alpha, not both")
        missing = [k for k in range(d) if k not in spec.x or k not in spec.y]
        if missing:
            raise ParseError(f"raw parameters need x_k and y_k for every k < d; missing {missing}")
        x = tuple(parse_cyclotomic(spec.x[k], d) for k in range(d))
        y = tuple(parse_cyclotomic(spec.y[k], d) for k in range(d))
        return TraceParams(d, x, y)
    subset = spec.subset if spec.subset is not None else [0]
    if not subset:
        raise ParameterError("the subset S must be non-empty")
    s = sorted({a % d for a in subset})
    alpha: dict[int, CyclotomicScalar] = {a: CyclotomicScalar.one(d) for a in s}
    for k, lit in spec.alpha.items():
        if k % d not in alpha:
            raise ParameterError(f"alpha given for {k}, which is not in S")
        alpha[k % d] = parse_cyclotomic(lit, d)
    return subset_solution(d, s, alpha)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors are parse errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _make_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="ybinv",
        description="Exact invariants of framed type-B braids from the Markov trace on Y_{d,n}^B.",
    )
    p.add_argument("--d", type=int, help="framing modulus d")
    p.add_argument("--n", type=int, help="number of strands (default: smallest that fits)")
    p.add_argument("--subset", help="subset S of Z/d, e.g. 0,2 (default 0)")
    p.add_argument("--alpha", help="alpha values, e.g. '0=1;2=1/2+w' (default 1 on S)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--braid", help="braid word, e.g. 'r s1 t2^1 s1^-1'")
    src.add_argument("--file", type=Path, help="file with one braid word per line ('#' comments)")
    p.add_argument("--params", type=Path, help="parameter file (d, subset, alpha or x/y directives)")
    p.add_argument("--check-markov", type=int, default=0, metavar="TRIALS",
                   help="also check TRIALS random Markov moves per word")
    p.add_argument("--seed", type=int, default=0, help="seed for --check-markov")
    p.add_argument("--unsafe", action="store_true",
                   help="skip the E/F validation (the result is then not an invariant)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _within_envelope(n: int, d: int) -> bool:
    return dimension(n, d) <= MAX_DIMENSION and (2 * n * d) ** n <= REP_SIZE_LIMIT


def _markov_trials(word: BraidWordB, sol, unsafe: bool, trials: int, rng: random.Random) -> tuple[int, list[str]]:
    base = compute_invariant(word, sol, unsafe=unsafe)
    failures = []
    for _ in range(trials):
        moves = ["conjugate"]
        if _within_envelope(word.n + 1, word.d):
            moves += ["stabilize+", "stabilize-"]
        move = rng.choice(moves)
        moved = markov_move(word, move, rng=rng)
        if not invariant_equal(base, compute_invariant(moved, sol, unsafe=unsafe)):
            failures.append(f"{move}: {moved}")
    return trials, failures


def _read_jobs(args: argparse.Namespace) -> list[str]:
    if args.file is not None:
        try:
            text = args.file.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {args.file}: {exc}") from exc
        jobs = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                jobs.append(line)
        return jobs
    if args.braid is None:
        raise ParseError("give --braid or --file")
    return [args.braid]


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _make_parser().parse_args(argv)
    try:
        spec = ParameterSpec()
        if args.params is not None:
            try:
                spec = parse_parameter_file(args.params.read_text())
            except OSError as exc:
                raise ParseError(f"cannot read {args.params}: {exc}") from exc
        if args.d is not None:
            spec.d = args.d
        if args.subset is not None:
            spec.subset = parse_subset(args.subset)
        if args.alpha is not None:
            spec.alpha = parse_alpha(args.alpha)
        sol = build_parameters(spec)
        jobs = _read_jobs(args)
    except ParseError as exc:
        print(f"ybinv: parse error: {exc}", file=err)
        return EXIT_PARSE
    except ParameterError as exc:
        print(f"ybinv: invalid parameters: {exc}", file=err)
        return EXIT_PARAMS

    d = spec.d
    batch = args.file is not None
    rng = random.Random(args.seed)
    results = []
    status = EXIT_OK
    for text in jobs:
        try:
            try:
                word = parse_braid(text, d, args.n)
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
            value = compute_invariant(word, sol, unsafe=args.unsafe)
            record = {"braid": str(word), "n": word.n, "d": d, **value.as_dict()}
            if args.check_markov > 0:
                trials, failures = _markov_trials(word, sol, args.unsafe, args.check_markov, rng)
                record["markov_check"] = {"trials": trials, "failures": failures}
                if failures and status == EXIT_OK:
                    status = EXIT_MARKOV
            results.append(record)
        except ParseError as exc:
            print(f"ybinv: parse error in {text!r}: {exc}", file=err)
            status = status or EXIT_PARSE
        except ParameterError as exc:
            print(f"ybinv: invalid parameters: {exc}", file=err)
            status = status or EXIT_PARAMS
        except SizeGuardError as exc:
            print(f"ybinv: size guard: {exc}", file=err)
            status = status or EXIT_SIZE

    if args.format == "json":
        payload = results if batch else (results[0] if results else None)
        if payload is not None:
            print(json.dumps(payload, indent=2), file=out)
    else:
        for i, record in enumerate(results):
            if batch:
                if i:
                    print(file=out)
                print(f"braid = {record['braid']}", file=out)
            print(f"invariant = {record['invariant']}", file=out)
            print(f"half_power = {record['half_power']}", file=out)
            if "markov_check" in record:
                mc = record["markov_check"]
                verdict = "ok" if not mc["failures"] else f"{len(mc['failures'])} failed"
                print(f"markov_check = {verdict} ({mc['trials']} moves)", file=out)
    return status


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
