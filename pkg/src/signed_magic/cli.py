"""Command-line front end and the grid file formats.

Exit codes: 0 success, 1 verification failed, 2 unsupported parameters,
3 provider timeout or inconclusive search, 64 usage error, 65 unparsable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .core import (
    ArraySpec,
    ArgumentError,
    ProviderTimeout,
    SignedGrid,
    SignedMagicError,
    SpecError,
    UnsupportedParameters,
    render_rows,
    verify,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNSUPPORTED = 2
EXIT_TIMEOUT = 3
EXIT_USAGE = 64
EXIT_PARSE = 65


class GridParseError(SignedMagicError, ValueError):
    pass


# ---------------------------------------------------------------- formats


def grid_to_json(grid: SignedGrid, s: int, t: int) -> dict:
    cells = [{"r": r + 1, "c": c + 1, "v": v} for (r, c), v in sorted(grid.cells.items())]
    meta = {"method": grid.meta.get("method"), "provider_key": grid.meta.get("provider_key")}
    return {"m": grid.m, "n": grid.n, "s": s, "t": t, "cells": cells, "meta": meta}


def grid_from_json(doc: dict) -> tuple[SignedGrid, int, int]:
    try:
        m, n, s, t = (int(doc[k]) for k in ("m", "n", "s", "t"))
        cells = {}
        for cell in doc["cells"]:
            key = (int(cell["r"]) - 1, int(cell["c"]) - 1)
            if key in cells:
                raise GridParseError(f"duplicate cell {key[0] + 1},{key[1] + 1}")
            cells[key] = int(cell["v"])
        meta = {k: str(v) for k, v in (doc.get("meta") or {}).items() if v is not None}
        return SignedGrid(m, n, cells, meta), s, t
    except (KeyError, TypeError, ValueError, ArgumentError) as exc:
        if isinstance(exc, GridParseError):
            raise
        raise GridParseError(f"malformed grid document: {exc}") from exc


def grid_to_text(grid: SignedGrid, s: int, t: int) -> str:
    return f"# {grid.m} {grid.n} {s} {t}\n{render_rows(grid.to_rows())}\n"


def grid_from_text(text: str) -> tuple[SignedGrid, int, int]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].lstrip().startswith("#"):
        raise GridParseError("text grid must start with a '# m n s t' header")
    try:
        m, n, s, t = (int(x) for x in lines[0].lstrip()[1:].split())
        rows = [[None if tok == "." else int(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise GridParseError(f"malformed text grid: {exc}") from exc
    if len(rows) != m or any(len(r) != n for r in rows):
        raise GridParseError(f"expected {m} rows of {n} tokens")
    cells = {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row) if v is not None}
    return SignedGrid(m, n, cells), s, t


def load_grid(text: str) -> tuple[SignedGrid, int, int]:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GridParseError(f"invalid JSON: {exc}") from exc
        return grid_from_json(doc)
    return grid_from_text(text)


def dump_grid(grid: SignedGrid, s: int, t: int, fmt: str) -> str:
    if fmt == "text":
        return grid_to_text(grid, s, t)
    return json.dumps(grid_to_json(grid, s, t), sort_keys=True) + "\n"


# ---------------------------------------------------------------- commands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args: argparse.Namespace) -> int:
    from .rectangles import construct_double_rectangle
    from .squares import construct_sms
    from .tight import construct_tight

    if args.family == "tight":
        grid = construct_tight(args.rows, args.cols)
        spec = ArraySpec.tight(args.rows, args.cols)
    elif args.family == "square":
        grid = construct_sms(args.n, args.t)
        spec = ArraySpec.square(args.n, args.t)
    else:
        grid = construct_double_rectangle(args.m, args.t)
        spec = ArraySpec.double(args.m, args.t)
    _emit(dump_grid(grid, spec.s, spec.t, args.format), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        grid, s, t = load_grid(text)
        spec = ArraySpec(grid.m, grid.n, s, t)
    except (GridParseError, SpecError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = verify(grid, spec)
    doc = report.as_dict()
    doc["spec"] = [spec.m, spec.n, spec.s, spec.t]
    doc["failing_rows"] = report.failing_rows(spec.s)
    doc["failing_cols"] = report.failing_cols(spec.t)
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK if report.is_valid_sma else EXIT_INVALID


def classify(m: int, n: int, s: int, t: int) -> tuple[str, tuple[int, int]] | None:
    """Name the characterized family a spec belongs to; the double family is
    checked first, then squares, then tight arrays."""
    if n == 2 * m and s == 2 * t and m >= t >= 3:
        return "double", (m, t)
    if m == n and s == t:
        return "square", (n, t)
    if s == n and t == m:
        return "tight", (m, n)
    return None


def cmd_decide(args: argparse.Namespace) -> int:
    from .decide import decide_double_rectangle, decide_square, decide_tight

    try:
        ArraySpec(args.m, args.n, args.s, args.t)
    except SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    family = classify(args.m, args.n, args.s, args.t)
    if family is None:
        print("family not characterized", file=sys.stderr)
        return EXIT_UNSUPPORTED
    name, params = family
    fn = {"double": decide_double_rectangle, "square": decide_square, "tight": decide_tight}[name]
    print(f"{fn(*params)}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    from .oracle import Inconclusive, count_all, search_one
    from .providers import SearchLimits

    try:
        m, n, s, t = (int(x) for x in args.spec.split(","))
        spec = ArraySpec(m, n, s, t)
    except (ValueError, SpecError) as exc:
        print(f"bad --spec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    limits = SearchLimits(max_filled_cells=args.max_cells, time_budget=args.time_budget, node_budget=args.node_budget)
    try:
        if args.count:
            result = count_all(spec, limits)
            print(f"count {result.count}")
            print(f"nodes {result.nodes}")
            return EXIT_OK
        result = search_one(spec, limits)
    except Inconclusive as exc:
        print(f"inconclusive ({exc})")
        return EXIT_TIMEOUT
    if result.grid is None:
        print("none (exhaustive)")
    else:
        print("exists")
        print(render_rows(result.grid.to_rows()))
    print(f"nodes {result.nodes}")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    from . import providers

    if args.action == "list":
        for key in providers.catalog_list():
            print(key)
        return EXIT_OK
    if args.action == "gc":
        for key in providers.catalog_gc():
            print(f"removed {key}")
        return EXIT_OK
    if not args.file:
        print("catalog add needs a grid file", file=sys.stderr)
        return EXIT_USAGE
    try:
        doc_text = Path(args.file).read_text()
        grid, s, t = load_grid(doc_text)
    except (OSError, GridParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    key = args.key or grid.meta.get("provider_key") or _guess_key(grid, s, t)
    if key is None:
        print("cannot infer a catalog key; pass --key", file=sys.stderr)
        return EXIT_USAGE
    entry = providers.CatalogEntry(key, grid, s, t, "user-supplied")
    try:
        stored = providers.catalog_put(entry)
    except ArgumentError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    print(f"stored {stored.key}")
    return EXIT_OK


def _guess_key(grid: SignedGrid, s: int, t: int) -> str | None:
    from . import providers

    values = grid.values()
    if values and min(values) >= 0 and s == grid.n and t == grid.m:
        return providers.key_magic_rectangle(grid.m, grid.n)
    if s == grid.n and t == grid.m:
        return providers.key_tight_heffter(grid.m, grid.n)
    if grid.m == grid.n and s == t:
        return providers.key_square_heffter(grid.n, s)
    return None


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 64 instead of 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="signed-magic", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None, help="accepted for compatibility; all algorithms are deterministic")
    parser.add_argument("--jobs", type=int, default=1, help="worker count hint for searches")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    con = sub.add_parser("construct", help="build an array")
    fam = con.add_subparsers(dest="family", required=True, parser_class=_Parser)
    for name, params in (("tight", ("rows", "cols")), ("square", ("n", "t")), ("double", ("m", "t"))):
        p = fam.add_parser(name)
        for param in params:
            p.add_argument(f"--{param}", type=int, required=True)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", default=None)
        p.set_defaults(func=cmd_construct)

    ver = sub.add_parser("verify", help="check a grid file")
    ver.add_argument("file", help="grid file (JSON or text), '-' for stdin")
    ver.set_defaults(func=cmd_verify)

    dec = sub.add_parser("decide", help="existence verdict for (m, n, s, t)")
    for name in ("m", "n", "s", "t"):
        dec.add_argument(name, type=int)
    dec.set_defaults(func=cmd_decide)

    ora = sub.add_parser("oracle", help="exhaustive search for a spec")
    ora.add_argument("--spec", required=True, help="m,n,s,t")
    ora.add_argument("--max-cells", type=int, default=14)
    ora.add_argument("--time-budget", type=float, default=60.0)
    ora.add_argument("--node-budget", type=int, default=50_000_000)
    ora.add_argument("--count", action="store_true", help="count all solutions instead of finding one")
    ora.set_defaults(func=cmd_oracle)

    cat = sub.add_parser("catalog", help="manage the provider catalog")
    cat.add_argument("action", choices=("list", "add", "gc"))
    cat.add_argument("file", nargs="?")
    cat.add_argument("--key", default=None)
    cat.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedParameters as exc:
        print(f"unsupported parameters: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ProviderTimeout as exc:
        print(f"provider timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except ArgumentError as exc:
        print(f"unsupported parameters: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
