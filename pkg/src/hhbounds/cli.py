"""Command-line interface: ``hhbounds verify | bound | converge | manifest``.

Exit codes: 0 when every checked inequality holds, 1 on a violation, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

from . import catalog, harness
from .catalog import CatalogError
from .geometry import GeometryError
from .quadrature import DEFAULT_BUDGET, QuadratureError
from .shapes import Annulus, Dicone, ShapeError, shape_from_dict
from .simplex_bounds import AverageCache, BoundError, expression_to_dict
from .testfuncs import field_from_spec, spec_is_seeded, squared_norm

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
CSV_COLUMNS = ("entry_id", "paper_anchor", "shape", "function_kind", "seed",
               "lhs", "rhs", "gap", "slack", "holds")
CONVERGE_COLUMNS = ("quantity", "n", "discrete", "limit", "difference")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def _load_json(value: str, what: str):
    if os.path.exists(value):
        with open(value) as fh:
            text = fh.read()
    else:
        text = value
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: neither a readable file nor valid JSON ({exc})") from None


def parse_shape(value: str):
    """A JSON file, inline JSON, or the name of a canonical shape."""
    canon = harness.canonical_shapes()
    if value in canon and not os.path.exists(value):
        return value, canon[value]
    spec = _load_json(value, "--shape")
    try:
        shape = shape_from_dict(spec)
    except (ShapeError, GeometryError, ValueError) as exc:
        raise InputError(f"--shape: {exc}") from None
    return shape.kind, shape


def parse_seeds(value: str) -> list[int]:
    """``N`` for seeds 0..N-1, or a comma-separated list."""
    value = value.strip()
    try:
        if "," in value:
            seeds = [int(s) for s in value.split(",") if s.strip()]
        else:
            seeds = list(range(int(value))) if value else []
    except ValueError:
        raise InputError(f"--seeds: expected a count or a comma-separated list, got {value!r}") from None
    if not seeds:
        raise InputError("--seeds: at least one seed is required")
    if any(s < 0 for s in seeds):
        raise InputError("--seeds: seeds must be nonnegative")
    return sorted(set(seeds))


def parse_tol(value: str):
    """A positive float or per-dimension ``dim:tol`` pairs, e.g. ``1:1e-9,2:1e-8,3:1e-5``."""
    try:
        if ":" in value:
            tol = {}
            for part in value.split(","):
                k, v = part.split(":")
                tol[int(k)] = float(v)
            vals = list(tol.values())
        else:
            tol = float(value)
            vals = [tol]
    except ValueError:
        raise InputError(f"--tol: cannot parse {value!r}") from None
    if not all(v > 0 and math.isfinite(v) for v in vals):
        raise InputError("--tol: tolerances must be positive")
    if isinstance(tol, dict):
        tol.setdefault(0, 1.0)
    return tol


def _entries(value: Optional[str]):
    if not value:
        return None
    try:
        return [catalog.get(e.strip()) for e in value.split(",") if e.strip()]
    except CatalogError as exc:
        raise InputError(str(exc)) from None


def _field_maker(spec, dim: int):
    """``seed -> field`` and whether the field depends on the seed."""
    try:
        seeded = spec_is_seeded(spec)
        probe = field_from_spec(spec, 0)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"--function: {exc}") from None
    if probe.dim != dim:
        raise InputError(f"--function: field on R^{probe.dim} but shape lives in R^{dim}")
    if seeded:
        return (lambda seed: field_from_spec(spec, seed)), True
    return (lambda seed: probe), False


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(rows: list[dict], columns, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])
        return buf.getvalue()
    clean = [{k: _jsonable(v) for k, v in r.items()} for r in rows]
    return json.dumps(clean, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _row_dict(r: harness.CheckRow) -> dict:
    d = r.as_dict()
    d["slack"] = float(d["slack"])
    return d


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    name, shape = parse_shape(args.shape)
    seeds = parse_seeds(args.seeds)
    tol = parse_tol(args.tol)
    entries = _entries(args.entry)
    field = None
    if args.function:
        spec = _load_json(args.function, "--function")
        make, seeded = _field_maker(spec, shape.body.ambient)
        if not seeded:
            seeds = [spec.get("seed")]
        field = make
    res = harness.verify_shape(shape, seeds, shape_name=name, entries=entries, field=field,
                               tol=tol, budget=args.budget, accept_best=True)
    if not res.rows:
        raise InputError(f"no catalog entry applies to shape {shape.kind}")
    _emit(render([_row_dict(r) for r in res.rows], CSV_COLUMNS, args.format), args.out)
    if res.over_budget:
        print(f"warning: {res.over_budget} averages stopped at the evaluation budget; "
              "their error estimates widen the slack", file=sys.stderr)
    for r in res.violations:
        print(f"violation: entry {r.entry_id} seed {_fmt(r.seed) or '-'} gap {r.gap!r} "
              f"slack {float(r.slack)!r}", file=sys.stderr)
    return EXIT_VIOLATION if res.violations else EXIT_OK


def cmd_bound(args) -> int:
    if not args.entry or "," in args.entry:
        raise InputError("bound needs exactly one --entry")
    entry = _entries(args.entry)[0]
    name, shape = parse_shape(args.shape)
    if entry.applies(shape) is None:
        raise InputError(f"entry {entry.id} does not apply to shape {shape.kind}")
    if args.function:
        spec = _load_json(args.function, "--function")
        make, seeded = _field_maker(spec, shape.body.ambient)
        seed = parse_seeds(args.seeds)[0] if seeded else spec.get("seed")
    else:
        make, seed = (lambda s: squared_norm(shape.body.ambient)), None
    f = make(seed)
    cache = AverageCache(accept_best=True)
    row = harness.run_entry(entry, shape, f, shape_name=name, seed=seed, tol=parse_tol(args.tol),
                            budget=args.budget, cache=cache)
    if cache.over_budget:
        print(f"warning: {cache.over_budget} averages stopped at the evaluation budget; "
              "their error estimates widen the slack", file=sys.stderr)
    if args.format == "csv":
        _emit(render([_row_dict(row)], CSV_COLUMNS, "csv"), args.out)
    else:
        out = _row_dict(row)
        if args.expressions:
            out["expressions"] = [expression_to_dict(b) for b in entry.generate(entry.applies(shape))]
        _emit(json.dumps({k: _jsonable(v) for k, v in out.items()}, indent=2, sort_keys=True) + "\n",
              args.out)
    return EXIT_OK if row.holds else EXIT_VIOLATION


def cmd_converge(args) -> int:
    _, shape = parse_shape(args.shape)
    if not isinstance(shape, (Annulus, Dicone)):
        raise InputError(f"converge needs an annulus or dicone shape, got {shape.kind}")
    try:
        ns = [int(n) for n in args.n.split(",") if n.strip()]
    except ValueError:
        raise InputError(f"--n: cannot parse {args.n!r}") from None
    if not ns:
        raise InputError("--n: at least one mesh size is required")
    d = shape.body.ambient
    if args.function:
        make, seeded = _field_maker(_load_json(args.function, "--function"), d)
        f = make(parse_seeds(args.seeds)[0] if seeded else None)
    else:
        f = squared_norm(d)
    tol = parse_tol(args.tol)
    rows = []
    try:
        if isinstance(shape, Annulus):
            for r in harness.converge_annulus(shape, f, ns, tol, args.budget):
                rows.append({"quantity": "mesh_barycenter_lower", **vars_of(r)})
        else:
            for r in harness.converge_dicone(shape, f, ns, tol, args.budget):
                rows.append({"quantity": "apex_umbrella_upper", **vars_of(r)})
            for r in harness.dicone_volume_ratios(shape, ns):
                rows.append({"quantity": "volume_ratio", **vars_of(r)})
    except ShapeError as exc:
        raise InputError(str(exc)) from None
    _emit(render(rows, CONVERGE_COLUMNS, args.format), args.out)
    return EXIT_OK


def vars_of(r) -> dict:
    return {"n": r.n, "discrete": r.discrete, "limit": r.limit, "difference": r.difference}


def cmd_manifest(args) -> int:
    rows = catalog.manifest()
    if args.format == "csv":
        cols = ("id", "anchor", "family", "shape", "hypothesis", "tight_for_affine", "reducer")
        _emit(render(rows, cols, "csv"), args.out)
    else:
        _emit(json.dumps(rows, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hhbounds", description="Verify Hermite-Hadamard type bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, shape_required=True):
        sp.add_argument("--shape", required=shape_required,
                        help="shape JSON file, inline JSON, or canonical shape name")
        sp.add_argument("--function", help="function spec JSON file or inline JSON")
        sp.add_argument("--entry", help="catalog entry id (comma-separated for verify)")
        sp.add_argument("--seeds", default="1", help="seed count N (0..N-1) or comma-separated list")
        sp.add_argument("--tol", default="1e-8", help="tolerance, or dim:tol pairs")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="evaluations per average")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the report to this file")

    common(sub.add_parser("verify", help="run catalog entries against seeded functions"))
    b = sub.add_parser("bound", help="evaluate one entry")
    common(b)
    b.add_argument("--expressions", action="store_true", help="include the generated expressions")
    c = sub.add_parser("converge", help="discrete-to-continuous convergence table")
    common(c)
    c.add_argument("--n", default=",".join(map(str, harness.CONVERGE_NS)), help="mesh sizes")
    m = sub.add_parser("manifest", help="list catalog entries")
    m.add_argument("--format", choices=("json", "csv"), default="json")
    m.add_argument("--out")
    return p


COMMANDS = {"verify": cmd_verify, "bound": cmd_bound, "converge": cmd_converge, "manifest": cmd_manifest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "budget", 1) is not None and getattr(args, "budget", 1) < 1:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except (InputError, CatalogError, ShapeError, BoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QuadratureError as exc:
        print(f"error: quadrature failed: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
