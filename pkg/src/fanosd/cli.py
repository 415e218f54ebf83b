"""Command-line front end: ``fanosd report|graph|tangent|verify|scan|points``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 matrix not on the scheme.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from . import __version__
from .exactalg import DEFAULT_PRIME, Field, field_from_name
from .invariants import (
    RECTANGULAR, SYMMETRIC, DomainError, Params, build_graph, component_proven, connected_components,
    dim_component, is_irreducible, is_nonempty, kappa, kappa_table, max_k, nonreduced_gap, s_max,
    smoothness_conjecture, tangent_formula_general, variety_dim,
)
from .oracle import classify_point, iter_fano_points, write_jsonl
from .spaces import LinMatrixSpace, default_middle_point, standard_compression
from .tangent import STRUCTURES, NotOnSchemeError, random_block_point, tangent_dim_blocks, tangent_dim_chart
from . import verify as suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_ON_SCHEME = 0, 1, 2, 3

CONFIG_KEYS = {"field", "prime", "seed", "max_n", "max_k"}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict:
    """key = value lines (comments with #); unknown keys are a usage error."""
    if not path:
        return {}
    text = Path(path).read_text()
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.read_string("[fanosd]\n" + text)
    out = {}
    for key, val in cp["fanosd"].items():
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        val = val.strip().strip('"').strip("'")
        out[key] = val if key == "field" else int(val)
    return out


def _field(args) -> Field:
    if getattr(args, "field", None):
        return field_from_name(args.field)
    cfg = args.config_values
    if "field" in cfg:
        return field_from_name(cfg["field"])
    return Field(cfg.get("prime", DEFAULT_PRIME))


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return args.config_values.get("seed", 0)


def _params(args, k=None) -> Params:
    return Params.make(args.variant, args.n, args.r, args.k if k is None else k, m=args.m)


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(text)


# -- report ----------------------------------------------------------------

def build_report(params: Params) -> dict:
    rep: dict = {"tool": "fanosd", "version": __version__, "params": params.as_dict()}
    k = params.k
    rep["s_max"] = s_max(params)
    rep["kappa"] = kappa_table(params)
    rep["empty"] = not is_nonempty(params)
    rep["max_k"] = max_k(params)
    graph = build_graph(params)
    parts = connected_components(graph)
    rep["graph"] = {
        "vertices": [{"s": s, "kappa": lab} for s, lab in graph.vertices],
        "edges": [{"s": a, "t": b, "label": lab} for (a, b), lab in graph.edges],
        "components": parts,
        "connected": len(parts) == 1,
    }
    if params.tag == SYMMETRIC:
        rep["variety_dim"] = variety_dim(params)
        if not rep["empty"]:
            rep["irreducible"] = is_irreducible(params)
        # the per-s formulas describe families of planes; at k = 0 the scheme is X itself
        loci = []
        for s in range(s_max(params) + 1):
            if k == 0 or k > kappa(params, s):
                continue
            loci.append({
                "s": s,
                "dim": dim_component(params, s),
                "tangent_general": tangent_formula_general(params, s),
                "nonreduced_gap": nonreduced_gap(params, s),
                "component_proven": component_proven(params, s),
            })
        if k >= 1:
            rep["loci"] = loci
        rep["smoothness"] = {"predicted_smooth": smoothness_conjecture(params), "status": "conjecture"}
    rep["seed"] = None
    return rep


def report_text(rep: dict) -> str:
    p = rep["params"]
    lines = ["params: " + " ".join(f"{key}={val}" for key, val in p.items())]
    lines.append("kappa: " + " ".join(f"{s}:{v}" for s, v in enumerate(rep["kappa"])))
    if rep["empty"]:
        lines.append(f"scheme empty (k > {rep['max_k']})")
        return "\n".join(lines)
    comps = rep["graph"]["components"]
    lines.append(f"components: {len(comps)}  " + " ".join("{" + ",".join(map(str, c)) + "}" for c in comps))
    if "irreducible" in rep:
        lines.append(f"irreducible: {'yes' if rep['irreducible'] else 'no'}")
    if "variety_dim" in rep:
        lines.append(f"variety dim: {rep['variety_dim']}")
    for loc in rep.get("loci", []):
        note = "component" if loc["component_proven"] else "component status not established"
        lines.append(
            f"  s={loc['s']}: dim {loc['dim']}, general tangent {loc['tangent_general']}, "
            f"gap {loc['nonreduced_gap']} ({note})"
        )
    if "smoothness" in rep:
        verdict = "smooth" if rep["smoothness"]["predicted_smooth"] else "not predicted smooth"
        lines.append(f"smoothness (conjecture, unproven): {verdict}")
    return "\n".join(lines)


def cmd_report(args) -> int:
    rep = build_report(_params(args))
    _emit(rep, args.json, report_text(rep))
    return EXIT_OK


def cmd_graph(args) -> int:
    params = _params(args)
    graph = build_graph(params)
    if args.json:
        rep = build_report(params)
        print(json.dumps(rep["graph"], indent=2))
    else:
        sys.stdout.write(graph.to_dot())
    return EXIT_OK


# -- tangent ---------------------------------------------------------------

def _tangent_point(args, field):
    """(Q, params, s or None, seed or None) from the point specification."""
    seed = None
    if args.file:
        obj = json.loads(Path(args.file).read_text())
        Q = LinMatrixSpace.from_json_obj(obj, field if args.field else None)
        if args.r is None:
            raise UsageError("--file needs -r")
        k = Q.nvars - 1 if args.k is None else args.k
        return Q, Params.make(SYMMETRIC, Q.rows, args.r, k), args.s, seed
    if args.n is None:
        raise UsageError("-n is required unless --file is given")
    point = args.point
    if point == "middle":
        r = args.n if args.r is None else args.r
        if r != args.n:
            raise UsageError("the middle point needs r = n")
        k = 1 if args.k is None else args.k
        Q = default_middle_point(args.n, k, field)
        return Q, Params.make(SYMMETRIC, args.n, r, k), (args.n - 1) // 2, seed
    if args.r is None or args.s is None:
        raise UsageError(f"--point {point} needs -r and -s")
    base = Params.make(SYMMETRIC, args.n, args.r, 0)
    if point == "standard":
        k = kappa(base, args.s)
        if args.k is not None and args.k != k:
            raise UsageError(f"the full standard compression space has k = {k}")
        return standard_compression(base, args.s, field), base.with_k(k), args.s, seed
    k = 1 if args.k is None else args.k
    seed = _seed(args)
    structure = "general" if point == "random-general" else args.structure
    Q = random_block_point(base.with_k(k), args.s, seed, field, structure)
    return Q, base.with_k(k), args.s, seed


def cmd_tangent(args) -> int:
    field = _field(args)
    Q, params, s, seed = _tangent_point(args, field)
    reports = []
    if args.method in ("chart", "both"):
        reports.append(tangent_dim_chart(Q, params, seed))
    if args.method in ("blocks", "both"):
        if s is None:
            raise UsageError("the block method needs -s")
        try:
            reports.append(tangent_dim_blocks(Q, params, s, seed))
        except NotOnSchemeError:
            raise
        except DomainError as exc:
            if args.method == "blocks":
                raise
            reports.append({"method": "blocks", "error": str(exc)})
    out = [r if isinstance(r, dict) else r.to_dict() for r in reports]
    if args.json:
        print(json.dumps({"point": Q.to_json_obj(), "reports": out}, indent=2))
        return EXIT_OK
    lines = [Q.pretty(), "params: " + " ".join(f"{a}={b}" for a, b in params.as_dict().items())]
    if seed is not None:
        lines.append(f"seed: {seed}")
    header = f"{'':24}" + "".join(f"{r['method']:>12}" for r in out)
    lines.append(header)
    for key in ("tangent_dim", "rank", "lift_unknowns", "constraint_rows", "ambient_grassmannian_dim"):
        lines.append(f"{key:24}" + "".join(f"{str(r.get(key, '-')):>12}" for r in out))
    for r in out:
        if "error" in r:
            lines.append(f"{r['method']}: {r['error']}")
    print("\n".join(lines))
    return EXIT_OK


# -- verify / scan / points -------------------------------------------------

def cmd_verify(args) -> int:
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    kwargs = {}
    max_n = args.max_n if args.max_n is not None else args.config_values.get("max_n")
    if args.suite in ("graph-equivalence", "borel", "tangent-cross") and max_n is not None:
        kwargs["max_n"] = max_n
    if args.suite in ("jensen", "tangent-cross"):
        kwargs["seed"] = _seed(args)
    result = suites.SUITES[args.suite](**kwargs)
    text = f"{result['suite']}: {'pass' if result['passed'] else 'FAIL'} ({result['cases']} cases)"
    if result.get("caveat"):
        text += f"\nnote: {result['caveat']}"
    for f in result["failures"]:
        text += f"\n  failure: {f}"
    _emit(result, args.json, text)
    return EXIT_OK if result["passed"] else EXIT_FAIL


def cmd_scan(args) -> int:
    """One JSON report per line over a parameter grid."""
    count = 0
    for n in range(args.min_n, args.max_n + 1):
        ms = range(2, n + 1) if args.variant in ("rect", RECTANGULAR) else [None]
        for m in ms:
            for r in range(2, n + 1):
                try:
                    base = Params.make(args.variant, n, r, 0, m=m)
                except DomainError:
                    continue
                top = max_k(base) if args.max_k is None else min(args.max_k, max_k(base))
                for k in range(args.min_k, top + 1):
                    print(json.dumps(build_report(base.with_k(k))))
                    count += 1
    print(f"{count} reports", file=sys.stderr)
    return EXIT_OK


def cmd_points(args) -> int:
    params = _params(args)
    points = iter_fano_points(params, args.q)
    if args.classify:
        def tagged(source):
            for sp in source:
                sp.meta["classification"] = classify_point(sp, params, args.q).as_dict()
                yield sp
        points = tagged(points)
    count = write_jsonl(points, sys.stdout)
    print(f"{count} points over GF({args.q})", file=sys.stderr)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _add_params(p, need_k=True):
    p.add_argument("--variant", default="sym", help="sym | alt | rect")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, default=None, help="rows (rectangular only)")
    p.add_argument("-r", type=int, required=True, help="rank bound: matrices of rank < r")
    p.add_argument("-k", type=int, default=0 if not need_k else None, required=need_k)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fanosd", description="Fano schemes of symmetric/alternating/rectangular determinantal loci")
    ap.add_argument("--version", action="version", version=f"fanosd {__version__}")
    ap.add_argument("--config", help="key = value file (field, prime, seed, max_n, max_k)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="closed-form invariants for one parameter set")
    _add_params(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("graph", help="Graphviz DOT of the labeled graph")
    _add_params(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("tangent", help="tangent space dimension at a point")
    p.add_argument("--point", choices=("middle", "standard", "random-general", "random"), default="random-general")
    p.add_argument("--file", help="matrix space JSON")
    p.add_argument("-n", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-s", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--structure", choices=STRUCTURES, default="general", help="block pattern for --point random")
    p.add_argument("--method", choices=("chart", "blocks", "both"), default="both")
    p.add_argument("--field", help="QQ or GF(p)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tangent)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite")
    p.add_argument("--max-n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="JSON-lines reports over a parameter grid")
    p.add_argument("--variant", default="sym")
    p.add_argument("--min-n", type=int, default=3)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--min-k", type=int, default=0)
    p.add_argument("--max-k", type=int)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("points", help="JSON-lines of GF(q)-rational points of a small Fano scheme")
    _add_params(p)
    p.add_argument("-q", type=int, default=3)
    p.add_argument("--classify", action="store_true")
    p.set_defaults(func=cmd_points)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.config_values = load_config(args.config)
        return args.func(args)
    except NotOnSchemeError as exc:
        print(f"error: not on the Fano scheme: {exc}", file=sys.stderr)
        return EXIT_NOT_ON_SCHEME
    except (UsageError, DomainError, ValueError, OSError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
