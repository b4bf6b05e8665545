"""Command line interface.

Subcommands
-----------
solve     solve one form space on an algebra from a file or the catalog
verify    run a claim sweep (tables | grs | holonomy | identities | all)
catalog   list the built-in families

Exit codes: 0 on success, 1 when a verified claim fails, 2 on input
errors.  All floats are printed with 17 significant digits in both the
text and JSON renderings, which carry identical numeric content.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from .catalog import FAMILY_IDS, build_family, catalog_rows
from .cky import KINDS, cky_residual, extract_associated_vector, solve_form_space
from .connection import levi_civita
from .forms import form_to_dict
from .liealg import ToleranceConfig, algebra_from_dict
from .verify import RunReport, run_verify


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _render_json(value, indent: int = 0) -> str:
    """JSON text with every float at 17 significant digits."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_render_json(v, indent + 1)}'
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}  {_render_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt(value)
    if value is None:
        return "null"
    return json.dumps(str(value))


def _render_text(value, indent: int = 0, out=None) -> list:
    """Flat text rendering of the same payload, one path per line."""
    lines = out if out is not None else []
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list, tuple)):
                lines.append(f"{pad}{k}:")
                _render_text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            if isinstance(v, (dict, list, tuple)):
                lines.append(f"{pad}[{i}]")
                _render_text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(f"{pad}{_scalar_text(value)}")
    return lines


def _scalar_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt(v)
    if v is None:
        return "null"
    return str(v)


def _emit(report: dict, fmt: str):
    if fmt == "json":
        print(_render_json(report))
    else:
        print("\n".join(_render_text(report)))


def _parse_params(text: str) -> dict:
    params = {}
    if not text:
        return params
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ValueError(f"parameter {chunk!r} is not of the form name=value")
        key, _, raw = chunk.partition("=")
        raw = raw.strip()
        try:
            val = int(raw)
        except ValueError:
            try:
                val = float(raw)
            except ValueError:
                try:
                    val = Fraction(raw)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ValueError(f"cannot parse parameter value {raw!r}") from exc
        params[key.strip()] = val
    return params


def _tolerances(args) -> ToleranceConfig:
    tol = ToleranceConfig.from_env()
    if getattr(args, "tol", None) is not None:
        tol = tol.replace(residual=args.tol)
    return tol


def _cmd_solve(args) -> int:
    t0 = time.perf_counter()
    tol = _tolerances(args)
    inputs = {"degree": args.degree, "kind": args.kind,
              "tol_residual": tol.residual}
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        algebra = algebra_from_dict(data, tol=tol)
        inputs["input"] = args.input
        reference = None
    else:
        inst = build_family(args.family, _parse_params(args.params or ""), tol=tol)
        algebra = inst.algebra
        inputs["family"] = inst.family_id
        inputs["params"] = {k: float(v) for k, v in inst.params.items()}
        reference = inst.reference_form

    conn = levi_civita(algebra)
    space = solve_form_space(algebra, args.degree, args.kind, conn=conn)
    forms = space.forms()
    basis = []
    for form in forms:
        entry = form_to_dict(form)
        entry["residual"] = cky_residual(algebra, form, space.kind, conn=conn)
        basis.append(entry)
    results = {"dimension": space.dimension, "system_rank": space.system_rank,
               "sv_gap": float(space.sv_gap) if np.isfinite(space.sv_gap) else None,
               "basis": basis}
    if args.degree == 2 and space.kind == "cky" and space.dimension > 0:
        cls = extract_associated_vector(algebra, forms[0], conn=conn)
        results["classification"] = {
            "is_strict": cls.is_strict, "closed": cls.closed,
            "coclosed": cls.coclosed, "parallel": cls.parallel,
            "xi_in_center": cls.xi_in_center,
            "xi_perp_center": cls.xi_perp_center,
            "xi_norm": cls.xi_norm, "xi": [float(v) for v in cls.xi]}
    if reference is not None and space.dimension > 0:
        results["reference_match_residual"] = space.match_residual(reference)
    report = RunReport(command="solve", inputs=inputs, results=[results],
                       status="pass",
                       wall_time_ms=(time.perf_counter() - t0) * 1e3)
    _emit(report.as_dict(), args.format)
    return 0


def _cmd_verify(args) -> int:
    tol = _tolerances(args)
    report = run_verify(args.target, tol=tol, seed=args.seed)
    _emit(report.as_dict(), args.format)
    return 0 if report.status == "pass" else 1


def _cmd_catalog(args) -> int:
    if args.action != "list":
        raise ValueError(f"unknown catalog action {args.action!r}")
    rows = catalog_rows()
    if args.format == "json":
        payload = [{"family": fam, "parameters": names, "constraints": cons,
                    "description": desc} for fam, names, cons, desc in rows]
        print(_render_json(payload))
    else:
        widths = [max(len(str(row[i])) for row in rows) for i in range(3)]
        for fam, names, cons, desc in rows:
            print(f"{fam:<{widths[0]}}  params: {names:<{widths[1]}}  "
                  f"constraints: {cons:<{widths[2]}}  {desc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ckylab",
        description="solve and verify conformal Killing-Yano form spaces "
                    "on metric Lie algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one form space")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="JSON file with the algebra")
    src.add_argument("--family", choices=FAMILY_IDS, help="catalog family id")
    sp.add_argument("--params", help="comma separated name=value parameters")
    sp.add_argument("--degree", type=int, default=2, help="form degree p")
    sp.add_argument("--kind", default="cky",
                    choices=KINDS + ("star_ky",), help="which space to solve")
    sp.add_argument("--tol", type=float, help="residual tolerance override")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=_cmd_solve)

    vp = sub.add_parser("verify", help="run a claim verification sweep")
    vp.add_argument("target",
                    choices=("tables", "grs", "holonomy", "identities", "all"))
    vp.add_argument("--seed", type=int, default=0,
                    help="seed for the randomized negative-family draws")
    vp.add_argument("--tol", type=float, help="residual tolerance override")
    vp.add_argument("--format", choices=("text", "json"), default="text")
    vp.set_defaults(func=_cmd_verify)

    cp = sub.add_parser("catalog", help="inspect the family catalog")
    cp.add_argument("action", choices=("list",))
    cp.add_argument("--format", choices=("text", "json"), default="text")
    cp.set_defaults(func=_cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
