"""Command-line front end.

Subcommands: verify, capacity, levelset, sweep, deform.  Output is JSON
(sorted keys, stable with a fixed seed) or CSV; passing --out writes the
delimited report to that path and renders an SVG figure next to it.
--format svg writes the figure alone.

A JSON config file named by the CAPMARKOV_CONFIG environment variable can
preset defaults (seed, level, tolerances, ...); explicit flags win.

Exit codes: 0 all checks passed, 1 a verdict failed or a numerical stage
gave up, 2 bad usage or unparseable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import deform as deformmod
from . import markov, plots


class HypothesisError(RuntimeError):
    """The input was well formed but fails a theorem's hypotheses (for
    instance a disconnected lemniscate for the single-component route)."""
from .capacity import DEFAULT_SEED, DN_LADDER, capacity as compute_capacity, dn_select
from .levelset import BoundaryExtractionError, extract_components, is_connected
from .poly import Poly, RootFindingError, parse_poly
from .sets import parse_set, sample_boundary

_CONFIG_KEYS = {
    "seed", "level", "m", "n", "candidates", "trials", "degrees", "format",
    "theorem", "policy", "grid", "tol_verify", "tol_subh", "tol_topology",
    "test_radius", "angles",
}


def _load_config() -> dict:
    path = os.environ.get("CAPMARKOV_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"warning: ignoring config {path}: {exc}", file=sys.stderr)
        return {}
    if not isinstance(cfg, dict):
        print(f"warning: ignoring config {path}: not a JSON object", file=sys.stderr)
        return {}
    for key in sorted(set(cfg) - _CONFIG_KEYS):
        print(f"warning: unknown config key {key!r}", file=sys.stderr)
    return {k: v for k, v in cfg.items() if k in _CONFIG_KEYS}


def _add_output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", help="write the report here (figure lands beside it)")
    sp.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capmarkov",
        description="Numerical checks of the sharp capacitary derivative "
                    "bound for polynomials on plane continua.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check one inequality instance")
    p.add_argument("--poly", required=True,
                   help="ascending coefficients, e.g. '-1,0,1' for z^2-1")
    p.add_argument("--set", dest="set_spec",
                   help="segment:a,b | disc:c,r | polyline:z1;z2;... | cloud:...")
    p.add_argument("--theorem", choices=("1", "2", "A", "corollary"), default="1")
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--m", type=int, help="phase count for lemniscate boundaries")
    p.add_argument("--n", type=int, default=4096, help="boundary samples for sup norms")
    p.add_argument("--candidates", type=int, default=2048)
    p.add_argument("--tol-verify", type=float, dest="tol_verify")
    _add_output_flags(p)

    p = sub.add_parser("capacity", help="logarithmic capacity of a set")
    p.add_argument("--set", dest="set_spec", required=True)
    p.add_argument("--poly", help="with --level: use this polynomial's lemniscate")
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--n", type=int, help="largest point count in the ladder")
    p.add_argument("--candidates", type=int, default=2048)
    p.add_argument("--method", choices=("auto", "oracle", "dn"), default="auto")
    _add_output_flags(p)

    p = sub.add_parser("levelset", help="extract lemniscate components")
    p.add_argument("--poly", required=True)
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--m", type=int)
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="random soundness sweep")
    p.add_argument("--degrees", default="2,3,4,5,6",
                   help="comma-separated degrees")
    p.add_argument("--trials", type=int, default=100, help="polynomials per degree")
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--m", type=int)
    _add_output_flags(p)

    p = sub.add_parser("deform", help="scan F(lambda) for f + lambda and test "
                                      "the sub-mean-value property")
    p.add_argument("--poly", required=True)
    p.add_argument("--grid", default="0,0,0.5,21", help="cx,cy,r,res")
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--m", type=int)
    p.add_argument("--policy", choices=("oracle", "dn"), default="oracle")
    p.add_argument("--tol-subh", type=float, dest="tol_subh",
                   default=deformmod.TOL_SUBH)
    p.add_argument("--tol-topology", type=float, dest="tol_topology")
    p.add_argument("--test-radius", type=float, dest="test_radius")
    p.add_argument("--angles", type=int, default=16)
    _add_output_flags(p)

    return parser


def _parse_grid(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"grid must be cx,cy,r,res, got {text!r}")
    cx, cy, r = (float(p) for p in parts[:3])
    res = int(parts[3])
    return complex(cx, cy), r, res


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, payload: dict, header, rows, figure) -> None:
    if args.format == "svg":
        if not args.out:
            raise ValueError("--format svg requires --out")
        if figure is None:
            raise ValueError("this command has no figure output")
        figure(args.out)
        return
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _csv_text(header, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if figure is not None:
            figure(os.path.splitext(args.out)[0] + ".svg")
    else:
        sys.stdout.write(text)


def _point_rows(comps):
    for comp in comps:
        for bi, branch in enumerate(comp.boundary):
            for k, z in enumerate(branch):
                yield (comp.label, bi, k,
                       format(z.real, ".17g"), format(z.imag, ".17g"))


def _cmd_verify(args) -> int:
    f = parse_poly(args.poly)
    tol = args.tol_verify
    if args.theorem in ("2", "A"):
        if args.set_spec:
            raise ValueError(f"theorem {args.theorem} runs on the polynomial's "
                             "own lemniscate; drop --set")
        kwargs = {} if tol is None else {"tol": tol}
        try:
            if args.theorem == "2":
                rep = markov.verify_theorem2(f, level=args.level, m=args.m, **kwargs)
            else:
                rep = markov.verify_theoremA(f, m=args.m, **kwargs)
        except ValueError as exc:
            raise HypothesisError(str(exc)) from exc

        def figure(path):
            comps = extract_components(f, level=args.level if args.theorem == "2" else 1.0,
                                       m=args.m)
            plots.plot_components(comps, path, title=rep.set_description)
    else:
        if not args.set_spec:
            raise ValueError(f"theorem {args.theorem} needs --set")
        s = parse_set(args.set_spec)
        if args.theorem == "1":
            rep = markov.verify_theorem1(
                f, s, n_boundary=args.n, candidates=args.candidates,
                seed=args.seed, tol=tol)
        else:
            kwargs = {} if tol is None else {"tol": tol}
            rep = markov.verify_corollary(f, s, n_boundary=args.n, **kwargs)

        def figure(path):
            pts = sample_boundary(s, min(args.n, 2048))
            plots.plot_capacity_points(pts, None, path, title=rep.set_description)

    payload = {"command": "verify", "poly": args.poly, "report": rep.to_dict()}
    _emit(args, payload, markov.MarkovReport.CSV_HEADER, [rep.to_csv_row()], figure)
    return 0 if rep.passed else 1


def _cmd_capacity(args) -> int:
    if args.poly:
        f = parse_poly(args.poly)
        comps = extract_components(f, level=args.level)
        if len(comps) != 1:
            raise ValueError("lemniscate is disconnected; pick a component "
                             "via the library API")
        s = comps[0]
        desc = f"lemniscate |{args.poly}| <= {args.level:g}"
    else:
        s = parse_set(args.set_spec)
        desc = s.describe()
    if args.n:
        ladder = tuple(sorted({r for r in DN_LADDER if r < args.n} | {args.n}))
    else:
        ladder = DN_LADDER
    est = compute_capacity(s, candidates=args.candidates, ladder=ladder,
                          seed=args.seed, method=args.method)
    payload = {"command": "capacity", "set": desc, "candidates": args.candidates,
               "seed": args.seed, "estimate": est.to_dict()}
    rows = [(desc, est.method, k, format(v, ".17g")) for k, v in est.history]
    rows.append((desc, est.method, est.n, format(est.value, ".17g")))

    def figure(path):
        if hasattr(s, "boundary_samples"):
            cand = s.boundary_samples(min_points=max(args.candidates // 4, 512))
        else:
            cand = sample_boundary(s, args.candidates)
        n_pts = min(est.n or ladder[-1], len(np.unique(cand)))
        _, chosen = dn_select(cand, n_pts, seed=args.seed)
        plots.plot_capacity_points(cand, chosen, path, title=desc)

    _emit(args, payload, ("set", "method", "n", "d_n"), rows, figure)
    return 0


def _cmd_levelset(args) -> int:
    f = parse_poly(args.poly)
    conn = is_connected(f, args.level)
    comps = extract_components(f, level=args.level, m=args.m)
    payload = {
        "command": "levelset",
        "poly": args.poly,
        "level": args.level,
        "connected": conn.connected,
        "boundary_touching": conn.boundary_touching,
        "n_components": len(comps),
        "components": [c.to_dict() for c in comps],
    }

    def figure(path):
        plots.plot_components(comps, path,
                              title=f"|f| = {args.level:g}, {len(comps)} component(s)")

    _emit(args, payload, ("component", "branch", "index", "re", "im"),
          list(_point_rows(comps)), figure)
    return 0


def _cmd_sweep(args) -> int:
    degrees = tuple(int(d) for d in args.degrees.split(","))
    if not degrees or any(d < 1 for d in degrees):
        raise ValueError(f"bad degree list {args.degrees!r}")
    result = markov.sweep_random(degrees=degrees, per_degree=args.trials,
                                 seed=args.seed, level=args.level, m=args.m)
    payload = {"command": "sweep", "result": result.to_dict()}
    header = ("degree", "coeffs", "component", "n_components", "quotient",
              "capacity_method", "tolerance", "pass")
    rows = [(c.degree, ";".join(str(x) for x in c.coeffs), c.component,
             c.n_components, format(c.quotient, ".17g"), c.capacity_method,
             c.tolerance, str(c.passed).lower()) for c in result.cases]
    _emit(args, payload, header, rows, lambda path: plots.plot_sweep(result, path))
    return 0 if not result.failures else 1


def _cmd_deform(args) -> int:
    f = parse_poly(args.poly)
    center, radius, res = _parse_grid(args.grid)
    grid = deformmod.scan(f, center=center, radius=radius, res=res,
                          level=args.level, capacity_policy=args.policy,
                          tol_topology=args.tol_topology, m=args.m,
                          seed=args.seed)
    rep = deformmod.subharmonicity_test(grid, test_radius=args.test_radius,
                                        n_angles=args.angles,
                                        tol_subh=args.tol_subh)
    payload = {"command": "deform", "poly": args.poly,
               "grid": grid.to_dict(), "subharmonicity": rep.to_dict()}
    rows = [(format(re, ".17g"), format(im, ".17g"),
             "" if Fv is None else format(Fv, ".17g"), str(ok).lower())
            for re, im, Fv, ok in grid.to_rows()]
    _emit(args, payload, ("re", "im", "F", "valid"), rows,
          lambda path: plots.plot_deformation(grid, path, rep))
    return 0 if rep.passed else 1


_DISPATCH = {
    "verify": _cmd_verify,
    "capacity": _cmd_capacity,
    "levelset": _cmd_levelset,
    "sweep": _cmd_sweep,
    "deform": _cmd_deform,
}


# flags whose values may start with '-' (e.g. --poly -1,0,1); argparse only
# accepts those in --flag=value form, so fuse the pairs up front
_VALUE_FLAGS = ("--poly", "--set", "--grid", "--degrees")


def _fuse_value_flags(argv):
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = _fuse_value_flags(list(argv))
    parser = build_parser()
    config = _load_config()
    if config:
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                known = {a.dest for a in sp._actions}
                sp.set_defaults(**{k: v for k, v in config.items() if k in known})
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HypothesisError, BoundaryExtractionError, RootFindingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
