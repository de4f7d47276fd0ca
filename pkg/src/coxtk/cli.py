"""Command-line front end.

Every subcommand prints (or writes) a schema-versioned JSON document.
Failures exit with 2 (invalid input), 3 (computation or check failure) or
4 (I/O) and print a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .connection import (
    AsymptoticData,
    StokesConsistencyError,
    character_crosscheck,
    m_from_k,
    stokes_numbers,
    stokes_sectors,
)
from .coxplane import fundamental_domain, masses, plane_general, plane_type_a
from .liealg import InvalidTypeError, build_root_system, coxeter_element, coxeter_orbits
from .polytope import (
    WPlaneMismatch,
    compare_w_plane,
    project_weights,
    segments,
    soliton_graph,
    sym_weights,
    w_plane,
    wedge_weights,
)
from .serialize import (
    coxplane_record,
    emit_json,
    dumps,
    rootsys_record,
    solitons_record,
    stokes_record,
    toda_record,
    wplane_record,
)
from .svg import emit_svg
from .toda import CorrespondenceError, TodaProblem, extract_ir, extract_uv, solve_connection

log = logging.getLogger("coxtk")

EXIT_VALIDATION = 2
EXIT_COMPUTE = 3
EXIT_IO = 4

LIST_FLAGS = ("--m", "--k", "--z", "--grid")


class ValidationError(ValueError):
    pass


class CheckFailure(ArithmeticError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


# -- argument helpers --------------------------------------------------------


def _floats(text: Any, name: str) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"--{name} expects comma-separated numbers, got {text!r}") from None


def _complex(text: Any) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, dict):
        return complex(text["re"], text["im"])
    parts = _floats(text, "z")
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError:
        raise ValidationError(f"--z expects 're', 're,im' or a Python complex literal, got {text!r}") from None


def _rep(text: str, n: int):
    m = re.fullmatch(r"(wedge|sym):(\d+)", str(text))
    if not m:
        raise ValidationError(f"--rep must be wedge:K or sym:K, got {text!r}")
    kind, k = m.group(1), int(m.group(2))
    if kind == "wedge":
        return wedge_weights(n, k)
    if n != 1:
        raise ValidationError("sym:K representations are only available for n = 1")
    return sym_weights(k)


def _asymptotic(args) -> tuple[AsymptoticData, list[float] | None, float | None]:
    """m from --m, or from --k (and optional --N)."""
    if args.m is not None and args.k is not None:
        raise ValidationError("give either --m or --k, not both")
    if args.m is not None:
        m = _floats(args.m, "m")
        if args.n is not None and len(m) != args.n + 1:
            raise ValidationError(f"--m needs n+1 = {args.n + 1} entries")
        if abs(sum(m)) > 1e-9:
            raise ValidationError("--m must sum to zero")
        m = [v - sum(m) / len(m) for v in m]
        return AsymptoticData(tuple(m)), None, None
    if args.k is not None:
        k = _floats(args.k, "k")
        if args.n is not None and len(k) != args.n + 1:
            raise ValidationError(f"--k needs n+1 = {args.n + 1} entries")
        if any(v < -1 for v in k):
            raise ValidationError("all k_i must be >= -1")
        N = len(k) + sum(k)
        if args.N is not None and abs(float(args.N) - N) > 1e-12:
            raise ValidationError(f"--N {args.N} disagrees with n+1+sum(k) = {N}")
        if N <= 0:
            raise ValidationError("N = n+1+sum(k) must be positive")
        return m_from_k(k), k, N
    raise ValidationError("give --m or --k")


def _grid(text) -> dict:
    if text is None:
        return {}
    vals = _floats(text, "grid")
    if len(vals) != 3:
        raise ValidationError("--grid expects xmin,xmax,nodes")
    return {"x_min": vals[0], "x_max": vals[1], "nodes": int(vals[2])}


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--{name} is required for {args.command}")


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise CheckFailure(message)


# -- subcommands -------------------------------------------------------------


def cmd_rootsys(args) -> dict:
    _require(args, "type", "rank")
    rs = build_root_system(args.type, int(args.rank))
    ce = coxeter_element(rs)
    if args.check:
        orbits = coxeter_orbits(ce, rs)
        _check(len(orbits) == rs.rank, "number of Coxeter orbits differs from the rank")
        _check(all(len(o) == rs.coxeter_number for o in orbits), "an orbit has size different from s")
    return {"results": [rootsys_record(rs, ce)]}


def _diagram(args):
    _require(args, "type", "rank")
    fam, rank = str(args.type).upper(), int(args.rank)
    if fam == "A":
        return plane_type_a(rank)
    rs = build_root_system(fam, rank)
    return plane_general(rs)


def cmd_coxplane(args) -> dict:
    diagram = _diagram(args)
    first = 0 if args.rays is None else int(args.rays)
    if args.check:
        masses(diagram)
        for choice in range(len(diagram.rays)):
            if diagram.roots_on_ray(choice):
                fundamental_domain(diagram, choice)
    rec = coxplane_record(diagram, first)
    return {"results": [rec], "svg": rec}


def cmd_stokes(args) -> dict:
    m, k, N = _asymptotic(args)
    spec = stokes_sectors(m.n, m)
    if args.check:
        chi = character_crosscheck(m)
        _check(np.allclose(chi, np.array(spec.s), atol=1e-10), "Stokes numbers disagree with the character formula")
    rec = stokes_record(spec, m.m, k, N)
    rows = [["i", "s_i"]] + [[i + 1, v] for i, v in enumerate(spec.s)]
    return {"results": [rec], "csv": rows}


def cmd_solitons(args) -> dict:
    _require(args, "n", "rep")
    ws = _rep(args.rep, int(args.n))
    spectrum = None
    if args.m is not None or args.k is not None:
        m, _, _ = _asymptotic(args)
        spectrum = stokes_sectors(m.n, m)
    vd = soliton_graph(ws, spectrum=spectrum)
    segs = segments(vd)
    if args.check:
        brute = sum(
            1
            for a in range(len(ws.weights))
            for b in range(a + 1, len(ws.weights))
            if _is_root(np.subtract(ws.weights[a], ws.weights[b]))
        )
        _check(brute == len(vd.solitons), "soliton count disagrees with the brute-force root test")
        _check(sum(len(p.weights) for p in vd.points) == len(ws.weights), "merged multiplicities do not add up")
    rec = solitons_record(vd, segs)
    return {"results": [rec], "svg": rec}


def _is_root(d: np.ndarray) -> bool:
    # x_i - x_j modulo the all-ones vector
    s = d.size
    c = s * d - d.sum()
    return sorted(c.tolist()) == [-s] + [0] * (s - 2) + [s]


def cmd_wplane(args) -> dict:
    _require(args, "n")
    n = int(args.n)
    if args.rep is not None:
        ws = _rep(args.rep, n)
        if not ws.rep.startswith("wedge"):
            raise ValidationError("the W-plane is defined for wedge:K only")
        k = int(ws.rep.split(":")[1])
    elif args.k is not None:
        ks = _floats(args.k, "k")
        if len(ks) != 1 or ks[0] != int(ks[0]):
            raise ValidationError("wplane takes a single integer --k (or --rep wedge:K)")
        k = int(ks[0])
    else:
        raise ValidationError("wplane needs --k K or --rep wedge:K")
    z = _complex(args.z) if args.z is not None else 1.0 + 0j
    wp = w_plane(n, k, z)
    vd = project_weights(wedge_weights(n, k))
    try:
        c, resid = compare_w_plane(wp, vd)
    except WPlaneMismatch as exc:
        raise CheckFailure(str(exc)) from exc
    if args.check:
        _check(resid < 1e-10, f"W-plane residual {resid:.3e} exceeds 1e-10")
    return {"results": [wplane_record(wp, c, resid)]}


def _toda_run(m: tuple[float, ...], grid: dict) -> dict:
    am = AsymptoticData(tuple(m))
    sol = solve_connection(TodaProblem(am, **grid))
    uv = extract_uv(sol)
    ir = extract_ir(sol)
    try:
        predicted = stokes_numbers(am)
    except StokesConsistencyError:
        predicted = None
    return {"sol": sol, "record": toda_record(sol, uv, ir, predicted)}


def _toda_check(rec: dict, degenerate: bool) -> None:
    _check(rec["converged"], f"Newton did not converge (residual {rec['residual_norm']:.3e})")
    relax = 10.0 if degenerate else 1.0
    for a, b in zip(rec["m_hat"], rec["m"]):
        _check(abs(a - b) <= 0.02 * relax * abs(b) + 1e-8, f"UV slope {a:.6g} differs from m_i = {b:.6g}")
    if rec["predicted_s"] is not None:
        for a, b in zip(rec["s_hat"], rec["predicted_s"]):
            _check(abs(a - b) <= 0.05 * relax * abs(b) + 1e-8, f"IR fit {a:.6g} differs from s = {b:.6g}")


def cmd_toda(args) -> dict:
    m, _, _ = _asymptotic(args)
    out = _toda_run(m.m, _grid(args.grid))
    sol, rec = out["sol"], out["record"]
    if args.check:
        _toda_check(rec, sol.problem.degenerate)
    rows = [["x"] + [f"w_{i}" for i in range(sol.n + 1)]]
    rows += [[float(x)] + [float(v) for v in w] for x, w in zip(sol.x, sol.w)]
    return {"results": [rec], "csv": rows}


def _sweep_point(task: tuple[int, dict, dict]) -> tuple[int, dict]:
    idx, point, grid = task
    if "m" in point:
        m = tuple(float(v) for v in point["m"])
    else:
        m = m_from_k([float(v) for v in point["k"]]).m
    return idx, _toda_run(m, grid)["record"]


def cmd_sweep(args) -> dict:
    points = []
    for spec in args.points or []:
        if isinstance(spec, dict):
            points.append(spec)
        elif str(spec).startswith("k="):
            points.append({"k": _floats(str(spec)[2:], "k")})
        else:
            points.append({"m": _floats(str(spec).removeprefix("m="), "m")})
    if not points:
        raise ValidationError("sweep needs at least one --point (m=... or k=...)")
    for p in points:
        if ("m" in p) == ("k" in p):
            raise ValidationError(f"each sweep point needs exactly one of m or k: {p}")
        # validate up front so a bad point fails before any solve starts
        if "m" in p:
            AsymptoticData(tuple(float(v) for v in p["m"]))
        else:
            m_from_k([float(v) for v in p["k"]])
    grid = _grid(args.grid)
    tasks = [(i, p, grid) for i, p in enumerate(points)]
    jobs = max(1, int(args.jobs or 1))
    if jobs == 1:
        done = [_sweep_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_sweep_point, tasks))
    done.sort(key=lambda item: item[0])
    recs = []
    for idx, rec in done:
        rec = dict(rec, index=idx)
        if args.check:
            _toda_check(rec, any(abs(g + 1) < 1e-12 for g in AsymptoticData(tuple(rec["m"])).gaps()))
        recs.append(rec)
    rows = [["index", "m", "s_hat", "predicted_s", "converged"]]
    for r in recs:
        rows.append([r["index"], ";".join(repr(v) for v in r["m"]), ";".join(repr(v) for v in r["s_hat"]),
                     "" if r["predicted_s"] is None else ";".join(repr(v) for v in r["predicted_s"]), r["converged"]])
    return {"results": recs, "csv": rows}


FIGURES = (
    ("fig1_a3_plane", lambda: coxplane_record(plane_type_a(3), [-math.pi / 4, -math.pi / 2, -3 * math.pi / 4, -math.pi])),
    ("fig2_a4_plane", lambda: coxplane_record(plane_type_a(4), 0)),
    ("fig3_wedge1_a3", lambda: _soliton_rec(3, 1)),
    ("fig4_wedge2_a3", lambda: _soliton_rec(3, 2)),
)


def _soliton_rec(n: int, k: int) -> dict:
    vd = soliton_graph(wedge_weights(n, k))
    return solitons_record(vd, segments(vd))


def cmd_figures(args) -> dict:
    outdir = Path(args.outdir or ".")
    recs = []
    for name, build in FIGURES:
        rec = dict(build(), figure=name)
        _write(outdir / f"{name}.svg", emit_svg(rec))
        _write(outdir / f"{name}.json", emit_json([rec]))
        recs.append({"figure": name, "svg": f"{name}.svg", "json": f"{name}.json"})
    return {"results": recs}


COMMANDS = {
    "rootsys": cmd_rootsys,
    "coxplane": cmd_coxplane,
    "stokes": cmd_stokes,
    "solitons": cmd_solitons,
    "wplane": cmd_wplane,
    "toda": cmd_toda,
    "sweep": cmd_sweep,
    "figures": cmd_figures,
}


# -- plumbing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coxtk", description="Coxeter planes, Stokes data and the radial tt*-Toda solver.")
    parser.add_argument("--version", action="version", version=f"coxtk {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with default values for any flag")
        p.add_argument("--json", help="write the JSON document here instead of stdout")
        p.add_argument("--report", dest="json", help="alias of --json")
        p.add_argument("--csv", help="write a CSV table (stokes, toda, sweep)")
        p.add_argument("--svg", help="write an SVG figure (coxplane, solitons)")
        p.add_argument("--check", action="store_true", default=None, help="run internal oracles and fail on mismatch")
        if name in ("rootsys", "coxplane"):
            p.add_argument("--type")
            p.add_argument("--rank", type=int)
        if name == "coxplane":
            p.add_argument("--rays", type=int, help="index of the first positive ray")
        if name in ("stokes", "solitons", "wplane", "toda", "sweep"):
            p.add_argument("--n", type=int)
            p.add_argument("--m")
            p.add_argument("--k")
            p.add_argument("--N", type=float)
        if name in ("solitons", "wplane"):
            p.add_argument("--rep")
        if name == "wplane":
            p.add_argument("--z")
        if name in ("toda", "sweep"):
            p.add_argument("--grid", help="xmin,xmax,nodes")
        if name == "sweep":
            p.add_argument("--point", dest="points", action="append", help="m=a,b,... or k=a,b,...; repeatable")
            p.add_argument("--jobs", type=int)
        if name == "figures":
            p.add_argument("--outdir")
    return parser


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--m -0.25,0.25`` into ``--m=-0.25,0.25`` so argparse accepts it."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok in LIST_FLAGS or tok == "--point") and nxt is not None and re.match(r"^-[\d.]", nxt):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _apply_config(args) -> None:
    if not args.config:
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except ValueError as exc:
        raise ValidationError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValidationError("config file must hold a JSON object")
    known = vars(args)
    for key, value in cfg.items():
        key = key.replace("-", "_")
        if key in ("command", "config"):
            continue
        if key not in known:
            raise ValidationError(f"unknown config key {key!r} for {args.command}")
        if known[key] is None:
            if isinstance(value, list) and key in ("m", "k", "grid"):
                value = ",".join(repr(float(v)) for v in value)
            setattr(args, key, value)


def _write(path: Path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _error(code: int, kind: str, message: str) -> int:
    sys.stderr.write(dumps({"schema_version": 1, "error": {"code": code, "type": kind, "message": message}}) + "\n")
    return code


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_negative_values(argv))
        if args.command is None:
            raise ValidationError("a subcommand is required: " + ", ".join(COMMANDS))
        _apply_config(args)
        args.check = bool(args.check)
        out = COMMANDS[args.command](args)
        text = emit_json(out["results"])
        if args.json:
            _write(Path(args.json), text)
        else:
            sys.stdout.write(text)
        if args.csv:
            if "csv" not in out:
                raise ValidationError(f"{args.command} has no CSV output")
            _write(Path(args.csv), _csv_text(out["csv"]))
        if args.svg:
            if "svg" not in out:
                raise ValidationError(f"{args.command} has no SVG output")
            _write(Path(args.svg), emit_svg(out["svg"]))
    except (ValidationError, InvalidTypeError) as exc:
        return _error(EXIT_VALIDATION, "validation", str(exc))
    except OSError as exc:
        return _error(EXIT_IO, "io", str(exc))
    except ValueError as exc:
        return _error(EXIT_VALIDATION, "validation", str(exc))
    except (CheckFailure, ArithmeticError, CorrespondenceError, RuntimeError) as exc:
        return _error(EXIT_COMPUTE, "computation", str(exc))
    return 0


def main() -> None:
    level = os.environ.get("COXTK_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
