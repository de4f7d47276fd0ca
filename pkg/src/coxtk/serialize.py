"""Deterministic JSON records for every computation.

Documents have the shape ``{"schema_version": 1, "results": [...]}``.
Complex numbers are written as ``{"re": x, "im": y}`` and floats with 17
significant digits, so a document read back with :func:`load_json`
reproduces the exact doubles it was written from.
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

import numpy as np

SCHEMA_VERSION = 1


def _float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    if v == 0.0:
        return "0.0"
    text = format(v, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _dump(obj: Any, out: list[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _dump({"re": float(obj.real), "im": float(obj.imag)}, out, indent, level)
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for p, (k, v) in enumerate(obj.items()):
            out.append(("," if p else "") + pad + json.dumps(str(k)) + ": ")
            _dump(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        if not items:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list, tuple, complex, np.ndarray)) for v in items)
        if flat:
            parts = []
            for v in items:
                buf: list[str] = []
                _dump(v, buf, indent, level + 1)
                parts.append("".join(buf))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[")
        for p, v in enumerate(items):
            out.append(("," if p else "") + pad)
            _dump(v, out, indent, level + 1)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 1) -> str:
    out: list[str] = []
    _dump(obj, out, indent, 0)
    return "".join(out)


def emit_json(results: Sequence[dict]) -> str:
    return dumps({"schema_version": SCHEMA_VERSION, "results": list(results)}) + "\n"


def _hook(d: dict):
    if set(d) == {"re", "im"}:
        return complex(d["re"], d["im"])
    return d


def load_json(text: str) -> dict:
    doc = json.loads(text, object_hook=_hook)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return doc


def _clean(z: complex, tol: float = 1e-13) -> complex:
    """Drop round-off so that exact zeros print as zeros."""
    re = 0.0 if abs(z.real) < tol else z.real
    im = 0.0 if abs(z.imag) < tol else z.imag
    return complex(re, im)


# -- records ---------------------------------------------------------------


def rootsys_record(rs, ce) -> dict:
    from .liealg import coxeter_orbits

    d = rs.datum
    return {
        "kind": "rootsys",
        "type": d.name,
        "rank": d.rank,
        "coxeter_number": d.coxeter_number,
        "exponents": list(d.exponents),
        "marks": list(d.marks),
        "cartan_matrix": np.asarray(d.cartan_matrix).tolist(),
        "coxeter_ordering": list(ce.ordering),
        "coxeter_order": ce.order(),
        "roots": [{"coords": list(r.coords), "label": r.label_str()} for r in rs.roots],
        "orbits": [[rs.roots[k].label_str() for k in orb] for orb in coxeter_orbits(ce, rs)],
    }


def coxplane_record(diagram, ray_choice=0) -> dict:
    from .coxplane import _positive_rays, fundamental_domain, masses, positive_ray_selection

    rs = diagram.rs
    pos_rays = _positive_rays(diagram, ray_choice)
    pos, simple = positive_ray_selection(diagram, ray_choice)
    dom = fundamental_domain(diagram, ray_choice)
    ms = masses(diagram)
    lab = [r.label_str() for r in rs.roots]
    return {
        "kind": "coxplane",
        "type": rs.datum.name,
        "coxeter_number": diagram.s,
        "rays": [
            {"angle": a, "positive": k in pos_rays, "roots": [lab[i] for i in diagram.roots_on_ray(k)]}
            for k, a in enumerate(diagram.rays)
        ],
        "points": [
            {"z": _clean(p.z), "labels": [lab[i] for i in p.labels], "orbits": list(p.orbit_ids)}
            for p in diagram.points
        ],
        "orbits": [
            {"id": oid, "mass": ms[oid], "roots": [lab[i] for i in orb]} for oid, orb in enumerate(diagram.orbits)
        ],
        "positive_roots": [lab[i] for i in pos],
        "simple_roots": [lab[i] for i in simple],
        "fundamental_domain": [lab[i] for i in dom],
    }


def stokes_record(spectrum, m, k=None, N=None) -> dict:
    rec = {
        "kind": "stokes",
        "n": spectrum.n,
        "m": list(m),
        "s": None if spectrum.s is None else list(spectrum.s),
        "sector_width": spectrum.sector_width,
        "sector_boundary_angles": list(spectrum.sector_boundary_angles),
        "sectors": [list(s) for s in spectrum.sectors()],
        "factor_supports": [
            {"angle": a, "entries": [list(e) for e in spectrum.factor_supports[a]]}
            for a in sorted(spectrum.factor_supports)
        ],
    }
    if k is not None:
        rec["k"] = list(k)
        rec["N"] = N
    return rec


def solitons_record(vd, segs) -> dict:
    ws = vd.ws
    return {
        "kind": "solitons",
        "n": ws.n,
        "rep": ws.rep,
        "weights": [
            {"label": ws.label(a), "weight": list(w), "point": vd.weight_point[a]} for a, w in enumerate(ws.weights)
        ],
        "points": [{"z": _clean(p.z), "labels": [ws.label(a) for a in p.weights]} for p in vd.points],
        "solitons": [
            {
                "pair": [ws.label(s.pair[0]), ws.label(s.pair[1])],
                "root": list(s.root),
                "orbit": s.orbit_id,
                "antiparticle_orbit": s.antiparticle_orbit,
                "mass": s.mass,
                "multiplicity": s.multiplicity,
            }
            for s in vd.solitons
        ],
        "segments": [
            {"ends": list(g.ends), "mass": g.mass, "pairs": [[ws.label(a), ws.label(b)] for a, b in g.pairs]}
            for g in segs
        ],
    }


def wplane_record(wp, scalar, residual) -> dict:
    return {
        "kind": "wplane",
        "n": wp.n,
        "k": wp.k,
        "z": wp.z,
        "critical_values": [_clean(v) for v in wp.critical_values],
        "scalar": scalar,
        "residual": residual,
    }


def toda_record(sol, uv, ir, predicted=None) -> dict:
    p = sol.problem
    xmin, xmax, nodes = p.grid()
    return {
        "kind": "toda",
        "n": p.n,
        "m": list(p.m.m),
        "grid": {"x_min": xmin, "x_max": xmax, "nodes": nodes},
        "bc": p.bc,
        "converged": sol.converged,
        "iterations": sol.iterations,
        "residual_norm": sol.residual_norm,
        "flags": list(sol.flags),
        "m_hat": list(uv.m_hat),
        "uv_fit_error": list(uv.fit_error),
        "s_hat": list(ir.s_hat),
        "ir_windows": [list(w) for w in ir.windows],
        "ir_rel_error": list(ir.rel_error),
        "ir_profile": ir.profile,
        "predicted_s": None if predicted is None else list(predicted),
    }
