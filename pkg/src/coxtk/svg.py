"""SVG 1.1 rendering of Coxeter Plane and soliton records.

The renderer only reads the plain records of :mod:`coxtk.serialize`, so a
figure rebuilt from a saved JSON document is byte-identical to the original.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from xml.sax.saxutils import escape

__all__ = ["FigureSpec", "emit_svg", "svg_counts"]


@dataclass(frozen=True)
class FigureSpec:
    size: float = 480.0
    margin: float = 56.0
    point_radius: float = 4.0
    font_size: float = 11.0
    ray_width: float = 0.8
    heavy_width: float = 2.6
    segment_width: float = 1.2

    def __post_init__(self):
        for name in ("size", "margin", "point_radius", "font_size", "ray_width", "heavy_width", "segment_width"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if 2 * self.margin >= self.size:
            raise ValueError("margin leaves no room for the drawing")


def _num(v: float) -> str:
    text = f"{v:.6f}"
    return "0.000000" if text == "-0.000000" else text


STYLE = (
    ".ray{stroke:#9a9a9a;stroke-width:%s}"
    ".ray.heavy{stroke:#000000;stroke-width:%s}"
    ".soliton{stroke:#1f4e9c;stroke-width:%s}"
    ".soliton.o1{stroke:#b03a2e}.soliton.o2{stroke:#1e8449}"
    ".pt{fill:#000000}"
    "text{font-family:monospace;font-size:%spx;fill:#222222}"
)


class _Canvas:
    def __init__(self, spec: FigureSpec, extent: float):
        self.spec = spec
        half = spec.size / 2
        self.scale = (half - spec.margin) / (extent if extent > 0 else 1.0)
        self.items: list[str] = []

    def xy(self, z: complex) -> tuple[str, str]:
        half = self.spec.size / 2
        return _num(half + self.scale * z.real), _num(half - self.scale * z.imag)

    def line(self, a: complex, b: complex, cls: str) -> None:
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.items.append(f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')

    def point(self, z: complex, label: str) -> None:
        x, y = self.xy(z)
        r = _num(self.spec.point_radius)
        self.items.append(f'<circle class="pt" cx="{x}" cy="{y}" r="{r}"/>')
        if label:
            # labels sit outward from the origin
            direction = z / abs(z) if abs(z) > 1e-12 else complex(0.0, 1.0)
            off = direction * (self.spec.point_radius + 0.9 * self.spec.font_size) / self.scale
            tx, ty = self.xy(z + off)
            self.items.append(f'<text x="{tx}" y="{ty}" text-anchor="middle" dominant-baseline="middle">{escape(label)}</text>')

    def render(self, title: str) -> str:
        s = self.spec
        size = _num(s.size)
        style = STYLE % (_num(s.ray_width), _num(s.heavy_width), _num(s.segment_width), _num(s.font_size))
        head = [
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
            f"<title>{escape(title)}</title>",
            f"<style>{style}</style>",
        ]
        return "\n".join(head + self.items + ["</svg>"]) + "\n"


def _coxplane(rec: dict, spec: FigureSpec) -> str:
    pts = rec["points"]
    extent = max(abs(p["z"]) for p in pts)
    cv = _Canvas(spec, extent)
    reach = extent * (1.0 + 0.5 * spec.margin / (spec.size / 2 - spec.margin))
    for ray in rec["rays"]:
        cls = "ray heavy" if ray["positive"] else "ray"
        cv.line(0j, reach * cmath.exp(1j * ray["angle"]), cls)
    for p in pts:
        cv.point(p["z"], ",".join(p["labels"]))
    return cv.render(f"Coxeter Plane {rec['type']}")


def _solitons(rec: dict, spec: FigureSpec) -> str:
    pts = rec["points"]
    extent = max((abs(p["z"]) for p in pts), default=1.0)
    cv = _Canvas(spec, extent if extent > 0 else 1.0)
    mass_rank = {m: r for r, m in enumerate(sorted({round(g["mass"], 9) for g in rec["segments"]}))}
    for g in rec["segments"]:
        a, b = g["ends"]
        cv.line(pts[a]["z"], pts[b]["z"], f"soliton o{mass_rank[round(g['mass'], 9)]}")
    for p in pts:
        cv.point(p["z"], " ".join(p["labels"]))
    return cv.render(f"Vacua of {rec['rep']} for n={rec['n']}")


def emit_svg(record: dict, spec: FigureSpec | None = None) -> str:
    """SVG text for a ``coxplane`` or ``solitons`` record."""
    spec = FigureSpec() if spec is None else spec
    kind = record.get("kind")
    if kind == "coxplane":
        return _coxplane(record, spec)
    if kind == "solitons":
        return _solitons(record, spec)
    raise ValueError(f"no figure for records of kind {kind!r}")


def svg_counts(text: str) -> dict[str, int]:
    """Element counts of a rendered figure, handy in tests."""
    return {
        "rays": text.count('class="ray'),
        "heavy": text.count('class="ray heavy"'),
        "points": text.count('class="pt"'),
        "segments": text.count('class="soliton'),
        "labels": text.count("<text "),
    }

