"""JSON interchange with schema validation, and SVG / DOT rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Mapping

import jsonschema

from .errors import SchemaError, ValidationError
from .fibres import ExpandedFibre, build_fibre, fibre_from_json, fibre_to_json, subdivision_of
from .limits import PointConfiguration, configuration_from_json
from .pairs import UnbrokenPair, pair_from_json
from .smoothing import SmoothingProblem, problem_from_json
from .stability import (StabilityCondition, SupportAssignment, condition_from_json,
                        support_from_json)
from .strata import Stratum
from .tropical import Point, Subdivision, corner_point, subdivision_from_json

SCHEMA_NAMES = ("pair", "stratum", "subdivision", "fibre", "configuration", "support",
                "condition", "smoothing-problem", "stratum-pair", "manifest", "render")


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    if kind not in SCHEMA_NAMES:
        raise ValueError(f"unknown schema {kind!r}")
    text = resources.files("expdeg").joinpath("schemas", f"{kind}.schema.json").read_text()
    return json.loads(text)


def validate(obj: Any, kind: str) -> None:
    schema = load_schema(kind)
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(obj), key=lambda e: (len(e.path), list(map(str, e.path))))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, list(err.path))


@dataclass(frozen=True)
class Manifest:
    command: str
    inputs: tuple = ()
    options: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": list(self.inputs),
                "options": dict(self.options), "seed": self.seed}


def _check_stratum(obj: Mapping, path: list) -> None:
    J = set(obj["J"])
    g = obj["g"]
    n = obj["pair"]["n"]
    if len(g) != n + 1:
        raise SchemaError(f"expected {n + 1} valuations, got {len(g)}", path + ["g"])
    for i, v in enumerate(g):
        if (i + 1 in J) != (v > 0):
            raise SchemaError(
                f"valuation of index {i + 1} must be {'positive' if i + 1 in J else 'zero'}",
                path + ["g", i])


_DECODERS = {
    "pair": pair_from_json,
    "subdivision": subdivision_from_json,
    "fibre": fibre_from_json,
    "configuration": configuration_from_json,
    "support": support_from_json,
    "condition": condition_from_json,
    "smoothing-problem": problem_from_json,
    "manifest": lambda o: Manifest(o["command"], tuple(o.get("inputs", ())),
                                   dict(o.get("options", {})), o.get("seed", 0)),
}


def decode(obj: Any, kind: str):
    """Validate against the published schema and build the typed object."""
    validate(obj, kind)
    try:
        if kind == "stratum":
            _check_stratum(obj, [])
            from .strata import stratum_from_json
            return stratum_from_json(obj)
        if kind == "stratum-pair":
            from .strata import stratum_from_json
            _check_stratum(obj["left"], ["left"])
            _check_stratum(obj["right"], ["right"])
            return stratum_from_json(obj["left"]), stratum_from_json(obj["right"])
        if kind == "fibre" and "stratum" in obj:
            _check_stratum(obj["stratum"], ["stratum"])
        if kind == "render":
            return decode_render(obj)
        return _DECODERS[kind](obj)
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc


def decode_render(obj: Mapping):
    inner = obj["object"]
    if "pair" in inner:
        target = build_fibre(decode(inner, "stratum"))
    elif "bubbles" in inner:
        target = decode(inner, "fibre")
    else:
        target = decode(inner, "subdivision")
    support = decode(obj["support"], "support") if "support" in obj else None
    base = decode(obj["base"], "subdivision") if "base" in obj else None
    return target, support, base


def encode(x) -> dict:
    if isinstance(x, ExpandedFibre):
        return fibre_to_json(x)
    if isinstance(x, (UnbrokenPair, Stratum, Subdivision, PointConfiguration, SupportAssignment,
                      StabilityCondition, SmoothingProblem, Manifest)):
        return x.to_json()
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# -- rendering -------------------------------------------------------------------

WIDTH = 400
PAD = 40
SIDE = WIDTH - 2 * PAD
TOP = (WIDTH / 2, PAD)
LEFT = (PAD, PAD + SIDE * math.sqrt(3) / 2)
RIGHT = (WIDTH - PAD, LEFT[1])
HEIGHT = int(LEFT[1] + PAD)

STYLE = {
    "triangle": "fill:#f7f7f2;stroke:#222;stroke-width:1.5",
    "cut1": "stroke:#1f5fbf;stroke-width:1.5",
    "cut2": "stroke:#c0392b;stroke-width:1.5",
    "new": "stroke:#2a9d3f;stroke-width:2;stroke-dasharray:5,3",
    "mixed": "fill:#6c3483",
    "pure-1": "fill:#1f5fbf",
    "pure-2": "fill:#c0392b",
    "fresh": "fill:#2a9d3f",
    "support": "fill:none;stroke:#e67e22;stroke-width:2.5",
}


def _xy(p: Point, h: int) -> tuple[float, float]:
    e1, e2, e3 = p
    x = (e1 * TOP[0] + e2 * RIGHT[0] + e3 * LEFT[0]) / h
    y = (e1 * TOP[1] + e2 * RIGHT[1] + e3 * LEFT[1]) / h
    return x, y


def _f(v: float) -> str:
    return f"{v:.2f}"


def _line(a, b, style) -> str:
    return (f'<line x1="{_f(a[0])}" y1="{_f(a[1])}" x2="{_f(b[0])}" y2="{_f(b[1])}" '
            f'style="{style}"/>')


def render_svg(obj, support: SupportAssignment | None = None,
               base: Subdivision | None = None) -> str:
    """Draw a subdivision or fibre in the triangle; Y1 on top, Y3 bottom left, Y2 bottom right.

    Lines and vertices absent from ``base`` are drawn in the highlight colour.
    """
    S = obj if isinstance(obj, Subdivision) else subdivision_of(obj)
    h = S.h
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">']
    corners = " ".join(f"{_f(x)},{_f(y)}" for x, y in (TOP, RIGHT, LEFT))
    out.append(f'<polygon points="{corners}" style="{STYLE["triangle"]}"/>')
    for kind, cuts in (("1", S.cuts1), ("2", S.cuts2)):
        for level, mult in cuts:
            if kind == "1":
                a, b = (level, 0, h - level), (level, h - level, 0)
                old = base is not None and base.h == h and level in base.levels1
            else:
                a, b = (0, level, h - level), (h - level, level, 0)
                old = base is not None and base.h == h and level in base.levels2
            style = STYLE["new"] if base is not None and not old else STYLE["cut" + kind]
            pa, pb = _xy(a, h), _xy(b, h)
            out.append(_line(pa, pb, style))
            if mult > 1:
                out.append(f'<text x="{_f(pb[0] + 6)}" y="{_f(pb[1] - 4)}" font-size="11">'
                           f'x{mult}</text>')
    old_vertices = set(base.vertices()) if base is not None and base.h == h else None
    l1, l2 = S.levels1, S.levels2
    for v in S.vertices():
        x, y = _xy(v, h)
        kind = "mixed" if v[0] in l1 and v[1] in l2 else ("pure-1" if v[0] in l1 else "pure-2")
        if old_vertices is not None and v not in old_vertices:
            kind = "fresh"
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" style="{STYLE[kind]}"/>')
    if support is not None:
        for t in sorted({p.target for p in support.points}, key=str):
            p = corner_point(t, h) if isinstance(t, str) else t
            x, y = _xy(p, h)
            if isinstance(t, str):
                # a point in a corner's interior is drawn just inside the triangle
                cx, cy = _xy((1, 1, 1), 3)
                x, y = x + (cx - x) * 0.12, y + (cy - y) * 0.12
            out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="7" style="{STYLE["support"]}"/>')
    for name, (x, y), dx, dy in (("Y1", TOP, -8, -10), ("Y2", RIGHT, 8, 16), ("Y3", LEFT, -24, 16)):
        out.append(f'<text x="{_f(x + dx)}" y="{_f(y + dy)}" font-size="14">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def adjacency_edges(S: Subdivision) -> list[tuple[str, str]]:
    """Edges of the arrangement graph on bubbles and corners."""
    h = S.h
    nodes = S.vertices() + [corner_point(c, h) for c in ("Y1", "Y2", "Y3")]

    def name(p):
        for c in ("Y1", "Y2", "Y3"):
            if corner_point(c, h) == p:
                return c
        return "v{}_{}_{}".format(*p)

    lines = [(0, c, 1) for c in sorted(S.levels1)] + [(1, d, 0) for d in sorted(S.levels2)]
    lines += [(axis, 0, (axis + 1) % 3) for axis in range(3)]
    edges = set()
    for axis, value, param in lines:
        pts = sorted((p for p in nodes if p[axis] == value), key=lambda p: p[param])
        for a, b in zip(pts, pts[1:]):
            edges.add(tuple(sorted((name(a), name(b)))))
    return sorted(edges)


def render_dot(obj) -> str:
    S = obj if isinstance(obj, Subdivision) else subdivision_of(obj)
    lines = ["graph bubbles {"]
    for a, b in adjacency_edges(S):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
