"""Edge sliding: which bubbles a point at a given bubble can be smoothed into."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import NoIntegralRoom, ValidationError
from .tropical import Point, Subdivision, check_unbroken_subdivision, rescale

CONSEQUENCE = ("a subscheme supported at v0 is either fixed or tends towards "
               "the interior of one of the targets")


@dataclass(frozen=True)
class SmoothingProblem:
    S: Subdivision
    v0: Point
    rescale: int | str | None = None  # factor, "auto", or None for no base change
    boundary_adjacency: bool = True
    rescale_cap: int = 8

    def __post_init__(self):
        object.__setattr__(self, "v0", tuple(int(x) for x in self.v0))
        if not self.S.is_vertex(self.v0):
            raise ValidationError(f"{self.v0} is not a vertex of the subdivision")
        r = self.rescale
        if r is not None and r != "auto" and (isinstance(r, bool) or not isinstance(r, int) or r < 1):
            raise ValidationError("rescale must be a positive integer, 'auto' or omitted")

    def scaled(self, factor: int) -> tuple[Subdivision, Point]:
        return rescale(self.S, factor), tuple(x * factor for x in self.v0)

    def to_json(self) -> dict:
        out = {"subdivision": self.S.to_json(), "v0": list(self.v0),
               "boundary_adjacency": self.boundary_adjacency}
        if self.rescale is not None:
            out["rescale"] = self.rescale
        return out


def problem_from_json(obj: Mapping) -> SmoothingProblem:
    from .tropical import subdivision_from_json

    return SmoothingProblem(subdivision_from_json(obj["subdivision"]), tuple(obj["v0"]),
                            obj.get("rescale"), obj.get("boundary_adjacency", True))


@dataclass(frozen=True)
class Slide:
    """A redistribution: the resulting subdivision and the new lines it created."""

    subdivision: Subdivision
    new_lines: tuple[tuple[str, int, int], ...]  # (kind, level, multiplicity)

    def to_json(self) -> dict:
        return {"subdivision": self.subdivision.to_json(),
                "new_lines": [{"kind": k, "level": lev, "multiplicity": m}
                              for k, lev, m in self.new_lines]}


def _allowed_attach(S: Subdivision, x: int) -> list[int]:
    """Attach values a copy of the line attached at x may slide to.

    Slid copies stay strictly between the nearest attached neighbours.  A side
    with no neighbour is closed off, unless neither side has one, in which case
    the corners bound the range.
    """
    xs = [y for y in S.attach_points() if y != x]
    left = max((y for y in xs if y < x), default=None)
    right = min((y for y in xs if y > x), default=None)
    if left is None and right is None:
        return [y for y in range(1, S.h) if y != x]
    out = []
    if left is not None:
        out += range(left + 1, x)
    if right is not None:
        out += range(x + 1, right)
    return out


def _line_options(excess: int, levels: list[int]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Ways to put between 1 and ``excess`` copies on distinct new levels."""
    for r in range(1, min(excess, len(levels)) + 1):
        for chosen in itertools.combinations(levels, r):
            for total in range(r, excess + 1):
                for cut in itertools.combinations(range(1, total), r - 1):
                    bounds = (0,) + cut + (total,)
                    mults = [b - a for a, b in zip(bounds, bounds[1:])]
                    yield tuple(zip(chosen, mults))


def _lines_through(S: Subdivision, v0: Point) -> list[tuple[str, int, int, list[int]]]:
    """(kind, level, multiplicity, allowed new levels) for each cut through v0."""
    out = []
    if v0[0] in S.levels1:
        c = v0[0]
        out.append(("1", c, S.mult1(c), _allowed_attach(S, c)))
    if v0[1] in S.levels2:
        d = v0[1]
        out.append(("2", d, S.mult2(d), [S.h - y for y in _allowed_attach(S, S.h - d)]))
    return out


def _slides_at(S: Subdivision, v0: Point) -> list[Slide]:
    lines = _lines_through(S, v0)
    movable = [ln for ln in lines if ln[2] >= 2]
    if not movable:
        return []
    if all(not ln[3] for ln in movable):
        raise NoIntegralRoom(f"no integral level to slide to at height {S.h}")
    per_line = [[None, *_line_options(mult - 1, sorted(levels))]
                for _, _, mult, levels in movable]
    out = []
    for combo in itertools.product(*per_line):
        if all(c is None for c in combo):
            continue
        c1 = dict(S.cuts1)
        c2 = dict(S.cuts2)
        new = []
        for (kind, level, _, _), choice in zip(movable, combo):
            if choice is None:
                continue
            cuts = c1 if kind == "1" else c2
            for lev, m in choice:
                cuts[level] -= m
                cuts[lev] = cuts.get(lev, 0) + m
                new.append((kind, lev, m))
        T = Subdivision(S.h, c1, c2)
        if check_unbroken_subdivision(T):
            out.append(Slide(T, tuple(sorted(new))))
    return out


def _factor(p: SmoothingProblem) -> int:
    if p.rescale is None:
        return 1
    if p.rescale != "auto":
        return p.rescale
    for f in range(1, p.rescale_cap + 1):
        S, v0 = p.scaled(f)
        try:
            if _slides_at(S, v0):
                return f
        except NoIntegralRoom:
            continue
        if not any(ln[2] >= 2 for ln in _lines_through(S, v0)):
            return f
    raise NoIntegralRoom(f"no slide exists up to rescale factor {p.rescale_cap}")


def enumerate_slides(p: SmoothingProblem) -> list[Slide]:
    S, v0 = p.scaled(_factor(p))
    return _slides_at(S, v0)


def _neighbours_along(vertices: list[Point], v0: Point, fixed_axis: int, value: int,
                      param_axis: int) -> list[Point]:
    line = sorted((v for v in vertices if v[fixed_axis] == value), key=lambda v: v[param_axis])
    if v0 not in line:
        return []
    i = line.index(v0)
    return [line[j] for j in (i - 1, i + 1) if 0 <= j < len(line)]


def adjacent_vertices(T: Subdivision, v0: Point, boundary: bool = True) -> set[Point]:
    """Vertices sharing an arrangement edge with v0 (corners excluded)."""
    verts = T.vertices()
    out: set[Point] = set()
    if v0[0] in T.levels1:
        out.update(_neighbours_along(verts, v0, 0, v0[0], 1))
    if v0[1] in T.levels2:
        out.update(_neighbours_along(verts, v0, 1, v0[1], 0))
    if boundary:
        for axis in range(3):
            if v0[axis] == 0:
                out.update(_neighbours_along(verts, v0, axis, 0, (axis + 1) % 3))
    return out


@dataclass(frozen=True)
class SmoothingResult:
    factor: int
    v0: Point
    targets: Mapping[Point, Slide] = field(default_factory=dict)
    consequence: str = CONSEQUENCE

    def to_json(self) -> dict:
        return {"factor": self.factor, "v0": list(self.v0),
                "targets": [{"vertex": list(v), "witness": s.to_json()}
                            for v, s in sorted(self.targets.items())],
                "consequence": self.consequence}


def smoothing_targets(p: SmoothingProblem) -> SmoothingResult:
    factor = _factor(p)
    S, v0 = p.scaled(factor)
    old = set(S.vertices())
    targets: dict[Point, Slide] = {}
    for slide in _slides_at(S, v0):
        for v in sorted(adjacent_vertices(slide.subdivision, v0, p.boundary_adjacency)):
            if v not in old:
                targets.setdefault(v, slide)
    return SmoothingResult(factor, v0, targets)
