"""Line-arrangement subdivisions of the height-h triangle.

Coordinates are (e1, e2, e3) with e1 + e2 + e3 = h.  A type-1 cut at level c
is the line e1 = c, a type-2 cut at level c is the line e2 = c.  The corners
are Y1 = (h,0,0), Y2 = (0,h,0), Y3 = (0,0,h).

Every cut meets the edge e3 = 0 in an *attach point*, recorded by its e1
value: c for a type-1 cut and h - c for a type-2 cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

from .errors import ValidationError

Point = tuple[int, int, int]

CORNER_NAMES = ("Y1", "Y2", "Y3")


def corner_point(name: str, h: int) -> Point:
    return {"Y1": (h, 0, 0), "Y2": (0, h, 0), "Y3": (0, 0, h)}[name]


def corner_name(p: Point) -> str | None:
    nz = [i for i, v in enumerate(p) if v]
    if len(nz) == 1:
        return CORNER_NAMES[nz[0]]
    return None


def _as_multiset(cuts, name: str) -> tuple[tuple[int, int], ...]:
    if cuts is None:
        return ()
    if isinstance(cuts, Mapping):
        items = [(int(k), int(v)) for k, v in cuts.items()]
    elif all(isinstance(c, tuple) for c in cuts):
        items = [(int(k), int(v)) for k, v in cuts]
        if len({k for k, _ in items}) != len(items):
            raise ValidationError(f"{name}: repeated level")
    else:
        counts: dict[int, int] = {}
        for c in cuts:
            counts[int(c)] = counts.get(int(c), 0) + 1
        items = list(counts.items())
    for level, mult in items:
        if mult < 1:
            raise ValidationError(f"{name}: multiplicity at level {level} must be positive")
    return tuple(sorted(items))


@dataclass(frozen=True)
class Subdivision:
    """Height plus two multisets of cut levels, stored as sorted (level, mult) pairs."""

    h: int
    cuts1: tuple[tuple[int, int], ...] = ()
    cuts2: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if isinstance(self.h, bool) or not isinstance(self.h, int) or self.h < 1:
            raise ValidationError(f"height must be a positive integer, got {self.h!r}")
        c1 = _as_multiset(self.cuts1, "cuts1")
        c2 = _as_multiset(self.cuts2, "cuts2")
        for name, cuts in (("cuts1", c1), ("cuts2", c2)):
            for level, _ in cuts:
                if not 0 < level < self.h:
                    raise ValidationError(f"{name}: level {level} outside (0, {self.h})")
        object.__setattr__(self, "cuts1", c1)
        object.__setattr__(self, "cuts2", c2)

    @property
    def levels1(self) -> frozenset[int]:
        return frozenset(c for c, _ in self.cuts1)

    @property
    def levels2(self) -> frozenset[int]:
        return frozenset(c for c, _ in self.cuts2)

    def mult1(self, level: int) -> int:
        return dict(self.cuts1).get(level, 0)

    def mult2(self, level: int) -> int:
        return dict(self.cuts2).get(level, 0)

    @property
    def is_trivial(self) -> bool:
        return not self.cuts1 and not self.cuts2

    def attach_points(self) -> dict[int, str]:
        """Map each attach value on the e3 = 0 edge to "1", "2" or "both"."""
        out: dict[int, set[str]] = {}
        for c in self.levels1:
            out.setdefault(c, set()).add("1")
        for d in self.levels2:
            out.setdefault(self.h - d, set()).add("2")
        return {x: ("both" if len(s) == 2 else next(iter(s))) for x, s in sorted(out.items())}

    def vertices(self) -> list[Point]:
        """Non-corner vertices of the arrangement, sorted."""
        return arrangement_vertices(self.h, self.levels1, self.levels2)

    def is_vertex(self, p: Point) -> bool:
        e1, e2, e3 = p
        if min(p) < 0 or e1 + e2 + e3 != self.h:
            return False
        on1 = e1 in self.levels1
        on2 = e2 in self.levels2
        if on1 and on2:
            return True
        # an endpoint of a cut on the boundary
        return (on1 or on2) and 0 in p

    def forget_multiplicities(self) -> Subdivision:
        return Subdivision(self.h, tuple((c, 1) for c in self.levels1),
                           tuple((c, 1) for c in self.levels2))

    def primitive(self) -> Subdivision:
        """Divide out the largest factor common to the height and every level."""
        g = reduce(math.gcd, list(self.levels1) + list(self.levels2), self.h)
        if g == 1:
            return self
        return Subdivision(self.h // g, tuple((c // g, m) for c, m in self.cuts1),
                           tuple((c // g, m) for c, m in self.cuts2))

    def class_key(self) -> tuple:
        """Key of the equivalence class: primitive height and bare level sets."""
        p = self.primitive()
        return p.h, tuple(sorted(p.levels1)), tuple(sorted(p.levels2))

    def with_lines(self, new1: Mapping[int, int] | None = None,
                   new2: Mapping[int, int] | None = None) -> Subdivision:
        c1 = dict(self.cuts1)
        c2 = dict(self.cuts2)
        for k, v in (new1 or {}).items():
            c1[k] = c1.get(k, 0) + v
        for k, v in (new2 or {}).items():
            c2[k] = c2.get(k, 0) + v
        return Subdivision(self.h, c1, c2)

    def to_json(self) -> dict:
        return {"h": self.h,
                "cuts1": {str(c): m for c, m in self.cuts1},
                "cuts2": {str(c): m for c, m in self.cuts2}}


def subdivision_from_json(obj: Mapping) -> Subdivision:
    return Subdivision(obj["h"], obj.get("cuts1") or {}, obj.get("cuts2") or {})


def arrangement_vertices(h: int, levels1: Iterable[int], levels2: Iterable[int]) -> list[Point]:
    pts: set[Point] = set()
    l1, l2 = sorted(set(levels1)), sorted(set(levels2))
    for c in l1:
        pts.add((c, 0, h - c))
        pts.add((c, h - c, 0))
    for d in l2:
        pts.add((0, d, h - d))
        pts.add((h - d, d, 0))
    for c in l1:
        for d in l2:
            if c + d <= h:
                pts.add((c, d, h - c - d))
    return sorted(pts)


def check_unbroken_subdivision(S: Subdivision) -> bool:
    """Whether the attach points read 1-only, then both, then 2-only by increasing e1."""
    order = {"1": 0, "both": 1, "2": 2}
    ranks = [order[k] for k in S.attach_points().values()]
    return all(x <= y for x, y in zip(ranks, ranks[1:]))


def is_realizable(S: Subdivision) -> bool:
    """Unbroken, and exactly the arrangement of some stratum's fibre.

    Every fibre has an index shared by both kinds of component, so when
    1-only and 2-only attach points both occur a shared one must occur too.
    """
    if not check_unbroken_subdivision(S):
        return False
    kinds = set(S.attach_points().values())
    return not ("1" in kinds and "2" in kinds and "both" not in kinds)


def completions(S: Subdivision) -> list[Subdivision]:
    """Smallest realizable arrangements containing S.

    A realizable S is its own completion.  Otherwise one empty companion line
    turns the last 1-only or the first 2-only attach point into a shared one.
    """
    if is_realizable(S):
        return [S]
    if not check_unbroken_subdivision(S):
        return []
    pts = S.attach_points()
    last1 = max(x for x, k in pts.items() if k == "1")
    first2 = min(x for x, k in pts.items() if k == "2")
    return [S.with_lines(None, {S.h - last1: 1}), S.with_lines({first2: 1}, None)]


def rescale(S: Subdivision, factor: int) -> Subdivision:
    if isinstance(factor, bool) or not isinstance(factor, int) or factor < 1:
        raise ValidationError("rescale factor must be a positive integer")
    return Subdivision(S.h * factor, tuple((c * factor, m) for c, m in S.cuts1),
                       tuple((c * factor, m) for c, m in S.cuts2))


def refines_up_to_equivalence(fine: Subdivision, coarse: Subdivision) -> bool:
    """Whether every line of ``coarse`` is a line of ``fine`` at a common height."""
    H = math.lcm(fine.h, coarse.h)
    f = rescale(fine, H // fine.h)
    c = rescale(coarse, H // coarse.h)
    return c.levels1 <= f.levels1 and c.levels2 <= f.levels2
