"""The expanded fibre over a stratum, modelled as a decorated line arrangement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import NoSuchComponent, ValidationError
from .strata import Stratum
from .tropical import Point, Subdivision, arrangement_vertices

Target = Union[Point, str]


@dataclass(frozen=True)
class Component:
    """A Delta-component: kind 1 or 2 and its index (k in A, or j up to |B|)."""

    kind: int
    index: int

    def __str__(self) -> str:
        return f"D{self.kind}({self.index})"


def _component(which) -> Component:
    if isinstance(which, Component):
        return which
    try:
        kind, index = which
        return Component(int(kind), int(index))
    except (TypeError, ValueError) as exc:
        raise NoSuchComponent(f"cannot read a component from {which!r}") from exc


@dataclass(frozen=True)
class Bubble:
    point: Point
    on1: bool
    on2: bool

    @property
    def kind(self) -> str:
        if self.on1 and self.on2:
            return "mixed"
        return "pure-1" if self.on1 else "pure-2"

    @property
    def on_boundary(self) -> bool:
        return 0 in self.point


@dataclass(frozen=True)
class ExpandedFibre:
    h: int
    cuts1: tuple[tuple[int, int], ...]
    cuts2: tuple[tuple[int, int], ...]
    bubbles: tuple[Bubble, ...]
    # levels of the type-1 components for k = 1..|A| and type-2 for j = 1..|B|
    type1_levels: tuple[int, ...] = ()
    type2_levels: tuple[int, ...] = ()
    stratum: Stratum | None = None

    @property
    def points(self) -> list[Point]:
        return [b.point for b in self.bubbles]

    def bubble_at(self, p: Point) -> Bubble | None:
        for b in self.bubbles:
            if b.point == tuple(p):
                return b
        return None

    def has_target(self, t: Target) -> bool:
        if isinstance(t, str):
            return t in ("Y1", "Y2", "Y3")
        return self.bubble_at(tuple(t)) is not None

    def level(self, which) -> int:
        c = _component(which)
        levels = {1: self.type1_levels, 2: self.type2_levels}.get(c.kind)
        if levels is None or not 1 <= c.index <= len(levels):
            raise NoSuchComponent(f"{c} does not exist in this fibre")
        return levels[c.index - 1]

    def torus_directions(self, p: Point) -> list[tuple[str, int]]:
        """Torus factors acting on the coordinates of the bubble at p."""
        if self.stratum is None:
            return []
        n = self.stratum.n
        out = []
        for k, lev in enumerate(self.type1_levels, start=1):
            if 0 < lev < self.h and p[0] == lev:
                out.append(("1", k))
        for j, lev in enumerate(self.type2_levels, start=1):
            if 0 < lev < self.h and p[1] == lev:
                out.append(("2", n + 1 - j))
        return out


def membership_at_level(kind: int, level: int, h: int, points) -> frozenset:
    """Members of a component of the given kind sitting at the given level."""
    if 0 < level < h:
        axis = kind - 1
        return frozenset(p for p in points if p[axis] == level)
    if level == 0:
        return frozenset({"Y2", "Y3"} if kind == 1 else {"Y1", "Y3"})
    return frozenset({"Y1"} if kind == 1 else {"Y2"})


def _bubbles(h: int, levels1, levels2) -> tuple[Bubble, ...]:
    l1, l2 = set(levels1), set(levels2)
    return tuple(Bubble(p, p[0] in l1, p[1] in l2)
                 for p in arrangement_vertices(h, l1, l2))


def _multiset(levels, h) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for v in levels:
        if 0 < v < h:
            counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def build_fibre(s: Stratum) -> ExpandedFibre:
    pair = s.pair
    sums = s.partial_sums()
    h = s.h
    alpha, beta = len(pair.A), len(pair.B)
    t1 = tuple(sums[k] for k in range(1, alpha + 1))
    # the j-th type-2 component collects the valuations from index n+2-j on
    t2 = tuple(h - sums[pair.n + 1 - j] for j in range(1, beta + 1))
    cuts1 = _multiset(t1, h)
    cuts2 = _multiset(t2, h)
    bubbles = _bubbles(h, (c for c, _ in cuts1), (c for c, _ in cuts2))
    return ExpandedFibre(h, cuts1, cuts2, bubbles, t1, t2, s)


def fibre_from_subdivision(S: Subdivision) -> ExpandedFibre:
    """A fibre carrying only the tropical data, without Delta-component indexing."""
    return ExpandedFibre(S.h, S.cuts1, S.cuts2, _bubbles(S.h, S.levels1, S.levels2))


def delta_membership(f: ExpandedFibre, which) -> frozenset:
    """Bubbles and corners that a Delta-component is equal to."""
    c = _component(which)
    level = f.level(c)
    return membership_at_level(c.kind, level, f.h, f.points)


def subdivision_of(f: ExpandedFibre) -> Subdivision:
    # the fibre over the open stratum has height 0; its class is the bare triangle
    if f.h == 0:
        return Subdivision(1)
    return Subdivision(f.h, f.cuts1, f.cuts2)


def _stratum_of(x) -> Stratum:
    if isinstance(x, Stratum):
        return x
    if isinstance(x, ExpandedFibre) and x.stratum is not None:
        return x.stratum
    raise ValidationError("fibre comparison needs the stratum a fibre was built from")


def fibres_isomorphic(f1, f2) -> bool:
    """Structural isomorphism test on the zero patterns behind two fibres.

    With r zeros, the first r-1 must agree on A-membership and the last r-1 on
    B-membership, and the valuations must match.  A single zero always gives
    the unexpanded fibre.
    """
    s1, s2 = _stratum_of(f1), _stratum_of(f2)
    if s1.r != s2.r or s1.valuations != s2.valuations:
        return False
    d1, d2 = s1.decorations, s2.decorations
    r = s1.r
    if any(a.in_a != b.in_a for a, b in zip(d1[:r - 1], d2[:r - 1])):
        return False
    if any(a.in_b != b.in_b for a, b in zip(d1[1:], d2[1:])):
        return False
    return True


def fibre_to_json(f: ExpandedFibre) -> dict:
    out = {"h": f.h,
           "cuts1": {str(c): m for c, m in f.cuts1},
           "cuts2": {str(c): m for c, m in f.cuts2},
           "bubbles": [list(b.point) for b in f.bubbles]}
    if f.stratum is not None:
        out["stratum"] = f.stratum.to_json()
    return out


def fibre_from_json(obj: Mapping) -> ExpandedFibre:
    from .strata import stratum_from_json

    if "stratum" in obj:
        f = build_fibre(stratum_from_json(obj["stratum"]))
    else:
        f = fibre_from_subdivision(Subdivision(obj["h"], obj.get("cuts1") or {},
                                               obj.get("cuts2") or {}))
    mine = fibre_to_json(f)
    for key in ("h", "cuts1", "cuts2", "bubbles"):
        if key not in obj:
            continue
        theirs = obj[key]
        if key.startswith("cuts"):
            theirs = {str(k): v for k, v in theirs.items()}
        elif key == "bubbles":
            theirs = sorted(list(p) for p in theirs)
        if theirs != mine[key]:
            raise ValidationError(f"{key} disagrees with the arrangement")
    return f
