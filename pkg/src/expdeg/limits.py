"""Tropical point configurations, their associated pairs, limits and properness audits."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (ConditionUndefined, MultipleLimits, NoLimit, SearchBoundExceeded,
                     ValidationError)
from .stability import (FibreClass, StabilityCondition, SupportAssignment, get_condition,
                        is_ab_stable, is_lw_stable, is_sws_stable, stratum_from_cells,
                        vertex_choice)
from .strata import Stratum
from .tropical import (Point, Subdivision, check_unbroken_subdivision, completions, corner_name,
                       refines_up_to_equivalence, rescale)

FILTERS = ("lw", "sws")
MODES = ("minimal", "paired")


@dataclass(frozen=True, order=True)
class PointConfiguration:
    """A multiset of valuation vectors at a common height, kept at primitive height."""

    h: int
    vertices: tuple[Point, ...]

    def __post_init__(self):
        h = self.h
        if isinstance(h, bool) or not isinstance(h, int) or h < 1:
            raise ValidationError(f"height must be a positive integer, got {h!r}")
        verts = []
        for v in self.vertices:
            v = tuple(int(x) for x in v)
            if len(v) != 3 or min(v) < 0 or sum(v) != h:
                raise ValidationError(f"vertex {v} is not a point of the height-{h} triangle")
            verts.append(v)
        if not verts:
            raise ValidationError("a configuration needs at least one point")
        g = reduce(math.gcd, [x for v in verts for x in v], h)
        object.__setattr__(self, "h", h // g)
        object.__setattr__(self, "vertices", tuple(sorted(tuple(x // g for x in v) for v in verts)))

    @property
    def m(self) -> int:
        return len(self.vertices)

    def distinct(self) -> list[Point]:
        return sorted(set(self.vertices))

    def bubble_vertices(self) -> list[Point]:
        """Distinct vertices with at least two nonzero coordinates."""
        return [v for v in self.distinct() if corner_name(v) is None]

    def support(self) -> SupportAssignment:
        return SupportAssignment.generic(corner_name(v) or v for v in self.vertices)

    def scaled(self, factor: int) -> tuple[int, list[Point]]:
        return self.h * factor, [tuple(x * factor for x in v) for v in self.vertices]

    def to_json(self) -> dict:
        return {"h": self.h, "vertices": [list(v) for v in self.vertices]}


def configuration_from_json(obj: Mapping) -> PointConfiguration:
    return PointConfiguration(obj["h"], tuple(tuple(v) for v in obj["vertices"]))


def triangle_points(h: int) -> list[Point]:
    return [(a, b, h - a - b) for a in range(h, -1, -1) for b in range(h - a + 1)]


def enumerate_configurations(max_h: int, max_m: int) -> Iterator[PointConfiguration]:
    """Every configuration up to the bounds, each once, at its primitive height."""
    for h in range(1, max_h + 1):
        pts = triangle_points(h)
        for m in range(1, max_m + 1):
            for verts in itertools.combinations_with_replacement(pts, m):
                if reduce(math.gcd, [x for v in verts for x in v], h) == 1:
                    yield PointConfiguration(h, verts)


@dataclass(frozen=True)
class AssociatedPair:
    configuration: PointConfiguration
    subdivision: Subdivision

    @property
    def support(self) -> SupportAssignment:
        return self.configuration.support()

    @property
    def anchors(self) -> frozenset[Point]:
        return frozenset(self.configuration.bubble_vertices())

    def fibre_class(self) -> FibreClass:
        return FibreClass(self.subdivision, self.anchors)

    def choices(self) -> dict[Point, str | None]:
        return {v: vertex_choice(self.subdivision, v) for v in sorted(self.anchors)}

    def unanchored_lines(self) -> list[tuple[str, int]]:
        """Cut lines with no configuration vertex on them (their bubbles are tubes)."""
        out = []
        for c in sorted(self.subdivision.levels1):
            if not any(v[0] == c for v in self.anchors):
                out.append(("1", c))
        for d in sorted(self.subdivision.levels2):
            if not any(v[1] == d for v in self.anchors):
                out.append(("2", d))
        return out

    def tubes(self) -> list[Point]:
        return [v for v in self.subdivision.vertices() if v not in self.anchors]

    def representative(self) -> Stratum:
        return canonical_representative(self.subdivision)

    def label(self) -> str:
        """Short description: "trivial", "pure-1", "pure-2" or "mixed"."""
        S = self.subdivision
        if S.is_trivial:
            return "trivial"
        if S.levels1 and S.levels2:
            return "mixed"
        return "pure-1" if S.levels1 else "pure-2"

    def to_json(self) -> dict:
        return {"configuration": self.configuration.to_json(),
                "subdivision": self.subdivision.to_json(),
                "choices": [{"vertex": list(v), "expansion": c} for v, c in self.choices().items()],
                "tubes": [list(v) for v in self.tubes()]}


def canonical_representative(S: Subdivision) -> Stratum:
    """Smallest stratum realizing S with unit multiplicities.

    One index per attach point; a degenerate shared index is added at the far
    end when no attach point carries both kinds.  A class no stratum realizes
    exactly is represented through its first completion.
    """
    comps = completions(S)
    if not comps:
        raise ValidationError("subdivision is not unbroken")
    S = comps[0]
    phase = {"1": "1", "both": "both", "2": "2"}
    cells = [(x, phase[k]) for x, k in S.attach_points().items()]
    kinds = {k for _, k in cells}
    if "both" not in kinds:
        if "1" in kinds:
            cells.append((S.h, "both"))
        else:
            cells.insert(0, (0, "both"))
    return stratum_from_cells(cells, S.h)


def _vertex_options(v: Point) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    e1, e2, e3 = v
    if e2 == 0:
        return [((e1,), ())]
    if e1 == 0:
        return [((), (e2,))]
    if e3 == 0:
        return [((e1,), ()), ((), (e2,)), ((e1,), (e2,))]
    return [((e1,), (e2,))]


def associated_pairs(cfg: PointConfiguration, mode: str = "minimal") -> list[AssociatedPair]:
    """All fibre classes that can carry the configuration's points."""
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}")
    h = cfg.h
    seen: dict[tuple, Subdivision] = {}
    for combo in itertools.product(*(_vertex_options(v) for v in cfg.bubble_vertices())):
        l1 = {c for a, _ in combo for c in a}
        l2 = {d for _, b in combo for d in b}
        base = Subdivision(h, {c: 1 for c in l1}, {d: 1 for d in l2})
        if not check_unbroken_subdivision(base):
            if mode == "minimal":
                continue
        candidates = [base]
        if mode == "paired":
            partners = []
            for x, kind in base.attach_points().items():
                if kind == "1":
                    partners.append(("2", h - x))
                elif kind == "2":
                    partners.append(("1", x))
            candidates = []
            for r in range(len(partners) + 1):
                for extra in itertools.combinations(partners, r):
                    candidates.append(base.with_lines(
                        {lev: 1 for kd, lev in extra if kd == "1"},
                        {lev: 1 for kd, lev in extra if kd == "2"}))
        for S in candidates:
            if check_unbroken_subdivision(S):
                seen.setdefault((S.cuts1, S.cuts2), S)
    return [AssociatedPair(cfg, seen[k]) for k in sorted(seen)]


def _passes(pair: AssociatedPair, flt: str, max_n: int | None) -> bool:
    if flt == "lw":
        return is_lw_stable(pair.representative(), pair.support)
    if flt == "sws":
        return is_sws_stable(pair.subdivision, pair.support, max_n).stable
    raise ValidationError(f"filter must be one of {FILTERS}")


def stable_extensions(cfg: PointConfiguration, filter: str = "lw", mode: str = "minimal",
                      max_n: int | None = None) -> list[AssociatedPair]:
    return [p for p in associated_pairs(cfg, mode) if _passes(p, filter, max_n)]


@dataclass(frozen=True)
class BarClass:
    key: PointConfiguration
    lw: tuple[AssociatedPair, ...]
    sws: tuple[AssociatedPair, ...]

    @property
    def size(self) -> int:
        return len(self.lw)

    def __contains__(self, pair: AssociatedPair) -> bool:
        return pair.configuration == self.key and pair in self.lw

    def to_json(self) -> dict:
        return {"key": self.key.to_json(),
                "lw": [p.to_json() for p in self.lw],
                "sws": [p.to_json() for p in self.sws]}


def bar_class(cfg: PointConfiguration, mode: str = "minimal") -> BarClass:
    return BarClass(cfg, tuple(stable_extensions(cfg, "lw", mode)),
                    tuple(stable_extensions(cfg, "sws", mode)))


def surviving_pairs(cfg: PointConfiguration, cond: StabilityCondition,
                    filter: str = "lw", max_n: int | None = None) -> list[AssociatedPair]:
    cond = get_condition(cond)
    return [p for p in stable_extensions(cfg, filter, cond.mode, max_n)
            if is_ab_stable(p.fibre_class(), p.support, cond)]


def unique_limit(cfg: PointConfiguration, cond, filter: str = "lw",
                 max_n: int | None = None) -> AssociatedPair:
    cond = get_condition(cond)
    found = surviving_pairs(cfg, cond, filter, max_n)
    if not found:
        raise NoLimit(f"condition {cond.name!r} leaves no limit for {cfg.to_json()}")
    if len(found) > 1:
        raise MultipleLimits(
            f"condition {cond.name!r} leaves {len(found)} limits for {cfg.to_json()}", found)
    return found[0]


# -- audit -----------------------------------------------------------------------

# the corner a point sits at, the degenerate level of each line kind through it,
# and the boundary edges (as the coordinate that vanishes) leading away from it
_CORNER_SLIDES = {
    "Y1": {"1": "h", "2": "0", "edges": (1, 2), "axis": 0},
    "Y2": {"1": "0", "2": "h", "edges": (0, 2), "axis": 1},
    "Y3": {"1": "0", "2": "0", "edges": (0, 1), "axis": 2},
}


def _slide_range(levels: frozenset[int], start: str, H: int) -> range:
    if start == "0":
        return range(1, min(levels, default=H))
    return range(max(levels, default=0) + 1, H)


def corner_specializations(S: Subdivision, corner: str) -> list[tuple[Point, Subdivision]]:
    """Vertices a point at a corner can move to when lines slide out of that corner.

    New lines come out of the degenerate components through the corner and stop
    before the nearest parallel cut; the result must stay unbroken.  Returned
    vertices are new and sit next to the corner along a boundary edge.
    """
    info = _CORNER_SLIDES[corner]
    H = S.h
    opts1 = [None, *_slide_range(S.levels1, info["1"], H)]
    opts2 = [None, *_slide_range(S.levels2, info["2"], H)]
    old = set(S.vertices())
    out: dict[Point, Subdivision] = {}
    for a, b in itertools.product(opts1, opts2):
        if a is None and b is None:
            continue
        T = S.with_lines({a: 1} if a is not None else None, {b: 1} if b is not None else None)
        if not check_unbroken_subdivision(T):
            continue
        verts = T.vertices()
        for zero in info["edges"]:
            on_edge = [v for v in verts if v[zero] == 0]
            if not on_edge:
                continue
            nearest = max(on_edge, key=lambda v: v[info["axis"]])
            if nearest not in old:
                out.setdefault(nearest, T)
    return sorted(out.items())


@dataclass
class AuditReport:
    condition: str
    bounds: dict
    filter: str
    configurations: int = 0
    almost_proper: bool = True
    compatibility: bool = True
    witnesses: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"condition": self.condition, "bounds": dict(self.bounds),
                "filter": self.filter, "configurations": self.configurations,
                "almost_proper": self.almost_proper, "compatibility": self.compatibility,
                "witnesses": self.witnesses, "inconclusive": self.inconclusive}

    def to_text(self) -> str:
        lines = [f"condition: {self.condition}",
                 f"bounds: max_h={self.bounds['max_h']} max_m={self.bounds['max_m']}"
                 f" filter={self.filter}",
                 f"configurations checked: {self.configurations}",
                 f"almost proper: {'yes' if self.almost_proper else 'no'}",
                 f"tropically compatible: {'yes' if self.compatibility else 'no'}"]
        for w in self.witnesses:
            cfg = w["configuration"]
            desc = f"  [{w['kind']}] h={cfg['h']} vertices={cfg['vertices']}"
            if w["kind"] == "incompatible":
                lim = w["limit_configuration"]
                desc += (f": {w['corner']} point moves to {w['moved_to']} at h={w['height']},"
                         f" limit h={lim['h']} vertices={lim['vertices']} has cuts"
                         f" {w['limit_subdivision']} not refining {w['subdivision']}")
            lines.append(desc)
        if self.inconclusive:
            lines.append(f"inconclusive searches: {len(self.inconclusive)}")
        return "\n".join(lines)


def _survivors_or_none(cfg, cond, flt, max_n):
    try:
        return surviving_pairs(cfg, cond, flt, max_n), None
    except ConditionUndefined as exc:
        return None, str(exc)


def _audit_one(args) -> tuple[list, list]:
    cond, cfg, max_h, flt, max_n = args
    witnesses: list = []
    inconclusive: list = []
    try:
        found, undefined = _survivors_or_none(cfg, cond, flt, max_n)
    except SearchBoundExceeded as exc:
        return [], [{"configuration": cfg.to_json(), "needed": exc.needed}]
    if undefined is not None:
        return [{"kind": "undefined", "configuration": cfg.to_json(), "detail": undefined}], []
    if len(found) != 1:
        witnesses.append({"kind": "no-limit" if not found else "multiple-limits",
                          "configuration": cfg.to_json(),
                          "pairs": [p.subdivision.to_json() for p in found]})
    for generic in found:
        S = generic.subdivision
        for factor in range(1, max_h // cfg.h + 1):
            H, pts = cfg.scaled(factor)
            T = rescale(S, factor)
            done = set()
            for idx, v in enumerate(pts):
                corner = corner_name(v)
                if corner is None or corner in done:
                    continue
                done.add(corner)
                for target, slid in corner_specializations(T, corner):
                    moved = PointConfiguration(H, pts[:idx] + [target] + pts[idx + 1:])
                    try:
                        limits, undefined = _survivors_or_none(moved, cond, flt, max_n)
                    except SearchBoundExceeded as exc:
                        inconclusive.append({"configuration": moved.to_json(), "needed": exc.needed})
                        continue
                    for lim in limits or ():
                        if not refines_up_to_equivalence(lim.subdivision, S):
                            witnesses.append({
                                "kind": "incompatible",
                                "configuration": cfg.to_json(),
                                "subdivision": S.to_json(),
                                "corner": corner,
                                "height": H,
                                "moved_to": list(target),
                                "slid_subdivision": slid.to_json(),
                                "limit_configuration": moved.to_json(),
                                "limit_subdivision": lim.subdivision.to_json()})
    return witnesses, inconclusive


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("EXPDEG_WORKERS", "1")))
    except ValueError:
        return 1


def audit_condition(cond, max_h: int, max_m: int, filter: str = "lw",
                    workers: int | None = None, max_n: int | None = None) -> AuditReport:
    """Check almost-properness and tropical compatibility over all small configurations."""
    cond = get_condition(cond)
    if filter not in FILTERS:
        raise ValidationError(f"filter must be one of {FILTERS}")
    cfgs = list(enumerate_configurations(max_h, max_m))
    jobs = [(cond, c, max_h, filter, max_n) for c in cfgs]
    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_audit_one, jobs, chunksize=16))
    else:
        results = [_audit_one(j) for j in jobs]
    report = AuditReport(cond.name, {"max_h": max_h, "max_m": max_m}, filter, len(cfgs))
    for w, inc in results:
        report.witnesses.extend(w)
        report.inconclusive.extend(inc)
    report.almost_proper = not any(w["kind"] != "incompatible" for w in report.witnesses)
    report.compatibility = not any(w["kind"] == "incompatible" for w in report.witnesses)
    return report
