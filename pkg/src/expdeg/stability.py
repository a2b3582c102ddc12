"""Stabilizers, the GIT support criterion, and the LW / SWS / (alpha, beta) predicates."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import sympy

from .errors import (ConditionUndefined, SearchBoundExceeded, UnsupportedTarget,
                     ValidationError)
from .fibres import ExpandedFibre, Target, build_fibre, membership_at_level, subdivision_of
from .pairs import UnbrokenPair
from .strata import Stratum, base_action_weights
from .tropical import Point, Subdivision, completions

KINDS = ("1", "2")


def _target(t) -> Target:
    if isinstance(t, str):
        if t not in ("Y1", "Y2", "Y3"):
            raise ValidationError(f"unknown corner {t!r}")
        return t
    p = tuple(int(v) for v in t)
    if len(p) != 3:
        raise ValidationError(f"a bubble target needs three coordinates, got {t!r}")
    return p


@dataclass(frozen=True)
class SupportPoint:
    """One point of the support.

    ``fixed`` lists the line kinds ("1", "2") along which the point sits at a
    torus-fixed position; an empty set means a generic point.
    """

    target: Target
    fixed: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "target", _target(self.target))
        fixed = frozenset(self.fixed)
        if not fixed <= set(KINDS):
            raise ValidationError(f"fixed kinds must be among {KINDS}, got {sorted(fixed)}")
        object.__setattr__(self, "fixed", fixed)

    def to_json(self) -> dict:
        t = self.target if isinstance(self.target, str) else list(self.target)
        out = {"target": t}
        if self.fixed:
            out["fixed"] = sorted(self.fixed)
        return out


@dataclass(frozen=True)
class SupportAssignment:
    points: tuple[SupportPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(
            p if isinstance(p, SupportPoint) else SupportPoint(p) for p in self.points))

    @classmethod
    def generic(cls, targets: Iterable) -> SupportAssignment:
        return cls(tuple(SupportPoint(t) for t in targets))

    @property
    def m(self) -> int:
        return len(self.points)

    def targets(self) -> set:
        return {p.target for p in self.points}

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points]}


def support_from_json(obj: Mapping) -> SupportAssignment:
    return SupportAssignment(tuple(
        SupportPoint(p["target"] if isinstance(p["target"], str) else tuple(p["target"]),
                     frozenset(p.get("fixed", ())))
        for p in obj["points"]))


def _fibre(f) -> ExpandedFibre:
    if isinstance(f, Stratum):
        return build_fibre(f)
    if isinstance(f, ExpandedFibre) and f.stratum is not None:
        return f
    raise ValidationError("this operation needs a fibre built from a stratum")


def _check_targets(f: ExpandedFibre, Z: SupportAssignment) -> None:
    for p in Z.points:
        if not f.has_target(p.target):
            raise UnsupportedTarget(f"{p.target} is not a bubble or corner of this fibre")


def _index_components(f: ExpandedFibre) -> list[list[tuple[str, frozenset]]]:
    """For each k in [n], the (kind, members) of the components weighted by the k-th factor."""
    s = f.stratum
    n = s.n
    out = []
    for k in range(1, n + 1):
        comps = []
        if k <= len(f.type1_levels):
            comps.append(("1", membership_at_level(1, f.type1_levels[k - 1], f.h, f.points)))
        j = n + 1 - k
        if 1 <= j <= len(f.type2_levels):
            comps.append(("2", membership_at_level(2, f.type2_levels[j - 1], f.h, f.points)))
        out.append(comps)
    return out


@dataclass(frozen=True)
class StabilizerResult:
    rank: int
    basis: tuple[tuple[int, ...], ...]

    def __int__(self) -> int:
        return self.rank


def _integer_basis(vectors) -> tuple[tuple[int, ...], ...]:
    out = []
    for v in vectors:
        den = math.lcm(*[sympy.fraction(x)[1] for x in v]) if len(v) else 1
        out.append(tuple(int(x * den) for x in v))
    return tuple(out)


def stabilizer_rank(f, Z: SupportAssignment) -> StabilizerResult:
    """Rank (and a basis) of the one-parameter subgroups fixing the fibre with its support."""
    f = _fibre(f)
    _check_targets(f, Z)
    s = f.stratum
    n = s.n
    weights = base_action_weights(n)
    rows = [weights[i - 1] for i in range(1, n + 2) if i not in s.J]
    if s.J:
        for k, comps in enumerate(_index_components(f), start=1):
            for kind, members in comps:
                if any(p.target in members and kind not in p.fixed for p in Z.points):
                    row = [0] * n
                    row[k - 1] = 1
                    rows.append(row)
    if not rows:
        return StabilizerResult(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))
    kernel = sympy.Matrix(rows).nullspace()
    return StabilizerResult(len(kernel), _integer_basis(kernel))


def git_criterion(f, Z: SupportAssignment) -> bool:
    """Every torus factor must see a support point on one of its two components."""
    f = _fibre(f)
    _check_targets(f, Z)
    if not f.stratum.J:
        return True
    for comps in _index_components(f):
        if not any(p.target in members and kind not in p.fixed
                   for kind, members in comps for p in Z.points):
            return False
    return True


def is_lw_stable(f, Z: SupportAssignment) -> bool:
    return stabilizer_rank(f, Z).rank == 0


# -- SWS: search over representatives of a fibre class -----------------------

@dataclass(frozen=True)
class SWSResult:
    stable: bool
    witness: Stratum | None = None

    def __bool__(self) -> bool:
        return self.stable


PHASES = ("1", "both", "2")


def _chain_search(S: Subdivision, Z: SupportAssignment):
    """Shortest admissible sequence of (partial sum, phase) cells, or None.

    A representative of the class with n factors is a nondecreasing list of
    partial sums s_1..s_n, each carrying the phase of its index (A only, both,
    B only).  Interior sums must sit on the lines the phase asks for, every
    line must be hit, and each cell must see a support point (GIT).
    """
    h = S.h
    T1 = S.levels1
    T2 = frozenset(h - d for d in S.levels2)
    V = sorted(T1 | T2)
    P = [0] + V + [h]
    points = S.vertices()
    interior = set(V)

    def valid(s, ph):
        if s not in interior:
            return True
        return {0: s in T1, 1: s in T1 and s in T2, 2: s in T2}[ph]

    def sees(kind, level):
        members = membership_at_level(1 if kind == "1" else 2, level, h, points)
        return any(p.target in members and kind not in p.fixed for p in Z.points)

    def git_ok(s, ph):
        if ph in (0, 1) and sees("1", s):
            return True
        return ph in (1, 2) and sees("2", h - s)

    ok = {(i, ph): valid(P[i], ph) and git_ok(P[i], ph)
          for i in range(len(P)) for ph in range(3)}

    def covered(i, c1, c2):
        s = P[i]
        if s not in interior:
            return True
        return (s not in T1 or c1) and (s not in T2 or c2)

    last_interior = len(P) - 2  # index of the largest interior level, if any
    start = (-1, 0, True, True, False)
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        i, ph, c1, c2, hb = state
        if i >= 0 and hb and covered(i, c1, c2) and (not V or i >= last_interior):
            cells = []
            node = state
            while parent[node] is not None:
                cells.append((P[node[0]], PHASES[node[1]]))
                node = parent[node]
            return cells[::-1]
        if i >= 0 and not covered(i, c1, c2):
            nexts = [i]
        elif i < 0:
            nexts = [0, 1] if len(P) > 1 else [0]
        else:
            nexts = [i, i + 1] if i + 1 < len(P) else [i]
        for j in nexts:
            for nph in range(ph, 3):
                if not ok[(j, nph)]:
                    continue
                if j == i:
                    n1 = c1 or nph in (0, 1)
                    n2 = c2 or nph in (1, 2)
                else:
                    n1, n2 = nph in (0, 1), nph in (1, 2)
                nxt = (j, nph, n1, n2, hb or nph == 1)
                if nxt not in parent:
                    parent[nxt] = state
                    queue.append(nxt)
    return None


def stratum_from_cells(cells: Sequence[tuple[int, str]], h: int) -> Stratum:
    """Rebuild the representative stratum from its (partial sum, phase) cells."""
    n = len(cells)
    n1 = sum(ph == "1" for _, ph in cells)
    nb = sum(ph == "both" for _, ph in cells)
    n2 = n - n1 - nb
    pair = UnbrokenPair(n, frozenset(range(1, n1 + nb + 1)),
                        frozenset(range(n + 2 - (nb + n2), n + 2)))
    sums = [0] + [s for s, _ in cells] + [h]
    return Stratum(pair, tuple(b - a for a, b in zip(sums, sums[1:])))


def default_max_n(S: Subdivision) -> int:
    return 2 * (len(S.levels1) + len(S.levels2)) + 2


def is_sws_stable(S, Z: SupportAssignment, max_n: int | None = None) -> SWSResult:
    """Search representatives of the fibre class for one passing the GIT criterion.

    ``S`` is the class (a Subdivision, or a fibre whose subdivision is used).
    A class no stratum realizes exactly is searched through its completions.
    A definite False means no representative of any size works; when the
    smallest working one exceeds ``max_n`` the search is inconclusive.
    """
    if isinstance(S, ExpandedFibre):
        S = subdivision_of(S)
    for p in Z.points:
        if not isinstance(p.target, str) and not S.is_vertex(p.target):
            raise UnsupportedTarget(f"{p.target} is not a vertex of the subdivision")
    if max_n is None:
        max_n = default_max_n(S)
    best = None
    for T in completions(S):
        cells = _chain_search(T, Z)
        if cells is not None and (best is None or len(cells) < len(best[1])):
            best = (T, cells)
    if best is None:
        return SWSResult(False)
    T, cells = best
    if len(cells) > max_n:
        raise SearchBoundExceeded(
            f"smallest representative needs n={len(cells)} > {max_n}", needed=len(cells))
    witness = stratum_from_cells(cells, T.h)
    f = build_fibre(witness)
    assert subdivision_of(f).forget_multiplicities() == T.forget_multiplicities()
    assert git_criterion(f, Z)
    return SWSResult(True, witness)


# -- (alpha, beta) conditions --------------------------------------------------

def vertex_choice(S: Subdivision, v: Point) -> str | None:
    """Which cut kinds pass through v: "1", "2", "both" or None."""
    on1 = v[0] in S.levels1
    on2 = v[1] in S.levels2
    if on1 and on2:
        return "both"
    if on1:
        return "1"
    if on2:
        return "2"
    return None


@dataclass(frozen=True)
class FibreClass:
    """A subdivision class together with the vertices that carry support (anchors)."""

    subdivision: Subdivision
    anchors: frozenset[Point] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "anchors", frozenset(tuple(a) for a in self.anchors))

    def open_vertices(self) -> list[Point]:
        """Anchors inside the e3 = 0 edge, where three expansions are possible."""
        return sorted(a for a in self.anchors if a[2] == 0 and a[0] > 0 and a[1] > 0)

    def choices(self) -> dict[Point, str | None]:
        return {a: vertex_choice(self.subdivision, a) for a in sorted(self.anchors)}


ALPHA_RULES = ("none", "all", "all-attach-both")


@dataclass(frozen=True)
class StabilityCondition:
    """An (alpha, beta) datum.

    ``alpha`` is a rule id from ALPHA_RULES or a table mapping the number of
    open-edge anchors ("1", "2", ..., or "*" as default) to the expansion every
    such anchor must have ("1", "2", "both" or "any").  Classes breaking the
    rule are excluded.  ``beta`` labels every non-anchor bubble a tube.
    """

    name: str
    mode: str = "minimal"
    alpha: str | Mapping[str, str] = "none"
    beta: str = "non-anchor"

    def __post_init__(self):
        if self.mode not in ("minimal", "paired"):
            raise ValidationError(f"unknown enumeration mode {self.mode!r}")
        if isinstance(self.alpha, str):
            if self.alpha not in ALPHA_RULES:
                raise ValidationError(f"unknown alpha rule {self.alpha!r}")
        else:
            table = tuple(sorted((str(k), str(v)) for k, v in dict(self.alpha).items()))
            for k, v in table:
                if v not in ("1", "2", "both", "any"):
                    raise ValidationError(f"alpha table entry {k!r}: bad expansion {v!r}")
            object.__setattr__(self, "alpha", table)
        if self.beta != "non-anchor":
            raise ValidationError(f"unknown beta rule {self.beta!r}")

    def excludes(self, fc: FibreClass) -> bool:
        rule = self.alpha
        if rule == "none":
            return False
        if rule == "all":
            return True
        if rule == "all-attach-both":
            return any(k != "both" for k in fc.subdivision.attach_points().values())
        opened = fc.open_vertices()
        if not opened:
            return False
        table = dict(rule)
        want = table.get(str(len(opened)), table.get("*"))
        if want is None:
            raise ConditionUndefined(
                f"condition {self.name!r} has no rule for {len(opened)} open-edge anchors")
        if want == "any":
            return False
        return any(vertex_choice(fc.subdivision, v) != want for v in opened)

    def is_tube(self, fc: FibreClass, bubble: Point) -> bool:
        return tuple(bubble) not in fc.anchors

    def to_json(self) -> dict:
        alpha = self.alpha if isinstance(self.alpha, str) else dict(self.alpha)
        return {"name": self.name, "mode": self.mode, "alpha": alpha, "beta": self.beta}


def condition_from_json(obj: Mapping) -> StabilityCondition:
    return StabilityCondition(obj["name"], obj.get("mode", "minimal"),
                              obj.get("alpha", "none"), obj.get("beta", "non-anchor"))


BUILTIN_CONDITIONS: dict[str, StabilityCondition] = {
    c.name: c for c in (
        StabilityCondition("ct-canonical", "paired", "all-attach-both"),
        StabilityCondition("pure-1-preference", "minimal", {"*": "1"}),
        StabilityCondition("pure-2-preference", "minimal", {"*": "2"}),
        StabilityCondition("one-pure-1-else-pure-2", "minimal", {"1": "1", "*": "2"}),
        StabilityCondition("exclude-nothing", "minimal", "none"),
        StabilityCondition("exclude-all", "minimal", "all"),
    )
}


def get_condition(name_or_obj) -> StabilityCondition:
    if isinstance(name_or_obj, StabilityCondition):
        return name_or_obj
    if isinstance(name_or_obj, str):
        try:
            return BUILTIN_CONDITIONS[name_or_obj]
        except KeyError:
            raise ValidationError(f"no built-in condition named {name_or_obj!r}") from None
    return condition_from_json(name_or_obj)


def is_ab_stable(f, Z: SupportAssignment, cond: StabilityCondition) -> bool:
    """Class not excluded by alpha, and a bubble is empty exactly when beta calls it a tube.

    ``f`` may be a FibreClass; for a fibre or subdivision the anchors are taken
    to be the bubbles that carry support.
    """
    if isinstance(f, FibreClass):
        fc = f
    else:
        S = f if isinstance(f, Subdivision) else subdivision_of(f)
        fc = FibreClass(S, frozenset(t for t in Z.targets() if not isinstance(t, str)))
    if cond.excludes(fc):
        return False
    occupied = Z.targets()
    for v in fc.subdivision.vertices():
        if (v in occupied) == cond.is_tube(fc, v):
            return False
    return True
