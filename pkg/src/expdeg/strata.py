"""Base strata: zero patterns with valuations, their normal forms and equivalence."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DimensionMismatch, ValidationError
from .pairs import Decoration, UnbrokenPair, all_pairs, pair_from_json

D = Decoration


def is_monotone_pattern(decorations: Sequence[Decoration]) -> bool:
    """Whether the sequence reads (A\\B)* (A&B)* (B\\A)*."""
    ranks = [d.rank for d in decorations]
    return all(x <= y for x, y in zip(ranks, ranks[1:]))


@dataclass(frozen=True)
class Stratum:
    """A base point class: the pair, the vanishing indices and their valuations.

    ``g`` has one entry per index of [n+1]; ``g[i-1] > 0`` exactly when i is in J.
    """

    pair: UnbrokenPair
    g: tuple[int, ...]
    labels: Mapping[int, str] | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        g = tuple(self.g)
        object.__setattr__(self, "g", g)
        if len(g) != self.pair.size:
            raise ValidationError(f"g must have length n+1 = {self.pair.size}, got {len(g)}")
        for i, v in enumerate(g, start=1):
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValidationError(f"g_{i} must be a non-negative integer, got {v!r}")
        if self.labels:
            bad = [i for i in self.labels if not 1 <= i <= self.pair.size or g[i - 1] > 0]
            if bad:
                raise ValidationError(f"coefficient labels only sit on nonzero directions: {bad}")

    @classmethod
    def from_zeros(cls, pair: UnbrokenPair, J: Iterable[int], g: Sequence[int]) -> Stratum:
        """Build a stratum from J and a full valuation vector, checking they agree."""
        J = frozenset(J)
        s = cls(pair, tuple(g))
        if s.J != J:
            raise ValidationError(f"valuations are positive exactly on {sorted(s.J)}, not on J={sorted(J)}")
        return s

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def J(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.g, start=1) if v > 0)

    @property
    def zeros(self) -> list[int]:
        return sorted(self.J)

    @property
    def r(self) -> int:
        return len(self.J)

    @property
    def h(self) -> int:
        return sum(self.g)

    @property
    def decorations(self) -> tuple[Decoration, ...]:
        return tuple(self.pair.decoration(i) for i in self.zeros)

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(self.g[i - 1] for i in self.zeros)

    def partial_sums(self) -> list[int]:
        """[s_0, s_1, ..., s_{n+1}] with s_k the sum of the first k valuations."""
        return list(itertools.accumulate(self.g, initial=0))

    def to_json(self) -> dict:
        return {"pair": self.pair.to_json(), "J": self.zeros, "g": list(self.g)}


def stratum_from_json(obj: Mapping) -> Stratum:
    return Stratum.from_zeros(pair_from_json(obj["pair"]), obj["J"], obj["g"])


@dataclass(frozen=True)
class NormalizedStratum:
    decorations: tuple[Decoration, ...]
    valuations: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "decorations", tuple(self.decorations))
        object.__setattr__(self, "valuations", tuple(self.valuations))
        if len(self.decorations) != len(self.valuations):
            raise ValidationError("decorations and valuations differ in length")
        if not is_monotone_pattern(self.decorations):
            raise ValidationError("decorations break the unbroken pattern")

    @property
    def r(self) -> int:
        return len(self.decorations)

    def to_json(self) -> dict:
        return {"decorations": [d.value for d in self.decorations],
                "valuations": list(self.valuations)}


def _demote_first(decs: tuple[Decoration, ...]) -> tuple[Decoration, ...]:
    if decs and decs[0] is D.BOTH:
        return (D.ONLY_A,) + decs[1:]
    return decs


def _demote_last(decs: tuple[Decoration, ...]) -> tuple[Decoration, ...]:
    if decs and decs[-1] is D.BOTH:
        return decs[:-1] + (D.ONLY_B,)
    return decs


def normal_forms(s: Stratum) -> tuple[NormalizedStratum, NormalizedStratum]:
    """The two normal forms of a stratum's zero pattern.

    The first demotes a leading A&B zero to A\\B, the second a trailing A&B
    zero to B\\A.
    """
    decs, vals = s.decorations, s.valuations
    return (NormalizedStratum(_demote_first(decs), vals),
            NormalizedStratum(_demote_last(decs), vals))


def _neighbours(decs: tuple[Decoration, ...]) -> Iterator[tuple[Decoration, ...]]:
    # sequences sharing a normal form with decs differ only in the end entries
    if not decs:
        return
    head = _demote_first(decs)
    for first in (D.ONLY_A, D.BOTH):
        cand = (first,) + decs[1:]
        if cand != decs and _demote_first(cand) == head and is_monotone_pattern(cand):
            yield cand
    tail = _demote_last(decs)
    for last in (D.BOTH, D.ONLY_B):
        cand = decs[:-1] + (last,)
        if cand != decs and _demote_last(cand) == tail and is_monotone_pattern(cand):
            yield cand


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    chain: tuple[NormalizedStratum, ...] = ()

    def __bool__(self) -> bool:
        return self.equivalent


def strata_equivalent(s1: Stratum, s2: Stratum) -> Equivalence:
    """Decide whether two strata are related by a chain of shared normal forms.

    The witness chain lists the decoration sequences visited, from s1 to s2.
    """
    if s1.n != s2.n:
        raise DimensionMismatch(f"n differs: {s1.n} vs {s2.n}")
    if s1.r != s2.r:
        raise DimensionMismatch(f"number of zeros differs: {s1.r} vs {s2.r}")
    if s1.valuations != s2.valuations:
        return Equivalence(False)
    start, goal = s1.decorations, s2.decorations
    parent: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            break
        for nxt in _neighbours(cur):
            if nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)
    if goal not in parent:
        return Equivalence(False)
    path = []
    node = goal
    while node is not None:
        path.append(NormalizedStratum(node, s1.valuations))
        node = parent[node]
    return Equivalence(True, tuple(reversed(path)))


def base_action_weights(n: int) -> list[list[int]]:
    """Torus weights on the base directions: one row per t_i, one column per factor."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    rows = []
    for k in range(1, n + 2):
        row = [0] * n
        if k <= n:
            row[k - 1] -= 1
        if k >= 2:
            row[k - 2] += 1
        rows.append(row)
    return rows


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Positive integer tuples of the given length summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cut + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def enumerate_strata(n: int, max_h: int, include_empty: bool = True,
                     exact_h: int | None = None) -> Iterator[Stratum]:
    """All strata over all unbroken pairs for this n with height at most max_h."""
    for pair in all_pairs(n):
        yield from enumerate_strata_of(pair, max_h, include_empty, exact_h)


def enumerate_strata_of(pair: UnbrokenPair, max_h: int, include_empty: bool = True,
                        exact_h: int | None = None) -> Iterator[Stratum]:
    size = pair.size
    for r in range(0, size + 1):
        if r == 0:
            if include_empty and exact_h in (None, 0):
                yield Stratum(pair, (0,) * size)
            continue
        heights = [exact_h] if exact_h is not None else range(r, max_h + 1)
        for J in itertools.combinations(range(size), r):
            for h in heights:
                if h < r:
                    continue
                for vals in _compositions(h, r):
                    g = [0] * size
                    for i, v in zip(J, vals):
                        g[i] = v
                    yield Stratum(pair, tuple(g))
