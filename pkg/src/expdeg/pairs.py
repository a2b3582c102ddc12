"""Unbroken index pairs (A, B, n), their block embeddings and common refinements.

An index ``i`` of ``[n+1] = {1, ..., n+1}`` belongs to exactly one of three
classes, read left to right: only in A, in both, only in B.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ClassOverflow, ValidationError


class Decoration(enum.Enum):
    ONLY_A = "A\\B"
    BOTH = "A&B"
    ONLY_B = "B\\A"

    @property
    def in_a(self) -> bool:
        return self is not Decoration.ONLY_B

    @property
    def in_b(self) -> bool:
        return self is not Decoration.ONLY_A

    @property
    def rank(self) -> int:
        return _ORDER[self]


_ORDER = {Decoration.ONLY_A: 0, Decoration.BOTH: 1, Decoration.ONLY_B: 2}


def _check_index_set(name: str, s: Iterable[int], n: int) -> frozenset[int]:
    try:
        items = frozenset(int(i) for i in s)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a collection of integers") from exc
    if not items:
        raise ValidationError(f"{name} is empty")
    bad = sorted(i for i in items if i < 1 or i > n + 1)
    if bad:
        raise ValidationError(f"{name} has indices outside [1, {n + 1}]: {bad}")
    return items


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    return n


def is_unbroken(A: Iterable[int], B: Iterable[int], n: int) -> bool:
    """Return whether (A, B) is an unbroken pair of subsets of [n+1].

    Malformed input (empty sets, out-of-range indices, bad n) raises
    ``ValidationError`` instead of returning False.
    """
    n = _check_n(n)
    a = _check_index_set("A", A, n)
    b = _check_index_set("B", B, n)
    la, lb = len(a), len(b)
    if a != frozenset(range(1, la + 1)):
        return False
    if b != frozenset(range(n + 2 - lb, n + 2)):
        return False
    # 1 in A only, n+1 in B only, and together they cover [n+1]
    return la <= n and lb <= n and la + lb >= n + 1


@dataclass(frozen=True, order=True)
class UnbrokenPair:
    n: int
    A: frozenset[int]
    B: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))
        object.__setattr__(self, "B", frozenset(self.B))
        if not is_unbroken(self.A, self.B, self.n):
            raise ValidationError(
                f"not an unbroken pair: A={sorted(self.A)}, B={sorted(self.B)}, n={self.n}")

    @classmethod
    def from_sizes(cls, only_a: int, both: int, only_b: int) -> UnbrokenPair:
        """Build the pair whose three classes have the given sizes."""
        if only_a < 1 or only_b < 1 or both < 0:
            raise ValidationError("class sizes must be (>=1, >=0, >=1)")
        n = only_a + both + only_b - 1
        A = range(1, only_a + both + 1)
        B = range(only_a + 1, n + 2)
        return cls(n, frozenset(A), frozenset(B))

    @classmethod
    def standard(cls, n: int) -> UnbrokenPair:
        """The pair A = {1..n}, B = {2..n+1}."""
        return cls(n, frozenset(range(1, n + 1)), frozenset(range(2, n + 2)))

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def class_sizes(self) -> tuple[int, int, int]:
        both = len(self.A & self.B)
        return len(self.A) - both, both, len(self.B) - both

    def decoration(self, i: int) -> Decoration:
        if i in self.A:
            return Decoration.BOTH if i in self.B else Decoration.ONLY_A
        if i in self.B:
            return Decoration.ONLY_B
        raise ValidationError(f"index {i} outside [1, {self.n + 1}]")

    def indices(self, cls_: Decoration) -> list[int]:
        return [i for i in range(1, self.n + 2) if self.decoration(i) is cls_]

    def thresholds(self) -> tuple[float, float]:
        """Reals (a, b) with 1 < b < a < n+1, A = [1, a) and B = (b, n+1]."""
        la, lb = len(self.A), len(self.B)
        b = self.n + 1 - lb + 0.25
        a = la + 0.75
        return a, b

    def to_json(self) -> dict:
        return {"n": self.n, "A": sorted(self.A), "B": sorted(self.B)}


@dataclass(frozen=True)
class IndexEmbedding:
    """Order-preserving insertion of one pair's indices into a larger pair's.

    Target positions outside the image carry the basis value 1.
    """

    source: UnbrokenPair
    target: UnbrokenPair
    mapping: tuple[int, ...]  # mapping[i-1] is the image of source index i

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def as_dict(self) -> dict[int, int]:
        return {i + 1: j for i, j in enumerate(self.mapping)}

    def padding(self) -> list[int]:
        image = set(self.mapping)
        return [j for j in range(1, self.target.size + 1) if j not in image]

    def push(self, values: tuple) -> tuple:
        """Send a base point of the source to the target, padding with 1."""
        if len(values) != self.source.size:
            raise ValidationError("base point has the wrong length")
        out = [1] * self.target.size
        for i, v in enumerate(values):
            out[self.mapping[i] - 1] = v
        return tuple(out)

    def then(self, other: IndexEmbedding) -> IndexEmbedding:
        """Composite embedding: first ``self`` then ``other``."""
        if other.source != self.target:
            raise ValidationError("embeddings do not compose")
        return IndexEmbedding(self.source, other.target,
                              tuple(other(j) for j in self.mapping))


def embed_pair(small: UnbrokenPair, big: UnbrokenPair) -> IndexEmbedding:
    """Block embedding placing each class of ``small`` at the front of the
    matching class of ``big``."""
    mapping: dict[int, int] = {}
    for cls_ in Decoration:
        src = small.indices(cls_)
        dst = big.indices(cls_)
        if len(src) > len(dst):
            raise ClassOverflow(
                f"class {cls_.value} has {len(src)} indices but the target only {len(dst)}")
        mapping.update(zip(src, dst))
    return IndexEmbedding(small, big, tuple(mapping[i] for i in range(1, small.size + 1)))


def common_refinement(p1: UnbrokenPair, p2: UnbrokenPair) -> UnbrokenPair:
    """Smallest pair into which both inputs embed."""
    sizes = [max(x, y) for x, y in zip(p1.class_sizes, p2.class_sizes)]
    return UnbrokenPair.from_sizes(*sizes)


def pair_from_json(obj: Mapping) -> UnbrokenPair:
    return UnbrokenPair(obj["n"], frozenset(obj["A"]), frozenset(obj["B"]))


def all_pairs(n: int) -> list[UnbrokenPair]:
    """Every unbroken pair for the given n."""
    out = []
    for la in range(1, n + 1):
        for lb in range(n + 1 - la, n + 1):
            out.append(UnbrokenPair(n, frozenset(range(1, la + 1)),
                                    frozenset(range(n + 2 - lb, n + 2))))
    return out
