"""Convex shellings, poset shellings, chain and Boolean geometries, over exact rationals."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .setfam import ConvexGeometry, GroundSet, ParseError, bits, validate_family

Point = tuple[Fraction, ...]


class DimensionMismatch(ValueError):
    pass


class DuplicatePoints(ValueError):
    pass


# -- exact linear algebra ----------------------------------------------------


def rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Rows are scaled to a common denominator first so every pivot step stays
    in the integers.
    """
    mat = []
    for row in rows:
        row = [Fraction(v) for v in row]
        den = math.lcm(*(v.denominator for v in row)) if row else 1
        mat.append([int(v * den) for v in row])
    if not mat:
        return 0
    m, n = len(mat), len(mat[0])
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                mat[i][j] = (mat[r][c] * mat[i][j] - mat[i][c] * mat[r][j]) // prev
            mat[i][c] = 0
        prev = mat[r][c]
        r += 1
        if r == m:
            break
    return r


def solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of ``a x = b`` with full column rank, or None if inconsistent.

    ``a`` may have more rows than columns; extra equations are checked.
    """
    m, n = len(a), len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix does not have full column rank")
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        aug[r] = [v / p for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        r += 1
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    return [aug[i][n] for i in range(n)]


def affinely_independent(points: Sequence[Point]) -> bool:
    if len(points) <= 1:
        return True
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return rank(diffs) == len(diffs)


def barycentric(p: Point, simplex: Sequence[Point]) -> list[Fraction] | None:
    """Affine coordinates of ``p`` w.r.t. affinely independent ``simplex``, if ``p`` is in its span."""
    d = len(p)
    rows = [[q[i] for q in simplex] for i in range(d)]
    rows.append([Fraction(1)] * len(simplex))
    return solve(rows, list(p) + [Fraction(1)])


def point_in_hull(p: Sequence, xs: Sequence[Sequence]) -> bool:
    """Exact test of ``p`` in conv(xs) by Caratheodory enumeration.

    Tries every affinely independent subset of at most d+1 points and checks
    for nonnegative barycentric coordinates.
    """
    p = tuple(Fraction(v) for v in p)
    pts = [tuple(Fraction(v) for v in q) for q in xs]
    d = len(p)
    for q in pts:
        if len(q) != d:
            raise DimensionMismatch(f"point of dimension {len(q)} against {d}")
    for k in range(1, min(d + 1, len(pts)) + 1):
        for simplex in combinations(pts, k):
            if not affinely_independent(simplex):
                continue
            lam = barycentric(p, simplex)
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


# -- point configurations ----------------------------------------------------


@dataclass(frozen=True)
class PointConfiguration:
    labels: tuple[str, ...]
    coords: tuple[Point, ...]

    def __post_init__(self):
        coords = tuple(tuple(Fraction(v) for v in c) for c in self.coords)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "coords", coords)
        if len(self.labels) != len(coords):
            raise ValueError("labels and coordinates differ in length")
        dims = {len(c) for c in coords}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
        if dims and dims.pop() < 1:
            raise DimensionMismatch("points need dimension at least 1")
        seen = {}
        for lab, c in zip(self.labels, coords):
            if c in seen:
                raise DuplicatePoints(f"{seen[c]} and {lab} coincide at {_fmt_point(c)}")
            seen[c] = lab

    @property
    def dim(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    def transform(self, matrix, offset) -> "PointConfiguration":
        """Image under ``x -> matrix @ x + offset``."""
        out = []
        for c in self.coords:
            out.append(tuple(sum(Fraction(m) * v for m, v in zip(row, c)) + Fraction(o)
                             for row, o in zip(matrix, offset)))
        return PointConfiguration(self.labels, tuple(out))


def _fmt_point(c):
    return "(" + ", ".join(str(v) for v in c) + ")"


def convex_shelling(pc: PointConfiguration) -> ConvexGeometry:
    """Closed sets are the X with conv(X) meeting the configuration only in X."""
    n = len(pc.labels)
    family = []
    for x in range(1 << n):
        inside = [pc.coords[i] for i in bits(x)]
        if not any(point_in_hull(pc.coords[i], inside) for i in range(n) if not x >> i & 1):
            family.append(x)
    return validate_family(GroundSet(pc.labels), family)


def convex_position_points(n: int) -> PointConfiguration:
    """n rational points on the unit circle, ((1-t^2), 2t)/(1+t^2) for t = 0..n-1."""
    coords = []
    for t in range(n):
        t = Fraction(t)
        coords.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    return PointConfiguration(tuple(f"p{i + 1}" for i in range(n)), tuple(coords))


# -- posets ------------------------------------------------------------------


@dataclass(frozen=True)
class FinitePoset:
    """``below[i]`` is the bitmask of elements ``<= elems[i]`` (reflexive)."""

    elems: tuple[str, ...]
    below: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elems", tuple(self.elems))
        object.__setattr__(self, "below", tuple(self.below))
        n = len(self.elems)
        if len(self.below) != n:
            raise ValueError("order relation size does not match element count")
        for i, d in enumerate(self.below):
            if not d >> i & 1:
                raise ValueError(f"order is not reflexive at {self.elems[i]}")
            for j in bits(d):
                if j != i and self.below[j] >> i & 1:
                    raise ValueError(f"order is not antisymmetric: {self.elems[i]}, {self.elems[j]}")
                if self.below[j] & ~d:
                    raise ValueError(f"order is not transitive through {self.elems[j]}")

    @classmethod
    def from_relations(cls, elems: Sequence[str], pairs: Sequence[tuple[str, str]]) -> "FinitePoset":
        """Order generated by ``a < b`` pairs (covers or any generating set)."""
        elems = tuple(elems)
        idx = {e: i for i, e in enumerate(elems)}
        below = [1 << i for i in range(len(elems))]
        for a, b in pairs:
            below[idx[b]] |= 1 << idx[a]
        # transitive closure, Warshall style on bitmasks
        for k in range(len(elems)):
            for i in range(len(elems)):
                if below[i] >> k & 1:
                    below[i] |= below[k]
        return cls(elems, tuple(below))

    def leq(self, a: str, b: str) -> bool:
        return bool(self.below[self.elems.index(b)] >> self.elems.index(a) & 1)


def poset_shelling(p: FinitePoset) -> ConvexGeometry:
    """Closed sets are the downsets of ``p``."""
    n = len(p.elems)
    family = [
        x for x in range(1 << n)
        if all(p.below[i] & ~x == 0 for i in bits(x))
    ]
    return validate_family(GroundSet(p.elems), family)


def boolean_poset_of_subsets(k: int) -> FinitePoset:
    """Subsets of {1..k} ordered by inclusion, labelled like ``s12`` (``s`` for the empty set)."""
    subsets = list(range(1 << k))
    names = tuple("s" + "".join(str(i + 1) for i in bits(s)) for s in subsets)
    below = tuple(
        sum(1 << t for t in subsets if t & s == t) for s in subsets
    )
    return FinitePoset(names, below)


# -- chains and Boolean geometries --------------------------------------------


def chain_geometry(n: int) -> ConvexGeometry:
    """Ground [n] with closed sets the initial segments [k] and the empty set."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    ground = GroundSet(tuple(str(i + 1) for i in range(n)))
    return validate_family(ground, [(1 << k) - 1 for k in range(n + 1)])


def boolean_geometry(n: int) -> ConvexGeometry:
    if n < 0:
        raise ValueError("n must be nonnegative")
    ground = GroundSet(tuple(str(i + 1) for i in range(n)))
    return validate_family(ground, range(1 << n))


def point_geometry() -> ConvexGeometry:
    return chain_geometry(1)


def empty_geometry() -> ConvexGeometry:
    return chain_geometry(0)


# -- file formats --------------------------------------------------------------

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(text)


def parse_points(text: str, source: str = "<string>") -> PointConfiguration:
    if text and not text.endswith("\n"):
        raise ParseError(source, text.count("\n") + 1, "missing trailing newline")
    labels, coords = [], []
    for lineno, raw in enumerate(text.split("\n")[:-1], start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, *nums = line.split()
        if not nums:
            raise ParseError(source, lineno, "point has no coordinates")
        try:
            coords.append(tuple(parse_rational(v) for v in nums))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(source, lineno, str(exc)) from None
        labels.append(label)
        try:
            PointConfiguration(tuple(labels), tuple(coords))
            GroundSet(tuple(labels))
        except ValueError as exc:
            raise ParseError(source, lineno, str(exc)) from None
    return PointConfiguration(tuple(labels), tuple(coords))


def format_points(pc: PointConfiguration) -> str:
    return "".join(f"{lab} " + " ".join(str(v) for v in c) + "\n" for lab, c in zip(pc.labels, pc.coords))


def parse_poset(text: str, source: str = "<string>") -> FinitePoset:
    if text and not text.endswith("\n"):
        raise ParseError(source, text.count("\n") + 1, "missing trailing newline")
    elems = None
    pairs = []
    for lineno, raw in enumerate(text.split("\n")[:-1], start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if elems is None:
            if not line.startswith("elems:"):
                raise ParseError(source, lineno, "expected 'elems:' header")
            elems = tuple(line[len("elems:"):].split())
            try:
                GroundSet(elems)
            except ValueError as exc:
                raise ParseError(source, lineno, str(exc)) from None
            continue
        parts = [p.strip() for p in line.split("<")]
        if len(parts) != 2 or not all(p in elems for p in parts):
            raise ParseError(source, lineno, f"expected 'a < b' over known elements, got {line!r}")
        pairs.append((parts[0], parts[1]))
    if elems is None:
        raise ParseError(source, 1, "missing 'elems:' header")
    try:
        return FinitePoset.from_relations(elems, pairs)
    except ValueError as exc:
        raise ParseError(source, 1, str(exc)) from None
