"""A reproducible corpus of small geometries for exhaustive checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .constructions import (
    FinitePoset,
    PointConfiguration,
    boolean_geometry,
    chain_geometry,
    convex_shelling,
    poset_shelling,
)
from .hopf import geometry_key
from .setfam import ConvexGeometry

P1 = PointConfiguration(
    tuple("abcde"),
    ((0, -1), (-1, 0), (0, 0), (1, 0), (0, 1)),
)


@dataclass(frozen=True)
class Entry:
    name: str
    geometry: ConvexGeometry
    family: str  # "poset", "points", "chain", "boolean"

    @property
    def size(self) -> int:
        return self.geometry.size


def labeled_posets(n: int):
    """Every partial order on n labelled elements (219 for n = 4)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    names = tuple(str(i + 1) for i in range(n))
    for choice in product((False, True), repeat=len(pairs)):
        below = [1 << i for i in range(n)]
        for (i, j), on in zip(pairs, choice):
            if on:
                below[j] |= 1 << i
        ok = True
        for j in range(n):
            for i in range(n):
                if i != j and below[j] >> i & 1:
                    if below[i] >> j & 1 or below[i] & ~below[j]:
                        ok = False
        if ok:
            yield FinitePoset(names, tuple(below))


def poset_entries(max_size: int = 4) -> list[Entry]:
    seen = set()
    out = []
    for n in range(max_size + 1):
        for p in labeled_posets(n):
            g = poset_shelling(p)
            k = geometry_key(g)
            if k in seen:
                continue
            seen.add(k)
            rel = ";".join(f"{a}<{b}" for b, d in zip(p.elems, p.below) for a in p.elems if a != b and p.leq(a, b))
            out.append(Entry(f"poset[{n}|{rel}]", g, "poset"))
    return out


def random_configuration(rng: random.Random, npoints: int, dim: int) -> PointConfiguration:
    """Small-grid rational points, so collinear and coplanar coincidences are common."""
    seen = set()
    coords = []
    while len(coords) < npoints:
        c = tuple(Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2))) for _ in range(dim))
        if c not in seen:
            seen.add(c)
            coords.append(c)
    return PointConfiguration(tuple(f"p{i}" for i in range(npoints)), tuple(coords))


def point_entries(count: int = 24, seed: int = 20231) -> list[Entry]:
    rng = random.Random(seed)
    out = [Entry("P1", convex_shelling(P1), "points")]
    for i in range(count):
        dim = 1 + i % 3
        npoints = rng.randint(3, 6)
        pc = random_configuration(rng, npoints, dim)
        out.append(Entry(f"points[{i}|d={dim}|n={npoints}]", convex_shelling(pc), "points"))
    return out


def standard_entries(max_n: int = 6) -> list[Entry]:
    out = [Entry(f"chain[{n}]", chain_geometry(n), "chain") for n in range(max_n + 1)]
    out += [Entry(f"boolean[{n}]", boolean_geometry(n), "boolean") for n in range(max_n + 1)]
    return out


def build_corpus() -> list[Entry]:
    return poset_entries() + point_entries() + standard_entries()


def distinct(entries: list[Entry]) -> list[Entry]:
    """First entry of each isomorphism class, in input order."""
    seen = set()
    out = []
    for e in entries:
        k = geometry_key(e.geometry)
        if k not in seen:
            seen.add(k)
            out.append(e)
    return out
