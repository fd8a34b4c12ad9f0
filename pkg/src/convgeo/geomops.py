"""Minors, products, and recovering a geometry from a meet-distributive lattice."""

from __future__ import annotations

from .lattice import FiniteLattice, is_meet_distributive
from .setfam import ConvexGeometry, GroundSet, bits, validate_family


class NotClosed(ValueError):
    pass


class NotNested(ValueError):
    pass


class NotMeetDistributive(ValueError):
    pass


def compress(mask: int, support: int) -> int:
    """Re-index the bits of ``mask`` that lie in ``support`` to 0, 1, 2, ..."""
    out = 0
    for k, i in enumerate(bits(support)):
        if mask >> i & 1:
            out |= 1 << k
    return out


def minor(g: ConvexGeometry, a: int, b: int) -> ConvexGeometry:
    """Geometry on ``b - a`` with closed sets ``X - a`` for closed ``a <= X <= b``.

    The result is passed through validate_family, so a malformed minor raises
    AxiomViolation instead of being returned.
    """
    if not g.is_closed(a):
        raise NotClosed(f"lower set {g.ground.format(a)} is not closed")
    if not g.is_closed(b):
        raise NotClosed(f"upper set {g.ground.format(b)} is not closed")
    if a & ~b:
        raise NotNested(f"{g.ground.format(a)} is not contained in {g.ground.format(b)}")
    support = b & ~a
    ground = GroundSet(g.ground.labels(support))
    family = [compress(x & ~a, support) for x in g.closed if x & a == a and x & ~b == 0]
    return validate_family(ground, family)


def product_geometry(g1: ConvexGeometry, g2: ConvexGeometry) -> ConvexGeometry:
    """Disjoint-union geometry; labels become ``1.<label>`` and ``2.<label>``."""
    names = tuple(f"1.{x}" for x in g1.ground) + tuple(f"2.{x}" for x in g2.ground)
    shift = g1.size
    closed = tuple(x1 | (x2 << shift) for x1 in g1.closed for x2 in g2.closed)
    return ConvexGeometry(GroundSet(names), closed)


def join_irreducibles(l: FiniteLattice) -> tuple[int, ...]:
    return tuple(x for x in range(l.n) if len(l.lower[x]) == 1)


def geometry_from_lattice(l: FiniteLattice) -> ConvexGeometry:
    """Ground set = join-irreducibles; ``x`` becomes the set of join-irreducibles below it."""
    if not is_meet_distributive(l):
        raise NotMeetDistributive("lattice is not meet-distributive")
    irr = join_irreducibles(l)
    ground = GroundSet(tuple(f"j{x}" for x in irr))
    family = []
    for x in range(l.n):
        m = 0
        for k, j in enumerate(irr):
            if l.leq(j, x):
                m |= 1 << k
        family.append(m)
    return validate_family(ground, family)
