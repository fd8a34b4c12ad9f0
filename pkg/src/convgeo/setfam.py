"""Ground sets, closed-set families and the closure operator they induce.

Subsets of a ground set are plain ``int`` bitmasks over the ground-set
indices: bit ``i`` set means ``ground.names[i]`` is a member.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

MAX_GROUND = 16


class ParseError(ValueError):
    """Malformed text input; carries the source name and 1-based line."""

    def __init__(self, source: str, line: int, msg: str):
        self.source = source
        self.line = line
        self.msg = msg
        super().__init__(f"{source}:{line}: {msg}")


class AxiomViolation(ValueError):
    def __init__(self, axiom: str, witness: tuple[int, ...], ground: "GroundSet"):
        self.axiom = axiom
        self.witness = witness
        self.ground = ground
        shown = " ".join(ground.format(m) for m in witness)
        super().__init__(f"axiom {axiom} violated; witness: {shown}")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    # one pass over the binary string beats repeated shifts on wide masks
    return (i for i, c in enumerate(reversed(bin(mask)[2:])) if c == "1")


def mask_order(mask: int) -> tuple[int, int]:
    return popcount(mask), mask


def lex_order(mask: int) -> tuple[int, tuple[int, ...]]:
    """(cardinality, ground-order lexicographic) sort key used by the text format."""
    return popcount(mask), tuple(bits(mask))


@dataclass(frozen=True)
class GroundSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(names) > MAX_GROUND:
            raise ValueError(f"ground set larger than {MAX_GROUND} elements")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate labels in ground set {names}")
        for name in names:
            if not isinstance(name, str) or not name or any(c.isspace() or c == "," for c in name):
                raise ValueError(f"invalid label {name!r}")
            if name == "{}" or name.startswith("#"):
                raise ValueError(f"reserved label {name!r}")

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            try:
                m |= 1 << self.index[lab]
            except KeyError:
                raise KeyError(f"unknown label {lab!r}") from None
        return m

    def labels(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[i] for i in bits(mask))

    def format(self, mask: int) -> str:
        """Comma-separated labels in ground order, ``{}`` for the empty set."""
        return ",".join(self.labels(mask)) if mask else "{}"

    def parse(self, text: str) -> int:
        text = text.strip()
        if text in ("{}", ""):
            return 0
        return self.mask(part.strip() for part in text.split(","))


@dataclass(frozen=True)
class ConvexGeometry:
    """A ground set with its family of closed sets.

    Build instances through :func:`validate_family`; the constructor itself
    only normalizes the ordering of ``closed`` and does not check axioms.
    """

    ground: GroundSet
    closed: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "closed", tuple(sorted(set(self.closed), key=mask_order)))

    @property
    def size(self) -> int:
        return len(self.ground)

    @cached_property
    def closed_set(self) -> frozenset[int]:
        return frozenset(self.closed)

    @cached_property
    def position(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.closed)}

    def is_closed(self, mask: int) -> bool:
        return mask in self.closed_set

    def __str__(self):
        return format_geometry(self)


def validate_family(ground: GroundSet, family: Iterable[int]) -> ConvexGeometry:
    """Check the three set-family axioms and return the geometry.

    Axioms are checked in order i, ii, iii; the first failure raises
    :class:`AxiomViolation` with the least offending mask(s) as witness.
    The empty ground set with family ``{0}`` is accepted.
    """
    fam = set(family)
    if not fam:
        raise ValueError("family is empty")
    full = ground.full
    for m in fam:
        if m < 0 or m & ~full:
            raise ValueError(f"mask {m:#x} references indices outside the ground set")

    if 0 not in fam:
        raise AxiomViolation("i", (0,), ground)
    if full not in fam:
        raise AxiomViolation("i", (full,), ground)

    ordered = sorted(fam, key=mask_order)
    for i, x in enumerate(ordered):
        for y in ordered[i + 1:]:
            if x & y not in fam:
                raise AxiomViolation("ii", (x, y), ground)

    for x in ordered:
        if x == full:
            continue
        if not any(x | (1 << z) in fam for z in bits(full & ~x)):
            raise AxiomViolation("iii", (x,), ground)

    return ConvexGeometry(ground, tuple(ordered))


def closure(g: ConvexGeometry, a: int) -> int:
    """Intersection of all closed supersets of ``a``."""
    out = g.ground.full
    for x in g.closed:
        if x & a == a:
            out &= x
    return out


def closure_table(g: ConvexGeometry) -> list[int]:
    """``closure`` evaluated on every subset, indexed by mask."""
    full = g.ground.full
    table = [full] * (full + 1)
    # each closed set lowers the closure of all its subsets
    for x in g.closed:
        sub = x
        while True:
            table[sub] &= x
            if sub == 0:
                break
            sub = (sub - 1) & x
    return table


@dataclass(frozen=True)
class Counterexample:
    """A triple (A, x, y) breaking antiexchange. Falsy, so it reads as a failed check."""

    a: int
    x: int
    y: int

    def __bool__(self):
        return False


def check_antiexchange(g: ConvexGeometry) -> bool | Counterexample:
    """Exhaustive antiexchange test over all A and distinct x, y outside cl(A).

    Returns True, or the first counterexample found in (A, x, y) order.
    """
    cl = closure_table(g)
    n = g.size
    for a in range(g.ground.full + 1):
        ca = cl[a]
        for x in range(n):
            bx = 1 << x
            if ca & bx:
                continue
            cax = cl[a | bx]
            for y in range(n):
                by = 1 << y
                if y == x or not (cax & by) or (ca & by):
                    continue
                if cl[a | by] & bx:
                    return Counterexample(a, x, y)
    return True


def format_geometry(g: ConvexGeometry) -> str:
    lines = ["ground: " + " ".join(g.ground.names) if g.size else "ground:"]
    lines += [g.ground.format(m) for m in sorted(g.closed, key=lex_order)]
    return "\n".join(lines) + "\n"


def parse_family(text: str, source: str = "<string>") -> tuple[GroundSet, set[int]]:
    """Parse the geometry text format without checking the axioms."""
    if text and not text.endswith("\n"):
        raise ParseError(source, text.count("\n") + 1, "missing trailing newline")
    ground = None
    family: set[int] = set()
    for lineno, raw in enumerate(text.split("\n")[:-1], start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ground is None:
            if not line.startswith("ground:"):
                raise ParseError(source, lineno, "expected 'ground:' header")
            try:
                ground = GroundSet(tuple(line[len("ground:"):].split()))
            except ValueError as exc:
                raise ParseError(source, lineno, str(exc)) from None
            continue
        try:
            family.add(ground.parse(line))
        except KeyError as exc:
            raise ParseError(source, lineno, exc.args[0]) from None
    if ground is None:
        raise ParseError(source, 1, "missing 'ground:' header")
    return ground, family


def parse_geometry(text: str, source: str = "<string>") -> ConvexGeometry:
    ground, family = parse_family(text, source)
    if not family:
        raise ParseError(source, 1, "no closed sets listed")
    return validate_family(ground, family)
