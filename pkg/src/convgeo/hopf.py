"""The incidence Hopf algebra of convex geometries.

Basis elements are isomorphism classes of geometries, identified by the
canonical key of their lattice of closed sets. Every vector keeps a registry
mapping each key to one concrete representative geometry, which is what the
structure maps actually operate on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .geomops import minor, product_geometry
from .lattice import CanonicalKey, canonical_key, lattice_of_closed_sets
from .setfam import ConvexGeometry, GroundSet, popcount

Scalar = int | Fraction


@lru_cache(maxsize=None)
def _key_of_family(closed: tuple[int, ...]) -> CanonicalKey:
    # the key depends on the closed masks only, not on the labels
    n = max(closed).bit_length()
    bare = ConvexGeometry(GroundSet(tuple(f"x{i}" for i in range(n))), closed)
    return canonical_key(lattice_of_closed_sets(bare))


def geometry_key(g: ConvexGeometry) -> CanonicalKey:
    """Canonical key of the lattice of closed sets of ``g``."""
    return _key_of_family(g.closed)


def _empty() -> ConvexGeometry:
    return ConvexGeometry(GroundSet(()), (0,))


EMPTY_KEY = geometry_key(_empty())


class _Terms:
    """Shared machinery for finite formal sums with exact rational coefficients."""

    __slots__ = ("terms", "registry")

    def __init__(self, terms: Mapping = (), registry: Mapping[CanonicalKey, ConvexGeometry] = ()):
        terms = dict(terms)
        self.terms = {k: Fraction(c) for k, c in terms.items() if c != 0}
        registry = dict(registry)
        self.registry = {}
        for k in self.terms:
            for part in self._parts(k):
                self.registry[part] = registry[part]

    @staticmethod
    def _parts(k) -> tuple[CanonicalKey, ...]:
        raise NotImplementedError

    def _combine(self, other, sign):
        if not isinstance(other, type(self)):
            return NotImplemented
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + sign * c
        return type(self)(terms, {**other.registry, **self.registry})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: Scalar):
        return type(self)({k: c * v for k, v in self.terms.items()}, self.registry)

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def grade(self, k) -> tuple[int, ...]:
        return tuple(self.registry[p].size for p in self._parts(k))

    def sorted_terms(self):
        """Terms ordered by (ground sizes, key strings)."""
        return sorted(self.terms.items(), key=lambda kv: (self.grade(kv[0]), tuple(map(str, self._parts(kv[0])))))

    def __str__(self):
        if not self.terms:
            return "0\n"
        return "".join(f"{c} * " + " (x) ".join(map(str, self._parts(k))) + "\n" for k, c in self.sorted_terms())

    def __repr__(self):
        return f"{type(self).__name__}({len(self.terms)} terms)"


class HopfVector(_Terms):
    """Formal combination of geometry classes: ``terms`` maps CanonicalKey -> coefficient."""

    __slots__ = ()

    @staticmethod
    def _parts(k):
        return (k,)

    @classmethod
    def basis(cls, g: ConvexGeometry, coeff: Scalar = 1) -> "HopfVector":
        k = geometry_key(g)
        return cls({k: coeff}, {k: g})

    @classmethod
    def zero(cls) -> "HopfVector":
        return cls()

    def __mul__(self, other):
        if isinstance(other, HopfVector):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def items(self):
        """(coefficient, representative) pairs in deterministic order."""
        return [(c, self.registry[k]) for k, c in self.sorted_terms()]


class TensorVector(_Terms):
    """Formal combination of tensors of classes; keys are tuples of CanonicalKeys."""

    __slots__ = ()

    @staticmethod
    def _parts(k):
        return k

    def __mul__(self, other):
        if isinstance(other, TensorVector):
            return tensor_multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def items(self):
        return [(c, tuple(self.registry[p] for p in k)) for k, c in self.sorted_terms()]


def basis(g: ConvexGeometry) -> HopfVector:
    return HopfVector.basis(g)


def _accumulate(terms: dict, registry: dict, parts: Iterable[ConvexGeometry], coeff) -> None:
    key = []
    for g in parts:
        k = geometry_key(g)
        registry.setdefault(k, g)
        key.append(k)
    key = tuple(key)
    terms[key] = terms.get(key, 0) + coeff


# -- coalgebra ---------------------------------------------------------------


def coproduct(g: ConvexGeometry) -> TensorVector:
    """Sum over closed X of M(empty, X) (x) M(X, Z)."""
    full = g.ground.full
    terms: dict = {}
    registry: dict = {}
    for x in g.closed:
        _accumulate(terms, registry, (minor(g, 0, x), minor(g, x, full)), 1)
    return TensorVector(terms, registry)


def coproduct_of(v: HopfVector) -> TensorVector:
    out = TensorVector()
    for c, g in v.items():
        out = out + coproduct(g).scale(c)
    return out


def apply_coproduct(t: TensorVector, slot: int) -> TensorVector:
    """Apply the coproduct to tensor factor ``slot``, raising the arity by one."""
    terms: dict = {}
    registry = dict(t.registry)
    for c, parts in t.items():
        for d, (left, right) in coproduct(parts[slot]).items():
            new = parts[:slot] + (left, right) + parts[slot + 1:]
            _accumulate(terms, registry, new, c * d)
    return TensorVector(terms, registry)


def counit(v: HopfVector) -> Fraction:
    """Coefficient of the empty geometry."""
    return v.terms.get(EMPTY_KEY, Fraction(0))


def apply_counit(t: TensorVector, slot: int) -> TensorVector:
    terms: dict = {}
    registry: dict = {}
    for c, parts in t.items():
        if geometry_key(parts[slot]) == EMPTY_KEY:
            _accumulate(terms, registry, parts[:slot] + parts[slot + 1:], c)
    return TensorVector(terms, registry)


def as_tensor(v: HopfVector) -> TensorVector:
    return TensorVector({(k,): c for k, c in v.terms.items()}, v.registry)


# -- algebra -----------------------------------------------------------------

_products: dict[tuple[CanonicalKey, CanonicalKey], tuple[CanonicalKey, ConvexGeometry]] = {}


def product_class(g1: ConvexGeometry, g2: ConvexGeometry) -> tuple[CanonicalKey, ConvexGeometry]:
    """Key and representative of the product of two classes."""
    pair = (geometry_key(g1), geometry_key(g2))
    hit = _products.get(pair)
    if hit is None:
        g = product_geometry(g1, g2)
        hit = _products[pair] = (geometry_key(g), g)
    return hit


def multiply(v1: HopfVector, v2: HopfVector) -> HopfVector:
    terms: dict = {}
    registry: dict = {}
    for c1, g1 in v1.items():
        for c2, g2 in v2.items():
            k, g = product_class(g1, g2)
            registry.setdefault(k, g)
            terms[k] = terms.get(k, 0) + c1 * c2
    return HopfVector(terms, registry)


def tensor_multiply(t1: TensorVector, t2: TensorVector) -> TensorVector:
    """Componentwise product of tensors of equal arity."""
    terms: dict = {}
    registry: dict = {}
    for c1, p1 in t1.items():
        for c2, p2 in t2.items():
            if len(p1) != len(p2):
                raise ValueError("tensor arities differ")
            parts = [product_class(a, b) for a, b in zip(p1, p2)]
            key = tuple(k for k, _ in parts)
            for k, g in parts:
                registry.setdefault(k, g)
            terms[key] = terms.get(key, 0) + c1 * c2
    return TensorVector(terms, registry)


def unit() -> HopfVector:
    return HopfVector.basis(_empty())


# -- antipode ----------------------------------------------------------------


def _fold_product(factors: list[ConvexGeometry]) -> ConvexGeometry:
    g = _empty()
    for f in factors:
        g = product_geometry(g, f)
    return g


def antipode_chain(g: ConvexGeometry) -> HopfVector:
    """Signed sum over strict chains of closed sets from the empty set to Z.

    Each chain X0 < X1 < ... < Xk contributes (-1)^k times the product of the
    minors M(X_{i-1}, X_i).
    """
    full = g.ground.full
    closed = g.closed
    above = {x: [y for y in closed if y != x and y & x == x] for x in closed}
    minors: dict[tuple[int, int], ConvexGeometry] = {}
    terms: dict = {}
    registry: dict = {}

    def step(x: int, y: int) -> ConvexGeometry:
        m = minors.get((x, y))
        if m is None:
            m = minors[(x, y)] = minor(g, x, y)
        return m

    def walk(x: int, factors: list[ConvexGeometry]):
        if x == full:
            sign = -1 if len(factors) % 2 else 1
            _accumulate(terms, registry, (_fold_product(factors),), sign)
            return
        for y in above[x]:
            factors.append(step(x, y))
            walk(y, factors)
            factors.pop()

    walk(0, [])
    return HopfVector({k[0]: c for k, c in terms.items()}, registry)


_antipode_memo: dict[CanonicalKey, HopfVector] = {}


def antipode_recursive(g: ConvexGeometry) -> HopfVector:
    """S(g) = -g - sum over proper nonempty closed X of S(M(empty, X)) * M(X, Z).

    Memoized on the class key.
    """
    k = geometry_key(g)
    hit = _antipode_memo.get(k)
    if hit is not None:
        return hit
    full = g.ground.full
    if full == 0:
        out = HopfVector.basis(g)
    else:
        out = -HopfVector.basis(g)
        for x in g.closed:
            if x == 0 or x == full:
                continue
            out = out - antipode_recursive(minor(g, 0, x)) * HopfVector.basis(minor(g, x, full))
    _antipode_memo[k] = out
    return out


ANTIPODES: dict[str, Callable[[ConvexGeometry], HopfVector]] = {
    "chain": antipode_chain,
    "recursive": antipode_recursive,
}


def antipode(v: HopfVector, method: str = "recursive") -> HopfVector:
    s = ANTIPODES[method]
    out = HopfVector()
    for c, g in v.items():
        out = out + s(g).scale(c)
    return out


@dataclass(frozen=True)
class FailureReport:
    """Nonzero residuals of the antipode identities. Falsy."""

    left: HopfVector
    right: HopfVector

    def __bool__(self):
        return False

    def __str__(self):
        return f"m(S (x) id)D residual:\n{self.left}m(id (x) S)D residual:\n{self.right}"


def verify_hopf_axiom(g: ConvexGeometry, method: str = "chain") -> bool | FailureReport:
    """Check m(S (x) id)D[g] = e[g]*1 and the mirrored identity exactly."""
    s = ANTIPODES[method]
    target = unit().scale(counit(HopfVector.basis(g)))
    left = HopfVector()
    right = HopfVector()
    for c, (a, b) in coproduct(g).items():
        left = left + (s(a) * HopfVector.basis(b)).scale(c)
        right = right + (HopfVector.basis(a) * s(b)).scale(c)
    left, right = left - target, right - target
    if left or right:
        return FailureReport(left, right)
    return True


# -- forbidden minors ----------------------------------------------------------


@dataclass(frozen=True)
class MinorMatch:
    lower: int
    upper: int
    ground: GroundSet

    def __str__(self):
        return f"lower={self.ground.format(self.lower)} upper={self.ground.format(self.upper)}"


def has_forbidden_minor(g: ConvexGeometry, f: ConvexGeometry) -> MinorMatch | None:
    """First closed pair A <= B (in closed-set order) whose minor is isomorphic to ``f``."""
    fk = geometry_key(f)
    size, count = f.size, len(f.closed)
    for a in g.closed:
        for b in g.closed:
            if b & a != a or popcount(b & ~a) != size:
                continue
            between = sum(1 for x in g.closed if x & a == a and x & ~b == 0)
            if between != count:
                continue
            if geometry_key(minor(g, a, b)) == fk:
                return MinorMatch(a, b, g.ground)
    return None
