"""Finite lattices: closed-set lattices, intervals, products, predicates, canonical keys.

Elements are the integers ``0..n-1``. The order is stored as bitmasks:
``down[i]`` has bit ``j`` set iff ``j <= i``, and ``up[i]`` is the dual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Any, Hashable, Sequence

from .setfam import ConvexGeometry, ParseError, bits, closure, popcount


class NotALattice(ValueError):
    pass


class NotComparable(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    n: int
    down: tuple[int, ...]
    up: tuple[int, ...]
    lower: tuple[tuple[int, ...], ...]  # lower covers of each element
    upper: tuple[tuple[int, ...], ...]  # upper covers of each element
    by_down: dict[int, int]  # down-set mask -> element
    by_up: dict[int, int]
    bottom: int
    top: int
    labels: tuple[Hashable, ...] = field(default=())

    @classmethod
    def from_down_sets(
        cls,
        down: Sequence[int],
        labels: Sequence[Hashable] = (),
        *,
        lower: Sequence[Sequence[int]] | None = None,
        check: bool = True,
    ) -> "FiniteLattice":
        """Build from ``down[i]`` = bitmask of elements below or equal to ``i``.

        Raises NotALattice if the relation is not a partial order or some
        pair lacks a meet or join. Callers that already know the answer
        (products of lattices) may pass ``check=False`` and the lower covers.
        """
        n = len(down)
        if n == 0:
            raise NotALattice("a lattice needs at least one element")
        down = tuple(down)
        if check:
            for i in range(n):
                if not down[i] >> i & 1:
                    raise NotALattice(f"order is not reflexive at {i}")
                for j in bits(down[i]):
                    if j != i and down[j] >> i & 1:
                        raise NotALattice(f"order is not antisymmetric at {j}, {i}")
                    if down[j] & ~down[i]:
                        raise NotALattice(f"order is not transitive through {j} <= {i}")
        up = [0] * n
        for i in range(n):
            for j in bits(down[i]):
                up[j] |= 1 << i

        by_down = {d: i for i, d in enumerate(down)}
        by_up = {u: i for i, u in enumerate(up)}
        if check:
            for i in range(n):
                for j in range(i + 1, n):
                    if down[i] & down[j] not in by_down:
                        raise NotALattice(f"elements {i} and {j} have no meet")
                    if up[i] & up[j] not in by_up:
                        raise NotALattice(f"elements {i} and {j} have no join")

        if lower is None:
            lower = []
            for i in range(n):
                strict = down[i] & ~(1 << i)
                # maximal elements of the strict down-set
                lower.append(tuple(j for j in bits(strict) if not (up[j] & strict & ~(1 << j))))
        upper = [[] for _ in range(n)]
        for i in range(n):
            for j in lower[i]:
                upper[j].append(i)

        full = (1 << n) - 1
        if full not in by_up or full not in by_down:
            raise NotALattice("no bottom or no top")
        return cls(
            n=n,
            down=down,
            up=tuple(up),
            lower=tuple(tuple(sorted(x)) for x in lower),
            upper=tuple(tuple(sorted(u)) for u in upper),
            by_down=by_down,
            by_up=by_up,
            bottom=by_up[full],
            top=by_down[full],
            labels=tuple(labels) if labels else tuple(range(n)),
        )

    @classmethod
    def from_covers(cls, n: int, covers: Sequence[tuple[int, int]], labels: Sequence[Hashable] = ()):
        """Build from cover pairs ``(i, j)`` meaning ``i`` is covered by ``j``."""
        below = [set() for _ in range(n)]
        for i, j in covers:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise NotALattice(f"bad cover pair {i} < {j}")
            below[j].add(i)
        down: list[int | None] = [None] * n
        state = [0] * n  # 0 new, 1 on stack, 2 done

        def visit(v):
            stack = [(v, iter(below[v]))]
            state[v] = 1
            while stack:
                node, it = stack[-1]
                for w in it:
                    if state[w] == 1:
                        raise NotALattice("cover relation has a cycle")
                    if state[w] == 0:
                        state[w] = 1
                        stack.append((w, iter(below[w])))
                        break
                else:
                    stack.pop()
                    d = 1 << node
                    for w in below[node]:
                        d |= down[w]
                    down[node] = d
                    state[node] = 2

        for v in range(n):
            if state[v] == 0:
                visit(v)
        lat = cls.from_down_sets(down, labels)
        if set(lat.covers) != set(covers):
            raise NotALattice("given pairs are not the transitive reduction of their order")
        return lat

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    def meet(self, x: int, y: int) -> int:
        return self.by_down[self.down[x] & self.down[y]]

    def join(self, x: int, y: int) -> int:
        return self.by_up[self.up[x] & self.up[y]]

    @cached_property
    def meet_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.meet(i, j) for j in range(self.n)) for i in range(self.n))

    @cached_property
    def join_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.join(i, j) for j in range(self.n)) for i in range(self.n))

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((i, j) for j in range(self.n) for i in self.lower[j]))

    @cached_property
    def height(self) -> tuple[int, ...]:
        """Length of the longest chain from the bottom to each element."""
        h = [0] * self.n
        for i in sorted(range(self.n), key=lambda k: popcount(self.down[k])):
            h[i] = max((h[j] + 1 for j in self.lower[i]), default=0)
        return tuple(h)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        d = [0] * self.n
        for i in sorted(range(self.n), key=lambda k: popcount(self.up[k])):
            d[i] = max((d[j] + 1 for j in self.upper[i]), default=0)
        return tuple(d)

    @property
    def elems(self) -> range:
        return range(self.n)

    def index_of(self, label: Hashable) -> int:
        return self.labels.index(label)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FiniteLattice(n={self.n}, covers={list(self.covers)})"


def meet(l: FiniteLattice, x: int, y: int) -> int:
    return l.meet(x, y)


def join(l: FiniteLattice, x: int, y: int) -> int:
    return l.join(x, y)


def lattice_of_closed_sets(g: ConvexGeometry) -> FiniteLattice:
    """Closed sets ordered by containment; element ``i`` is ``g.closed[i]``."""
    closed = g.closed
    down = []
    for x in closed:
        d = 0
        for j, y in enumerate(closed):
            if y & x == y:
                d |= 1 << j
        down.append(d)
    return FiniteLattice.from_down_sets(down, closed)


def chain_lattice(n: int) -> FiniteLattice:
    """The n-element chain."""
    return FiniteLattice.from_down_sets([(1 << (i + 1)) - 1 for i in range(n)])


def interval(l: FiniteLattice, a: int, b: int) -> FiniteLattice:
    """The sublattice ``{x : a <= x <= b}``; labels are carried over."""
    if not l.leq(a, b):
        raise NotComparable(f"{a} is not below {b}")
    members = [x for x in range(l.n) if l.leq(a, x) and l.leq(x, b)]
    pos = {x: i for i, x in enumerate(members)}
    down = []
    for x in members:
        d = 0
        for y in bits(l.down[x] & l.up[a]):
            d |= 1 << pos[y]
        down.append(d)
    return FiniteLattice.from_down_sets(down, [l.labels[x] for x in members])


def direct_product(l1: FiniteLattice, l2: FiniteLattice) -> FiniteLattice:
    """Componentwise order on pairs; element ``i * l2.n + j`` is ``(i, j)``."""
    n2 = l2.n
    down, lower, labels = [], [], []
    for i in range(l1.n):
        for j in range(n2):
            d = 0
            for p in bits(l1.down[i]):
                d |= l2.down[j] << (p * n2)
            down.append(d)
            # (i, j) covers exactly the pairs that drop one coordinate by a cover
            lower.append([p * n2 + j for p in l1.lower[i]] + [i * n2 + q for q in l2.lower[j]])
            labels.append((l1.labels[i], l2.labels[j]))
    return FiniteLattice.from_down_sets(down, labels, lower=lower, check=False)


def atoms(l: FiniteLattice) -> tuple[int, ...]:
    return l.upper[l.bottom]


def _interval_is_boolean(l: FiniteLattice, a: int, b: int) -> bool:
    members = l.up[a] & l.down[b]
    size = popcount(members)
    ats = [x for x in l.upper[a] if members >> x & 1]
    if size != 1 << len(ats):
        return False
    # joins of all atom subsets, one new join per subset
    reached = [a]
    seen = 1 << a
    for t in ats:
        for x in reached[:]:
            y = l.join(x, t)
            if seen >> y & 1:
                return False
            seen |= 1 << y
            reached.append(y)
    return seen == members


def is_boolean(l: FiniteLattice) -> bool:
    """|l| = 2^|atoms| and joins of atom subsets hit every element exactly once."""
    return _interval_is_boolean(l, l.bottom, l.top)


def lower_meet(l: FiniteLattice, x: int) -> int:
    """Meet of all elements covered by ``x``."""
    m = l.top
    for y in l.lower[x]:
        m = l.meet(m, y)
    return m


def is_meet_distributive(l: FiniteLattice) -> bool:
    return all(
        _interval_is_boolean(l, lower_meet(l, x), x)
        for x in range(l.n)
        if x != l.bottom
    )


def is_distributive(l: FiniteLattice) -> bool:
    mt, jt = l.meet_table, l.join_table
    r = range(l.n)
    return all(
        mt[x][jt[y][z]] == jt[mt[x][y]][mt[x][z]]
        for x in r for y in r for z in r
    )


# -- canonical labeling ------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalKey:
    key: str
    size: int = field(compare=False)

    def __str__(self):
        return self.key


def _refine(colors: list[int], upper, lower) -> list[int]:
    """Colour refinement by multisets of upper/lower cover colours, to a fixed point.

    New colours are ranks of sorted signatures, so the result depends only on
    the structure and the input colouring, never on element ids.
    """
    n = len(colors)
    ncls = len(set(colors))
    while True:
        sigs = [
            (colors[i], tuple(sorted(colors[j] for j in upper[i])), tuple(sorted(colors[j] for j in lower[i])))
            for i in range(n)
        ]
        rank = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == ncls:
            return new
        colors, ncls = new, len(rank)


def _canonical_covers(n: int, covers: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    upper = [[] for _ in range(n)]
    lower = [[] for _ in range(n)]
    for i, j in covers:
        upper[i].append(j)
        lower[j].append(i)
    # longest chain from below / to above, via a linear extension
    order = _topological(n, upper, lower)
    height = [0] * n
    for v in order:
        height[v] = max((height[u] + 1 for u in lower[v]), default=0)
    depth = [0] * n
    for v in reversed(order):
        depth[v] = max((depth[u] + 1 for u in upper[v]), default=0)

    inv = [(height[i], depth[i], len(upper[i]), len(lower[i])) for i in range(n)]
    rank = {s: k for k, s in enumerate(sorted(set(inv)))}
    start = _refine([rank[s] for s in inv], upper, lower)

    # leaves are (certificate, labeling, path); automorphisms found by comparing
    # leaves prune the search: orbit pruning at every node, and a jump back to
    # the divergence point whenever a leaf matches the first leaf
    first: list = []
    best: list = []
    autos: list[list[int]] = []

    def automorphism(lab1, lab2):
        inv = [0] * n
        for v, c in enumerate(lab1):
            inv[c] = v
        return [inv[c] for c in lab2]

    def common(p, q):
        k = 0
        while k < len(p) and k < len(q) and p[k] == q[k]:
            k += 1
        return k

    def same_orbit(v, explored, path):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in autos:
            if all(g[p] == p for p in path):
                for x in range(n):
                    a, b = find(x), find(g[x])
                    if a != b:
                        parent[a] = b
        rv = find(v)
        return any(find(u) == rv for u in explored)

    def search(colors: list[int], path: list[int]):
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            cert = tuple(sorted((colors[i], colors[j]) for i, j in covers))
            if not first:
                first[:] = best[:] = [cert, colors, path]
                return None
            if cert == first[0]:
                autos.append(automorphism(first[1], colors))
                return common(path, first[2])
            if cert == best[0]:
                autos.append(automorphism(best[1], colors))
                return common(path, best[2])
            if cert < best[0]:
                best[:] = [cert, colors, path]
            return None
        explored: list[int] = []
        for v in range(n):
            if colors[v] != target:
                continue
            if explored and same_orbit(v, explored, path):
                continue
            split = [2 * c + (c == target and i != v) for i, c in enumerate(colors)]
            jump = search(_refine(split, upper, lower), path + [v])
            explored.append(v)
            if jump is not None and jump < len(path):
                return jump
        return None

    search(start, [])
    return best[0]


def _topological(n, upper, lower):
    indeg = [len(lower[i]) for i in range(n)]
    ready = [i for i in range(n) if indeg[i] == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for w in upper[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order


@lru_cache(maxsize=8192)
def _key_string(n: int, covers: tuple[tuple[int, int], ...]) -> str:
    canon = _canonical_covers(n, covers)
    return f"{n}:" + ",".join(f"{i}<{j}" for i, j in canon)


def canonical_key(l: FiniteLattice) -> CanonicalKey:
    """Relabeling-invariant identity of the isomorphism class of ``l``.

    Individualization/refinement search for the lexicographically least
    relabeled cover list; exhaustive over the refined cells, so equal keys
    mean isomorphic lattices.
    """
    return CanonicalKey(_key_string(l.n, l.covers), l.n)


# -- text format -------------------------------------------------------------


def format_lattice(l: FiniteLattice) -> str:
    lines = [f"elements: {l.n}"] + [f"{i} < {j}" for i, j in l.covers]
    return "\n".join(lines) + "\n"


def parse_lattice(text: str, source: str = "<string>") -> FiniteLattice:
    if text and not text.endswith("\n"):
        raise ParseError(source, text.count("\n") + 1, "missing trailing newline")
    n = None
    covers = []
    for lineno, raw in enumerate(text.split("\n")[:-1], start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            head, _, rest = line.partition(":")
            if head.strip() != "elements" or not rest.strip().isdigit():
                raise ParseError(source, lineno, "expected 'elements: n' header")
            n = int(rest)
            continue
        parts = line.split("<")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ParseError(source, lineno, f"expected 'i < j', got {line!r}")
        i, j = (int(p) for p in parts)
        if i >= n or j >= n:
            raise ParseError(source, lineno, f"index out of range for {n} elements")
        covers.append((i, j))
    if n is None:
        raise ParseError(source, 1, "missing 'elements:' header")
    try:
        return FiniteLattice.from_covers(n, covers)
    except NotALattice as exc:
        raise ParseError(source, 1, f"not a lattice: {exc}") from None


def describe(l: FiniteLattice) -> dict[str, Any]:
    """Summary used by the CLI: size, elements per height, meet-distributivity."""
    counts: dict[int, int] = {}
    for h in l.height:
        counts[h] = counts.get(h, 0) + 1
    return {
        "size": l.n,
        "ranks": [counts[h] for h in sorted(counts)],
        "meet_distributive": is_meet_distributive(l),
    }
