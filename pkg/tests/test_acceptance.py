"""Acceptance criteria, each at its exact tolerance.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import time
from itertools import combinations_with_replacement

import pytest

from convgeo import hopf
from convgeo.constructions import (
    boolean_geometry,
    chain_geometry,
    convex_position_points,
    convex_shelling,
    poset_shelling,
)
from convgeo.corpus import P1, labeled_posets
from convgeo.geomops import geometry_from_lattice, minor, product_geometry
from convgeo.hopf import (
    HopfVector,
    antipode_chain,
    antipode_recursive,
    apply_coproduct,
    apply_counit,
    as_tensor,
    coproduct,
    geometry_key,
    has_forbidden_minor,
    verify_hopf_axiom,
)
from convgeo.lattice import (
    canonical_key,
    direct_product,
    interval,
    is_distributive,
    is_meet_distributive,
    lattice_of_closed_sets,
)

import oracles
from test_cli import FIXTURE_COMMANDS, subprocess_run

# the 23 nonempty closed sets published for the five-point example
PUBLISHED_P1 = (
    "abcde abcd abce acde bcde abc acd ace bcd bce cde "
    "ab ac ad bc be cd ce de a b c d"
).split()


def labelled(g):
    return {frozenset(g.ground.labels(x)) for x in g.closed}


def closed_pairs(g):
    for i, a in enumerate(g.closed):
        for j, b in enumerate(g.closed):
            if a & b == a:
                yield i, j, a, b


@pytest.mark.criterion(1, "five-point convex shelling golden test")
def test_p1_golden(p1):
    oracle = oracles.shelling_family(P1.labels, [tuple(c) for c in P1.coords], oracles.in_hull_2d)
    assert labelled(p1) == oracle
    assert labelled(p1) == oracles.shelling_family(P1.labels, P1.coords, oracles.in_hull_sympy)
    assert len(p1.closed) == 25
    assert [sum(1 for x in p1.closed if len(p1.ground.labels(x)) == r) for r in range(6)] == [1, 5, 8, 6, 4, 1]
    published = {frozenset(s) for s in PUBLISHED_P1}
    assert len(published) == 23
    assert labelled(p1) - {frozenset()} == published | {frozenset("e")}


@pytest.mark.criterion(2, "closed-set lattices are meet-distributive")
def test_closed_set_lattices_meet_distributive(corpus):
    families = {e.family for e in corpus}
    assert families == {"poset", "points", "chain", "boolean"}
    assert sum(1 for e in corpus if e.family == "points") >= 21
    for e in corpus:
        assert is_meet_distributive(lattice_of_closed_sets(e.geometry)), e.name
    # every labelled poset, not only one per isomorphism class
    count = 0
    for n in range(5):
        for p in labeled_posets(n):
            assert is_meet_distributive(lattice_of_closed_sets(poset_shelling(p)))
            count += 1
    assert count == 1 + 1 + 3 + 19 + 219


@pytest.mark.criterion(3, "lattice to geometry round trip")
def test_round_trip(corpus):
    for e in corpus:
        l = lattice_of_closed_sets(e.geometry)
        back = geometry_from_lattice(l)
        assert canonical_key(lattice_of_closed_sets(back)) == canonical_key(l), e.name


@pytest.mark.criterion(4, "minors match lattice intervals")
def test_minor_interval(corpus):
    for e in corpus:
        g = e.geometry
        if g.size > 5:
            continue
        l = lattice_of_closed_sets(g)
        for i, j, a, b in closed_pairs(g):
            assert canonical_key(lattice_of_closed_sets(minor(g, a, b))) == canonical_key(interval(l, i, j))


@pytest.mark.criterion(5, "product geometry lattice is the direct product")
def test_product_lattice(corpus):
    lattices = [lattice_of_closed_sets(e.geometry) for e in corpus]
    pairs = 0
    for e1, l1 in zip(corpus, lattices):
        for e2, l2 in zip(corpus, lattices):
            if e1.size + e2.size > 6:
                continue
            p = product_geometry(e1.geometry, e2.geometry)
            assert canonical_key(lattice_of_closed_sets(p)) == canonical_key(direct_product(l1, l2))
            pairs += 1
    assert pairs > 1000


@pytest.mark.criterion(6, "Hopf identities with zero residual")
def test_hopf_identities(corpus):
    small = [e for e in corpus if e.size <= 5]
    for e in small:
        g = e.geometry
        assert verify_hopf_axiom(g, "chain") is True, e.name
        assert verify_hopf_axiom(g, "recursive") is True, e.name
        d = coproduct(g)
        assert not apply_coproduct(d, 0) - apply_coproduct(d, 1)
        assert not apply_counit(d, 0) - as_tensor(HopfVector.basis(g))
        assert not apply_counit(d, 1) - as_tensor(HopfVector.basis(g))
    for e1 in small:
        for e2 in small:
            if e1.size + e2.size > 5:
                continue
            prod = product_geometry(e1.geometry, e2.geometry)
            assert not coproduct(prod) - coproduct(e1.geometry) * coproduct(e2.geometry)


@pytest.mark.criterion(7, "chain-sum and recursive antipodes agree")
def test_antipode_cross_check(corpus):
    for e in corpus:
        sc, sr = antipode_chain(e.geometry), antipode_recursive(e.geometry)
        assert sc == sr and sc.terms == sr.terms, e.name
    z2, b2 = chain_geometry(2), boolean_geometry(2)
    expected = HopfVector.basis(z2, -1) + HopfVector.basis(b2)
    assert antipode_chain(z2) == expected == antipode_recursive(z2)
    assert expected.terms == {geometry_key(z2): -1, geometry_key(b2): 1}


@pytest.mark.criterion(8, "antipode of the convex n-gon is (-1)^n times itself")
def test_ngon_law():
    hopf._antipode_memo.clear()
    start = time.perf_counter()
    for n in range(1, 7):
        g = boolean_geometry(n)
        assert geometry_key(convex_shelling(convex_position_points(n))) == geometry_key(g)
        assert antipode_recursive(g) == HopfVector.basis(g, (-1) ** n)
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(9, "chains span a subcoalgebra")
def test_chain_coalgebra():
    for n in range(7):
        d = coproduct(chain_geometry(n))
        expected = {(geometry_key(chain_geometry(k)), geometry_key(chain_geometry(n - k))): 1 for k in range(n + 1)}
        assert d.terms == expected
        assert all(c == 1 for c in d.terms.values())


@pytest.mark.criterion(10, "intervals and products stay meet-distributive")
def test_hereditary(corpus, classes):
    for e in corpus:
        l = lattice_of_closed_sets(e.geometry)
        for x in range(l.n):
            for y in range(l.n):
                if l.leq(x, y):
                    assert is_meet_distributive(interval(l, x, y)), e.name
    # the predicate is isomorphism invariant and L1 x L2 is isomorphic to
    # L2 x L1, so one product per unordered pair of classes covers them all
    lattices = [lattice_of_closed_sets(e.geometry) for e in classes]
    for l1, l2 in combinations_with_replacement(lattices, 2):
        assert is_meet_distributive(direct_product(l1, l2))


@pytest.mark.criterion(11, "minors of poset shellings are distributive")
def test_poset_minors(corpus):
    posets = [e for e in corpus if e.family == "poset"]
    assert posets
    for e in posets:
        g = e.geometry
        for _, _, a, b in closed_pairs(g):
            assert is_distributive(lattice_of_closed_sets(minor(g, a, b))), e.name


@pytest.mark.criterion(12, "forbidden-minor search")
def test_forbidden_minor(p1):
    z2 = chain_geometry(2)
    hit = has_forbidden_minor(p1, z2)
    assert hit is not None
    assert (set(p1.ground.labels(hit.lower)), set(p1.ground.labels(hit.upper))) == ({"a"}, {"a", "c", "e"})
    assert geometry_key(minor(p1, hit.lower, hit.upper)) == geometry_key(z2)
    assert has_forbidden_minor(boolean_geometry(3), z2) is None


@pytest.mark.criterion(13, "CLI output is byte-identical across runs")
def test_cli_determinism(fixtures):
    commands = [c[0] for c in FIXTURE_COMMANDS]
    assert "hasse" in commands and any("--dot" in c for c in FIXTURE_COMMANDS)
    for argv in FIXTURE_COMMANDS:
        first = subprocess_run(fixtures, argv, 1)
        second = subprocess_run(fixtures, argv, 2)
        assert first == second, argv
        assert first[0] == 0 and first[1], argv
