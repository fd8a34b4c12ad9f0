import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convgeo.setfam import (
    AxiomViolation,
    ConvexGeometry,
    Counterexample,
    GroundSet,
    ParseError,
    check_antiexchange,
    closure,
    closure_table,
    format_geometry,
    parse_geometry,
    validate_family,
)
from convgeo.constructions import chain_geometry, empty_geometry

import oracles


def m(g, labels):
    return g.ground.mask(labels)


# -- validate_family -----------------------------------------------------------


def test_two_chain_is_valid():
    ground = GroundSet(("1", "2"))
    g = validate_family(ground, {0, 0b01, 0b11})
    assert g.closed == (0, 1, 3)


def test_missing_single_step_extension():
    ground = GroundSet(("1", "2"))
    with pytest.raises(AxiomViolation) as info:
        validate_family(ground, {0, 0b11})
    assert info.value.axiom == "iii"
    assert info.value.witness == (0,)
    assert "{}" in str(info.value)


@pytest.mark.parametrize("family, witness", [
    ({1, 3}, (0,)),
    ({0, 1}, (3,)),
])
def test_axiom_i(family, witness):
    with pytest.raises(AxiomViolation) as info:
        validate_family(GroundSet(("1", "2")), family)
    assert (info.value.axiom, info.value.witness) == ("i", witness)


def test_axiom_ii_reports_least_pair():
    # {1,2} and {2,3} meet in {2}, which is missing; {1,3} and {2,3} also fail later
    ground = GroundSet(("1", "2", "3"))
    fam = {0, 0b001, 0b011, 0b110, 0b101, 0b111, 0b100}
    with pytest.raises(AxiomViolation) as info:
        validate_family(ground, fam)
    assert info.value.axiom == "ii"
    assert info.value.witness == (0b011, 0b110)


def test_validate_rejects_bad_masks():
    with pytest.raises(ValueError):
        validate_family(GroundSet(("1",)), {0, 1, 4})
    with pytest.raises(ValueError):
        validate_family(GroundSet(("1",)), set())


def test_empty_geometry_admitted():
    g = validate_family(GroundSet(()), {0})
    assert g.size == 0 and g.closed == (0,)


def test_p1_family_matches_oracle(p1):
    expected = oracles.shelling_family(
        tuple("abcde"), [(0, -1), (-1, 0), (0, 0), (1, 0), (0, 1)], oracles.in_hull_2d
    )
    got = {frozenset(p1.ground.labels(x)) for x in p1.closed}
    assert got == expected
    assert len(got) == 25


@pytest.mark.parametrize("label", ["", "a b", "a,b", "{}", "#x"])
def test_bad_labels(label):
    with pytest.raises(ValueError):
        GroundSet(("ok", label))


def test_ground_cap():
    GroundSet(tuple(str(i) for i in range(16)))
    with pytest.raises(ValueError):
        GroundSet(tuple(str(i) for i in range(17)))


# -- closure -------------------------------------------------------------------


def test_closure_examples(p1):
    z2 = chain_geometry(2)
    assert closure(z2, 0b10) == 0b11
    for x in z2.closed:
        assert closure(z2, x) == x
    assert closure(p1, m(p1, "ae")) == m(p1, "ace")


def test_closure_table_agrees_with_closure(p1):
    table = closure_table(p1)
    assert all(table[a] == closure(p1, a) for a in range(32))


def test_closure_operator_laws(corpus):
    for entry in corpus:
        g = entry.geometry
        if g.size > 5:
            continue
        full = g.ground.full
        cl = [closure(g, a) for a in range(full + 1)]
        family = {frozenset(g.ground.labels(x)) for x in g.closed}
        for a in range(full + 1):
            assert cl[a] & a == a
            assert cl[cl[a]] == cl[a]
            assert g.is_closed(cl[a])
            assert frozenset(g.ground.labels(cl[a])) == oracles.closure_by_supersets(
                family, frozenset(g.ground.labels(a)))
            for b in range(full + 1):
                if a & b == a:
                    assert cl[a] & cl[b] == cl[a]
        assert {a for a in range(full + 1) if cl[a] == a} == set(g.closed)


# -- antiexchange ----------------------------------------------------------------


def test_antiexchange_examples(p1):
    assert check_antiexchange(chain_geometry(2)) is True
    assert check_antiexchange(p1) is True
    assert check_antiexchange(empty_geometry()) is True


def test_antiexchange_counterexample_on_closure_system():
    # intersection-closed but not a convex geometry
    g = ConvexGeometry(GroundSet(("1", "2")), (0, 3))
    ce = check_antiexchange(g)
    assert isinstance(ce, Counterexample) and not ce
    assert (ce.a, ce.x, ce.y) == (0, 0, 1)


def test_antiexchange_holds_on_corpus(corpus):
    for entry in corpus:
        assert check_antiexchange(entry.geometry) is True, entry.name


@st.composite
def closure_systems(draw):
    """Random intersection-closed families containing the empty and the full set."""
    n = draw(st.integers(0, 4))
    full = (1 << n) - 1
    fam = {0, full} | set(draw(st.lists(st.integers(0, full), max_size=8)))
    changed = True
    while changed:
        changed = False
        for x in list(fam):
            for y in list(fam):
                if x & y not in fam:
                    fam.add(x & y)
                    changed = True
    return GroundSet(tuple(str(i) for i in range(n))), fam


@settings(max_examples=150, deadline=None)
@given(closure_systems())
def test_axioms_iff_antiexchange(system):
    ground, fam = system
    try:
        g = validate_family(ground, fam)
    except AxiomViolation as exc:
        assert exc.axiom == "iii"
        assert not check_antiexchange(ConvexGeometry(ground, tuple(fam)))
    else:
        assert check_antiexchange(g) is True


# -- text format -------------------------------------------------------------------


def test_format_round_trip(p1):
    text = format_geometry(p1)
    assert text.endswith("\n")
    assert text.splitlines()[:3] == ["ground: a b c d e", "{}", "a"]
    assert parse_geometry(text) == p1
    assert format_geometry(parse_geometry(text)) == text


def test_format_lex_order():
    g = validate_family(GroundSet(tuple("abcd")), range(16))
    lines = format_geometry(g).splitlines()
    assert lines.index("a,d") < lines.index("b,c")


def test_empty_geometry_text():
    assert format_geometry(empty_geometry()) == "ground:\n{}\n"
    assert parse_geometry("ground:\n{}\n") == empty_geometry()


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        parse_geometry("ground: a\n{}\nb\n", "f.geom")
    assert info.value.line == 3 and str(info.value).startswith("f.geom:3:")
    with pytest.raises(ParseError):
        parse_geometry("ground: a\n{}\na")
    with pytest.raises(ParseError):
        parse_geometry("{}\n")


def test_parse_accepts_comments_and_any_label_order():
    g = parse_geometry("# comment\nground: a b\n{}\nb\nb,a\n")
    assert g.closed == (0, 2, 3)
