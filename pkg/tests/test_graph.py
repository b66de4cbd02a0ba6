"""Graph model: Turtle subset parser, serializer, match, isomorphism."""

import random
import string

import pytest

from rightsflow.graph import (
    DCT,
    DPV,
    EU_GDPR,
    RDF_TYPE,
    XSD_DATETIME,
    BlankNode,
    Graph,
    GraphError,
    Iri,
    Literal,
    TooManyBlankNodes,
    Triple,
    TurtleSyntaxError,
    UnsupportedFeature,
    iri_join,
    isomorphic,
    match,
    parse_turtle,
    serialize_turtle,
)

EX = "http://ex.org/"


def ex(name):
    return Iri(EX + name)


# --- terms -----------------------------------------------------------------

def test_iri_validation():
    Iri("urn:x:y")
    with pytest.raises(ValueError):
        Iri("")
    with pytest.raises(ValueError):
        Iri("no-scheme-here")
    with pytest.raises(ValueError):
        Iri("http://a b")
    with pytest.raises(ValueError):
        Iri("http://a<b>")


def test_literal_language_forces_langstring():
    plain = Literal("hi")
    assert plain.datatype.value.endswith("XMLSchema#string")
    tagged = Literal("hi", language="en")
    assert tagged.datatype.value.endswith("langString")
    with pytest.raises(ValueError):
        Literal("hi", datatype=XSD_DATETIME, language="en")


def test_triple_positions_validated():
    with pytest.raises(ValueError):
        Triple(Literal("x"), ex("p"), ex("o"))
    with pytest.raises(ValueError):
        Triple(ex("s"), BlankNode("b"), ex("o"))


# --- parser ----------------------------------------------------------------

def test_parse_smallest_document():
    g = parse_turtle("@prefix ex: <http://ex.org/> . ex:s a ex:C .")
    assert g.triples == {Triple(ex("s"), RDF_TYPE, ex("C"))}
    assert g.prefixes == {"ex": EX}


def test_parse_empty_document():
    g = parse_turtle("")
    assert len(g) == 0
    assert dict(g.prefixes) == {}


def test_parse_comment_only_document():
    g = parse_turtle("# nothing here\n")
    assert len(g) == 0


def test_parse_notice_fixture_matches_hand_expansion(fixtures_dir):
    """Expansion of the `;`/`,` lists and the anonymous node, done by hand."""
    text = (fixtures_dir / "notice_12.ttl").read_text()
    g = parse_turtle(text)

    notice = Iri("https://ctrl.example/notices/1")
    b0 = BlankNode("b0")
    expected = {
        Triple(notice, RDF_TYPE, DPV.RightExerciseNotice),
        Triple(notice, DCT.title, Literal("Access request exercise point", language="en")),
        Triple(notice, DCT.issued, Literal("2026-03-01T09:00:00Z", datatype=XSD_DATETIME)),
        Triple(notice, DPV.hasDataController, Iri("https://ctrl.example/")),
        Triple(notice, DPV.hasRecipient, Iri("https://alice.example/me")),
        Triple(notice, DPV.hasRecipient, Iri("https://bob.example/me")),
        Triple(notice, DPV.hasRight, EU_GDPR.A15),
        Triple(notice, DPV.isExercisedAt, Iri("https://ctrl.example/rights")),
        Triple(notice, DPV.hasProcess, b0),
        Triple(b0, RDF_TYPE, DPV.Process),
        Triple(b0, DPV.hasPurpose, Iri("https://ctrl.example/purposes/identity-check")),
        Triple(b0, DPV.hasPersonalData, DPV.IdentifyingData),
    }
    assert len(expected) == 12
    assert g.triples == expected


def test_parse_labeled_blank_nodes_relabeled_in_document_order():
    g = parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "_:second ex:p _:first .\n"
        "_:first ex:p ex:o .\n"
    )
    # _:second appears first in the document, so it becomes b0.
    assert Triple(BlankNode("b0"), ex("p"), BlankNode("b1")) in g
    assert Triple(BlankNode("b1"), ex("p"), ex("o")) in g


def test_parse_string_escapes():
    g = parse_turtle('@prefix ex: <http://ex.org/> . ex:s ex:p "a\\"b\\nc\\u00e9" .')
    (t,) = g.triples
    assert t.object == Literal('a"b\ncé')


def test_parse_empty_anonymous_node():
    g = parse_turtle("@prefix ex: <http://ex.org/> . ex:s ex:p [] .")
    assert Triple(ex("s"), ex("p"), BlankNode("b0")) in g


def test_parse_default_prefix():
    g = parse_turtle("@prefix : <http://ex.org/> . :s :p :o .")
    assert Triple(ex("s"), ex("p"), ex("o")) in g


def test_syntax_error_carries_position():
    with pytest.raises(TurtleSyntaxError) as excinfo:
        parse_turtle("@prefix ex: <http://ex.org/> .\nex:s ex:p .")
    assert excinfo.value.line == 2
    with pytest.raises(TurtleSyntaxError):
        parse_turtle("ex:s ex:p ex:o .")  # undeclared prefix
    with pytest.raises(TurtleSyntaxError):
        parse_turtle("@prefix ex: <http://ex.org/> . ex:s ex:p ex:o")  # missing dot
    with pytest.raises(TurtleSyntaxError):
        parse_turtle('@prefix ex: <http://ex.org/> . ex:s ex:p "open .')


@pytest.mark.parametrize("doc, feature", [
    ("@prefix ex: <http://ex.org/> . ex:s ex:p (1 2) .", "collection"),
    ("@base <http://ex.org/> .", "@base"),
    ("@prefix ex: <http://ex.org/> . ex:s ex:p 42 .", "numeric"),
    ("@prefix ex: <http://ex.org/> . ex:s ex:p true .", "boolean"),
    ('@prefix ex: <http://ex.org/> . ex:s ex:p """long""" .', "long string"),
    ("@prefix ex: <http://ex.org/> . << ex:s ex:p ex:o >> ex:q ex:r .", "quoted triple"),
    ("@prefix ex: <http://ex.org/> . ex:s ex:p [ ex:q [ ex:r [ ex:t ex:u ] ] ] .", "nested"),
])
def test_unsupported_features_rejected(doc, feature):
    with pytest.raises(UnsupportedFeature):
        parse_turtle(doc)


def test_blank_nesting_to_depth_two_is_supported():
    g = parse_turtle("@prefix ex: <http://ex.org/> . ex:s ex:p [ ex:q [ ex:r ex:o ] ] .")
    assert len(g) == 3


def test_parser_totality_on_fuzzed_input():
    """Fuzzed input up to 64 KiB either parses or raises a GraphError."""
    rng = random.Random(20260809)
    soup = (
        list(string.printable) * 3
        + ["@prefix ", "<http://ex.org/", "> .", "ex:", '"lit"', "^^", "@en",
           "[ ", " ]", " ; ", " , ", " . ", "_:b", "\\u00", "#c\n", "(", "a "]
    )
    for trial in range(300):
        size = rng.choice([10, 80, 400, 2000])
        doc = "".join(rng.choice(soup) for _ in range(size))
        try:
            parse_turtle(doc)
        except GraphError:
            pass
    big = "".join(rng.choice(soup) for _ in range(70000))[:65536]
    try:
        parse_turtle(big)
    except GraphError:
        pass


# --- serializer ------------------------------------------------------------

def test_serialize_empty_graph_is_default_prefixes_only():
    out = serialize_turtle(Graph())
    lines = [ln for ln in out.split("\n") if ln]
    assert lines, "prefix declarations expected"
    assert all(ln.startswith("@prefix ") for ln in lines)
    assert "@prefix dpv: <https://w3id.org/dpv#> ." in lines


def test_serialize_single_triple():
    g = Graph([Triple(ex("s"), RDF_TYPE, ex("C"))], {"ex": EX})
    out = serialize_turtle(g)
    assert out.endswith(" .\n")
    assert "ex:s a ex:C ." in out


def test_serializer_is_byte_deterministic():
    triples = [
        Triple(ex("s"), ex("p"), Literal("v")),
        Triple(ex("s"), RDF_TYPE, ex("C")),
        Triple(ex("z"), ex("q"), ex("s")),
        Triple(BlankNode("b0"), ex("p"), Literal("w", language="en")),
    ]
    a = serialize_turtle(Graph(triples, {"ex": EX}))
    b = serialize_turtle(Graph(reversed(triples), {"ex": EX}))
    assert a == b


def test_serializer_falls_back_to_absolute_iri_for_unsafe_locals():
    g = Graph([Triple(ex("path/leaf"), ex("p"), ex("o"))], {"ex": EX})
    out = serialize_turtle(g)
    assert "<http://ex.org/path/leaf>" in out


def test_round_trip_fixture_is_isomorphic(fixtures_dir):
    g = parse_turtle((fixtures_dir / "notice_12.ttl").read_text())
    again = parse_turtle(serialize_turtle(g))
    assert isomorphic(g, again)
    # A second serialize of the reparse is byte-identical: fixpoint reached.
    assert serialize_turtle(again) == serialize_turtle(parse_turtle(serialize_turtle(again)))


def test_round_trip_random_graphs():
    rng = random.Random(7)
    iris = [ex(n) for n in "abcdefg"]
    for _ in range(40):
        triples = set()
        blanks = [BlankNode(f"b{i}") for i in range(rng.randint(0, 4))]
        for _ in range(rng.randint(0, 12)):
            s = rng.choice(iris + blanks) if blanks else rng.choice(iris)
            p = rng.choice(iris)
            o = rng.choice(
                iris + blanks + [Literal("x y\nz"), Literal("v", language="en"),
                                 Literal("2026-01-01T00:00:00Z", datatype=XSD_DATETIME)])
            triples.add(Triple(s, p, o))
        g = Graph(triples, {"ex": EX})
        assert isomorphic(g, parse_turtle(serialize_turtle(g)))


# --- match -----------------------------------------------------------------

def _linear_scan(g, s, p, o):
    hits = [t for t in g.triples
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)]
    return set(hits)


def test_match_empty_graph():
    assert match(Graph(), None, None, None) == []


def test_match_against_linear_scan_oracle(fixtures_dir):
    g = parse_turtle((fixtures_dir / "notice_12.ttl").read_text())
    notice = Iri("https://ctrl.example/notices/1")
    cases = [
        (None, None, None),
        (None, RDF_TYPE, None),
        (None, RDF_TYPE, DPV.Process),
        (notice, None, None),
        (None, DPV.hasRecipient, None),
        (notice, DPV.hasRight, EU_GDPR.A15),
        (ex("missing"), None, None),
    ]
    for s, p, o in cases:
        assert set(match(g, s, p, o)) == _linear_scan(g, s, p, o)
    assert len(match(g, notice, None, None)) == 9
    assert match(g, None, None, None) == sorted(match(g), key=lambda t: t._key())


# --- isomorphism -----------------------------------------------------------

def test_isomorphic_reflexive(fixtures_dir):
    g = parse_turtle((fixtures_dir / "notice_12.ttl").read_text())
    assert isomorphic(g, g)


def test_isomorphic_detects_literal_difference():
    a = Graph([Triple(ex("s"), ex("p"), Literal("v1"))])
    b = Graph([Triple(ex("s"), ex("p"), Literal("v2"))])
    assert not isomorphic(a, b)


def test_isomorphic_under_swapped_blank_labels():
    x, y = BlankNode("x"), BlankNode("y")
    a = Graph([
        Triple(x, ex("p"), y),
        Triple(y, ex("p"), x),
        Triple(x, RDF_TYPE, ex("C")),
        Triple(y, RDF_TYPE, ex("D")),
    ])
    b = Graph([
        Triple(y, ex("p"), x),
        Triple(x, ex("p"), y),
        Triple(y, RDF_TYPE, ex("C")),
        Triple(x, RDF_TYPE, ex("D")),
    ])
    assert isomorphic(a, b)


def test_isomorphic_rejects_structural_difference():
    x, y = BlankNode("x"), BlankNode("y")
    a = Graph([Triple(x, ex("p"), y), Triple(y, ex("p"), x)])
    b = Graph([Triple(x, ex("p"), y), Triple(x, ex("q"), y)])
    assert not isomorphic(a, b)


def test_isomorphism_cap_at_eight_blank_nodes():
    triples = [Triple(BlankNode(f"n{i}"), ex("p"), Literal(str(i))) for i in range(9)]
    g = Graph(triples)
    with pytest.raises(TooManyBlankNodes):
        isomorphic(g, g)


# --- helpers ---------------------------------------------------------------

def test_iri_join():
    assert iri_join(Iri("https://c.example"), "notices", "42").value == "https://c.example/notices/42"
    assert iri_join(Iri("https://c.example/"), "/notices/").value == "https://c.example/notices"


def test_graph_is_set_semantics():
    t = Triple(ex("s"), ex("p"), ex("o"))
    assert len(Graph([t, t])) == 1
