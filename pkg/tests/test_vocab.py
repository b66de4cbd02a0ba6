"""Vocabulary registry: seed loading, applicability lookups, process specs."""

import json

import pytest

from rightsflow.graph import EU_GDPR, JUSTIFICATIONS, Graph, Iri, parse_turtle
from rightsflow.vocab import (
    JustificationCategory,
    ProcessSpec,
    UnknownLegalBasis,
    VocabError,
    applicable_rights,
    applicable_rights_for_process,
    justifications_for,
    load_seed_dataset,
    load_vocab_dataset,
    process_spec_from_graph,
    process_spec_to_graph,
    validate_process_spec,
)


@pytest.fixture(scope="module")
def ds():
    return load_seed_dataset()


@pytest.fixture(scope="module")
def oracle(fixtures_dir):
    data = json.loads((fixtures_dir / "applicability_oracle.json").read_text())
    return {k: v for k, v in data.items() if not k.startswith("_")}


def test_seed_counts(ds):
    assert len(ds.rights) >= 11
    assert len(ds.legal_bases) == 6
    assert len(ds.justifications) >= 12


def test_exercisable_rule(ds):
    by_article = {r.gdpr_article: r for r in ds.rights.values()}
    for article in ("A13", "A14"):
        assert not by_article[article].exercisable_by_request
    for article in ("A15", "A16", "A17", "A18", "A19", "A20", "A21", "A22", "A7-3"):
        assert by_article[article].exercisable_by_request


def test_table_matches_transcription_oracle(ds, oracle):
    for clause, articles in oracle.items():
        basis = ds.basis_for_clause(clause)
        assert basis is not None, clause
        got = {ds.rights[r].gdpr_article for r in applicable_rights(ds, basis.iri)}
        assert got == set(articles), clause


def test_rights_common_to_every_basis(ds):
    # Per the transcription: access, rectification, restriction (and the
    # information duties and A19) apply under every basis; erasure does not.
    common = None
    for basis in ds.legal_bases.values():
        articles = {ds.rights[r].gdpr_article for r in applicable_rights(ds, basis.iri)}
        common = articles if common is None else common & articles
    assert {"A13", "A14", "A15", "A16", "A18", "A19"} <= common
    assert "A17" not in common


def test_consent_includes_portability_and_withdrawal(ds):
    basis = ds.basis_for_clause("A6-1-a")
    rights = applicable_rights(ds, basis.iri)
    assert EU_GDPR.A20 in rights
    assert EU_GDPR["A7-3"] in rights
    assert EU_GDPR.A15 in rights


def test_lookup_is_pure(ds):
    basis = ds.basis_for_clause("A6-1-b").iri
    assert applicable_rights(ds, basis) == applicable_rights(ds, basis)


def test_unknown_basis(ds):
    with pytest.raises(UnknownLegalBasis):
        applicable_rights(ds, Iri("https://ex.org/not-a-basis"))


def test_justification_categories(ds):
    nonf = {j.iri for j in justifications_for(ds, JustificationCategory.NON_FULFILMENT)}
    assert JUSTIFICATIONS.IdentityUnverifiable in nonf
    assert JUSTIFICATIONS.RequestExcessive in nonf
    delay = {j.iri for j in justifications_for(ds, JustificationCategory.DELAY)}
    assert JUSTIFICATIONS.AdditionalInformationRequired in delay
    assert JUSTIFICATIONS.IdentityVerificationRequired in delay


def test_justifications_resolve_under_namespace(ds):
    for iri in ds.justifications:
        assert iri.value.startswith(JUSTIFICATIONS.base)


def test_empty_graph_is_rejected():
    with pytest.raises(VocabError):
        load_vocab_dataset(Graph())


def test_dangling_table_reference_is_rejected():
    doc = parse_turtle("""
        @prefix dpv: <https://w3id.org/dpv#> .
        @prefix dct: <http://purl.org/dc/terms/> .
        @prefix eu-gdpr: <https://w3id.org/dpv/legal/eu/gdpr#> .
        eu-gdpr:A15 a dpv:Right ; dct:identifier "A15" ; dct:title "Access"@en .
        eu-gdpr:A6-1-a a dpv:LegalBasis ; dct:identifier "A6-1-a" ; dct:title "Consent"@en ;
            dpv:hasRight eu-gdpr:A15, eu-gdpr:A20 .
    """)
    with pytest.raises(VocabError, match="undeclared right"):
        load_vocab_dataset(doc)


def test_double_categorised_justification_is_rejected():
    doc = parse_turtle("""
        @prefix dpv: <https://w3id.org/dpv#> .
        @prefix dct: <http://purl.org/dc/terms/> .
        @prefix eu-gdpr: <https://w3id.org/dpv/legal/eu/gdpr#> .
        @prefix justifications: <https://w3id.org/dpv/justifications#> .
        eu-gdpr:A15 a dpv:Right ; dct:identifier "A15" ; dct:title "Access"@en .
        justifications:X a justifications:DelayJustification, justifications:ExerciseJustification ;
            dct:title "X"@en .
    """)
    with pytest.raises(VocabError, match="more than one category"):
        load_vocab_dataset(doc)


# --- process specs ----------------------------------------------------------

def _process(ds, clause="A6-1-f", extra=(), scopes=None):
    basis = ds.basis_for_clause(clause)
    return ProcessSpec(
        iri=Iri("https://ctrl.example/processes/newsletter"),
        purposes=frozenset({Iri("https://ctrl.example/purposes/marketing")}),
        personal_data_categories=frozenset({Iri("https://w3id.org/dpv#EmailAddress")}),
        legal_basis=basis.iri,
        controller=Iri("https://ctrl.example/"),
        applicable_rights=applicable_rights(ds, basis.iri) | frozenset(extra),
        scopes=scopes or {},
    )


def test_minimal_process_declares_table_rights(ds):
    p = _process(ds)
    validate_process_spec(p, ds)
    assert applicable_rights_for_process(p, ds) == applicable_rights(ds, p.legal_basis)


def test_process_may_not_declare_fewer(ds):
    p = _process(ds)
    narrowed = ProcessSpec(
        iri=p.iri, purposes=p.purposes,
        personal_data_categories=p.personal_data_categories,
        legal_basis=p.legal_basis, controller=p.controller,
        applicable_rights=p.applicable_rights - {EU_GDPR.A21},
        scopes={},
    )
    with pytest.raises(VocabError, match="omits rights"):
        validate_process_spec(narrowed, ds)


def test_jurisdiction_scope_widens(ds):
    eu = Iri("https://w3id.org/dpv/loc#EU")
    fundamental = Iri("https://ex.org/fundamental-rights/data-protection")
    p = _process(ds, scopes={eu: frozenset({fundamental})})
    assert fundamental in applicable_rights_for_process(p, ds, eu)
    assert fundamental not in applicable_rights_for_process(p, ds)
    unknown = Iri("https://w3id.org/dpv/loc#US")
    assert applicable_rights_for_process(p, ds, unknown) == p.applicable_rights


def test_process_graph_round_trip(ds):
    eu = Iri("https://w3id.org/dpv/loc#EU")
    p = _process(ds, scopes={eu: frozenset({Iri("https://ex.org/extra-right")})})
    back = process_spec_from_graph(process_spec_to_graph(p), ds)
    assert back == p
