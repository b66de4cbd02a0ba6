"""Registry of rights, legal bases, the applicability mapping, and justifications.

The registry is data-driven: contents live in a Turtle seed document (shipped
as package data, overridable via --vocab) and are validated on load. Process
descriptions declare which rights a controller supports, optionally widened
per jurisdiction through scopes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional

from .graph import (
    DPV,
    JUSTIFICATIONS,
    RDF_TYPE,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
    parse_turtle,
)


class VocabError(Exception):
    """Seed data failed validation (dangling reference, duplicate, bad shape)."""


class UnknownLegalBasis(VocabError):
    pass


class RightNotExercisable(Exception):
    """The right is a controller duty (A13/A14), not a subject-initiated request."""


GDPR_ARTICLES = frozenset({"A13", "A14", "A15", "A16", "A17", "A18", "A19",
                           "A20", "A21", "A22", "A7-3"})
EXERCISABLE_ARTICLES = frozenset({"A15", "A16", "A17", "A18", "A19", "A20",
                                  "A21", "A22", "A7-3"})
LEGAL_BASIS_CLAUSES = frozenset({f"A6-1-{c}" for c in "abcdef"})


class JustificationCategory(enum.Enum):
    FULFILMENT = "Fulfilment"
    NON_FULFILMENT = "NonFulfilment"
    DELAY = "Delay"
    EXERCISE = "Exercise"


CATEGORY_CLASSES = {
    JUSTIFICATIONS.FulfilmentJustification: JustificationCategory.FULFILMENT,
    JUSTIFICATIONS.NonFulfilmentJustification: JustificationCategory.NON_FULFILMENT,
    JUSTIFICATIONS.DelayJustification: JustificationCategory.DELAY,
    JUSTIFICATIONS.ExerciseJustification: JustificationCategory.EXERCISE,
}

# Justifications the lifecycle itself reaches for.
IDENTITY_VERIFICATION_REQUIRED = JUSTIFICATIONS.IdentityVerificationRequired
IDENTITY_UNVERIFIABLE = JUSTIFICATIONS.IdentityUnverifiable
REQUEST_EXCESSIVE = JUSTIFICATIONS.RequestExcessive
REQUEST_COMPLEXITY = JUSTIFICATIONS.RequestComplexity
ADDITIONAL_INFORMATION_REQUIRED = JUSTIFICATIONS.AdditionalInformationRequired

DCT_TITLE = Iri("http://purl.org/dc/terms/title")
DCT_IDENTIFIER = Iri("http://purl.org/dc/terms/identifier")


@dataclass(frozen=True)
class Right:
    iri: Iri
    label: str
    gdpr_article: str
    exercisable_by_request: bool


@dataclass(frozen=True)
class LegalBasis:
    iri: Iri
    gdpr_clause: str
    label: str


@dataclass(frozen=True)
class Justification:
    iri: Iri
    label: str
    category: JustificationCategory


@dataclass(frozen=True)
class VocabDataset:
    rights: Mapping[Iri, Right]
    legal_bases: Mapping[Iri, LegalBasis]
    table: Mapping[Iri, frozenset]
    justifications: Mapping[Iri, Justification]

    def right(self, iri: Iri) -> Optional[Right]:
        return self.rights.get(iri)

    def right_for_article(self, article: str) -> Optional[Right]:
        for r in self.rights.values():
            if r.gdpr_article == article:
                return r
        return None

    def basis_for_clause(self, clause: str) -> Optional[LegalBasis]:
        for b in self.legal_bases.values():
            if b.gdpr_clause == clause:
                return b
        return None

    def justification(self, iri: Iri) -> Optional[Justification]:
        return self.justifications.get(iri)

    def justification_category(self, iri: Iri) -> Optional[JustificationCategory]:
        j = self.justifications.get(iri)
        return j.category if j else None


def _one_literal(g: Graph, subject, predicate: Iri, what: str) -> str:
    values = [o for o in g.objects(subject, predicate) if isinstance(o, Literal)]
    if len(values) != 1:
        raise VocabError(f"{subject} must have exactly one {what}, found {len(values)}")
    return values[0].lexical


def load_vocab_dataset(document: Graph) -> VocabDataset:
    """Build a validated dataset from a parsed seed document.

    Unknown triples are ignored; dangling references, duplicate IRIs, and
    concepts outside the closed taxonomies are rejected.
    """
    rights: dict[Iri, Right] = {}
    for s in document.subjects_of_type(DPV.Right):
        if not isinstance(s, Iri):
            raise VocabError("rights must be named by IRIs")
        article = _one_literal(document, s, DCT_IDENTIFIER, "dct:identifier")
        if article not in GDPR_ARTICLES:
            raise VocabError(f"unknown GDPR article {article!r} on {s}")
        label = _one_literal(document, s, DCT_TITLE, "dct:title")
        rights[s] = Right(s, label, article, article in EXERCISABLE_ARTICLES)
    if not rights:
        raise VocabError("no rights declared in the dataset")
    articles = [r.gdpr_article for r in rights.values()]
    if len(set(articles)) != len(articles):
        raise VocabError("duplicate GDPR article identifiers among rights")

    legal_bases: dict[Iri, LegalBasis] = {}
    table: dict[Iri, frozenset] = {}
    for s in document.subjects_of_type(DPV.LegalBasis):
        if not isinstance(s, Iri):
            raise VocabError("legal bases must be named by IRIs")
        if s in rights:
            raise VocabError(f"{s} declared as both a right and a legal basis")
        clause = _one_literal(document, s, DCT_IDENTIFIER, "dct:identifier")
        if clause not in LEGAL_BASIS_CLAUSES:
            raise VocabError(f"legal basis clause must match A6-1-[a-f], got {clause!r}")
        label = _one_literal(document, s, DCT_TITLE, "dct:title")
        legal_bases[s] = LegalBasis(s, clause, label)
        mapped = document.objects(s, DPV.hasRight)
        if not mapped:
            raise VocabError(f"legal basis {s} has no applicable-rights entry")
        for r in mapped:
            if r not in rights:
                raise VocabError(f"applicability entry for {s} references undeclared right {r}")
        table[s] = frozenset(mapped)

    justifications: dict[Iri, Justification] = {}
    for class_iri, category in CATEGORY_CLASSES.items():
        for s in document.subjects_of_type(class_iri):
            if not isinstance(s, Iri):
                raise VocabError("justifications must be named by IRIs")
            if s in justifications:
                raise VocabError(f"justification {s} has more than one category")
            if s in rights or s in legal_bases:
                raise VocabError(f"{s} declared under conflicting types")
            if s not in JUSTIFICATIONS:
                raise VocabError(f"justification {s} outside the justifications namespace")
            label = _one_literal(document, s, DCT_TITLE, "dct:title")
            justifications[s] = Justification(s, label, category)

    return VocabDataset(rights, legal_bases, table, justifications)


def load_seed_dataset() -> VocabDataset:
    """Load the seed shipped as package data."""
    text = resources.files("rightsflow").joinpath("data/vocab-seed.ttl").read_text("utf-8")
    return load_vocab_dataset(parse_turtle(text))


def applicable_rights(ds: VocabDataset, basis: Iri) -> frozenset:
    """The applicability-table entry for a legal basis; pure lookup."""
    if basis not in ds.table:
        raise UnknownLegalBasis(f"unknown legal basis {basis}")
    return ds.table[basis]


def justifications_for(ds: VocabDataset, category: JustificationCategory) -> set:
    return {j for j in ds.justifications.values() if j.category is category}


# ---------------------------------------------------------------------------
# Process descriptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProcessSpec:
    """A controller's processing description, declaring applicable rights.

    ``scopes`` widens the declared rights per jurisdiction (rights granted by
    other regulations); its entries need not come from the GDPR registry.
    """
    iri: Iri
    purposes: frozenset
    personal_data_categories: frozenset
    legal_basis: Iri
    controller: Iri
    applicable_rights: frozenset
    scopes: Mapping[Iri, frozenset] = field(default_factory=dict)


def validate_process_spec(p: ProcessSpec, ds: VocabDataset) -> None:
    """A process may declare more rights than the table requires, never fewer."""
    required = applicable_rights(ds, p.legal_basis)
    missing = required - p.applicable_rights
    if missing:
        raise VocabError(
            f"process {p.iri} omits rights required under {p.legal_basis}: "
            + ", ".join(sorted(m.value for m in missing)))


def applicable_rights_for_process(p: ProcessSpec, ds: VocabDataset,
                                  jurisdiction: Optional[Iri] = None) -> frozenset:
    """Declared rights, unioned with the jurisdiction's scope when given."""
    if jurisdiction is None:
        return p.applicable_rights
    return p.applicable_rights | p.scopes.get(jurisdiction, frozenset())


def process_spec_to_graph(p: ProcessSpec) -> Graph:
    triples = [Triple(p.iri, RDF_TYPE, DPV.Process),
               Triple(p.iri, DPV.hasLegalBasis, p.legal_basis),
               Triple(p.iri, DPV.hasDataController, p.controller)]
    for purpose in p.purposes:
        triples.append(Triple(p.iri, DPV.hasPurpose, purpose))
    for category in p.personal_data_categories:
        triples.append(Triple(p.iri, DPV.hasPersonalData, category))
    for r in p.applicable_rights:
        triples.append(Triple(p.iri, DPV.hasRight, r))
    for i, (jurisdiction, scoped) in enumerate(sorted(p.scopes.items())):
        node = BlankNode(f"scope{i}")
        triples.append(Triple(p.iri, DPV.hasScope, node))
        triples.append(Triple(node, DPV.hasJurisdiction, jurisdiction))
        for r in scoped:
            triples.append(Triple(node, DPV.hasRight, r))
    return Graph(triples)


def process_spec_from_graph(g: Graph, ds: VocabDataset) -> ProcessSpec:
    processes = g.subjects_of_type(DPV.Process)
    if len(processes) != 1 or not isinstance(processes[0], Iri):
        raise VocabError("document must describe exactly one IRI-named dpv:Process")
    s = processes[0]
    basis = g.value(s, DPV.hasLegalBasis)
    controller = g.value(s, DPV.hasDataController)
    if not isinstance(basis, Iri) or not isinstance(controller, Iri):
        raise VocabError("process requires dpv:hasLegalBasis and dpv:hasDataController IRIs")
    scopes = {}
    for node in g.objects(s, DPV.hasScope):
        jurisdiction = g.value(node, DPV.hasJurisdiction)
        if not isinstance(jurisdiction, Iri):
            raise VocabError("scope requires a dpv:hasJurisdiction IRI")
        scopes[jurisdiction] = frozenset(g.objects(node, DPV.hasRight))
    p = ProcessSpec(
        iri=s,
        purposes=frozenset(g.objects(s, DPV.hasPurpose)),
        personal_data_categories=frozenset(g.objects(s, DPV.hasPersonalData)),
        legal_basis=basis,
        controller=controller,
        applicable_rights=frozenset(g.objects(s, DPV.hasRight)),
        scopes=scopes,
    )
    validate_process_spec(p, ds)
    return p
