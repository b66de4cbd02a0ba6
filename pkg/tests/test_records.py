"""Exercise records: chain integrity, DCAT export, import validation."""

from datetime import timedelta

import pytest

from rightsflow.graph import DCAT, PROV, Graph, Iri, ShapeViolation, Triple, parse_turtle, serialize_turtle
from rightsflow.lifecycle import RequestStatus
from rightsflow.records import (
    OutOfOrderTimestamp,
    RightExerciseActivity,
    RightExerciseRecord,
    UnknownRequest,
    append_activity,
    export_record,
    import_record,
    latest_activity,
    with_request,
)
from rightsflow.timeutil import utc

SUBJECT = Iri("https://alice.example/me")
CONTROLLER = Iri("https://ctrl.example/")
REQ_A = Iri("https://ctrl.example/requests/reqa")
REQ_B = Iri("https://ctrl.example/requests/reqb")
T0 = utc(2026, 1, 10, 9, 0, 0)


def record():
    rec = RightExerciseRecord(Iri("https://ctrl.example/records/alice"), SUBJECT)
    return with_request(with_request(rec, REQ_A), REQ_B)


def activity(n, request=REQ_A, at=None, status=RequestStatus.ACKNOWLEDGED):
    return RightExerciseActivity(
        id=Iri(f"https://ctrl.example/activities/a{n}"),
        request_id=request,
        at=at or (T0 + timedelta(minutes=n)),
        status_after=status,
        associated_entities=frozenset({CONTROLLER}),
        generated_artifacts=frozenset({Iri(f"https://ctrl.example/notices/n{n}")}),
    )


def test_append_to_empty_record():
    rec = append_activity(record(), activity(0))
    assert rec.first == rec.last == activity(0).id
    assert rec.series[0].prev is None


def test_append_three_and_walk_chain():
    rec = record()
    inserted = []  # the plain-list oracle
    for i in range(3):
        a = activity(i)
        rec = append_activity(rec, a)
        inserted.append(a.id)
    # Walk prev pointers from last: exact reverse insertion order.
    by_id = {a.id: a for a in rec.series}
    walked = []
    cursor = rec.last
    while cursor is not None:
        walked.append(cursor)
        cursor = by_id[cursor].prev
    assert walked == list(reversed(inserted))


def test_append_rejects_earlier_timestamp():
    rec = append_activity(record(), activity(5))
    with pytest.raises(OutOfOrderTimestamp):
        append_activity(rec, activity(1))


def test_append_allows_timestamp_ties():
    rec = append_activity(record(), activity(0, at=T0))
    rec = append_activity(rec, activity(1, at=T0))
    assert len(rec.series) == 2
    assert rec.series[1].prev == rec.series[0].id


def test_append_rejects_unknown_request():
    stranger = Iri("https://ctrl.example/requests/ghost")
    with pytest.raises(UnknownRequest):
        append_activity(record(), activity(0, request=stranger))


def test_activity_requires_association():
    with pytest.raises(ValueError):
        RightExerciseActivity(
            id=Iri("https://ctrl.example/activities/x"), request_id=REQ_A,
            at=T0, status_after=RequestStatus.INITIATED,
            associated_entities=frozenset())


def test_latest_activity():
    rec = record()
    assert latest_activity(rec) is None
    activities = [activity(i, request=REQ_A if i % 2 == 0 else REQ_B) for i in range(7)]
    for a in activities:
        rec = append_activity(rec, a)
    assert latest_activity(rec).id == activities[-1].id
    # Filtered by request: the list oracle picks the newest matching entry.
    newest_a = [a for a in activities if a.request_id == REQ_A][-1]
    assert latest_activity(rec, REQ_A).id == newest_a.id
    assert latest_activity(rec, Iri("https://ctrl.example/requests/none")) is None


# --- export ----------------------------------------------------------------------

def test_export_empty_record_is_catalog_node_only():
    rec = RightExerciseRecord(Iri("https://ctrl.example/records/alice"), SUBJECT)
    g = export_record(rec)
    assert len(g) == 3  # two type triples and the data subject
    assert {t.subject for t in g.triples} == {rec.id}


def test_export_two_activity_record_link_counts():
    rec = append_activity(append_activity(record(), activity(0)), activity(1))
    g = export_record(rec)
    assert len(g.match(None, DCAT.first, None)) == 1
    assert len(g.match(None, DCAT.last, None)) == 1
    assert len(g.match(None, DCAT.prev, None)) == 1
    assert len(g.match(None, PROV.wasAssociatedWith, None)) == 2
    assert len(g.match(None, PROV.generated, None)) == 2


def test_round_trip_structural_equality():
    rec = record()
    for i in range(5):
        rec = append_activity(rec, activity(i, request=REQ_A if i < 3 else REQ_B))
    assert import_record(export_record(rec)) == rec
    reparsed = import_record(parse_turtle(serialize_turtle(export_record(rec))))
    assert reparsed == rec


def test_hundred_appends_keep_chain_integrity():
    rec = record()
    for i in range(100):
        rec = append_activity(rec, activity(i))
    assert len(rec.series) == 100
    assert latest_activity(rec).id == activity(99).id
    assert sum(1 for a in rec.series if a.prev is None) == 1
    assert import_record(export_record(rec)) == rec


# --- import shape violations --------------------------------------------------------

def _exported_three():
    rec = record()
    for i in range(3):
        rec = append_activity(rec, activity(i))
    return rec, export_record(rec)


def test_import_rejects_prev_cycle():
    rec, g = _exported_three()
    a0, a1, a2 = (a.id for a in rec.series)
    rewired = Graph(
        {t for t in g.triples if not (t.predicate == DCAT.prev and t.subject == a1)}
        | {Triple(a1, DCAT.prev, a2)},
        g.prefixes)
    with pytest.raises(ShapeViolation, match="cycle"):
        import_record(rewired)


def test_import_rejects_second_last_pointer():
    rec, g = _exported_three()
    doubled = Graph(
        set(g.triples) | {Triple(Iri("https://ctrl.example/records/alice/series"),
                                 DCAT.last, rec.series[0].id)},
        g.prefixes)
    with pytest.raises(ShapeViolation, match="dcat:last"):
        import_record(doubled)


def test_import_rejects_missing_association():
    rec, g = _exported_three()
    victim = rec.series[1].id
    stripped = Graph(
        {t for t in g.triples
         if not (t.predicate == PROV.wasAssociatedWith and t.subject == victim)},
        g.prefixes)
    with pytest.raises(ShapeViolation, match="association"):
        import_record(stripped)
