"""Rights requests as deontic policies, plus a desk-scale evaluator.

A request policy instantiates one GDPR right as permissions, prohibitions and
obligations addressed to the controller. The evaluator judges each rule
against an action-event log: obligations are fulfilled by a matching event on
or before their deadline and violated once the deadline passes unmet;
prohibitions are violated by a matching event and otherwise stay active;
permissions are fulfilled once exercised and are never violated.

The constraint fragment is deliberately small: single deadline constraints and
exact-match actions/targets, which covers every template.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Optional, Sequence

from .graph import (
    DPV,
    ODRL,
    RDF_TYPE,
    XSD_DATETIME,
    BlankNode,
    Graph,
    Iri,
    Literal,
    ShapeViolation,
    Triple,
)
from .timeutil import ensure_utc, format_timestamp, parse_timestamp
from .vocab import RightNotExercisable


class PolicyError(Exception):
    pass


class NoPolicyTemplate(PolicyError):
    """The right is exercisable but has no generic policy template (A19)."""


class RuleKind(enum.Enum):
    PERMISSION = "Permission"
    PROHIBITION = "Prohibition"
    OBLIGATION = "Obligation"


class Verdict(enum.Enum):
    ACTIVE = "Active"
    FULFILLED = "Fulfilled"
    VIOLATED = "Violated"


RULE_PREDICATES = {
    RuleKind.PERMISSION: ODRL.permission,
    RuleKind.PROHIBITION: ODRL.prohibition,
    RuleKind.OBLIGATION: ODRL.obligation,
}

# Controller-side actions the templates obligate or prohibit. Data-handling
# actions reuse DPV processing concepts; the two cessation actions have no
# upstream term and live in an engine URN namespace.
ACTION_PROVIDE_COPY = DPV.Copy
ACTION_RECTIFY = DPV.Modify
ACTION_ERASE = DPV.Erase
ACTION_RESTRICT = DPV.Restrict
ACTION_USE_BEYOND_STORAGE = DPV.Use
ACTION_PORT = DPV.Transmit
ACTION_AUTOMATED_DECISION = DPV.AutomatedDecisionMaking
ACTION_STOP_PROCESSING = Iri("urn:gdpr-rights:action:stop-processing")
ACTION_CEASE_CONSENT_PROCESSING = Iri("urn:gdpr-rights:action:cease-consent-based-processing")


@dataclass(frozen=True)
class Rule:
    kind: RuleKind
    action: Iri
    target: Iri
    assigner: Iri
    assignee: Iri
    deadline: Optional[datetime] = None

    def __post_init__(self):
        if self.kind is RuleKind.OBLIGATION and self.deadline is None:
            raise ValueError("obligation rules carry a deadline")
        if self.deadline is not None:
            object.__setattr__(self, "deadline", ensure_utc(self.deadline))

    def sort_key(self) -> tuple:
        return (self.kind.value, self.action.value, self.target.value,
                format_timestamp(self.deadline) if self.deadline else "")


@dataclass(frozen=True)
class ActionEvent:
    actor: Iri
    action: Iri
    target: Iri
    at: datetime


@dataclass(frozen=True)
class RequestPolicy:
    id: Iri
    right: Iri
    assigner: Iri
    assignee: Iri
    rules: tuple[Rule, ...]

    def __post_init__(self):
        if not self.rules:
            raise ValueError("a request policy carries at least one rule")
        for rule in self.rules:
            if rule.assigner != self.assigner or rule.assignee != self.assignee:
                raise ValueError("every rule must reference the policy's parties")
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=Rule.sort_key)))

    @property
    def deadline(self) -> Optional[datetime]:
        deadlines = [r.deadline for r in self.rules if r.deadline is not None]
        return min(deadlines) if deadlines else None


# (kind, action) pairs per article; targets and deadlines are filled at
# instantiation time.
_TEMPLATES: dict[str, tuple[tuple[RuleKind, Iri], ...]] = {
    "A15": ((RuleKind.OBLIGATION, ACTION_PROVIDE_COPY),),
    "A16": ((RuleKind.OBLIGATION, ACTION_RECTIFY),),
    "A17": ((RuleKind.OBLIGATION, ACTION_ERASE),),
    "A18": ((RuleKind.OBLIGATION, ACTION_RESTRICT),
            (RuleKind.PROHIBITION, ACTION_USE_BEYOND_STORAGE)),
    "A20": ((RuleKind.OBLIGATION, ACTION_PORT),),
    "A21": ((RuleKind.OBLIGATION, ACTION_STOP_PROCESSING),),
    "A22": ((RuleKind.PROHIBITION, ACTION_AUTOMATED_DECISION),),
    "A7-3": ((RuleKind.OBLIGATION, ACTION_CEASE_CONSENT_PROCESSING),),
}

TEMPLATE_ARTICLES = tuple(sorted(_TEMPLATES))

_EU_GDPR_BASE = "https://w3id.org/dpv/legal/eu/gdpr#"


def _article_of(right: Iri) -> str:
    if not right.value.startswith(_EU_GDPR_BASE):
        raise RightNotExercisable(f"{right} is not a GDPR right")
    return right.value[len(_EU_GDPR_BASE):]


def instantiate_right_policy(right: Iri, subject: Iri, controller: Iri,
                             data_target: Iri, deadline: datetime,
                             policy_id: Optional[Iri] = None) -> RequestPolicy:
    """Fill the generic template for a right; obligations get the deadline."""
    article = _article_of(right)
    if article in ("A13", "A14"):
        raise RightNotExercisable(f"{right} is a controller duty, not a request")
    if article not in _TEMPLATES:
        raise NoPolicyTemplate(f"no generic policy template for {right}")
    rules = tuple(
        Rule(kind, action, data_target, subject, controller,
             deadline=deadline if kind is RuleKind.OBLIGATION else None)
        for kind, action in _TEMPLATES[article])
    pid = policy_id or Iri(f"urn:uuid:{uuid.uuid4()}")
    return RequestPolicy(pid, right, subject, controller, rules)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _matching(rule: Rule, log: Iterable[ActionEvent], now: datetime) -> list[ActionEvent]:
    return [e for e in log
            if e.at <= now
            and e.actor == rule.assignee
            and e.action == rule.action
            and e.target == rule.target]


def evaluate_rule(rule: Rule, log: Sequence[ActionEvent], now: datetime) -> Verdict:
    now = ensure_utc(now)
    hits = _matching(rule, log, now)
    if rule.kind is RuleKind.OBLIGATION:
        if any(e.at <= rule.deadline for e in hits):
            return Verdict.FULFILLED
        if now > rule.deadline:
            return Verdict.VIOLATED
        return Verdict.ACTIVE
    if rule.kind is RuleKind.PROHIBITION:
        return Verdict.VIOLATED if hits else Verdict.ACTIVE
    # Permission: fulfilled once exercised, never violated.
    return Verdict.FULFILLED if hits else Verdict.ACTIVE


def evaluate_policy(p: RequestPolicy, log: Sequence[ActionEvent], now: datetime) -> Verdict:
    """Violated if any rule is; else Active while an obligation is; else Fulfilled."""
    verdicts = [(rule, evaluate_rule(rule, log, now)) for rule in p.rules]
    if any(v is Verdict.VIOLATED for _, v in verdicts):
        return Verdict.VIOLATED
    if any(rule.kind is RuleKind.OBLIGATION and v is Verdict.ACTIVE for rule, v in verdicts):
        return Verdict.ACTIVE
    return Verdict.FULFILLED


# ---------------------------------------------------------------------------
# Turtle import/export
# ---------------------------------------------------------------------------

def export_policy(p: RequestPolicy) -> Graph:
    triples = [Triple(p.id, RDF_TYPE, ODRL.Request),
               Triple(p.id, DPV.hasRight, p.right)]
    for i, rule in enumerate(p.rules):
        node = BlankNode(f"r{i}")
        triples.append(Triple(p.id, RULE_PREDICATES[rule.kind], node))
        triples.append(Triple(node, ODRL.assigner, rule.assigner))
        triples.append(Triple(node, ODRL.assignee, rule.assignee))
        triples.append(Triple(node, ODRL.action, rule.action))
        triples.append(Triple(node, ODRL.target, rule.target))
        if rule.deadline is not None:
            cnode = BlankNode(f"c{i}")
            triples.append(Triple(node, ODRL.constraint, cnode))
            triples.append(Triple(cnode, ODRL.leftOperand, ODRL.dateTime))
            triples.append(Triple(cnode, ODRL.operator, ODRL.lteq))
            triples.append(Triple(cnode, ODRL.rightOperand,
                                  Literal(format_timestamp(rule.deadline),
                                          datatype=XSD_DATETIME)))
    return Graph(triples)


def _rule_deadline(g: Graph, node) -> Optional[datetime]:
    constraints = g.objects(node, ODRL.constraint)
    if not constraints:
        return None
    if len(constraints) > 1:
        raise ShapeViolation("at most one constraint per rule is supported")
    cnode = constraints[0]
    if g.value(cnode, ODRL.leftOperand) != ODRL.dateTime:
        raise ShapeViolation("only odrl:dateTime constraints are supported")
    if g.value(cnode, ODRL.operator) != ODRL.lteq:
        raise ShapeViolation("only odrl:lteq deadline constraints are supported")
    operand = g.value(cnode, ODRL.rightOperand)
    if not isinstance(operand, Literal):
        raise ShapeViolation("deadline constraint requires a literal operand")
    try:
        return parse_timestamp(operand.lexical)
    except ValueError as exc:
        raise ShapeViolation(str(exc))


def import_policy(g: Graph, default_deadline: Optional[datetime] = None) -> RequestPolicy:
    """Inverse of export_policy; validates the request-policy shape.

    Obligations without a deadline constraint take ``default_deadline`` when
    given (the intake path stamps the lifecycle deadline there) and are
    rejected otherwise.
    """
    policies = g.subjects_of_type(ODRL.Request)
    if len(policies) != 1 or not isinstance(policies[0], Iri):
        raise ShapeViolation("document must describe exactly one IRI-named odrl:Request")
    pid = policies[0]
    right = g.value(pid, DPV.hasRight)
    if not isinstance(right, Iri):
        raise ShapeViolation("policy requires a dpv:hasRight IRI")

    rules = []
    parties = set()
    for kind, predicate in RULE_PREDICATES.items():
        for node in g.objects(pid, predicate):
            assigner = g.value(node, ODRL.assigner)
            assignee = g.value(node, ODRL.assignee)
            action = g.value(node, ODRL.action)
            target = g.value(node, ODRL.target)
            for name, term in (("assigner", assigner), ("assignee", assignee),
                               ("action", action), ("target", target)):
                if not isinstance(term, Iri):
                    raise ShapeViolation(f"rule is missing odrl:{name}")
            deadline = _rule_deadline(g, node)
            if deadline is None and kind is RuleKind.OBLIGATION:
                deadline = default_deadline
                if deadline is None:
                    raise ShapeViolation("obligation rule is missing its deadline constraint")
            parties.add((assigner, assignee))
            rules.append(Rule(kind, action, target, assigner, assignee, deadline))
    if not rules:
        raise ShapeViolation("policy carries no rules")
    if len(parties) != 1:
        raise ShapeViolation("all rules must share one assigner/assignee pair")
    assigner, assignee = next(iter(parties))
    return RequestPolicy(pid, right, assigner, assignee, tuple(rules))
