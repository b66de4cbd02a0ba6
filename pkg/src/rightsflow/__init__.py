"""rightsflow: a machine-interpretable GDPR rights-exercise engine.

Documents (requests, notices, exercise records, request policies) are RDF
graphs serialized as Turtle; requests move through a GDPR-compliant lifecycle
with deadline and breach tracking; rights requests double as deontic policies
evaluated against an action-event log.
"""

__version__ = "0.1.0"

from .graph import (  # noqa: F401
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
    isomorphic,
    parse_turtle,
    serialize_turtle,
)
