"""Minimal RDF graph model with a Turtle subset parser and serializer.

Every document the engine produces or consumes (notices, records, request
policies, the vocabulary seed) round-trips through this module. The Turtle
subset covers: @prefix, prefixed names, absolute IRIs, "a", predicate-object
lists (;), object lists (,), labeled blank nodes (_:x), anonymous blank nodes
[ ... ] nested at most two levels, typed and language-tagged literals, and
line comments. Collections "( ... )", quoted triples, @base and numeric or
boolean literal abbreviations are rejected with UnsupportedFeature.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Union


class GraphError(Exception):
    """Base class for graph-model errors."""


class TurtleSyntaxError(GraphError):
    """Malformed input; carries the 1-based line and column of the offence."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class UnsupportedFeature(GraphError):
    """Input uses a Turtle construct outside the supported subset."""

    def __init__(self, feature: str, line: int = 0, column: int = 0):
        super().__init__(f"unsupported Turtle feature: {feature}")
        self.feature = feature
        self.line = line
        self.column = column


class TooManyBlankNodes(GraphError):
    """Isomorphism search is capped at 8 blank nodes per graph."""


class ShapeViolation(GraphError):
    """A document does not have the structure its importer requires."""


_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("IRI must be non-empty")
        if not _SCHEME_RE.match(self.value):
            raise ValueError(f"IRI lacks a scheme: {self.value!r}")
        if any(c in self.value for c in " \t\n\r<>"):
            raise ValueError(f"IRI contains whitespace or angle brackets: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class BlankNode:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


class Namespace:
    """IRI factory: ``DPV.Process`` or ``EU_GDPR["A6-1-a"]``."""

    def __init__(self, base: str):
        self.base = base

    def __getitem__(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("_"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def __contains__(self, iri: "Iri") -> bool:
        return iri.value.startswith(self.base)

    def local(self, iri: "Iri") -> str:
        return iri.value[len(self.base):]


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
DCT = Namespace("http://purl.org/dc/terms/")
DCAT = Namespace("http://www.w3.org/ns/dcat#")
PROV = Namespace("http://www.w3.org/ns/prov#")
ODRL = Namespace("http://www.w3.org/ns/odrl/2/")
DPV = Namespace("https://w3id.org/dpv#")
EU_GDPR = Namespace("https://w3id.org/dpv/legal/eu/gdpr#")
JUSTIFICATIONS = Namespace("https://w3id.org/dpv/justifications#")

RDF_TYPE = RDF.type
RDF_LANGSTRING = RDF.langString
XSD_STRING = XSD.string
XSD_DATETIME = XSD.dateTime

DEFAULT_PREFIXES: Mapping[str, str] = MappingProxyType({
    "dcat": DCAT.base,
    "dct": DCT.base,
    "dpv": DPV.base,
    "eu-gdpr": EU_GDPR.base,
    "justifications": JUSTIFICATIONS.base,
    "odrl": ODRL.base,
    "prov": PROV.base,
    "rdf": RDF.base,
    "xsd": XSD.base,
})


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Iri = field(default=XSD_STRING)
    language: Optional[str] = None

    def __post_init__(self):
        if self.language is not None:
            if self.datatype not in (XSD_STRING, RDF_LANGSTRING):
                raise ValueError("language-tagged literal must have datatype rdf:langString")
            object.__setattr__(self, "datatype", RDF_LANGSTRING)
        elif self.datatype == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal requires a language tag")

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, BlankNode, Literal]
SubjectTerm = Union[Iri, BlankNode]


def _term_key(t: Term) -> tuple:
    """Total order over terms, used wherever determinism is needed."""
    if isinstance(t, Iri):
        return (0, t.value, "", "")
    if isinstance(t, BlankNode):
        return (1, t.label, "", "")
    return (2, t.lexical, t.datatype.value, t.language or "")


@dataclass(frozen=True)
class Triple:
    subject: SubjectTerm
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise ValueError(f"triple subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise ValueError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise ValueError(f"triple object must be a term, got {self.object!r}")

    def _key(self) -> tuple:
        return (_term_key(self.subject), self.predicate.value, _term_key(self.object))


class Graph:
    """An immutable set of triples plus a prefix map.

    Construction copies its inputs; instances are safe to share across
    threads. Builders that omit ``prefixes`` get the engine's default table.
    """

    __slots__ = ("_triples", "_prefixes")

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Optional[Mapping[str, str]] = None):
        self._triples = frozenset(triples)
        if prefixes is None:
            prefixes = DEFAULT_PREFIXES
        self._prefixes = MappingProxyType(dict(prefixes))

    @property
    def triples(self) -> frozenset:
        return self._triples

    @property
    def prefixes(self) -> Mapping[str, str]:
        return self._prefixes

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=Triple._key))

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples and dict(self._prefixes) == dict(other._prefixes)

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"<Graph {len(self._triples)} triples, {len(self._prefixes)} prefixes>"

    def match(self, s: Optional[Term] = None, p: Optional[Iri] = None,
              o: Optional[Term] = None) -> list[Triple]:
        """All triples agreeing with every bound position, in sorted order."""
        out = [t for t in self._triples
               if (s is None or t.subject == s)
               and (p is None or t.predicate == p)
               and (o is None or t.object == o)]
        out.sort(key=Triple._key)
        return out

    def objects(self, s: Term, p: Iri) -> list[Term]:
        return [t.object for t in self.match(s, p)]

    def value(self, s: Term, p: Iri) -> Optional[Term]:
        objs = self.objects(s, p)
        return objs[0] if objs else None

    def subjects_of_type(self, class_iri: Iri) -> list[SubjectTerm]:
        return [t.subject for t in self.match(None, RDF_TYPE, class_iri)]


def match(g: Graph, s: Optional[Term] = None, p: Optional[Iri] = None,
          o: Optional[Term] = None) -> list[Triple]:
    return g.match(s, p, o)


# ---------------------------------------------------------------------------
# Turtle parsing
# ---------------------------------------------------------------------------

_PNAME_PREFIX_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")
_PNAME_LOCAL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_-]*$")
_LANG_RE = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "b": "\b", "f": "\f", "'": "'"}


@dataclass
class _Token:
    kind: str  # IRIREF PNAME BLANK STRING A ATPREFIX DOT SEMI COMMA LBRACKET RBRACKET HATHAT LANG EOF
    value: str
    line: int
    col: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _err(self, msg: str) -> TurtleSyntaxError:
        return TurtleSyntaxError(self.line, self.col, msg)

    def _unsupported(self, feature: str) -> UnsupportedFeature:
        return UnsupportedFeature(feature, self.line, self.col)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        j = self.pos + offset
        return self.text[j] if j < len(self.text) else ""

    def tokens(self) -> list[_Token]:
        out = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "EOF":
                return out

    def _next(self) -> _Token:
        while self.pos < len(self.text):
            c = self._peek()
            if c in " \t\r\n":
                self._advance()
                continue
            if c == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
                continue
            break
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Token("EOF", "", line, col)
        c = self._peek()

        if c == "<":
            if self._peek(1) == "<":
                raise self._unsupported("quoted triple <<...>>")
            return self._iriref(line, col)
        if c == '"':
            if self._peek(1) == '"' and self._peek(2) == '"':
                raise self._unsupported('long string literal """..."""')
            return self._string(line, col)
        if c == "'":
            raise self._unsupported("single-quoted literal")
        if c == "(":
            raise self._unsupported("RDF collection ( ... )")
        if c == ")":
            raise self._err("unexpected ')'")
        if c == "@":
            return self._at_word(line, col)
        if c == "^":
            if self._peek(1) == "^":
                self._advance(2)
                return _Token("HATHAT", "^^", line, col)
            raise self._err("expected '^^'")
        if c == "_" and self._peek(1) == ":":
            return self._blank(line, col)
        single = {".": "DOT", ";": "SEMI", ",": "COMMA", "[": "LBRACKET", "]": "RBRACKET"}
        if c in single:
            self._advance()
            return _Token(single[c], c, line, col)
        if c.isdigit() or (c in "+-" and self._peek(1).isdigit()):
            raise self._unsupported("numeric literal abbreviation")
        return self._name(line, col)

    def _iriref(self, line: int, col: int) -> _Token:
        self._advance()  # <
        chars = []
        while True:
            c = self._peek()
            if c == "":
                raise TurtleSyntaxError(line, col, "unterminated IRI")
            if c == ">":
                self._advance()
                break
            if c in " \t\n\r<":
                raise self._err(f"illegal character {c!r} in IRI")
            chars.append(c)
            self._advance()
        value = "".join(chars)
        if not _SCHEME_RE.match(value):
            raise TurtleSyntaxError(line, col, f"relative IRI not supported: <{value}>")
        return _Token("IRIREF", value, line, col)

    def _string(self, line: int, col: int) -> _Token:
        self._advance()  # "
        chars = []
        while True:
            c = self._peek()
            if c == "" or c == "\n":
                raise TurtleSyntaxError(line, col, "unterminated string literal")
            if c == '"':
                self._advance()
                break
            if c == "\\":
                self._advance()
                esc = self._peek()
                if esc in _ESCAPES:
                    chars.append(_ESCAPES[esc])
                    self._advance()
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    self._advance()
                    hexdigits = self.text[self.pos:self.pos + width]
                    if len(hexdigits) < width or not all(h in "0123456789abcdefABCDEF" for h in hexdigits):
                        raise self._err(f"malformed \\{esc} escape")
                    chars.append(chr(int(hexdigits, 16)))
                    self._advance(width)
                else:
                    raise self._err(f"unknown escape \\{esc}")
                continue
            chars.append(c)
            self._advance()
        return _Token("STRING", "".join(chars), line, col)

    def _at_word(self, line: int, col: int) -> _Token:
        self._advance()  # @
        word = []
        while self._peek().isalnum() or self._peek() == "-":
            word.append(self._peek())
            self._advance()
        w = "".join(word)
        if w == "prefix":
            return _Token("ATPREFIX", w, line, col)
        if w == "base":
            raise UnsupportedFeature("@base directive", line, col)
        if _LANG_RE.match(w):
            return _Token("LANG", w, line, col)
        raise TurtleSyntaxError(line, col, f"unknown directive @{w}")

    def _blank(self, line: int, col: int) -> _Token:
        self._advance(2)  # _:
        chars = []
        while self._peek() and (self._peek().isalnum() or self._peek() in "_-"):
            chars.append(self._peek())
            self._advance()
        label = "".join(chars)
        if not label:
            raise TurtleSyntaxError(line, col, "blank node label missing after '_:'")
        return _Token("BLANK", label, line, col)

    def _name(self, line: int, col: int) -> _Token:
        # Prefixed name (prefix:local), the bare keyword "a", or garbage.
        chars = []
        while self._peek() and (self._peek().isalnum() or self._peek() in "_-:."):
            c = self._peek()
            if c == "." and not (self._peek(1).isalnum() or self._peek(1) in "_-"):
                break  # statement-terminating dot
            chars.append(c)
            self._advance()
        word = "".join(chars)
        if not word:
            raise self._err(f"unexpected character {self._peek()!r}")
        if word == "a":
            return _Token("A", word, line, col)
        if word in ("true", "false"):
            raise UnsupportedFeature("boolean literal abbreviation", line, col)
        if ":" not in word:
            raise TurtleSyntaxError(line, col, f"expected a prefixed name, found {word!r}")
        return _Token("PNAME", word, line, col)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _Lexer(text).tokens()
        self.idx = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._blank_map: dict[str, BlankNode] = {}
        self._blank_counter = 0

    def _peek(self) -> _Token:
        return self.tokens[self.idx]

    def _take(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._take()
        if tok.kind != kind:
            raise TurtleSyntaxError(tok.line, tok.col, f"expected {what}, found {(tok.value or tok.kind)!r}")
        return tok

    def _fresh_blank(self) -> BlankNode:
        node = BlankNode(f"b{self._blank_counter}")
        self._blank_counter += 1
        return node

    def _blank_for_label(self, label: str) -> BlankNode:
        # Fresh labels assigned deterministically in document order.
        if label not in self._blank_map:
            self._blank_map[label] = self._fresh_blank()
        return self._blank_map[label]

    def _resolve_pname(self, tok: _Token) -> Iri:
        prefix, _, local = tok.value.partition(":")
        if prefix and not _PNAME_PREFIX_RE.match(prefix):
            raise TurtleSyntaxError(tok.line, tok.col, f"malformed prefix label {prefix!r}")
        if local and not _PNAME_LOCAL_RE.match(local):
            raise TurtleSyntaxError(tok.line, tok.col, f"malformed local name {local!r}")
        if prefix not in self.prefixes:
            raise TurtleSyntaxError(tok.line, tok.col, f"undeclared prefix {prefix!r}")
        try:
            return Iri(self.prefixes[prefix] + local)
        except ValueError as exc:
            raise TurtleSyntaxError(tok.line, tok.col, str(exc))

    def parse(self) -> Graph:
        while self._peek().kind != "EOF":
            if self._peek().kind == "ATPREFIX":
                self._prefix_directive()
            else:
                self._statement()
        return Graph(self.triples, self.prefixes)

    def _prefix_directive(self) -> None:
        self._take()  # @prefix
        tok = self._take()
        if tok.kind != "PNAME" or not tok.value.endswith(":") or tok.value.count(":") != 1:
            raise TurtleSyntaxError(tok.line, tok.col, "expected prefix label ending in ':'")
        label = tok.value[:-1]
        if label and not _PNAME_PREFIX_RE.match(label):
            raise TurtleSyntaxError(tok.line, tok.col, f"malformed prefix label {label!r}")
        ns = self._expect("IRIREF", "namespace IRI")
        self._expect("DOT", "'.' after @prefix directive")
        self.prefixes[label] = ns.value

    def _statement(self) -> None:
        subject = self._subject()
        self._predicate_object_list(subject, depth=0)
        self._expect("DOT", "'.' at end of statement")

    def _subject(self) -> SubjectTerm:
        tok = self._peek()
        if tok.kind == "IRIREF":
            self._take()
            return Iri(tok.value)
        if tok.kind == "PNAME":
            self._take()
            return self._resolve_pname(tok)
        if tok.kind == "BLANK":
            self._take()
            return self._blank_for_label(tok.value)
        if tok.kind == "LBRACKET":
            return self._blank_property_list(depth=1)
        raise TurtleSyntaxError(tok.line, tok.col, f"expected subject, found {(tok.value or tok.kind)!r}")

    def _predicate_object_list(self, subject: SubjectTerm, depth: int) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate, depth)
            if self._peek().kind == "SEMI":
                self._take()
                while self._peek().kind == "SEMI":  # tolerate ";;"
                    self._take()
                if self._peek().kind in ("DOT", "RBRACKET"):
                    return  # trailing ';'
                continue
            return

    def _verb(self) -> Iri:
        tok = self._take()
        if tok.kind == "A":
            return RDF_TYPE
        if tok.kind == "IRIREF":
            return Iri(tok.value)
        if tok.kind == "PNAME":
            return self._resolve_pname(tok)
        raise TurtleSyntaxError(tok.line, tok.col, f"expected predicate, found {(tok.value or tok.kind)!r}")

    def _object_list(self, subject: SubjectTerm, predicate: Iri, depth: int) -> None:
        while True:
            obj = self._object(depth)
            self.triples.append(Triple(subject, predicate, obj))
            if self._peek().kind == "COMMA":
                self._take()
                continue
            return

    def _object(self, depth: int) -> Term:
        tok = self._peek()
        if tok.kind == "IRIREF":
            self._take()
            return Iri(tok.value)
        if tok.kind == "PNAME":
            self._take()
            return self._resolve_pname(tok)
        if tok.kind == "BLANK":
            self._take()
            return self._blank_for_label(tok.value)
        if tok.kind == "STRING":
            self._take()
            return self._literal(tok)
        if tok.kind == "LBRACKET":
            return self._blank_property_list(depth + 1)
        raise TurtleSyntaxError(tok.line, tok.col, f"expected object, found {(tok.value or tok.kind)!r}")

    def _literal(self, tok: _Token) -> Literal:
        nxt = self._peek()
        if nxt.kind == "HATHAT":
            self._take()
            dtok = self._take()
            if dtok.kind == "IRIREF":
                dt = Iri(dtok.value)
            elif dtok.kind == "PNAME":
                dt = self._resolve_pname(dtok)
            else:
                raise TurtleSyntaxError(dtok.line, dtok.col, "expected datatype IRI after '^^'")
            if dt == RDF_LANGSTRING:
                raise TurtleSyntaxError(dtok.line, dtok.col, "rdf:langString requires a language tag, not '^^'")
            return Literal(tok.value, datatype=dt)
        if nxt.kind == "LANG":
            self._take()
            return Literal(tok.value, language=nxt.value)
        return Literal(tok.value)

    def _blank_property_list(self, depth: int) -> BlankNode:
        tok = self._take()  # [
        if depth > 2:
            raise UnsupportedFeature("anonymous blank nodes nested deeper than 2", tok.line, tok.col)
        node = self._fresh_blank()
        if self._peek().kind == "RBRACKET":
            self._take()
            return node
        self._predicate_object_list(node, depth)
        self._expect("RBRACKET", "']' closing blank node")
        return node


def parse_turtle(text: str) -> Graph:
    """Parse a Turtle document (supported subset) into a Graph.

    Blank nodes are relabeled b0, b1, ... in document order, so parsing is
    deterministic. Raises TurtleSyntaxError with position information on
    malformed input and UnsupportedFeature on constructs outside the subset.
    """
    if not isinstance(text, str):
        raise TypeError("parse_turtle expects a str")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Turtle serialization
# ---------------------------------------------------------------------------

_SAFE_LOCAL_RE = re.compile(r"^([A-Za-z0-9_][A-Za-z0-9_-]*)?$")

_OUT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_literal(s: str) -> str:
    return "".join(_OUT_ESCAPES.get(c, c) for c in s)


def _shorten(iri: Iri, prefixes: Mapping[str, str]) -> str:
    # Longest namespace wins; ties broken by label so output is deterministic.
    best = None
    for label, ns in prefixes.items():
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if _SAFE_LOCAL_RE.match(local):
                if best is None or len(ns) > best[0] or (len(ns) == best[0] and label < best[1]):
                    best = (len(ns), label, local)
    if best is None:
        return f"<{iri.value}>"
    return f"{best[1]}:{best[2]}"


def _render_term(t: Term, prefixes: Mapping[str, str]) -> str:
    if isinstance(t, Iri):
        return _shorten(t, prefixes)
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    body = f'"{_escape_literal(t.lexical)}"'
    if t.language is not None:
        return f"{body}@{t.language}"
    if t.datatype == XSD_STRING:
        return body
    return f"{body}^^{_shorten(t.datatype, prefixes)}"


def serialize_turtle(g: Graph) -> str:
    """Serialize a Graph to Turtle, deterministically.

    Prefix declarations are the union of the engine defaults and the graph's
    own prefixes, sorted by label. Triples are grouped by subject; subjects,
    predicates and objects are emitted in sorted order, so identical graphs
    yield byte-identical output. Output uses LF line endings and ends with a
    newline.
    """
    prefixes = dict(DEFAULT_PREFIXES)
    prefixes.update(g.prefixes)
    lines = [f"@prefix {label}: <{ns}> ." for label, ns in sorted(prefixes.items())]

    by_subject: dict[tuple, list[Triple]] = {}
    for t in g.triples:
        by_subject.setdefault(_term_key(t.subject), []).append(t)

    for skey in sorted(by_subject):
        group = by_subject[skey]
        subject = group[0].subject
        by_pred: dict[str, list[Term]] = {}
        for t in group:
            by_pred.setdefault(t.predicate.value, []).append(t.object)
        lines.append("")
        parts = []
        for pred_value in sorted(by_pred):
            pred = "a" if pred_value == RDF_TYPE.value else _shorten(Iri(pred_value), prefixes)
            objs = sorted(by_pred[pred_value], key=_term_key)
            rendered = ", ".join(_render_term(o, prefixes) for o in objs)
            parts.append(f"{pred} {rendered}")
        head = _render_term(subject, prefixes)
        body = " ;\n    ".join(parts)
        lines.append(f"{head} {body} .")

    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Graph isomorphism
# ---------------------------------------------------------------------------

ISOMORPHISM_BLANK_CAP = 8


def _blank_labels(g: Graph) -> list[str]:
    labels = set()
    for t in g.triples:
        if isinstance(t.subject, BlankNode):
            labels.add(t.subject.label)
        if isinstance(t.object, BlankNode):
            labels.add(t.object.label)
    return sorted(labels)


def _apply_mapping(triples: frozenset, mapping: dict[str, str]) -> frozenset:
    def m(term: Term) -> Term:
        if isinstance(term, BlankNode):
            return BlankNode(mapping[term.label])
        return term
    return frozenset(Triple(m(t.subject), t.predicate, m(t.object)) for t in triples)


def isomorphic(a: Graph, b: Graph) -> bool:
    """True iff some bijection of blank-node labels makes the triple sets equal.

    Ground graphs compare as plain sets. Brute-force bijection search, capped
    at 8 blank nodes per graph (TooManyBlankNodes beyond that). Prefix maps
    do not participate in isomorphism.
    """
    if len(a.triples) != len(b.triples):
        return False
    la, lb = _blank_labels(a), _blank_labels(b)
    if len(la) != len(lb):
        return False
    if not la:
        return a.triples == b.triples
    if len(la) > ISOMORPHISM_BLANK_CAP or len(lb) > ISOMORPHISM_BLANK_CAP:
        raise TooManyBlankNodes(
            f"graphs have {len(la)} blank nodes; isomorphism capped at {ISOMORPHISM_BLANK_CAP}")

    ground_a = frozenset(t for t in a.triples
                         if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode))
    ground_b = frozenset(t for t in b.triples
                         if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode))
    if ground_a != ground_b:
        return False

    rest_a = a.triples - ground_a
    rest_b = b.triples - ground_b
    for perm in itertools.permutations(lb):
        mapping = dict(zip(la, perm))
        if _apply_mapping(rest_a, mapping) == rest_b:
            return True
    return False


def iri_join(base: Iri, *segments: str) -> Iri:
    """Join path segments onto a base IRI, normalizing slashes."""
    out = base.value.rstrip("/")
    for seg in segments:
        out += "/" + seg.strip("/")
    return Iri(out)
