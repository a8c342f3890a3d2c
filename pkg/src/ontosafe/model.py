"""Ontology data model and the line-oriented file formats.

An ontology is a list of weighted relations (triples whose object may be a
conjunction of identifiers) plus a set of property-level metadata rules.
Relations carry stable ids so that other layers can talk about subsets of
the ontology by id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

# A ground fact: (subject, property, object operands sorted ascending).
Fact = tuple[str, str, tuple[str, ...]]

_IDENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")

META_KEYWORD = "meta"
MINSET_KEYWORD = "minset"

# Property names with builtin semantics in the inference engine.
SUBSET_PROP = "isSubsetOf"
EQUIV_PROP = "isEquivalentTo"
MEMBER_PROP = "isA"

# Metadata rule kinds, spelled exactly as they appear in ontology files.
TRANSITIVE = "transitive"
SYMMETRIC = "symmetric"
INVERSE_OF = "inverseOf"
SUB_PROPERTY_OF = "subPropertyOf"
_UNARY_KINDS = (TRANSITIVE, SYMMETRIC)
_BINARY_KINDS = (INVERSE_OF, SUB_PROPERTY_OF)


class OntologyParseError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def is_identifier(token: str) -> bool:
    return bool(_IDENT_RE.match(token))


def _require_identifier(token: str, line: int, role: str) -> str:
    if not is_identifier(token):
        raise OntologyParseError(line, f"invalid {role} {token!r}")
    return token


def parse_object(token: str, line: int = 0) -> tuple[str, ...]:
    """Parse an object expression: an identifier or `&`-joined identifiers."""
    parts = token.split("&")
    if any(not part for part in parts):
        raise OntologyParseError(line, f"malformed object expression {token!r}")
    for part in parts:
        _require_identifier(part, line, "object operand")
    return tuple(sorted(set(parts)))


def render_object(obj: tuple[str, ...]) -> str:
    return "&".join(obj)


def render_fact(fact: Fact) -> str:
    subject, prop, obj = fact
    return f"{subject} {prop} {render_object(obj)}"


def format_weight(weight: float) -> str:
    # Integral weights print without a trailing ".0" so files round-trip.
    if weight == int(weight):
        return str(int(weight))
    return repr(weight)


@dataclass(frozen=True)
class Triple:
    """One weighted relation. The object is a set of operands (AND semantics)."""

    id: str
    weight: float
    subject: str
    prop: str
    obj: tuple[str, ...]

    @property
    def fact(self) -> Fact:
        return (self.subject, self.prop, self.obj)

    def render(self) -> str:
        return (
            f"{self.id} {format_weight(self.weight)} "
            f"{self.subject} {self.prop} {render_object(self.obj)}"
        )


def canonicalize_triple(t: Triple) -> Triple:
    """Sort and dedupe the object operands. Idempotent."""
    canonical = tuple(sorted(set(t.obj)))
    if canonical == t.obj:
        return t
    return Triple(t.id, t.weight, t.subject, t.prop, canonical)


@dataclass(frozen=True)
class MetadataRule:
    """A property-level rule: transitive/symmetric (unary) or
    inverseOf/subPropertyOf (binary, with a distinct second property)."""

    kind: str
    prop: str
    arg: str | None = None

    def __post_init__(self):
        if self.kind in _UNARY_KINDS:
            if self.arg is not None:
                raise ValueError(f"{self.kind} takes no second property")
        elif self.kind in _BINARY_KINDS:
            if self.arg is None:
                raise ValueError(f"{self.kind} requires a second property")
            if self.arg == self.prop:
                raise ValueError(f"{self.kind} arguments must be distinct")
        else:
            raise ValueError(f"unknown metadata kind {self.kind!r}")

    def render(self) -> str:
        if self.arg is None:
            return f"{META_KEYWORD} {self.prop} {self.kind}"
        return f"{META_KEYWORD} {self.prop} {self.kind} {self.arg}"


@dataclass(frozen=True)
class Ontology:
    relations: tuple[Triple, ...]
    metadata: frozenset[MetadataRule]

    def __post_init__(self):
        seen_ids: set[str] = set()
        seen_facts: set[Fact] = set()
        for t in self.relations:
            if t.id in seen_ids:
                raise ValueError(f"duplicate relation id {t.id!r}")
            seen_ids.add(t.id)
            if t.fact in seen_facts:
                raise ValueError(f"duplicate relation fact {render_fact(t.fact)!r}")
            seen_facts.add(t.fact)

    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.relations)

    def by_id(self) -> dict[str, Triple]:
        return {t.id: t for t in self.relations}

    def facts(self) -> dict[str, Fact]:
        return {t.id: t.fact for t in self.relations}

    def weights(self) -> dict[str, float]:
        return {t.id: t.weight for t in self.relations}

    @property
    def individuals(self) -> frozenset[str]:
        names: set[str] = set()
        for t in self.relations:
            names.add(t.subject)
            names.update(t.obj)
        return frozenset(names)


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    """Yield (line number, tokens) for non-empty lines, comments stripped."""
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        yield number, stripped.split()


def _parse_metadata_line(tokens: list[str], line: int) -> MetadataRule:
    if len(tokens) < 3:
        raise OntologyParseError(line, "metadata line needs a property and a keyword")
    prop = _require_identifier(tokens[1], line, "property")
    kind = tokens[2]
    if kind in _UNARY_KINDS:
        if len(tokens) != 3:
            raise OntologyParseError(line, f"{kind} takes no extra argument")
        return MetadataRule(kind, prop)
    if kind in _BINARY_KINDS:
        if len(tokens) != 4:
            raise OntologyParseError(line, f"{kind} requires exactly one argument")
        arg = _require_identifier(tokens[3], line, "property")
        if arg == prop:
            raise OntologyParseError(line, f"{kind} arguments must be distinct")
        return MetadataRule(kind, prop, arg)
    raise OntologyParseError(line, f"unknown metadata keyword {kind!r}")


def parse_ontology(text: str) -> Ontology:
    """Parse the relation/metadata file format.

    Relation lines are `<id> <weight> <subject> <property> <object>` where the
    object is an identifier or `&`-joined identifiers without spaces. Metadata
    lines start with `meta`. `#` starts a comment; blank lines are skipped.
    """
    relations: list[Triple] = []
    metadata: set[MetadataRule] = set()
    seen_ids: dict[str, int] = {}
    seen_facts: dict[Fact, int] = {}
    for line, tokens in _content_lines(text):
        if tokens[0] == META_KEYWORD:
            metadata.add(_parse_metadata_line(tokens, line))
            continue
        if len(tokens) != 5:
            raise OntologyParseError(
                line, f"expected 5 fields on a relation line, got {len(tokens)}"
            )
        rid = _require_identifier(tokens[0], line, "relation id")
        try:
            weight = float(tokens[1])
        except ValueError:
            raise OntologyParseError(line, f"malformed weight {tokens[1]!r}") from None
        if not weight >= 0.0 or weight != weight or weight == float("inf"):
            raise OntologyParseError(line, f"weight must be a non-negative real, got {tokens[1]}")
        subject = _require_identifier(tokens[2], line, "subject")
        prop = _require_identifier(tokens[3], line, "property")
        obj = parse_object(tokens[4], line)
        if rid in seen_ids:
            raise OntologyParseError(line, f"duplicate relation id {rid!r}")
        seen_ids[rid] = line
        triple = Triple(rid, weight, subject, prop, obj)
        if triple.fact in seen_facts:
            raise OntologyParseError(line, f"duplicate relation {render_fact(triple.fact)!r}")
        seen_facts[triple.fact] = line
        relations.append(triple)
    return Ontology(tuple(relations), frozenset(metadata))


def serialize(ontology: Ontology) -> str:
    """Deterministic text form: relations in original order, then metadata
    sorted lexicographically. parse(serialize(o)) == o."""
    lines = [t.render() for t in ontology.relations]
    lines.extend(sorted(m.render() for m in ontology.metadata))
    return "".join(line + "\n" for line in lines)


def parse_sensitive(text: str, ontology: Ontology) -> frozenset[Fact]:
    """Parse sensitive facts, one `subject property object` per line.

    Sensitive facts may mention identifiers absent from the ontology; the
    ontology argument is accepted for interface symmetry only.
    """
    del ontology
    facts: set[Fact] = set()
    for line, tokens in _content_lines(text):
        if len(tokens) != 3:
            raise OntologyParseError(
                line, f"expected 3 fields on a sensitive-fact line, got {len(tokens)}"
            )
        subject = _require_identifier(tokens[0], line, "subject")
        prop = _require_identifier(tokens[1], line, "property")
        obj = parse_object(tokens[2], line)
        facts.add((subject, prop, obj))
    return frozenset(facts)


def minimize_family(sets: Iterable[frozenset[str]]) -> frozenset[frozenset[str]]:
    """Drop every member that is a superset of another member (antichain)."""
    unique = set(frozenset(s) for s in sets)
    return frozenset(
        s for s in unique if not any(other < s for other in unique)
    )


def parse_minsets(text: str, ontology: Ontology) -> frozenset[frozenset[str]]:
    """Parse `minset <id> <id> ...` lines into an antichain of id sets."""
    known = set(ontology.ids())
    family: set[frozenset[str]] = set()
    for line, tokens in _content_lines(text):
        if tokens[0] != MINSET_KEYWORD:
            raise OntologyParseError(line, f"expected a `{MINSET_KEYWORD}` line")
        ids = tokens[1:]
        if not ids:
            raise OntologyParseError(line, "empty minset")
        for rid in ids:
            if rid not in known:
                raise OntologyParseError(line, f"unknown relation id {rid!r}")
        family.add(frozenset(ids))
    return minimize_family(family)
