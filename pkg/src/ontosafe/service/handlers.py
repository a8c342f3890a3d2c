"""Endpoint logic, independent of the web framework.

Every handler maps a request model to a response model and reports failures
as ServiceError with a kind: "parse" for malformed input or bad references,
"limit" for exceeded enumeration caps and oracle envelopes. The CLI turns
those kinds into exit codes 2 and 3.
"""

from __future__ import annotations

from ..inference import (
    CapExceededError,
    closure,
    compile_rules,
    is_safe,
    minimal_support_sets,
)
from ..model import (
    Ontology,
    OntologyParseError,
    minimize_family,
    parse_minsets,
    parse_ontology,
    parse_sensitive,
    render_fact,
)
from ..oracle import EnvelopeExceededError
from ..solver import sanitize
from .schemas import (
    CheckRequest,
    CheckResponse,
    ClosureRequest,
    ClosureResponse,
    ExplainRequest,
    ExplainResponse,
    FactMinsets,
    SanitizeRequest,
    SanitizeResponse,
)


class ServiceError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind
        self.message = message


def _load_ontology(text: str) -> Ontology:
    try:
        return parse_ontology(text)
    except OntologyParseError as exc:
        raise ServiceError("parse", str(exc)) from exc


def _load_sensitive(text: str, ontology: Ontology):
    try:
        return parse_sensitive(text, ontology)
    except OntologyParseError as exc:
        raise ServiceError("parse", str(exc)) from exc


def full_closure(ontology: Ontology):
    """Closure of the whole ontology with every rule license available."""
    return closure(
        ontology.facts().values(),
        compile_rules(ontology),
        frozenset(ontology.ids()),
    )


def handle_closure(req: ClosureRequest) -> ClosureResponse:
    ontology = _load_ontology(req.ontology)
    return ClosureResponse(
        facts=sorted(render_fact(f) for f in full_closure(ontology))
    )


def handle_check(req: CheckRequest) -> CheckResponse:
    ontology = _load_ontology(req.ontology)
    sensitive = _load_sensitive(req.sensitive, ontology)
    subset = (
        frozenset(req.subset) if req.subset is not None else frozenset(ontology.ids())
    )
    try:
        report = is_safe(subset, ontology, sensitive)
    except ValueError as exc:
        raise ServiceError("parse", str(exc)) from exc
    if report.safe:
        return CheckResponse(safe=True)
    return CheckResponse(
        safe=False,
        witness_fact=render_fact(report.witness_fact),
        witness_support=sorted(report.witness_support),
    )


def handle_explain(req: ExplainRequest) -> ExplainResponse:
    ontology = _load_ontology(req.ontology)
    sensitive = _load_sensitive(req.sensitive, ontology)
    try:
        per_fact = minimal_support_sets(ontology, sensitive, cap=req.cap)
    except CapExceededError as exc:
        raise ServiceError("limit", str(exc)) from exc
    entries = []
    for fact in sorted(per_fact):
        family = sorted(tuple(sorted(ms)) for ms in per_fact[fact])
        entries.append(
            FactMinsets(fact=render_fact(fact), minsets=[list(ms) for ms in family])
        )
    return ExplainResponse(facts=entries)


def handle_sanitize(req: SanitizeRequest) -> SanitizeResponse:
    ontology = _load_ontology(req.ontology)
    if req.minsets is not None:
        try:
            family = parse_minsets(req.minsets, ontology)
        except OntologyParseError as exc:
            raise ServiceError("parse", str(exc)) from exc
    elif req.sensitive is not None:
        sensitive = _load_sensitive(req.sensitive, ontology)
        try:
            per_fact = minimal_support_sets(ontology, sensitive, cap=req.cap)
        except CapExceededError as exc:
            raise ServiceError("limit", str(exc)) from exc
        family = minimize_family(
            ms for fam in per_fact.values() for ms in fam
        )
    else:
        raise ServiceError(
            "parse", "sanitize needs a minsets file or a sensitive-facts file"
        )
    try:
        result = sanitize(
            ontology, family, method=req.method, dump_border=req.dump_border
        )
    except EnvelopeExceededError as exc:
        raise ServiceError("limit", str(exc)) from exc
    except ValueError as exc:
        raise ServiceError("parse", str(exc)) from exc
    return SanitizeResponse(
        kept=sorted(result.kept),
        removed=sorted(result.removed),
        weight=result.weight,
        method=result.method,
        optimal=result.optimal,
        border_dump=result.border_dump,
    )
