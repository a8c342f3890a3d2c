"""Guarded Horn-rule compilation, forward-chaining closure, and minimal
support-set extraction.

Metadata rules (transitive, symmetric, inverseOf, subPropertyOf) and the
builtin subset/equivalence/membership bridging schemas are public: they fire
unconditionally and never contribute to support sets. Rules compiled from a
conjunctive relation are guarded by that relation's id: they fire only while
the id is available, and the id joins every support set derived through them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import AbstractSet, Iterable, Mapping

from .model import (
    EQUIV_PROP,
    INVERSE_OF,
    MEMBER_PROP,
    SUBSET_PROP,
    SUB_PROPERTY_OF,
    SYMMETRIC,
    TRANSITIVE,
    Fact,
    Ontology,
    render_fact,
)

DEFAULT_SUPPORT_CAP = 10_000


class CapExceededError(RuntimeError):
    """A fact accumulated more minimal support sets than the cap allows."""

    def __init__(self, fact: Fact, cap: int):
        super().__init__(
            f"support-set cap {cap} exceeded while deriving {render_fact(fact)!r}"
        )
        self.fact = fact
        self.cap = cap


def _is_var(token: str) -> bool:
    return token.startswith("?")


@dataclass(frozen=True)
class AtomPattern:
    """A fact pattern. Subject is an identifier or a `?var`; the object is
    either ground or a single `?var` binding a whole object expression."""

    subject: str
    prop: str
    obj: tuple[str, ...]

    def __post_init__(self):
        if any(_is_var(part) for part in self.obj) and len(self.obj) != 1:
            raise ValueError("object pattern must be ground or a single variable")

    def variables(self) -> frozenset[str]:
        names = set()
        if _is_var(self.subject):
            names.add(self.subject)
        if len(self.obj) == 1 and _is_var(self.obj[0]):
            names.add(self.obj[0])
        return frozenset(names)


@dataclass(frozen=True)
class GuardedHornRule:
    body: tuple[AtomPattern, ...]
    head: AtomPattern
    guard: str | None = None

    def __post_init__(self):
        if not self.body:
            raise ValueError("rule body must be non-empty")
        bound = frozenset().union(*(a.variables() for a in self.body))
        if not self.head.variables() <= bound:
            raise ValueError("every head variable must occur in the body")


@dataclass(frozen=True)
class SafetyReport:
    safe: bool
    witness_fact: Fact | None
    witness_support: frozenset[str] | None


def _match_atom(pattern: AtomPattern, fact: Fact, binding: dict) -> dict | None:
    subject, prop, obj = fact
    if pattern.prop != prop:
        return None
    out = binding
    if _is_var(pattern.subject):
        want = (subject,)
        bound = out.get(pattern.subject)
        if bound is None:
            out = dict(out)
            out[pattern.subject] = want
        elif bound != want:
            return None
    elif pattern.subject != subject:
        return None
    if len(pattern.obj) == 1 and _is_var(pattern.obj[0]):
        var = pattern.obj[0]
        bound = out.get(var)
        if bound is None:
            if out is binding:
                out = dict(out)
            out[var] = obj
        elif bound != obj:
            return None
    elif pattern.obj != obj:
        return None
    return out


def _instantiate(head: AtomPattern, binding: dict) -> Fact | None:
    if _is_var(head.subject):
        expr = binding[head.subject]
        if len(expr) != 1:
            return None  # a conjunction cannot stand as a subject
        subject = expr[0]
    else:
        subject = head.subject
    if len(head.obj) == 1 and _is_var(head.obj[0]):
        obj = binding[head.obj[0]]
    else:
        obj = head.obj
    return (subject, head.prop, obj)


def _index_by_prop(facts: Iterable[Fact]) -> dict[str, list[Fact]]:
    index: dict[str, list[Fact]] = {}
    for fact in sorted(facts):
        index.setdefault(fact[1], []).append(fact)
    return index


def _join(atoms, position, binding, index, out_facts):
    """Extend `binding` over body atoms from `position` on, yielding
    (binding, matched facts) in deterministic order."""
    if position == len(atoms):
        yield binding, tuple(out_facts)
        return
    atom = atoms[position]
    for fact in index.get(atom.prop, ()):
        extended = _match_atom(atom, fact, binding)
        if extended is None:
            continue
        out_facts.append(fact)
        yield from _join(atoms, position + 1, extended, index, out_facts)
        out_facts.pop()


def _anchored_matches(rule, older_index, known_index, frontier_index):
    """Matches of `rule` with at least one body atom on a frontier fact.

    The anchor atom takes frontier facts; atoms before it take only older
    facts, so every new combination is enumerated exactly once per round.
    """
    body = rule.body
    for anchor in range(len(body)):
        for fact in frontier_index.get(body[anchor].prop, ()):
            binding = _match_atom(body[anchor], fact, {})
            if binding is None:
                continue
            for pre_binding, pre_facts in _join(
                body[:anchor], 0, binding, older_index, []
            ):
                for full_binding, post_facts in _join(
                    body[anchor + 1 :], 0, pre_binding, known_index, []
                ):
                    yield full_binding, pre_facts + (fact,) + post_facts


def _active_rules(rules, available_guards):
    return [r for r in rules if r.guard is None or r.guard in available_guards]


def closure(
    base: Iterable[Fact],
    rules: Iterable[GuardedHornRule],
    available_guards: AbstractSet[str] = frozenset(),
) -> frozenset[Fact]:
    """Least fixpoint of `rules` over `base`, semi-naive (only new facts
    re-trigger rules)."""
    active = _active_rules(rules, available_guards)
    known = set(base)
    frontier = set(known)
    while frontier:
        known_index = _index_by_prop(known)
        frontier_index = _index_by_prop(frontier)
        older_index = _index_by_prop(known - frontier)
        new: set[Fact] = set()
        for rule in active:
            for binding, _facts in _anchored_matches(
                rule, older_index, known_index, frontier_index
            ):
                fact = _instantiate(rule.head, binding)
                if fact is not None and fact not in known:
                    new.add(fact)
        known |= new
        frontier = new
    return frozenset(known)


def closure_with_supports(
    base_supports: Mapping[Fact, frozenset[str]],
    rules: Iterable[GuardedHornRule],
    available_guards: AbstractSet[str],
) -> tuple[frozenset[Fact], dict[Fact, frozenset[str]]]:
    """Closure tracking one sufficient support set of relation ids per fact.

    A rule firing contributes the union of its body facts' supports plus its
    guard. The first derivation of a fact wins; enumeration order is
    deterministic, so the tracked supports are too.
    """
    active = _active_rules(rules, available_guards)
    supports: dict[Fact, frozenset[str]] = dict(base_supports)
    known = set(supports)
    frontier = set(known)
    while frontier:
        known_index = _index_by_prop(known)
        frontier_index = _index_by_prop(frontier)
        older_index = _index_by_prop(known - frontier)
        new: dict[Fact, frozenset[str]] = {}
        for rule in active:
            guard_part = frozenset() if rule.guard is None else frozenset({rule.guard})
            for binding, body_facts in _anchored_matches(
                rule, older_index, known_index, frontier_index
            ):
                fact = _instantiate(rule.head, binding)
                if fact is None or fact in known or fact in new:
                    continue
                new[fact] = guard_part.union(*(supports[f] for f in body_facts))
        supports.update(new)
        known |= set(new)
        frontier = set(new)
    return frozenset(known), supports


def _present_properties(ontology: Ontology) -> set[str]:
    """Properties whose facts can occur in the closure: those on relations,
    those reachable through subPropertyOf/inverseOf lifting, and isSubsetOf
    when conjunction compilation will emit subset facts."""
    present = {t.prop for t in ontology.relations}
    if any(
        len(t.obj) > 1 and t.prop in (EQUIV_PROP, SUBSET_PROP)
        for t in ontology.relations
    ):
        present.add(SUBSET_PROP)
    changed = True
    while changed:
        changed = False
        for m in ontology.metadata:
            if m.kind == SUB_PROPERTY_OF and m.prop in present and m.arg not in present:
                present.add(m.arg)
                changed = True
            elif m.kind == INVERSE_OF:
                if m.prop in present and m.arg not in present:
                    present.add(m.arg)
                    changed = True
                if m.arg in present and m.prop not in present:
                    present.add(m.prop)
                    changed = True
    return present


def _builtin_rules(ontology: Ontology) -> list[GuardedHornRule]:
    present = _present_properties(ontology)
    rules: list[GuardedHornRule] = []
    if EQUIV_PROP in present:
        rules.append(
            GuardedHornRule(
                body=(AtomPattern("?x", EQUIV_PROP, ("?y",)),),
                head=AtomPattern("?y", EQUIV_PROP, ("?x",)),
            )
        )
    if MEMBER_PROP in present and SUBSET_PROP in present:
        rules.append(
            GuardedHornRule(
                body=(
                    AtomPattern("?x", MEMBER_PROP, ("?c",)),
                    AtomPattern("?c", SUBSET_PROP, ("?d",)),
                ),
                head=AtomPattern("?x", MEMBER_PROP, ("?d",)),
            )
        )
    if MEMBER_PROP in present and EQUIV_PROP in present:
        rules.append(
            GuardedHornRule(
                body=(
                    AtomPattern("?x", MEMBER_PROP, ("?c",)),
                    AtomPattern("?c", EQUIV_PROP, ("?d",)),
                ),
                head=AtomPattern("?x", MEMBER_PROP, ("?d",)),
            )
        )
        rules.append(
            GuardedHornRule(
                body=(
                    AtomPattern("?x", MEMBER_PROP, ("?d",)),
                    AtomPattern("?c", EQUIV_PROP, ("?d",)),
                ),
                head=AtomPattern("?x", MEMBER_PROP, ("?c",)),
            )
        )
    return rules


def _metadata_rules(ontology: Ontology) -> list[GuardedHornRule]:
    rules = []
    for meta in sorted(ontology.metadata, key=lambda m: m.render()):
        p = meta.prop
        if meta.kind == TRANSITIVE:
            rules.append(
                GuardedHornRule(
                    body=(
                        AtomPattern("?x", p, ("?y",)),
                        AtomPattern("?y", p, ("?z",)),
                    ),
                    head=AtomPattern("?x", p, ("?z",)),
                )
            )
        elif meta.kind == SYMMETRIC:
            rules.append(
                GuardedHornRule(
                    body=(AtomPattern("?x", p, ("?y",)),),
                    head=AtomPattern("?y", p, ("?x",)),
                )
            )
        elif meta.kind == INVERSE_OF:
            # p(x,y) <-> q(y,x), both directions.
            rules.append(
                GuardedHornRule(
                    body=(AtomPattern("?x", p, ("?y",)),),
                    head=AtomPattern("?y", meta.arg, ("?x",)),
                )
            )
            rules.append(
                GuardedHornRule(
                    body=(AtomPattern("?x", meta.arg, ("?y",)),),
                    head=AtomPattern("?y", p, ("?x",)),
                )
            )
        elif meta.kind == SUB_PROPERTY_OF:
            rules.append(
                GuardedHornRule(
                    body=(AtomPattern("?x", p, ("?y",)),),
                    head=AtomPattern("?x", meta.arg, ("?y",)),
                )
            )
    return rules


def _guarded_rules(ontology: Ontology) -> list[GuardedHornRule]:
    """Per-relation rules for conjunctive subset/equivalence definitions.

    A conjunctive relation acts as both a fact and a rule license: everything
    below is guarded by the relation id, so the definition's inferential power
    disappears from subsets that drop the relation.
    """
    rules: list[GuardedHornRule] = []
    for t in ontology.relations:
        if len(t.obj) < 2 or t.prop not in (EQUIV_PROP, SUBSET_PROP):
            continue
        source = AtomPattern(t.subject, t.prop, t.obj)
        for operand in t.obj:
            rules.append(
                GuardedHornRule(
                    body=(source,),
                    head=AtomPattern(t.subject, SUBSET_PROP, (operand,)),
                    guard=t.id,
                )
            )
        if t.prop != EQUIV_PROP:
            continue  # subset definitions are one-directional
        rules.append(
            GuardedHornRule(
                body=tuple(
                    AtomPattern("?x", SUBSET_PROP, (operand,)) for operand in t.obj
                ),
                head=AtomPattern("?x", SUBSET_PROP, (t.subject,)),
                guard=t.id,
            )
        )
        rules.append(
            GuardedHornRule(
                body=tuple(
                    AtomPattern("?x", MEMBER_PROP, (operand,)) for operand in t.obj
                ),
                head=AtomPattern("?x", MEMBER_PROP, (t.subject,)),
                guard=t.id,
            )
        )
        for operand in t.obj:
            rules.append(
                GuardedHornRule(
                    body=(AtomPattern("?x", MEMBER_PROP, (t.subject,)),),
                    head=AtomPattern("?x", MEMBER_PROP, (operand,)),
                    guard=t.id,
                )
            )
    return rules


def compile_rules(ontology: Ontology) -> tuple[GuardedHornRule, ...]:
    """All rules for the ontology: metadata rules and builtin bridging
    schemas unguarded, conjunctive-definition rules guarded by relation id."""
    return tuple(
        _metadata_rules(ontology) + _builtin_rules(ontology) + _guarded_rules(ontology)
    )


def is_safe(
    q: AbstractSet[str],
    ontology: Ontology,
    sensitive: AbstractSet[Fact],
) -> SafetyReport:
    """Can the relations in `q` (their facts plus their rule licenses, with
    public metadata) derive any sensitive fact? Unsafe reports carry one
    offending fact and one sufficient support set drawn from `q`."""
    facts_by_id = ontology.facts()
    unknown = set(q) - set(facts_by_id)
    if unknown:
        raise ValueError(f"unknown relation ids in subset: {sorted(unknown)}")
    base = {facts_by_id[rid]: frozenset({rid}) for rid in q}
    rules = compile_rules(ontology)
    closed, supports = closure_with_supports(base, rules, frozenset(q))
    offending = sorted(closed & set(sensitive))
    if not offending:
        return SafetyReport(True, None, None)
    fact = offending[0]
    return SafetyReport(False, fact, supports[fact])


def _merge_minimal(family: set[frozenset[str]], candidate: frozenset[str]) -> bool:
    """Insert candidate into an antichain family; returns True on change."""
    for member in family:
        if member <= candidate:
            return False
    for member in [m for m in family if candidate < m]:
        family.discard(member)
    family.add(candidate)
    return True


def _combine_families(left, right, cap: int, fact: Fact) -> set[frozenset[str]]:
    out: set[frozenset[str]] = set()
    for a, b in product(left, right):
        _merge_minimal(out, a | b)
        if len(out) > cap:
            raise CapExceededError(fact, cap)
    return out


def minimal_support_sets(
    ontology: Ontology,
    sensitive: AbstractSet[Fact],
    cap: int = DEFAULT_SUPPORT_CAP,
) -> dict[Fact, frozenset[frozenset[str]]]:
    """For each sensitive fact, the antichain of inclusion-minimal relation-id
    sets that suffice to derive it (empty if the fact is underivable).

    Fixpoint over per-fact support families with minimization at every step;
    raises CapExceededError as soon as any fact's family exceeds `cap`.
    """
    rules = compile_rules(ontology)
    facts_by_id = ontology.facts()
    all_guards = frozenset(ontology.ids())
    full = closure(facts_by_id.values(), rules, all_guards)
    index = _index_by_prop(full)
    active = _active_rules(rules, all_guards)

    families: dict[Fact, set[frozenset[str]]] = {
        fact: {frozenset({rid})} for rid, fact in facts_by_id.items()
    }
    changed = True
    while changed:
        changed = False
        for rule in active:
            guard_family = (
                {frozenset()} if rule.guard is None else {frozenset({rule.guard})}
            )
            for binding, body_facts in _join(rule.body, 0, {}, index, []):
                head = _instantiate(rule.head, binding)
                if head is None:
                    continue
                combined = guard_family
                feasible = True
                for body_fact in body_facts:
                    body_family = families.get(body_fact)
                    if not body_family:
                        feasible = False
                        break
                    combined = _combine_families(combined, body_family, cap, head)
                if not feasible:
                    continue
                family = families.setdefault(head, set())
                for candidate in sorted(combined, key=sorted):
                    if _merge_minimal(family, candidate):
                        changed = True
                    if len(family) > cap:
                        raise CapExceededError(head, cap)
    return {fact: frozenset(families.get(fact, set())) for fact in set(sensitive)}


def reachability_closure(ontology: Ontology) -> frozenset[Fact]:
    """Closure of an atomic ontology computed by per-property breadth-first
    reachability over the relation graph, as an independent cross-check of
    closure(). Requires every relation object to be a single identifier."""
    for t in ontology.relations:
        if len(t.obj) != 1:
            raise ValueError(
                f"reachability closure requires atomic relations; {t.id} is not"
            )

    symmetric = {m.prop for m in ontology.metadata if m.kind == SYMMETRIC}
    transitive = {m.prop for m in ontology.metadata if m.kind == TRANSITIVE}
    inverse_pairs = [(m.prop, m.arg) for m in ontology.metadata if m.kind == INVERSE_OF]
    sub_pairs = [
        (m.prop, m.arg) for m in ontology.metadata if m.kind == SUB_PROPERTY_OF
    ]
    builtin_eq_sym = EQUIV_PROP in _present_properties(ontology)

    facts: set[tuple[str, str, str]] = {
        (t.subject, t.prop, t.obj[0]) for t in ontology.relations
    }

    def propagate() -> bool:
        grew = False
        while True:
            new: set[tuple[str, str, str]] = set()
            for x, p, y in facts:
                if p in symmetric or (builtin_eq_sym and p == EQUIV_PROP):
                    new.add((y, p, x))
                for a, b in sub_pairs:
                    if p == a:
                        new.add((x, b, y))
                for a, b in inverse_pairs:
                    if p == a:
                        new.add((y, b, x))
                    if p == b:
                        new.add((y, a, x))
            new -= facts
            if not new:
                return grew
            facts.update(new)
            grew = True

    def transitive_pass() -> bool:
        grew = False
        for p in sorted(transitive):
            adjacency: dict[str, set[str]] = {}
            for x, prop, y in facts:
                if prop == p:
                    adjacency.setdefault(x, set()).add(y)
            for start in sorted(adjacency):
                reached: set[str] = set()
                queue = list(adjacency[start])
                while queue:
                    node = queue.pop()
                    if node in reached:
                        continue
                    reached.add(node)
                    queue.extend(adjacency.get(node, ()))
                for node in reached:
                    if (start, p, node) not in facts:
                        facts.add((start, p, node))
                        grew = True
        return grew

    def bridging_pass() -> bool:
        # Membership flows along subset and equivalence edges (the latter
        # already symmetrized by propagate()).
        grew = False
        flow: dict[str, set[str]] = {}
        for x, p, y in facts:
            if p in (SUBSET_PROP, EQUIV_PROP):
                flow.setdefault(x, set()).add(y)
        members: dict[str, set[str]] = {}
        for x, p, y in facts:
            if p == MEMBER_PROP:
                members.setdefault(x, set()).add(y)
        for individual in sorted(members):
            reached: set[str] = set()
            queue = list(members[individual])
            while queue:
                node = queue.pop()
                if node in reached:
                    continue
                reached.add(node)
                queue.extend(flow.get(node, ()))
            for node in reached:
                if (individual, MEMBER_PROP, node) not in facts:
                    facts.add((individual, MEMBER_PROP, node))
                    grew = True
        return grew

    while True:
        grew = propagate()
        grew = transitive_pass() or grew
        grew = bridging_pass() or grew
        if not grew:
            break
    return frozenset((x, p, (y,)) for x, p, y in facts)
