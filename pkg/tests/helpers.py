"""Shared test utilities: independent oracles and random instance builders.

Everything here recomputes expected results by a different route than the
code under test (naive fixpoints, brute-force enumeration, GF(2) linear
algebra), so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import json
import random
from pathlib import Path

from ontosafe.inference import GuardedHornRule, _instantiate, _match_atom
from ontosafe.matroids import ExplicitMatroid, Matroid, PartitionMatroid

FIXTURES = Path(__file__).parent / "fixtures"


def load_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_basis_matroid(name: str):
    """(ExplicitMatroid, element names) from a bases fixture file."""
    data = json.loads(load_text(name))
    elements = data["elements"]
    index = {e: i for i, e in enumerate(elements)}
    bases = [frozenset(index[e] for e in base) for base in data["bases"]]
    return ExplicitMatroid(len(elements), bases), elements


def gf2_rank(vectors) -> int:
    basis = []
    rank = 0
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            rank += 1
    return rank


class LinearGF2(Matroid):
    """Matroid of a list of GF(2) column vectors packed into ints."""

    def __init__(self, vectors):
        super().__init__(len(vectors))
        self.vectors = list(vectors)

    def is_independent(self, elements) -> bool:
        self._check_elements(elements)
        vs = [self.vectors[e] for e in elements]
        return gf2_rank(vs) == len(vs)


def random_gf2_matroid(rng: random.Random, size: int, dim: int) -> LinearGF2:
    return LinearGF2([rng.randint(1, (1 << dim) - 1) for _ in range(size)])


def random_partition_matroid(rng: random.Random, size: int) -> PartitionMatroid:
    block_count = rng.randint(1, size)
    block_of = {e: rng.randrange(block_count) for e in range(size)}
    capacity = {b: rng.randint(1, 2) for b in set(block_of.values())}
    return PartitionMatroid(size, block_of, capacity)


def naive_fixpoint(base, rules, available_guards=frozenset()):
    """Reference closure: re-scan every rule against every fact tuple until
    nothing new appears. No indexing, no frontier bookkeeping."""
    active = [
        r for r in rules if r.guard is None or r.guard in available_guards
    ]
    known = set(base)
    while True:
        new = set()
        for rule in active:
            for combo in itertools.product(known, repeat=len(rule.body)):
                binding: dict = {}
                ok = True
                for atom, fact in zip(rule.body, combo):
                    binding = _match_atom(atom, fact, binding)
                    if binding is None:
                        ok = False
                        break
                if not ok:
                    continue
                head = _instantiate(rule.head, binding)
                if head is not None and head not in known:
                    new.add(head)
        if not new:
            return frozenset(known)
        known |= new


def brute_force_max_weight_independent(matroid: Matroid, weights) -> float:
    """Best total weight over all independent subsets, by full enumeration."""
    ground = list(range(matroid.size))
    best = 0.0
    for r in range(len(ground) + 1):
        for combo in itertools.combinations(ground, r):
            if matroid.is_independent(frozenset(combo)):
                best = max(best, sum(weights[e] for e in combo))
    return best


def brute_force_common_independents(matroids, size: int):
    """Every subset independent in all matroids. Exponential; small sizes."""
    out = []
    for r in range(size + 1):
        for combo in itertools.combinations(range(size), r):
            f = frozenset(combo)
            if all(m.is_independent(f) for m in matroids):
                out.append(f)
    return out


def all_max_weight_common_independents(matroids, weights, size: int):
    """All common independent sets of maximum total weight, found by a
    depth-first search with a suffix-weight bound (equal-weight branches
    are kept, so the collection is complete)."""
    suffix = [0.0] * (size + 1)
    for e in range(size - 1, -1, -1):
        suffix[e] = suffix[e + 1] + max(weights[e], 0.0)
    best = [float("-inf")]
    found: list[frozenset] = []

    def rec(pos, chosen, w):
        if w + suffix[pos] < best[0] - 1e-9:
            return
        if pos == size:
            if w > best[0] + 1e-9:
                best[0] = w
                found.clear()
                found.append(frozenset(chosen))
            elif abs(w - best[0]) <= 1e-9:
                found.append(frozenset(chosen))
            return
        trial = frozenset(chosen | {pos})
        if all(m.is_independent(trial) for m in matroids):
            chosen.add(pos)
            rec(pos + 1, chosen, w + weights[pos])
            chosen.discard(pos)
        rec(pos + 1, chosen, w)

    rec(0, set(), 0.0)
    return best[0], found


def random_atomic_ontology_text(rng: random.Random, max_triples: int = 30) -> str:
    """Random relation file using only atomic objects and the metadata kinds
    reachability_closure supports."""
    individuals = [f"n{i}" for i in range(rng.randint(3, 8))]
    props = [f"p{i}" for i in range(rng.randint(1, 4))]
    n = rng.randint(1, max_triples)
    lines = []
    seen = set()
    rid = 0
    while len(lines) < n:
        s = rng.choice(individuals)
        p = rng.choice(props)
        o = rng.choice(individuals)
        if (s, p, o) in seen:
            if len(seen) >= len(individuals) ** 2 * len(props):
                break
            continue
        seen.add((s, p, o))
        lines.append(f"r{rid} 1 {s} {p} {o}")
        rid += 1
    for p in props:
        if rng.random() < 0.5:
            lines.append(f"meta {p} transitive")
        if rng.random() < 0.3:
            lines.append(f"meta {p} symmetric")
    for p, q in itertools.combinations(props, 2):
        if rng.random() < 0.2:
            lines.append(f"meta {p} subPropertyOf {q}")
        elif rng.random() < 0.1:
            lines.append(f"meta {p} inverseOf {q}")
    return "\n".join(lines) + "\n"
