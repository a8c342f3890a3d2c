"""Matroid-intersection solvers and the end-to-end relation sanitizer.

Two matroids are intersected exactly with shortest augmenting paths. Three
matroids get a heuristic: a border graph records, for the current common
independent set, which outside elements create circuits where, and an
augmenting-tree search pairs every removal with a type-1 re-add. Candidate
trees are validated by direct independence checks before acceptance, so the
static bookkeeping can never corrupt the solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, Callable, Iterable, Sequence

from .matroids import Matroid, forbidden_set_matroid
from .model import Ontology, minimize_family
from .oracle import exact_hitting_set
from .reduction import ReducedInstance, build_reduction, extract_selection

EXHAUSTIVE_LIMIT = 64

SANITIZE_METHODS = ("greedy", "augment", "oracle")


@dataclass(frozen=True)
class SolveParams:
    max_labels_per_node: int = 64
    exhaustive: bool | None = None  # None: decide by ground size
    weighted_mode: bool = True

    def resolve_exhaustive(self, ground_size: int) -> bool:
        if self.exhaustive is None:
            return ground_size <= EXHAUSTIVE_LIMIT
        return self.exhaustive


@dataclass(frozen=True)
class Label:
    """Search state attached to a node: the tree fragment built so far and
    its net weight. (s1, w1) dominates (s2, w2) iff s1 <= s2 and w1 >= w2."""

    nodes: frozenset[int]
    weight: float

    def dominates(self, other: "Label") -> bool:
        return self.nodes <= other.nodes and self.weight >= other.weight


@dataclass(frozen=True)
class AugmentingTree:
    adds: frozenset[int]
    removes: frozenset[int]
    net_weight: float


@dataclass
class BorderGraph:
    """Circuit structure of every outside element against I_p.

    Removal edges run outside -> inside (types 2 and 3, one per element of
    the corresponding circuit); re-add edges run inside -> outside (type 1,
    from m1 circuits). Roots are outside elements with no m1 circuit.
    """

    inside: frozenset[int]
    outside: tuple[int, ...]
    roots: tuple[int, ...]
    circuit1: dict[int, frozenset[int] | None]
    circuit2: dict[int, frozenset[int] | None]
    circuit3: dict[int, frozenset[int] | None]
    readd: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def edges(self) -> list[tuple[int, int, int]]:
        out: list[tuple[int, int, int]] = []
        for e_out in self.outside:
            c1 = self.circuit1[e_out]
            if c1 is not None:
                out.extend((e_in, e_out, 1) for e_in in c1 - {e_out})
            for kind, circuits in ((2, self.circuit2), (3, self.circuit3)):
                c = circuits[e_out]
                if c is not None:
                    out.extend((e_out, e_in, kind) for e_in in c - {e_out})
        return sorted(out)


def build_border_graph(
    m1: Matroid, m2: Matroid, m3: Matroid, i_p: AbstractSet[int]
) -> BorderGraph:
    i_p = frozenset(i_p)
    for matroid in (m1, m2, m3):
        if not matroid.is_independent(i_p):
            raise ValueError("i_p must be independent in all three matroids")
    outside = tuple(e for e in range(m1.size) if e not in i_p)
    circuit1: dict[int, frozenset[int] | None] = {}
    circuit2: dict[int, frozenset[int] | None] = {}
    circuit3: dict[int, frozenset[int] | None] = {}
    readd: dict[int, list[int]] = {}
    roots = []
    for e in outside:
        circuit1[e] = m1.find_circuit(i_p, e)
        circuit2[e] = m2.find_circuit(i_p, e)
        circuit3[e] = m3.find_circuit(i_p, e)
        if circuit1[e] is None:
            roots.append(e)
        else:
            for x in circuit1[e] - {e}:
                readd.setdefault(x, []).append(e)
    return BorderGraph(
        inside=i_p,
        outside=outside,
        roots=tuple(roots),
        circuit1=circuit1,
        circuit2=circuit2,
        circuit3=circuit3,
        readd={x: tuple(sorted(zs)) for x, zs in readd.items()},
    )


def render_border_dump(border: BorderGraph, name_of: Callable[[int], str]) -> str:
    lines = [
        f"{name_of(src)} {name_of(dst)} type{kind}"
        for src, dst, kind in border.edges()
    ]
    return "".join(line + "\n" for line in sorted(lines))


def find_augmenting_tree(
    border: BorderGraph,
    m1: Matroid,
    m2: Matroid,
    m3: Matroid,
    i_p: AbstractSet[int],
    weights: Sequence[float],
    params: SolveParams | None = None,
) -> AugmentingTree | None:
    """Best valid augmenting tree for i_p, or None.

    Every root starts a tree; each opened circuit is closed either by a
    removal already in the tree or by removing a fresh element, and every
    removal is followed by exactly one type-1 re-add, keeping
    |adds| = |removes| + 1. Complete candidates are accepted only if
    (i_p - removes) | adds passes direct independence checks in all three
    matroids. Ties in net weight break toward the lexicographically
    smallest sorted adds sequence. In weighted mode only a strictly
    positive net weight is returned.
    """
    params = params or SolveParams()
    i_p = frozenset(i_p)
    exhaustive = params.resolve_exhaustive(m1.size)
    stores: dict[int, list[Label]] = {}
    best: list = [None]  # (net, adds_sorted, removes)

    def offer_label(node: int, used: frozenset[int], net: float) -> bool:
        if exhaustive:
            return True
        label = Label(used, net)
        store = stores.setdefault(node, [])
        if any(existing.dominates(label) for existing in store):
            return False
        store[:] = [ex for ex in store if not label.dominates(ex)]
        store.append(label)
        if len(store) > params.max_labels_per_node:
            store.sort(
                key=lambda l: (-l.weight, len(l.nodes), tuple(sorted(l.nodes)))
            )
            del store[params.max_labels_per_node :]
            if label not in store:
                return False
        return True

    def obligations(node: int) -> tuple[tuple[int, int], ...]:
        out = []
        if border.circuit2[node] is not None:
            out.append((node, 2))
        if border.circuit3[node] is not None:
            out.append((node, 3))
        return tuple(out)

    def consider(adds: tuple[int, ...], removes: frozenset[int], net: float):
        j = (i_p - removes) | set(adds)
        if not (
            m1.is_independent(j)
            and m2.is_independent(j)
            and m3.is_independent(j)
        ):
            return
        key = (net, tuple(sorted(adds)))
        if (
            best[0] is None
            or key[0] > best[0][0]
            or (key[0] == best[0][0] and key[1] < best[0][1])
        ):
            best[0] = (net, key[1], removes)

    def expand(adds, removes, used, pending, net):
        if not pending:
            consider(adds, removes, net)
            return
        (node, kind), rest = pending[0], pending[1:]
        circuit = (border.circuit2 if kind == 2 else border.circuit3)[node]
        circuit = circuit - {node}
        if circuit & removes:
            # Already closed by an earlier removal; validation has the final
            # say on whether that sharing is actually compatible.
            expand(adds, removes, used, rest, net)
        for x in sorted(circuit - used):
            for z in border.readd.get(x, ()):
                if z in used:
                    continue
                new_used = used | {x, z}
                new_net = net + weights[z] - weights[x]
                if not offer_label(z, new_used, new_net):
                    continue
                expand(
                    adds + (z,),
                    removes | {x},
                    new_used,
                    rest + obligations(z),
                    new_net,
                )

    for root in sorted(border.roots):
        used = frozenset({root})
        if not offer_label(root, used, weights[root]):
            continue
        expand((root,), frozenset(), used, obligations(root), weights[root])

    if best[0] is None:
        return None
    net, adds, removes = best[0]
    if params.weighted_mode and net <= 0:
        return None
    return AugmentingTree(frozenset(adds), removes, net)


def apply_augmentation(i_p: AbstractSet[int], t: AugmentingTree) -> frozenset[int]:
    """(i_p - removes) | adds; grows cardinality by exactly one."""
    i_p = frozenset(i_p)
    if t.adds & i_p:
        raise ValueError("tree adds elements already present in i_p")
    if not t.removes <= i_p:
        raise ValueError("tree removes elements absent from i_p")
    if len(t.adds) != len(t.removes) + 1:
        raise ValueError("tree must add exactly one more element than it removes")
    return (i_p - t.removes) | t.adds


def greedy_common_seed(
    matroids: Sequence[Matroid], weights: Sequence[float]
) -> frozenset[int]:
    """Insert elements by (weight desc, id asc) while the set stays common
    independent. An accelerator for solve_three, not a stopping rule."""
    chosen: set[int] = set()
    size = matroids[0].size
    for e in sorted(range(size), key=lambda e: (-weights[e], e)):
        if weights[e] < 0:
            continue
        trial = frozenset(chosen | {e})
        if all(m.is_independent(trial) for m in matroids):
            chosen.add(e)
    return frozenset(chosen)


def solve_three(
    inst: ReducedInstance, params: SolveParams | None = None
) -> frozenset[int]:
    """Grow a common independent set of (m1, m2, m3) by augmenting trees
    until none is found (cardinality mode) or none has positive net weight
    (weighted mode)."""
    params = params or SolveParams()
    m1, m2, m3 = inst.matroids()
    current = greedy_common_seed((m1, m2, m3), inst.weights)
    while True:
        border = build_border_graph(m1, m2, m3, current)
        tree = find_augmenting_tree(
            border, m1, m2, m3, current, inst.weights, params
        )
        if tree is None:
            return current
        current = apply_augmentation(current, tree)


def intersect_two_exact(
    ma: Matroid,
    mb: Matroid,
    seed: AbstractSet[int] = frozenset(),
) -> frozenset[int]:
    """Maximum-cardinality common independent set of two matroids via
    shortest augmenting paths (exact)."""
    current = frozenset(seed)
    if not (ma.is_independent(current) and mb.is_independent(current)):
        raise ValueError("seed must be independent in both matroids")
    while True:
        path = two_matroid_augmenting_path(ma, mb, current)
        if path is None:
            return current
        current = current.symmetric_difference(path)


def two_matroid_augmenting_path(
    ma: Matroid, mb: Matroid, current: AbstractSet[int]
) -> list[int] | None:
    """One shortest augmenting path (alternating add/remove/..., odd length)
    for the two-matroid exchange graph, or None. Breadth-first in
    deterministic id order."""
    current = frozenset(current)
    outside = [e for e in range(ma.size) if e not in current]
    sources = [y for y in outside if ma.is_independent(current | {y})]
    sinks = {y for y in outside if mb.is_independent(current | {y})}

    circuit_b: dict[int, frozenset[int]] = {}
    for y in outside:
        c = mb.find_circuit(current, y)
        if c is not None:
            circuit_b[y] = c - {y}
    readd: dict[int, list[int]] = {}
    for z in outside:
        c = ma.find_circuit(current, z)
        if c is not None:
            for x in sorted(c - {z}):
                readd.setdefault(x, []).append(z)

    parent: dict[int, int | None] = {}
    queue: list[int] = []
    for y in sorted(sources):
        parent[y] = None
        queue.append(y)
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        if node not in current:
            if node in sinks:
                path = [node]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            neighbors = sorted(circuit_b.get(node, ()))
        else:
            neighbors = readd.get(node, ())
        for nxt in neighbors:
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    return None


@dataclass(frozen=True)
class SanitizeResult:
    kept: frozenset[str]
    removed: frozenset[str]
    weight: float
    method: str
    optimal: bool
    border_dump: str | None = None


def sanitize(
    ontology: Ontology,
    minsets: Iterable[frozenset[str]],
    method: str = "augment",
    params: SolveParams | None = None,
    dump_border: bool = False,
) -> SanitizeResult:
    """Drop a minimum of weight so that no minimal support set survives.

    greedy: one (weight desc, id asc) scan, skipping completions.
    augment: forbidden-set matroid per minset, three-matroid reduction and
        augmenting-tree search, then local improvement (maximality sweep and
        single-remove swaps, multi-start, to a fixpoint).
    oracle: exact minimum-weight hitting set over the minsets (small
        instances only).
    """
    if method not in SANITIZE_METHODS:
        raise ValueError(f"unknown method {method!r}")
    weights = ontology.weights()
    all_ids = frozenset(ontology.ids())
    family = sorted(minimize_family(minsets), key=sorted)
    for ms in family:
        if not ms:
            raise ValueError("empty minset: the fact is derivable from nothing")
        unknown = ms - all_ids
        if unknown:
            raise ValueError(f"minset references unknown ids: {sorted(unknown)}")

    order = sorted(all_ids, key=lambda rid: (-weights[rid], rid))
    containing: dict[str, list[frozenset[str]]] = {}
    for ms in family:
        for rid in ms:
            containing.setdefault(rid, []).append(ms)

    def sweep(
        kept: frozenset[str], banned: frozenset[str] = frozenset()
    ) -> frozenset[str]:
        out = set(kept)
        for rid in order:
            if rid in out or rid in banned:
                continue
            if not any(ms <= out | {rid} for ms in containing.get(rid, ())):
                out.add(rid)
        return frozenset(out)

    def total(ids: frozenset[str]) -> float:
        return sum(weights[rid] for rid in ids)

    def improve(start: frozenset[str]) -> frozenset[str]:
        kept = sweep(start)
        while True:
            improved = False
            for rid in sorted(kept):
                # Refill without rid, or the heaviest removal is re-added
                # immediately and no swap can ever fire.
                trial = sweep(kept - {rid}, banned=frozenset({rid}))
                if total(trial) > total(kept):
                    kept = sweep(trial)
                    improved = True
                    break
            if not improved:
                return kept

    border_dump = None
    optimal = False
    if method == "greedy":
        kept = sweep(frozenset())
    elif method == "oracle":
        hit = exact_hitting_set(family, weights)
        kept = sweep(all_ids - hit)  # re-adds only zero-weight redundancies
        optimal = True
    else:
        constrained = sorted(set().union(*family)) if family else []
        if constrained:
            index_of = {rid: i for i, rid in enumerate(constrained)}
            source = [
                forbidden_set_matroid(
                    frozenset(index_of[rid] for rid in ms), len(constrained)
                )
                for ms in family
            ]
            source_weights = {i: weights[rid] for rid, i in index_of.items()}
            inst = build_reduction(source, source_weights, names=constrained)
            if dump_border:
                seed = greedy_common_seed(inst.matroids(), inst.weights)
                border = build_border_graph(*inst.matroids(), seed)
                border_dump = render_border_dump(border, inst.element_name)
            solution = solve_three(inst, params)
            decoded = extract_selection(inst, solution)
            start = frozenset(constrained[i] for i in decoded) | (
                all_ids - set(constrained)
            )
        else:
            start = all_ids
        # Multi-start local improvement; the greedy start guarantees the
        # heuristic never lands below the plain greedy scan.
        candidates = [improve(start), improve(frozenset())]
        kept = sorted(
            candidates, key=lambda ids: (-total(ids), tuple(sorted(ids)))
        )[0]

    removed = all_ids - kept
    if not removed:
        optimal = True  # nothing had to go, trivially best possible
    if any(ms <= kept for ms in family):
        raise AssertionError("sanitize produced an unsafe keep set")
    return SanitizeResult(
        kept=kept,
        removed=removed,
        weight=total(kept),
        method=method,
        optimal=optimal,
        border_dump=border_dump,
    )
