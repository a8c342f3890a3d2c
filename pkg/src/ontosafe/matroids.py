"""Matroid oracles over integer ground sets: independence queries, circuit
extraction, weighted greedy, and an exhaustive axiom checker for small
grounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

AXIOM_CHECK_LIMIT = 12


class Matroid:
    """Independence oracle over ground elements 0..size-1."""

    def __init__(self, size: int):
        if size < 0:
            raise ValueError("ground size must be non-negative")
        self.size = size

    def is_independent(self, subset: frozenset[int]) -> bool:
        raise NotImplementedError

    def _check_elements(self, subset: Iterable[int]):
        for e in subset:
            if not 0 <= e < self.size:
                raise ValueError(f"element {e} outside ground set of size {self.size}")

    def find_circuit(
        self, independent: frozenset[int], e: int
    ) -> frozenset[int] | None:
        """The unique circuit of independent+{e}, or None if it stays
        independent. Generic deletion testing: x stays in the circuit iff
        dropping x restores independence."""
        ind = frozenset(independent)
        self._check_elements(ind)
        self._check_elements([e])
        if e in ind:
            raise ValueError(f"element {e} already present")
        if not self.is_independent(ind):
            raise ValueError("find_circuit requires an independent base set")
        trial = ind | {e}
        if self.is_independent(trial):
            return None
        circuit = {e}
        for x in sorted(ind):
            if self.is_independent(trial - {x}):
                circuit.add(x)
        return frozenset(circuit)


class PartitionMatroid(Matroid):
    """Independent iff every block holds at most its capacity. Elements with
    no block, and blocks with no capacity entry, are unconstrained."""

    def __init__(
        self,
        size: int,
        block_of: Mapping[int, Hashable],
        capacity: Mapping[Hashable, int],
    ):
        super().__init__(size)
        self._check_elements(block_of)
        for block, cap in capacity.items():
            if cap < 0:
                raise ValueError(f"negative capacity for block {block!r}")
        self.block_of = dict(block_of)
        self.capacity = dict(capacity)

    def is_independent(self, subset: frozenset[int]) -> bool:
        self._check_elements(subset)
        counts: dict[Hashable, int] = {}
        for e in subset:
            block = self.block_of.get(e)
            if block is None:
                continue
            cap = self.capacity.get(block)
            if cap is None:
                continue
            counts[block] = counts.get(block, 0) + 1
            if counts[block] > cap:
                return False
        return True

    def find_circuit(
        self, independent: frozenset[int], e: int
    ) -> frozenset[int] | None:
        ind = frozenset(independent)
        self._check_elements(ind)
        self._check_elements([e])
        if e in ind:
            raise ValueError(f"element {e} already present")
        if not self.is_independent(ind):
            raise ValueError("find_circuit requires an independent base set")
        block = self.block_of.get(e)
        if block is None or block not in self.capacity:
            return None
        members = {x for x in ind if self.block_of.get(x) == block}
        if len(members) < self.capacity[block]:
            return None
        return frozenset(members | {e})


class ExplicitMatroid(Matroid):
    """Matroid given by its bases; independent sets are subsets of bases."""

    def __init__(self, size: int, bases: Iterable[Iterable[int]]):
        super().__init__(size)
        self.bases = frozenset(frozenset(b) for b in bases)
        if not self.bases:
            raise ValueError("at least one basis is required")
        ranks = {len(b) for b in self.bases}
        if len(ranks) != 1:
            raise ValueError("bases must all have the same cardinality")
        self.rank = ranks.pop()
        for b in self.bases:
            self._check_elements(b)

    def is_independent(self, subset: frozenset[int]) -> bool:
        self._check_elements(subset)
        s = frozenset(subset)
        return any(s <= basis for basis in self.bases)


class SetFamilyOracle(Matroid):
    """Independence oracle backed by an explicit set family, taken literally.

    Useful for tests and for feeding arbitrary families (including
    non-matroids) to check_matroid_axioms.
    """

    def __init__(self, size: int, independent_sets: Iterable[Iterable[int]]):
        super().__init__(size)
        self.family = frozenset(frozenset(s) for s in independent_sets)
        for s in self.family:
            self._check_elements(s)

    def is_independent(self, subset: frozenset[int]) -> bool:
        self._check_elements(subset)
        return frozenset(subset) in self.family


class DirectSumMatroid(Matroid):
    """Direct sum of component matroids over disjoint element lists, plus
    free elements that never constrain independence."""

    def __init__(
        self,
        size: int,
        components: Sequence[tuple[Matroid, Sequence[int]]],
        free: Iterable[int] = (),
    ):
        super().__init__(size)
        self.components = [
            (matroid, tuple(elements)) for matroid, elements in components
        ]
        self.free = frozenset(free)
        self._check_elements(self.free)
        covered: set[int] = set(self.free)
        self._component_of: dict[int, int] = {}
        for idx, (matroid, elements) in enumerate(self.components):
            self._check_elements(elements)
            if len(elements) != matroid.size:
                raise ValueError(
                    f"component {idx} lists {len(elements)} elements "
                    f"for a ground set of size {matroid.size}"
                )
            for e in elements:
                if e in covered:
                    raise ValueError(f"element {e} assigned twice")
                covered.add(e)
                self._component_of[e] = idx
        if covered != set(range(self.size)):
            missing = sorted(set(range(self.size)) - covered)
            raise ValueError(f"elements not covered by any component: {missing}")

    def _local(self, idx: int, subset: frozenset[int]) -> frozenset[int]:
        _, elements = self.components[idx]
        position = {e: i for i, e in enumerate(elements)}
        return frozenset(position[e] for e in subset if e in position)

    def is_independent(self, subset: frozenset[int]) -> bool:
        self._check_elements(subset)
        s = frozenset(subset)
        for idx, (matroid, _) in enumerate(self.components):
            if not matroid.is_independent(self._local(idx, s)):
                return False
        return True

    def find_circuit(
        self, independent: frozenset[int], e: int
    ) -> frozenset[int] | None:
        ind = frozenset(independent)
        self._check_elements(ind)
        self._check_elements([e])
        if e in ind:
            raise ValueError(f"element {e} already present")
        if not self.is_independent(ind):
            raise ValueError("find_circuit requires an independent base set")
        if e in self.free:
            return None
        idx = self._component_of[e]
        matroid, elements = self.components[idx]
        position = {el: i for i, el in enumerate(elements)}
        local_ind = frozenset(position[x] for x in ind if x in position)
        local_circuit = matroid.find_circuit(local_ind, position[e])
        if local_circuit is None:
            return None
        return frozenset(elements[i] for i in local_circuit)


def forbidden_set_matroid(members: frozenset[int], size: int) -> PartitionMatroid:
    """Independent iff the set does not contain all of `members`: one block
    with capacity len(members) - 1."""
    members = frozenset(members)
    if not members:
        raise ValueError("forbidden set must be non-empty")
    return PartitionMatroid(
        size,
        block_of={e: 0 for e in members},
        capacity={0: len(members) - 1},
    )


def direct_sum(
    components: Sequence[tuple[Matroid, Sequence[int]]],
    free: Iterable[int],
    size: int,
) -> DirectSumMatroid:
    return DirectSumMatroid(size, components, free)


def greedy_max_weight(
    matroid: Matroid, weights: Mapping[int, float]
) -> frozenset[int]:
    """Scan by (weight descending, element ascending), keeping independence.
    Exact for a single matroid; strictly negative weights are never taken."""
    chosen: set[int] = set()
    for e in sorted(range(matroid.size), key=lambda e: (-weights[e], e)):
        if weights[e] < 0:
            continue
        if matroid.is_independent(frozenset(chosen | {e})):
            chosen.add(e)
    return frozenset(chosen)


def check_matroid_axioms(matroid: Matroid) -> bool:
    """Exhaustively verify non-empty/hereditary/exchange for ground <= 12."""
    n = matroid.size
    if n > AXIOM_CHECK_LIMIT:
        raise ValueError(f"axiom check limited to ground <= {AXIOM_CHECK_LIMIT}")

    def members(mask: int) -> frozenset[int]:
        return frozenset(i for i in range(n) if mask >> i & 1)

    independent = [matroid.is_independent(members(m)) for m in range(1 << n)]
    if not independent[0]:
        return False
    for mask in range(1 << n):
        if not independent[mask]:
            continue
        m = mask
        while m:
            bit = m & -m
            if not independent[mask ^ bit]:
                return False
            m ^= bit
    by_size: dict[int, list[int]] = {}
    for mask in range(1 << n):
        if independent[mask]:
            by_size.setdefault(mask.bit_count(), []).append(mask)
    for k, smaller in by_size.items():
        larger = by_size.get(k + 1, ())
        for g in larger:
            for f in smaller:
                candidates = g & ~f
                found = False
                while candidates:
                    bit = candidates & -candidates
                    if independent[f | bit]:
                        found = True
                        break
                    candidates ^= bit
                if not found:
                    return False
    return True
