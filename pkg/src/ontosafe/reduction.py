"""Reduce intersecting k matroids to intersecting three.

Every original element gets k copies plus k parity elements. The first
matroid is the direct sum of the source matroids, each acting on one copy
layer, with all parity elements free. The second and third are partition
matroids over copy/parity pairs whose blocks are phase-shifted against each
other, which forces any maximum solution to take, per original element,
either all k copies or all k parity elements. Weights are lifted by a
constant large enough that maximum weight implies maximum cardinality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .matroids import DirectSumMatroid, Matroid, PartitionMatroid


@dataclass
class ReducedInstance:
    k: int
    names: tuple[str, ...]  # original element names, index-aligned
    m1: DirectSumMatroid
    m2: PartitionMatroid
    m3: PartitionMatroid
    weights: tuple[float, ...]  # over the expanded ground set
    lift_constant: float

    @property
    def ground_size(self) -> int:
        return 2 * self.k * len(self.names)

    def copy_index(self, original: int, j: int) -> int:
        """Element id of copy j (1-based) of the original element."""
        return original * 2 * self.k + (j - 1)

    def parity_index(self, original: int, j: int) -> int:
        return original * 2 * self.k + self.k + (j - 1)

    def element_name(self, element: int) -> str:
        original, offset = divmod(element, 2 * self.k)
        if offset < self.k:
            return f"{self.names[original]}#e{offset + 1}"
        return f"{self.names[original]}#a{offset - self.k + 1}"

    def matroids(self) -> tuple[Matroid, Matroid, Matroid]:
        return (self.m1, self.m2, self.m3)


def build_reduction(
    matroids: Sequence[Matroid],
    weights: Mapping[int, float],
    names: Sequence[str] | None = None,
) -> ReducedInstance:
    """Build the three-matroid instance for k source matroids over a common
    ground set of m elements (2*k*m expanded elements)."""
    k = len(matroids)
    if k < 1:
        raise ValueError("at least one source matroid is required")
    m = matroids[0].size
    if m < 1:
        raise ValueError("the common ground set must be non-empty")
    for matroid in matroids:
        if matroid.size != m:
            raise ValueError("source matroids must share one ground set")
    if names is None:
        names = tuple(str(i) for i in range(m))
    else:
        names = tuple(names)
        if len(names) != m:
            raise ValueError("names must be index-aligned with the ground set")

    size = 2 * k * m
    span = 2 * k

    def copy_index(i: int, j: int) -> int:
        return i * span + (j - 1)

    def parity_index(i: int, j: int) -> int:
        return i * span + k + (j - 1)

    components = []
    for j in range(1, k + 1):
        layer = tuple(copy_index(i, j) for i in range(m))
        components.append((matroids[j - 1], layer))
    free = [parity_index(i, j) for i in range(m) for j in range(1, k + 1)]
    m1 = DirectSumMatroid(size, components, free)

    block_of_2: dict[int, int] = {}
    block_of_3: dict[int, int] = {}
    for i in range(m):
        for j in range(1, k + 1):
            e = copy_index(i, j)
            block_of_2[e] = e
            block_of_2[parity_index(i, j)] = e
            block_of_3[e] = e
            shifted = (j % k) + 1
            block_of_3[parity_index(i, shifted)] = e
    capacities = {copy_index(i, j): 1 for i in range(m) for j in range(1, k + 1)}
    m2 = PartitionMatroid(size, block_of_2, dict(capacities))
    m3 = PartitionMatroid(size, block_of_3, dict(capacities))

    lift = 1.0 + sum(abs(weights[i]) for i in range(m))
    expanded = [0.0] * size
    for i in range(m):
        for j in range(1, k + 1):
            expanded[copy_index(i, j)] = lift + (weights[i] if j == 1 else 0.0)
            expanded[parity_index(i, j)] = lift

    return ReducedInstance(
        k=k,
        names=names,
        m1=m1,
        m2=m2,
        m3=m3,
        weights=tuple(expanded),
        lift_constant=lift,
    )


def extract_selection(inst: ReducedInstance, f: frozenset[int]) -> frozenset[int]:
    """Original elements whose k copies are all chosen. Requires f to be
    independent in all three matroids; the result is then independent in
    every source matroid."""
    f = frozenset(f)
    for matroid in inst.matroids():
        if not matroid.is_independent(f):
            raise ValueError("selection is not a common independent set")
    chosen = []
    for i in range(len(inst.names)):
        if all(inst.copy_index(i, j) in f for j in range(1, inst.k + 1)):
            chosen.append(i)
    return frozenset(chosen)
