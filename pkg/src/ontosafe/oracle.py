"""Exact reference solvers for small instances.

Both solvers are exponential-time by design and refuse inputs beyond their
documented envelopes instead of silently approximating.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .matroids import Matroid

HITTING_SET_LIMIT = 25
COMMON_INDEPENDENT_LIMIT = 25


class EnvelopeExceededError(RuntimeError):
    """Instance is larger than the exact solver's documented envelope."""


def exact_hitting_set(
    family: Iterable[frozenset[str]],
    weights: Mapping[str, float],
) -> frozenset[str]:
    """Minimum-total-weight set of ids intersecting every family member.

    Branch and bound on the highest-degree unhit set with best-known-cost
    pruning. Ties between minimum-weight candidates break toward the
    lexicographically smallest sorted id sequence (among irredundant
    candidates, where each chosen id hits a set unhit at choice time).
    """
    sets = [frozenset(s) for s in family]
    if any(not s for s in sets):
        raise ValueError("hitting an empty set is impossible")
    universe = sorted(set().union(*sets)) if sets else []
    if len(universe) > HITTING_SET_LIMIT:
        raise EnvelopeExceededError(
            f"hitting-set instance has {len(universe)} ids; "
            f"the exact envelope is {HITTING_SET_LIMIT}"
        )
    for rid in universe:
        if rid not in weights:
            raise ValueError(f"missing weight for id {rid!r}")
    if not sets:
        return frozenset()

    frequency = {rid: sum(1 for s in sets if rid in s) for rid in universe}
    best: dict = {"cost": None, "ids": None}

    def candidate_key(chosen: frozenset[str]) -> tuple:
        return tuple(sorted(chosen))

    def recurse(chosen: set[str], cost: float, unhit: list[frozenset[str]]):
        if best["cost"] is not None and cost > best["cost"]:
            return
        if not unhit:
            key = candidate_key(frozenset(chosen))
            if (
                best["cost"] is None
                or cost < best["cost"]
                or (cost == best["cost"] and key < best["ids"])
            ):
                best["cost"] = cost
                best["ids"] = key
            return
        degree = {
            rid: sum(1 for s in unhit if rid in s) for rid in set().union(*unhit)
        }
        target = max(
            unhit,
            key=lambda s: (sum(degree[rid] for rid in s), candidate_key(s)),
        )
        for rid in sorted(target):
            chosen.add(rid)
            recurse(
                chosen,
                cost + weights[rid],
                [s for s in unhit if rid not in s],
            )
            chosen.discard(rid)

    recurse(set(), 0.0, sets)
    return frozenset(best["ids"])


def exhaustive_max_common_independent(
    matroids: Sequence[Matroid],
    weights: Mapping[int, float],
) -> frozenset[int]:
    """Maximum-weight set independent in every matroid, by depth-first
    enumeration with hereditary pruning. Ties break toward the
    lexicographically smallest sorted element sequence."""
    if not matroids:
        raise ValueError("at least one matroid is required")
    size = matroids[0].size
    for matroid in matroids:
        if matroid.size != size:
            raise ValueError("matroids must share one ground set")
    if size > COMMON_INDEPENDENT_LIMIT:
        raise EnvelopeExceededError(
            f"ground set has {size} elements; "
            f"the exact envelope is {COMMON_INDEPENDENT_LIMIT}"
        )

    # Upper bound on the weight still reachable from position i onward.
    remaining = [0.0] * (size + 1)
    for i in range(size - 1, -1, -1):
        remaining[i] = remaining[i + 1] + max(weights[i], 0.0)

    best: dict = {"weight": None, "ids": None}

    def consider(chosen: tuple[int, ...], weight: float):
        if (
            best["weight"] is None
            or weight > best["weight"]
            or (weight == best["weight"] and chosen < best["ids"])
        ):
            best["weight"] = weight
            best["ids"] = chosen

    def recurse(position: int, chosen: list[int], weight: float):
        if best["weight"] is not None and weight + remaining[position] < best["weight"]:
            return
        if position == size:
            consider(tuple(chosen), weight)
            return
        trial = frozenset(chosen) | {position}
        if all(m.is_independent(trial) for m in matroids):
            chosen.append(position)
            recurse(position + 1, chosen, weight + weights[position])
            chosen.pop()
        recurse(position + 1, chosen, weight)

    recurse(0, [], 0.0)
    return frozenset(best["ids"])
