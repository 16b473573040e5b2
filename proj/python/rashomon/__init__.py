"""Sorted enumeration of near-optimal sparse decision trees."""

import json

from ._core import (
    DataError,
    Dataset,
    Enumerator,
    Group,
    evaluate,
    find_min_multiplier,
    lofo,
)

__all__ = [
    "DataError",
    "Dataset",
    "Enumerator",
    "Group",
    "evaluate",
    "find_min_multiplier",
    "lofo",
    "rashomon_set",
]


def rashomon_set(dataset, depth=3, lam=0.01, epsilon=0.05, max_trees=None):
    """List of (total_cost, tree dict) in non-decreasing cost order."""
    out = []
    for group in Enumerator(dataset, depth=depth, lam=lam, epsilon=epsilon):
        limit = group.count if max_trees is None else min(group.count, max_trees - len(out))
        out.extend((group.total_cost, json.loads(t)) for t in group.trees(limit))
        if max_trees is not None and len(out) >= max_trees:
            break
    return out
