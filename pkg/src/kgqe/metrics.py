"""Ranking quality measures for evaluating answer lists against a ground
truth set: precision at k, average precision, and nDCG.
"""

from __future__ import annotations

import math
from typing import Sequence


def precision_at_k(ranked: Sequence, truth: set, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(1 for a in ranked[:k] if a in truth)
    return hits / k


def average_precision(ranked: Sequence, truth: set, k: int) -> float:
    """Mean of P@i over the relevant positions i <= k, divided by the ground
    truth size (so missing relevant answers count as zero)."""
    if not truth:
        raise ValueError("ground truth is empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    total = 0.0
    hits = 0
    for i, a in enumerate(ranked[:k], start=1):
        if a in truth:
            hits += 1
            total += hits / i
    return total / len(truth)


def ndcg(ranked: Sequence, truth: set, k: int) -> float:
    """Binary-relevance nDCG with log2 position discounting; the ideal DCG
    places min(k, |truth|) relevant answers first."""
    if not truth:
        raise ValueError("ground truth is empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    dcg = 0.0
    for i, a in enumerate(ranked[:k], start=1):
        if a in truth:
            dcg += 1.0 if i == 1 else 1.0 / math.log2(i)
    ideal = min(k, len(truth))
    idcg = sum(1.0 if i == 1 else 1.0 / math.log2(i)
               for i in range(1, ideal + 1))
    return dcg / idcg
