"""Merging sparse expert evaluations into one map.

Each expert supplies a partial adjacency matrix with a confidence per entry;
entries merge as the confidence-weighted average. The merge runs in exact
rational arithmetic so that unanimity, convexity, confidence rescaling, and
expert-order invariance hold exactly, not just within floating tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import SchemaError, UniverseMismatchError, UnknownNodeError

Pair = tuple[str, str]


@dataclass(frozen=True)
class ExpertEvaluation:
    """One expert's sparse evaluation round.

    ``entries`` maps (src, dst) to (weight, confidence). src == dst encodes
    the node's own vulnerability. Omitted entries mean the expert did not
    judge that relation; confidence must be strictly positive.
    """

    expert_id: str
    unit_id: str
    entries: Mapping[Pair, tuple[float, float]]

    def __post_init__(self) -> None:
        if not self.expert_id:
            raise SchemaError("expert_id must be non-empty")
        for (src, dst), (weight, confidence) in self.entries.items():
            where = f"expert {self.expert_id!r}, entry {src!r}->{dst!r}"
            if not 0.0 <= weight <= 1.0:
                raise SchemaError(f"{where}: weight {weight} outside [0, 1]")
            if confidence <= 0.0:
                raise SchemaError(
                    f"{where}: confidence must be > 0, got {confidence}"
                )


@dataclass(frozen=True)
class EntrySupport:
    """Provenance of one merged entry."""

    total_confidence: float
    contributors: int
    stale: bool = False


@dataclass(frozen=True)
class MergedMatrix:
    """Confidence-weighted merge of expert evaluations.

    An entry exists iff at least one expert provided it. ``universe`` is the
    node-id set the matrix is defined over; matrices over different universes
    cannot be combined.
    """

    entries: Mapping[Pair, float]
    support: Mapping[Pair, EntrySupport]
    universe: frozenset[str] | None = None

    def pairs(self) -> tuple[Pair, ...]:
        return tuple(sorted(self.entries))


def merge_evaluations(
    evaluations: Sequence[ExpertEvaluation],
    node_ids: Iterable[str] | None = None,
) -> MergedMatrix:
    """Merge expert entries as confidence-weighted averages.

    For every provided entry, w(s,t) = sum_e r_e(s,t) w_e(s,t) / sum_e r_e(s,t).
    Contributions are ordered canonically and summed as exact fractions, so
    the result is independent of the expert list order.
    """
    if not evaluations:
        raise SchemaError("no evaluations to merge")
    known = frozenset(node_ids) if node_ids is not None else None
    if known is not None:
        for ev in evaluations:
            for src, dst in ev.entries:
                for nid in (src, dst):
                    if nid not in known:
                        raise UnknownNodeError(
                            f"expert {ev.expert_id!r}: unknown node {nid!r}"
                        )

    contributions: dict[Pair, list[tuple[str, float, float]]] = {}
    for ev in evaluations:
        for pair, (weight, confidence) in ev.entries.items():
            contributions.setdefault(pair, []).append(
                (ev.expert_id, weight, confidence)
            )

    entries: dict[Pair, float] = {}
    support: dict[Pair, EntrySupport] = {}
    for pair, rows in contributions.items():
        rows.sort()
        num = sum(
            (Fraction(c) * Fraction(w) for _, w, c in rows), start=Fraction(0)
        )
        den = sum((Fraction(c) for _, _, c in rows), start=Fraction(0))
        entries[pair] = float(num / den)
        support[pair] = EntrySupport(
            total_confidence=float(den), contributors=len(rows)
        )
    return MergedMatrix(entries=entries, support=support, universe=known)


def temporal_update(
    prev: MergedMatrix,
    fresh: MergedMatrix,
    smoothing: float = 0.7,
) -> MergedMatrix:
    """Blend the previous round into the fresh one by exponential smoothing.

    Entries present in both become smoothing*fresh + (1-smoothing)*prev;
    fresh-only entries pass through; prev-only entries are carried forward
    and flagged stale so analytics can discount them.
    """
    if not 0.0 <= smoothing <= 1.0:
        raise SchemaError(f"smoothing must lie in [0, 1], got {smoothing}")
    if (
        prev.universe is not None
        and fresh.universe is not None
        and prev.universe != fresh.universe
    ):
        only_prev = sorted(prev.universe - fresh.universe)
        only_fresh = sorted(fresh.universe - prev.universe)
        raise UniverseMismatchError(
            f"node universes differ (prev-only {only_prev}, fresh-only {only_fresh})"
        )

    entries: dict[Pair, float] = {}
    support: dict[Pair, EntrySupport] = {}
    for pair in sorted(set(prev.entries) | set(fresh.entries)):
        in_prev = pair in prev.entries
        in_fresh = pair in fresh.entries
        if in_prev and in_fresh:
            entries[pair] = (
                smoothing * fresh.entries[pair]
                + (1.0 - smoothing) * prev.entries[pair]
            )
            support[pair] = fresh.support[pair]
        elif in_fresh:
            entries[pair] = fresh.entries[pair]
            support[pair] = fresh.support[pair]
        else:
            entries[pair] = prev.entries[pair]
            old = prev.support[pair]
            support[pair] = EntrySupport(
                total_confidence=old.total_confidence,
                contributors=old.contributors,
                stale=True,
            )
    return MergedMatrix(
        entries=entries,
        support=support,
        universe=fresh.universe or prev.universe,
    )


@dataclass(frozen=True)
class FeedbackRecord:
    """One entry of an expert's divergence report."""

    src: str
    dst: str
    expert_weight: float
    merged_weight: float
    divergence: float
    rank: int


def feedback_report(
    expert: ExpertEvaluation, merged: MergedMatrix
) -> tuple[FeedbackRecord, ...]:
    """Compare one expert's entries against the merged consensus.

    One record per entry the expert provided, ranked by descending absolute
    divergence (rank 1 = largest disagreement, ties broken by entry id).
    Entries the expert skipped are excluded.
    """
    rows: list[tuple[float, Pair, float, float]] = []
    for pair, (weight, _confidence) in expert.entries.items():
        if pair not in merged.entries:
            continue
        merged_weight = merged.entries[pair]
        rows.append((abs(weight - merged_weight), pair, weight, merged_weight))
    rows.sort(key=lambda r: (-r[0], r[1]))
    return tuple(
        FeedbackRecord(
            src=pair[0],
            dst=pair[1],
            expert_weight=weight,
            merged_weight=merged_weight,
            divergence=divergence,
            rank=i + 1,
        )
        for i, (divergence, pair, weight, merged_weight) in enumerate(rows)
    )
