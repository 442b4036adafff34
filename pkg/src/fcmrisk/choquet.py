"""Choquet-integral aggregation of risk along transmission paths.

A normalized fuzzy measure is induced on the simple paths ending at a
target node: each path's raw weight is the t-norm fold of its edge weights,
normalized so all path measures sum to 1. The target's risk is then the
measure-weighted sum of path risk values, where a path's risk is the
highest vulnerability among its non-terminal nodes. For horizons up to 2
this closed form coincides with the 2-additive Choquet integral in which
two-edge paths act as pairwise interactions combined with the maximum
operator; the engine cross-checks that identity on every aggregation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    EvaluationOrderError,
    MeasureError,
    MissingValueError,
    NoPathsError,
)
from .model import FcmGraph, RiskPath, enumerate_paths

# Internal algebraic identities should hold to near machine precision;
# anything worse signals a real defect, not rounding.
_CONSISTENCY_TOL = 1e-9
_NORMALIZATION_TOL = 1e-9


class TNorm(Enum):
    """Conjunction used to fold edge weights along a path.

    Product spreads risk at a decreasing rate with path length; minimum is
    the weakest-link alternative. Maximum is deliberately not offered: it
    would inflate risk at every extra step.
    """

    PRODUCT = "product"
    MINIMUM = "min"

    def fold(self, weights: Iterable[float]) -> float:
        ws = list(weights)
        if not ws:
            raise MeasureError("cannot fold an empty weight sequence")
        if self is TNorm.PRODUCT:
            return math.prod(ws)
        return min(ws)

    @classmethod
    def parse(cls, text: str) -> "TNorm":
        key = text.strip().lower()
        if key in ("product", "prod"):
            return cls.PRODUCT
        if key in ("min", "minimum"):
            return cls.MINIMUM
        raise MeasureError(f"unknown t-norm {text!r} (use 'product' or 'min')")


@dataclass(frozen=True)
class FuzzyMeasure:
    """Normalized weights over the transmission paths into one target.

    Path weights are >= 0 and sum to 1, so the induced set function is a
    monotone normalized fuzzy measure by construction.
    """

    target: str
    horizon: int
    tnorm: TNorm
    weights: Mapping[RiskPath, float]

    def __post_init__(self) -> None:
        if not self.weights:
            raise MeasureError(f"empty measure for target {self.target!r}")
        total = math.fsum(self.weights.values())
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise MeasureError(
                f"measure for {self.target!r} sums to {total!r}, expected 1"
            )
        if any(w < 0 for w in self.weights.values()):
            raise MeasureError(f"negative path weight for {self.target!r}")

    @property
    def paths(self) -> tuple[RiskPath, ...]:
        return tuple(sorted(self.weights, key=lambda p: (len(p), p.sources)))

    def total(self) -> float:
        return math.fsum(self.weights.values())

    def criteria(self) -> tuple[str, ...]:
        """Sorted ids of every node that feeds the target along some path."""
        return tuple(sorted({s for p in self.weights for s in p.sources}))

    def two_additive(
        self,
    ) -> tuple[tuple[str, ...], dict[str, float], dict[tuple[str, str], float]]:
        """Decompose into per-criterion values v(c) and pairwise interactions.

        Direct edges contribute singleton mass; each two-edge path adds its
        measure to the interaction of its two non-terminal nodes. v(c) is the
        singleton mass plus half the interaction mass touching c, matching the
        2-additive Choquet parameterization. Only defined while every path
        has length <= 2.
        """
        singles: dict[str, float] = {}
        interactions: dict[tuple[str, str], float] = {}
        for path, weight in self.weights.items():
            if len(path) == 1:
                (src,) = path.sources
                singles[src] = singles.get(src, 0.0) + weight
            elif len(path) == 2:
                key = tuple(sorted(path.sources))
                interactions[key] = interactions.get(key, 0.0) + weight
            else:
                raise MeasureError(
                    f"paths of length {len(path)} exceed the 2-additive form"
                )
        criteria = self.criteria()
        shapley: dict[str, float] = {}
        for c in criteria:
            share = math.fsum(w for pair, w in interactions.items() if c in pair)
            shapley[c] = singles.get(c, 0.0) + 0.5 * share
        return criteria, shapley, interactions

    def induced_set_function(self) -> Callable[[frozenset[str]], float]:
        """The monotone set function whose Choquet integral equals the
        closed-form path aggregation (maximum-operator interactions count
        whenever a coalition touches either endpoint)."""
        criteria, shapley, interactions = self.two_additive()
        singles = {
            c: shapley[c]
            - 0.5
            * math.fsum(w for pair, w in interactions.items() if c in pair)
            for c in criteria
        }
        full = frozenset(criteria)

        def mu(coalition: frozenset[str]) -> float:
            unknown = coalition - full
            if unknown:
                raise MeasureError(f"unknown criteria {sorted(unknown)}")
            parts = [singles[c] for c in sorted(coalition)]
            parts.extend(
                w
                for pair, w in sorted(interactions.items())
                if pair[0] in coalition or pair[1] in coalition
            )
            return math.fsum(parts)

        return mu


@dataclass(frozen=True)
class PathContribution:
    """One path's share of an aggregated value."""

    path: RiskPath
    weight: float
    risk: float

    @property
    def product(self) -> float:
        return self.weight * self.risk


@dataclass(frozen=True)
class AggregationResult:
    """Aggregated risk at a target plus the per-path breakdown."""

    target: str
    value: float
    horizon: int
    tnorm: TNorm
    contributions: tuple[PathContribution, ...]


def build_path_measure(
    graph: FcmGraph, target: str, k: int, tnorm: TNorm = TNorm.PRODUCT
) -> FuzzyMeasure:
    """Normalized fuzzy measure over all simple paths of length <= k into target."""
    paths = enumerate_paths(graph, target, k)
    return _measure_over(paths, target, k, tnorm)


def _measure_over(
    paths: Sequence[RiskPath], target: str, k: int, tnorm: TNorm
) -> FuzzyMeasure:
    if not paths:
        raise NoPathsError(
            f"no transmission paths of length <= {k} end at {target!r}"
        )
    raw = {p: tnorm.fold(e.weight for e in p.edges) for p in paths}
    total = math.fsum(raw.values())
    if total <= 0.0:
        raise MeasureError(
            f"every path into {target!r} folds to weight 0; measure undefined"
        )
    return FuzzyMeasure(
        target=target,
        horizon=k,
        tnorm=tnorm,
        weights={p: w / total for p, w in raw.items()},
    )


def choquet_general(
    values: Sequence[float],
    measure: Mapping[frozenset[int], float] | Callable[[frozenset[int]], float],
) -> float:
    """Discrete Choquet integral of ``values`` w.r.t. a monotone measure.

    Criteria are indexed 0..n-1; ``measure`` maps coalitions (frozensets of
    indices) to [0, 1]. Values are sorted ascending with x_(0) := 0 and ties
    broken by criterion index; the telescoping sum is tie-order independent.
    """
    n = len(values)
    if n == 0:
        raise MeasureError("nothing to aggregate")
    if callable(measure):
        mu = measure
    else:
        table = dict(measure)

        def mu(coalition: frozenset[int]) -> float:
            try:
                return table[coalition]
            except KeyError:
                raise MeasureError(
                    f"measure undefined on coalition {sorted(coalition)}"
                ) from None

    order = sorted(range(n), key=lambda i: (values[i], i))
    full = frozenset(range(n))
    if abs(mu(full) - 1.0) > _NORMALIZATION_TOL:
        raise MeasureError(f"measure of the full set is {mu(full)!r}, expected 1")

    total = 0.0
    prev_x = 0.0
    prev_mu = mu(full)
    for rank, idx in enumerate(order):
        coalition = frozenset(order[rank:])
        m = mu(coalition)
        if m > prev_mu + _CONSISTENCY_TOL:
            raise MeasureError(
                f"measure not monotone: mu({sorted(coalition)}) = {m!r} exceeds "
                f"a superset's measure {prev_mu!r}"
            )
        total += (values[idx] - prev_x) * m
        prev_x = values[idx]
        prev_mu = m
    return total


def choquet_2additive(
    values: Sequence[float],
    singleton_values: Sequence[float],
    interactions: Mapping[tuple[int, int], float],
) -> float:
    """2-additive Choquet integral with non-negative interactions and the
    maximum operator.

    ``singleton_values`` are the per-criterion values v(c_i), each carrying
    half its interaction mass; the computation subtracts that half back out,
    so the effective linear coefficient of x_i is its singleton measure.
    Interactions here model "risk anywhere on a two-edge path spreads", hence
    max(x_i, x_j); negative interactions are not part of this domain.
    """
    n = len(values)
    if n == 0:
        raise MeasureError("nothing to aggregate")
    if len(singleton_values) != n:
        raise MeasureError(
            f"{n} values but {len(singleton_values)} singleton values"
        )
    inter: dict[tuple[int, int], float] = {}
    for (i, j), w in interactions.items():
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise MeasureError(f"bad interaction pair ({i}, {j})")
        if w < 0:
            raise MeasureError(
                f"negative interaction I({i},{j}) = {w}; only [0, 1] supported"
            )
        key = (i, j) if i < j else (j, i)
        if key in inter:
            raise MeasureError(f"duplicate interaction pair {key}")
        inter[key] = w

    share = [0.0] * n
    for (i, j), w in inter.items():
        share[i] += w
        share[j] += w
    implied_singletons = [v - 0.5 * s for v, s in zip(singleton_values, share)]
    total_mass = math.fsum(implied_singletons) + math.fsum(inter.values())
    if abs(total_mass - 1.0) > _NORMALIZATION_TOL:
        raise MeasureError(
            f"singletons and interactions sum to {total_mass!r}, expected 1"
        )

    linear = math.fsum(
        (singleton_values[i] - 0.5 * share[i]) * values[i] for i in range(n)
    )
    paired = math.fsum(
        w * max(values[i], values[j]) for (i, j), w in sorted(inter.items())
    )
    return linear + paired


def _path_risk(path: RiskPath, values: Mapping[str, float]) -> float:
    """Risk carried by a path: its source value for direct edges, the highest
    non-terminal vulnerability otherwise (risk anywhere along the path spreads)."""
    missing = [s for s in path.sources if s not in values]
    if missing:
        raise MissingValueError(
            f"node(s) {missing} on path {'->'.join(path.node_ids)} have no value"
        )
    return max(values[s] for s in path.sources)


def _aggregate_measure(
    measure: FuzzyMeasure, values: Mapping[str, float]
) -> AggregationResult:
    contributions = tuple(
        PathContribution(path=p, weight=measure.weights[p], risk=_path_risk(p, values))
        for p in measure.paths
    )
    value = math.fsum(c.product for c in contributions)

    if all(len(p) <= 2 for p in measure.weights):
        criteria, shapley, interactions = measure.two_additive()
        index = {c: i for i, c in enumerate(criteria)}
        check = choquet_2additive(
            [values[c] for c in criteria],
            [shapley[c] for c in criteria],
            {(index[a], index[b]): w for (a, b), w in interactions.items()},
        )
        if abs(check - value) > _CONSISTENCY_TOL:
            raise MeasureError(
                f"closed-form / 2-additive mismatch at {measure.target!r}: "
                f"{value!r} vs {check!r}"
            )

    return AggregationResult(
        target=measure.target,
        value=value,
        horizon=measure.horizon,
        tnorm=measure.tnorm,
        contributions=contributions,
    )


def aggregate_node(
    graph: FcmGraph, target: str, k: int = 2, tnorm: TNorm = TNorm.PRODUCT
) -> AggregationResult:
    """Aggregate risk flowing into ``target`` over paths of length <= k.

    Every path source must carry a value; use :func:`evaluate_hierarchy` to
    fill unvalued intermediate nodes first. Note that normalization absorbs a
    lone in-edge's weight entirely: a single feeder of value x yields x no
    matter the edge weight.
    """
    measure = build_path_measure(graph, target, k, tnorm)
    return _aggregate_measure(measure, graph.values())


def evaluate_hierarchy(
    graph: FcmGraph, k: int = 2, tnorm: TNorm = TNorm.PRODUCT
) -> dict[str, AggregationResult]:
    """Bottom-up aggregation over the whole hierarchy.

    Levels are processed deepest first. Within a level every node aggregates
    over the paths whose sources were already valued when the level started,
    so siblings never see each other's same-stage aggregates and the outcome
    is independent of declaration order. Supplied values are data: they are
    never overwritten, but an aggregate is still computed and reported
    alongside wherever paths allow.
    """
    values = graph.values()
    results: dict[str, AggregationResult] = {}
    for level, node_ids in sorted(graph.levels().items(), reverse=True):
        snapshot = dict(values)
        fresh: dict[str, float] = {}
        for nid in node_ids:
            has_value = nid in snapshot
            paths = enumerate_paths(graph, nid, k)
            usable = [p for p in paths if all(s in snapshot for s in p.sources)]
            if not usable:
                if has_value:
                    continue
                if not paths:
                    raise EvaluationOrderError(
                        f"unvalued leaf {nid!r}: no incoming paths to aggregate"
                    )
                blocked = sorted(
                    {s for p in paths for s in p.sources if s not in snapshot}
                )
                raise EvaluationOrderError(
                    f"cannot evaluate {nid!r}: every incoming path runs through "
                    f"unvalued node(s) {blocked} (cyclic dependency)"
                )
            try:
                measure = _measure_over(usable, nid, k, tnorm)
            except MeasureError:
                if has_value:
                    continue
                raise
            result = _aggregate_measure(measure, snapshot)
            results[nid] = result
            if not has_value:
                fresh[nid] = result.value
        values.update(fresh)
    return results


def effective_values(
    graph: FcmGraph, results: Mapping[str, AggregationResult]
) -> dict[str, float]:
    """Supplied value where present, aggregate otherwise."""
    out: dict[str, float] = {}
    for nid in graph.node_ids:
        supplied = graph.node(nid).value
        if supplied is not None:
            out[nid] = supplied
        elif nid in results:
            out[nid] = results[nid].value
    return out


@dataclass(frozen=True)
class ForecastPoint:
    """Estimated risk ``horizon`` time units out (one edge per unit)."""

    horizon: int
    value: float


def forecast(
    graph: FcmGraph, target: str, k_max: int, tnorm: TNorm = TNorm.PRODUCT
) -> tuple[ForecastPoint, ...]:
    """Risk at ``target`` for every horizon 1..k_max.

    Each horizon h rebuilds the measure over paths of length <= h (the
    measure sequence over time) and re-runs the bottom-up evaluation, so
    unvalued intermediate levels are filled consistently at that horizon.
    """
    graph.node(target)
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    points: list[ForecastPoint] = []
    for horizon in range(1, k_max + 1):
        results = evaluate_hierarchy(graph, horizon, tnorm)
        if target not in results:
            raise NoPathsError(
                f"no transmission paths end at {target!r} within horizon {horizon}"
            )
        points.append(ForecastPoint(horizon=horizon, value=results[target].value))
    return tuple(points)
