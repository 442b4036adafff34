"""Independent brute-force oracles.

Everything here is implemented from scratch on plain dicts/tuples, without
importing the package under test, so each check is a genuinely separate
route to the same numbers.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def brute_force_paths(
    node_ids: list[str],
    edge_weights: dict[tuple[str, str], float],
    target: str,
    max_len: int,
) -> set[tuple[str, ...]]:
    """Every simple path (as a node-id tuple ending at target) of length
    <= max_len, found by filtering all permutations of node subsets."""
    others = [n for n in node_ids if n != target]
    found: set[tuple[str, ...]] = set()
    for length in range(1, max_len + 1):
        for combo in itertools.permutations(others, length):
            path = combo + (target,)
            if all(
                (path[i], path[i + 1]) in edge_weights
                for i in range(len(path) - 1)
            ):
                found.add(path)
    return found


def fold_weights(weights: list[float], tnorm: str) -> float:
    if tnorm == "product":
        out = 1.0
        for w in weights:
            out *= w
        return out
    if tnorm == "min":
        return min(weights)
    raise ValueError(tnorm)


def path_aggregate(
    node_ids: list[str],
    edge_weights: dict[tuple[str, str], float],
    values: dict[str, float],
    target: str,
    max_len: int,
    tnorm: str = "product",
) -> float:
    """Closed-form path aggregation recomputed from scratch: normalize the
    folded path weights, then sum share * max(non-terminal values)."""
    paths = sorted(brute_force_paths(node_ids, edge_weights, target, max_len))
    raws = [
        fold_weights(
            [edge_weights[(p[i], p[i + 1])] for i in range(len(p) - 1)], tnorm
        )
        for p in paths
    ]
    total = sum(raws)
    assert paths, "oracle needs at least one path"
    assert total > 0, "oracle needs a nonzero measure"
    return sum(
        raw / total * max(values[n] for n in p[:-1])
        for p, raw in zip(paths, raws)
    )


def choquet_by_level_sets(values: list[float], mu) -> float:
    """Choquet integral in its level-set form: integrate mu({i: x_i >= t})
    over the distinct value thresholds. Independent of the telescoping-sum
    formulation used by the engine."""
    thresholds = sorted(set(values))
    total = 0.0
    prev = 0.0
    for t in thresholds:
        coalition = frozenset(i for i, x in enumerate(values) if x >= t)
        total += (t - prev) * mu(coalition)
        prev = t
    return total


def confidence_weighted_mean(rows: list[tuple[float, float]]) -> float:
    """Exact per-entry weighted mean over (weight, confidence) rows."""
    num = sum((Fraction(c) * Fraction(w) for w, c in rows), Fraction(0))
    den = sum((Fraction(c) for _, c in rows), Fraction(0))
    return float(num / den)


def weighted_average(pairs: list[tuple[float, float]]) -> float:
    """Plain float weighted average of (weight, value) pairs."""
    total = math.fsum(w for w, _ in pairs)
    return math.fsum(w * v for w, v in pairs) / total


# Raw copies of the bundled example tables, re-transcribed independently of
# the data files so the JSON artifacts are checked entry by entry.

GIIPS_SECTORS = ["M", "FM", "BS", "OFI"]
GIIPS_COUNTRIES = ["Greece", "Italy", "Ireland", "Portugal", "Spain"]
# per country: rows sector -> [M, FM, BS, OFI, country]; diagonal = value
GIIPS_BLOCKS = {
    "Greece": [
        [0.8, 0.4, 0.9, 0.7, 0.8],
        [0.2, 0.4, 0.4, 0.3, 0.4],
        [0.7, 0.6, 0.8, 0.4, 0.7],
        [0.2, 0.2, 0.3, 0.3, 0.2],
    ],
    "Italy": [
        [0.7, 0.3, 0.8, 0.4, 0.7],
        [0.3, 0.3, 0.4, 0.4, 0.5],
        [0.8, 0.3, 0.6, 0.4, 0.6],
        [0.4, 0.4, 0.4, 0.4, 0.6],
    ],
    "Ireland": [
        [0.7, 0.2, 0.6, 0.4, 0.7],
        [0.3, 0.3, 0.3, 0.5, 0.6],
        [0.7, 0.3, 0.7, 0.5, 0.6],
        [0.5, 0.5, 0.5, 0.5, 0.8],
    ],
    "Portugal": [
        [0.8, 0.3, 0.7, 0.3, 0.7],
        [0.3, 0.3, 0.4, 0.3, 0.4],
        [0.8, 0.4, 0.8, 0.4, 0.5],
        [0.4, 0.3, 0.3, 0.4, 0.3],
    ],
    "Spain": [
        [0.8, 0.2, 0.9, 0.3, 0.8],
        [0.3, 0.2, 0.4, 0.3, 0.5],
        [0.9, 0.3, 0.9, 0.3, 0.8],
        [0.4, 0.4, 0.5, 0.6, 0.7],
    ],
}
# rows Greece..Spain; cols Greece..Spain + Europe; None on the diagonal
GIIPS_COUNTRY_BLOCK = [
    [None, 0.9, 0.4, 0.7, 0.8, 0.8],
    [0.7, None, 0.3, 0.5, 0.7, 0.9],
    [0.3, 0.4, None, 0.3, 0.4, 0.7],
    [0.7, 0.6, 0.3, None, 0.8, 0.7],
    [0.8, 0.8, 0.5, 0.9, None, 0.9],
]

COUNTRY_SUBS = {
    "M": ["E", "GDP", "I", "GBD", "ITF"],
    "FM": ["CI", "AI", "MI", "FMI"],
    "BS": ["CA", "AQ", "MS", "EP", "L", "SMR"],
    "OFI": ["IC", "CSI", "MM", "SSF", "OFA"],
}
# per sector: rows sub -> [subs..., sector]; diagonal = value
COUNTRY_BLOCKS = {
    "M": [
        [0.3, 0.8, 0.4, 0.8, 0.4, 0.3],
        [0.8, 0.3, 0.5, 0.8, 0.5, 0.4],
        [0.4, 0.4, 0.3, 0.5, 0.5, 0.3],
        [0.6, 0.6, 0.4, 0.2, 0.4, 0.5],
        [0.7, 0.7, 0.6, 0.7, 0.3, 0.4],
    ],
    "FM": [
        [0.3, 0.8, 0.5, 0.3, 0.6],
        [0.6, 0.8, 0.7, 0.3, 0.6],
        [0.3, 0.4, 0.5, 0.5, 0.3],
        [0.3, 0.3, 0.5, 0.4, 0.2],
    ],
    "BS": [
        [0.5, 0.6, 0.7, 0.5, 0.5, 0.4, 0.6],
        [0.5, 0.4, 0.6, 0.7, 0.7, 0.7, 0.5],
        [0.5, 0.5, 0.3, 0.5, 0.5, 0.5, 0.3],
        [0.7, 0.7, 0.5, 0.4, 0.6, 0.5, 0.4],
        [0.8, 0.6, 0.5, 0.4, 0.4, 0.5, 0.5],
        [0.7, 0.7, 0.5, 0.6, 0.7, 0.4, 0.4],
    ],
    "OFI": [
        [0.6, 0.4, 0.4, 0.4, 0.3, 0.5],
        [0.3, 0.3, 0.2, 0.2, 0.2, 0.4],
        [0.3, 0.2, 0.4, 0.2, 0.2, 0.3],
        [0.2, 0.2, 0.2, 0.5, 0.2, 0.3],
        [0.2, 0.2, 0.1, 0.1, 0.2, 0.3],
    ],
}
# rows M, FM, BS, OFI -> [M, FM, BS, OFI, Country]; None on the diagonal
COUNTRY_BOTTOM = [
    [None, 0.8, 0.7, 0.7, 0.4],
    [0.7, None, 0.6, 0.5, 0.7],
    [0.7, 0.4, None, 0.7, 0.6],
    [0.6, 0.4, 0.7, None, 0.6],
]


def giips_entries() -> tuple[dict[str, float], dict[tuple[str, str], float]]:
    """(node values, edge weights) for the pan-European example."""
    values: dict[str, float] = {}
    edges: dict[tuple[str, str], float] = {}
    for country in GIIPS_COUNTRIES:
        block = GIIPS_BLOCKS[country]
        for i, sector in enumerate(GIIPS_SECTORS):
            sid = f"{country}.{sector}"
            values[sid] = block[i][i]
            for j, other in enumerate(GIIPS_SECTORS):
                if i != j:
                    edges[(sid, f"{country}.{other}")] = block[i][j]
            edges[(sid, country)] = block[i][4]
    for i, src in enumerate(GIIPS_COUNTRIES):
        row = GIIPS_COUNTRY_BLOCK[i]
        for j, dst in enumerate(GIIPS_COUNTRIES):
            if row[j] is not None:
                edges[(src, dst)] = row[j]
        edges[(src, "Europe")] = row[5]
    return values, edges


def country_entries() -> tuple[dict[str, float], dict[tuple[str, str], float]]:
    """(node values, edge weights) for the single-country example."""
    values: dict[str, float] = {}
    edges: dict[tuple[str, str], float] = {}
    for sector, subs in COUNTRY_SUBS.items():
        block = COUNTRY_BLOCKS[sector]
        for i, sub in enumerate(subs):
            values[sub] = block[i][i]
            for j, other in enumerate(subs):
                if i != j:
                    edges[(sub, other)] = block[i][j]
            edges[(sub, sector)] = block[i][len(subs)]
    sector_ids = list(COUNTRY_SUBS)
    for i, src in enumerate(sector_ids):
        row = COUNTRY_BOTTOM[i]
        for j, dst in enumerate(sector_ids):
            if row[j] is not None:
                edges[(src, dst)] = row[j]
        edges[(src, "Country")] = row[4]
    return values, edges


def staged_hierarchy_values(
    levels: dict[str, int],
    values: dict[str, float],
    edges: dict[tuple[str, str], float],
    k: int,
    tnorm: str = "product",
) -> dict[str, float]:
    """Bottom-up fill of unvalued nodes, deepest level first; every node in
    a stage aggregates only over paths fully valued when the stage began."""
    node_ids = sorted(levels)
    filled = dict(values)
    aggregates: dict[str, float] = {}
    for level in sorted(set(levels.values()), reverse=True):
        snapshot = dict(filled)
        fresh: dict[str, float] = {}
        for nid in node_ids:
            if levels[nid] != level:
                continue
            paths = sorted(brute_force_paths(node_ids, edges, nid, k))
            usable = [p for p in paths if all(n in snapshot for n in p[:-1])]
            if not usable:
                continue
            raws = [
                fold_weights(
                    [edges[(p[i], p[i + 1])] for i in range(len(p) - 1)], tnorm
                )
                for p in usable
            ]
            total = sum(raws)
            if total <= 0:
                continue
            agg = sum(
                raw / total * max(snapshot[n] for n in p[:-1])
                for p, raw in zip(usable, raws)
            )
            aggregates[nid] = agg
            if nid not in filled:
                fresh[nid] = agg
        filled.update(fresh)
    return aggregates
