"""Hierarchical fuzzy cognitive map: nodes, weighted directed edges, and
risk-transmission paths.

The map is a weighted directed graph with hierarchy metadata. Node values
(vulnerabilities) sit on the matrix diagonal, edge weights off-diagonal.
Hierarchy levels constrain nothing structurally; they drive bottom-up
evaluation order and connectivity validation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .errors import SchemaError, UnknownNodeError


@dataclass(frozen=True)
class RiskNode:
    """One component of the modeled system.

    level 0 is the single system root; level 1 holds its main components;
    level 2 their sub-dimensions, and so on. ``value`` is the component's
    vulnerability in [0, 1]; absent until evaluated.
    """

    id: str
    label: str
    level: int
    parent: str | None = None
    value: float | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise SchemaError("node id must be non-empty")
        if self.level < 0:
            raise SchemaError(f"node {self.id!r}: level must be >= 0, got {self.level}")
        if (self.parent is None) != (self.level == 0):
            raise SchemaError(
                f"node {self.id!r}: exactly the level-0 root has no parent"
            )
        if self.value is not None and not 0.0 <= self.value <= 1.0:
            raise SchemaError(
                f"node {self.id!r}: value {self.value} outside [0, 1]"
            )


@dataclass(frozen=True)
class Edge:
    """Directed impact of ``src`` on ``dst`` with strength in [0, 1].

    Direction matters: weight(a, b) and weight(b, a) are independent.
    A weight of 0 is an explicitly provided "no effect", distinct from an
    absent entry.
    """

    src: str
    dst: str
    weight: float

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise SchemaError(
                f"self-edge on {self.src!r}: diagonal entries are node values, not edges"
            )
        if not 0.0 <= self.weight <= 1.0:
            raise SchemaError(
                f"edge {self.src!r}->{self.dst!r}: weight {self.weight} outside [0, 1]"
            )

    @property
    def pair(self) -> tuple[str, str]:
        return (self.src, self.dst)


@dataclass(frozen=True)
class RiskPath:
    """An ordered sequence of edges ending at a target node.

    Paths are simple: no node appears twice. ``sources`` are the ordered
    non-terminal node ids; the terminal node's own value never feeds the
    aggregation of that node.
    """

    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not self.edges:
            raise SchemaError("a path needs at least one edge")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.dst != b.src:
                raise SchemaError(f"disconnected path: {a.dst!r} != {b.src!r}")
        nodes = self.node_ids
        if len(set(nodes)) != len(nodes):
            raise SchemaError(f"path revisits a node: {nodes}")

    @property
    def terminal(self) -> str:
        return self.edges[-1].dst

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(e.src for e in self.edges)

    @property
    def node_ids(self) -> tuple[str, ...]:
        return self.sources + (self.terminal,)

    def __len__(self) -> int:
        return len(self.edges)


class FcmGraph:
    """Nodes plus directed weighted edges; immutable once constructed.

    The canonical matrix view puts node values on the diagonal and edge
    weights off-diagonal; absent entries stay absent (``None``), they are
    not zero weights.
    """

    def __init__(
        self,
        nodes: Iterable[RiskNode],
        edges: Iterable[Edge] = (),
        timestamp: str = "",
    ) -> None:
        self._nodes: dict[str, RiskNode] = {}
        for node in nodes:
            if node.id in self._nodes:
                raise SchemaError(f"duplicate node id {node.id!r}")
            self._nodes[node.id] = node
        if not self._nodes:
            raise SchemaError("graph needs at least one node")

        roots = [n.id for n in self._nodes.values() if n.level == 0]
        if len(roots) != 1:
            raise SchemaError(f"expected exactly one level-0 root, found {roots}")
        self._root = roots[0]

        for node in self._nodes.values():
            if node.parent is None:
                continue
            parent = self._nodes.get(node.parent)
            if parent is None:
                raise SchemaError(f"node {node.id!r}: unknown parent {node.parent!r}")
            if parent.level != node.level - 1:
                raise SchemaError(
                    f"node {node.id!r} (level {node.level}): parent {parent.id!r} "
                    f"is level {parent.level}, expected {node.level - 1}"
                )

        self._edges: dict[tuple[str, str], Edge] = {}
        for edge in edges:
            for endpoint in edge.pair:
                if endpoint not in self._nodes:
                    raise SchemaError(
                        f"edge {edge.src!r}->{edge.dst!r}: unknown node {endpoint!r}"
                    )
            if edge.pair in self._edges:
                raise SchemaError(f"duplicate edge {edge.src!r}->{edge.dst!r}")
            self._edges[edge.pair] = edge

        self.timestamp = timestamp

        self._in: dict[str, tuple[Edge, ...]] = {nid: () for nid in self._nodes}
        self._out: dict[str, tuple[Edge, ...]] = {nid: () for nid in self._nodes}
        # adjacency in canonical (sorted) order so every traversal is deterministic
        for pair in sorted(self._edges):
            edge = self._edges[pair]
            self._in[edge.dst] += (edge,)
            self._out[edge.src] += (edge,)

    # -- accessors ---------------------------------------------------------

    @property
    def root_id(self) -> str:
        return self._root

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._nodes))

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, node_id: str) -> RiskNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r}") from None

    def nodes(self) -> tuple[RiskNode, ...]:
        return tuple(self._nodes[nid] for nid in self.node_ids)

    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges[pair] for pair in sorted(self._edges))

    def edge(self, src: str, dst: str) -> Edge | None:
        return self._edges.get((src, dst))

    def in_edges(self, node_id: str) -> tuple[Edge, ...]:
        self.node(node_id)
        return self._in[node_id]

    def out_edges(self, node_id: str) -> tuple[Edge, ...]:
        self.node(node_id)
        return self._out[node_id]

    def levels(self) -> dict[int, tuple[str, ...]]:
        """Node ids grouped by hierarchy level, each group sorted."""
        out: dict[int, list[str]] = {}
        for nid in self.node_ids:
            out.setdefault(self._nodes[nid].level, []).append(nid)
        return {lvl: tuple(ids) for lvl, ids in sorted(out.items())}

    def values(self) -> dict[str, float]:
        """Supplied vulnerability values, keyed by node id."""
        return {
            nid: n.value
            for nid, n in self._nodes.items()
            if n.value is not None
        }

    # -- derived views -----------------------------------------------------

    def with_overrides(
        self,
        node_values: Mapping[str, float] | None = None,
        edge_weights: Mapping[tuple[str, str], float] | None = None,
    ) -> "FcmGraph":
        """A copy with some node values / edge weights replaced.

        Only existing nodes and existing edges may be overridden; weights and
        values must stay in [0, 1].
        """
        node_values = dict(node_values or {})
        edge_weights = dict(edge_weights or {})
        for nid in node_values:
            self.node(nid)
        for pair in edge_weights:
            if pair not in self._edges:
                raise UnknownNodeError(
                    f"no edge {pair[0]!r}->{pair[1]!r} to override"
                )
        nodes = [
            replace(n, value=node_values[n.id]) if n.id in node_values else n
            for n in self.nodes()
        ]
        edges = [
            replace(e, weight=edge_weights[e.pair]) if e.pair in edge_weights else e
            for e in self.edges()
        ]
        return FcmGraph(nodes, edges, timestamp=self.timestamp)

    def to_matrix(self) -> tuple[tuple[str, ...], list[list[float | None]]]:
        """Adjacency relation matrix in canonical node order.

        Diagonal cells are node values, off-diagonal cells edge weights;
        absent entries are ``None``.
        """
        ids = self.node_ids
        index = {nid: i for i, nid in enumerate(ids)}
        matrix: list[list[float | None]] = [
            [None] * len(ids) for _ in ids
        ]
        for nid in ids:
            matrix[index[nid]][index[nid]] = self._nodes[nid].value
        for (src, dst), edge in self._edges.items():
            matrix[index[src]][index[dst]] = edge.weight
        return ids, matrix


def build_graph(
    hierarchy: Sequence[RiskNode],
    matrix: Sequence[Sequence[float | None]],
    timestamp: str = "",
) -> FcmGraph:
    """Build a graph from a node list and its adjacency relation matrix.

    ``matrix`` is square and aligned with ``hierarchy`` order. Diagonal
    entries become node values, off-diagonal entries become edges, and
    ``None`` entries are preserved as absent.
    """
    n = len(hierarchy)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise SchemaError(
            f"matrix must be {n}x{n} to match the {n} declared nodes"
        )
    nodes: list[RiskNode] = []
    for i, node in enumerate(hierarchy):
        cell = matrix[i][i]
        if cell is not None and not 0.0 <= cell <= 1.0:
            raise SchemaError(f"node {node.id!r}: value {cell} outside [0, 1]")
        nodes.append(replace(node, value=cell))
    edges: list[Edge] = []
    for i, row in enumerate(matrix):
        for j, cell in enumerate(row):
            if i == j or cell is None:
                continue
            edges.append(Edge(hierarchy[i].id, hierarchy[j].id, cell))
    return FcmGraph(nodes, edges, timestamp=timestamp)


@dataclass(frozen=True)
class ConnectivityViolation:
    """A valued node whose antecedent chain to the root is broken."""

    node: str
    missing_edge: tuple[str, str]

    @property
    def message(self) -> str:
        src, dst = self.missing_edge
        return (
            f"node {self.node!r} has a value but its antecedent chain is broken: "
            f"no edge {src!r}->{dst!r}"
        )


def validate_connectivity(graph: FcmGraph) -> list[ConnectivityViolation]:
    """Check that every evaluated node reaches the root along its parent chain.

    Each valued node must be linked to its antecedent, whose chain must in
    turn reach the system root. Violations are data, not exceptions; an
    empty list means the map is usable.
    """
    violations: list[ConnectivityViolation] = []
    for nid in graph.node_ids:
        node = graph.node(nid)
        if node.value is None or node.parent is None:
            continue
        current = node
        while current.parent is not None:
            if graph.edge(current.id, current.parent) is None:
                violations.append(
                    ConnectivityViolation(nid, (current.id, current.parent))
                )
                break
            current = graph.node(current.parent)
    return violations


def enumerate_paths(graph: FcmGraph, target: str, max_len: int) -> list[RiskPath]:
    """All simple directed paths of length <= ``max_len`` ending at ``target``.

    Sorted canonically: by length, then lexicographically by source ids.
    With ``max_len=2`` and the root as target this yields direct edges,
    root-level detours, and second-level feeds, in that order.
    """
    graph.node(target)
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")

    found: list[RiskPath] = []

    def extend(suffix: tuple[Edge, ...], seen: frozenset[str]) -> None:
        head = suffix[0].src
        found.append(RiskPath(suffix))
        if len(suffix) == max_len:
            return
        for edge in graph.in_edges(head):
            if edge.src not in seen:
                extend((edge,) + suffix, seen | {edge.src})

    for edge in graph.in_edges(target):
        extend((edge,), frozenset((edge.src, target)))

    found.sort(key=lambda p: (len(p), p.sources))
    return found


def enumerate_paths_from(graph: FcmGraph, source: str, max_len: int) -> list[RiskPath]:
    """All simple directed paths of length <= ``max_len`` starting at ``source``.

    Mirror of :func:`enumerate_paths`; used for transmitter-side analytics.
    Sorted by length, then by the full node sequence.
    """
    graph.node(source)
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")

    found: list[RiskPath] = []

    def extend(prefix: tuple[Edge, ...], seen: frozenset[str]) -> None:
        tail = prefix[-1].dst
        found.append(RiskPath(prefix))
        if len(prefix) == max_len:
            return
        for edge in graph.out_edges(tail):
            if edge.dst not in seen:
                extend(prefix + (edge,), seen | {edge.dst})

    for edge in graph.out_edges(source):
        extend((edge,), frozenset((source, edge.dst)))

    found.sort(key=lambda p: (len(p), p.node_ids))
    return found
