/** Shared fixtures: a frozen two-country result document as served. */

import type { NodeRow, ResultDocument } from "../src/types.js";

function row(partial: Partial<NodeRow> & { id: string; level: number }): NodeRow {
  return {
    label: partial.id,
    parent: null,
    value: null,
    aggregate: null,
    effective: null,
    in_degree: 0,
    out_degree: 0,
    centrality: 0,
    extended_in: null,
    extended_out: null,
    vulnerability: null,
    classification: "ordinary",
    in_rank: 1,
    out_rank: 1,
    centrality_rank: 1,
    ...partial,
  };
}

export function case2Result(): ResultDocument {
  return {
    config: { k: 2, tnorm: "product", lambda: 0.7, precision: 2 },
    timestamp: "two-country-case2",
    root: "SR",
    systemic_risk: 0.375,
    nodes: [
      row({
        id: "C1", level: 1, parent: "SR", value: 0.5, aggregate: 0.3,
        effective: 0.5, vulnerability: 0.3, in_degree: 0.6, out_degree: 0.3,
        centrality: 0.9, classification: "receiver",
      }),
      row({
        id: "C2", level: 1, parent: "SR", value: 0.3, effective: 0.3,
        in_degree: 0, out_degree: 1.4, centrality: 1.4,
        classification: "transmitter",
      }),
      row({
        id: "SR", level: 0, aggregate: 0.375, effective: 0.375,
        vulnerability: 0.375, in_degree: 1.1, out_degree: 0,
        centrality: 1.1, classification: "receiver",
      }),
    ],
    edges: [
      { src: "C1", dst: "SR", weight: 0.3 },
      { src: "C2", dst: "C1", weight: 0.6 },
      { src: "C2", dst: "SR", weight: 0.8 },
    ],
    contributions: {},
    analytics: { density: 0.5 },
    violations: [],
  };
}

export function whatIfReport(
  before: number,
  after: number,
  deltas: Record<string, number>,
) {
  const nodeDeltas: Record<
    string,
    { effective: DeltaShape; aggregate: DeltaShape }
  > = {};
  for (const [nodeId, delta] of Object.entries(deltas)) {
    nodeDeltas[nodeId] = {
      effective: { before: 0, after: delta, delta },
      aggregate: { before: null, after: null, delta: null },
    };
  }
  return {
    config: { k: 2, tnorm: "product", lambda: 0.7, precision: 2 },
    overrides: { nodes: {}, edges: [] },
    before: case2Result(),
    after: case2Result(),
    deltas: nodeDeltas,
    systemic_risk: { before, after, delta: after - before },
  };
}

interface DeltaShape {
  before: number | null;
  after: number | null;
  delta: number | null;
}
