/**
 * Pure derivation of the network view model from a service result document.
 *
 * Node radius grows affinely with the node's vulnerability of record
 * (effective value, falling back to the aggregate), edge opacity with the
 * edge weight; both mappings are strictly monotone. Initial positions are
 * level-banded (root on top) so the force relaxation starts from a layered
 * layout instead of a hairball.
 */

import type { EdgeRow, NodeRow, ResultDocument } from "./types.js";

export const RADIUS_MIN = 6;
export const RADIUS_MAX = 30;
export const OPACITY_MIN = 0.15;
export const OPACITY_MAX = 1.0;

export class MalformedDocumentError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "MalformedDocumentError";
  }
}

export interface NetworkNodeVM {
  id: string;
  label: string;
  level: number;
  x: number;
  y: number;
  bandY: number;
  radius: number;
  quantity: number;
  row: NodeRow;
}

export interface NetworkEdgeVM {
  src: string;
  dst: string;
  weight: number;
  opacity: number;
}

export interface NetworkViewModel {
  nodes: NetworkNodeVM[];
  edges: NetworkEdgeVM[];
  levels: number[];
  horizon: number;
  selected: string | null;
}

export interface ViewOptions {
  width: number;
  height: number;
  levelFilter?: number | null;
}

function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}

export function nodeQuantity(row: NodeRow): number {
  const q = row.effective ?? row.vulnerability ?? 0;
  return clamp01(q);
}

export function radiusFor(quantity: number): number {
  return RADIUS_MIN + (RADIUS_MAX - RADIUS_MIN) * clamp01(quantity);
}

export function opacityFor(weight: number): number {
  return OPACITY_MIN + (OPACITY_MAX - OPACITY_MIN) * clamp01(weight);
}

function checkDocument(doc: ResultDocument): void {
  if (!doc || typeof doc !== "object") {
    throw new MalformedDocumentError("result document is not an object");
  }
  if (!Array.isArray(doc.nodes) || doc.nodes.length === 0) {
    throw new MalformedDocumentError("result document carries no nodes");
  }
  const ids = new Set<string>();
  for (const node of doc.nodes) {
    if (typeof node.id !== "string" || node.id === "") {
      throw new MalformedDocumentError("node without an id");
    }
    if (ids.has(node.id)) {
      throw new MalformedDocumentError(`duplicate node id ${node.id}`);
    }
    if (typeof node.level !== "number") {
      throw new MalformedDocumentError(`node ${node.id} has no level`);
    }
    ids.add(node.id);
  }
  if (!Array.isArray(doc.edges)) {
    throw new MalformedDocumentError("result document carries no edge list");
  }
  for (const edge of doc.edges as EdgeRow[]) {
    if (!ids.has(edge.src) || !ids.has(edge.dst)) {
      throw new MalformedDocumentError(
        `edge ${edge.src}->${edge.dst} references an unknown node`,
      );
    }
    if (typeof edge.weight !== "number" || edge.weight < 0 || edge.weight > 1) {
      throw new MalformedDocumentError(
        `edge ${edge.src}->${edge.dst} has a bad weight`,
      );
    }
  }
}

export function deriveNetworkView(
  doc: ResultDocument,
  options: ViewOptions,
): NetworkViewModel {
  checkDocument(doc);
  const { width, height } = options;
  const levelFilter = options.levelFilter ?? null;

  const levels = [...new Set(doc.nodes.map((n) => n.level))].sort(
    (a, b) => a - b,
  );
  const maxLevel = levels[levels.length - 1] ?? 0;
  const pad = RADIUS_MAX + 10;

  const visible = doc.nodes
    .filter((n) => levelFilter === null || n.level === levelFilter)
    .sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));

  const perLevel = new Map<number, NodeRow[]>();
  for (const node of visible) {
    const bucket = perLevel.get(node.level) ?? [];
    bucket.push(node);
    perLevel.set(node.level, bucket);
  }

  const nodes: NetworkNodeVM[] = [];
  for (const [level, rows] of [...perLevel.entries()].sort((a, b) => a[0] - b[0])) {
    const bandY =
      maxLevel === 0
        ? height / 2
        : pad + (level / maxLevel) * (height - 2 * pad);
    rows.forEach((row, i) => {
      const quantity = nodeQuantity(row);
      nodes.push({
        id: row.id,
        label: row.label,
        level,
        x: ((i + 1) / (rows.length + 1)) * width,
        y: bandY,
        bandY,
        radius: radiusFor(quantity),
        quantity,
        row,
      });
    });
  }

  const shown = new Set(nodes.map((n) => n.id));
  const edges: NetworkEdgeVM[] = doc.edges
    .filter((e) => shown.has(e.src) && shown.has(e.dst))
    .map((e) => ({
      src: e.src,
      dst: e.dst,
      weight: e.weight,
      opacity: opacityFor(e.weight),
    }))
    .sort((a, b) =>
      a.src === b.src
        ? a.dst < b.dst
          ? -1
          : 1
        : a.src < b.src
          ? -1
          : 1,
    );

  return {
    nodes,
    edges,
    levels,
    horizon: doc.config?.k ?? 2,
    selected: null,
  };
}
