/**
 * Wire types for the fcmrisk service.
 *
 * The UI never computes risk numbers itself: every figure on screen comes
 * from one of these payloads.
 */

export interface NodeRow {
  id: string;
  label: string;
  level: number;
  parent: string | null;
  value: number | null;
  aggregate: number | null;
  effective: number | null;
  in_degree: number;
  out_degree: number;
  centrality: number;
  extended_in: number | null;
  extended_out: number | null;
  vulnerability: number | null;
  classification: string | null;
  in_rank: number;
  out_rank: number;
  centrality_rank: number;
}

export interface EdgeRow {
  src: string;
  dst: string;
  weight: number;
}

export interface PathContribution {
  path: string[];
  measure: number;
  risk: number;
  product: number;
}

export interface ConfigEcho {
  k: number;
  tnorm: string;
  lambda: number;
  precision: number;
}

export interface ResultDocument {
  config: ConfigEcho;
  timestamp: string;
  root: string;
  systemic_risk: number | null;
  nodes: NodeRow[];
  edges: EdgeRow[];
  contributions: Record<string, PathContribution[]>;
  analytics: Record<string, number | null>;
  violations: { node: string; missing_edge: [string, string] }[];
  reference?: Record<string, Record<string, number>>;
}

export interface HierarchyNode {
  id: string;
  label: string;
  level: number;
  parent: string | null;
  value: number | null;
}

export interface HierarchyDocument {
  timestamp: string;
  nodes: HierarchyNode[];
  edges: EdgeRow[];
  config?: ConfigEcho;
  reference?: Record<string, Record<string, number>>;
}

export interface RoundSummary {
  round_id: string;
  timestamp: string;
  frozen: boolean;
  previous: string | null;
  experts: string[];
  lambda?: number;
}

export interface SubmissionEntry {
  src: string;
  dst: string;
  weight: number;
  confidence: number;
}

export interface Submission {
  expert_id: string;
  unit_id: string;
  entries: SubmissionEntry[];
}

export interface SubmissionAck {
  round_id: string;
  expert_id: string;
  entries: number;
  replaced_previous: boolean;
}

export interface FeedbackRecord {
  src: string;
  dst: string;
  expert_weight: number;
  merged_weight: number;
  divergence: number;
  rank: number;
}

export interface FeedbackReport {
  round_id: string;
  expert_id: string;
  records: FeedbackRecord[];
}

export interface WhatIfOverrides {
  nodes?: Record<string, number>;
  edges?: EdgeRow[];
  horizon?: number;
}

export interface DeltaEntry {
  before: number | null;
  after: number | null;
  delta: number | null;
}

export interface WhatIfReport {
  config: ConfigEcho;
  overrides: { nodes: Record<string, number>; edges: EdgeRow[] };
  before: ResultDocument;
  after: ResultDocument;
  deltas: Record<string, { effective: DeltaEntry; aggregate: DeltaEntry }>;
  systemic_risk: DeltaEntry;
}
