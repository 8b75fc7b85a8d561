/**
 * Payload types for the qualnet HTTP API.
 *
 * The UI performs no probability math of its own: every displayed number
 * originates from one of these payloads (deltas are plain differences of
 * payload numbers, computed for display only).
 */

export type NodeGroup = 'activity' | 'fact' | 'indicator';

export interface RankedNode {
  id: string;
  group: NodeGroup;
  kind: 'ranked';
  states: string[];
}

export interface IntervalNode {
  id: string;
  group: NodeGroup;
  kind: 'interval';
  edges: number[];
  unit: string;
  states: string[];
}

export type CatalogNode = RankedNode | IntervalNode;

export interface NetworkCatalog {
  target: string | null;
  nodes: CatalogNode[];
}

export interface NodeSummary {
  mean: number;
  sd: number;
  mode_bin: number;
  mode_tied: boolean;
}

export interface PosteriorNode {
  id: string;
  states: string[];
  probabilities: number[];
  summary?: NodeSummary;
}

export interface PosteriorPayload {
  format: 'posterior-v1';
  nodes: PosteriorNode[];
}

export interface ApiError {
  error: { type: string; message: string };
}

export type ObservationValue = number | string;

export interface Observation {
  node: string;
  value: ObservationValue;
}

export interface GoalSeekNode {
  id: string;
  mean?: number;
  sd?: number;
  mode_bin?: number;
  probabilities?: number[];
  mode_state?: string;
}

export interface GoalSeekPayload {
  format: 'goalseek-v1';
  target: string;
  desired: ObservationValue;
  nodes: GoalSeekNode[];
}

export function isApiError(payload: unknown): payload is ApiError {
  return typeof payload === 'object' && payload !== null && 'error' in payload;
}
