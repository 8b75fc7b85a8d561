/**
 * View model for the what-if explorer.
 *
 * Two fixed scenario slots (baseline and variant) hold the last posterior
 * payload each; observations are validated against the node catalog before
 * any request goes out, and stale responses are discarded by per-slot
 * sequence numbers.  No probability math happens here: deltas are plain
 * differences of payload numbers, computed for display.
 */

import type { InferClient } from './api';
import {
  isApiError,
  type CatalogNode,
  type NetworkCatalog,
  type NodeSummary,
  type Observation,
  type ObservationValue,
  type PosteriorNode,
  type PosteriorPayload,
} from './types';

export type SlotName = 'baseline' | 'variant';

export interface SlotState {
  payload: PosteriorPayload | null;
  conflict: string | null;
  pending: boolean;
}

export interface NodeDelta {
  id: string;
  probabilities: number[];
  mean?: number;
  sd?: number;
}

/** Validation message for a prospective observation, or null when it is fine. */
export function validateObservation(
  node: CatalogNode | undefined,
  value: ObservationValue,
): string | null {
  if (!node) {
    return 'unknown node';
  }
  if (node.kind === 'ranked') {
    if (typeof value !== 'string' || !node.states.includes(value)) {
      return `expected one of: ${node.states.join(', ')}`;
    }
    return null;
  }
  const numeric = typeof value === 'number' ? value : Number(value);
  if (!Number.isFinite(numeric)) {
    return 'expected a number';
  }
  const lo = node.edges[0];
  const hi = node.edges[node.edges.length - 1];
  if (numeric < lo || numeric > hi) {
    return `value must be within [${lo}, ${hi}] ${node.unit}`.trimEnd();
  }
  return null;
}

export class ViewModel {
  catalog: NetworkCatalog | null = null;

  private readonly observations = new Map<SlotName, Map<string, ObservationValue>>([
    ['baseline', new Map()],
    ['variant', new Map()],
  ]);

  readonly slots: Record<SlotName, SlotState> = {
    baseline: { payload: null, conflict: null, pending: false },
    variant: { payload: null, conflict: null, pending: false },
  };

  private seq: Record<SlotName, number> = { baseline: 0, variant: 0 };

  private inflight: Record<SlotName, AbortController | null> = {
    baseline: null,
    variant: null,
  };

  constructor(private readonly client: InferClient) {}

  async loadCatalog(): Promise<NetworkCatalog> {
    this.catalog = await this.client.fetchNetwork();
    return this.catalog;
  }

  node(id: string): CatalogNode | undefined {
    return this.catalog?.nodes.find((n) => n.id === id);
  }

  observationsOf(slot: SlotName): Observation[] {
    return Array.from(this.observations.get(slot)!, ([node, value]) => ({ node, value }));
  }

  /**
   * Validate and record an observation, then re-run the slot.  Returns the
   * validation message when the value is rejected; no request is sent then.
   */
  async setObservation(slot: SlotName, nodeId: string, value: ObservationValue):
    Promise<string | null> {
    const message = validateObservation(this.node(nodeId), value);
    if (message !== null) {
      return message;
    }
    this.observations.get(slot)!.set(nodeId, value);
    await this.refresh(slot);
    return null;
  }

  /** Remove one observation (or all of them) and restore the slot's view. */
  async clearObservation(slot: SlotName, nodeId?: string): Promise<void> {
    if (nodeId === undefined) {
      this.observations.get(slot)!.clear();
    } else {
      this.observations.get(slot)!.delete(nodeId);
    }
    await this.refresh(slot);
  }

  /**
   * Re-query the slot.  At most one request is in flight per slot: issuing a
   * new one aborts its predecessor, and the sequence number drops any reply
   * that still slips through out of order.
   */
  async refresh(slot: SlotName): Promise<void> {
    const ticket = ++this.seq[slot];
    const state = this.slots[slot];
    this.inflight[slot]?.abort();
    const controller = new AbortController();
    this.inflight[slot] = controller;
    state.pending = true;
    let payload;
    try {
      payload = await this.client.postInfer(this.observationsOf(slot), controller.signal);
    } catch (err) {
      if ((err as { name?: string }).name === 'AbortError') {
        return; // superseded
      }
      throw err;
    }
    if (ticket !== this.seq[slot]) {
      return; // a newer request superseded this one
    }
    this.inflight[slot] = null;
    state.pending = false;
    if (isApiError(payload)) {
      // impossible evidence: keep the observations editable, flag the conflict
      state.conflict = payload.error.message;
      return;
    }
    state.conflict = null;
    state.payload = payload;
  }

  posteriorNode(slot: SlotName, nodeId: string): PosteriorNode | undefined {
    return this.slots[slot].payload?.nodes.find((n) => n.id === nodeId);
  }

  targetSummary(slot: SlotName): NodeSummary | undefined {
    const target = this.catalog?.target;
    if (!target) {
      return undefined;
    }
    return this.posteriorNode(slot, target)?.summary;
  }

  /** Per-node differences, variant minus baseline; antisymmetric under swap. */
  deltas(): NodeDelta[] {
    const base = this.slots.baseline.payload;
    const vari = this.slots.variant.payload;
    if (!base || !vari) {
      return [];
    }
    return computeDeltas(base, vari);
  }

  /** Swap the two slots, observations and payloads alike. */
  swapSlots(): void {
    const base = this.observations.get('baseline')!;
    const vari = this.observations.get('variant')!;
    this.observations.set('baseline', vari);
    this.observations.set('variant', base);
    [this.slots.baseline, this.slots.variant] = [this.slots.variant, this.slots.baseline];
    this.seq = { baseline: this.seq.variant, variant: this.seq.baseline };
    this.inflight = { baseline: this.inflight.variant, variant: this.inflight.baseline };
  }
}

export function computeDeltas(
  baseline: PosteriorPayload,
  variant: PosteriorPayload,
): NodeDelta[] {
  const byId = new Map(baseline.nodes.map((n) => [n.id, n]));
  return variant.nodes.map((after) => {
    const before = byId.get(after.id);
    if (!before) {
      throw new Error(`slots disagree on node ${after.id}`);
    }
    const delta: NodeDelta = {
      id: after.id,
      probabilities: after.probabilities.map((p, i) => p - before.probabilities[i]),
    };
    if (after.summary && before.summary) {
      delta.mean = after.summary.mean - before.summary.mean;
      delta.sd = after.summary.sd - before.summary.sd;
    }
    return delta;
  });
}
