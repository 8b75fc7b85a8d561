import { readFileSync } from 'node:fs';

import type { InferClient } from '../src/api';
import type {
  ApiError,
  GoalSeekPayload,
  NetworkCatalog,
  Observation,
  PosteriorPayload,
} from '../src/types';

export function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, 'utf-8')) as T;
}

type InferResponder = (observations: Observation[]) => PosteriorPayload | ApiError;

/**
 * Scripted stand-in for the HTTP client: replies from fixtures and counts
 * requests, optionally holding responses back so staleness can be exercised.
 */
export class FakeClient implements InferClient {
  inferCalls = 0;
  private held: Array<() => void> = [];

  constructor(
    private readonly catalog: NetworkCatalog,
    private readonly responder: InferResponder,
    private readonly manual = false,
  ) {}

  async fetchNetwork(): Promise<NetworkCatalog> {
    return this.catalog;
  }

  postInfer(observations: Observation[]): Promise<PosteriorPayload | ApiError> {
    this.inferCalls += 1;
    const reply = this.responder(observations);
    if (!this.manual) {
      return Promise.resolve(reply);
    }
    return new Promise((resolve) => {
      this.held.push(() => resolve(reply));
    });
  }

  /** Resolve held-back responses in the given arrival order. */
  release(...indices: number[]): void {
    for (const i of indices) {
      this.held[i]();
    }
  }

  async postGoalSeek(): Promise<GoalSeekPayload | ApiError> {
    throw new Error('not scripted');
  }
}
