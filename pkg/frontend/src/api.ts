/**
 * Thin fetch wrapper around the qualnet API.
 *
 * All methods resolve with the parsed payload; HTTP-level failures reject,
 * while structured error payloads (impossible evidence, bad observations)
 * resolve so the view model can surface them inline.
 */

import type {
  ApiError,
  GoalSeekPayload,
  NetworkCatalog,
  Observation,
  PosteriorPayload,
} from './types';

export interface InferClient {
  fetchNetwork(): Promise<NetworkCatalog>;
  postInfer(observations: Observation[], signal?: AbortSignal):
    Promise<PosteriorPayload | ApiError>;
  postGoalSeek(target: string, desired: number | string, report: string[]):
    Promise<GoalSeekPayload | ApiError>;
}

export class ApiClient implements InferClient {
  constructor(private readonly baseUrl: string) {}

  private async get(path: string): Promise<unknown> {
    const resp = await fetch(`${this.baseUrl}${path}`);
    return resp.json();
  }

  private async post(path: string, body: unknown, signal?: AbortSignal): Promise<unknown> {
    const resp = await fetch(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
    return resp.json();
  }

  async fetchNetwork(): Promise<NetworkCatalog> {
    return (await this.get('/api/network')) as NetworkCatalog;
  }

  async postInfer(observations: Observation[], signal?: AbortSignal):
    Promise<PosteriorPayload | ApiError> {
    return (await this.post('/api/infer', { observations }, signal)) as
      PosteriorPayload | ApiError;
  }

  async postGoalSeek(
    target: string,
    desired: number | string,
    report: string[],
  ): Promise<GoalSeekPayload | ApiError> {
    return (await this.post('/api/goal-seek', { target, desired, report })) as
      GoalSeekPayload | ApiError;
  }
}

/** API location: ?api=... query parameter, else the default serve port. */
export function apiBaseUrl(search: string): string {
  const fromQuery = new URLSearchParams(search).get('api');
  return fromQuery ?? 'http://127.0.0.1:8742';
}
