/** Thin typed client over the engine's HTTP routes.
 *
 * Every successful call returns both the parsed JSON and the exact response
 * text, so callers can display numbers that are traceable byte-for-byte to
 * what the server sent. The fetch implementation is injectable for testing.
 */

import type {
  ApiErrorBody,
  DatasetInfo,
  MetricListing,
  Projection,
  QueryPayload,
  RowsPage,
  ViewModelJson,
  WorkspaceResult,
} from './types';

export interface FetchResponseLike {
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; body?: string; headers?: Record<string, string> },
) => Promise<FetchResponseLike>;

export interface ApiResult<T> {
  data: T;
  /** Exact bytes of the response body. */
  raw: string;
}

export class ApiRequestError extends Error {
  readonly status: number;
  readonly body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.name = 'ApiRequestError';
    this.status = status;
    this.body = body;
  }
}

/** Serialize a query payload with a fixed key order so request bodies are
 * reproducible across sessions and replayable from recordings. */
export function serializeQueryPayload(payload: QueryPayload): string {
  const metric: Record<string, unknown> = { name: payload.metric.name };
  if (payload.metric.p !== undefined) metric.p = payload.metric.p;
  if (payload.metric.weights !== undefined) metric.weights = payload.metric.weights;
  const out: Record<string, unknown> = { dataset: payload.dataset, metric };
  out.center = payload.center;
  if (payload.knn !== undefined) out.knn = payload.knn;
  if (payload.range !== undefined) out.range = payload.range;
  if (payload.parent !== undefined) out.parent = payload.parent;
  return JSON.stringify(out);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: string,
    contentType = 'application/json',
  ): Promise<ApiResult<T>> {
    const init: { method: string; body?: string; headers?: Record<string, string> } = {
      method,
    };
    if (body !== undefined) {
      init.body = body;
      init.headers = { 'content-type': contentType };
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const raw = await resp.text();
    if (resp.status >= 400) {
      let parsed: ApiErrorBody;
      try {
        parsed = JSON.parse(raw) as ApiErrorBody;
      } catch {
        parsed = { code: 'internal', message: raw || `HTTP ${resp.status}` };
      }
      throw new ApiRequestError(resp.status, parsed);
    }
    return { data: JSON.parse(raw) as T, raw };
  }

  healthz(): Promise<ApiResult<{ status: string; seed: number }>> {
    return this.request('GET', '/healthz');
  }

  uploadDataset(csvText: string, id?: string): Promise<ApiResult<DatasetInfo>> {
    const path = id === undefined ? '/datasets' : `/datasets?id=${encodeURIComponent(id)}`;
    return this.request('POST', path, csvText, 'text/csv');
  }

  rows(datasetId: string, offset = 0, limit = 50): Promise<ApiResult<RowsPage>> {
    return this.request('GET', `/datasets/${datasetId}/rows?offset=${offset}&limit=${limit}`);
  }

  metrics(): Promise<ApiResult<MetricListing>> {
    return this.request('GET', '/metrics');
  }

  overview(
    datasetId: string,
    metric = 'euclidean',
    p?: number,
    weights?: number[],
  ): Promise<ApiResult<Projection>> {
    const params = [`metric=${encodeURIComponent(metric)}`];
    if (p !== undefined) params.push(`p=${p}`);
    if (weights !== undefined) params.push(`weights=${weights.join(',')}`);
    return this.request('GET', `/datasets/${datasetId}/overview?${params.join('&')}`);
  }

  runQuery(payload: QueryPayload): Promise<ApiResult<WorkspaceResult>> {
    return this.request('POST', '/queries', serializeQueryPayload(payload));
  }

  workspaceProjection(wsId: string): Promise<ApiResult<Projection>> {
    return this.request('GET', `/workspaces/${wsId}/projection`);
  }

  workspaceView(
    wsId: string,
    technique: string,
    params: Record<string, string> = {},
  ): Promise<ApiResult<ViewModelJson>> {
    const entries = Object.entries(params);
    const qs = entries.length
      ? '?' + entries.map(([k, v]) => `${k}=${encodeURIComponent(v)}`).join('&')
      : '';
    return this.request('GET', `/workspaces/${wsId}/views/${technique}${qs}`);
  }

  pick(wsId: string, cod: number): Promise<ApiResult<QueryPayload>> {
    return this.request('POST', `/workspaces/${wsId}/pick`, JSON.stringify({ cod }));
  }

  closeWorkspace(wsId: string): Promise<ApiResult<{ closed: string }>> {
    return this.request('DELETE', `/workspaces/${wsId}`);
  }
}
