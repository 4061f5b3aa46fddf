/** Wire types for the engine's HTTP+JSON surface. */

export interface ApiErrorBody {
  code: 'bad_request' | 'not_found' | 'conflict' | 'unsupported' | 'internal';
  message: string;
  detail?: Record<string, unknown>;
}

export interface AttributeStats {
  names: string[];
  mins: number[];
  maxs: number[];
  means: number[];
}

export interface DatasetInfo {
  id: string;
  attributes: string[];
  row_count: number;
  stats: AttributeStats;
}

export interface RowsPage {
  offset: number;
  total: number;
  rows: { cod: number; values: number[] }[];
}

export interface MetricListing {
  metrics: {
    name: string;
    family: string;
    default_p: number;
    claims_triangle_inequality: boolean;
  }[];
}

export interface ProjectionPoint {
  cod: number;
  x: number;
  y: number;
  z: number;
}

export interface Projection {
  coords: ProjectionPoint[];
  pivots: number[][];
  stress: number;
  seed: number;
  metric: { family: string; p: number };
}

export interface ResultEntry {
  cod: number;
  distance: number;
}

export interface WorkspaceResult {
  workspace_id: string;
  parent_id: string | null;
  seed: number;
  entries: ResultEntry[];
}

export interface ViewModelJson {
  technique: string;
  items: unknown[];
  axis_meta: Record<string, unknown>;
  params_echo: Record<string, unknown>;
}

/** Metric section of a query payload / pick template. */
export interface MetricSpec {
  name: string;
  p?: number;
  weights?: number[];
}

/** Body of POST /queries; also the shape returned by POST .../pick. */
export interface QueryPayload {
  dataset: string;
  metric: MetricSpec;
  center: { cod: number } | { vector: number[] };
  knn?: { k: number };
  range?: { radius: number };
  parent?: string;
}

export type Technique =
  | 'projection'
  | 'parallel_coordinates'
  | 'scatter'
  | 'table_lens'
  | 'star';

export const TECHNIQUES: Technique[] = [
  'projection',
  'parallel_coordinates',
  'scatter',
  'table_lens',
  'star',
];
