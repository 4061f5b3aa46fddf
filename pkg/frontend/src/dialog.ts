/** Query dialog state: metric family, exponent, per-attribute weights and
 * k/radius, with client-side validation mirroring the engine's
 * preconditions. Weights default to 1 for every named attribute; the fresh
 * dialog is a euclidean k=40 query around the picked center.
 */

import type { QueryPayload } from './types';

export const DEFAULT_K = 40;

export interface DialogState {
  dataset: string;
  centerCod: number;
  metricName: string;
  p: number | null;
  /** One weight per dataset attribute, aligned with attributeNames. */
  weights: number[];
  attributeNames: string[];
  mode: 'knn' | 'range';
  k: number;
  radius: number;
  /** Workspace the center was picked from, if any. */
  parent: string | null;
}

export function freshDialog(
  dataset: string,
  attributeNames: string[],
  centerCod: number,
): DialogState {
  return {
    dataset,
    centerCod,
    metricName: 'euclidean',
    p: null,
    weights: attributeNames.map(() => 1),
    attributeNames,
    mode: 'knn',
    k: DEFAULT_K,
    radius: 0,
    parent: null,
  };
}

/** Populate the dialog from a pick template returned by the server. */
export function dialogFromTemplate(
  template: QueryPayload,
  attributeNames: string[],
): DialogState {
  if (!('cod' in template.center)) {
    throw new Error('pick template must carry a cod center');
  }
  return {
    dataset: template.dataset,
    centerCod: template.center.cod,
    metricName: template.metric.name,
    p: template.metric.p ?? null,
    weights: template.metric.weights ?? attributeNames.map(() => 1),
    attributeNames,
    mode: template.range !== undefined ? 'range' : 'knn',
    k: template.knn?.k ?? DEFAULT_K,
    radius: template.range?.radius ?? 0,
    parent: template.parent ?? null,
  };
}

/** Client-side validation; returns human-readable problems, empty if valid. */
export function validateDialog(d: DialogState): string[] {
  const problems: string[] = [];
  if (d.mode === 'knn' && (!Number.isInteger(d.k) || d.k < 1)) {
    problems.push('k must be an integer >= 1');
  }
  if (d.mode === 'range' && !(d.radius >= 0)) {
    problems.push('radius must be >= 0');
  }
  if (d.p !== null && !(d.p >= 1)) {
    problems.push('p must be >= 1');
  }
  if (d.weights.length !== d.attributeNames.length) {
    problems.push(`expected ${d.attributeNames.length} weights, got ${d.weights.length}`);
  }
  d.weights.forEach((w, i) => {
    if (!(w >= 0)) problems.push(`weight for ${d.attributeNames[i] ?? `attribute ${i}`} must be >= 0`);
  });
  return problems;
}

const UNWEIGHTED = new Set(['euclidean', 'city_block', 'minkowski']);

/** Build the POST /queries payload. Callers must validate first. */
export function dialogToPayload(d: DialogState): QueryPayload {
  const payload: QueryPayload = {
    dataset: d.dataset,
    metric: { name: d.metricName },
    center: { cod: d.centerCod },
  };
  if (d.p !== null) payload.metric.p = d.p;
  if (!UNWEIGHTED.has(d.metricName)) payload.metric.weights = d.weights.slice();
  if (d.mode === 'knn') payload.knn = { k: d.k };
  else payload.range = { radius: d.radius };
  if (d.parent !== null) payload.parent = d.parent;
  return payload;
}
