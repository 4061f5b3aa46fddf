/** Single source of truth for UI state: uploaded datasets, the overview
 * scatter, the query dialog, and the tiled workspace panels.
 *
 * The store computes no distances and no projections; every number it holds
 * arrived in an API response, and each panel keeps the exact response text
 * its tables render from. Camera and selection state are per-panel.
 * Concurrent requests are tagged with monotonically increasing ids and
 * stale responses are discarded on arrival.
 */

import { ApiClient, ApiRequestError, type ApiResult } from './api';
import { type CameraState, defaultCamera } from './camera';
import {
  type DialogState,
  dialogFromTemplate,
  dialogToPayload,
  freshDialog,
  validateDialog,
} from './dialog';
import type {
  DatasetInfo,
  Projection,
  QueryPayload,
  ResultEntry,
  Technique,
  ViewModelJson,
} from './types';

export interface WorkspacePanel {
  workspaceId: string;
  parentId: string | null;
  query: QueryPayload;
  seed: number;
  entries: ResultEntry[];
  /** Exact response text of POST /queries; the result table renders this. */
  rawResult: string;
  projection: Projection | null;
  rawProjection: string | null;
  activeTab: Technique;
  camera: CameraState;
  /** Highlighted cods local to this panel (always ⊆ result cods). */
  selection: Set<number>;
  closed: boolean;
  /** Ancestor workspace ids, nearest first; shown on the tombstone. */
  provenance: string[];
  views: Partial<Record<Technique, ApiResult<ViewModelJson>>>;
}

export interface OverviewState {
  datasetId: string;
  metricName: string;
  projection: Projection;
  raw: string;
}

export interface ErrorBanner {
  id: number;
  code: string;
  message: string;
}

export class AppStore {
  readonly datasets = new Map<string, DatasetInfo>();
  overview: OverviewState | null = null;
  dialog: DialogState | null = null;
  dialogProblems: string[] = [];
  readonly panels: WorkspacePanel[] = [];
  hoveredCod: number | null = null;
  banners: ErrorBanner[] = [];

  private nextBannerId = 1;
  private requestSeq = 0;
  private latestOverviewRequest = 0;
  private readonly listeners: (() => void)[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      const i = this.listeners.indexOf(listener);
      if (i >= 0) this.listeners.splice(i, 1);
    };
  }

  private notify(): void {
    for (const l of this.listeners) l();
  }

  private banner(err: unknown): void {
    if (err instanceof ApiRequestError) {
      this.banners.push({ id: this.nextBannerId++, code: err.body.code, message: err.body.message });
    } else {
      this.banners.push({ id: this.nextBannerId++, code: 'internal', message: String(err) });
    }
    this.notify();
  }

  dismissBanner(id: number): void {
    this.banners = this.banners.filter((b) => b.id !== id);
    this.notify();
  }

  panel(workspaceId: string): WorkspacePanel {
    const p = this.panels.find((x) => x.workspaceId === workspaceId);
    if (p === undefined) throw new Error(`no panel for workspace ${workspaceId}`);
    return p;
  }

  // ---- dataset & overview -------------------------------------------------

  async uploadDataset(csvText: string, id?: string): Promise<DatasetInfo | null> {
    try {
      const { data } = await this.api.uploadDataset(csvText, id);
      this.datasets.set(data.id, data);
      this.notify();
      return data;
    } catch (err) {
      this.banner(err);
      return null;
    }
  }

  async loadOverview(datasetId: string, metricName = 'euclidean'): Promise<void> {
    const requestId = ++this.requestSeq;
    this.latestOverviewRequest = requestId;
    try {
      const { data, raw } = await this.api.overview(datasetId, metricName);
      if (requestId !== this.latestOverviewRequest) return; // stale
      this.overview = { datasetId, metricName, projection: data, raw };
      this.notify();
    } catch (err) {
      if (requestId === this.latestOverviewRequest) this.banner(err);
    }
  }

  // ---- query dialog -------------------------------------------------------

  /** Open the dialog for a cod picked in the overview scatter. */
  openDialogFromOverview(cod: number): void {
    if (this.overview === null) throw new Error('no overview loaded');
    const info = this.datasets.get(this.overview.datasetId);
    if (info === undefined) throw new Error(`unknown dataset ${this.overview.datasetId}`);
    this.dialog = freshDialog(info.id, info.attributes, cod);
    this.dialogProblems = [];
    this.notify();
  }

  /** Ask the server for a query template seeded by a cod inside a panel. */
  async openDialogFromPanel(workspaceId: string, cod: number): Promise<void> {
    try {
      const { data } = await this.api.pick(workspaceId, cod);
      const info = this.datasets.get(data.dataset);
      this.dialog = dialogFromTemplate(data, info?.attributes ?? []);
      this.dialogProblems = [];
      this.notify();
    } catch (err) {
      this.banner(err);
    }
  }

  closeDialog(): void {
    this.dialog = null;
    this.dialogProblems = [];
    this.notify();
  }

  /** Validate and submit the dialog; on success a new panel opens. */
  async submitDialog(): Promise<WorkspacePanel | null> {
    if (this.dialog === null) throw new Error('no dialog open');
    this.dialogProblems = validateDialog(this.dialog);
    if (this.dialogProblems.length > 0) {
      this.notify();
      return null;
    }
    const payload = dialogToPayload(this.dialog);
    try {
      const { data, raw } = await this.api.runQuery(payload);
      const panel: WorkspacePanel = {
        workspaceId: data.workspace_id,
        parentId: data.parent_id,
        query: payload,
        seed: data.seed,
        entries: data.entries,
        rawResult: raw,
        projection: null,
        rawProjection: null,
        activeTab: 'projection',
        camera: defaultCamera(),
        selection: new Set(),
        closed: false,
        provenance: this.ancestry(data.parent_id),
        views: {},
      };
      this.panels.push(panel);
      this.dialog = null;
      this.notify();
      await this.loadPanelProjection(panel.workspaceId);
      return panel;
    } catch (err) {
      this.banner(err);
      return null;
    }
  }

  private ancestry(parentId: string | null): string[] {
    const chain: string[] = [];
    let cursor = parentId;
    while (cursor !== null) {
      chain.push(cursor);
      const parent = this.panels.find((p) => p.workspaceId === cursor);
      cursor = parent === undefined ? null : parent.parentId;
    }
    return chain;
  }

  // ---- panels -------------------------------------------------------------

  async loadPanelProjection(workspaceId: string): Promise<void> {
    const panel = this.panel(workspaceId);
    try {
      const { data, raw } = await this.api.workspaceProjection(workspaceId);
      panel.projection = data;
      panel.rawProjection = raw;
      this.notify();
    } catch (err) {
      this.banner(err);
    }
  }

  async activateTab(workspaceId: string, tab: Technique): Promise<void> {
    const panel = this.panel(workspaceId);
    panel.activeTab = tab;
    this.notify();
    if (tab === 'projection' || panel.views[tab] !== undefined) return;
    try {
      panel.views[tab] = await this.api.workspaceView(workspaceId, tab);
      this.notify();
    } catch (err) {
      this.banner(err);
    }
  }

  setCamera(workspaceId: string, camera: CameraState): void {
    this.panel(workspaceId).camera = camera;
    this.notify();
  }

  /** Replace the panel-local selection, kept ⊆ the panel's result cods. */
  select(workspaceId: string, cods: Iterable<number>): void {
    const panel = this.panel(workspaceId);
    const members = new Set(panel.entries.map((e) => e.cod));
    panel.selection = new Set([...cods].filter((c) => members.has(c)));
    this.notify();
  }

  async closePanel(workspaceId: string): Promise<void> {
    const panel = this.panel(workspaceId);
    try {
      await this.api.closeWorkspace(workspaceId);
      panel.closed = true;
      this.notify();
    } catch (err) {
      this.banner(err);
    }
  }

  // ---- hover linking ------------------------------------------------------

  hover(cod: number | null): void {
    this.hoveredCod = cod;
    this.notify();
  }

  /** Whether the hovered cod should be highlighted inside this panel. */
  isHighlighted(workspaceId: string, cod: number): boolean {
    if (this.hoveredCod === null || this.hoveredCod !== cod) return false;
    const panel = this.panel(workspaceId);
    return !panel.closed && panel.entries.some((e) => e.cod === cod);
  }

  /** Ids of every open panel whose result set contains the cod. */
  panelsContaining(cod: number): string[] {
    return this.panels
      .filter((p) => !p.closed && p.entries.some((e) => e.cod === cod))
      .map((p) => p.workspaceId);
  }
}
