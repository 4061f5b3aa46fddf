/** DOM rendering layer: draws the store's state and wires user events back
 * into it. All data shown comes from store state; this module only lays it
 * out. Re-rendered wholesale on every store notification — the scene sizes
 * involved (hundreds of points, a handful of panels) make diffing
 * unnecessary.
 */

import { type CameraState, PICK_RADIUS_PX, pickAt, projectToScreen, rotated, zoomed } from './camera';
import type { DialogState } from './dialog';
import { AppStore, type WorkspacePanel } from './store';
import { TECHNIQUES, type ProjectionPoint, type Technique } from './types';

const SCATTER_W = 420;
const SCATTER_H = 320;
const SVG_NS = 'http://www.w3.org/2000/svg';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== undefined) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderScatter(
  points: ProjectionPoint[],
  camera: CameraState,
  highlight: (cod: number) => boolean,
  onPick: (cod: number) => void,
  onHover: (cod: number | null) => void,
  onCamera: (c: CameraState) => void,
): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('width', String(SCATTER_W));
  svg.setAttribute('height', String(SCATTER_H));
  svg.setAttribute('class', 'scatter3d');
  const screen = projectToScreen(points, camera, SCATTER_W, SCATTER_H);
  const byDepth = [...screen].sort((a, b) => a.depth - b.depth);
  for (const p of byDepth) {
    const c = document.createElementNS(SVG_NS, 'circle');
    c.setAttribute('cx', p.sx.toFixed(2));
    c.setAttribute('cy', p.sy.toFixed(2));
    const hot = highlight(p.cod);
    c.setAttribute('r', hot ? '6' : '3');
    c.setAttribute('class', hot ? 'pt hot' : 'pt');
    svg.appendChild(c);
  }

  const local = (ev: MouseEvent): [number, number] => {
    const box = svg.getBoundingClientRect();
    return [ev.clientX - box.left, ev.clientY - box.top];
  };
  let dragging = false;
  let moved = false;
  let last: [number, number] = [0, 0];
  svg.addEventListener('mousedown', (ev) => {
    dragging = true;
    moved = false;
    last = local(ev);
  });
  svg.addEventListener('mousemove', (ev) => {
    const [x, y] = local(ev);
    if (dragging) {
      const [lx, ly] = last;
      if (Math.abs(x - lx) + Math.abs(y - ly) > 1) moved = true;
      onCamera(rotated(camera, (x - lx) * 0.01, (y - ly) * 0.01));
      last = [x, y];
    } else {
      onHover(pickAt(screen, x, y, PICK_RADIUS_PX));
    }
  });
  svg.addEventListener('mouseleave', () => {
    dragging = false;
    onHover(null);
  });
  svg.addEventListener('mouseup', (ev) => {
    dragging = false;
    if (moved) return;
    const [x, y] = local(ev);
    const cod = pickAt(screen, x, y, PICK_RADIUS_PX);
    if (cod !== null) onPick(cod);
  });
  svg.addEventListener('wheel', (ev) => {
    ev.preventDefault();
    onCamera(zoomed(camera, ev.deltaY < 0 ? 1.1 : 1 / 1.1));
  });
  return svg;
}

function renderDialog(store: AppStore, d: DialogState): HTMLElement {
  const box = el('div', 'dialog');
  box.appendChild(el('h3', undefined, `Query around cod ${d.centerCod} (${d.dataset})`));

  const metricRow = el('div', 'row');
  metricRow.appendChild(el('label', undefined, 'metric'));
  const metricSel = el('select');
  for (const name of ['euclidean', 'city_block', 'minkowski', 'weighted_minkowski', 'exp_weighted']) {
    const opt = el('option', undefined, name);
    opt.value = name;
    if (name === d.metricName) opt.selected = true;
    metricSel.appendChild(opt);
  }
  metricSel.addEventListener('change', () => {
    d.metricName = metricSel.value;
  });
  metricRow.appendChild(metricSel);
  metricRow.appendChild(el('label', undefined, 'p'));
  const pInput = el('input');
  pInput.type = 'number';
  pInput.value = d.p === null ? '' : String(d.p);
  pInput.addEventListener('change', () => {
    d.p = pInput.value === '' ? null : Number(pInput.value);
  });
  metricRow.appendChild(pInput);
  box.appendChild(metricRow);

  const weightsBox = el('div', 'weights');
  d.attributeNames.forEach((name, i) => {
    const row = el('div', 'row');
    row.appendChild(el('label', undefined, name));
    const slider = el('input');
    slider.type = 'range';
    slider.min = '0';
    slider.max = '10';
    slider.step = '0.1';
    slider.value = String(d.weights[i] ?? 1);
    const num = el('input');
    num.type = 'number';
    num.value = String(d.weights[i] ?? 1);
    const apply = (v: string) => {
      d.weights[i] = Number(v);
      slider.value = v;
      num.value = v;
    };
    slider.addEventListener('input', () => apply(slider.value));
    num.addEventListener('change', () => apply(num.value));
    row.appendChild(slider);
    row.appendChild(num);
    weightsBox.appendChild(row);
  });
  box.appendChild(weightsBox);

  const sizeRow = el('div', 'row');
  const modeSel = el('select');
  for (const mode of ['knn', 'range'] as const) {
    const opt = el('option', undefined, mode);
    opt.value = mode;
    if (mode === d.mode) opt.selected = true;
    modeSel.appendChild(opt);
  }
  modeSel.addEventListener('change', () => {
    d.mode = modeSel.value as 'knn' | 'range';
  });
  sizeRow.appendChild(modeSel);
  const sizeInput = el('input');
  sizeInput.type = 'number';
  sizeInput.value = String(d.mode === 'knn' ? d.k : d.radius);
  sizeInput.addEventListener('change', () => {
    if (d.mode === 'knn') d.k = Number(sizeInput.value);
    else d.radius = Number(sizeInput.value);
  });
  sizeRow.appendChild(sizeInput);
  box.appendChild(sizeRow);

  for (const problem of store.dialogProblems) {
    box.appendChild(el('div', 'problem', problem));
  }

  const buttons = el('div', 'row');
  const run = el('button', undefined, 'Run query');
  run.addEventListener('click', () => void store.submitDialog());
  const cancel = el('button', undefined, 'Cancel');
  cancel.addEventListener('click', () => store.closeDialog());
  buttons.appendChild(run);
  buttons.appendChild(cancel);
  box.appendChild(buttons);
  return box;
}

function renderResultTable(store: AppStore, panel: WorkspacePanel): HTMLElement {
  const table = el('table', 'results');
  const head = el('tr');
  head.appendChild(el('th', undefined, 'cod'));
  head.appendChild(el('th', undefined, 'distance'));
  table.appendChild(head);
  for (const entry of panel.entries) {
    const tr = el('tr');
    if (store.isHighlighted(panel.workspaceId, entry.cod)) tr.className = 'hot';
    tr.addEventListener('mouseenter', () => store.hover(entry.cod));
    tr.addEventListener('mouseleave', () => store.hover(null));
    tr.addEventListener('click', () => void store.openDialogFromPanel(panel.workspaceId, entry.cod));
    tr.appendChild(el('td', undefined, String(entry.cod)));
    tr.appendChild(el('td', undefined, String(entry.distance)));
    table.appendChild(tr);
  }
  return table;
}

function renderPanel(store: AppStore, panel: WorkspacePanel): HTMLElement {
  const box = el('div', 'panel');
  if (panel.closed) {
    box.classList.add('tombstone');
    box.appendChild(el('h3', undefined, `${panel.workspaceId} (closed)`));
    const lineage =
      panel.provenance.length > 0 ? `descended from ${panel.provenance.join(' ← ')}` : 'a root query';
    box.appendChild(el('p', undefined, lineage));
    box.appendChild(
      el('p', undefined, `${panel.query.metric.name} query on ${panel.query.dataset}`),
    );
    return box;
  }

  const header = el('div', 'panel-header');
  header.appendChild(el('h3', undefined, panel.workspaceId));
  const closeBtn = el('button', undefined, '×');
  closeBtn.addEventListener('click', () => void store.closePanel(panel.workspaceId));
  header.appendChild(closeBtn);
  box.appendChild(header);

  const tabs = el('div', 'tabs');
  for (const tech of TECHNIQUES) {
    const b = el('button', tech === panel.activeTab ? 'tab active' : 'tab', tech);
    b.addEventListener('click', () => void store.activateTab(panel.workspaceId, tech));
    tabs.appendChild(b);
  }
  box.appendChild(tabs);

  if (panel.activeTab === 'projection' && panel.projection !== null) {
    box.appendChild(
      renderScatter(
        panel.projection.coords,
        panel.camera,
        (cod) => store.isHighlighted(panel.workspaceId, cod),
        (cod) => void store.openDialogFromPanel(panel.workspaceId, cod),
        (cod) => store.hover(cod),
        (c) => store.setCamera(panel.workspaceId, c),
      ),
    );
  } else if (panel.activeTab !== 'projection') {
    const view = panel.views[panel.activeTab];
    const pre = el('pre', 'viewmodel');
    pre.textContent = view === undefined ? 'loading…' : view.raw;
    box.appendChild(pre);
  }

  box.appendChild(renderResultTable(store, panel));
  return box;
}

export function render(store: AppStore, root: HTMLElement): void {
  root.textContent = '';

  for (const banner of store.banners) {
    const b = el('div', 'banner', `${banner.code}: ${banner.message}`);
    const dismiss = el('button', undefined, 'dismiss');
    dismiss.addEventListener('click', () => store.dismissBanner(banner.id));
    b.appendChild(dismiss);
    root.appendChild(b);
  }

  const overviewBox = el('div', 'overview');
  overviewBox.appendChild(el('h2', undefined, 'Overview'));
  if (store.overview !== null) {
    const ov = store.overview;
    overviewBox.appendChild(
      el('p', undefined, `${ov.datasetId} · ${ov.metricName} · stress ${ov.projection.stress}`),
    );
    let camera = { yaw: 0.6, pitch: 0.4, zoom: 1 };
    overviewBox.appendChild(
      renderScatter(
        ov.projection.coords,
        camera,
        (cod) => store.hoveredCod === cod,
        (cod) => store.openDialogFromOverview(cod),
        (cod) => store.hover(cod),
        (c) => {
          camera = c;
          render(store, root);
        },
      ),
    );
  }
  root.appendChild(overviewBox);

  if (store.dialog !== null) root.appendChild(renderDialog(store, store.dialog));

  const grid = el('div', 'panel-grid');
  for (const panel of store.panels) grid.appendChild(renderPanel(store, panel));
  root.appendChild(grid);
}

/** Mount the app: render on every store change. */
export function mount(store: AppStore, root: HTMLElement): void {
  store.subscribe(() => render(store, root));
  render(store, root);
}
