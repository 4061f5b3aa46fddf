/** Browser entry point: wire the store to the page and offer CSV upload. */

import { ApiClient, type FetchLike } from './api';
import { mount } from './render';
import { AppStore } from './store';

const api = new ApiClient('', fetch.bind(globalThis) as FetchLike);
const store = new AppStore(api);

const root = document.getElementById('app');
if (root === null) throw new Error('missing #app mount point');
mount(store, root);

const upload = document.getElementById('upload');
if (upload instanceof HTMLInputElement) {
  upload.addEventListener('change', async () => {
    const file = upload.files?.[0];
    if (file === undefined) return;
    const name = file.name.replace(/\.csv$/i, '');
    const info = await store.uploadDataset(await file.text(), name);
    if (info !== null) await store.loadOverview(info.id);
  });
}
