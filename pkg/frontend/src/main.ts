import { ApiClient } from './api.js';
import { ReviewStore } from './store.js';
import { ReviewView } from './view.js';

const HEALTH_POLL_MS = 5000;

function bootstrap(): void {
  const container = document.getElementById('app');
  if (!container) throw new Error('missing #app container');
  const store = new ReviewStore(new ApiClient(''));
  const saved = window.localStorage.getItem('findialog-reviewer');
  if (saved) store.setReviewer(saved);
  store.subscribe((state) => window.localStorage.setItem('findialog-reviewer', state.reviewer));
  new ReviewView(container, store);
  void store.loadAll().catch(() => store.pollHealth());
  window.setInterval(() => void store.pollHealth(), HEALTH_POLL_MS);
}

bootstrap();
