/** DOM rendering for the review console. Renders purely from ReviewState;
 *  all mutations round-trip through the store (and thus the server). */

import type { ReviewState, ReviewStore } from './store.js';
import type { UiQuestionView } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

const STATUS_LABELS: Record<string, string> = {
  pending: 'Pending',
  kept: 'Kept',
  removed: 'Removed',
  edited: 'Edited',
};

export class ReviewView {
  private root: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly store: ReviewStore,
  ) {
    this.root = container;
    this.store.subscribe(() => this.render(this.store.state));
    document.addEventListener('keydown', (event) => this.onKey(event));
    this.render(this.store.state);
  }

  private onKey(event: KeyboardEvent): void {
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === 'INPUT' || target.tagName === 'TEXTAREA')) return;
    const focused = this.store.state.focusedId;
    switch (event.key) {
      case 'k':
        if (focused) void this.store.submitVerdict(focused, 'keep');
        break;
      case 'r':
        if (focused) void this.store.submitVerdict(focused, 'remove');
        break;
      case 'e':
        if (focused) this.openEditor(focused);
        break;
      case 'ArrowDown':
      case 'j':
        this.store.focusMove(1);
        event.preventDefault();
        break;
      case 'ArrowUp':
        this.store.focusMove(-1);
        event.preventDefault();
        break;
      default:
        return;
    }
  }

  private openEditor(questionId: string): void {
    const question = this.store.state.questions.get(questionId);
    if (question && question.status === 'pending' && question.draft === null) {
      this.store.setDraft(questionId, question.effective_text);
    }
  }

  private render(state: ReviewState): void {
    this.root.replaceChildren(
      this.renderBanner(state),
      this.renderHeader(state),
      this.renderBody(state),
      this.renderNotices(state),
    );
  }

  private renderBanner(state: ReviewState): HTMLElement {
    const banner = el('div', state.online ? 'banner hidden' : 'banner offline');
    banner.id = 'offline-banner';
    banner.textContent = 'Server unreachable - changes are disabled until the connection returns.';
    return banner;
  }

  private renderHeader(state: ReviewState): HTMLElement {
    const header = el('header', 'header');
    const title = el('div', 'title');
    title.append(
      el('h1', undefined, 'Question review'),
      el('span', 'phase', state.round
        ? `round ${state.round.round} - ${state.round.phase}`
        : 'loading...'),
    );

    const progress = el('div', 'progress');
    progress.id = 'progress';
    if (state.round) {
      const p = state.round.progress;
      progress.append(
        el('span', 'chip pending', `pending ${p.pending}`),
        el('span', 'chip kept', `kept ${p.kept}`),
        el('span', 'chip removed', `removed ${p.removed}`),
        el('span', 'chip edited', `edited ${p.edited}`),
      );
    }

    const reviewer = el('input') as HTMLInputElement;
    reviewer.id = 'reviewer';
    reviewer.value = state.reviewer;
    reviewer.title = 'reviewer label recorded with every verdict';
    reviewer.addEventListener('change', () => this.store.setReviewer(reviewer.value));

    const complete = el('button', 'complete') as HTMLButtonElement;
    complete.id = 'complete-review';
    complete.textContent = state.completed ? 'Round unblocked' : 'Complete review';
    complete.disabled = !this.store.canComplete();
    complete.addEventListener('click', () => void this.store.completeReview());

    const controls = el('div', 'controls');
    controls.append(reviewer, complete);
    header.append(title, progress, controls);
    return header;
  }

  private renderBody(state: ReviewState): HTMLElement {
    const body = el('div', 'body');
    body.append(this.renderSidebar(state), this.renderQueue(state));
    return body;
  }

  private renderSidebar(state: ReviewState): HTMLElement {
    const sidebar = el('aside', 'sidebar');
    sidebar.id = 'cluster-sidebar';
    for (const cluster of state.clusters) {
      const item = el('button',
        `cluster${state.selectedCluster === cluster.cluster ? ' selected' : ''}`);
      item.dataset.cluster = String(cluster.cluster);
      item.append(
        el('span', 'theme', cluster.theme_label || `cluster ${cluster.cluster}`),
        el('span', 'count', `${cluster.reviewed_count}/${cluster.entries} reviewed`),
        el('span', 'size', `${cluster.size} in cluster`),
      );
      item.addEventListener('click', () => void this.store.selectCluster(cluster.cluster));
      sidebar.append(item);
    }
    sidebar.append(this.renderAddForm(state));
    return sidebar;
  }

  private renderAddForm(state: ReviewState): HTMLElement {
    const form = el('div', 'add-form');
    const textarea = el('textarea') as HTMLTextAreaElement;
    textarea.id = 'add-question-text';
    textarea.placeholder = 'Add a question for an uncovered topic...';
    const button = el('button', undefined, 'Add question') as HTMLButtonElement;
    button.id = 'add-question';
    button.disabled = state.completed;
    button.addEventListener('click', () => {
      const text = textarea.value.trim();
      if (!text) return;
      void this.store.addQuestion(text, state.selectedCluster).then((ok) => {
        if (ok) textarea.value = '';
      });
    });
    form.append(textarea, button);
    return form;
  }

  private renderQueue(state: ReviewState): HTMLElement {
    const queue = el('main', 'queue');
    queue.id = 'question-queue';
    for (const id of state.order) {
      const question = state.questions.get(id);
      if (question) queue.append(this.renderCard(question, state));
    }
    if (state.order.length === 0) {
      queue.append(el('p', 'empty', 'No questions in this cluster.'));
    }
    return queue;
  }

  private renderCard(question: UiQuestionView, state: ReviewState): HTMLElement {
    const classes = ['card', `status-${question.status}`];
    if (question.pending) classes.push('inflight');
    if (state.focusedId === question.id) classes.push('focused');
    const card = el('article', classes.join(' '));
    card.dataset.id = question.id;
    card.tabIndex = 0;
    card.addEventListener('focus', () => this.store.focus(question.id));
    card.addEventListener('click', () => this.store.focus(question.id));

    const meta = el('div', 'meta');
    meta.append(el('span', 'status-label', STATUS_LABELS[question.status]));
    if (question.is_representative) meta.append(el('span', 'rep', 'representative'));
    meta.append(el('span', 'rev', `rev ${question.revision}`));
    card.append(meta, el('p', 'text', question.effective_text));

    if (question.draft !== null) {
      const editor = el('textarea', 'editor') as HTMLTextAreaElement;
      editor.value = question.draft;
      editor.addEventListener('input', () => this.store.setDraft(question.id, editor.value));
      const save = el('button', 'save', 'Save edit') as HTMLButtonElement;
      save.addEventListener('click', () =>
        void this.store.submitVerdict(question.id, 'edit', editor.value));
      const cancel = el('button', 'cancel', 'Cancel') as HTMLButtonElement;
      cancel.addEventListener('click', () => this.store.setDraft(question.id, null));
      card.append(editor, save, cancel);
      return card;
    }

    if (question.status === 'pending') {
      const actions = el('div', 'actions');
      const disabled = question.pending || !state.online || state.completed;
      for (const [label, handler] of [
        ['Keep (k)', () => void this.store.submitVerdict(question.id, 'keep')],
        ['Remove (r)', () => void this.store.submitVerdict(question.id, 'remove')],
        ['Edit (e)', () => this.openEditor(question.id)],
      ] as const) {
        const button = el('button', undefined, label) as HTMLButtonElement;
        button.disabled = disabled;
        button.addEventListener('click', handler);
        actions.append(button);
      }
      card.append(actions);
    }
    return card;
  }

  private renderNotices(state: ReviewState): HTMLElement {
    const zone = el('div', 'notices');
    zone.id = 'notices';
    for (const notice of state.notices.slice(-3)) {
      zone.append(el('div', `notice ${notice.kind}`, notice.message));
    }
    return zone;
  }
}
