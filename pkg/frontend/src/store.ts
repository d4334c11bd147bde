/** Review state container.
 *
 * Two invariants the whole UI leans on:
 *  - never fabricate state: `status` and `revision` on a question are only
 *    ever values the server acknowledged (a card in flight is flagged
 *    `pending`, its status untouched);
 *  - every verdict carries the revision last received for that question, so
 *    concurrent reviewers resolve through server-side 409s, not lost
 *    updates.
 */

import { ApiClient, ApiError } from './api.js';
import type {
  ClusterSummary,
  Notice,
  QuestionView,
  RoundInfo,
  UiQuestionView,
  VerdictAction,
} from './types.js';

export interface ReviewState {
  online: boolean;
  round: RoundInfo | null;
  clusters: ClusterSummary[];
  selectedCluster: number | null;
  questions: Map<string, UiQuestionView>;
  order: string[];
  focusedId: string | null;
  notices: Notice[];
  reviewer: string;
  completed: boolean;
}

type Listener = (state: ReviewState) => void;

const NOTICE_LIMIT = 5;

export class ReviewStore {
  readonly state: ReviewState = {
    online: true,
    round: null,
    clusters: [],
    selectedCluster: null,
    questions: new Map(),
    order: [],
    focusedId: null,
    notices: [],
    reviewer: 'expert',
    completed: false,
  };

  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private notify(kind: Notice['kind'], message: string): void {
    this.state.notices = [...this.state.notices, { kind, message, at: Date.now() }]
      .slice(-NOTICE_LIMIT);
    this.emit();
  }

  setReviewer(name: string): void {
    this.state.reviewer = name.trim() || 'expert';
    this.emit();
  }

  /** Install a server view, preserving any local draft buffer. */
  private acceptServerView(view: QuestionView): UiQuestionView {
    const existing = this.state.questions.get(view.id);
    const merged: UiQuestionView = {
      ...view,
      pending: false,
      draft: existing?.draft ?? null,
    };
    this.state.questions.set(view.id, merged);
    return merged;
  }

  async loadAll(): Promise<void> {
    this.state.round = await this.api.currentRound();
    this.state.clusters = await this.api.clusters();
    this.state.completed = this.state.round.phase !== 'awaiting_review';
    if (this.state.selectedCluster === null && this.state.clusters.length > 0) {
      await this.selectCluster(this.state.clusters[0].cluster);
    } else if (this.state.selectedCluster !== null) {
      await this.selectCluster(this.state.selectedCluster);
    } else {
      this.emit();
    }
  }

  async selectCluster(cluster: number): Promise<void> {
    const views = await this.api.clusterQuestions(cluster);
    this.state.selectedCluster = cluster;
    this.state.order = views.map((v) => v.id);
    for (const view of views) this.acceptServerView(view);
    if (!this.state.focusedId || !this.state.order.includes(this.state.focusedId)) {
      this.state.focusedId = this.state.order[0] ?? null;
    }
    this.emit();
  }

  private async refreshHeader(): Promise<void> {
    this.state.round = await this.api.currentRound();
    this.state.clusters = await this.api.clusters();
  }

  /** Re-fetch the authoritative view of one question from its cluster. */
  private async refreshQuestion(questionId: string): Promise<void> {
    const current = this.state.questions.get(questionId);
    if (!current || current.cluster === null) return;
    const views = await this.api.clusterQuestions(current.cluster);
    for (const view of views) {
      if (view.id === questionId) {
        const refreshed = this.acceptServerView(view);
        refreshed.draft = null; // conflict invalidates the local edit buffer
      }
    }
  }

  setDraft(questionId: string, draft: string | null): void {
    const question = this.state.questions.get(questionId);
    if (!question) return;
    question.draft = draft;
    this.emit();
  }

  focus(questionId: string | null): void {
    this.state.focusedId = questionId;
    this.emit();
  }

  focusMove(delta: number): void {
    if (this.state.order.length === 0) return;
    const at = this.state.focusedId ? this.state.order.indexOf(this.state.focusedId) : -1;
    const next = Math.min(Math.max(at + delta, 0), this.state.order.length - 1);
    this.state.focusedId = this.state.order[next];
    this.emit();
  }

  async submitVerdict(questionId: string, action: VerdictAction, newText?: string): Promise<boolean> {
    const question = this.state.questions.get(questionId);
    if (!question || question.pending) return false;
    if (question.status !== 'pending') {
      this.notify('info', `${questionId} is already ${question.status}`);
      return false;
    }
    question.pending = true;
    this.emit();
    try {
      const updated = await this.api.submitVerdict(
        questionId, action, this.state.reviewer, question.revision, newText);
      const merged = this.acceptServerView(updated);
      merged.draft = null;
      await this.refreshHeader();
      this.emit();
      return true;
    } catch (error) {
      question.pending = false;
      if (error instanceof ApiError && error.code === 'conflict') {
        await this.refreshQuestion(questionId);
        this.notify('conflict',
          `Question was updated by another reviewer; card refreshed (${questionId})`);
      } else if (error instanceof ApiError) {
        this.notify('error', error.message);
      } else {
        this.state.online = false;
        this.notify('error', `network failure: ${String(error)}`);
      }
      this.emit();
      return false;
    }
  }

  async addQuestion(text: string, clusterHint: number | null): Promise<boolean> {
    try {
      const created = await this.api.addQuestion(text, this.state.reviewer, clusterHint);
      this.acceptServerView(created);
      await this.refreshHeader();
      this.notify('info', `Added question ${created.id}`);
      this.emit();
      return true;
    } catch (error) {
      this.notify('error', error instanceof ApiError ? error.message : String(error));
      return false;
    }
  }

  /** Pending count per the last server-acknowledged round info. */
  pendingCount(): number {
    return this.state.round?.progress.pending ?? 0;
  }

  canComplete(): boolean {
    return !this.state.completed && this.state.round !== null && this.pendingCount() === 0;
  }

  async completeReview(): Promise<boolean> {
    if (!this.canComplete()) return false;
    try {
      const result = await this.api.completeReview();
      this.state.completed = result.phase !== 'awaiting_review';
      if (this.state.round) this.state.round.phase = result.phase;
      this.notify('info', `Review complete - round ${result.round} unblocked (${result.phase})`);
      this.emit();
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        await this.refreshHeader();
        this.notify('error', error.message);
        this.emit();
      }
      return false;
    }
  }

  async pollHealth(): Promise<void> {
    try {
      await this.api.healthz();
      if (!this.state.online) {
        this.state.online = true;
        this.notify('info', 'connection restored');
      }
      this.emit();
    } catch {
      this.state.online = false;
      this.emit();
    }
  }
}
