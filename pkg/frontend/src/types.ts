/** Wire types mirroring the review-service JSON API. */

export type QuestionStatus = 'pending' | 'kept' | 'removed' | 'edited';
export type VerdictAction = 'keep' | 'remove' | 'edit';

export interface QuestionView {
  id: string;
  text: string;
  effective_text: string;
  origin: 'extracted' | 'expert_added';
  round: number;
  status: QuestionStatus;
  edited_text: string | null;
  cluster: number | null;
  revision: number;
  is_representative: boolean;
}

export interface ClusterSummary {
  cluster: number;
  theme_label: string;
  size: number;
  entries: number;
  reviewed_count: number;
}

export interface Progress {
  pending: number;
  kept: number;
  removed: number;
  edited: number;
}

export interface RoundInfo {
  round: number;
  phase: string;
  batch: { id: string; entries: number; clusters: number };
  progress: Progress;
}

export interface ApiErrorBody {
  code: 'not_found' | 'conflict' | 'invalid' | 'locked';
  message: string;
  detail: Record<string, unknown>;
}

/** Local view-state wrapper: server-acknowledged fields plus UI-only flags.
 *  `status`/`revision` always hold the last value the server acknowledged;
 *  `pending` marks an in-flight verdict and is cleared only on acknowledgment
 *  or conflict rollback. `draft` is the inline edit buffer. */
export interface UiQuestionView extends QuestionView {
  pending: boolean;
  draft: string | null;
}

export interface Notice {
  kind: 'info' | 'conflict' | 'error';
  message: string;
  at: number;
}
