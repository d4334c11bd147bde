/** Typed client for the review-service endpoint set. The UI talks to the
 *  server exclusively through this module. */

import type {
  ApiErrorBody,
  ClusterSummary,
  QuestionView,
  RoundInfo,
  VerdictAction,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }

  get code(): ApiErrorBody['code'] {
    return this.body.code;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly token: string | null = null,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const headers: Record<string, string> = {
      'Content-Type': 'application/json',
      ...((init?.headers as Record<string, string>) ?? {}),
    };
    if (this.token) headers['X-Review-Token'] = this.token;
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, { ...init, headers });
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: 'invalid', message: `HTTP ${response.status}`, detail: {} };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  healthz(): Promise<{ status: string }> {
    return this.request('/healthz');
  }

  currentRound(): Promise<RoundInfo> {
    return this.request('/api/rounds/current');
  }

  clusters(): Promise<ClusterSummary[]> {
    return this.request('/api/clusters');
  }

  clusterQuestions(cluster: number, status?: string): Promise<QuestionView[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : '';
    return this.request(`/api/clusters/${cluster}/questions${query}`);
  }

  submitVerdict(
    questionId: string,
    action: VerdictAction,
    reviewer: string,
    expectedRevision: number,
    newText?: string,
  ): Promise<QuestionView> {
    return this.request(`/api/questions/${encodeURIComponent(questionId)}/verdict`, {
      method: 'POST',
      body: JSON.stringify({
        action,
        reviewer,
        expected_revision: expectedRevision,
        new_text: newText ?? null,
      }),
    });
  }

  addQuestion(text: string, reviewer: string, clusterHint: number | null): Promise<QuestionView> {
    return this.request('/api/questions', {
      method: 'POST',
      body: JSON.stringify({ text, reviewer, cluster_hint: clusterHint }),
    });
  }

  completeReview(): Promise<{ round: number; phase: string }> {
    return this.request('/api/rounds/current/complete-review', { method: 'POST' });
  }
}
