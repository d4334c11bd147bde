/** In-memory stand-in for the review service, used as a mocked transport in
 *  component tests. Mirrors the server's contract: optimistic revision
 *  checks, batch-scoped progress, and the complete-review gate. */

import type { FetchLike } from '../src/api.js';
import type { ApiErrorBody, QuestionView } from '../src/types.js';

export interface FakeQuestion extends QuestionView {}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

function apiError(status: number, code: ApiErrorBody['code'], message: string,
                  detail: Record<string, unknown> = {}): Response {
  return json(status, { code, message, detail });
}

export class FakeServer {
  questions = new Map<string, FakeQuestion>();
  themes = new Map<number, string>();
  phase = 'awaiting_review';
  round = 0;
  offline = false;
  requests: string[] = [];
  private expertSeq = 0;

  seed(count: number, clusters = 2): void {
    for (let i = 0; i < count; i += 1) {
      const cluster = i % clusters;
      const id = `q${String(i).padStart(3, '0')}`;
      this.questions.set(id, {
        id,
        text: `问题${i}的内容是什么？`,
        effective_text: `问题${i}的内容是什么？`,
        origin: 'extracted',
        round: 0,
        status: 'pending',
        edited_text: null,
        cluster,
        revision: 0,
        is_representative: i < clusters,
      });
    }
    for (let c = 0; c < clusters; c += 1) this.themes.set(c, `主题/标签/${c}`);
  }

  get fetch(): FetchLike {
    return async (input, init) => this.route(input, init);
  }

  private progress() {
    const p = { pending: 0, kept: 0, removed: 0, edited: 0 };
    for (const q of this.questions.values()) p[q.status] += 1;
    return p;
  }

  private route(input: string, init?: RequestInit): Response {
    this.requests.push(`${init?.method ?? 'GET'} ${input}`);
    if (this.offline) throw new TypeError('fetch failed');
    const url = new URL(input, 'http://fake');
    const path = url.pathname;
    const method = init?.method ?? 'GET';

    if (path === '/healthz') return json(200, { status: 'ok' });

    if (path === '/api/rounds/current' && method === 'GET') {
      return json(200, {
        round: this.round,
        phase: this.phase,
        batch: { id: 'batch-0000', entries: this.questions.size, clusters: this.themes.size },
        progress: this.progress(),
      });
    }

    if (path === '/api/clusters' && method === 'GET') {
      const rows = [...this.themes.keys()].sort((a, b) => a - b).map((c) => {
        const members = [...this.questions.values()].filter((q) => q.cluster === c);
        return {
          cluster: c,
          theme_label: this.themes.get(c) ?? `cluster ${c}`,
          size: members.length,
          entries: members.length,
          reviewed_count: members.filter((q) => q.status !== 'pending').length,
        };
      });
      return json(200, rows);
    }

    const clusterMatch = path.match(/^\/api\/clusters\/(\d+)\/questions$/);
    if (clusterMatch && method === 'GET') {
      const cluster = Number(clusterMatch[1]);
      const status = url.searchParams.get('status');
      const rows = [...this.questions.values()]
        .filter((q) => q.cluster === cluster)
        .filter((q) => !status || q.status === status);
      return json(200, rows);
    }

    const verdictMatch = path.match(/^\/api\/questions\/([^/]+)\/verdict$/);
    if (verdictMatch && method === 'POST') {
      if (this.phase !== 'awaiting_review') {
        return apiError(423, 'locked', `run is in phase ${this.phase}`);
      }
      const id = decodeURIComponent(verdictMatch[1]);
      const question = this.questions.get(id);
      if (!question) return apiError(404, 'not_found', `unknown question ${id}`);
      const body = JSON.parse(String(init?.body)) as {
        action: string; expected_revision: number; new_text: string | null;
      };
      if (body.expected_revision !== question.revision) {
        return apiError(409, 'conflict', `${id}: expected revision mismatch`);
      }
      if (question.status !== 'pending') {
        return apiError(422, 'invalid', `${id}: already ${question.status}`);
      }
      if (body.action === 'keep') question.status = 'kept';
      else if (body.action === 'remove') question.status = 'removed';
      else {
        question.status = 'edited';
        question.edited_text = body.new_text;
        question.effective_text = body.new_text ?? question.text;
      }
      question.revision += 1;
      return json(200, question);
    }

    if (path === '/api/questions' && method === 'POST') {
      if (this.phase !== 'awaiting_review') {
        return apiError(423, 'locked', `run is in phase ${this.phase}`);
      }
      const body = JSON.parse(String(init?.body)) as {
        text: string; cluster_hint: number | null;
      };
      if (!body.text.trim()) return apiError(422, 'invalid', 'empty text');
      this.expertSeq += 1;
      const id = `0000x${String(this.expertSeq).padStart(6, '0')}`;
      const created: FakeQuestion = {
        id,
        text: body.text,
        effective_text: body.text,
        origin: 'expert_added',
        round: this.round,
        status: 'kept',
        edited_text: null,
        cluster: body.cluster_hint,
        revision: 0,
        is_representative: false,
      };
      this.questions.set(id, created);
      return json(200, created);
    }

    if (path === '/api/rounds/current/complete-review' && method === 'POST') {
      const pendingIds = [...this.questions.values()]
        .filter((q) => q.status === 'pending').map((q) => q.id);
      if (pendingIds.length > 0) {
        return apiError(422, 'invalid', `${pendingIds.length} batch entries still pending`,
          { pending_ids: pendingIds });
      }
      this.phase = 'review_done';
      return json(200, { round: this.round, phase: this.phase });
    }

    return apiError(404, 'not_found', `no route ${method} ${path}`);
  }
}
