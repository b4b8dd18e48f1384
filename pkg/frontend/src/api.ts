/** HTTP client for the annotation service's three endpoints. */
import type { AnnotationRecord, TaskView } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface Progress {
  claims: number;
  annotators: string[];
  completed: Record<string, number>;
  total_records: number;
}

export type NextTaskResult =
  | { kind: "task"; task: TaskView }
  | { kind: "done" }
  | { kind: "error"; message: string };

export class AnnotationApi {
  constructor(
    private readonly baseUrl: string,
    private readonly annotatorToken: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string, params?: Record<string, string>): string {
    const search = new URLSearchParams(params ?? {}).toString();
    return `${this.baseUrl.replace(/\/$/, "")}${path}${search ? `?${search}` : ""}`;
  }

  /**
   * Next task for this annotator. A 409 means the requested proposal's
   * remaining tasks would complete section coverage, so the client
   * automatically re-requests across all proposals.
   */
  async fetchNextTask(proposal?: string): Promise<NextTaskResult> {
    const params: Record<string, string> = { annotator: this.annotatorToken };
    if (proposal) params.proposal = proposal;
    let response: Response;
    try {
      response = await this.fetchImpl(this.url("/tasks/next", params));
    } catch (err) {
      return { kind: "error", message: err instanceof Error ? err.message : String(err) };
    }
    if (response.status === 409 && proposal) {
      return this.fetchNextTask(undefined);
    }
    if (response.status === 204) return { kind: "done" };
    if (!response.ok) {
      return { kind: "error", message: `service returned ${response.status}` };
    }
    return { kind: "task", task: (await response.json()) as TaskView };
  }

  /**
   * Persist one judgment. A duplicate (409) acknowledges idempotently:
   * the record is already stored server-side, so the client advances.
   */
  async submitJudgment(record: AnnotationRecord): Promise<{ ok: boolean; message?: string }> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url("/annotations"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(record),
      });
    } catch (err) {
      return { ok: false, message: err instanceof Error ? err.message : String(err) };
    }
    if (response.status === 201 || response.status === 409) {
      return { ok: true };
    }
    let message = `service returned ${response.status}`;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) message = body.error;
    } catch {
      // keep the status message
    }
    return { ok: false, message };
  }

  async fetchProgress(): Promise<Progress> {
    const response = await this.fetchImpl(this.url("/progress"));
    if (!response.ok) throw new Error(`service returned ${response.status}`);
    return (await response.json()) as Progress;
  }
}
