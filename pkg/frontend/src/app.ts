/** Session flow: one claim at a time, optimistic submit, server as truth.
 *
 * Only the active task is ever held in memory; completed tasks are
 * discarded on advance, so no section text outlives its task.
 */
import { AnnotationApi } from "./api.js";
import { JudgmentForm } from "./form.js";
import type { TaskView } from "./types.js";

export type Screen = "loading" | "task" | "done" | "error";

export class AnnotationSession {
  screen: Screen = "loading";
  currentTask: TaskView | null = null;
  form = new JudgmentForm();
  banner: string | null = null;
  completed = 0;

  constructor(
    private readonly api: AnnotationApi,
    private readonly annotatorToken: string,
  ) {}

  async start(): Promise<void> {
    await this.advance();
  }

  /** Fetch the next task, replacing (never accumulating) the current one. */
  async advance(proposal?: string): Promise<void> {
    this.screen = "loading";
    this.banner = null;
    const result = await this.api.fetchNextTask(proposal);
    if (result.kind === "task") {
      this.currentTask = result.task;
      this.form.reset();
      this.screen = "task";
    } else if (result.kind === "done") {
      this.currentTask = null;
      this.screen = "done";
    } else {
      this.banner = `Could not reach the annotation service: ${result.message}`;
      this.screen = "error";
    }
  }

  /** Retry after a network failure banner. */
  async retry(): Promise<void> {
    await this.advance();
  }

  get canSubmit(): boolean {
    return this.screen === "task" && this.form.canSubmit;
  }

  async submit(): Promise<boolean> {
    if (!this.currentTask) throw new Error("no active task");
    if (!this.form.canSubmit) throw new Error("submit is disabled until all fields are set");
    const record = this.form.toRecord(this.annotatorToken, this.currentTask.claim.claim_id);
    const result = await this.api.submitJudgment(record);
    if (!result.ok) {
      this.banner = result.message ?? "submission rejected";
      return false;
    }
    this.completed += 1;
    await this.advance();
    return true;
  }

  /** Keyboard path: digits 1-5 set agreement, mirroring the click path. */
  handleKey(key: string): boolean {
    if (this.screen !== "task") return false;
    return this.form.handleKey(key);
  }
}
