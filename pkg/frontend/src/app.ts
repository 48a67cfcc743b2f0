import { ApiClient } from "./api.js";
import {
  buildSubmission,
  canSubmit,
  emptyDraft,
  selectOption,
  toggleReason,
  toggleUnanswerable,
} from "./state.js";
import type { VerdictDraft } from "./state.js";
import { REASONS, REASON_LABELS } from "./types.js";
import type { Progress, Reason, TaskView } from "./types.js";

export interface AppOptions {
  root: HTMLElement;
  api: ApiClient;
  batchId: string;
  annotatorId: string;
}

const OPTION_KEYS = ["1", "2", "3", "4"];

/**
 * One annotator session. The server is the only store: the app renders the
 * next served task, submits a verdict, and advances only after the server
 * acknowledges the write.
 */
export class AnnotatorApp {
  private draft: VerdictDraft = emptyDraft();
  private current: TaskView | null = null;
  private progress: Progress = { done: 0, total: 0 };
  private errorMessage: string | null = null;
  private complete = false;
  private submitting = false;

  constructor(private readonly opts: AppOptions) {}

  async start(): Promise<void> {
    const doc = this.opts.root.ownerDocument;
    doc.addEventListener("keydown", (event) => this.handleKey(event as KeyboardEvent));
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    try {
      const response = await this.opts.api.nextTask(
        this.opts.batchId,
        this.opts.annotatorId,
      );
      this.progress = response.progress;
      this.current = response.task;
      this.complete = response.task === null;
      this.draft = emptyDraft();
      this.errorMessage = null;
    } catch (err) {
      this.errorMessage = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  async submit(): Promise<void> {
    if (!this.current || this.submitting || !canSubmit(this.draft)) {
      return;
    }
    const submission = buildSubmission(
      this.current.task_id,
      this.opts.annotatorId,
      this.draft,
    );
    this.submitting = true;
    this.render();
    try {
      await this.opts.api.submit(submission);
      this.submitting = false;
      await this.loadNext();
    } catch (err) {
      this.submitting = false;
      this.errorMessage = err instanceof Error ? err.message : String(err);
      this.render();
    }
  }

  select(index: number): void {
    this.draft = selectOption(this.draft, index);
    this.render();
  }

  markUnanswerable(): void {
    this.draft = toggleUnanswerable(this.draft);
    this.render();
  }

  cite(reason: Reason): void {
    this.draft = toggleReason(this.draft, reason);
    this.render();
  }

  private handleKey(event: KeyboardEvent): void {
    if (!this.current) return;
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) {
      return;
    }
    if (OPTION_KEYS.includes(event.key)) {
      this.select(Number(event.key) - 1);
    } else if (event.key === "u" || event.key === "U") {
      this.markUnanswerable();
    }
  }

  render(): void {
    const doc = this.opts.root.ownerDocument;
    const root = this.opts.root;
    root.textContent = "";

    const container = doc.createElement("div");
    container.className = "annotator";
    root.appendChild(container);

    if (this.errorMessage !== null) {
      const banner = doc.createElement("div");
      banner.className = "error-banner";
      banner.setAttribute("role", "alert");
      const text = doc.createElement("span");
      text.textContent = this.errorMessage;
      const retry = doc.createElement("button");
      retry.className = "retry";
      retry.textContent = "Retry";
      retry.addEventListener("click", () => void this.loadNext());
      banner.append(text, retry);
      container.appendChild(banner);
    }

    const progress = doc.createElement("div");
    progress.className = "progress";
    progress.textContent = `${this.progress.done} / ${this.progress.total}`;
    container.appendChild(progress);

    if (this.complete) {
      const done = doc.createElement("div");
      done.className = "batch-complete";
      done.textContent = "Batch complete. Thank you!";
      container.appendChild(done);
      return;
    }
    if (!this.current) {
      return; // error banner already shown
    }

    const task = this.current;
    const paragraph = doc.createElement("p");
    paragraph.className = "paragraph";
    paragraph.lang = "hy";
    paragraph.textContent = task.paragraph;
    container.appendChild(paragraph);

    const question = doc.createElement("h2");
    question.className = "question";
    question.lang = "hy";
    question.textContent = task.question;
    container.appendChild(question);

    const list = doc.createElement("ol");
    list.className = "options";
    task.options.forEach((option, index) => {
      const entry = doc.createElement("li");
      const button = doc.createElement("button");
      button.className = "option";
      button.dataset.index = String(index);
      button.setAttribute(
        "aria-pressed",
        this.draft.chosen === index ? "true" : "false",
      );
      button.textContent = `${index + 1}. ${option}`;
      button.addEventListener("click", () => this.select(index));
      entry.appendChild(button);
      list.appendChild(entry);
    });
    container.appendChild(list);

    const unanswerable = doc.createElement("button");
    unanswerable.className = "unanswerable";
    unanswerable.setAttribute(
      "aria-pressed",
      this.draft.unanswerable ? "true" : "false",
    );
    unanswerable.textContent = "Unanswerable (U)";
    unanswerable.addEventListener("click", () => this.markUnanswerable());
    container.appendChild(unanswerable);

    const reasons = doc.createElement("fieldset");
    reasons.className = "reasons";
    reasons.disabled = !this.draft.unanswerable;
    const legend = doc.createElement("legend");
    legend.textContent = "Why is it unanswerable?";
    reasons.appendChild(legend);
    for (const reason of REASONS) {
      const label = doc.createElement("label");
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.value = reason;
      box.checked = this.draft.reasons.includes(reason);
      box.addEventListener("change", () => this.cite(reason));
      label.append(box, doc.createTextNode(` ${REASON_LABELS[reason]}`));
      reasons.appendChild(label);
    }
    container.appendChild(reasons);

    const submit = doc.createElement("button");
    submit.className = "submit";
    submit.disabled = this.submitting || !canSubmit(this.draft);
    submit.textContent = this.submitting ? "Submitting…" : "Submit";
    submit.addEventListener("click", () => void this.submit());
    container.appendChild(submit);
  }
}
