import { REASONS, UNANSWERABLE } from "./types.js";
import type { AnnotationSubmission, Reason } from "./types.js";

/**
 * The in-progress verdict for one task.
 *
 * Exactly one of two shapes can ever be submitted: a chosen option with no
 * reasons, or unanswerable with at least one reason. The transition
 * functions keep drafts inside that space and `buildSubmission` refuses
 * anything outside it, so an invalid payload cannot be constructed through
 * the UI at all.
 */
export interface VerdictDraft {
  chosen: number | null;
  unanswerable: boolean;
  reasons: Reason[];
}

export function emptyDraft(): VerdictDraft {
  return { chosen: null, unanswerable: false, reasons: [] };
}

export function selectOption(draft: VerdictDraft, index: number): VerdictDraft {
  if (!Number.isInteger(index) || index < 0 || index > 3) {
    return draft;
  }
  return { chosen: index, unanswerable: false, reasons: [] };
}

export function toggleUnanswerable(draft: VerdictDraft): VerdictDraft {
  if (draft.unanswerable) {
    return emptyDraft();
  }
  return { chosen: null, unanswerable: true, reasons: draft.reasons };
}

export function toggleReason(draft: VerdictDraft, reason: Reason): VerdictDraft {
  if (!draft.unanswerable || !REASONS.includes(reason)) {
    return draft;
  }
  const reasons = draft.reasons.includes(reason)
    ? draft.reasons.filter((r) => r !== reason)
    : [...draft.reasons, reason];
  return { ...draft, reasons };
}

export function canSubmit(draft: VerdictDraft): boolean {
  if (draft.unanswerable) {
    return draft.reasons.length > 0;
  }
  return draft.chosen !== null;
}

export function buildSubmission(
  taskId: string,
  annotatorId: string,
  draft: VerdictDraft,
): AnnotationSubmission {
  if (!canSubmit(draft)) {
    throw new Error("draft violates the reasons-iff-unanswerable invariant");
  }
  if (draft.unanswerable) {
    return {
      task_id: taskId,
      annotator_id: annotatorId,
      verdict: UNANSWERABLE,
      reasons: [...draft.reasons],
    };
  }
  return {
    task_id: taskId,
    annotator_id: annotatorId,
    verdict: draft.chosen as number,
    reasons: [],
  };
}
