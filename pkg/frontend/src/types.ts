/** Wire types for the annotation service API. */

export const REASONS = [
  "PartiallyMissingInfo",
  "BadTranslation",
  "PartiallyCorrectAnswers",
  "SeveralCorrectAnswers",
  "DateMismatch",
  "Other",
] as const;

export type Reason = (typeof REASONS)[number];

export const REASON_LABELS: Record<Reason, string> = {
  PartiallyMissingInfo: "Partially missing info",
  BadTranslation: "Bad translation",
  PartiallyCorrectAnswers: "Partially correct answers",
  SeveralCorrectAnswers: "Several correct answers",
  DateMismatch: "Date mismatch",
  Other: "Other",
};

export const UNANSWERABLE = "unanswerable" as const;

export interface TaskView {
  task_id: string;
  batch_id: string;
  paragraph: string;
  question: string;
  options: string[];
}

export interface Progress {
  done: number;
  total: number;
}

export interface NextTaskResponse {
  batch_id: string;
  task: TaskView | null;
  progress: Progress;
}

export interface AnnotationSubmission {
  task_id: string;
  annotator_id: string;
  verdict: number | typeof UNANSWERABLE;
  reasons: Reason[];
}

export interface StoredRecord {
  task_id: string;
  annotator_id: string;
  verdict: number | typeof UNANSWERABLE;
  reasons: string[];
  timestamp: string;
}
