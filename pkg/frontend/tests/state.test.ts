import { describe, expect, it } from "vitest";

import {
  buildSubmission,
  canSubmit,
  emptyDraft,
  selectOption,
  toggleReason,
  toggleUnanswerable,
} from "../src/state.js";
import { REASONS, UNANSWERABLE } from "../src/types.js";

describe("verdict draft transitions", () => {
  it("starts unsubmittable", () => {
    expect(canSubmit(emptyDraft())).toBe(false);
  });

  it("selecting an option makes it submittable with no reasons", () => {
    const draft = selectOption(emptyDraft(), 2);
    expect(draft.chosen).toBe(2);
    expect(draft.reasons).toEqual([]);
    expect(canSubmit(draft)).toBe(true);
  });

  it("selecting an option clears an unanswerable draft", () => {
    let draft = toggleUnanswerable(emptyDraft());
    draft = toggleReason(draft, "BadTranslation");
    draft = selectOption(draft, 0);
    expect(draft.unanswerable).toBe(false);
    expect(draft.reasons).toEqual([]);
  });

  it("unanswerable without reasons is not submittable", () => {
    const draft = toggleUnanswerable(emptyDraft());
    expect(canSubmit(draft)).toBe(false);
  });

  it("unanswerable with reasons is submittable", () => {
    let draft = toggleUnanswerable(emptyDraft());
    draft = toggleReason(draft, "BadTranslation");
    draft = toggleReason(draft, "DateMismatch");
    expect(canSubmit(draft)).toBe(true);
  });

  it("toggling unanswerable clears a chosen option", () => {
    const draft = toggleUnanswerable(selectOption(emptyDraft(), 1));
    expect(draft.chosen).toBeNull();
    expect(draft.unanswerable).toBe(true);
  });

  it("reasons cannot be toggled while an option is chosen", () => {
    const draft = toggleReason(selectOption(emptyDraft(), 1), "Other");
    expect(draft.reasons).toEqual([]);
  });

  it("out-of-range option indices are ignored", () => {
    expect(selectOption(emptyDraft(), 4).chosen).toBeNull();
    expect(selectOption(emptyDraft(), -1).chosen).toBeNull();
  });
});

describe("buildSubmission invariant", () => {
  it("refuses an empty draft", () => {
    expect(() => buildSubmission("t", "a", emptyDraft())).toThrow();
  });

  it("refuses unanswerable without reasons", () => {
    const draft = toggleUnanswerable(emptyDraft());
    expect(() => buildSubmission("t", "a", draft)).toThrow();
  });

  it("option verdict always carries empty reasons", () => {
    const submission = buildSubmission("t", "a", selectOption(emptyDraft(), 3));
    expect(submission).toEqual({
      task_id: "t",
      annotator_id: "a",
      verdict: 3,
      reasons: [],
    });
  });

  it("unanswerable verdict carries the cited reasons", () => {
    let draft = toggleUnanswerable(emptyDraft());
    draft = toggleReason(draft, "SeveralCorrectAnswers");
    const submission = buildSubmission("t", "a", draft);
    expect(submission.verdict).toBe(UNANSWERABLE);
    expect(submission.reasons).toEqual(["SeveralCorrectAnswers"]);
  });

  it("no reachable draft can produce an invalid payload", () => {
    // walk a few thousand random transition sequences; every submittable
    // state must satisfy reasons-iff-unanswerable
    let seed = 20260809;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let run = 0; run < 500; run++) {
      let draft = emptyDraft();
      for (let step = 0; step < 12; step++) {
        const move = Math.floor(rand() * 3);
        if (move === 0) draft = selectOption(draft, Math.floor(rand() * 4));
        else if (move === 1) draft = toggleUnanswerable(draft);
        else {
          const reason = REASONS[Math.floor(rand() * REASONS.length)]!;
          draft = toggleReason(draft, reason);
        }
        if (canSubmit(draft)) {
          const built = buildSubmission("t", "a", draft);
          if (built.verdict === UNANSWERABLE) {
            expect(built.reasons.length).toBeGreaterThan(0);
          } else {
            expect(built.reasons).toEqual([]);
          }
        }
      }
    }
  });
});
