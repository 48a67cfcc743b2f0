#!/usr/bin/env python3
"""Simulate a two-annotator pass over a demo batch and print the report.

One annotator is accurate (answers the gold option on kept tasks, marks
flagged tasks unanswerable); the other is noisy at a configurable rate.
Shows how agreement and the reason breakdown respond to noise.
"""

import argparse
import json
import random
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from syndarin.annotation import AnnotationRecord, AnnotationStore, REASONS, UNANSWERABLE  # noqa: E402
from syndarin.annotation.demo import seed_demo_batch  # noqa: E402
from syndarin.annotation.models import FLAG_FLAGGED  # noqa: E402


def annotate(store, tasks, annotator_id, noise, rng):
    for task in tasks:
        accurate = rng.random() >= noise
        flagged = task.hidden_flag == FLAG_FLAGGED
        if flagged == accurate:  # accurate on flagged, or noisy on kept
            verdict = UNANSWERABLE
            reasons = tuple(rng.sample(REASONS, rng.randint(1, 3)))
        else:
            verdict = task.correct_index if accurate else rng.randrange(4)
            reasons = ()
        store.record_annotation(
            AnnotationRecord(
                task_id=task.task_id,
                annotator_id=annotator_id,
                verdict=verdict,
                reasons=reasons,
            )
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-tasks", type=int, default=40)
    parser.add_argument("--noise", type=float, default=0.15)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    data_dir = Path(tempfile.mkdtemp(prefix="annotation-sim-"))
    tasks = seed_demo_batch(data_dir, "sim", n_tasks=args.n_tasks, seed=args.seed)
    store = AnnotationStore(data_dir)
    rng = random.Random(args.seed)
    annotate(store, tasks, "careful", noise=0.0, rng=rng)
    annotate(store, tasks, "hasty", noise=args.noise, rng=rng)

    report = store.report("sim")
    print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    print(f"\nkappa={report.kappa:.3f}  data={data_dir}")


if __name__ == "__main__":
    main()
