#!/usr/bin/env python3
"""Run the whole pipeline offline on the bundled fixture corpus.

Builds a workspace, executes every data stage with mock providers, prints
the funnel and question-type table, then benchmarks the deterministic
hash-chooser model at every shot count.
"""

import argparse
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from syndarin import pipeline  # noqa: E402
from syndarin.config import load_config  # noqa: E402
from syndarin.diversity import render_table  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workspace", default="demo_workspace")
    parser.add_argument("--k-fuzz", type=float, default=0.8)
    parser.add_argument("--k-sim", type=float, default=0.02)
    args = parser.parse_args()

    ws = Path(args.workspace).resolve()
    ws.mkdir(parents=True, exist_ok=True)
    titles = (REPO / "tests" / "fixtures" / "titles_10.txt").read_text(encoding="utf-8")
    (ws / "titles.txt").write_text(titles, encoding="utf-8")

    config_doc = {
        "workspace_dir": str(ws),
        "titles_file": "titles.txt",
        "seeds": {"balance": 11, "split": 22, "bench": 33, "annotation": 44},
        "validation": {"k_fuzz": args.k_fuzz, "k_sim": args.k_sim},
        "providers": {
            "mode": "mock",
            "mock_articles": str(REPO / "tests" / "fixtures" / "mock_articles.json"),
        },
    }
    config_path = ws / "config.json"
    config_path.write_text(json.dumps(config_doc, indent=2), encoding="utf-8")
    cfg = load_config(config_path)

    providers = pipeline.build_providers(cfg)
    for stage in ("mine", "generate", "translate", "validate", "assemble", "report"):
        result = pipeline.run_stage(stage, cfg, providers=providers)
        print(f"{stage:>9}: {json.dumps(result, ensure_ascii=False, sort_keys=True)}")

    manifest = json.loads((ws / "manifest.json").read_text(encoding="utf-8"))
    print("\nfunnel:", manifest["counts"])

    counts = json.loads((ws / "diversity_report.json").read_text(encoding="utf-8"))
    print("\nquestion types (generated):")
    print(render_table(counts))

    print("\nbenchmark (hash-chooser):")
    for shots in (0, 2, 4, 6):
        run = pipeline.run_bench(cfg, "hash-chooser", shots, seed=33, providers=providers)
        print(f"  {shots}-shot accuracy: {run.accuracy:.3f} "
              f"(unparseable: {run.unparseable_count})")

    print(f"\nworkspace: {ws}")


if __name__ == "__main__":
    main()
