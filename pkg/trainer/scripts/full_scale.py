"""Full-scale replication run: 250k examples, full-width model, 3 seeds.

Not part of the test suite. This wants a GPU-class machine or a long
weekend on CPU; the desk-scale acceptance run covers the same pipeline
at a size CI can afford. Produces the pooled evaluation report with the
per-form breakdown and unweighted mean.

Usage:
    python3 scripts/full_scale.py --workdir runs/full [--data existing/dir]
"""

import argparse
import json
import subprocess
import sys
import time
from pathlib import Path

from amocqa_trainer import (
    ModelConfig,
    Vocab,
    epoch_tail_means,
    export_predictions,
    longest_sequence,
    read_examples,
    run_experiments,
    write_loss_curve,
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workdir", required=True, help="output directory")
    parser.add_argument("--data", help="reuse an existing dataset directory")
    parser.add_argument("--n", type=int, default=250_000)
    parser.add_argument("--seed", type=int, default=42, help="dataset seed")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = parser.parse_args(argv)

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    if args.data:
        data = Path(args.data)
        vocab_path = data / "vocab.txt"
    else:
        data = workdir / "data"
        vocab_path = data / "vocab.txt"
        print(f"generating {args.n} examples ...", flush=True)
        subprocess.run(
            ["amocqa", "gen", "--n", str(args.n), "--seed", str(args.seed),
             "--out", str(data), "--vocab", str(vocab_path)],
            check=True,
        )

    vocab = Vocab.load(vocab_path)
    train_set = read_examples(data / "train.jsonl", vocab)
    test_set = read_examples(data / "test.jsonl", vocab)
    cap = int(1.5 * longest_sequence(train_set))
    config = ModelConfig(seeds=tuple(args.seeds), max_decode_len=cap)

    print(f"training {len(args.seeds)} seed(s) on {len(train_set)} examples ...", flush=True)
    started = time.time()
    results = run_experiments(train_set, config, vocab)
    print(f"trained in {time.time() - started:.0f}s", flush=True)

    pooled = workdir / "preds_all_seeds.jsonl"
    with open(pooled, "w", encoding="utf-8") as fh:
        for result in results:
            write_loss_curve(result.loss_curve, workdir / f"loss_seed{result.seed}.csv")
            tails = epoch_tail_means(result.loss_curve, config.epochs)
            print(f"seed {result.seed}: epoch tail means {[round(t, 4) for t in tails]}")
            seed_file = workdir / f"preds_seed{result.seed}.jsonl"
            export_predictions(result.model, test_set, seed_file, vocab)
            fh.write(seed_file.read_text(encoding="utf-8"))

    report_dir = workdir / "report"
    subprocess.run(["amocqa", "eval", str(pooled), "--out", str(report_dir)], check=True)
    report = json.loads((report_dir / "report.json").read_text(encoding="utf-8"))
    for name in ("QTQ", "QTP", "PTQ"):
        stats = report["directions"][name]
        print(f"{name}: mean {stats['mean']:.2f} std {stats['std']:.2f}")
    print(f"PTQ unweighted form mean: {report['unweighted_form_mean']:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
