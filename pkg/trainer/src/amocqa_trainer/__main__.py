"""Command line front end for training and serving.

``train`` reads a dataset directory (train.jsonl / test.jsonl) plus a
vocabulary file, runs one experiment per seed, and writes per-seed
prediction files, loss-curve CSVs, optional checkpoints, and a summary.
``serve`` loads a checkpoint and exposes the model-adapter protocol
(POST /predict) for the question-answering service.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import torch

from .adapter import serve_adapter
from .data import longest_sequence, read_examples
from .model import ConfigError, ModelConfig, build_model
from .predict import export_predictions
from .textproto import Vocab, VocabError
from .train import epoch_tail_means, final_loss_spread, run_experiments, write_loss_curve


def _build_config(args) -> ModelConfig:
    base = ModelConfig.desk_scale() if args.desk else ModelConfig()
    overrides = {}
    for name in ("epochs", "batch_size", "learning_rate", "max_decode_len"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if getattr(args, "seeds", None):
        overrides["seeds"] = tuple(args.seeds)
    return dataclasses.replace(base, **overrides)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--desk", action="store_true", help="use the one-CPU configuration")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--batch-size", type=int, dest="batch_size")
    parser.add_argument("--learning-rate", type=float, dest="learning_rate")
    parser.add_argument(
        "--max-decode-len",
        type=int,
        dest="max_decode_len",
        help="decoding cap; defaults to 1.5x the longest training sequence",
    )


def cmd_train(args) -> int:
    vocab = Vocab.load(args.vocab)
    data = Path(args.data)
    train_set = read_examples(data / "train.jsonl", vocab)
    test_set = read_examples(data / "test.jsonl", vocab)
    config = _build_config(args)
    if args.max_decode_len is None:
        cap = int(1.5 * longest_sequence(train_set))
        config = dataclasses.replace(config, max_decode_len=max(cap, 2))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    results = run_experiments(train_set, config, vocab)
    train_seconds = time.time() - started

    seeds = []
    for result in results:
        write_loss_curve(result.loss_curve, out / f"loss_seed{result.seed}.csv")
        export_predictions(result.model, test_set, out / f"preds_seed{result.seed}.jsonl", vocab)
        if args.checkpoints:
            torch.save(result.model.state_dict(), out / f"model_seed{result.seed}.pt")
        tails = epoch_tail_means(result.loss_curve, config.epochs)
        seeds.append(
            {
                "seed": result.seed,
                "steps": len(result.loss_curve),
                "epoch_tail_means": tails,
                "epoch_end_losses": list(result.epoch_losses),
            }
        )
        print(f"seed {result.seed}: epoch-end losses {[round(t, 4) for t in result.epoch_losses]}")

    summary = {
        "config": dataclasses.asdict(config),
        "train_examples": len(train_set),
        "test_examples": len(test_set),
        "train_seconds": round(train_seconds, 1),
        "seeds": seeds,
        "final_loss_spread": final_loss_spread(results),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(results)} run(s) to {out} in {train_seconds:.0f}s")
    return 0


def cmd_serve(args) -> int:
    vocab = Vocab.load(args.vocab)
    config = _build_config(args)
    if args.max_decode_len is None:
        config = dataclasses.replace(config, max_decode_len=64)
    model = build_model(config, vocab)
    state = torch.load(args.checkpoint, map_location="cpu", weights_only=True)
    model.load_state_dict(state)
    model.eval()
    print(f"serving adapter on {args.host}:{args.port}", flush=True)
    serve_adapter(model, vocab, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="amocqa-trainer", description="train translation models on exported datasets"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run one experiment per seed and export predictions")
    p.add_argument("--data", required=True, help="directory with train.jsonl and test.jsonl")
    p.add_argument("--vocab", required=True, help="vocabulary file, one token per line")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seeds", type=int, nargs="+", help="experiment seeds")
    p.add_argument("--checkpoints", action="store_true", help="also save model weights")
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("serve", help="serve a trained checkpoint as a model adapter")
    p.add_argument("--vocab", required=True)
    p.add_argument("--checkpoint", required=True, help="state-dict file from train --checkpoints")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8100)
    _add_config_flags(p)
    p.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, VocabError, ConfigError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
