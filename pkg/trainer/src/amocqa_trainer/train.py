"""Joint training loop and the multi-seed experiment driver.

All three translation directions are optimized together with teacher
forcing. One call to ``train`` runs a single seeded experiment; the
driver repeats it for every configured seed with a freshly built model
and reports the spread of final losses across runs.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass

import torch

from .data import Example, iter_batches, make_batch
from .loss import TriangleOutputs, compute_loss
from .model import ModelConfig, TriangleModel, build_model
from .textproto import Vocab


class DivergenceError(Exception):
    """Training loss became non-finite."""


@dataclass(frozen=True)
class ExperimentResult:
    seed: int
    model: TriangleModel
    loss_curve: tuple[float, ...]  # one entry per optimization step
    epoch_losses: tuple[float, ...] = ()  # probe loss at each epoch's end


PROBE_EXAMPLES = 2048  # fixed slice scored at every epoch boundary


def probe_loss(
    model: TriangleModel, examples: list[Example], config: ModelConfig
) -> float:
    """Teacher-forced loss over a fixed example list, batch-order free.

    Per-step curve entries are noisy (each batch is a different random
    12-example draw, and per-batch losses vary by half their mean), so
    epoch-end levels are compared on the same examples every time.
    """
    total = 0.0
    count = 0
    with torch.no_grad():
        for start in range(0, len(examples), config.batch_size):
            chunk = examples[start : start + config.batch_size]
            batch = make_batch(chunk)
            outputs = TriangleOutputs.from_logits(model(batch))
            loss = compute_loss(
                outputs, batch, config.alpha, config.length_sign_flipped
            )
            total += loss.item() * len(chunk)
            count += len(chunk)
    return total / count


def train(
    model: TriangleModel,
    train_set: list[Example],
    config: ModelConfig,
    seed: int = 0,
) -> tuple[TriangleModel, tuple[float, ...], tuple[float, ...]]:
    """Optimize the model in place.

    Returns the model, the per-step loss curve, and the probe loss at
    each epoch boundary (see ``probe_loss``).
    """
    rng = random.Random(seed)
    torch.manual_seed(seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    steps_per_epoch = max(1, math.ceil(len(train_set) / config.batch_size))
    probe_set = train_set[:PROBE_EXAMPLES]
    curve = []
    epoch_losses = []
    model.train()
    for _ in range(config.epochs):
        for batch in iter_batches(train_set, config.batch_size, rng):
            if config.lr_anneal_epochs > 0:
                span = steps_per_epoch * config.lr_anneal_epochs
                progress = min(len(curve) / span, 1.0)
                scale = 0.5 * (1.0 + math.cos(math.pi * progress))
                for group in optimizer.param_groups:
                    group["lr"] = config.learning_rate * scale
            optimizer.zero_grad()
            outputs = TriangleOutputs.from_logits(model(batch))
            loss = compute_loss(
                outputs, batch, config.alpha, config.length_sign_flipped
            )
            value = loss.item()
            if not math.isfinite(value):
                raise DivergenceError(f"loss became {value} at step {len(curve)}")
            loss.backward()
            optimizer.step()
            curve.append(value)
        epoch_losses.append(probe_loss(model, probe_set, config))
    model.eval()
    return model, tuple(curve), tuple(epoch_losses)


def run_experiments(
    train_set: list[Example], config: ModelConfig, vocab: Vocab
) -> list[ExperimentResult]:
    """Train one fresh model per configured seed."""
    results = []
    for seed in config.seeds:
        model = build_model(config, vocab, seed=seed)
        model, curve, epoch_losses = train(model, train_set, config, seed=seed)
        results.append(
            ExperimentResult(
                seed=seed, model=model, loss_curve=curve, epoch_losses=epoch_losses
            )
        )
    return results


def epoch_tail_means(curve, epochs: int, tail_frac: float = 0.1) -> list[float]:
    """Mean loss over the final ``tail_frac`` of each epoch's steps.

    Empty when the curve is empty or shorter than one step per epoch.
    """
    if epochs <= 0 or len(curve) < epochs:
        return []
    per_epoch = len(curve) // epochs
    tail = max(1, int(per_epoch * tail_frac))
    means = []
    for epoch in range(epochs):
        end = (epoch + 1) * per_epoch
        window = curve[end - tail : end]
        means.append(sum(window) / len(window))
    return means


def final_loss_spread(results: list[ExperimentResult], tail_frac: float = 0.1) -> float:
    """Largest pairwise gap between the runs' final mean losses."""
    finals = []
    for result in results:
        if not result.loss_curve:
            continue
        tail = max(1, int(len(result.loss_curve) * tail_frac))
        window = result.loss_curve[-tail:]
        finals.append(sum(window) / len(window))
    return max(finals) - min(finals) if finals else 0.0


def write_loss_curve(curve, path) -> None:
    """CSV with one row per optimization step."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "loss"])
        for step, value in enumerate(curve):
            writer.writerow([step, repr(value)])
