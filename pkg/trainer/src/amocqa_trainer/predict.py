"""Greedy decoding and prediction-file export.

Decoding runs the direction's decoder one step at a time from the
encoder latent, always taking the most likely token, until EOS or the
configured length cap; a capped sequence is closed with EOS so every
output is well formed. Masked VALUE literals ride through from the
input sequence in encounter order. ``export_predictions`` writes the
JSON Lines format the evaluation toolchain scores directly.
"""

from __future__ import annotations

import json

import torch

from .data import Example, pad_ids
from .model import DIRECTIONS, TriangleModel
from .textproto import BOS_ID, EOS_ID, TokenSequence, Vocab, decode

# decoding work is batched for throughput; results are order-preserving
_DECODE_BATCH = 64


def greedy_decode(
    model: TriangleModel, direction: str, inputs: list[TokenSequence]
) -> list[TokenSequence]:
    """Decode a batch of encoded inputs along one direction."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    out = []
    model.eval()
    with torch.no_grad():
        for start in range(0, len(inputs), _DECODE_BATCH):
            chunk = inputs[start : start + _DECODE_BATCH]
            out.extend(_decode_chunk(model, direction, chunk))
    return out


def _decode_chunk(
    model: TriangleModel, direction: str, chunk: list[TokenSequence]
) -> list[TokenSequence]:
    tokens, lengths = pad_ids([seq.ids for seq in chunk])
    latent = model.encode_for(direction, tokens, lengths)
    decoder = model.decoders[direction]
    batch = len(chunk)
    max_len = model.config.max_decode_len

    hidden = latent.unsqueeze(0).contiguous()
    current = torch.full((batch,), BOS_ID, dtype=torch.long)
    finished = torch.zeros(batch, dtype=torch.bool)
    rows = [[BOS_ID] for _ in range(batch)]
    for _ in range(max_len - 1):
        logits, hidden = decoder.step(current, hidden)
        current = logits.argmax(dim=1)
        for i in range(batch):
            if not finished[i]:
                rows[i].append(int(current[i]))
        finished |= current == EOS_ID
        if bool(finished.all()):
            break
    sequences = []
    for row, seq in zip(rows, chunk):
        if row[-1] != EOS_ID:
            row[-1] = EOS_ID  # length cap reached; close the sequence
        sequences.append(TokenSequence(ids=tuple(row), values=seq.values))
    return sequences


def predict(
    model: TriangleModel, input_seq: TokenSequence, direction: str
) -> TokenSequence:
    """Greedy translation of one encoded sequence."""
    return greedy_decode(model, direction, [input_seq])[0]


def _source(example: Example, direction: str) -> TokenSequence:
    return example.p_seq if direction == "PTQ" else example.q_seq


def _target_text(example: Example, direction: str) -> str:
    return example.program if direction == "QTP" else example.question


def output_kind(direction: str) -> str:
    return "program" if direction == "QTP" else "question"


def export_predictions(
    model: TriangleModel, test_set: list[Example], path, vocab: Vocab
) -> None:
    """Write one prediction record per example and direction."""
    with open(path, "w", encoding="utf-8") as fh:
        for direction in DIRECTIONS:
            decoded = greedy_decode(
                model, direction, [_source(ex, direction) for ex in test_set]
            )
            for example, seq in zip(test_set, decoded):
                record = {
                    "id": example.id,
                    "direction": direction,
                    "prediction": decode(seq, vocab, output_kind(direction)),
                    "target": _target_text(example, direction),
                    "form_id": example.form_id,
                }
                fh.write(json.dumps(record, separators=(",", ":")) + "\n")
