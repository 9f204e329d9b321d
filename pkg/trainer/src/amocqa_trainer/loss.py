"""Joint loss over the three translation directions.

For each example the loss sums a per-direction cross-entropy and
subtracts a small multiple of the summed absolute length differences,
then averages over the batch:

    L = mean_i( L_TCE_i - alpha * L_TLD_i )

Cross-entropy for one direction is the mean negative log-likelihood over
the compared positions. When the predicted length differs from the
target length, both are truncated to the shorter before comparison.
Under teacher forcing the predicted length is read from the first
emitted EOS: a sequence is BOS plus everything through that EOS. If no
EOS appears within the teacher-forced window the prediction is treated
as target-length (no length penalty is observable). Both the truncation
cutoff and the length term depend on argmax decisions, so they act as
locally constant factors with no gradient of their own.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn.functional as F

from .data import Batch
from .model import DIRECTIONS
from .textproto import EOS_ID


@dataclass(frozen=True)
class TriangleOutputs:
    """Per-direction step logits and their greedy token decisions.

    logits: direction -> [B, S, V]; decoded: direction -> [B, S] argmax
    ids. S is one less than the padded target width (no step predicts
    BOS).
    """

    logits: dict[str, torch.Tensor]
    decoded: dict[str, torch.Tensor]

    @staticmethod
    def from_logits(logits: dict[str, torch.Tensor]) -> "TriangleOutputs":
        return TriangleOutputs(
            logits=logits,
            decoded={k: v.detach().argmax(dim=2) for k, v in logits.items()},
        )


def predicted_lengths(decoded: torch.Tensor, target_lengths: torch.Tensor) -> torch.Tensor:
    """Sequence lengths implied by the first EOS in each decoded row.

    Parameters
    ----------
    decoded : [B, S] long
        Greedy token ids for each teacher-forced step.
    target_lengths : [B] long
        True target lengths including BOS and EOS.

    Returns
    -------
    [B] long: BOS plus tokens through the first EOS, or the target
    length when no EOS fires within the window.
    """
    steps = torch.arange(decoded.shape[1], device=decoded.device)
    in_window = steps.unsqueeze(0) < (target_lengths - 1).unsqueeze(1)
    is_eos = (decoded == EOS_ID) & in_window
    any_eos = is_eos.any(dim=1)
    first = is_eos.int().argmax(dim=1)  # first True index, 0 if none
    return torch.where(any_eos, first + 2, target_lengths)


def _direction_terms(
    logits: torch.Tensor,
    decoded: torch.Tensor,
    targets: torch.Tensor,
    target_lengths: torch.Tensor,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Per-example cross-entropy and length difference for one direction."""
    shifted = targets[:, 1:]  # step t predicts target position t + 1
    pred_lengths = predicted_lengths(decoded, target_lengths)
    compared = torch.minimum(pred_lengths, target_lengths) - 1  # steps kept
    steps = torch.arange(shifted.shape[1], device=targets.device)
    keep = steps.unsqueeze(0) < compared.unsqueeze(1)

    log_probs = F.log_softmax(logits, dim=2)
    token_lp = log_probs.gather(2, shifted.unsqueeze(2)).squeeze(2)
    ce = -(token_lp * keep).sum(dim=1) / compared.clamp(min=1)
    tld = (pred_lengths - target_lengths).abs()
    return ce, tld


def compute_loss(
    outputs: TriangleOutputs, batch: Batch, alpha: float, sign_flipped: bool = False
) -> torch.Tensor:
    """Batch loss; ``sign_flipped`` adds the length term instead (ablation)."""
    targets = {"QTQ": batch.x_q, "QTP": batch.x_p, "PTQ": batch.x_q}
    lengths = {"QTQ": batch.q_lengths, "QTP": batch.p_lengths, "PTQ": batch.q_lengths}
    total_ce = 0.0
    total_tld = 0.0
    for name in DIRECTIONS:
        ce, tld = _direction_terms(
            outputs.logits[name], outputs.decoded[name], targets[name], lengths[name]
        )
        total_ce = total_ce + ce
        total_tld = total_tld + tld
    sign = 1.0 if sign_flipped else -1.0
    return (total_ce + sign * alpha * total_tld).mean()
