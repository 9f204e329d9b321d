"""Model construction: dimensions, seeding, sharing, shapes."""

import pytest
import torch

from amocqa_trainer import (
    DIRECTIONS,
    ConfigError,
    ModelConfig,
    RESERVED_TOKENS,
    Vocab,
    build_model,
    make_batch,
    parameter_count,
)
from amocqa_trainer.data import Example
from amocqa_trainer.textproto import TokenSequence

# regression pin: full-scale dimensions, 68-token vocabulary, length cap 64
DEFAULT_PARAMETER_COUNT = 32_435_916

VOCAB = Vocab(tuple(list(RESERVED_TOKENS) + [f"w{i}" for i in range(63)]))


def tiny_config(**overrides):
    settings = dict(
        word_embedding_dim=8,
        positional_embedding_dim=4,
        encoder_hidden=8,
        decoder_hidden=16,
        head_hidden=8,
        max_decode_len=16,
    )
    settings.update(overrides)
    return ModelConfig(**settings)


def tiny_batch():
    examples = [
        Example(
            id=0, form_id=1, question="q", program="p",
            q_seq=TokenSequence(ids=(1, 7, 8, 9, 2)),
            p_seq=TokenSequence(ids=(1, 10, 11, 2)),
        ),
        Example(
            id=1, form_id=2, question="q", program="p",
            q_seq=TokenSequence(ids=(1, 7, 2)),
            p_seq=TokenSequence(ids=(1, 12, 13, 14, 15, 2)),
        ),
    ]
    return make_batch(examples)


@pytest.mark.parametrize(
    "overrides",
    [
        {"word_embedding_dim": 0},
        {"encoder_hidden": -1},
        {"alpha": -0.1},
        {"epochs": -1},
        {"decoder_hidden": 24},  # not twice the encoder width
        {"max_decode_len": 1},
        {"seeds": ()},
        {"learning_rate": 0.0},
        {"lr_anneal_epochs": -1.0},
    ],
)
def test_config_rejects_inconsistent_settings(overrides):
    with pytest.raises(ConfigError):
        tiny_config(**overrides)


def test_default_parameter_count_is_pinned():
    model = build_model(ModelConfig(), VOCAB, seed=0)
    assert parameter_count(model) == DEFAULT_PARAMETER_COUNT


def test_same_seed_builds_identical_models():
    a = build_model(tiny_config(), VOCAB, seed=5)
    b = build_model(tiny_config(), VOCAB, seed=5)
    for pa, pb in zip(a.parameters(), b.parameters()):
        assert torch.equal(pa, pb)


def test_different_seeds_differ():
    a = build_model(tiny_config(), VOCAB, seed=5)
    b = build_model(tiny_config(), VOCAB, seed=6)
    assert any(
        not torch.equal(pa, pb) for pa, pb in zip(a.parameters(), b.parameters())
    )


def test_embedding_table_is_shared_not_copied():
    model = build_model(tiny_config(), VOCAB, seed=0)
    for name in DIRECTIONS:
        assert model.decoders[name].embedding is model.token_embedding
    with torch.no_grad():
        before = model.decoders["QTP"].embedding.weight[7, 0].item()
        model.token_embedding.weight[7, 0] += 1.0
        after = model.decoders["QTP"].embedding.weight[7, 0].item()
    assert after == pytest.approx(before + 1.0)


def test_forward_logit_shapes():
    model = build_model(tiny_config(), VOCAB, seed=0)
    batch = tiny_batch()
    logits = model(batch)
    assert set(logits) == set(DIRECTIONS)
    assert logits["QTQ"].shape == (2, batch.x_q.shape[1] - 1, len(VOCAB))
    assert logits["QTP"].shape == (2, batch.x_p.shape[1] - 1, len(VOCAB))
    assert logits["PTQ"].shape == (2, batch.x_q.shape[1] - 1, len(VOCAB))


def test_encode_for_routes_to_the_right_encoder():
    model = build_model(tiny_config(), VOCAB, seed=0)
    batch = tiny_batch()
    q = model.encode_for("QTP", batch.x_q, batch.q_lengths)
    p = model.encode_for("PTQ", batch.x_q, batch.q_lengths)
    assert torch.equal(q, model.encode_questions(batch.x_q, batch.q_lengths))
    assert torch.equal(p, model.encode_programs(batch.x_q, batch.q_lengths))
    assert not torch.equal(q, p)


def test_latent_width_is_twice_encoder_hidden():
    config = tiny_config()
    model = build_model(config, VOCAB, seed=0)
    batch = tiny_batch()
    latent = model.encode_questions(batch.x_q, batch.q_lengths)
    assert latent.shape == (2, 2 * config.encoder_hidden)


def test_padding_does_not_change_the_latent():
    model = build_model(tiny_config(), VOCAB, seed=0)
    short = torch.tensor([[1, 7, 8, 2]])
    padded = torch.tensor([[1, 7, 8, 2, 0, 0, 0]])
    lengths = torch.tensor([4])
    a = model.encode_questions(short, lengths)
    b = model.encode_questions(padded, lengths)
    assert torch.allclose(a, b)
