"""Tests for dataset generation, splitting, and balancing."""

import json
import random
from itertools import chain

import pytest

from amocqa import qforms, textcodec
from amocqa.datagen import (
    DOMINANT_FORM,
    FORM_IDS,
    REFERENCE_BUDGETS,
    REFERENCE_N,
    DatasetExample,
    GenConfig,
    InsufficientUnique,
    InvalidConfig,
    build_dataset,
    generate,
    pool_budgets,
    read_jsonl,
    rebalance,
    sample_delta,
    sample_value,
    split,
    write_dataset,
    write_jsonl,
)
from amocqa.dsl import parse, validate
from amocqa.qforms import match_question


@pytest.fixture(scope="module")
def small_bundle():
    return build_dataset(GenConfig(n_examples=5000, seed=42))


def test_sample_value_zero_noise_returns_default():
    rng = random.Random(0)
    assert sample_value("Fwn", rng, 0.0) == 45000.0
    assert sample_value("M_ek", rng, 0.0) == 2.5e7
    assert sample_value("epsilon", rng, 0.0) == 1.2e-4


@pytest.mark.parametrize(
    "param,lo,hi",
    [
        ("Fwn", 31500.0, 58500.0),
        ("Fws", 52500.0, 97500.0),
        ("M_ek", 1.75e7, 3.25e7),
        ("D_low0", 280.0, 520.0),
        ("epsilon", 8.4e-5, 1.56e-4),
    ],
)
def test_sample_value_stays_in_noise_band(param, lo, hi):
    rng = random.Random(1)
    for _ in range(1000):
        v = sample_value(param, rng, 0.3)
        assert lo <= v <= hi


def test_sample_value_reaches_observed_magnitudes():
    # 5.8e4 for Fwn sits inside the +-30% band around the default
    assert 31500.0 <= 5.8e4 <= 58500.0


def test_sample_value_n_is_clamped_integer():
    rng = random.Random(2)
    draws = [sample_value("N", rng) for _ in range(2000)]
    assert all(isinstance(v, int) for v in draws)
    assert all(100 <= v <= 20000 for v in draws)
    assert min(draws) == 100  # the clamp floor is actually hit


def test_sample_value_mean_tracks_default():
    rng = random.Random(3)
    draws = [sample_value("D_low0", rng, 0.3) for _ in range(10_000)]
    mean = sum(draws) / len(draws)
    assert abs(mean - 400.0) <= 0.02 * 400.0


def test_sample_delta_fraction_of_default():
    rng = random.Random(4)
    for param, default in [("Fwn", 45000.0), ("epsilon", 1.2e-4)]:
        for _ in range(500):
            d = sample_delta(param, rng)
            assert 0.001 * default <= d <= 0.1 * default


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_examples": 9, "seed": 0},
        {"n_examples": 100, "seed": 0, "noise_rel": 0.0},
        {"n_examples": 100, "seed": 0, "noise_rel": 1.0},
        {"n_examples": 100, "seed": 0, "test_frac": 0.0},
    ],
)
def test_invalid_config_rejected(kwargs):
    with pytest.raises(InvalidConfig):
        GenConfig(**kwargs)


def test_pool_budgets_reference_scale():
    budgets = pool_budgets(REFERENCE_N)
    for form_id, budget in REFERENCE_BUDGETS.items():
        assert budgets[form_id] == budget
    assert budgets[DOMINANT_FORM] == REFERENCE_N - sum(REFERENCE_BUDGETS.values())
    assert sum(budgets.values()) == REFERENCE_N


def test_pool_budgets_scale_down():
    budgets = pool_budgets(5000)
    assert sum(budgets.values()) == 5000
    assert budgets[DOMINANT_FORM] > sum(
        b for f, b in budgets.items() if f != DOMINANT_FORM
    )
    assert all(b >= 2 for b in budgets.values())


def test_generate_balanced_counts_follow_budgets():
    config = GenConfig(n_examples=600, seed=7)
    examples = generate(config)
    assert len(examples) == 600
    budgets = pool_budgets(600)
    counts = {}
    for ex in examples:
        counts[ex.form_id] = counts.get(ex.form_id, 0) + 1
    assert counts == budgets
    assert [ex.id for ex in examples] == list(range(600))


def test_generate_balanced_is_unique_per_form():
    examples = generate(GenConfig(n_examples=600, seed=7))
    seen = set()
    for ex in examples:
        key = (ex.form_id, ex.question)
        assert key not in seen
        seen.add(key)


def test_generated_examples_are_internally_consistent():
    examples = generate(GenConfig(n_examples=600, seed=11))
    for ex in examples:
        prog = parse(ex.program)
        assert validate(prog) == []
        result = match_question(ex.question)
        assert result.program == prog
        assert result.form_id == ex.form_id
        seq = textcodec.encode(ex.question, _language_vocab())
        assert tuple(seq.values) == ex.values
        assert len(prog.run.clauses) <= 3


_VOCAB = None


def _language_vocab():
    global _VOCAB
    if _VOCAB is None:
        _VOCAB = textcodec.build_vocab(
            chain.from_iterable(qforms.language_corpus())
        )
    return _VOCAB


def test_generate_unbalanced_draws_forms_uniformly():
    examples = generate(GenConfig(n_examples=2000, seed=5, balance=False))
    counts = {}
    for ex in examples:
        counts[ex.form_id] = counts.get(ex.form_id, 0) + 1
    for form_id in FORM_IDS:
        assert 100 <= counts.get(form_id, 0) <= 300


def test_generate_is_deterministic():
    a = generate(GenConfig(n_examples=400, seed=9))
    b = generate(GenConfig(n_examples=400, seed=9))
    assert a == b
    c = generate(GenConfig(n_examples=400, seed=10))
    assert a != c


def test_split_separates_questions_exactly():
    examples = generate(GenConfig(n_examples=1000, seed=13))
    train, test = split(examples, 0.1, seed=14)
    train_keys = {(ex.question, ex.program) for ex in train}
    test_keys = [(ex.question, ex.program) for ex in test]
    assert len(set(test_keys)) == len(test_keys)
    assert not train_keys & set(test_keys)
    assert len(train) + len(test) == len(examples)
    assert abs(len(test) - 0.1 * len(examples)) <= len(FORM_IDS)


def test_split_reserves_at_least_one_per_form():
    examples = generate(GenConfig(n_examples=1000, seed=13))
    train, test = split(examples, 0.1, seed=14)
    test_forms = {ex.form_id for ex in test}
    assert test_forms == set(FORM_IDS)


def test_split_insufficient_unique():
    question, prog = qforms.instantiate(4, {1: "Fwn", 2: 49483})
    from amocqa.dsl import print_program

    lonely = DatasetExample(
        id=0,
        form_id=4,
        question=question,
        program=print_program(prog),
        values=("49483",),
    )
    with pytest.raises(InsufficientUnique):
        split([lonely, lonely], 0.1, seed=0)


def test_rebalance_equalizes_counts():
    examples = generate(GenConfig(n_examples=1000, seed=17))
    train, _ = split(examples, 0.1, seed=18)
    balanced = rebalance(train, seed=19)
    counts = {}
    for ex in balanced:
        counts[ex.form_id] = counts.get(ex.form_id, 0) + 1
    assert max(counts.values()) - min(counts.values()) <= 1
    assert max(counts.values()) <= 1.01 * min(counts.values())
    assert len(balanced) == sum(counts.values())
    assert [ex.id for ex in balanced] == list(range(len(balanced)))


def test_build_dataset_shape(small_bundle):
    train, test = small_bundle.train, small_bundle.test
    counts = {}
    for ex in train:
        counts[ex.form_id] = counts.get(ex.form_id, 0) + 1
    share = {f: c / len(train) for f, c in counts.items()}
    for form_id in FORM_IDS:
        assert abs(share[form_id] - 0.1) < 0.01
    test_questions = [ex.question for ex in test]
    assert len(set(test_questions)) == len(test_questions)
    train_questions = {ex.question for ex in train}
    assert not train_questions & set(test_questions)


def test_build_dataset_test_concentration(small_bundle):
    test = small_bundle.test
    multi_forms = {
        f.form_id for f in qforms.FORMS if max(f.clause_counts) >= 2
    }
    multi = sum(1 for ex in test if ex.form_id in multi_forms)
    assert multi / len(test) > 0.9
    dominant = sum(1 for ex in test if ex.form_id == DOMINANT_FORM)
    assert dominant / len(test) > 0.8


def test_build_dataset_manifest(small_bundle):
    manifest = small_bundle.manifest
    assert manifest["config"]["n_examples"] == 5000
    assert manifest["seed"] == 42
    assert sum(manifest["counts"]["train"].values()) == len(small_bundle.train)
    assert sum(manifest["counts"]["test"].values()) == len(small_bundle.test)
    json.dumps(manifest)


def test_execute_answers_attached():
    config = GenConfig(n_examples=10, seed=3, balance=False, execute_answers=True)
    examples = generate(config)
    for ex in examples:
        assert ex.answer is not None
        assert set(ex.answer) == {"kind", "value", "unit"}


def test_jsonl_round_trip(tmp_path):
    examples = generate(GenConfig(n_examples=50, seed=21, balance=False))
    path = tmp_path / "rows.jsonl"
    write_jsonl(examples, path)
    assert read_jsonl(path) == examples

    first = json.loads(
        path.read_text(encoding="utf-8").splitlines()[0],
        object_pairs_hook=list,
    )
    assert [k for k, _ in first] == ["id", "form_id", "question", "program", "values"]


def test_write_dataset_is_byte_deterministic(tmp_path):
    config = GenConfig(n_examples=800, seed=23)
    for name in ("a", "b"):
        write_dataset(build_dataset(config), tmp_path / name)
    for fname in ("train.jsonl", "test.jsonl", "manifest.json"):
        a = (tmp_path / "a" / fname).read_bytes()
        b = (tmp_path / "b" / fname).read_bytes()
        assert a == b
