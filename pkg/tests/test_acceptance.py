"""End-to-end acceptance checks for the library.

Each test pins its tolerance and time budget explicitly so a regression in
accuracy or speed fails loudly. These run against the library only; the
training and console packages have their own suites.
"""

import random
import time
from itertools import chain

import pytest

from amocqa import boxmodel, datagen, dsl, executor, metrics, qforms, textcodec
from amocqa.boxmodel import DEFAULT_CONSTANTS, Params, default_params, run
from amocqa.datagen import GenConfig, build_dataset, generate
from amocqa.dsl import parse, print_program
from amocqa.executor import execute
from amocqa.metrics import PredictionRecord, evaluate, levenshtein, nld
from amocqa.qforms import canonical_question, match_question
from amocqa.textcodec import UNK_ID, build_vocab, decode, encode

from test_dsl import make_random_program
from test_metrics import oracle_levenshtein


def test_parser_round_trip():
    rng = random.Random(1001)
    start = time.perf_counter()
    for _ in range(10_000):
        prog = make_random_program(rng)
        text = print_program(prog)
        reparsed = parse(text)
        assert reparsed == prog
        assert print_program(reparsed) == text
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0


def test_metric_matches_recursive_oracle():
    rng = random.Random(1002)
    alphabet = "abcd"
    start = time.perf_counter()
    for _ in range(1000):
        a = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        assert levenshtein(a, b) == oracle_levenshtein(tuple(a), tuple(b))
        assert nld(a, a) == 100.0
        assert nld(a, b) == nld(b, a)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0


def test_salt_conservation_and_volume():
    start = time.perf_counter()
    out = run(default_params())
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0

    salt = boxmodel.total_salt(out)
    for value in salt:
        assert abs(value - salt[0]) / salt[0] <= 1e-6
    c = DEFAULT_CONSTANTS
    for depth in out.D_low:
        v_low = c.A_low * depth
        v_deep = c.A_low * (c.H - depth)
        assert v_low + v_deep == pytest.approx(c.A_low * c.H, rel=1e-14)


def test_integrator_convergence():
    base = default_params()
    finals = {}
    for factor in (1, 2, 4):
        params = Params(
            N=base.N * factor,
            dt=base.dt / factor,
            Fwn=base.Fwn,
            Fws=base.Fws,
            M_ek=base.M_ek,
            D_low0=base.D_low0,
            epsilon=base.epsilon,
        )
        finals[factor] = run(params).M_n[-1]
    assert abs(finals[1] - finals[2]) / abs(finals[2]) < 1e-3
    assert abs(finals[2] - finals[4]) / abs(finals[4]) < 1e-4


def _collapses(fwn: float) -> bool:
    prog = dsl.program(
        "ChangeSign", [dsl.Clause("SetTo", "Fwn", fwn)], "M_n"
    )
    return bool(execute(prog).value)


def test_collapse_bisection_and_monotonicity():
    start = time.perf_counter()
    lo = default_params().Fwn
    hi = 10 * lo
    assert not _collapses(lo)
    assert _collapses(hi)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if _collapses(mid):
            hi = mid
        else:
            lo = mid
    threshold = 0.5 * (lo + hi)

    assert not _collapses(0.5 * threshold)
    assert _collapses(1.5 * threshold)

    grid = [
        default_params().Fwn + i * (10 * default_params().Fwn - default_params().Fwn) / 10
        for i in range(11)
    ]
    flags = [_collapses(f) for f in grid]
    assert flags == sorted(flags)  # False...False True...True, no flicker
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0


def test_dataset_scale_and_balance():
    start = time.perf_counter()
    bundle = build_dataset(GenConfig(n_examples=250_000, seed=42))
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0

    train, test = bundle.train, bundle.test
    counts = {}
    for ex in train:
        counts[ex.form_id] = counts.get(ex.form_id, 0) + 1
    for form_id in datagen.FORM_IDS:
        assert abs(counts[form_id] / len(train) - 0.10) <= 0.01

    assert abs(len(test) - 25_000) <= 250
    test_keys = [(ex.question, ex.program) for ex in test]
    assert len(set(test_keys)) == len(test_keys)
    train_keys = {(ex.question, ex.program) for ex in train}
    assert not train_keys & set(test_keys)

    multi_forms = {f.form_id for f in qforms.FORMS if max(f.clause_counts) >= 2}
    multi = sum(1 for ex in test if ex.form_id in multi_forms)
    assert multi / len(test) > 0.90


@pytest.fixture(scope="module")
def generated_10k():
    return generate(GenConfig(n_examples=10_000, seed=1007))


def test_oracle_translation_closure(generated_10k):
    for ex in generated_10k:
        prog = parse(ex.program)
        assert match_question(ex.question).program == prog
        assert match_question(canonical_question(prog)).program == prog


def test_codec_round_trip(generated_10k):
    corpus = chain.from_iterable((ex.question, ex.program) for ex in generated_10k)
    vocab = build_vocab(corpus)
    for ex in generated_10k:
        q_seq = encode(ex.question, vocab)
        assert UNK_ID not in q_seq.ids
        assert decode(q_seq, vocab) == ex.question
        p_seq = encode(ex.program, vocab)
        assert UNK_ID not in p_seq.ids
        assert decode(p_seq, vocab) == ex.program


def test_report_consistency():
    records = [
        PredictionRecord(id=0, direction="PTQ", prediction="a b c d",
                         target="a b c d", form_id=1),
        PredictionRecord(id=1, direction="PTQ", prediction="a b x y",
                         target="a b c d", form_id=1),
    ]
    report = evaluate(records)
    assert report.directions["PTQ"].mean == pytest.approx(75.0, abs=1e-12)
    assert report.directions["PTQ"].std == pytest.approx(25.0, abs=1e-12)

    rng = random.Random(1009)
    words = ["a", "b", "c", "d", "e"]
    mixed = []
    for i in range(500):
        mixed.append(
            PredictionRecord(
                id=i,
                direction="PTQ",
                prediction=" ".join(rng.choice(words) for _ in range(rng.randint(1, 8))),
                target=" ".join(rng.choice(words) for _ in range(rng.randint(1, 8))),
                form_id=rng.randint(1, 10),
            )
        )
    report = evaluate(mixed)
    total = sum(s.count for s in report.ptq_by_form.values())
    weighted = sum(s.mean * s.count for s in report.ptq_by_form.values()) / total
    assert abs(weighted - report.directions["PTQ"].mean) <= 1e-9
