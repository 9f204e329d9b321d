"""Seeded generation of the question/program dataset with balancing and split.

The pipeline has three stages. ``generate`` draws per-form pools of unique
examples whose sizes follow fixed reference budgets (one generalized form
dominates, mirroring how combinatorial expansion dwarfs the fixed-shape
templates). ``split`` reserves a fraction of each form's unique pool as the
test set, so the holdout is deduplicated by construction and concentrated in
the dominant form. ``rebalance`` then equalizes the training side by
repeating scarce forms and subsampling abundant ones. ``build_dataset`` runs
all three and is what the CLI writes to disk.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace

from . import qforms
from .boxmodel import DEFAULT_CONSTANTS, default_params
from .dsl import print_program, render_number
from .executor import execute
from .textcodec import is_numeral, tokenize_question

# Reference per-form pool budgets at REFERENCE_N examples; the dominant
# generalized set-clause form receives the remainder (234,880 at 250,000).
REFERENCE_N = 250_000
REFERENCE_BUDGETS = {
    1: 40,
    2: 260,
    3: 30,
    4: 40,
    5: 670,
    6: 40,
    7: 40,
    9: 2000,
    10: 12_000,
}
DOMINANT_FORM = 8

FORM_IDS = tuple(range(1, 11))

# relative half-width for IncreaseBy deltas, as a fraction of the default
DELTA_REL_RANGE = (0.001, 0.1)

_DEFAULTS = default_params()
# absolute valid ranges per parameter after noise
VALID_RANGES = {
    "Fwn": (0.0, 5 * _DEFAULTS.Fwn),
    "Fws": (0.0, 5 * _DEFAULTS.Fws),
    "M_ek": (0.5 * _DEFAULTS.M_ek, 1.5 * _DEFAULTS.M_ek),
    "D_low0": (50.0, 3000.0),
    "epsilon": (0.25 * _DEFAULTS.epsilon, 4 * _DEFAULTS.epsilon),
    "N": (100, 20_000),
}

_SIG_FIGS = 5  # sampled values are rounded to this many significant figures


class InvalidConfig(Exception):
    """GenConfig violates its invariants."""


class InsufficientUnique(Exception):
    """A form's unique pool is too small to reserve any test examples."""


@dataclass(frozen=True)
class GenConfig:
    """Generation settings; seeded runs are byte-for-byte reproducible."""

    n_examples: int
    seed: int
    noise_rel: float = 0.3
    execute_answers: bool = False
    balance: bool = True
    test_frac: float = 0.1

    def __post_init__(self):
        if self.n_examples < 10:
            raise InvalidConfig("n_examples must be at least 10")
        if not 0 < self.noise_rel < 1:
            raise InvalidConfig("noise_rel must lie in (0, 1)")
        if not 0 < self.test_frac < 1:
            raise InvalidConfig("test_frac must lie in (0, 1)")


@dataclass(frozen=True)
class DatasetExample:
    """One question/program pair with the question's numeric literals."""

    id: int
    form_id: int
    question: str
    program: str
    values: tuple[str, ...]
    answer: dict | None = None

    def to_json_dict(self) -> dict:
        data = {
            "id": self.id,
            "form_id": self.form_id,
            "question": self.question,
            "program": self.program,
        }
        if self.answer is not None:
            data["answer"] = self.answer
        data["values"] = list(self.values)
        return data

    @staticmethod
    def from_json_dict(data: dict) -> "DatasetExample":
        return DatasetExample(
            id=int(data["id"]),
            form_id=int(data["form_id"]),
            question=data["question"],
            program=data["program"],
            values=tuple(str(v) for v in data["values"]),
            answer=data.get("answer"),
        )


@dataclass(frozen=True)
class DatasetBundle:
    train: tuple[DatasetExample, ...]
    test: tuple[DatasetExample, ...]
    manifest: dict


def _round_sig(x: float, sig: int = _SIG_FIGS) -> float:
    if x == 0:
        return 0.0
    return round(x, sig - 1 - math.floor(math.log10(abs(x))))


def sample_value(param: str, rng: random.Random, noise_rel: float = 0.3) -> float:
    """Draw a parameter value near its default, clamped to its valid range.

    Parameters with defaults get multiplicative uniform noise of relative
    half-width ``noise_rel``. The step count N, a pure count with no noise
    scale, is drawn as round(|z|*1000)+1 for standard normal z. Results are
    rounded to 5 significant figures (N to an integer).
    """
    lo, hi = VALID_RANGES[param]
    if param == "N":
        raw = round(abs(rng.gauss(0.0, 1.0)) * 1000) + 1
        return int(min(max(raw, lo), hi))
    default = getattr(_DEFAULTS, param)
    raw = default * (1.0 + rng.uniform(-noise_rel, noise_rel))
    return _round_sig(min(max(raw, lo), hi))


def sample_delta(param: str, rng: random.Random) -> float:
    """Draw an IncreaseBy perturbation: 0.1%-10% of the parameter default."""
    default = getattr(_DEFAULTS, param)
    return _round_sig(default * rng.uniform(*DELTA_REL_RANGE))


def _lit(value) -> str:
    if isinstance(value, int):
        return str(value)
    return render_number(value)


def _draw_example(form_id: int, rng: random.Random, noise_rel: float):
    """One (question, program, values) draw for a form, synonyms uniform."""
    params = list(qforms.NON_N_PARAMS)

    def set_lits(k):
        chosen = rng.sample(params, k)
        return chosen, [_lit(sample_value(p, rng, noise_rel)) for p in chosen]

    if form_id == 1:
        (p,), (v,) = set_lits(1)
        n_lit = _lit(sample_value("N", rng, noise_rel))
        return qforms.instantiate(1, {1: n_lit, 2: p, 3: v})
    if form_id == 2:
        (p1, p2), (v1, v2) = set_lits(2)
        return qforms.instantiate(2, {1: p1, 2: v1, 3: p2, 4: v2})
    if form_id in (3, 4):
        (p,), (v,) = set_lits(1)
        return qforms.instantiate(form_id, {1: p, 2: v})
    if form_id == 5:
        chosen, lits = set_lits(3)
        binding = {}
        for i in range(3):
            binding[2 * i + 1] = chosen[i]
            binding[2 * i + 2] = lits[i]
        return qforms.instantiate(5, binding)
    if form_id in (6, 7):
        p = rng.choice(params)
        d = _lit(sample_delta(p, rng))
        return qforms.instantiate(form_id, {1: p, 2: d})
    if form_id == 8:
        while True:
            k = rng.choice((1, 2, 3))
            opener = rng.choice((0, 1))
            mentions = tuple(rng.choice((0, 1)) for _ in range(k))
            # the all-symbol three-clause cell with the first opener is the
            # fixed form 5; redraw so labels agree with match priority
            if k == 3 and opener == 0 and mentions == (0, 0, 0):
                continue
            chosen, lits = set_lits(k)
            return qforms.instantiate(
                8,
                {"params": tuple(chosen), "values": tuple(lits)},
                {"opener": opener, "mentions": mentions},
            )
    if form_id == 9:
        while True:
            p = rng.choice(params)
            variable = rng.choice(tuple(qforms.VARIABLE_PHRASES))
            opener = rng.choice((0, 1))
            mention = rng.choice((0, 1))
            n_phrases = len(qforms.VARIABLE_PHRASES[variable])
            varphrase = rng.choice(range(n_phrases))
            # symbol-only first-opener wordings for M_n and S_north are the
            # fixed forms 6 and 7; redraw those cells
            if opener == 0 and mention == 0 and varphrase == 0 and variable in (
                "M_n",
                "S_north",
            ):
                continue
            d = _lit(sample_delta(p, rng))
            return qforms.instantiate(
                9,
                {"param": p, "delta": d, "variable": variable},
                {"opener": opener, "mention": mention, "varphrase": varphrase},
            )
    if form_id == 10:
        k = rng.choice((1, 3))
        chosen, lits = set_lits(k)
        return qforms.instantiate(
            10, {"params": tuple(chosen), "values": tuple(lits)}
        )
    raise ValueError(f"unknown form id {form_id}")


def _question_values(question: str) -> tuple[str, ...]:
    return tuple(t for t in tokenize_question(question) if is_numeral(t))


def pool_budgets(n_examples: int) -> dict[int, int]:
    """Per-form unique pool sizes; the dominant form takes the remainder."""
    floor = 2 if n_examples >= 200 else 1
    budgets = {
        f: max(floor, round(b * n_examples / REFERENCE_N))
        for f, b in REFERENCE_BUDGETS.items()
    }
    rest = n_examples - sum(budgets.values())
    if rest < 1:
        raise InvalidConfig(
            f"n_examples={n_examples} leaves no room for the dominant form"
        )
    budgets[DOMINANT_FORM] = rest
    return {f: budgets[f] for f in FORM_IDS}


def _make_example(example_id, form_id, question, prog, config, constants):
    answer = None
    if config.execute_answers:
        answer = execute(prog, constants).to_dict()
    return DatasetExample(
        id=example_id,
        form_id=form_id,
        question=question,
        program=print_program(prog),
        values=_question_values(question),
        answer=answer,
    )


def generate(config: GenConfig, constants=DEFAULT_CONSTANTS) -> list[DatasetExample]:
    """Draw the seeded raw dataset of ``n_examples`` examples.

    With ``balance`` set, per-form counts follow ``pool_budgets`` and every
    example is unique within its form (this is the pool the test split and
    training repetition downstream rely on). Without it, forms are drawn
    uniformly and duplicates are not rejected.
    """
    rng = random.Random(config.seed)
    examples: list[DatasetExample] = []
    if config.balance:
        budgets = pool_budgets(config.n_examples)
        for form_id in FORM_IDS:
            target = budgets[form_id]
            seen: set[str] = set()
            attempts = 0
            while len(seen) < target:
                attempts += 1
                if attempts > 200 * target + 1000:
                    raise InsufficientUnique(
                        f"form {form_id}: only {len(seen)} unique questions "
                        f"found for a pool of {target}"
                    )
                question, prog = _draw_example(form_id, rng, config.noise_rel)
                if question in seen:
                    continue
                seen.add(question)
                examples.append(
                    _make_example(
                        len(examples), form_id, question, prog, config, constants
                    )
                )
    else:
        for i in range(config.n_examples):
            form_id = rng.choice(FORM_IDS)
            question, prog = _draw_example(form_id, rng, config.noise_rel)
            examples.append(
                _make_example(i, form_id, question, prog, config, constants)
            )
    rng.shuffle(examples)
    return [replace(ex, id=i) for i, ex in enumerate(examples)]


def split(examples, test_frac: float, seed: int):
    """Reserve a deduplicated per-form test slice of the unique examples.

    Within each form, duplicates (by question and program) are collapsed and
    round(test_frac * uniques) of them move to the test side; every raw
    example whose question was reserved leaves the training side entirely.
    """
    if not 0 < test_frac < 1:
        raise InvalidConfig("test_frac must lie in (0, 1)")
    rng = random.Random(seed)
    by_form: dict[int, list[DatasetExample]] = {f: [] for f in FORM_IDS}
    for ex in examples:
        by_form.setdefault(ex.form_id, []).append(ex)

    test_keys: set[tuple[str, str]] = set()
    test: list[DatasetExample] = []
    for form_id in sorted(by_form):
        unique: dict[tuple[str, str], DatasetExample] = {}
        for ex in by_form[form_id]:
            unique.setdefault((ex.question, ex.program), ex)
        if not unique:
            continue
        if len(unique) < 2:
            raise InsufficientUnique(
                f"form {form_id} has {len(unique)} unique example(s); "
                "cannot reserve a nonempty test slice"
            )
        n_test = round(test_frac * len(unique))
        n_test = min(max(n_test, 1), len(unique) - 1)
        keys = sorted(unique)
        chosen = rng.sample(keys, n_test)
        test_keys.update(chosen)
        test.extend(unique[k] for k in sorted(chosen))
    train = [ex for ex in examples if (ex.question, ex.program) not in test_keys]
    return train, test


def rebalance(train, seed: int) -> list[DatasetExample]:
    """Equalize per-form training counts by repetition and subsampling."""
    rng = random.Random(seed)
    by_form: dict[int, list[DatasetExample]] = {}
    for ex in train:
        by_form.setdefault(ex.form_id, []).append(ex)
    if not by_form:
        return []
    target = round(len(train) / len(by_form))
    out: list[DatasetExample] = []
    for form_id in sorted(by_form):
        pool = by_form[form_id]
        if len(pool) >= target:
            out.extend(rng.sample(pool, target))
        else:
            copies, remainder = divmod(target, len(pool))
            out.extend(pool * copies)
            out.extend(rng.sample(pool, remainder))
    rng.shuffle(out)
    return [replace(ex, id=i) for i, ex in enumerate(out)]


def build_dataset(config: GenConfig, constants=DEFAULT_CONSTANTS) -> DatasetBundle:
    """Full pipeline: pools, per-form test split, training rebalance."""
    examples = generate(config, constants)
    train, test = split(examples, config.test_frac, config.seed + 1)
    if config.balance:
        train = rebalance(train, config.seed + 2)
    else:
        train = [replace(ex, id=i) for i, ex in enumerate(train)]
    test = [replace(ex, id=i + len(train)) for i, ex in enumerate(test)]

    def counts(rows):
        c: dict[int, int] = {}
        for ex in rows:
            c[ex.form_id] = c.get(ex.form_id, 0) + 1
        return {str(f): c.get(f, 0) for f in FORM_IDS}

    manifest = {
        "config": {
            "n_examples": config.n_examples,
            "seed": config.seed,
            "noise_rel": config.noise_rel,
            "execute_answers": config.execute_answers,
            "balance": config.balance,
            "test_frac": config.test_frac,
        },
        "seed": config.seed,
        "counts": {
            "train": counts(train),
            "test": counts(test),
            "train_total": len(train),
            "test_total": len(test),
        },
    }
    return DatasetBundle(train=tuple(train), test=tuple(test), manifest=manifest)


def write_jsonl(examples, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(ex.to_json_dict(), separators=(",", ":")) + "\n")


def read_jsonl(path) -> list[DatasetExample]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(DatasetExample.from_json_dict(json.loads(line)))
    return out


def write_dataset(bundle: DatasetBundle, out_dir) -> None:
    """Write train.jsonl, test.jsonl, and manifest.json under out_dir."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    write_jsonl(bundle.train, os.path.join(out_dir, "train.jsonl"))
    write_jsonl(bundle.test, os.path.join(out_dir, "test.jsonl"))
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(bundle.manifest, fh, indent=2, sort_keys=False)
        fh.write("\n")
