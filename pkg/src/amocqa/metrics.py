"""Edit-distance scoring and evaluation reports for translation output.

Scores are normalized Levenshtein distances rescaled to [0, 100], 100 being
identical sequences. Reports aggregate per translation direction (QTQ
question autoencoding, QTP question-to-program, PTQ program-to-question)
with a per-form breakdown for PTQ, empirical CDFs, and both weighted and
unweighted form means (the unweighted mean is what masks a dominant form's
weakness, so both are reported).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

from .textcodec import tokenize

DIRECTIONS = ("QTQ", "QTP", "PTQ")
NORMALIZATIONS = ("max", "yujian-bo")
GRANULARITIES = ("token", "char")


class EmptyInput(Exception):
    """evaluate called with no records."""


@dataclass(frozen=True)
class PredictionRecord:
    """One model output paired with its ground truth."""

    id: int
    direction: str
    prediction: str
    target: str
    form_id: int

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if not 1 <= self.form_id <= 10:
            raise ValueError("form_id must lie in 1..10")

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "direction": self.direction,
            "prediction": self.prediction,
            "target": self.target,
            "form_id": self.form_id,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "PredictionRecord":
        return PredictionRecord(
            id=int(data["id"]),
            direction=data["direction"],
            prediction=data["prediction"],
            target=data["target"],
            form_id=int(data["form_id"]),
        )


def levenshtein(a, b) -> int:
    """Minimum insertions, deletions, and substitutions from a to b.

    Dynamic programming over two rows, O(len(a)*len(b)) time, O(len(b))
    space. Inputs are arbitrary equal-comparable sequences.
    """
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,          # deletion
                    current[j - 1] + 1,       # insertion
                    previous[j - 1] + (x != y),  # substitution
                )
            )
        previous = current
    return previous[-1]


def nld(a, b, normalization: str = "max") -> float:
    """Normalized Levenshtein similarity in [0, 100]; 100 means identical.

    "max" rescales by the longer length. "yujian-bo" uses the normalized
    metric 2L/(len(a)+len(b)+L), which weighs shared length differently.
    """
    distance = levenshtein(a, b)
    if normalization == "max":
        return 100.0 * (1.0 - distance / max(len(a), len(b), 1))
    if normalization == "yujian-bo":
        denom = len(a) + len(b) + distance
        if denom == 0:
            return 100.0
        return 100.0 * (1.0 - 2.0 * distance / denom)
    raise ValueError(f"normalization must be one of {NORMALIZATIONS}")


def _units(text: str, granularity: str):
    if granularity == "token":
        return tokenize(text)
    if granularity == "char":
        return list(text)
    raise ValueError(f"granularity must be one of {GRANULARITIES}")


def score_text(
    prediction: str,
    target: str,
    granularity: str = "token",
    normalization: str = "max",
) -> float:
    """nld between two texts at the requested granularity."""
    return nld(
        _units(prediction, granularity),
        _units(target, granularity),
        normalization,
    )


def _mean_std(scores) -> tuple[float, float]:
    n = len(scores)
    mean = math.fsum(scores) / n
    var = math.fsum((s - mean) ** 2 for s in scores) / n
    return mean, math.sqrt(var)


def _cdf(scores) -> tuple[tuple[float, float], ...]:
    """Empirical CDF as (score, fraction of scores <= score) steps."""
    n = len(scores)
    points = []
    seen = 0
    for score in sorted(scores):
        seen += 1
        if points and points[-1][0] == score:
            points[-1] = (score, seen / n)
        else:
            points.append((score, seen / n))
    return tuple(points)


@dataclass(frozen=True)
class DirectionStats:
    mean: float
    std: float
    count: int
    cdf: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class FormStats:
    mean: float
    std: float
    count: int


@dataclass(frozen=True)
class EvalReport:
    granularity: str
    normalization: str
    directions: dict
    ptq_by_form: dict
    unweighted_form_mean: float | None

    def to_json_dict(self) -> dict:
        return {
            "granularity": self.granularity,
            "normalization": self.normalization,
            "directions": {
                d: {
                    "mean": s.mean,
                    "std": s.std,
                    "count": s.count,
                    "cdf": [list(p) for p in s.cdf],
                }
                for d, s in self.directions.items()
            },
            "ptq_by_form": {
                str(f): {"mean": s.mean, "std": s.std, "count": s.count}
                for f, s in self.ptq_by_form.items()
            },
            "unweighted_form_mean": self.unweighted_form_mean,
        }

    def write_cdf_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["direction", "score", "cum_fraction"])
            for direction in DIRECTIONS:
                stats = self.directions.get(direction)
                if stats is None:
                    continue
                for score, frac in stats.cdf:
                    writer.writerow([direction, repr(score), repr(frac)])

    def write_forms_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["form_id", "mean", "std", "count"])
            for form_id in sorted(self.ptq_by_form):
                stats = self.ptq_by_form[form_id]
                writer.writerow(
                    [form_id, repr(stats.mean), repr(stats.std), stats.count]
                )


def evaluate(
    records,
    granularity: str = "token",
    normalization: str = "max",
) -> EvalReport:
    """Score records and aggregate by direction and, for PTQ, by form."""
    records = list(records)
    if not records:
        raise EmptyInput("no prediction records to evaluate")

    by_direction: dict[str, list[float]] = {}
    ptq_by_form: dict[int, list[float]] = {}
    for record in records:
        score = score_text(
            record.prediction, record.target, granularity, normalization
        )
        by_direction.setdefault(record.direction, []).append(score)
        if record.direction == "PTQ":
            ptq_by_form.setdefault(record.form_id, []).append(score)

    directions = {}
    for direction, scores in by_direction.items():
        mean, std = _mean_std(scores)
        directions[direction] = DirectionStats(
            mean=mean, std=std, count=len(scores), cdf=_cdf(scores)
        )
    form_stats = {}
    for form_id in sorted(ptq_by_form):
        mean, std = _mean_std(ptq_by_form[form_id])
        form_stats[form_id] = FormStats(
            mean=mean, std=std, count=len(ptq_by_form[form_id])
        )
    unweighted = None
    if form_stats:
        unweighted = math.fsum(s.mean for s in form_stats.values()) / len(form_stats)
    return EvalReport(
        granularity=granularity,
        normalization=normalization,
        directions=directions,
        ptq_by_form=form_stats,
        unweighted_form_mean=unweighted,
    )


def read_predictions(path) -> list[PredictionRecord]:
    """Read a JSON Lines predictions file."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(PredictionRecord.from_json_dict(json.loads(line)))
    return out


def write_predictions(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(), separators=(",", ":")) + "\n")
