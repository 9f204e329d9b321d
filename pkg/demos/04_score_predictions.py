"""
Scoring predicted translations
==============================

Builds a toy prediction set with deliberate errors and walks through the
normalized edit-similarity report: per-direction means, the cumulative
distribution, and the per-form breakdown.
"""

from amocqa import PredictionRecord, evaluate, nld

# Similarity is 100 minus the normalized edit distance, so 100 is exact.
perfect = "If I increase Fwn by 2052, will the AMOC increase?"
swapped = "By increasing Fwn by 2052, will the AMOC increase?"
print(f"identical:     {nld(perfect.split(), perfect.split()):.1f}")
print(f"opener swap:   {nld(perfect.split(), swapped.split()):.1f}")

# A small batch: exact program translations, one garbled question.
records = [
    PredictionRecord(
        id=0, direction="QTP",
        prediction="FinalValue(four_box_model(SetTo(Fwn,5000)),M_n)",
        target="FinalValue(four_box_model(SetTo(Fwn,5000)),M_n)",
        form_id=3,
    ),
    PredictionRecord(
        id=1, direction="PTQ", prediction=swapped, target=perfect, form_id=9,
    ),
    PredictionRecord(
        id=2, direction="PTQ",
        prediction="will will the AMOC increase?",
        target=perfect,
        form_id=9,
    ),
]

report = evaluate(records)
for direction, stats in sorted(report.directions.items()):
    print(f"\n{direction}: mean {stats.mean:.2f}  std {stats.std:.2f}  "
          f"n {stats.count}")
    for score, fraction in stats.cdf:
        print(f"    <= {score:6.2f}: {fraction:.2f} of predictions")

print(f"\nunweighted per-form mean: {report.unweighted_form_mean:.2f}")
