"""
Generating a question/program dataset
=====================================

Builds a small balanced dataset, shows the per-form composition of the
train and test splits, and round-trips one example through the codec.
"""

from collections import Counter

from amocqa import GenConfig, build_dataset, build_vocab, decode, encode

# 5000 raw examples: balanced unique pools per form, deduplicated test
# split, then the train side rebalanced to a tenth per form.
bundle = build_dataset(GenConfig(n_examples=5000, seed=7))
train, test = bundle.train, bundle.test

print(f"train: {len(train)}  test: {len(test)}")
print("form  train  test")
train_counts = Counter(ex.form_id for ex in train)
test_counts = Counter(ex.form_id for ex in test)
for form_id in range(1, 11):
    print(f"{form_id:4d} {train_counts[form_id]:6d} {test_counts[form_id]:5d}")

# The token codec masks numerals as VALUE and stores their spellings, so
# decoding restores the exact text.
vocab = build_vocab(
    text for ex in train for text in (ex.question, ex.program)
)
example = test[0]
seq = encode(example.question, vocab)
print(f"\nvocab size:     {len(vocab)}")
print(f"question:       {example.question}")
print(f"token ids:      {seq.ids}")
print(f"stored values:  {seq.values}")
print(f"decoded:        {decode(seq, vocab)}")
assert decode(seq, vocab) == example.question
