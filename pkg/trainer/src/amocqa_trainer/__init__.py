"""Triangular question/program translation model.

One shared-embedding system of three sequence translators (question to
question, question to program, program to question) trained jointly on
the box-model QA datasets. The package exchanges data with the dataset
toolchain only through its file formats (JSON Lines datasets, the
vocabulary file, prediction files) and the HTTP adapter protocol.
"""

from .adapter import AdapterThread, make_server, serve_adapter
from .data import Batch, Example, iter_batches, longest_sequence, make_batch, read_examples
from .loss import TriangleOutputs, compute_loss, predicted_lengths
from .model import (
    DIRECTIONS,
    ConfigError,
    ModelConfig,
    TriangleModel,
    build_model,
    parameter_count,
)
from .predict import export_predictions, greedy_decode, predict
from .textproto import (
    BOS_ID,
    EOS_ID,
    PAD_ID,
    RESERVED_TOKENS,
    TokenSequence,
    UNK_ID,
    VALUE_ID,
    Vocab,
    VocabError,
    decode,
    encode,
)
from .train import (
    DivergenceError,
    ExperimentResult,
    epoch_tail_means,
    final_loss_spread,
    probe_loss,
    run_experiments,
    train,
    write_loss_curve,
)

__all__ = [
    "AdapterThread",
    "BOS_ID",
    "Batch",
    "ConfigError",
    "DIRECTIONS",
    "DivergenceError",
    "EOS_ID",
    "Example",
    "ExperimentResult",
    "ModelConfig",
    "PAD_ID",
    "RESERVED_TOKENS",
    "TokenSequence",
    "TriangleModel",
    "TriangleOutputs",
    "UNK_ID",
    "VALUE_ID",
    "Vocab",
    "VocabError",
    "build_model",
    "compute_loss",
    "decode",
    "encode",
    "epoch_tail_means",
    "export_predictions",
    "final_loss_spread",
    "greedy_decode",
    "iter_batches",
    "longest_sequence",
    "make_batch",
    "make_server",
    "parameter_count",
    "predict",
    "predicted_lengths",
    "probe_loss",
    "read_examples",
    "run_experiments",
    "serve_adapter",
    "train",
    "write_loss_curve",
]
