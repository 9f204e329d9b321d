"""Four-box ocean overturning surrogate with a question-answering toolchain.

The package couples a small deterministic ocean box model to a closed program
language, natural-language question forms, a synthetic dataset generator, a
token codec, translation metrics, a CLI, and an HTTP service.
"""

from .boxmodel import (
    Constants,
    DEFAULT_CONSTANTS,
    InvalidParams,
    NumericalBlowup,
    Params,
    RunOutput,
    default_params,
    density,
    load_constants,
    run,
    total_salt,
)
from .dsl import (
    Clause,
    Program,
    ProgramSyntaxError,
    RunExpr,
    ValidationError,
    parse,
    print_program,
    program,
    render_number,
)
from .datagen import (
    DatasetBundle,
    DatasetExample,
    GenConfig,
    build_dataset,
    generate,
    read_jsonl,
    split,
    write_dataset,
    write_jsonl,
)
from .executor import Answer, execute, run_program
from .metrics import EvalReport, PredictionRecord, evaluate, levenshtein, nld
from .qforms import (
    MatchResult,
    NoMatch,
    NotExpressible,
    canonical_question,
    instantiate,
    match_question,
)
from .textcodec import TokenSequence, Vocab, build_vocab, decode, encode

__all__ = [
    "Answer",
    "Clause",
    "Constants",
    "DEFAULT_CONSTANTS",
    "DatasetBundle",
    "DatasetExample",
    "EvalReport",
    "GenConfig",
    "InvalidParams",
    "MatchResult",
    "NoMatch",
    "NotExpressible",
    "NumericalBlowup",
    "Params",
    "PredictionRecord",
    "Program",
    "ProgramSyntaxError",
    "RunExpr",
    "RunOutput",
    "TokenSequence",
    "ValidationError",
    "Vocab",
    "build_dataset",
    "build_vocab",
    "canonical_question",
    "decode",
    "default_params",
    "density",
    "encode",
    "evaluate",
    "execute",
    "generate",
    "instantiate",
    "levenshtein",
    "load_constants",
    "match_question",
    "nld",
    "parse",
    "print_program",
    "program",
    "read_jsonl",
    "render_number",
    "run",
    "run_program",
    "split",
    "total_salt",
    "write_dataset",
    "write_jsonl",
]
