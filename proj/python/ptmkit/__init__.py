"""Cache DSL toolkit: parsing, symbolic cycle prediction, and oracles."""

from ._core import (
    DslError,
    Formula,
    HarnessError,
    InterpreterError,
    Program,
    SymbolicError,
    check,
    corpus_ids,
    corpus_program,
    corpus_source,
    default_costs,
    footprint,
    mdape,
    parse,
    predict,
    pretty_print,
    run,
    sweep,
    typecheck,
)

__all__ = [
    "DslError",
    "Formula",
    "HarnessError",
    "InterpreterError",
    "Program",
    "SymbolicError",
    "check",
    "corpus_ids",
    "corpus_program",
    "corpus_source",
    "default_costs",
    "footprint",
    "mdape",
    "parse",
    "predict",
    "pretty_print",
    "run",
    "sweep",
    "typecheck",
]
