"""Grid-based q-convexity and q-pseudoconvexity checks."""

from ._qcx import (
    EvalError,
    NumericError,
    __version__,
    classify,
    first_main_theorem,
    graph_demo,
    regularize,
    reinhardt_agreement,
    set_check,
    tube_check,
    witness,
)

__all__ = [
    "EvalError",
    "NumericError",
    "__version__",
    "classify",
    "first_main_theorem",
    "graph_demo",
    "regularize",
    "reinhardt_agreement",
    "set_check",
    "tube_check",
    "witness",
]
