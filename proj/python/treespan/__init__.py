"""Join-tree decompositions with tunable time/space tradeoffs."""

from ._treespan import (
    ModelParseError,
    analyze,
    belief,
    canonical,
    meu,
    mpe,
    optimize,
    oracle_belief,
    oracle_csp,
    parse,
    run,
    solve,
)

__all__ = [
    "ModelParseError",
    "analyze",
    "belief",
    "canonical",
    "meu",
    "mpe",
    "optimize",
    "oracle_belief",
    "oracle_csp",
    "parse",
    "run",
    "solve",
]
