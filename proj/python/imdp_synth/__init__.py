"""Multi-objective strategy synthesis for interval MDPs.

Models, queries and strategies are JSON documents. Every function accepts a
dict, a JSON string or a path to a JSON file, and returns plain Python data.
"""

from __future__ import annotations

import json
import os
from typing import Any, Optional, Union

from . import _core
from ._core import (
    FORMAT_VERSION,
    ContractError,
    DivergenceError,
    Error,
    InputError,
    UnachievableError,
)

Document = Union[dict, str, "os.PathLike[str]"]

__all__ = [
    "FORMAT_VERSION",
    "ContractError",
    "DivergenceError",
    "Error",
    "InputError",
    "UnachievableError",
    "gen_antg",
    "gen_grid",
    "pareto",
    "quantitative",
    "simulate",
    "synthesize",
    "validate",
    "witness",
]


def _text(doc: Document) -> str:
    if isinstance(doc, dict):
        return json.dumps(doc)
    if isinstance(doc, os.PathLike) or (isinstance(doc, str) and not doc.lstrip().startswith("{")):
        with open(doc, encoding="utf-8") as f:
            return f.read()
    return doc


def validate(model: Document) -> list[dict]:
    """Rule violations of a model; empty when the model is valid."""
    return _core.validate(_text(model))


def synthesize(model: Document, query: Document, *, epsilon: Optional[float] = None,
               max_iters: Optional[int] = None) -> dict[str, Any]:
    """Decides a synth query. The result carries "outcome", points, trace and mixture."""
    return json.loads(_core.synthesize(_text(model), _text(query), epsilon, max_iters))


def quantitative(model: Document, query: Document, *, epsilon: Optional[float] = None,
                 max_iters: Optional[int] = None) -> dict[str, Any]:
    """Optimizes the query's qnt objective subject to the remaining ones."""
    return json.loads(_core.quantitative(_text(model), _text(query), epsilon, max_iters))


def pareto(model: Document, query: Document, *, epsilon: Optional[float] = None,
           max_iters: Optional[int] = None) -> dict[str, Any]:
    """Approximates a two-objective Pareto curve; "vertices" ascend in objective 1."""
    vertices, capped, text = _core.pareto(_text(model), _text(query), epsilon, max_iters)
    result = json.loads(text)
    result["vertices"] = [list(v) for v in vertices]
    result["capped"] = capped
    return result


def witness(model: Document, query: Document, *, epsilon: Optional[float] = None,
            max_iters: Optional[int] = None) -> Optional[dict[str, Any]]:
    """Mixture strategy achieving a synth or qnt query, or None."""
    text = _core.witness(_text(model), _text(query), epsilon, max_iters)
    return None if text is None else json.loads(text)


def simulate(model: Document, query: Document, *, runs: int = 10_000, horizon: int = 1_000,
             seed: int = 1) -> Optional[dict[str, Any]]:
    """Monte-Carlo means and 95% half-widths of the witness under midpoint nature."""
    text = _core.simulate(_text(model), _text(query), runs, horizon, seed)
    return None if text is None else json.loads(text)


def gen_antg(n: int = 14, *, closed: bool = True) -> dict[str, Any]:
    """Museum model with entrance (0,0) and exit (n-1,n-1)."""
    return json.loads(_core.gen_antg(n, closed))


def gen_grid(rows: int = 1, cols: int = 2, *, obstacles=(), start=(0, 0), target=(0, 1),
             slip: float = 0.2, noise: float = 0.0) -> dict[str, Any]:
    """Grid-world model with crash and goal states."""
    return json.loads(_core.gen_grid(rows, cols, [tuple(o) for o in obstacles], tuple(start),
                                     tuple(target), slip, noise))
