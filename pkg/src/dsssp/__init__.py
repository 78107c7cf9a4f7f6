"""Decremental (1+eps)-approximate single-source shortest paths.

Library plus CLI harness: randomized ball-growing separators, maintained
approximate topological orders, a bucketed contracted-graph SSSP engine,
hop-reducing shortcut sets, and a bootstrapped scale hierarchy, all checked
against exact oracles at desk scale.
"""

from .graphs import (
    DELETE,
    INCREASE,
    INF,
    DecrementalGraph,
    UpdateEvent,
)

__all__ = [
    "DELETE",
    "INCREASE",
    "INF",
    "DecrementalGraph",
    "UpdateEvent",
]

__version__ = "0.1.0"
