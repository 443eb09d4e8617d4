"""Result value object shared by the clustering entry points and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["ClusterResult"]


@dataclass(frozen=True)
class ClusterResult:
    """Output set plus the numbers needed to reproduce and audit a run.

    ``objective`` is the value of ``objective_name`` on the returned set;
    ``conductance``, ``cut`` and ``volume`` are always recomputed from the
    graph so results can be cross-checked independently of the algorithm.
    ``history`` holds the accepted per-iteration objective values for
    iterative methods (not serialized).
    """

    set_ids: tuple[int, ...]
    objective_name: str
    objective: float
    conductance: float
    cut: float
    volume: float
    touched_nodes: int
    iterations: int
    runtime_ms: float
    history: tuple[float, ...] = field(default=(), compare=False)
