"""Edge-list and seed-file ingestion, label remapping, result serialization.

External files speak arbitrary string labels; everything in memory is
contiguous internal ids. A LabelMap carries the bijection and every
writer restores the external names.
"""

from __future__ import annotations

import json
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator

import numpy as np

from .errors import GraphFormatError, InputError, InvalidSetError
from .graph import Graph, NodeSet
from .results import ClusterResult
from .spectral import EmbeddingVector

__all__ = [
    "LabelMap",
    "load_edge_list",
    "load_seed_set",
    "write_edge_list",
    "write_result",
    "write_vector_csv",
    "read_vector_csv",
]

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class LabelMap:
    """Bijection between external string labels and internal ids 0..n-1."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})
        if len(self._index) != len(self.labels):
            raise InputError("duplicate labels in label map")

    @classmethod
    def identity_for(cls, n: int) -> "LabelMap":
        return cls(labels=tuple(str(i) for i in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def internal(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown vertex label {label!r}") from None

    def external(self, internal_id: int) -> str:
        if not (0 <= internal_id < len(self.labels)):
            raise InputError(f"internal id {internal_id} out of range")
        return self.labels[internal_id]


@contextmanager
def _open_text(source: str | Path | IO[str], mode: str = "r") -> Iterator[IO[str]]:
    if isinstance(source, (str, Path)):
        with open(source, mode, encoding="utf-8") as handle:
            yield handle
    else:
        yield source


def load_edge_list(source: str | Path | IO[str]) -> tuple[Graph, LabelMap]:
    """Parse a whitespace-delimited edge list into a connected Graph.

    Each data line is "u v" or "u v w"; text after '#' is comment. The
    weight defaults to 1.0 and must be a finite positive number.
    Duplicate vertex pairs are summed with a warning on stderr. Internal
    ids follow first appearance order.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    pair_weight: dict[tuple[int, int], float] = {}
    duplicates: list[tuple[str, str]] = []

    def intern(label: str) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    with _open_text(source) as handle:
        for lineno, raw in enumerate(handle, start=1):
            data = raw.split("#", 1)[0].strip()
            if not data:
                continue
            tokens = data.split()
            if len(tokens) not in (2, 3):
                raise GraphFormatError(
                    f"line {lineno}: expected 'u v [w]', got {len(tokens)} fields"
                )
            if tokens[0] == tokens[1]:
                raise GraphFormatError(f"line {lineno}: self-loop on {tokens[0]!r}")
            if len(tokens) == 3:
                try:
                    weight = float(tokens[2])
                except ValueError:
                    raise GraphFormatError(
                        f"line {lineno}: bad weight {tokens[2]!r}"
                    ) from None
                if not math.isfinite(weight) or weight <= 0:
                    raise GraphFormatError(
                        f"line {lineno}: weight must be finite and positive, got {tokens[2]}"
                    )
            else:
                weight = 1.0
            a, b = intern(tokens[0]), intern(tokens[1])
            key = (a, b) if a < b else (b, a)
            if key in pair_weight:
                pair_weight[key] += weight
                duplicates.append((tokens[0], tokens[1]))
            else:
                pair_weight[key] = weight

    if not pair_weight:
        raise GraphFormatError("empty input: no edges found")
    for u_lab, v_lab in duplicates:
        print(
            f"warning: duplicate edge {u_lab} {v_lab}; weights summed",
            file=sys.stderr,
        )

    keys = sorted(pair_weight)
    u = np.array([k[0] for k in keys], dtype=np.int64)
    v = np.array([k[1] for k in keys], dtype=np.int64)
    w = np.array([pair_weight[k] for k in keys])
    g = Graph.from_edges(len(labels), u, v, w)
    lm = LabelMap(labels=tuple(labels))

    if not g.is_connected():
        a, b = g.unreachable_witness()
        raise GraphFormatError(
            f"graph is disconnected: no path between {lm.external(a)!r} and {lm.external(b)!r}"
        )
    return g, lm


def load_seed_set(source: str | Path | IO[str], lm: LabelMap, g: Graph) -> NodeSet:
    """Read one external label per line into a deduplicated NodeSet."""
    ids: set[int] = set()
    with _open_text(source) as handle:
        for raw in handle:
            label = raw.split("#", 1)[0].strip()
            if not label:
                continue
            ids.add(lm.internal(label))
    if not ids:
        raise InvalidSetError("seed file contains no labels")
    return NodeSet.of(g, sorted(ids))


def write_edge_list(g: Graph, lm: LabelMap, sink: str | Path | IO[str]) -> None:
    """Emit "u v w" lines, one per undirected edge, u's id below v's."""
    with _open_text(sink, "w") as handle:
        for u in range(g.n):
            nbr, ws = g.neighbors(u)
            for j, w in zip(nbr, ws):
                if u < j:
                    handle.write(
                        f"{lm.external(u)} {lm.external(int(j))} {FLOAT_FMT % w}\n"
                    )


def write_result(result: ClusterResult, lm: LabelMap, sink: str | Path | IO[str]) -> None:
    """Serialize a clustering result as a stable-schema JSON object."""
    payload = {
        "set": [lm.external(i) for i in result.set_ids],
        "objective_name": result.objective_name,
        "objective": result.objective,
        "conductance": result.conductance,
        "cut": result.cut,
        "volume": result.volume,
        "touched_nodes": result.touched_nodes,
        "iterations": result.iterations,
        "runtime_ms": result.runtime_ms,
    }
    with _open_text(sink, "w") as handle:
        handle.write(json.dumps(payload, indent=2))
        handle.write("\n")


def write_vector_csv(vec: EmbeddingVector, lm: LabelMap, sink: str | Path | IO[str]) -> None:
    """Write "node,value" rows: every nonzero for sparse vectors, every
    vertex for dense ones, values at 17 significant digits."""
    with _open_text(sink, "w") as handle:
        handle.write("node,value\n")
        if vec.is_sparse:
            for i, val in zip(*vec.nonzeros()):
                handle.write(f"{lm.external(int(i))},{FLOAT_FMT % val}\n")
        else:
            for i, val in enumerate(vec.values):
                handle.write(f"{lm.external(i)},{FLOAT_FMT % val}\n")


def read_vector_csv(source: str | Path | IO[str], lm: LabelMap) -> EmbeddingVector:
    """Read a "node,value" CSV back into a sparse vector over lm's ids."""
    entries: dict[int, float] = {}
    with _open_text(source) as handle:
        header = handle.readline().strip()
        if header != "node,value":
            raise InputError(f"expected header 'node,value', got {header!r}")
        for lineno, raw in enumerate(handle, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise InputError(f"line {lineno}: expected 'node,value'")
            i = lm.internal(parts[0])
            if i in entries:
                raise InputError(f"line {lineno}: duplicate node {parts[0]!r}")
            try:
                entries[i] = float(parts[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad value {parts[1]!r}") from None
    ids = np.array(sorted(entries), dtype=np.int64)
    vals = np.array([entries[i] for i in ids])
    return EmbeddingVector(n=len(lm), values=vals, indices=ids, kind="generic")
