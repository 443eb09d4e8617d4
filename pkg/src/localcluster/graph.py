"""Immutable weighted graph and the cut/volume/conductance algebra.

Everything downstream (flow refinement, spectral solvers, rounding,
oracles) consumes the representation defined here: compressed adjacency
with sorted neighbor lists, weighted degrees, and pure set functionals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError, InvalidSetError, ParameterError, SeedTooLargeError

__all__ = [
    "Graph",
    "NodeSet",
    "volume",
    "cut",
    "conductance",
    "expansion",
    "relative_conductance",
    "laplacian_apply",
]

# Comparisons on cut/volume arithmetic (denominator signs, tie detection)
# happen at this tolerance throughout the package.
SET_FUNCTIONAL_TOL = 1e-12


class Graph:
    """Undirected weighted graph in compressed sparse adjacency form.

    Neighbor lists are sorted by vertex id, weights are strictly positive
    64-bit floats, and the structure is immutable after construction.
    Instances are safe to share across threads.

    Parameters
    ----------
    indptr, indices, weights : ndarray
        Standard CSR-style arrays. Every undirected edge (i, j, w) must
        appear as both (i -> j, w) and (j -> i, w).
    """

    __slots__ = ("n", "indptr", "indices", "weights", "degrees", "total_volume")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, weights: np.ndarray):
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        weights = np.asarray(weights, dtype=np.float64)
        n = indptr.shape[0] - 1
        if n < 1:
            raise GraphFormatError("graph needs at least one vertex")
        if indices.shape != weights.shape:
            raise GraphFormatError("adjacency index/weight arrays disagree in length")
        if indptr[0] != 0 or indptr[-1] != indices.shape[0] or np.any(np.diff(indptr) < 0):
            raise GraphFormatError("malformed adjacency offsets")
        if indices.size and (indices.min() < 0 or indices.max() >= n):
            raise GraphFormatError("neighbor id out of range")
        if np.any(weights <= 0):
            raise GraphFormatError("edge weights must be strictly positive")

        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        if indices.size:
            deg = np.add.reduceat(weights, indptr[:-1])
            deg[np.diff(indptr) == 0] = 0.0
        else:
            deg = np.zeros(n)
        self.degrees = deg
        self.total_volume = float(deg.sum())

        for arr in (self.indptr, self.indices, self.weights, self.degrees):
            arr.setflags(write=False)
        self._check_symmetry()

    def _check_symmetry(self) -> None:
        for v in range(self.n):
            ids = self.indices[self.indptr[v] : self.indptr[v + 1]]
            if np.any(ids == v):
                raise GraphFormatError(f"self-loop at vertex {v}")
            if np.any(np.diff(ids) <= 0):
                raise GraphFormatError(f"neighbor list of vertex {v} not strictly sorted")
        # Arc multiset must be symmetric: match each arc with its reverse.
        if self.indices.size:
            src = np.repeat(np.arange(self.n), np.diff(self.indptr))
            order_fwd = np.lexsort((self.indices, src))
            order_rev = np.lexsort((src, self.indices))
            ok = (
                np.array_equal(src[order_fwd], self.indices[order_rev])
                and np.array_equal(self.indices[order_fwd], src[order_rev])
                and np.allclose(self.weights[order_fwd], self.weights[order_rev], rtol=0, atol=0)
            )
            if not ok:
                raise GraphFormatError("adjacency is not symmetric")

    @classmethod
    def from_edges(
        cls,
        n: int,
        u: Sequence[int] | np.ndarray,
        v: Sequence[int] | np.ndarray,
        w: Sequence[float] | np.ndarray | None = None,
    ) -> "Graph":
        """Build a graph from one row per undirected edge.

        Duplicate (u, v) pairs are rejected here; summing duplicates is an
        ingest policy and lives in the loader.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if w is None:
            w = np.ones(u.shape[0])
        w = np.asarray(w, dtype=np.float64)
        if not (u.shape == v.shape == w.shape):
            raise GraphFormatError("edge arrays disagree in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise GraphFormatError("edge endpoint out of range")
        if np.any(u == v):
            raise GraphFormatError("self-loops are not allowed")

        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        ww = np.concatenate([w, w])
        order = np.lexsort((dst, src))
        src, dst, ww = src[order], dst[order], ww[order]
        if src.size > 1:
            dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
            if np.any(dup):
                k = int(np.argmax(dup))
                raise GraphFormatError(f"duplicate edge ({src[k]}, {dst[k]})")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(indptr, dst, ww)

    # -- accessors ---------------------------------------------------------

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted neighbor ids of v and the matching edge weights."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def degree(self, v: int) -> float:
        return float(self.degrees[v])

    @property
    def edge_count(self) -> int:
        return self.indices.shape[0] // 2

    def has_edge(self, u: int, v: int) -> bool:
        ids, _ = self.neighbors(u)
        k = int(np.searchsorted(ids, v))
        return k < ids.shape[0] and ids[k] == v

    def edge_weight(self, u: int, v: int) -> float:
        ids, ws = self.neighbors(u)
        k = int(np.searchsorted(ids, v))
        if k < ids.shape[0] and ids[k] == v:
            return float(ws[k])
        return 0.0

    def is_connected(self) -> bool:
        return self.unreachable_witness() is None

    def unreachable_witness(self) -> tuple[int, int] | None:
        """None if connected, else (reached, unreached) vertex ids."""
        if self.n == 1:
            return None
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt: list[int] = []
            for v in frontier:
                ids = self.indices[self.indptr[v] : self.indptr[v + 1]]
                fresh = ids[~seen[ids]]
                if fresh.size:
                    seen[fresh] = True
                    nxt.extend(int(x) for x in fresh)
            frontier = nxt
        if seen.all():
            return None
        return 0, int(np.argmin(seen))


@dataclass(frozen=True)
class NodeSet:
    """A set of vertex ids with cached cut and volume statistics.

    Build with :meth:`of` to fill the cache; the raw constructor leaves the
    statistics unset for callers that only need membership.
    """

    ids: tuple[int, ...]
    cut_value: float | None = field(default=None, compare=False)
    volume: float | None = field(default=None, compare=False)

    @classmethod
    def of(cls, g: Graph, members: Iterable[int]) -> "NodeSet":
        arr = _as_node_array(g, members)
        return cls(
            ids=tuple(int(x) for x in arr),
            cut_value=cut(g, arr),
            volume=volume(g, arr),
        )

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __contains__(self, v: object) -> bool:
        return v in set(self.ids)

    def to_frozenset(self) -> frozenset[int]:
        return frozenset(self.ids)


def _as_node_array(g: Graph, s: object) -> np.ndarray:
    """Normalize a set-like argument to a sorted, validated id array."""
    if isinstance(s, NodeSet):
        arr = np.unique(np.asarray(s.ids, dtype=np.int64))
    elif isinstance(s, np.ndarray):
        arr = np.unique(s.astype(np.int64, copy=False))
    else:
        arr = np.unique(np.fromiter((int(v) for v in s), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        bad = arr[0] if arr[0] < 0 else arr[-1]
        raise InvalidSetError(f"vertex id {bad} out of range for n={g.n}")
    return arr


def volume(g: Graph, s: object) -> float:
    """Sum of weighted degrees over the set."""
    arr = _as_node_array(g, s)
    return float(g.degrees[arr].sum())


def cut(g: Graph, s: object) -> float:
    """Total weight of edges with exactly one endpoint in the set.

    Work is proportional to the volume of the set, not to the graph size.
    """
    arr = _as_node_array(g, s)
    if arr.size == 0 or arr.size == g.n:
        return 0.0
    mask = np.zeros(g.n, dtype=bool)
    mask[arr] = True
    total = 0.0
    for v in arr:
        lo, hi = g.indptr[v], g.indptr[v + 1]
        ids = g.indices[lo:hi]
        total += float(g.weights[lo:hi][~mask[ids]].sum())
    return total


def conductance(g: Graph, s: object) -> float:
    """cut(S) / min(vol(S), vol(S^c)); +inf on an empty side."""
    arr = _as_node_array(g, s)
    vol_s = float(g.degrees[arr].sum())
    vol_c = g.total_volume - vol_s
    denom = min(vol_s, vol_c)
    if denom <= 0.0:
        return float("inf")
    return cut(g, arr) / denom


def expansion(g: Graph, s: object) -> float:
    """cut(S) * vol(V) / (vol(S) * vol(S^c)); +inf on an empty side."""
    arr = _as_node_array(g, s)
    vol_s = float(g.degrees[arr].sum())
    vol_c = g.total_volume - vol_s
    if vol_s <= 0.0 or vol_c <= 0.0:
        return float("inf")
    return cut(g, arr) * g.total_volume / (vol_s * vol_c)


def relative_conductance(g: Graph, s: object, r: object, kappa: float = 1.0) -> float:
    """Conductance of S measured relative to a reference seed set R.

    Returns cut(S) / (vol(S & R) - ratio * kappa * vol(S - R)) where
    ratio = vol(R)/vol(R^c). The value is +inf whenever the denominator is
    not strictly positive (at tolerance), so the functional is always
    well-defined. kappa=1 is the plain seed-relative conductance; raising
    kappa penalizes leaving R harder, and kappa=+inf confines finite values
    to subsets of R, where the functional reduces to cut(S)/vol(S).

    Raises
    ------
    ParameterError
        If kappa < 1.
    SeedTooLargeError
        If R has an empty complement (the penalty ratio is undefined).
    """
    if not kappa >= 1.0:
        raise ParameterError(f"kappa must be >= 1 (got {kappa})")
    r_arr = _as_node_array(g, r)
    s_arr = _as_node_array(g, s)
    vol_r = float(g.degrees[r_arr].sum())
    vol_rc = g.total_volume - vol_r
    if vol_rc <= 0.0:
        raise SeedTooLargeError("seed set covers the whole graph")
    if s_arr.size == 0:
        return float("inf")

    in_r = np.zeros(g.n, dtype=bool)
    in_r[r_arr] = True
    vol_s_in = float(g.degrees[s_arr[in_r[s_arr]]].sum())
    vol_s_out = float(g.degrees[s_arr[~in_r[s_arr]]].sum())
    ratio = vol_r / vol_rc

    if np.isinf(kappa):
        denom = vol_s_in if vol_s_out == 0.0 else -float("inf")
    else:
        denom = vol_s_in - ratio * kappa * vol_s_out
    if denom <= SET_FUNCTIONAL_TOL:
        return float("inf")
    return cut(g, s_arr) / denom


def laplacian_apply(g: Graph, x: np.ndarray) -> np.ndarray:
    """Apply the graph Laplacian: (Lx)_i = d_i x_i - sum_j c_ij x_j."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise ParameterError(f"vector length {x.shape} does not match n={g.n}")
    if g.indices.size == 0:
        return np.zeros(g.n)
    contrib = g.weights * x[g.indices]
    sums = np.add.reduceat(contrib, g.indptr[:-1])
    sums[np.diff(g.indptr) == 0] = 0.0
    return g.degrees * x - sums
