"""Edge-list ingestion, adjacency construction, grid and summary export.

Edge lists follow the common plain-text convention: '#' comment lines, data
lines of two whitespace-separated non-negative integers. Node ids are
compacted to 0..n-1 in order of first appearance; self-loops register their
node id but contribute no edge; duplicate pairs are dropped.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .bench import SummaryRow

DEFAULT_MEM_CAP = 8 << 30  # bytes of dense adjacency allowed by default


class EdgeListParseError(ValueError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass
class EdgeList:
    n: int
    edges: np.ndarray  # (m, 2) int64 ordered pairs, deduplicated, no loops
    directed: bool = True


def parse_edge_list(source: Union[str, IO[str], Iterable[str]]) -> EdgeList:
    """Parse edge-list text from a string, file object or iterable of lines."""
    if isinstance(source, str):
        lines: Iterable[str] = io.StringIO(source)
    else:
        lines = source
    ids: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected two fields, got {len(parts)}")
        try:
            src, dst = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer node id in {line!r}") from None
        if src < 0 or dst < 0:
            raise EdgeListParseError(lineno, f"negative node id in {line!r}")
        for node in (src, dst):
            if node not in ids:
                ids[node] = len(ids)
        if src == dst:
            continue
        pair = (ids[src], ids[dst])
        if pair not in seen:
            seen.add(pair)
            edges.append(pair)
    if not edges:
        raise ValueError("edge list contains no edges")
    return EdgeList(n=len(ids), edges=np.asarray(edges, dtype=np.int64), directed=True)


def to_adjacency(
    edge_list: EdgeList,
    symmetrize: bool,
    mem_cap_bytes: int = DEFAULT_MEM_CAP,
) -> np.ndarray:
    """Dense binary adjacency matrix (uint8, zero diagonal)."""
    n = edge_list.n
    needed = n * n
    if needed > mem_cap_bytes:
        raise ValueError(
            f"dense {n}x{n} adjacency needs {needed} bytes, over the "
            f"{mem_cap_bytes}-byte memory cap"
        )
    adj = np.zeros((n, n), dtype=np.uint8)
    src, dst = edge_list.edges[:, 0], edge_list.edges[:, 1]
    adj[src, dst] = 1
    if symmetrize:
        adj[dst, src] = 1
    return adj


class PackedAdjacency:
    """Dense binary matrix stored bit-packed by row (8 entries per byte).

    Used for graphs too large for one byte per entry. Supports exactly what
    the estimation pipeline needs: degree computation and the degree-sorted
    block histogram.
    """

    def __init__(self, n: int, rows: np.ndarray):
        self.n = n
        self.rows = rows  # (n, ceil(n/8)) uint8

    @classmethod
    def from_edges(cls, edge_list: EdgeList, symmetrize: bool) -> "PackedAdjacency":
        n = edge_list.n
        width = (n + 7) // 8
        rows = np.zeros((n, width), dtype=np.uint8)
        src, dst = edge_list.edges[:, 0], edge_list.edges[:, 1]
        pairs = [(src, dst), (dst, src)] if symmetrize else [(src, dst)]
        for s, d in pairs:
            # big-endian bit order within each byte, matching np.unpackbits
            np.bitwise_or.at(rows, (s, d >> 3), (0x80 >> (d & 7)).astype(np.uint8))
        return cls(n=n, rows=rows)

    def degrees(self) -> np.ndarray:
        return np.bitwise_count(self.rows).sum(axis=1, dtype=np.int64)

    def sorted_block_histogram(self, perm: np.ndarray, h: int,
                               compensate_diagonal: bool = False) -> np.ndarray:
        """Block means of the permuted matrix, one block row at a time.

        Matches ``pipeline.block_histogram(apply_permutation(...), h)``
        including the diagonal-compensation option.
        """
        n = self.n
        if h < 1 or h > n:
            raise ValueError(f"binwidth must be in 1..{n}, got {h}")
        k = n // h
        perm = np.asarray(perm)
        cols = perm[: k * h]
        hist = np.empty((k, k), dtype=np.float64)
        for b in range(k):
            block_rows = self.rows[perm[b * h : (b + 1) * h]]
            dense = np.unpackbits(block_rows, axis=1, count=n)[:, cols]
            hist[b] = dense.reshape(h, k, h).sum(axis=(0, 2), dtype=np.int64)
        hist /= float(h * h)
        if compensate_diagonal and h > 1:
            idx = np.arange(k)
            hist[idx, idx] *= h / (h - 1.0)
        return hist


def shuffle_nodes(adj: np.ndarray, seed: int) -> np.ndarray:
    """Apply one uniformly random joint row/column permutation."""
    adj = np.asarray(adj)
    perm = np.random.default_rng(seed).permutation(adj.shape[0])
    return adj[np.ix_(perm, perm)]


def export_edge_list(adj: np.ndarray) -> str:
    """Serialize a binary adjacency matrix as edge-list text.

    A 'v v' line per node comes first so that readers compacting ids by first
    appearance reconstruct the original labelling (and isolated nodes
    survive); those lines parse as self-loops and add no edges. Every ordered
    pair with a 1 entry follows, so no symmetry flag is needed to round-trip.
    """
    adj = np.asarray(adj)
    n = adj.shape[0]
    src, dst = np.nonzero(adj)
    out = [f"# nodes {n} directed-edges {len(src)}"]
    out.extend(f"{i} {i}" for i in range(n))
    out.extend(f"{s} {d}" for s, d in zip(src, dst) if s != d)
    return "\n".join(out) + "\n"


def export_grid(grid: np.ndarray, fmt: str) -> bytes:
    """Serialize a grid as CSV (full-precision decimals) or binary PGM (P5)."""
    grid = np.asarray(grid, dtype=float)
    if fmt == "csv":
        lines = [",".join(format(v, ".17g") for v in row) for row in grid]
        return ("\n".join(lines) + "\n").encode("ascii")
    if fmt == "pgm":
        if grid.min() < 0.0 or grid.max() > 1.0:
            raise ValueError("PGM export requires values in [0, 1]")
        pixels = grid_to_pixels(grid)
        header = f"P5\n{grid.shape[1]} {grid.shape[0]}\n255\n".encode("ascii")
        return header + pixels.tobytes()
    raise ValueError(f"unknown grid format {fmt!r}; use 'csv' or 'pgm'")


def grid_to_pixels(grid: np.ndarray) -> np.ndarray:
    # round half up, not banker's rounding
    return np.floor(np.asarray(grid) * 255.0 + 0.5).astype(np.uint8)


def write_upsampled_pgm(path: str, grid: np.ndarray, h: int, n: int) -> None:
    """Write the PGM of the block-replicated n x n grid without materializing
    an n x n float array; byte-identical to export_grid(kron_upsample(...))."""
    grid = np.asarray(grid, dtype=float)
    k = grid.shape[0]
    if not (k * h <= n < (k + 1) * h):
        raise ValueError(f"target size {n} incompatible with k={k}, h={h}")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise ValueError("PGM export requires values in [0, 1]")
    pixels = np.repeat(np.repeat(grid_to_pixels(grid), h, axis=0), h, axis=1)
    pad = n - k * h
    if pad:
        pixels = np.pad(pixels, ((0, pad), (0, pad)), mode="edge")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{n} {n}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def summary_csv(rows: Sequence[SummaryRow]) -> str:
    out = ["graphon_id,n,estimator,trials,mean_mse,std_mse,mean_wall_ms"]
    for r in rows:
        out.append(
            f"{r.graphon_id},{r.n},{r.estimator},{r.trials},"
            f"{r.mean_mse:.12g},{r.std_mse:.12g},{r.mean_wall_ms:.6g}"
        )
    return "\n".join(out) + "\n"


def summary_json(rows: Sequence[SummaryRow]) -> str:
    payload = [
        {
            "graphon_id": r.graphon_id,
            "n": r.n,
            "estimator": r.estimator,
            "trials": r.trials,
            "mean_mse": r.mean_mse,
            "std_mse": r.std_mse,
            "mean_wall_ms": r.mean_wall_ms,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"
