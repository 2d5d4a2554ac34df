"""Monte Carlo replica runner.

Replicas are generated in fixed-size chunks; chunk boundaries and worker
count never change any replica's stream (see :mod:`graphsurface.ensemble`),
and chunk results are concatenated in replica order, so output is identical
for any ``threads`` value.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .counting import batch_counts
from .ensemble import EnsembleSpec, sample_masks
from .motif import Motif

THREADS_ENV = "GRAPHSURFACE_THREADS"
_CELL_BUDGET = 16_000_000


@dataclass
class ReplicaBlock:
    """Per-replica statistics for replicas ``start .. start + len - 1``."""

    start: int
    edges: np.ndarray
    counts: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.edges)


def resolve_threads(threads: int | None) -> int:
    if threads is None or threads == 0:
        env = os.environ.get(THREADS_ENV)
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError("threads must be >= 0")
    return threads


def chunk_size(n: int) -> int:
    return int(max(1, min(2048, _CELL_BUDGET // max(1, n * n))))


def _run_chunk(args) -> ReplicaBlock:
    spec, motifs, seed, start, stop = args
    masks = sample_masks(spec, seed, start, stop)
    counts = batch_counts(masks, spec.n, motifs)
    edges = counts.pop("edges")
    return ReplicaBlock(start, edges, counts)


def run_replicas(
    spec: EnsembleSpec,
    motifs: list[Motif],
    replicas: int,
    seed: int,
    threads: int | None = 1,
    first_replica: int = 0,
) -> ReplicaBlock:
    """Sample ``replicas`` graphs from ``spec`` and count edges and every motif."""
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    step = chunk_size(spec.n)
    jobs = [
        (spec, motifs, seed, lo, min(lo + step, first_replica + replicas))
        for lo in range(first_replica, first_replica + replicas, step)
    ]
    workers = min(resolve_threads(threads), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]
    labels = [m.label() for m in motifs]
    return ReplicaBlock(
        first_replica,
        np.concatenate([part.edges for part in parts]),
        {key: np.concatenate([part.counts[key] for part in parts]) for key in labels},
    )
