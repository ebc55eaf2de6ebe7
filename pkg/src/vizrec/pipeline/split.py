"""Splits, folds and class balancing.

Splitting is stratified by label and grouped by provenance: all rows
sharing a provenance id land in the same split, so near-duplicate columns
of one dataset can never straddle train and test. Balancing happens after
splitting, independently per split, by sampling minority classes with
replacement up to the majority count; duplicated rows therefore never
cross splits either.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._rng import substream
from ..errors import DataError
from .tasks import TaskDataset

SPLIT_NAMES = ("train", "validation", "test")


@dataclass(frozen=True)
class SplitPlan:
    """Seeded recipe for the 60/20/20 split and the 5-fold assignment."""

    seed: int = 0
    fractions: tuple[float, float, float] = (0.6, 0.2, 0.2)
    fold_count: int = 5

    def __post_init__(self):
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


def _integer_targets(total: int, fractions) -> list[int]:
    # Largest-remainder apportionment; remainders tie-break in split order.
    raw = [total * f for f in fractions]
    floors = [int(np.floor(r)) for r in raw]
    remainder = total - sum(floors)
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - floors[i]), i))
    for i in order[:remainder]:
        floors[i] += 1
    return floors


def _group_table(dataset: TaskDataset) -> list[tuple[str, list[int], str]]:
    """(group id, row indices, modal label) in first-appearance order."""
    groups: dict[str, list[int]] = {}
    order: list[str] = []
    for i, gid in enumerate(dataset.group_ids()):
        if gid not in groups:
            groups[gid] = []
            order.append(gid)
        groups[gid].append(i)
    table = []
    vocab = list(dataset.task.classes)
    for gid in order:
        rows = groups[gid]
        counts = [sum(1 for r in rows if dataset.labels[r] == c) for c in vocab]
        modal = vocab[int(np.argmax(counts))]
        table.append((gid, rows, modal))
    return table


def split_indices(dataset: TaskDataset, plan: SplitPlan) -> dict[str, np.ndarray]:
    """Assign every row to train/validation/test.

    Group-aware and stratified by the group's modal label; raises if any
    class ends up absent from any split.
    """
    table = _group_table(dataset)
    rng = substream(plan.seed, "split")
    assigned: dict[str, list[int]] = {name: [] for name in SPLIT_NAMES}
    for label in dataset.task.classes:
        stratum = [entry for entry in table if entry[2] == label]
        if not stratum:
            continue
        order = rng.permutation(len(stratum))
        total_rows = sum(len(stratum[i][1]) for i in range(len(stratum)))
        targets = dict(zip(SPLIT_NAMES, _integer_targets(total_rows, plan.fractions)))
        filled = {name: 0 for name in SPLIT_NAMES}
        for i in order:
            _, rows, _ = stratum[i]
            name = max(SPLIT_NAMES, key=lambda s: targets[s] - filled[s])
            assigned[name].extend(rows)
            filled[name] += len(rows)

    out = {name: np.array(sorted(rows), dtype=int) for name, rows in assigned.items()}
    for name in SPLIT_NAMES:
        present = set(dataset.labels[out[name]]) if out[name].size else set()
        missing = set(dataset.task.classes) - present
        if missing:
            raise DataError(
                f"re-stratify: class(es) {sorted(missing)} absent from the {name} split; "
                f"class counts {dataset.class_counts()}, groups {len(table)}"
            )
    return out


def oversample_indices(labels: np.ndarray, classes, rng) -> np.ndarray:
    """Indices that balance every class up to the majority count.

    Original rows are kept once, in order; extras are drawn with
    replacement per class, appended in vocabulary order.
    """
    counts = {c: int((labels == c).sum()) for c in classes}
    majority = max(counts.values())
    extras: list[np.ndarray] = []
    for c in classes:
        short = majority - counts[c]
        if short <= 0:
            continue
        pool = np.nonzero(labels == c)[0]
        extras.append(pool[rng.integers(0, pool.size, size=short)])
    base = np.arange(labels.size)
    if extras:
        return np.concatenate([base, *extras])
    return base


def split_and_balance(dataset: TaskDataset, plan: SplitPlan) -> dict[str, TaskDataset]:
    """Split first, then oversample each split independently."""
    parts = split_indices(dataset, plan)
    out: dict[str, TaskDataset] = {}
    for name in SPLIT_NAMES:
        part = dataset.take(parts[name])
        rng = substream(plan.seed, "oversample", name)
        out[name] = part.take(oversample_indices(part.labels, dataset.task.classes, rng))
    return out


def make_folds(n_rows: int, k: int = 5, seed: int = 0) -> list[np.ndarray]:
    """k disjoint row folds covering everything, sizes differing by at most 1."""
    if n_rows < k:
        raise DataError(f"cannot build {k} folds from {n_rows} rows")
    perm = substream(seed, "folds").permutation(n_rows)
    sizes = [n_rows // k + (1 if i < n_rows % k else 0) for i in range(k)]
    folds = []
    start = 0
    for size in sizes:
        folds.append(np.sort(perm[start : start + size]))
        start += size
    return folds


def stratified_two_way(labels: np.ndarray, classes, fraction_first: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Row-level stratified split into two parts (used for train/validation)."""
    first: list[int] = []
    second: list[int] = []
    for c in classes:
        pool = np.nonzero(labels == c)[0]
        pool = pool[rng.permutation(pool.size)]
        cut = int(round(pool.size * fraction_first))
        cut = min(max(cut, 1 if pool.size > 1 else pool.size), pool.size - 1 if pool.size > 1 else pool.size)
        first.extend(pool[:cut].tolist())
        second.extend(pool[cut:].tolist())
    return np.array(sorted(first), dtype=int), np.array(sorted(second), dtype=int)
