"""Corpus deduplication.

Exact mode drops byte-identical datasets (column names plus raw cells),
keeping one seeded-random representative per group. Per-user mode then
keeps one seeded-random dataset per user, which also removes the bias
toward prolific users. Both are idempotent for a fixed seed.
"""

from __future__ import annotations

import hashlib

from .._rng import substream
from ..ingest import Corpus, CorpusRecord


def dataset_fingerprint(dataset) -> str:
    h = hashlib.sha256()
    for col in dataset.columns:
        h.update(col.name.encode("utf-8"))
        h.update(b"\x00")
        for cell in col.raw_values:
            h.update(cell.encode("utf-8"))
            h.update(b"\x01")
        h.update(b"\x02")
    return h.hexdigest()


def deduplicate(corpus: Corpus, mode: str = "per_user", seed: int = 0) -> Corpus:
    """Return a new corpus with duplicates removed.

    ``exact`` removes byte-identical datasets; ``per_user`` additionally
    keeps a single dataset per user id.
    """
    if mode not in ("exact", "per_user"):
        raise ValueError(f"unknown dedup mode {mode!r}")

    groups: dict[str, list[CorpusRecord]] = {}
    order: list[str] = []
    for record in corpus.records:
        key = dataset_fingerprint(record.data)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(record)
    rng = substream(seed, "dedup", "exact")
    kept = [groups[key][int(rng.integers(len(groups[key])))] for key in order]

    if mode == "per_user":
        by_user: dict[str, list[CorpusRecord]] = {}
        user_order: list[str] = []
        for record in kept:
            if record.user_id not in by_user:
                by_user[record.user_id] = []
                user_order.append(record.user_id)
            by_user[record.user_id].append(record)
        rng = substream(seed, "dedup", "per_user")
        kept = [by_user[u][int(rng.integers(len(by_user[u])))] for u in user_order]

    provenance = dict(corpus.provenance)
    provenance["dedup"] = {
        "mode": mode,
        "seed": seed,
        "before": len(corpus.records),
        "after": len(kept),
    }
    return Corpus(records=kept, provenance=provenance)
