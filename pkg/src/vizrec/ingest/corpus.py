"""Corpus records: one JSON document per visualization.

A record associates three objects under bit-exact key names: ``data``
(column name -> cell list), ``specification`` (trace list), and ``layout``
(opaque display configuration, preserved verbatim). Records missing any of
the three objects, or whose specification has no traces, are skipped and
counted rather than failing the whole load.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataError, ParseError
from .table import Dataset, dataset_from_cells

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("fid", "user_id", "data", "specification", "layout")


@dataclass(frozen=True)
class CorpusRecord:
    """One dataset-visualization pair."""

    fid: str
    user_id: str
    data: Dataset
    specification: tuple[dict, ...]
    layout: dict

    def __post_init__(self):
        if len(self.specification) < 1:
            raise DataError(f"record {self.fid!r}: specification contains no traces")


@dataclass
class Corpus:
    """A list of records plus provenance about where they came from."""

    records: list[CorpusRecord]
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def parse_record(document: str | bytes | dict) -> CorpusRecord:
    """Parse one record document, validating the three-object shape."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(document, dict):
        raise DataError("record document must be a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in document]
    if missing:
        raise DataError(f"record missing required keys: {', '.join(missing)}")
    data = document["data"]
    if not isinstance(data, dict) or not data:
        raise DataError("record `data` must be a non-empty object of column -> cells")
    spec = document["specification"]
    if isinstance(spec, dict):
        spec = spec.get("traces", [])
    if not isinstance(spec, list) or len(spec) == 0:
        raise DataError("record `specification` contains no traces")
    fid = str(document["fid"])
    dataset = dataset_from_cells(fid, [(name, cells) for name, cells in data.items()])
    layout = document["layout"]
    return CorpusRecord(
        fid=fid,
        user_id=str(document["user_id"]),
        data=dataset,
        specification=tuple(dict(t) for t in spec),
        layout=layout if isinstance(layout, dict) else {},
    )


def record_to_document(record: CorpusRecord) -> dict:
    """Inverse of parse_record, used by the synthetic corpus writer."""
    data = {}
    for col in record.data.columns:
        data[col.name] = [None if m else v if not hasattr(v, "isoformat") else v.isoformat() for v, m in zip(col.parsed_values, col.missing_mask)]
    return {
        "fid": record.fid,
        "user_id": record.user_id,
        "data": data,
        "specification": list(record.specification),
        "layout": record.layout,
    }


def load_corpus(path: str | Path) -> Corpus:
    """Load every parseable record file under ``path``.

    Skipped records are logged with reasons and counted in the corpus
    provenance; duplicate fids keep the first occurrence.
    """
    root = Path(path)
    if not root.is_dir():
        raise DataError(f"corpus directory not readable: {root}")
    records: list[CorpusRecord] = []
    skipped: list[dict] = []
    seen_fids: set[str] = set()
    files = sorted(root.glob("*.json"))
    if not files:
        logger.warning("corpus directory %s contains no record files", root)
    for file in files:
        try:
            record = parse_record(file.read_text(encoding="utf-8"))
        except DataError as exc:
            logger.warning("skipping %s: %s", file.name, exc)
            skipped.append({"file": file.name, "reason": str(exc)})
            continue
        if record.fid in seen_fids:
            logger.warning("skipping %s: duplicate fid %s", file.name, record.fid)
            skipped.append({"file": file.name, "reason": f"duplicate fid {record.fid}"})
            continue
        seen_fids.add(record.fid)
        records.append(record)
    return Corpus(
        records=records,
        provenance={
            "source": str(root),
            "files_seen": len(files),
            "records_loaded": len(records),
            "records_skipped": len(skipped),
            "skipped": skipped,
        },
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write one JSON record file per record, named by fid."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    for record in corpus.records:
        out = root / f"{record.fid}.json"
        out.write_text(json.dumps(record_to_document(record), sort_keys=True), encoding="utf-8")
