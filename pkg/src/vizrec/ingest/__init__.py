"""Tabular and corpus ingestion."""

from .client import CorpusClient, fetch_corpus_page
from .corpus import Corpus, CorpusRecord, load_corpus, parse_record, record_to_document, save_corpus
from .table import (
    Column,
    Dataset,
    build_column,
    dataset_from_cells,
    infer_column_type,
    parse_table,
    serialize_table,
)

__all__ = [
    "Column",
    "Corpus",
    "CorpusClient",
    "CorpusRecord",
    "Dataset",
    "build_column",
    "dataset_from_cells",
    "fetch_corpus_page",
    "infer_column_type",
    "load_corpus",
    "parse_record",
    "parse_table",
    "record_to_document",
    "save_corpus",
    "serialize_table",
]
