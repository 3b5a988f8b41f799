"""Accessors for data files shipped with the package."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .model import AutonomyModel, parse_model


def _data_text(name: str) -> str:
    return (resources.files("axv_explain") / "data" / name).read_text(encoding="utf-8")


def demo_model_source() -> str:
    """DSL text of the demo surfacing/GPS model."""
    return _data_text("demo.axm")


def demo_model() -> AutonomyModel:
    return parse_model(demo_model_source(), model_name="demo", version="1")


@dataclass(frozen=True)
class CorpusRow:
    utterance: str
    intent: str  # why | why_not | status | unknown
    behavior: str | None


def query_corpus() -> list[CorpusRow]:
    """Canonical operator utterances with expected intent and behavior."""
    rows = []
    for line in _data_text("queries.tsv").splitlines():
        if not line.strip():
            continue
        utterance, intent, behavior = line.split("\t")
        rows.append(CorpusRow(utterance, intent, None if behavior == "-" else behavior))
    return rows
