"""Task files: JSON describing documents, references, gram order and budget.

Schema (``schema_version`` 1)::

    {
      "schema_version": 1,
      "name": "d30001",                        # optional
      "n": 1,
      "lmax": 100,
      "documents": [["sentence", ...], ...],   # or "document_files": [path, ...]
      "references": [["sentence", ...], ...],  # or "reference_files": [path, ...]
      "system": [0, 4, 7],                     # optional, for evaluate
      "preprocessing": {                       # all optional
        "stemming": true,
        "stopword_removal": null,              # null: on for n=1, off otherwise
        "stopwords": ["a", ...],               # or "stopwords_file": path
        "lowercase": true,
        "length": "raw",
        "reference_ngrams": "sentence"
      }
    }

Plain-text document and reference files hold one sentence per line; paths
are relative to the task file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .rouge import ReferenceBank
from .textprep import (PreprocessConfig, build_document_set, build_references, default_stopwords,
                       read_stopwords)

SCHEMA_VERSION = 1
_PREP_KEYS = {"stemming", "stopword_removal", "stopwords", "stopwords_file", "lowercase", "length",
              "reference_ngrams"}


class TaskError(ValueError):
    """Malformed task file; message names the offending field or position."""


@dataclass
class Task:
    name: str
    documents: list
    references: list
    n: int
    lmax: int
    config: PreprocessConfig
    system: list | None = None
    path: Path | None = None

    def build(self):
        """Preprocess and return ``(docset, bank)``."""
        docset = build_document_set(self.documents, self.config)
        refs = build_references(self.references, self.config)
        return docset, ReferenceBank.from_documents(docset, refs, self.config)


def _read_lines(path: Path) -> list[str]:
    return [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]


def _sentence_lists(obj: dict, key: str, base: Path) -> list:
    files_key = key[:-1] + "_files"
    if key in obj and files_key in obj:
        raise TaskError(f"give either '{key}' or '{files_key}', not both")
    if files_key in obj:
        files = obj[files_key]
        if not isinstance(files, list) or not all(isinstance(f, str) for f in files):
            raise TaskError(f"'{files_key}' must be a list of paths")
        return [_read_lines(base / f) for f in files]
    if key not in obj:
        raise TaskError(f"missing required field '{key}'")
    value = obj[key]
    if not isinstance(value, list):
        raise TaskError(f"'{key}' must be a list of sentence lists")
    for i, doc in enumerate(value):
        if not isinstance(doc, list) or not all(isinstance(s, str) for s in doc):
            raise TaskError(f"'{key}[{i}]' must be a list of sentence strings")
    return value


def _int_field(obj: dict, key: str, minimum: int, override: int | None) -> int:
    if override is not None:
        value = override
    elif key in obj:
        value = obj[key]
    else:
        raise TaskError(f"missing required field '{key}'")
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise TaskError(f"'{key}' must be an integer >= {minimum}, got {value!r}")
    return value


def parse_task(obj: Any, base: Path = Path("."), *, name: str = "task", n: int | None = None,
               lmax: int | None = None, prep_overrides: dict | None = None) -> Task:
    """Validate a decoded task object and resolve file references against ``base``."""
    if not isinstance(obj, dict):
        raise TaskError("task must be a JSON object")
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise TaskError(f"unsupported schema_version {version!r}")
    documents = _sentence_lists(obj, "documents", base)
    references = _sentence_lists(obj, "references", base)
    if not any(s.strip() for doc in documents for s in doc):
        raise TaskError("'documents' contains no sentence")
    if not references or not all(any(s.strip() for s in r) for r in references):
        raise TaskError("'references' must hold at least one reference, each with a sentence")
    order = _int_field(obj, "n", 1, n)
    budget = _int_field(obj, "lmax", 1, lmax)

    prep = obj.get("preprocessing", {})
    if not isinstance(prep, dict):
        raise TaskError("'preprocessing' must be an object")
    unknown = set(prep) - _PREP_KEYS
    if unknown:
        raise TaskError(f"unknown preprocessing field(s): {', '.join(sorted(unknown))}")
    prep = {**prep, **(prep_overrides or {})}
    if prep.get("stopwords_file"):
        stopwords = read_stopwords(base / prep["stopwords_file"])
    elif prep.get("stopwords") is not None:
        if not isinstance(prep["stopwords"], list):
            raise TaskError("'preprocessing.stopwords' must be a list of words")
        stopwords = frozenset(w.lower() for w in prep["stopwords"])
    else:
        stopwords = default_stopwords()
    removal = prep.get("stopword_removal")
    try:
        config = PreprocessConfig(
            n=order,
            stemming=bool(prep.get("stemming", True)),
            stopword_removal=(order == 1) if removal is None else bool(removal),
            stopwords=stopwords,
            lowercase=bool(prep.get("lowercase", True)),
            length=prep.get("length", "raw"),
            reference_ngrams=prep.get("reference_ngrams", "sentence"),
        )
    except ValueError as e:
        raise TaskError(f"preprocessing: {e}") from None

    system = obj.get("system")
    if system is not None and (not isinstance(system, list) or not all(isinstance(i, int) for i in system)):
        raise TaskError("'system' must be a list of sentence ids")
    return Task(str(obj.get("name", name)), documents, references, order, budget, config, system)


def load_task(path: str | Path, **overrides) -> Task:
    """Read and validate a task file. Raises :class:`TaskError` with the
    JSON line/column on syntax errors, ``OSError`` on I/O failure."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise TaskError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    try:
        task = parse_task(obj, path.parent, name=path.stem, **overrides)
    except TaskError as e:
        raise TaskError(f"{path}: {e}") from None
    task.path = path
    return task


def task_paths(inputs) -> list[Path]:
    """Expand directories to their ``*.json`` files, sorted by name."""
    out = []
    for p in map(Path, inputs):
        if p.is_dir():
            out.extend(sorted(p.glob("*.json")))
        else:
            out.append(p)
    return out
