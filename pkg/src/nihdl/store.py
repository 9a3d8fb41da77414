"""Corpus persistence: a corpus is a plain directory.

Layout: ``<root>/catalog.nihc``, ``<root>/descriptions/*.nihd`` and the
generated ``<root>/index.tsv`` (UTF-8, LF, tab-separated). Description
files are discovered in lexicographic order, parse failures never abort
the load of other files, and the index is written atomically (temp file
plus rename), so repeated runs on an unchanged corpus are byte-identical.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import dsl
from .analyze import completeness, pattern_histogram
from .diagnostics import Diagnostic
from .taxonomy import PatternCatalog

CATALOG_FILE_NAME = "catalog.nihc"
DESCRIPTIONS_DIR_NAME = "descriptions"
INDEX_FILE_NAME = "index.tsv"

INDEX_HEADER = ("file", "method", "source", "year", "pattern", "score")


class StoreError(Exception):
    pass


class MissingDirectoryError(StoreError):
    pass


class MissingCatalogError(StoreError):
    pass


@dataclass(frozen=True)
class Corpus:
    root: Path
    catalog_file: Path
    description_files: tuple[Path, ...]


def open_corpus(directory: str | Path) -> Corpus:
    """Discover a corpus directory's files, sorted for determinism."""
    root = Path(directory)
    if not root.is_dir():
        raise MissingDirectoryError(f"not a corpus directory: {root}")
    descriptions_dir = root / DESCRIPTIONS_DIR_NAME
    files: tuple[Path, ...] = ()
    if descriptions_dir.is_dir():
        files = tuple(
            sorted(
                (p for p in descriptions_dir.iterdir()
                 if p.is_file() and p.suffix == dsl.DESCRIPTION_SUFFIX),
                key=lambda p: p.name,
            )
        )
    return Corpus(
        root=root,
        catalog_file=root / CATALOG_FILE_NAME,
        description_files=files,
    )


def load_catalog(corpus: Corpus) -> tuple[PatternCatalog | None, list[Diagnostic]]:
    """Parse the corpus catalog; absence of the file is MissingCatalogError."""
    if not corpus.catalog_file.is_file():
        raise MissingCatalogError(f"no catalog file at {corpus.catalog_file}")
    return read_catalog_file(corpus.catalog_file)


def read_catalog_file(path: str | Path) -> tuple[PatternCatalog | None, list[Diagnostic]]:
    path = Path(path)
    text, diag = _read_text(path)
    if diag is not None:
        return None, [diag]
    return dsl.parse_catalog(text, str(path))


def read_description_file(path: str | Path) -> tuple[dsl.Document | None, list[Diagnostic]]:
    path = Path(path)
    text, diag = _read_text(path)
    if diag is not None:
        return None, [diag]
    return dsl.parse_description(text, str(path))


def _read_text(path: Path) -> tuple[str, None] | tuple[None, Diagnostic]:
    try:
        return path.read_text(encoding="utf-8"), None
    except (OSError, UnicodeDecodeError) as exc:
        return None, Diagnostic("E007", f"cannot read {path}: {exc}")


def load_all(corpus: Corpus) -> tuple[list[dsl.Document], list[Diagnostic]]:
    """Parse every description file; failures become diagnostics, not aborts."""
    documents: list[dsl.Document] = []
    diagnostics: list[Diagnostic] = []
    for path in corpus.description_files:
        document, diags = read_description_file(path)
        diagnostics.extend(diags)
        if document is not None:
            documents.append(document)
    return documents, diagnostics


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over."""
    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def build_index(
    corpus: Corpus, catalog: PatternCatalog
) -> tuple[list[tuple[str, ...]], list[Diagnostic]]:
    """Write ``index.tsv``: one row per method with its completeness score.

    Returns the data rows and any parse/resolution diagnostics. Methods
    from files that fail to parse are absent from the index.
    """
    documents, diagnostics = load_all(corpus)
    rows: list[tuple[str, ...]] = []
    methods = []
    for document in documents:
        relative = Path(document.source_file)
        try:
            relative = relative.relative_to(corpus.root)
        except ValueError:
            pass
        for method in document.methods:
            methods.append(method)
            score = completeness(method).aggregate
            rows.append(
                (
                    relative.as_posix(),
                    method.name,
                    method.source if method.source is not None else "-",
                    str(method.year) if method.year is not None else "-",
                    method.pattern.path.text,
                    f"{float(score):.3f}",
                )
            )
    _, _, resolution_diags = pattern_histogram(methods, catalog)
    diagnostics.extend(resolution_diags)
    lines = ["\t".join(INDEX_HEADER)]
    lines.extend("\t".join(row) for row in rows)
    atomic_write_text(corpus.root / INDEX_FILE_NAME, "\n".join(lines) + "\n")
    return rows, diagnostics
