"""Adapter stub for third-party commentary dumps.

Upstream datasets arrive in assorted layouts; this module normalizes them to
the five-column TSV contract (game id, FEN before the move, UCI move,
category label, comment text) consumed by `load_commentary_dataset`. Plug in
a `RowAdapter` for the source format; `csv_adapter` covers simple delimited
files whose columns can be mapped by index.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

# Maps one upstream record to (game_id, fen, uci, category, text), or None to
# drop it.
RowAdapter = Callable[[Sequence[str]], tuple[str, str, str, str, str] | None]


def csv_adapter(game_id: int, fen: int, move: int, category: int,
                text: int) -> RowAdapter:
    """Adapter selecting columns by index from a delimited row."""

    def adapt(row: Sequence[str]):
        try:
            return (row[game_id], row[fen], row[move], row[category], row[text])
        except IndexError:
            return None
    return adapt


def convert_rows(rows: Iterable[Sequence[str]],
                 adapter: RowAdapter) -> Iterator[str]:
    """Yield normalized TSV lines; tabs/newlines inside fields are flattened."""
    for row in rows:
        mapped = adapter(row)
        if mapped is None:
            continue
        cleaned = [" ".join(str(field).split()) for field in mapped]
        yield "\t".join(cleaned)


def convert_csv_file(src: str | Path, dest: str | Path, adapter: RowAdapter,
                     delimiter: str = ",", skip_header: bool = False) -> int:
    """Convert a delimited file to the TSV contract; returns rows written."""
    written = 0
    with open(src, newline="", encoding="utf-8") as fh, \
            open(dest, "w", encoding="utf-8") as out:
        reader = csv.reader(fh, delimiter=delimiter)
        if skip_header:
            next(reader, None)
        for line in convert_rows(reader, adapter):
            out.write(line + "\n")
            written += 1
    return written
