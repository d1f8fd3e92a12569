"""Static word vectors in the plain text format: header "count dim",
then one "token v1 ... vdim" line per word."""

from __future__ import annotations

import numpy as np

from .errors import ParseError


class StaticVectors:
    """Read-only pretrained vector table; absent tokens map to zeros."""

    def __init__(self, dim: int, table: dict[str, np.ndarray] | None = None,
                 case_fallback: bool = True):
        self.dim = dim
        self.table = table or {}
        self.case_fallback = case_fallback
        self._zero = np.zeros(dim, dtype=np.float32)
        for key, vec in self.table.items():
            if vec.shape != (dim,):
                raise ValueError(f"vector for {key!r} has shape {vec.shape}, want ({dim},)")

    def lookup(self, token: str) -> np.ndarray:
        vec = self.table.get(token)
        if vec is None and self.case_fallback:
            vec = self.table.get(token.lower())
        return vec if vec is not None else self._zero

    def __len__(self) -> int:
        return len(self.table)


def parse_word_vectors(text: str, case_fallback: bool = True) -> StaticVectors:
    lines = text.split("\n")
    header = lines[0].split()
    if len(header) != 2 or not all(p.isdigit() for p in header):
        raise ParseError("expected header 'count dim'", line=1)
    count, dim = int(header[0]), int(header[1])
    table: dict[str, np.ndarray] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.rstrip().split(" ")
        if len(parts) != dim + 1:
            raise ParseError(
                f"expected token plus {dim} values, found {len(parts)} fields", line=line_no
            )
        table[parts[0]] = np.asarray([float(v) for v in parts[1:]], dtype=np.float32)
    if len(table) != count:
        raise ParseError(f"header promised {count} vectors, file has {len(table)}")
    return StaticVectors(dim=dim, table=table, case_fallback=case_fallback)


def load_word_vectors(path, case_fallback: bool = True) -> StaticVectors:
    with open(path, encoding="utf-8") as handle:
        return parse_word_vectors(handle.read(), case_fallback=case_fallback)


def write_word_vectors(vectors: StaticVectors, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(vectors.table)} {vectors.dim}\n")
        for token, vec in vectors.table.items():
            values = " ".join(repr(float(v)) for v in vec)
            handle.write(f"{token} {values}\n")
