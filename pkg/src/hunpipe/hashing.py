"""Deterministic feature hashing and word-shape features.

The embedding tables are indexed by a fixed 64-bit FNV-1a hash of the
table name joined with the feature string, so lookups depend only on the
string and the table size: stable across runs, platforms, and processes.
"""

from __future__ import annotations

from functools import lru_cache

HASH_ID = "fnv1a-64"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a over raw bytes."""
    value = _FNV_OFFSET
    for byte in data:
        value ^= byte
        value = (value * _FNV_PRIME) & _MASK
    return value


@lru_cache(maxsize=262144)
def feature_row(table: str, feature: str, rows: int) -> int:
    """Row index of ``feature`` in the named hash-embedding table."""
    return fnv1a_64(table.encode("utf-8") + b"\x1f" + feature.encode("utf-8")) % rows


@lru_cache(maxsize=131072)
def shape_of(text: str) -> str:
    """Word shape: X/x/d for upper/lower/digit, other characters verbatim.

    Runs of the same output symbol are truncated at four, so "Kovács"
    maps to "Xxxxx" and long digit strings stay bounded.
    """
    out: list[str] = []
    run_char = ""
    run_len = 0
    for ch in text:
        if ch.isdigit():
            sym = "d"
        elif ch.isupper():
            sym = "X"
        elif ch.islower():
            sym = "x"
        else:
            sym = ch
        if sym == run_char:
            run_len += 1
            if run_len > 4:
                continue
        else:
            run_char = sym
            run_len = 1
        out.append(sym)
    return "".join(out)
