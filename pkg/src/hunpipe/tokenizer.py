"""Rule-based tokenizer: whitespace split, then iterative affix stripping.

Each whitespace-delimited chunk is reduced in a loop: exception and
abbreviation lookups first, then the longest matching prefix pattern is
split off the front, then the longest matching suffix pattern off the
back, until no rule fires. Hyphens are never split points, so suffixed
numerals like "2021-ben" stay whole. Character offsets and trailing
whitespace are recorded so the token sequence always reconstructs the
input text exactly.

Patterns are literal strings, or single-character classes written
"[abc]" / "[0-9]". Besides the abbreviation table, chunks shaped like
numeric or Roman-numeral ordinals ("3.", "XIV.") keep their period; this
is table-driven Hungarian orthography that no finite list could cover
(disable via ``keep_numeric_ordinals``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .doc import AnnotatedDoc, Token
from .errors import ParseError

_CHUNK = re.compile(r"\S+")
_ROMAN = frozenset("IVXLCDM")


def _abbrev_key(chunk: str) -> str:
    """Abbreviation matching is case-insensitive on the first letter only."""
    return chunk[0].lower() + chunk[1:] if chunk else chunk


class _Pattern:
    """A literal or a one-character class, matchable at either chunk end."""

    __slots__ = ("literal", "chars")

    def __init__(self, spec: str):
        if len(spec) > 2 and spec.startswith("[") and spec.endswith("]"):
            self.literal = None
            chars = set()
            inner = spec[1:-1]
            i = 0
            while i < len(inner):
                if i + 2 < len(inner) and inner[i + 1] == "-":
                    chars.update(chr(c) for c in range(ord(inner[i]), ord(inner[i + 2]) + 1))
                    i += 3
                else:
                    chars.add(inner[i])
                    i += 1
            self.chars = frozenset(chars)
        else:
            self.literal = spec
            self.chars = None

    def match_start(self, chunk: str) -> int:
        if self.literal is not None:
            return len(self.literal) if chunk.startswith(self.literal) else 0
        return 1 if chunk and chunk[0] in self.chars else 0

    def match_end(self, chunk: str) -> int:
        if self.literal is not None:
            return len(self.literal) if chunk.endswith(self.literal) else 0
        return 1 if chunk and chunk[-1] in self.chars else 0


@dataclass(frozen=True)
class TokenizerRules:
    """Immutable rule set; see the module docstring for semantics."""

    prefix_patterns: tuple[str, ...] = ()
    suffix_patterns: tuple[str, ...] = ()
    exceptions: dict[str, tuple[str, ...]] = field(default_factory=dict)
    abbreviations: frozenset[str] = frozenset()
    keep_numeric_ordinals: bool = True

    def __post_init__(self):
        for abbr in self.abbreviations:
            if not abbr.endswith("."):
                raise ValueError(f"abbreviation {abbr!r} does not end with '.'")
        norm_abbrevs = frozenset(_abbrev_key(a) for a in self.abbreviations)
        object.__setattr__(self, "abbreviations", norm_abbrevs)
        for chunk, parts in self.exceptions.items():
            if "".join(parts) != chunk:
                raise ValueError(f"exception for {chunk!r} does not concatenate back")
            if any(not p for p in parts):
                raise ValueError(f"exception for {chunk!r} contains an empty token")
        object.__setattr__(self, "_prefixes", tuple(_Pattern(p) for p in self.prefix_patterns))
        object.__setattr__(self, "_suffixes", tuple(_Pattern(p) for p in self.suffix_patterns))

    def _protected(self, chunk: str) -> bool:
        if _abbrev_key(chunk) in self.abbreviations:
            return True
        if self.keep_numeric_ordinals and len(chunk) > 1 and chunk.endswith("."):
            body = chunk[:-1]
            if body.isdecimal() or all(c in _ROMAN for c in body):
                return True
        return False


def _split_chunk(chunk: str, rules: TokenizerRules) -> list[str]:
    left: list[str] = []
    middle: list[str] = []
    right: list[str] = []
    rest = chunk
    while rest:
        if rest in rules.exceptions:
            middle = list(rules.exceptions[rest])
            break
        if rules._protected(rest):
            middle = [rest]
            break
        plen = max((p.match_start(rest) for p in rules._prefixes), default=0)
        if plen:
            left.append(rest[:plen])
            rest = rest[plen:]
            continue
        slen = max((p.match_end(rest) for p in rules._suffixes), default=0)
        if slen:
            right.append(rest[len(rest) - slen:])
            rest = rest[: len(rest) - slen]
            continue
        middle = [rest]
        break
    return left + middle + list(reversed(right))


def tokenize(text: str, rules: TokenizerRules) -> AnnotatedDoc:
    """Tokenize ``text``; total over any input, zero tokens for empty text."""
    tokens: list[Token] = []
    matches = list(_CHUNK.finditer(text))
    leading_ws = text[: matches[0].start()] if matches else text
    for m_idx, match in enumerate(matches):
        chunk = match.group()
        ws_end = matches[m_idx + 1].start() if m_idx + 1 < len(matches) else len(text)
        following_ws = text[match.end() : ws_end]
        parts = _split_chunk(chunk, rules)
        pos = match.start()
        for p_idx, part in enumerate(parts):
            last = p_idx == len(parts) - 1
            tokens.append(
                Token(
                    index=len(tokens),
                    text=part,
                    char_start=pos,
                    char_end=pos + len(part),
                    trailing_ws=following_ws if last else "",
                    is_sent_start=True if len(tokens) == 0 else None,
                )
            )
            pos += len(part)
    return AnnotatedDoc(source_text=text, tokens=tuple(tokens), leading_ws=leading_ws)


_SECTIONS = ("prefix", "suffix", "abbrev", "exception")


def parse_rules(text: str) -> TokenizerRules:
    """Parse the rule-file format: one entry per line under [section] headers."""
    prefixes: list[str] = []
    suffixes: list[str] = []
    abbrevs: list[str] = []
    exceptions: dict[str, tuple[str, ...]] = {}
    section = None
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1]
            if name not in _SECTIONS:
                raise ParseError(f"unknown section {name!r}", line=line_no)
            section = name
            continue
        if section is None:
            raise ParseError("entry before any section header", line=line_no)
        if section == "prefix":
            prefixes.append(line)
        elif section == "suffix":
            suffixes.append(line)
        elif section == "abbrev":
            abbrevs.append(line)
        else:
            chunk, sep, parts = line.partition("\t")
            if not sep:
                raise ParseError("exception line needs 'chunk<TAB>tokens'", line=line_no)
            exceptions[chunk] = tuple(parts.split(" "))
    return TokenizerRules(
        prefix_patterns=tuple(prefixes),
        suffix_patterns=tuple(suffixes),
        exceptions=exceptions,
        abbreviations=frozenset(abbrevs),
    )


def rules_to_text(rules: TokenizerRules) -> str:
    """Serialize rules in the rule-file format (inverse of parse_rules)."""
    out = ["[prefix]", *rules.prefix_patterns, "", "[suffix]", *rules.suffix_patterns,
           "", "[abbrev]", *sorted(rules.abbreviations), "", "[exception]"]
    for chunk, parts in sorted(rules.exceptions.items()):
        out.append(f"{chunk}\t{' '.join(parts)}")
    return "\n".join(out) + "\n"


def load_rules(path) -> TokenizerRules:
    with open(path, encoding="utf-8") as handle:
        return parse_rules(handle.read())


def default_rules() -> TokenizerRules:
    """The shipped Hungarian rule set."""
    data = resources.files("hunpipe").joinpath("data/hu_tokenizer_rules.txt")
    return parse_rules(data.read_text(encoding="utf-8"))
