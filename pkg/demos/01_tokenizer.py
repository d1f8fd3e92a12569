"""Rule-based tokenization: affix stripping, abbreviations, offsets."""

from hunpipe import default_rules, tokenize

rules = default_rules()
print(f"shipped rules: {len(rules.prefix_patterns)} prefixes, "
      f"{len(rules.suffix_patterns)} suffixes, "
      f"{len(rules.abbreviations)} abbreviations")

samples = [
    "Dr. Kovács 2021-ben Budapesten tanult.",
    "(Ez kb. 12%-os növekedés volt.)",
    "A 3. fejezet jó... Tényleg!",
    "Az ún. gyorsvonat Szegedre ment, stb.)",
]

for text in samples:
    doc = tokenize(text, rules)
    print(f"\n{text!r}")
    print("  tokens:", [t.text for t in doc.tokens])

# Character offsets and trailing whitespace reconstruct the input exactly.
text = "  (alma)   fa  "
doc = tokenize(text, rules)
print(f"\noffsets for {text!r}:")
for t in doc.tokens:
    print(f"  [{t.char_start:2d},{t.char_end:2d}) {t.text!r} + ws {t.trailing_ws!r}")
rebuilt = doc.leading_ws + "".join(t.text + t.trailing_ws for t in doc.tokens)
assert rebuilt == text
print("detokenization identity holds")
