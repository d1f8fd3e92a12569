"""Suffix-rule lemmatization: learned strip/append transforms, digit
masking, frequency-based disambiguation."""

from hunpipe import learn, lemmatize, mask_digits
from hunpipe.lemmatizer import rules_to_lines, transform_between

# transforms come from the longest common prefix of form and lemma
for form, lemma in [("almát", "alma"), ("házban", "ház"), ("futott", "fut")]:
    t = transform_between(form, lemma)
    print(f"{form} -> {lemma}: strip {t.strip_len}, append {t.append!r}")

# leading digit runs are masked so one rule covers every year
print("\nmask_digits('2021-ben') =", mask_digits("2021-ben"))

trie = learn([
    ("almát", "NOUN", "alma", 12),
    ("szobát", "NOUN", "szoba", 7),
    ("házban", "NOUN", "ház", 9),
    ("2021-ben", "NUM", "2021", 3),
    ("várnak", "NOUN", "vár", 2),     # dative noun
    ("várnak", "VERB", "vár", 6),     # 3rd plural verb: same form, other tag
])

cases = [
    ("kutyát", "NOUN", False),   # unseen form, follows the -át rule
    ("1989-ben", "NUM", False),  # masking generalizes across years
    ("várnak", "VERB", False),
    ("várnak", "NOUN", False),
    ("Almát", "NOUN", True),     # sentence-initial: lowercased first
]
print()
for form, tag, sent_start in cases:
    print(f"lemmatize({form!r:12} {tag:<5} start={sent_start}):",
          lemmatize(form, tag, sent_start, trie))

print(f"\nrule dump has {len(rules_to_lines(trie))} lines; first three:")
for line in rules_to_lines(trie)[:3]:
    print(" ", line.replace("\t", " | "))
