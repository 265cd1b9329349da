"""Regenerates textsim_reference.csv with Python's difflib as the independent ratio oracle.

Strings are case-folded and stripped of digits and whitespace before matching, with difflib's
automatic junk heuristic disabled. When both stripped strings are empty the folded strings are
compared instead. difflib's tie-breaking depends on argument order, so the larger of the two
orders is taken.
"""
import csv
import difflib
import random

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 .#-*/&'" + "ÉÀÖÜÇéàöüç"
WORDS = ["NETFLIX.COM", "SAFEWAY", "Direct Deposit", "PAYROLL", "RENT", "VERIZON", "ONLINE BILL PAY",
         "Capital One", "GEICO", "STARBUCKS", "Shell Oil", "CHECK #", "ATM WITHDRAWAL", "Café Noël", "REF"]


def fold_filter(s):
    return "".join(c.lower() for c in s if not (c.isdigit() or c.isspace()))


def ratio(a, b):
    fa, fb = fold_filter(a), fold_filter(b)
    if not fa and not fb:
        fa, fb = a.lower(), b.lower()
    if not fa and not fb:
        return 1.0
    return max(difflib.SequenceMatcher(None, fa, fb, autojunk=False).ratio(),
               difflib.SequenceMatcher(None, fb, fa, autojunk=False).ratio())


def random_string(rng):
    if rng.random() < 0.5:
        parts = [rng.choice(WORDS) for _ in range(rng.randint(1, 3))]
        if rng.random() < 0.6:
            parts.append(str(rng.randint(0, 99999)))
        return " ".join(parts)
    return "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 24)))


def mutate(s, rng):
    chars = list(s)
    for _ in range(rng.randint(0, 4)):
        op = rng.random()
        pos = rng.randint(0, len(chars))
        if op < 0.4:
            chars.insert(pos, rng.choice(ALPHABET))
        elif op < 0.7 and chars:
            del chars[min(pos, len(chars) - 1)]
        elif chars:
            chars[min(pos, len(chars) - 1)] = rng.choice(ALPHABET)
    return "".join(chars)


def main():
    rng = random.Random(20240611)
    rows = []
    for i in range(600):
        a = random_string(rng)
        b = mutate(a, rng) if i % 2 == 0 else random_string(rng)
        rows.append((a, b, repr(ratio(a, b))))
    with open("textsim_reference.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["a", "b", "ratio"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
