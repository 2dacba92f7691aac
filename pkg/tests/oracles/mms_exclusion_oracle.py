"""Standalone oracle for the maximin share of the four-type running example.

Three agents, four types worth 1, 2, 3, 9, two copies of each. The script
enumerates every complete exclusive allocation directly with itertools
(no package imports) and reports max over allocations of the minimum
bundle value, per agent row. It also prints the argmax partition so the
number can be checked by eye: the best split has one bundle {9} against
the loss argument (each type is missing from exactly one of the three
bundles, so min = 15 - largest loss; the best achievable loss split is
{9} | {3} | {1, 2}, giving bundle values 6, 12, 12).

Run: python3 tests/oracles/mms_exclusion_oracle.py
Expected output ends with: MMS = 6
"""

from fractions import Fraction
from itertools import combinations, product

AGENTS = 3
VALUES = {"t1": Fraction(1), "t2": Fraction(2), "t3": Fraction(3), "t4": Fraction(9)}
COPIES = {"t1": 2, "t2": 2, "t3": 2, "t4": 2}


def allocations():
    per_type = [
        [(name, holders) for holders in combinations(range(AGENTS), COPIES[name])]
        for name in VALUES
    ]
    for assignment in product(*per_type):
        bundles = [set() for _ in range(AGENTS)]
        for name, holders in assignment:
            for agent in holders:
                bundles[agent].add(name)
        yield bundles


def main():
    best = None
    best_bundles = None
    count = 0
    for bundles in allocations():
        count += 1
        worst = min(sum(VALUES[t] for t in b) for b in bundles)
        if best is None or worst > best:
            best, best_bundles = worst, [sorted(b) for b in bundles]
    print(f"allocations examined: {count}")
    print(f"argmax partition: {best_bundles}")
    print(f"MMS = {best}")
    assert count == 81
    assert best == 6


if __name__ == "__main__":
    main()
