"""Brute-force pair-orbit counts for S_n and bi-integer partition sums."""
import itertools
from functools import lru_cache


def monomials(n, d):
    out = []
    for total in range(d + 1):
        for c in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return out


def pair_orbits(n, d):
    seen = set()
    for a in monomials(n, d):
        for b in monomials(n, d):
            seen.add(tuple(sorted(zip(a, b), reverse=True)))
    return len(seen)


def bipartitions(k, l):
    parts = [(a, b) for a in range(k + 1) for b in range(l + 1) if (a, b) != (0, 0)]

    @lru_cache(None)
    def count(k, l, idx):
        if k == 0 and l == 0:
            return 1
        if idx == len(parts):
            return 0
        a, b = parts[idx]
        total = 0
        m = 0
        while m * a <= k and m * b <= l:
            total += count(k - m * a, l - m * b, idx + 1)
            m += 1
        return total

    return count(k, l, 0)


for d in (1, 2):
    s = sum(bipartitions(k, l) for k in range(d + 1) for l in range(d + 1))
    counts = [pair_orbits(n, d) for n in range(2 * d, 2 * d + 5)]
    print("d", d, "bipartition sum", s, "pair orbits", counts)
