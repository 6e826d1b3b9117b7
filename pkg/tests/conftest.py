"""Shared brute-force oracles.

Every oracle here recomputes the quantity under test from first
principles (double loops, full enumeration), independent of the bitset
and search machinery it checks.
"""

from ffdecomp.setalg import FpSet, cyclic_shift


def naive_sumset(a: FpSet, b: FpSet) -> set:
    return {(x + y) % a.p for x in a for y in b}


def naive_productset(a: FpSet, b: FpSet) -> set:
    return {(x * y) % a.p for x in a for y in b}


def naive_affine(a: FpSet, lam: int, mu: int) -> set:
    return {(lam * x + mu) % a.p for x in a}


def multiplicative_order(g: int, p: int) -> int:
    k, cur = 1, g % p
    while cur != 1:
        cur = cur * g % p
        k += 1
    return k


def oracle_decomposition_exists(s: FpSet, min_size: int = 2) -> bool:
    """Full enumeration over every subset B of Z_p with the maximal companion."""
    p, mask = s.p, (1 << s.p) - 1
    for b_bits in range(1, 1 << p):
        if b_bits.bit_count() < min_size:
            continue
        companion = mask
        elems = []
        bb = b_bits
        while bb:
            low = bb & -bb
            c = low.bit_length() - 1
            bb ^= low
            elems.append(c)
            companion &= cyclic_shift(s.bits, (p - c) % p, p)
        if companion.bit_count() < min_size:
            continue
        acc = 0
        for c in elems:
            acc |= cyclic_shift(companion, c, p)
        if acc == s.bits:
            return True
    return False


def oracle_self_exists(s: FpSet) -> bool:
    p = s.p
    inv2 = pow(2, -1, p)
    domain = sorted(inv2 * x % p for x in s)
    n = len(domain)
    for a_bits in range(1, 1 << n):
        elems = [domain[i] for i in range(n) if a_bits >> i & 1]
        acc = 0
        for i, x in enumerate(elems):
            for y in elems[i:]:
                acc |= 1 << ((x + y) % p)
        if acc == s.bits:
            return True
    return False


def oracle_max_packing(s: FpSet) -> int:
    p, mask = s.p, (1 << s.p) - 1
    best = 0
    for b_bits in range(1, 1 << p):
        companion = mask
        bb = b_bits
        while bb:
            low = bb & -bb
            bb ^= low
            companion &= cyclic_shift(s.bits, (p - (low.bit_length() - 1)) % p, p)
        best = max(best, companion.bit_count() * b_bits.bit_count())
    return best
