"""Dense bitset subsets of Z_p and the set algebra built on them.

An FpSet stores its ambient modulus p and one Python integer whose bit i
is set exactly when i belongs to the set.  Sumsets become OR-folds of
cyclic shifts, intersections become AND, and cardinality is a popcount,
all word-parallel.  Values are immutable; every operation returns a new set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateShift, MixedModulus

__all__ = [
    "FpSet",
    "sumset",
    "productset",
    "affine",
    "iterated_sumset",
    "intersect_shifts",
    "growth_product",
    "parse_set",
    "format_set",
]


def cyclic_shift(bits: int, k: int, p: int) -> int:
    """Rotate a p-bit vector left by k positions: {x + k mod p : x in bits}."""
    k %= p
    if k == 0:
        return bits
    mask = (1 << p) - 1
    return ((bits << k) | (bits >> (p - k))) & mask


def bit_elements(bits: int) -> list[int]:
    """Positions of set bits, ascending."""
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


@dataclass(frozen=True, slots=True)
class FpSet:
    """A subset of Z_p as a dense bit-vector.

    bits must only have bits below p set; use from_elements for arbitrary
    integer input (it reduces mod p).
    """

    p: int
    bits: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"ambient modulus must be positive, got {self.p}")
        if self.bits < 0 or self.bits >> self.p:
            raise ValueError("bit-vector has bits outside [0, p)")

    @classmethod
    def from_elements(cls, p: int, elements) -> "FpSet":
        bits = 0
        for e in elements:
            bits |= 1 << (e % p)
        return cls(p, bits)

    @classmethod
    def empty(cls, p: int) -> "FpSet":
        return cls(p, 0)

    @classmethod
    def full(cls, p: int) -> "FpSet":
        return cls(p, (1 << p) - 1)

    @classmethod
    def nonzero(cls, p: int) -> "FpSet":
        return cls(p, ((1 << p) - 1) ^ 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> (x % self.p) & 1)

    def __iter__(self):
        return iter(bit_elements(self.bits))

    def elements(self) -> list[int]:
        return bit_elements(self.bits)

    def __repr__(self):
        return format_set(self)

    def translate(self, t: int) -> "FpSet":
        return FpSet(self.p, cyclic_shift(self.bits, t, self.p))

    def union(self, other: "FpSet") -> "FpSet":
        _check_same(self, other)
        return FpSet(self.p, self.bits | other.bits)

    def intersection(self, other: "FpSet") -> "FpSet":
        _check_same(self, other)
        return FpSet(self.p, self.bits & other.bits)

    def difference(self, other: "FpSet") -> "FpSet":
        _check_same(self, other)
        return FpSet(self.p, self.bits & ~other.bits)

    def issubset(self, other: "FpSet") -> bool:
        _check_same(self, other)
        return self.bits & ~other.bits == 0


def _check_same(a: FpSet, b: FpSet) -> None:
    if a.p != b.p:
        raise MixedModulus(f"ambient moduli differ: {a.p} vs {b.p}")


def sumset(a: FpSet, b: FpSet) -> FpSet:
    """A + B = {x + y mod p}; OR of cyclic shifts of the larger operand."""
    _check_same(a, b)
    big, small = (a.bits, b.bits) if len(a) >= len(b) else (b.bits, a.bits)
    out = 0
    p = a.p
    for s in bit_elements(small):
        out |= cyclic_shift(big, s, p)
    return FpSet(p, out)


def sumset_bits(big: int, shifts, p: int) -> int:
    """Raw-integer sumset kernel used by the search engine."""
    out = 0
    for s in shifts:
        out |= cyclic_shift(big, s, p)
    return out


def productset(a: FpSet, b: FpSet, fld=None) -> FpSet:
    """A * B = {x * y mod p}.

    With a field context the nonzero part is computed in discrete-log space,
    where multiplication by a fixed element is a cyclic shift mod p-1;
    without one it falls back to the schoolbook double loop over elements.
    """
    _check_same(a, b)
    p = a.p
    if a.bits == 0 or b.bits == 0:
        return FpSet(p, 0)
    out = 0
    if (a.bits & 1 and b.bits) or (b.bits & 1 and a.bits):
        out |= 1
    a_nz = a.bits & ~1
    b_nz = b.bits & ~1
    if a_nz == 0 or b_nz == 0:
        return FpSet(p, out)
    small, big = (a_nz, b_nz) if a_nz.bit_count() <= b_nz.bit_count() else (b_nz, a_nz)
    if fld is not None and fld.p == p:
        n = p - 1
        dl = fld.dlog
        idx_big = 0
        for x in bit_elements(big):
            idx_big |= 1 << dl[x]
        acc = 0
        mask = (1 << n) - 1
        for x in bit_elements(small):
            k = dl[x]
            if k == 0:
                acc |= idx_big
            else:
                acc |= ((idx_big << k) | (idx_big >> (n - k))) & mask
        exp = fld.exp
        for k in bit_elements(acc):
            out |= 1 << exp[k]
    else:
        big_elems = bit_elements(big)
        for x in bit_elements(small):
            for y in big_elems:
                out |= 1 << (x * y % p)
    return FpSet(p, out)


def affine(a: FpSet, lam: int, mu: int) -> FpSet:
    """lam * A + mu = {lam*x + mu mod p}; lam = 0 collapses to {mu}."""
    p = a.p
    lam %= p
    mu %= p
    if a.bits == 0:
        return a
    if lam == 0:
        return FpSet(p, 1 << mu)
    if lam == 1:
        return a.translate(mu)
    bits = 0
    for x in bit_elements(a.bits):
        bits |= 1 << (lam * x % p)
    return FpSet(p, cyclic_shift(bits, mu, p))


def iterated_sumset(a: FpSet, k: int) -> FpSet:
    """k-fold sumset A + ... + A, by doubling."""
    if k < 1:
        raise ValueError(f"fold count must be >= 1, got {k}")
    if a.bits == 0:
        return a
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else sumset(result, base)
        k >>= 1
        if k:
            base = sumset(base, base)
    return result


def intersect_shifts(g: FpSet, shifts) -> FpSet:
    """Intersection of the translates G + b over all b in shifts."""
    shifts = list(shifts)
    if not shifts:
        raise ValueError("need at least one shift")
    if len(set(s % g.p for s in shifts)) != len(shifts):
        raise DuplicateShift(f"shifts repeat: {shifts}")
    out = (1 << g.p) - 1
    for b in shifts:
        out &= cyclic_shift(g.bits, b, g.p)
    return FpSet(g.p, out)


def growth_product(a: FpSet, b: int) -> FpSet:
    """A(A + b) = {x * (y + b) mod p}.

    For b != 0 the result is also computed through the conjugation identity
    A(A+b) = b^2 * (b^{-1}A)(b^{-1}A + 1) and the two must agree exactly.
    """
    p = a.p
    b %= p
    direct = productset(a, a.translate(b))
    if b != 0 and a.bits:
        binv = pow(b, -1, p)
        scaled = affine(a, binv, 0)
        conj = affine(productset(scaled, scaled.translate(1)), b * b % p, 0)
        assert direct == conj, f"conjugation identity violated at p={p}, b={b}"
    return direct


def parse_set(text: str) -> FpSet:
    """Parse the literal form 'p:{e1,e2,...}', e.g. '7:{1,2,4}'."""
    text = text.strip()
    head, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"bad set literal {text!r}: expected 'p:{{...}}'")
    try:
        p = int(head)
    except ValueError:
        raise ValueError(f"bad modulus in set literal {text!r}") from None
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"bad set literal {text!r}: body must be braced")
    inner = body[1:-1].strip()
    if not inner:
        return FpSet(p, 0)
    try:
        elems = [int(tok) for tok in inner.split(",")]
    except ValueError:
        raise ValueError(f"bad element in set literal {text!r}") from None
    return FpSet.from_elements(p, elems)


def format_set(s: FpSet) -> str:
    return f"{s.p}:{{{','.join(map(str, s.elements()))}}}"
