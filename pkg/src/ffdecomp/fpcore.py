"""Prime fields Z/pZ with full discrete-log tables and their multiplicative subgroups.

A PrimeField fixes the smallest primitive root g of p and tabulates the
discrete logarithm of every nonzero residue, so that character evaluation
and subgroup membership reduce to one table lookup.  Tables are cached on
disk, one binary file per modulus.
"""

from __future__ import annotations

import os
import struct
import sys
from array import array
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import BadIndex, CompositeModulus, ModulusTooLarge, ZeroHasNoLog

MODULUS_CAP = 1 << 20

# Witnesses making Miller-Rabin deterministic for all n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_CACHE_VERSION = 1
_HEADER = struct.Struct("<BQQ")  # version tag, p, g

_FIELD_CACHE: dict[int, "PrimeField"] = {}


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 2**64."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; adequate for n < 2**40."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors."""
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    phi = n
    for q in factorize(n):
        phi = phi // q * (q - 1)
    return phi


def tau(n: int) -> int:
    """Number of positive divisors."""
    t = 1
    for e in factorize(n).values():
        t *= e + 1
    return t


def smallest_primitive_root(p: int) -> int:
    """Ascending scan; order check via the prime factorization of p-1."""
    prime_factors = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in prime_factors):
            return g
    raise ArithmeticError(f"no primitive root found modulo {p}")  # unreachable for prime p


class PrimeField:
    """Immutable context for arithmetic modulo an odd prime p.

    Attributes:
      p: the modulus.
      g: smallest primitive root modulo p.
      dlog: list of length p; dlog[x] = k with g**k == x (mod p) for x >= 1,
            dlog[0] = -1 as a sentinel.
      exp: list of length p-1; exp[k] = g**k mod p.

    Instances are built once per modulus and shared; never mutate them.
    """

    __slots__ = ("p", "g", "dlog", "exp", "_dlog_np")

    def __init__(self, p: int, g: int, dlog: list[int]):
        self.p = p
        self.g = g
        self.dlog = dlog
        exp = [0] * (p - 1)
        for x in range(1, p):
            exp[dlog[x]] = x
        self.exp = exp
        self._dlog_np = None

    def __repr__(self):
        return f"PrimeField(p={self.p}, g={self.g})"

    @property
    def dlog_np(self) -> np.ndarray:
        """dlog table as an int64 array (built lazily, shared)."""
        if self._dlog_np is None:
            self._dlog_np = np.array(self.dlog, dtype=np.int64)
        return self._dlog_np

    def dlog_of(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroHasNoLog(f"0 has no discrete log modulo {self.p}")
        return self.dlog[x]

    def inverse(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroHasNoLog(f"0 is not invertible modulo {self.p}")
        return self.exp[(-self.dlog[x]) % (self.p - 1)]


def _build_field(p: int) -> PrimeField:
    g = smallest_primitive_root(p)
    dlog = [-1] * p
    cur = 1
    for k in range(p - 1):
        dlog[cur] = k
        cur = cur * g % p
    return PrimeField(p, g, dlog)


def default_cache_dir() -> Path:
    env = os.environ.get("FFDECOMP_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ffdecomp"


def _cache_path(p: int, cache_dir: Path) -> Path:
    return cache_dir / f"field_{p}.bin"


def _write_cache(fld: PrimeField, cache_dir: Path) -> None:
    table = array("I", fld.dlog[1:])
    if sys.byteorder == "big":
        table.byteswap()
    path = _cache_path(fld.p, cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(_CACHE_VERSION, fld.p, fld.g))
        fh.write(table.tobytes())
    tmp.replace(path)


def _read_cache(p: int, cache_dir: Path) -> PrimeField | None:
    path = _cache_path(p, cache_dir)
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    if len(raw) != _HEADER.size + 4 * (p - 1):
        return None
    version, p_stored, g = _HEADER.unpack_from(raw)
    if version != _CACHE_VERSION or p_stored != p:
        return None
    table = array("I")
    table.frombytes(raw[_HEADER.size :])
    if sys.byteorder == "big":
        table.byteswap()
    dlog = [-1] + list(table)
    return PrimeField(p, g, dlog)


def make_field(p: int, cache_dir: str | Path | None = None) -> PrimeField:
    """Construct (or load) the field context for an odd prime p < 2**20.

    Results are memoized in-process and persisted under the cache directory
    (FFDECOMP_CACHE_DIR, else ~/.cache/ffdecomp).  Cache files that fail the
    version or size check are silently rebuilt.
    """
    if not isinstance(p, int):
        raise TypeError(f"modulus must be an integer, got {type(p).__name__}")
    if p >= MODULUS_CAP:
        raise ModulusTooLarge(f"p = {p} exceeds the dlog-table cap 2**20")
    if not is_prime(p):
        raise CompositeModulus(f"p = {p} is not prime")
    if p < 3:
        raise CompositeModulus(f"p = {p}: modulus must be an odd prime >= 3")
    cached = _FIELD_CACHE.get(p)
    if cached is not None:
        return cached
    directory = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    fld = _read_cache(p, directory)
    if fld is None:
        fld = _build_field(p)
        try:
            _write_cache(fld, directory)
        except OSError:
            pass  # cache is an optimization only
    _FIELD_CACHE[p] = fld
    return fld


def dlog(fld: PrimeField, x: int) -> int:
    """Exponent k in [0, p-2] with g**k == x (mod p)."""
    return fld.dlog_of(x)


class Subgroup:
    """The group G_d of d-th powers in F_p^*, d a divisor of p-1."""

    __slots__ = ("field", "d", "elements")

    def __init__(self, field: PrimeField, d: int, elements):
        self.field = field
        self.d = d
        self.elements = elements

    def __repr__(self):
        return f"Subgroup(p={self.field.p}, d={self.d}, order={len(self.elements)})"

    def __contains__(self, x: int) -> bool:
        x %= self.field.p
        return x != 0 and self.field.dlog[x] % self.d == 0

    @property
    def order(self) -> int:
        return (self.field.p - 1) // self.d


def subgroup(fld: PrimeField, d: int) -> Subgroup:
    """G_d = {x**d : x in F_p^*}; membership is d | dlog(x)."""
    from .setalg import FpSet

    p = fld.p
    if d < 1 or (p - 1) % d != 0:
        raise BadIndex(f"d = {d} does not divide p-1 = {p - 1}")
    bits = 0
    for k in range(0, p - 1, d):
        bits |= 1 << fld.exp[k]
    return Subgroup(fld, d, FpSet(p, bits))
