"""Multiplicative characters of F_p^* and exact character-sum accumulation.

A character of order dividing d is indexed against the field's primitive
root: chi_j(g**k) = zeta_d**(j*k).  Sums are accumulated as integer counts
per d-th root of unity, so floating point enters only at the final
magnitude extraction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import polyfp
from .errors import BadIndex
from .fpcore import PrimeField
from .reports import BoundReport
from .setalg import FpSet

MAGNITUDE_TOL = 1e-6


@dataclass(frozen=True)
class Character:
    """chi_j in X_d: the character sending g**k to zeta_d**(j*k).

    j = 0 is the principal character; chi_j has order d / gcd(j, d).
    chi(0) contributes zero by convention.
    """

    field: PrimeField
    d: int
    j: int

    def __post_init__(self):
        p = self.field.p
        if self.d < 1 or (p - 1) % self.d != 0:
            raise BadIndex(f"character order context d = {self.d} must divide p-1 = {p - 1}")
        if not 0 <= self.j < self.d:
            raise BadIndex(f"character index j = {self.j} out of range [0, {self.d})")

    @property
    def is_principal(self) -> bool:
        return self.j == 0

    @property
    def order(self) -> int:
        return self.d // math.gcd(self.j, self.d)

    def __call__(self, x: int):
        return char_eval(self, x)


def char_eval(chi: Character, x: int):
    """Root-of-unity index of chi(x), or None for the zero element."""
    p = chi.field.p
    x %= p
    if x == 0:
        return None
    return chi.j * chi.field.dlog[x] % chi.d


class RootOfUnityTally:
    """Exact accumulator: counts[r] summands equal to zeta_d**r, plus zeros.

    The complex value sum(counts[r] * e^(2*pi*i*r/d)) is only formed on
    extraction.
    """

    __slots__ = ("d", "counts", "zeros")

    def __init__(self, d: int):
        self.d = d
        self.counts = [0] * d
        self.zeros = 0

    def add(self, index, times: int = 1) -> None:
        if index is None:
            self.zeros += times
        else:
            self.counts[index] += times

    def total(self) -> int:
        return sum(self.counts) + self.zeros

    def value(self) -> complex:
        d = self.d
        if d == 1:
            return complex(self.counts[0])
        if d == 2:
            return complex(self.counts[0] - self.counts[1])
        return sum(
            c * cmath.exp(2j * cmath.pi * r / d) for r, c in enumerate(self.counts) if c
        )

    def magnitude(self) -> float:
        return abs(self.value())

    def exact_int(self):
        """Exact integer value when the count pattern makes one recognizable.

        Covers the patterns arising from full character-group sums: counts
        constant on the multiples of some g | d and zero elsewhere (value 0
        unless the support is just {0}).  Returns None otherwise.
        """
        support = [r for r, c in enumerate(self.counts) if c]
        if not support:
            return 0
        if support == [0]:
            return self.counts[0]
        g = 0
        for r in support:
            g = math.gcd(g, r)
        g = math.gcd(g, self.d)
        expected = list(range(0, self.d, g))
        if support != expected:
            return None
        level = self.counts[support[0]]
        if any(self.counts[r] != level for r in support):
            return None
        return 0  # level * (sum of all (d/g)-th roots of unity), d/g > 1

    def __repr__(self):
        return f"RootOfUnityTally(d={self.d}, counts={self.counts}, zeros={self.zeros})"


def indicator_tally(fld: PrimeField, d: int, v: int) -> RootOfUnityTally:
    """Tally of sum over all chi in X_d of chi(v)."""
    if (fld.p - 1) % d != 0:
        raise BadIndex(f"d = {d} does not divide p-1 = {fld.p - 1}")
    tally = RootOfUnityTally(d)
    v %= fld.p
    if v == 0:
        tally.zeros += d
        return tally
    k = fld.dlog[v]
    for j in range(d):
        tally.counts[j * k % d] += 1
    return tally


def indicator_identity_holds(fld: PrimeField, d: int) -> bool:
    """Exact check of d * [v in G_d] == sum over X_d of chi(v), all v != 0.

    Works per discrete-log class: the tally depends on v only through
    dlog(v) mod d, and its exact integer value must be d on the class of
    d-th powers and 0 elsewhere.
    """
    from .fpcore import subgroup

    sub = subgroup(fld, d)
    # Membership table must match the dlog divisibility criterion.
    member_bits = 0
    for x in range(1, fld.p):
        if fld.dlog[x] % d == 0:
            member_bits |= 1 << x
    if member_bits != sub.elements.bits:
        return False
    for k_class in range(d):
        tally = RootOfUnityTally(d)
        for j in range(d):
            tally.counts[j * k_class % d] += 1
        val = tally.exact_int()
        if val != (d if k_class == 0 else 0):
            return False
    return True


def poly_char_sum(chi: Character, coeffs: list[int]) -> RootOfUnityTally:
    """Exact tally of chi(F(x)) over all x in F_p."""
    p = chi.field.p
    coeffs = polyfp.normalize(coeffs, p)
    tally = RootOfUnityTally(chi.d)
    dl = chi.field.dlog
    j, d = chi.j, chi.d
    for x in range(p):
        v = polyfp.evaluate(coeffs, x, p)
        if v == 0:
            tally.zeros += 1
        else:
            tally.counts[j * dl[v] % d] += 1
    return tally


def weil_report(chi: Character, coeffs: list[int]) -> BoundReport:
    """Complete-sum magnitude of chi(F(x)) against (D-1) * sqrt(p).

    D is the number of distinct roots of F over the closure.  The bound is
    asserted only when F is not a constant times a perfect (order chi)-th
    power.  For D = 1 the degenerate bound 0 is replaced by 1 (an admissible
    F with a single root gives a complete sum of magnitude at most 1).
    """
    p = chi.field.p
    d_ord = chi.order
    if d_ord < 2:
        raise BadIndex("Weil comparison needs a non-principal character")
    coeffs = polyfp.normalize(coeffs, p)
    if not coeffs:
        raise ValueError("F must be nonzero")
    if polyfp.degree(coeffs) >= p:
        raise ValueError("need deg F < p for the root count")
    distinct = polyfp.distinct_root_count(coeffs, p)
    hypothesis_ok = not polyfp.is_perfect_power(coeffs, p, d_ord)
    tally = poly_char_sum(chi, coeffs)
    magnitude = tally.magnitude()
    bound = (distinct - 1) * math.sqrt(p)
    ok = None
    if hypothesis_ok:
        effective = bound if distinct > 1 else 1.0
        ok = magnitude <= effective + MAGNITUDE_TOL
    return BoundReport(
        experiment="weil",
        instance={"p": p, "d": chi.d, "j": chi.j, "order": d_ord, "poly": coeffs},
        lhs=magnitude,
        rhs=bound,
        hypothesis_ok=hypothesis_ok,
        ok=ok,
        tolerance=MAGNITUDE_TOL,
        extras={"distinct_roots": distinct, "degree": polyfp.degree(coeffs)},
    )


def double_char_sum(chi: Character, a: FpSet, b: FpSet) -> RootOfUnityTally:
    """Exact tally of chi(x + y) over all pairs (x, y) in A x B.

    Pair multiplicities per residue come from one integer convolution of the
    indicator vectors, so the cost is O(p^2) word operations rather than
    O(#A * #B) interpreter steps.
    """
    p = chi.field.p
    if a.p != p or b.p != p:
        raise BadIndex("sets must live in the character's field")
    tally = RootOfUnityTally(chi.d)
    if a.bits == 0 or b.bits == 0:
        return tally
    ind_a = np.zeros(p, dtype=np.int64)
    ind_a[a.elements()] = 1
    ind_b = np.zeros(p, dtype=np.int64)
    ind_b[b.elements()] = 1
    conv = np.convolve(ind_a, ind_b)
    folded = conv[:p].copy()
    folded[: p - 1] += conv[p:]
    tally.zeros = int(folded[0])
    classes = chi.j * chi.field.dlog_np[1:p] % chi.d
    sums = np.bincount(classes, weights=folded[1:].astype(np.float64), minlength=chi.d)
    for r in range(chi.d):
        tally.counts[r] = int(round(sums[r]))
    assert tally.total() == len(a) * len(b)
    return tally


def vinogradov_check(chi: Character, a: FpSet, b: FpSet) -> BoundReport:
    """|double sum| <= sqrt(p * #A * #B); constant-free, must always hold."""
    if chi.is_principal:
        raise BadIndex("bound needs a non-principal character")
    if a.bits == 0 or b.bits == 0:
        raise ValueError("A and B must be nonempty")
    p = chi.field.p
    lhs = double_char_sum(chi, a, b).magnitude()
    rhs = math.sqrt(p * len(a) * len(b))
    return BoundReport(
        experiment="vinogradov",
        instance={"p": p, "d": chi.d, "j": chi.j, "A": a, "B": b},
        lhs=lhs,
        rhs=rhs,
        ok=lhs <= rhs + MAGNITUDE_TOL,
        tolerance=MAGNITUDE_TOL,
    )


def karatsuba_envelope(p: int, na: int, nb: int, nu: int) -> float:
    return na ** ((2 * nu - 1) / (2 * nu)) * (
        math.sqrt(nb) * p ** (1 / (2 * nu)) + nb * p ** (1 / (4 * nu))
    )


def karatsuba_ratio(chi: Character, a: FpSet, b: FpSet, nu: int) -> BoundReport:
    """Measured double sum against the nu-parametrized envelope, constant 1.

    Report-only: the implied constant of the underlying estimate is unknown,
    so the ratio is recorded for trend analysis, never asserted.
    """
    if chi.is_principal:
        raise BadIndex("envelope comparison needs a non-principal character")
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    p = chi.field.p
    lhs = double_char_sum(chi, a, b).magnitude()
    envelope = karatsuba_envelope(p, len(a), len(b), nu)
    ratio = lhs / envelope if envelope > 0 else 0.0
    return BoundReport(
        experiment="karatsuba",
        instance={"p": p, "d": chi.d, "j": chi.j, "A": a, "B": b, "nu": nu},
        lhs=lhs,
        rhs=envelope,
        extras={"ratio": ratio},
    )


def interval_exp_sum(p: int, m: int, n: int, lam: int) -> float:
    """|sum of e_p(lam * u) over the interval u = m+1 .. m+n|.

    Uses the closed geometric form |sin(pi*lam*n/p) / sin(pi*lam/p)| for
    lam != 0 (the translate by m only rotates the phase), and n for lam = 0.
    The linear-sum bound p/|lam| is asserted for 1 <= |lam| <= (p-1)/2.
    """
    if not 1 <= n <= p:
        raise ValueError(f"interval length must be in [1, p], got {n}")
    lam_red = lam % p
    if lam_red == 0:
        return float(n)
    num = abs(math.sin(math.pi * lam_red * n / p))
    den = abs(math.sin(math.pi * lam_red / p))
    magnitude = num / den
    signed = lam_red if lam_red <= (p - 1) // 2 else lam_red - p
    if abs(signed) <= (p - 1) // 2:
        assert magnitude <= p / abs(signed) + 1e-9, (
            f"linear exponential sum bound violated: p={p}, lam={signed}"
        )
    return magnitude
