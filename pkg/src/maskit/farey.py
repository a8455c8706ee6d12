"""Slopes of simple closed curves and their traces under the z-family.

Simple closed curves on the once-punctured torus are indexed by extended
rationals p/q in lowest terms: 0/1 is the a-curve, 1/0 the b-curve, and the
mediant (p+p')/(q+q') of two Farey neighbors is the curve word obtained by
concatenating their Christoffel words.  Traces obey the SL2 identity

    tr(XY) = tr(X) tr(Y) - tr(XY^-1),

which on the Farey diagram reads

    t_mediant = t_left * t_right - t_difference,

where "difference" is the fourth vertex of the Farey quadrilateral around the
edge (left, right).  With the word convention fixed below (0/1 -> "a",
1/0 -> "b", mediant -> concatenation in fraction order) the recursion holds
with this exact sign, no per-step sign choices -- checked against direct
matrix products in the test suite.

Seeds:  t_{0/1} = iz,  t_{1/0} = 2,  t_{1/1} = i(z+2),  t_{-1/1} = i(z-2);
more generally t_{n/1} = i(z+2n).  Every t_{p/q} equals i^q times an
integer-coefficient polynomial in z of degree q, which is what
trace_polynomial computes exactly (Gaussian-integer pairs, arbitrary size).

Caches are per-z and mutated by trace_of_slope; confine each cache to one
worker at a time.  Everything else here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# The recursion subtracts the difference-vertex trace.  The self-test's
# mutation mode flips this to +1 to prove the oracle cross-checks can catch
# exactly this class of bug; nothing else may write it.
_DIFFERENCE_SIGN = -1.0


@dataclass(frozen=True, order=True)
class FareySlope:
    """A slope p/q in lowest terms; q >= 0, and q = 0 only as 1/0."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0:
            raise ValueError(f"slope {self.p}/{self.q}: q must be >= 0")
        if self.q == 0 and self.p != 1:
            raise ValueError(f"slope {self.p}/0 is not reduced; the infinite slope is 1/0")
        if math.gcd(abs(self.p), self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q} is not in lowest terms")

    def __str__(self):
        return f"{self.p}/{self.q}"


def slope(p: int, q: int) -> FareySlope:
    """Normalize an integer pair to a FareySlope (cancel gcd, fix signs)."""
    if p == 0 and q == 0:
        raise ValueError("0/0 is not a slope")
    if q < 0:
        p, q = -p, -q
    if q == 0:
        return FareySlope(1, 0)
    g = math.gcd(abs(p), q)
    return FareySlope(p // g, q // g)


INFINITY = FareySlope(1, 0)
ZERO = FareySlope(0, 1)

_ROOTS = {(0, 1), (1, 0), (1, 1), (-1, 1)}


def _parents_pq(p: int, q: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Farey parents of p/q as raw pairs; q >= 1 and (p, q) not a root slope.

    For q >= 2 the left parent a/b solves p*b - q*a = 1 with 1 <= b < q
    (Bezout); the right parent is the vector difference.  For integer slopes
    |p| >= 2 the parents are the adjacent integer and 1/0.
    """
    if q == 1:
        step = 1 if p > 0 else -1
        return (p - step, 1), (1, 0)
    b = pow(p, -1, q)  # works for negative p as well
    a = (p * b - 1) // q
    return (a, b), (p - a, q - b)


def farey_parents(s: FareySlope) -> tuple[FareySlope, FareySlope]:
    """The unique Farey-neighbor pair whose mediant is s.

    The returned pair (l, r) satisfies l + r = s as integer vectors and
    |l.p*r.q - r.p*l.q| = 1.  For positive slopes l < s < r as fractions.
    """
    if (s.p, s.q) in _ROOTS:
        raise ValueError("root slope has no parents")
    (lp, lq), (rp, rq) = _parents_pq(s.p, s.q)
    return FareySlope(lp, lq) if lq else INFINITY, FareySlope(rp, rq) if rq else INFINITY


def mediant(l: FareySlope, r: FareySlope) -> FareySlope:
    return slope(l.p + r.p, l.q + r.q)


def farey_difference(s: FareySlope) -> FareySlope:
    """Fourth vertex of the Farey quadrilateral around s's parent edge.

    Computed from representative vectors (2*left - s), not from normalized
    parent slopes: for negative integer slopes the normalized right parent
    1/0 stands for the vector (-1, 0) and naive subtraction would land on
    the wrong vertex.
    """
    if (s.p, s.q) in _ROOTS:
        raise ValueError("root slope has no difference")
    (lp, lq), _ = _parents_pq(s.p, s.q)
    return slope(2 * lp - s.p, 2 * lq - s.q)


@lru_cache(maxsize=None)
def _word_pos(p: int, q: int) -> str:
    # Christoffel concatenation for p >= 0: word(mediant) = word(l) + word(r).
    if (p, q) == (1, 0):
        return "b"
    if q == 1:
        return "a" + "b" * p  # closed form of the concatenation chain
    (lp, lq), (rp, rq) = _parents_pq(p, q)
    return _word_pos(lp, lq) + _word_pos(rp, rq)


def slope_word(s: FareySlope) -> str:
    """Cyclically-reduced representative word: q letters a, |p| letters b.

    b appears inverted (letter 'B') for negative slopes, which mirrors the
    automorphism fixing a and inverting b.  Anchors: 0/1 -> "a", 1/0 -> "b",
    1/1 -> "ab", 1/2 -> "aab".
    """
    if s.p < 0:
        return _word_pos(-s.p, s.q).replace("b", "B")
    return _word_pos(s.p, s.q)


class TraceCache:
    """Memoized traces t_{p/q}(z) for one fixed parameter z."""

    def __init__(self, z):
        self.z = complex(z)
        z = self.z
        self.table: dict[tuple[int, int], complex] = {
            (0, 1): 1j * z,
            (1, 0): 2.0 + 0.0j,
            (1, 1): 1j * (z + 2.0),
            (-1, 1): 1j * (z - 2.0),
        }

    def trace(self, s: FareySlope) -> complex:
        key = (s.p, s.q)
        table = self.table
        hit = table.get(key)
        if hit is not None:
            return hit
        # iterative fill: Farey depth can reach ~q, too deep for recursion
        # at large denominators
        stack = [key]
        while stack:
            p, q = stack[-1]
            if (p, q) in table:
                stack.pop()
                continue
            (lp, lq), (rp, rq) = _parents_pq(p, q)
            dp, dq = 2 * lp - p, 2 * lq - q
            if dq < 0 or (dq == 0 and dp < 0):
                dp, dq = -dp, -dq
            g = math.gcd(abs(dp), dq)
            if g > 1:
                dp, dq = dp // g, dq // g
            missing = [k for k in ((lp, lq), (rp, rq), (dp, dq)) if k not in table]
            if missing:
                stack.extend(missing)
                continue
            table[(p, q)] = (
                table[(lp, lq)] * table[(rp, rq)] + _DIFFERENCE_SIGN * table[(dp, dq)]
            )
            stack.pop()
        return table[key]


def trace_of_slope(z, s: FareySlope, cache: TraceCache | None = None) -> complex:
    """t_{p/q}(z), by the memoized Farey recursion (sign per word convention)."""
    if cache is None:
        cache = TraceCache(z)
    elif cache.z != complex(z):
        raise ValueError(f"cache belongs to z={cache.z!r}, not z={complex(z)!r}")
    return cache.trace(s)


@dataclass(frozen=True)
class TracePolynomial:
    """Exact polynomial in z with Gaussian-integer coefficients.

    coeffs[k] = (re, im) is the exact coefficient of z^k; Python ints, so the
    exponential coefficient growth in the degree is harmless.
    """

    coeffs: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z) -> complex:
        return self.evaluate(z)

    def evaluate(self, z) -> complex:
        z = complex(z)
        acc = 0j
        for re, im in reversed(self.coeffs):
            acc = acc * z + complex(re, im)
        return acc

    def _mul(self, other: "TracePolynomial") -> "TracePolynomial":
        a, b = self.coeffs, other.coeffs
        out = [(0, 0)] * (len(a) + len(b) - 1)
        for i, (ar, ai) in enumerate(a):
            if ar == 0 and ai == 0:
                continue
            for j, (br, bi) in enumerate(b):
                cr, ci = out[i + j]
                out[i + j] = (cr + ar * br - ai * bi, ci + ar * bi + ai * br)
        return TracePolynomial(tuple(out))

    def _sub(self, other: "TracePolynomial") -> "TracePolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [(0, 0)] * (n - len(self.coeffs))
        for k, (br, bi) in enumerate(other.coeffs):
            ar, ai = a[k]
            a[k] = (ar - br, ai - bi)
        while len(a) > 1 and a[-1] == (0, 0):
            a.pop()
        return TracePolynomial(tuple(a))


_POLY_SEEDS = {
    (0, 1): TracePolynomial(((0, 0), (0, 1))),   # iz
    (1, 0): TracePolynomial(((2, 0),)),          # constant 2
    (1, 1): TracePolynomial(((0, 2), (0, 1))),   # i(z+2)
    (-1, 1): TracePolynomial(((0, -2), (0, 1))),  # i(z-2)
}

SYMBOLIC_Q_CAP = 64


@lru_cache(maxsize=4096)
def _poly_pq(p: int, q: int) -> TracePolynomial:
    seed = _POLY_SEEDS.get((p, q))
    if seed is not None:
        return seed
    (lp, lq), (rp, rq) = _parents_pq(p, q)
    dp, dq = 2 * lp - p, 2 * lq - q
    if dq < 0 or (dq == 0 and dp < 0):
        dp, dq = -dp, -dq
    g = math.gcd(abs(dp), dq)
    if g > 1:
        dp, dq = dp // g, dq // g
    return _poly_pq(lp, lq)._mul(_poly_pq(rp, rq))._sub(_poly_pq(dp, dq))


def trace_polynomial(s: FareySlope) -> TracePolynomial:
    """Exact coefficients of t_{p/q}(z); degree q.  Capped at q <= 64."""
    if s.q == 0:
        raise ValueError("constant trace 2, not polynomial in z")
    if s.q > SYMBOLIC_Q_CAP:
        raise ValueError(f"symbolic traces capped at q <= {SYMBOLIC_Q_CAP}")
    poly = _poly_pq(s.p, s.q)
    assert poly.degree == s.q
    return poly


def slopes_up_to(q_max: int, lo: float = 0.0, hi: float = 1.0) -> list[FareySlope]:
    """All reduced slopes with 1 <= q <= q_max and lo <= p/q <= hi, sorted by (q, p)."""
    out = []
    for q in range(1, q_max + 1):
        p_lo = math.ceil(lo * q)
        p_hi = math.floor(hi * q)
        for p in range(p_lo, p_hi + 1):
            if math.gcd(abs(p), q) == 1:
                out.append(FareySlope(p, q))
    return out
