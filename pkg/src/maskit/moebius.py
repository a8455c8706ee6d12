"""Determinant-one 2x2 complex matrices and the explicit representation family.

A once-punctured torus group is a rank-two free group of Moebius
transformations whose generator commutator is parabolic.  Everything in this
package works with one concrete family: for a complex parameter z,

    sigma_z(a) = [[iz, i], [i, 0]],      sigma_z(b) = [[1, 2], [0, 1]],

so b is parabolic and tr [a, b] = -2 identically in z.  The two-parameter
extension sigma_{z,w} adjoins a third parabolic generator

    sigma_{z,w}(c) = [[1, w], [0, 1]],

which commutes with b; conjugating a by powers of c walks the parameter:
the pair (c^-n a, b) generates a copy of sigma_{z-nw}.

Matrices live in SL2 (determinant one, renormalized on composition), but all
quantities of interest -- traces compared by absolute value or squared --
descend to PSL2, so a matrix and its negative are interchangeable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

_DET_TOL = 1e-12


def _det_scale(a, b, c, d) -> float:
    # a*d - b*c carries absolute rounding error on the order of
    # eps * (|a||d| + |b||c|), so "det == 1" is only testable relative
    # to that scale once entries grow past O(1).
    return max(1.0, abs(a) * abs(d) + abs(b) * abs(c))


@dataclass(frozen=True)
class Moebius:
    """Entries of a determinant-one complex 2x2 matrix [[a, b], [c, d]]."""

    a: complex
    b: complex
    c: complex
    d: complex

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __post_init__(self):
        det = self.det()
        tol = _DET_TOL * _det_scale(self.a, self.b, self.c, self.d)
        if abs(det - 1.0) > tol:
            raise ValueError(f"matrix determinant {det!r} is not 1 within {tol}")

    def __matmul__(self, other: "Moebius") -> "Moebius":
        return compose(self, other)


def make_moebius(a, b, c, d) -> Moebius:
    """Build a Moebius matrix, rescaling to determinant one if needed.

    Raises ValueError on (near-)singular input.
    """
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    det = a * d - b * c
    if abs(det - 1.0) > 0.5 * _DET_TOL * _det_scale(a, b, c, d):
        # drift is measurable above rounding noise, so the value is real
        if det == 0:
            raise ValueError("singular matrix has no determinant-one rescaling")
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
    return Moebius(a, b, c, d)


def identity() -> Moebius:
    return Moebius(1.0, 0.0, 0.0, 1.0)


def compose(m: Moebius, n: Moebius) -> Moebius:
    """Matrix product m*n, renormalized against determinant drift."""
    return make_moebius(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def inverse(m: Moebius) -> Moebius:
    # for determinant one the adjugate is the inverse
    return Moebius(m.d, -m.b, -m.c, m.a)


def trace(m: Moebius) -> complex:
    return m.a + m.d


def commutator(m: Moebius, n: Moebius) -> Moebius:
    """m n m^-1 n^-1."""
    return compose(compose(m, n), compose(inverse(m), inverse(n)))


def proj_dist(m: Moebius, n: Moebius) -> float:
    """Max entrywise distance between m and ±n (matrices up to sign)."""
    plus = max(abs(m.a - n.a), abs(m.b - n.b), abs(m.c - n.c), abs(m.d - n.d))
    minus = max(abs(m.a + n.a), abs(m.b + n.b), abs(m.c + n.c), abs(m.d + n.d))
    return min(plus, minus)


@dataclass(frozen=True)
class PuncturedTorusRep:
    """Generator pair (A, B) of the one-parameter family at parameter z."""

    A: Moebius
    B: Moebius
    z: complex


@dataclass(frozen=True)
class ExtendedRep:
    """A punctured-torus pair extended by the commuting parabolic C."""

    base: PuncturedTorusRep
    C: Moebius
    w: complex


def make_sigma_z(z) -> PuncturedTorusRep:
    z = complex(z)
    A = Moebius(1j * z, 1j, 1j, 0.0)
    B = Moebius(1.0, 2.0, 0.0, 1.0)
    return PuncturedTorusRep(A=A, B=B, z=z)


def make_sigma_zw(z, w) -> ExtendedRep:
    base = make_sigma_z(z)
    w = complex(w)
    C = Moebius(1.0, w, 0.0, 1.0)
    return ExtendedRep(base=base, C=C, w=w)


def word_matrix(rep: PuncturedTorusRep, word: str) -> Moebius:
    """Evaluate a word over a, b, A=a^-1, B=b^-1 in the given representation.

    This is the independent evaluation path used to cross-check the trace
    recursion: multiply the generator matrices letter by letter.
    """
    table = {
        "a": rep.A,
        "b": rep.B,
        "A": inverse(rep.A),
        "B": inverse(rep.B),
    }
    out = identity()
    for ch in word:
        try:
            out = compose(out, table[ch])
        except KeyError:
            raise ValueError(f"word letter {ch!r} not in a/b/A/B") from None
    return out


def normalized_length(w) -> float:
    """Length of the translation w normalized by the coarea of the lattice <2, w>.

    The two parabolic translations 2 (from b) and w (from c) span a rank-two
    lattice of area 2*Im(w); the scale-free length of the w-curve in that
    lattice is |w| / sqrt(2*Im(w)).  Defined for Im w > 0 only.
    """
    w = complex(w)
    if w.imag <= 0:
        raise ValueError("not a valid cusp parameter: Im w must be positive")
    return abs(w) / math.sqrt(2.0 * w.imag)
