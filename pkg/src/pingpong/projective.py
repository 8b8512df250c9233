"""Projective points over Q((t)) and their reduction to residue projective space.

A tuple of Laurent polynomials is *normalized* when every coordinate has
valuation >= 0 and the minimum valuation is exactly 0. Reduction ``reduce_pi``
evaluates a normalized tuple at ``t = 0``; some coordinate is a unit, so the
result is never the zero vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, ZeroVector
from .exact import LaurentPoly, Matrix, as_rational, rational_to_str


def canonical_rational_point(coords: Sequence) -> tuple[Fraction, ...]:
    """Scale so that the first nonzero coordinate is 1."""
    coords = tuple(as_rational(c) for c in coords)
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ZeroVector("the zero vector has no projective class")
    if lead == 1:
        return coords
    return tuple(c / lead for c in coords)


@dataclass(frozen=True)
class ProjPointC:
    """Point of residue projective space, first nonzero coordinate equal to 1."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", canonical_rational_point(self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def to_json(self) -> list[str]:
        return [rational_to_str(c) for c in self.coords]

    @classmethod
    def from_json(cls, obj) -> "ProjPointC":
        return cls(tuple(Fraction(x) for x in obj))


@dataclass(frozen=True)
class CovectorQ:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_rational(c) for c in self.coords)
        if not any(coords):
            raise ZeroVector("covector must be nonzero")
        object.__setattr__(self, "coords", coords)

    def pair(self, vec: Sequence):
        if len(vec) != len(self.coords):
            raise DimensionMismatch("covector and vector lengths differ")
        acc = None
        for a, b in zip(self.coords, vec):
            if a and b:
                acc = a * b if acc is None else acc + a * b
        if acc is None:
            return LaurentPoly() if any(isinstance(x, LaurentPoly) for x in vec) else Fraction(0)
        return acc

    def to_json(self) -> list[str]:
        return [rational_to_str(c) for c in self.coords]


class ProjPointL:
    """Point of projective space over Q((t)), stored normalized."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[LaurentPoly]):
        self.coords = normalize_coords(coords)

    @classmethod
    def _trusted(cls, coords: tuple[LaurentPoly, ...]) -> "ProjPointL":
        p = cls.__new__(cls)
        p.coords = coords
        return p

    @classmethod
    def from_rational(cls, coords: Sequence) -> "ProjPointL":
        """Lift a rational point as constant Laurent polynomials."""
        return cls([LaurentPoly.constant(as_rational(c)) for c in coords])

    def __len__(self) -> int:
        return len(self.coords)

    def residue(self) -> ProjPointC:
        return reduce_pi(self)

    def same_point(self, other: "ProjPointL") -> bool:
        """Projective equality: all 2x2 minors of the coordinate pair vanish."""
        a, b = self.coords, other.coords
        if len(a) != len(b):
            return False
        n = len(a)
        # both are normalized, so a zero coordinate on one side must be zero on the other
        for i in range(n):
            if bool(a[i]) != bool(b[i]):
                return False
        for i in range(n):
            for j in range(i + 1, n):
                if a[i] * b[j] != a[j] * b[i]:
                    return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjPointL):
            return NotImplemented
        return self.same_point(other)

    __hash__ = None

    def __repr__(self) -> str:
        return "[" + " : ".join(repr(c) for c in self.coords) + "]"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, obj) -> "ProjPointL":
        return cls([LaurentPoly.from_json(x) for x in obj])


def normalize_coords(raw: Sequence[LaurentPoly]) -> tuple[LaurentPoly, ...]:
    coords = tuple(c if isinstance(c, LaurentPoly) else LaurentPoly.constant(as_rational(c)) for c in raw)
    m = min((c.valuation() for c in coords), default=None)
    if m is None or m == float("inf"):
        raise ZeroVector("all coordinates are zero")
    if m == 0:
        return coords
    return tuple(c.shift(-m) for c in coords)


def normalize(raw: Sequence[LaurentPoly]) -> ProjPointL:
    return ProjPointL(raw)


def reduce_pi(p: ProjPointL) -> ProjPointC:
    return ProjPointC(tuple(c.eval_at_zero() for c in p.coords))


def in_ball(p: ProjPointL, v: Sequence) -> bool:
    """Whether ``p`` reduces to the projective class of the rational vector ``v``."""
    if len(v) != len(p):
        raise DimensionMismatch("point and vector lengths differ")
    target = canonical_rational_point(v)
    return reduce_pi(p).coords == target


def residue_pairing(p: ProjPointL, r: CovectorQ) -> Fraction:
    return r.pair(reduce_pi(p).coords)


def off_hyperplane(p: ProjPointL, r: CovectorQ | Sequence) -> bool:
    """Whether ``p`` lies outside the preimage of the residue hyperplane ``ker r``.

    Computed twice: through the residue pairing and through the valuation of
    the Laurent pairing. The two must agree.
    """
    if not isinstance(r, CovectorQ):
        r = CovectorQ(tuple(r))
    by_residue = residue_pairing(p, r) != 0
    by_valuation = r.pair(p.coords).valuation() == 0
    if by_residue != by_valuation:
        raise AssertionError(f"hyperplane tests disagree for {p!r} and {r.coords}")
    return by_residue


def apply_matrix(m: Matrix, p: ProjPointL) -> ProjPointL:
    if m.n != len(p):
        raise DimensionMismatch("matrix and point dimensions differ")
    return ProjPointL(m.apply(p.coords))
