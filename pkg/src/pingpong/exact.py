"""Exact rationals, Laurent polynomials in ``t`` and square matrices over both.

Rationals are :class:`fractions.Fraction`. A :class:`LaurentPoly` is an
immutable finite sum ``sum c_k t^k`` with ``k`` ranging over the integers.
:class:`Matrix` is ring-agnostic: entries may be ``Fraction`` or
``LaurentPoly``, and only :meth:`Matrix.inverse` / :meth:`Matrix.det` are
restricted to rational entries.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import DimensionMismatch, NegativeValuation, SingularMatrix

INF = math.inf

Scalar = Union[int, Fraction]


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return Fraction(x)


def rational_to_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_str(s) -> Fraction:
    if isinstance(s, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise TypeError(f"expected a rational string, got {type(s).__name__}")
    return Fraction(s.strip())


class LaurentPoly:
    """Finite Laurent polynomial with rational coefficients.

    Terms are kept sorted by exponent and no stored coefficient is zero, so
    structural equality is mathematical equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] | Scalar | None = None):
        if terms is None:
            items: Iterable[tuple[int, Scalar]] = ()
        elif isinstance(terms, Mapping):
            items = terms.items()
        elif isinstance(terms, (int, Fraction)):
            items = ((0, terms),)
        else:
            items = terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"exponent must be an int, got {e!r}")
            acc[e] = acc.get(e, Fraction(0)) + as_rational(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def coeff(self, exponent: int) -> Fraction:
        for e, c in self._terms:
            if e == exponent:
                return c
            if e > exponent:
                break
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def valuation(self) -> int | float:
        """Lowest exponent with nonzero coefficient; ``INF`` for zero."""
        return self._terms[0][0] if self._terms else INF

    def degree(self) -> int | float:
        return self._terms[-1][0] if self._terms else -INF

    def eval_at_zero(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if self._terms[0][0] < 0:
            raise NegativeValuation(f"{self!r} has valuation {self._terms[0][0]} < 0")
        return self.coeff(0)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        if k == 0:
            return self
        return LaurentPoly._raw(tuple((e + k, c) for e, c in self._terms))

    def scale(self, c: Scalar) -> "LaurentPoly":
        c = as_rational(c)
        if not c:
            return ZERO
        return LaurentPoly._raw(tuple((e, c * x) for e, x in self._terms))

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        acc = dict(self._terms)
        for e, c in o._terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            (e, c), = self._terms
            return LaurentPoly._raw(((e * k, c ** k),))
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            cs = rational_to_str(c)
            if e == 0:
                parts.append(cs)
            else:
                mono = "t" if e == 1 else f"t^{e}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict[str, str]:
        return {str(e): rational_to_str(c) for e, c in self._terms}

    @classmethod
    def from_json(cls, obj) -> "LaurentPoly":
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return cls.constant(rational_from_str(obj))
        if not isinstance(obj, Mapping):
            raise TypeError(f"expected an exponent->coefficient object, got {obj!r}")
        return cls({int(e): rational_from_str(c) for e, c in obj.items()})


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
T = LaurentPoly.monomial(1)


def lp_valuation(f: LaurentPoly) -> int | float:
    return f.valuation()


def lp_eval_at_zero(f: LaurentPoly) -> Fraction:
    return f.eval_at_zero()


def lp_arith(f: LaurentPoly, g: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def _zero_like(x):
    return ZERO if isinstance(x, LaurentPoly) else Fraction(0)


class Matrix:
    """Immutable square matrix over Q or over the Laurent ring."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise DimensionMismatch("matrix must have dimension >= 1")
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        self.rows = tuple(
            tuple(x if isinstance(x, (LaurentPoly, Fraction)) else as_rational(x) for x in r)
            for r in rows
        )
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        rows = []
        for i, d in enumerate(entries):
            z = _zero_like(d)
            rows.append([d if i == j else z for j in range(n)])
        return cls(rows)

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Matrix":
        return cls([[1 if (a, b) == (i, j) else 0 for b in range(n)] for a in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def is_laurent(self) -> bool:
        return any(isinstance(x, LaurentPoly) for r in self.rows for x in r)

    def to_laurent(self) -> "Matrix":
        return Matrix._raw(tuple(
            tuple(x if isinstance(x, LaurentPoly) else LaurentPoly.constant(x) for x in r)
            for r in self.rows
        ))

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.rows)))

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix._raw(tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix._raw(tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        ))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        cols = list(zip(*other.rows))
        zero = ZERO if (self.is_laurent() or other.is_laurent()) else Fraction(0)
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if not a or not b:
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                row.append(zero if acc is None else acc)
            out.append(tuple(row))
        return Matrix._raw(tuple(out))

    __mul__ = __matmul__

    def scale(self, c) -> "Matrix":
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows))

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(vec) != self.n:
            raise DimensionMismatch(f"vector of length {len(vec)} for dimension {self.n}")
        out = []
        for r in self.rows:
            acc = None
            for a, b in zip(r, vec):
                if not a or not b:
                    continue
                p = a * b
                acc = p if acc is None else acc + p
            if acc is None:
                acc = ZERO if any(isinstance(x, LaurentPoly) for x in (*r, *vec)) else Fraction(0)
            out.append(acc)
        return tuple(out)

    def covector_apply(self, covec: Sequence) -> tuple:
        """Row-vector times matrix."""
        return self.transpose().apply(covec)

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, self.n):
            acc = acc + self.rows[i][i]
        return acc

    def is_identity(self) -> bool:
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x != (1 if i == j else 0):
                    return False
        return True

    def is_scalar(self) -> bool:
        d = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x != (d if i == j else 0):
                    return False
        return True

    def _require_rational(self, what: str):
        if self.is_laurent():
            raise TypeError(f"{what} is only implemented for rational matrices")

    def det(self) -> Fraction:
        self._require_rational("det")
        a = [list(r) for r in self.rows]
        n = self.n
        det = Fraction(1)
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            p = a[col][col]
            det *= p
            for i in range(col + 1, n):
                f = a[i][col]
                if f:
                    f /= p
                    ai, ac = a[i], a[col]
                    for j in range(col, n):
                        ai[j] -= f * ac[j]
        return det

    def inverse(self) -> "Matrix":
        """Exact inverse by Gauss-Jordan elimination."""
        self._require_rational("inverse")
        n = self.n
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                raise SingularMatrix("matrix is not invertible")
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            if p != 1:
                a[col] = [x / p for x in a[col]]
            ac = a[col]
            for i in range(n):
                if i != col and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], ac)]
        return Matrix._raw(tuple(tuple(r[n:]) for r in a))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self) -> str:
        def fmt(x):
            return rational_to_str(x) if isinstance(x, Fraction) else f"({x!r})"
        return "Matrix([" + ", ".join("[" + ", ".join(fmt(x) for x in r) + "]" for r in self.rows) + "])"

    def to_json(self) -> list:
        if self.is_laurent():
            return [[x.to_json() if isinstance(x, LaurentPoly) else LaurentPoly.constant(x).to_json() for x in r]
                    for r in self.rows]
        return [[rational_to_str(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, obj) -> "Matrix":
        if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
            raise TypeError("matrix must be a non-empty array of arrays")
        laurent = any(isinstance(x, dict) for r in obj for x in r)
        if laurent:
            return cls([[LaurentPoly.from_json(x) for x in r] for r in obj])
        return cls([[rational_from_str(x) for x in r] for r in obj])


def mat_ops(a: Matrix, b: Matrix, op: str) -> Matrix:
    if op == "mul":
        return a @ b
    if op == "add":
        return a + b
    raise ValueError(f"unknown op {op!r}")


def mat_inv(a: Matrix) -> Matrix:
    return a.inverse()


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank over Q of a list of equal-length rational vectors."""
    work = [list(map(as_rational, r)) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pr = work[r]
        p = pr[col]
        for i in range(r + 1, len(work)):
            f = work[i][col]
            if f:
                f /= p
                wi = work[i]
                for j in range(col, ncols):
                    if pr[j]:
                        wi[j] -= f * pr[j]
        r += 1
        if r == len(work):
            break
    return r


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel ``{x : A x = 0}`` in reduced echelon form."""
    a = [list(map(as_rational, r)) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for row, pcol in enumerate(pivots):
            v[pcol] = -a[row][fcol]
        basis.append(v)
    return basis
