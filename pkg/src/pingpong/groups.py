"""Split matrix groups over Q: SL(n), SO(2k+1) and G2 in dimension 7.

All three act on Q^N with a fixed weight-sorted basis ``e_0, ..., e_{N-1}``:
the diagonal torus is split, and the cocharacters used for the ping-pong
element have strictly increasing exponents along that basis. Index 0 is the
attracting line of ``tau`` and index ``N-1`` the repelling one.

SO and G2 preserve the anti-diagonal Gram matrix ``J`` (ones on the
anti-diagonal). G2 additionally preserves an integral alternating 3-form whose
coefficients ship in ``data/g2_structure.json``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .errors import DimensionMismatch, InvalidCocharacter, MembershipViolation, UnknownRoot
from .exact import LaurentPoly, Matrix, rational_to_str

FAMILIES = ("SL", "SO", "G2", "GL")

PARAMETER_POOL = tuple(Fraction(x) for x in ("1", "-1", "2", "-2", "1/2", "-1/2", "3", "-1/3"))
TORUS_POOL = tuple(Fraction(x) for x in ("2", "3", "-2", "1/2", "5", "-3", "2/3", "7"))

G2_DATA = "g2_structure.json"


@lru_cache(maxsize=None)
def _g2_raw() -> bytes:
    return resources.files("pingpong").joinpath("data", G2_DATA).read_bytes()


def g2_checksum() -> str:
    return hashlib.sha256(_g2_raw()).hexdigest()


@lru_cache(maxsize=None)
def g2_data() -> dict:
    return json.loads(_g2_raw())


@lru_cache(maxsize=None)
def g2_trilinear() -> dict[tuple[int, int, int], int]:
    """Full alternating tensor ``phi[a, b, c]`` as a sparse dict."""
    phi = {}
    for a, b, c, coef in g2_data()["trilinear_form"]:
        for perm in itertools.permutations((a, b, c)):
            sign = 1
            for x, y in itertools.combinations(perm, 2):
                if x > y:
                    sign = -sign
            phi[perm] = sign * coef
    return phi


@dataclass(frozen=True)
class GroupSpec:
    family: str
    param: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "SL" and self.param < 2:
            raise ValueError("SL(n) needs n >= 2")
        if self.family == "SO" and self.param < 2:
            raise ValueError("SO(2k+1) needs k >= 2")
        if self.family == "GL" and self.param < 1:
            raise ValueError("GL(n) needs n >= 1")
        if self.family == "G2" and self.param != 0:
            object.__setattr__(self, "param", 0)

    @classmethod
    def SL(cls, n: int) -> "GroupSpec":
        return cls("SL", n)

    @classmethod
    def SO(cls, k: int) -> "GroupSpec":
        return cls("SO", k)

    @classmethod
    def G2(cls) -> "GroupSpec":
        return cls("G2")

    @classmethod
    def GL(cls, n: int) -> "GroupSpec":
        """Unconstrained invertible matrices; only for low-level probing."""
        return cls("GL", n)

    @property
    def dim(self) -> int:
        if self.family in ("SL", "GL"):
            return self.param
        if self.family == "SO":
            return 2 * self.param + 1
        return 7

    @property
    def attracting_index(self) -> int:
        return 0

    @property
    def repelling_index(self) -> int:
        return self.dim - 1

    @property
    def has_form(self) -> bool:
        return self.family in ("SO", "G2")

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def gram(self) -> Matrix:
        n = self.dim
        return Matrix([[int(i + j == n - 1) for j in range(n)] for i in range(n)])

    def name(self) -> str:
        if self.family == "SO":
            return f"SO({self.dim})"
        if self.family == "G2":
            return "G2"
        return f"{self.family}({self.param})"

    def to_json(self) -> dict:
        if self.family == "SO":
            return {"family": "SO", "k": self.param}
        if self.family == "G2":
            return {"family": "G2"}
        return {"family": self.family, "n": self.param}

    @classmethod
    def from_json(cls, obj: dict) -> "GroupSpec":
        if not isinstance(obj, dict) or "family" not in obj:
            raise ValueError(f"group spec must be an object with a 'family' key, got {obj!r}")
        fam = obj["family"]
        if fam in ("SL", "GL"):
            return cls(fam, int(obj["n"]))
        if fam == "SO":
            return cls("SO", int(obj["k"]))
        if fam == "G2":
            return cls("G2")
        raise ValueError(f"unknown family {fam!r}")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Accept JSON (``{"family":"SL","n":3}``) or shorthand ``SL3``, ``SO5``, ``G2``."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_json(json.loads(text))
        compact = text.upper().replace("(", "").replace(")", "").replace("_", "")
        if compact == "G2":
            return cls.G2()
        for fam in ("SL", "GL", "SO"):
            if compact.startswith(fam) and compact[len(fam):].isdigit():
                m = int(compact[len(fam):])
                if fam == "SO":
                    if m % 2 == 0:
                        raise ValueError("only odd orthogonal groups SO(2k+1) are supported")
                    return cls.SO((m - 1) // 2)
                return cls(fam, m)
        raise ValueError(f"cannot parse group {text!r}")


def _det_generic(m: Matrix):
    if not m.is_laurent():
        return m.det()
    n = m.n
    rows = m.rows
    total = LaurentPoly()
    for perm in itertools.permutations(range(n)):
        sign = 1
        for x, y in itertools.combinations(perm, 2):
            if x > y:
                sign = -sign
        term = LaurentPoly.constant(sign)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if not term:
                break
        total = total + term
    return total


def preserves_trilinear(m: Matrix) -> bool:
    """Whether ``phi(Mx, My, Mz) == phi(x, y, z)`` on all basis triples."""
    phi = g2_trilinear()
    rows = m.rows
    for a, b, c in itertools.combinations(range(7), 3):
        acc = 0
        for (l, p, q), coef in phi.items():
            x = rows[l][a]
            if not x:
                continue
            y = rows[p][b]
            if not y:
                continue
            z = rows[q][c]
            if not z:
                continue
            acc = acc + coef * (x * y * z)
        if acc != phi.get((a, b, c), 0):
            return False
    return True


def membership(spec: GroupSpec, m: Matrix) -> tuple[bool, str]:
    """Exact membership test; returns ``(ok, reason)`` with an empty reason on success."""
    if m.n != spec.dim:
        raise DimensionMismatch(f"{spec.name()} acts in dimension {spec.dim}, got {m.n}")
    if spec.family == "GL":
        return (True, "") if _det_generic(m) != 0 else (False, "det = 0")
    if spec.has_form:
        j = spec.gram()
        if m.transpose() @ j @ m != j:
            return False, "does not preserve the Gram form J"
    if spec.family == "G2":
        if not preserves_trilinear(m):
            return False, "does not preserve the G2 trilinear form"
        return True, ""
    d = _det_generic(m)
    if d != 1:
        return False, f"det = {d!r}"
    return True, ""


@dataclass(frozen=True, eq=False)
class Element:
    """A group element: an exact rational matrix tagged with its group."""

    spec: GroupSpec
    matrix: Matrix

    @classmethod
    def checked(cls, spec: GroupSpec, matrix: Matrix) -> "Element":
        ok, why = membership(spec, matrix)
        if not ok:
            raise MembershipViolation(f"not in {spec.name()}: {why}")
        return cls(spec, matrix)

    @classmethod
    def identity(cls, spec: GroupSpec) -> "Element":
        return cls(spec, Matrix.identity(spec.dim))

    def __matmul__(self, other: "Element") -> "Element":
        return Element(self.spec, self.matrix @ other.matrix)

    def inverse(self) -> "Element":
        if self.spec.has_form:
            # g^{-1} = J^{-1} g^T J, and J is its own inverse
            j = self.spec.gram()
            return Element(self.spec, j @ self.matrix.transpose() @ j)
        return Element(self.spec, self.matrix.inverse())

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"Element({self.spec.name()}, {self.matrix!r})"


# roots ----------------------------------------------------------------------

def roots(spec: GroupSpec) -> list[tuple[int, int]]:
    """All root ids. SL/SO: matrix position ``(i, j)`` of the leading unit; G2: lattice coordinates."""
    n = spec.dim
    if spec.family in ("SL", "GL"):
        return [(i, j) for i in range(n) for j in range(n) if i != j]
    if spec.family == "SO":
        top = n - 1
        return [(i, j) for i in range(n) for j in range(n) if i != j and i + j != top
                and ((i < j and i + j < top) or (i > j and i + j > top))]
    return [tuple(r["root"]) for r in g2_data()["root_vectors"]]


def positive_roots(spec: GroupSpec) -> list[tuple[int, int]]:
    """Roots whose root vectors are strictly upper triangular."""
    out = []
    for r in roots(spec):
        x = root_vector(spec, r)
        if all(i < j for i, row in enumerate(x.rows) for j, v in enumerate(row) if v):
            out.append(r)
    return out


@lru_cache(maxsize=None)
def root_vector(spec: GroupSpec, root_id) -> Matrix:
    """Nilpotent Lie algebra element spanning the root space."""
    root_id = tuple(root_id)
    if root_id not in roots(spec):
        raise UnknownRoot(f"{root_id!r} is not a root of {spec.name()}")
    n = spec.dim
    if spec.family in ("SL", "GL"):
        return Matrix.unit(n, *root_id)
    if spec.family == "SO":
        i, j = root_id
        top = n - 1
        return Matrix.unit(n, i, j) - Matrix.unit(n, top - j, top - i)
    for r in g2_data()["root_vectors"]:
        if tuple(r["root"]) == root_id:
            rows = [[0] * 7 for _ in range(7)]
            for i, j, v in r["entries"]:
                rows[i][j] = v
            return Matrix(rows)
    raise UnknownRoot(root_id)


def _exp_nilpotent(x: Matrix) -> Matrix:
    n = x.n
    out = Matrix.identity(n)
    power = Matrix.identity(n)
    k = 0
    while True:
        k += 1
        power = (power @ x).scale(Fraction(1, k))
        if all(not v for row in power.rows for v in row):
            return out
        out = out + power
        if k > n:
            raise ValueError("matrix is not nilpotent")


def root_element(spec: GroupSpec, root_id, s) -> Element:
    """``exp(s * X_root)``, computed exactly."""
    x = root_vector(spec, root_id).scale(Fraction(s))
    return Element(spec, _exp_nilpotent(x))


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_element(spec: GroupSpec, seed, complexity: int = 6) -> Element:
    """Product of ``complexity`` random root elements, reproducible per seed.

    ``seed`` may be an int or a :class:`random.Random`; a passed generator is
    advanced in place.
    """
    if complexity < 1:
        raise ValueError("complexity must be >= 1")
    rng = _rng(seed)
    rs = roots(spec)
    out = None
    for _ in range(complexity):
        g = root_element(spec, rng.choice(rs), rng.choice(PARAMETER_POOL))
        out = g if out is None else out @ g
    return out


def torus_element(spec: GroupSpec, params: Sequence) -> Element:
    """Diagonal torus element from free parameters.

    SL(n): ``n-1`` diagonal entries, the last one fixed by det = 1.
    SO(2k+1): ``k`` entries ``a_i``, giving ``diag(a_1..a_k, 1, 1/a_k..1/a_1)``.
    G2: two parameters ``(u, w)``; the entry on a basis vector of weight
    ``(x, y)`` is ``u^x w^y``.
    """
    params = [Fraction(p) for p in params]
    if any(p == 0 for p in params):
        raise ValueError("torus parameters must be nonzero")
    if spec.family in ("SL", "GL"):
        if len(params) != spec.dim - 1:
            raise ValueError(f"need {spec.dim - 1} parameters")
        prod = Fraction(1)
        for p in params:
            prod *= p
        diag = params + [1 / prod]
    elif spec.family == "SO":
        if len(params) != spec.param:
            raise ValueError(f"need {spec.param} parameters")
        diag = params + [Fraction(1)] + [1 / p for p in reversed(params)]
    else:
        if len(params) != 2:
            raise ValueError("G2 torus needs 2 parameters")
        u, w = params
        diag = [u ** x * w ** y for x, y in g2_data()["basis_weights"]]
    return Element(spec, Matrix.diagonal(diag))


def random_torus_conjugate(spec: GroupSpec, seed, complexity: int = 6) -> tuple[Element, Element, Element]:
    """``(u D u^{-1}, u, D)`` with ``D`` a random regular-ish torus element.

    The result is semisimple by construction; ``(u, D)`` is the witness.
    """
    rng = _rng(seed)
    nparams = {"SL": spec.dim - 1, "GL": spec.dim - 1, "SO": spec.param, "G2": 2}[spec.family]
    while True:
        params = [rng.choice(TORUS_POOL) for _ in range(nparams)]
        d = torus_element(spec, params)
        if not d.matrix.is_scalar():
            break
    u = random_element(spec, rng, complexity)
    return u @ d @ u.inverse(), u, d


# cocharacters ----------------------------------------------------------------

@dataclass(frozen=True)
class Cocharacter:
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(k) for k in self.exponents))

    def validate(self, spec: GroupSpec) -> None:
        k = self.exponents
        if len(k) != spec.dim:
            raise InvalidCocharacter(f"need {spec.dim} exponents for {spec.name()}, got {len(k)}")
        if len(set(k)) != len(k):
            raise InvalidCocharacter(f"exponents {k} are not pairwise distinct")
        if any(a >= b for a, b in zip(k, k[1:])):
            raise InvalidCocharacter(f"exponents {k} are not strictly increasing")
        if spec.family == "SL" and sum(k) != 0:
            raise InvalidCocharacter(f"exponents {k} do not sum to 0")
        if spec.has_form and any(k[i] != -k[-1 - i] for i in range(len(k))):
            raise InvalidCocharacter(f"exponents {k} are not antisymmetric under reversal")
        if spec.family == "G2":
            for a, b, c, _ in g2_data()["trilinear_form"]:
                if k[a] + k[b] + k[c] != 0:
                    raise InvalidCocharacter(
                        f"exponents {k} do not lie in the G2 torus (triple {(a, b, c)} sums to "
                        f"{k[a] + k[b] + k[c]})")


def default_cocharacter(spec: GroupSpec) -> Cocharacter:
    n = spec.dim
    if spec.family == "G2":
        return Cocharacter((-3, -2, -1, 0, 1, 2, 3))
    if n % 2:
        return Cocharacter(tuple(i - (n - 1) // 2 for i in range(n)))
    return Cocharacter(tuple(2 * i - (n - 1) for i in range(n)))


def build_tau(spec: GroupSpec, c: Cocharacter | Sequence[int]) -> Matrix:
    if not isinstance(c, Cocharacter):
        c = Cocharacter(tuple(c))
    c.validate(spec)
    return Matrix.diagonal([LaurentPoly.monomial(k) for k in c.exponents])


def build_tau_inverse(spec: GroupSpec, c: Cocharacter | Sequence[int]) -> Matrix:
    if not isinstance(c, Cocharacter):
        c = Cocharacter(tuple(c))
    c.validate(spec)
    return Matrix.diagonal([LaurentPoly.monomial(-k) for k in c.exponents])


def element_to_json(e: Element) -> list:
    return [[rational_to_str(x) for x in r] for r in e.matrix.rows]
