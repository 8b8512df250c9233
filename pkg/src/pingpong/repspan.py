"""Instance-level checks of the representation-theoretic inputs to the h-search.

* :func:`span_rank` -- exact rank over Q of the span of the conjugates
  ``rho(h) (v v*) rho(h)^{-1}`` for sampled ``h``.
* :func:`diagonal_pairing_search` -- find ``h`` with
  ``(h v)^T J (gamma h v) != 0`` for orthogonal groups.
* :func:`scalar_plus_skew_exclusion` -- a diagonalizable ``O != I`` in
  SO(2k+1) is never ``c I + M`` with ``M`` skew for ``J``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import Exhausted, InvalidWitness, MembershipViolation
from .exact import Matrix, rank, rational_to_str
from .groups import Element, GroupSpec, membership, random_element

SAMPLE_COMPLEXITY = 8


@dataclass(frozen=True)
class RankExperiment:
    """Which rank-one tensor to move around, and how many samples to draw.

    ``covector`` picks ``e_0^T`` (``"vstar"``, pairs to 1 with ``v = e_0``) or
    ``e_n^T`` (``"wstar"``, pairs to 0). Both indices come from the group's
    basis convention, shared with the certifier.
    """

    spec: GroupSpec
    samples: int | None = None
    seed: int = 0
    covector: str = "vstar"
    complexity: int = SAMPLE_COMPLEXITY

    def __post_init__(self):
        if self.covector not in ("vstar", "wstar"):
            raise ValueError("covector must be 'vstar' or 'wstar'")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be >= 1")

    @property
    def n_samples(self) -> int:
        return self.samples if self.samples is not None else self.spec.dim ** 2 + 5

    @property
    def v_index(self) -> int:
        return self.spec.attracting_index

    @property
    def covector_index(self) -> int:
        return self.spec.attracting_index if self.covector == "vstar" else self.spec.repelling_index

    def target(self) -> int:
        """Dimension the span is known to reach.

        ``v*``: End V for SL, sl(V) for SO and G2. ``w*``: sl(V) for SL; for
        SO and G2, ``e_0 e_n^T = e_0 e_0^T J`` is J-symmetric, so the span is
        the traceless part of Sym^2 V.
        """
        n = self.spec.dim
        if self.covector == "vstar":
            return n * n if self.spec.family == "SL" else n * n - 1
        if self.spec.has_form:
            return n * (n + 1) // 2 - 1
        return n * n - 1

    def draw(self) -> list[Element]:
        rng = random.Random(self.seed)
        return [random_element(self.spec, rng, self.complexity) for _ in range(self.n_samples)]


@dataclass
class RankReport:
    spec: GroupSpec
    achieved: int
    target: int
    samples: int
    seed: int
    covector: str
    digest: str

    @property
    def ok(self) -> bool:
        return self.achieved >= self.target

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "covector": self.covector,
            "samples": self.samples,
            "seed": self.seed,
            "achieved_rank": self.achieved,
            "target": self.target,
            "max_possible": self.spec.dim ** 2,
            "success": self.ok,
            "samples_sha256": self.digest,
        }


def conjugated_tensor(h: Element, v_index: int, cov_index: int) -> Matrix:
    """``h (e_v e_c^T) h^{-1}`` as an outer product."""
    col = h.matrix.column(v_index)
    row = h.inverse().matrix.row(cov_index)
    return Matrix([[a * b for b in row] for a in col])


def span_rank(exp: RankExperiment, samples: Sequence[Element] | None = None) -> RankReport:
    if samples is None:
        samples = exp.draw()
    vecs = []
    digest = hashlib.sha256()
    for h in samples:
        m = conjugated_tensor(h, exp.v_index, exp.covector_index)
        vecs.append([x for r in m.rows for x in r])
        digest.update(",".join(rational_to_str(x) for r in h.matrix.rows for x in r).encode())
        digest.update(b";")
    return RankReport(exp.spec, rank(vecs), exp.target(), len(samples), exp.seed,
                      exp.covector, digest.hexdigest())


def _form_pairing(spec: GroupSpec, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    n = spec.dim
    return sum((x[i] * y[n - 1 - i] for i in range(n)), Fraction(0))


def diagonal_pairing(spec: GroupSpec, gamma: Element, h: Element, v: Sequence[Fraction]) -> Fraction:
    """``(h v)^T J (gamma h v)``."""
    hv = h.matrix.apply(v)
    return _form_pairing(spec, hv, gamma.matrix.apply(hv))


@dataclass
class PairingSearchResult:
    h: Element
    value: Fraction
    attempt: int


def diagonal_pairing_search(spec: GroupSpec, gamma: Element, budget: int = 50, seed: int = 0,
                            v: Sequence | None = None) -> PairingSearchResult:
    if not spec.has_form:
        raise ValueError("diagonal pairing search needs an orthogonal group (SO or G2)")
    ok, why = membership(spec, gamma.matrix)
    if not ok:
        raise MembershipViolation(f"gamma is not in {spec.name()}: {why}")
    if gamma.is_identity():
        raise ValueError("gamma must not be the identity")
    v = spec.basis_vector(spec.attracting_index) if v is None else tuple(Fraction(x) for x in v)
    if not any(v):
        raise ValueError("v must be nonzero")
    for k in range(1, budget + 1):
        h = Element.identity(spec) if k == 1 else random_element(
            spec, random.Random(seed * 1_000_003 + k), 4 + 2 * ((k - 1) // 10))
        val = diagonal_pairing(spec, gamma, h, v)
        if val != 0:
            return PairingSearchResult(h, val, k)
    raise Exhausted(f"no h with nonzero pairing in {budget} attempts")


def scalar_plus_skew_exclusion(spec: GroupSpec, o: Element, witness: tuple[Element, Element]) -> bool:
    """True iff ``O == I`` or ``O + J^{-1} O^T J`` is not scalar.

    ``witness = (u, D)`` must satisfy ``O = u D u^{-1}`` with ``D`` diagonal.
    """
    if spec.family != "SO":
        raise ValueError("the exclusion is stated for SO(2k+1)")
    ok, why = membership(spec, o.matrix)
    if not ok:
        raise MembershipViolation(f"O is not in {spec.name()}: {why}")
    u, d = witness
    dm = d.matrix
    if any(dm[i, j] for i in range(dm.n) for j in range(dm.n) if i != j):
        raise InvalidWitness("D is not diagonal")
    if u.matrix @ dm @ u.matrix.inverse() != o.matrix:
        raise InvalidWitness("u D u^-1 does not reproduce O")
    if o.is_identity():
        return True
    j = spec.gram()
    return not (o.matrix + j @ o.matrix.transpose() @ j).is_scalar()
