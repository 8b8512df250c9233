"""Ping-pong certificates for ``g_i = eta_i tau eta_i^{-1}``.

Pipeline: :func:`build_etas` conjugates the given ``gamma_i`` by ``h``;
:func:`check_nonincidence` computes the exact cross pairings between the
attracting/repelling lines ``eta_i e_0``, ``eta_i e_n`` and the forbidden
hyperplanes ``e_0^T eta_j^{-1}``, ``e_n^T eta_j^{-1}``; :func:`find_z` picks a
base point off every hyperplane. Nonvanishing of all these scalars proves the
``g_i`` generate a free group. :func:`trace_word` and
:func:`verify_free_up_to` replay the ball/hyperplane induction word by word
as an executable cross-check.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .errors import DuplicateGamma, Exhausted, MembershipViolation, Unreachable
from .exact import LaurentPoly, Matrix, rational_from_str, rational_to_str
from .groups import (Cocharacter, Element, GroupSpec, build_tau, build_tau_inverse,
                     membership, random_element)
from .projective import (CovectorQ, ProjPointC, ProjPointL, apply_matrix, in_ball,
                         off_hyperplane)
from .words import FreeWord, count_reduced, letter_order

SCHEMA = "pingpong-certificate/1"

SIGN_NAME = {1: "+", -1: "-"}
SIGN_VALUE = {"+": 1, "-": -1}


# families ---------------------------------------------------------------------

@dataclass(frozen=True)
class EtaFamily:
    spec: GroupSpec
    etas: tuple[Matrix, ...]
    eta_inverses: tuple[Matrix, ...]

    @classmethod
    def from_matrices(cls, etas: Sequence[Matrix], spec: GroupSpec | None = None) -> "EtaFamily":
        """Low-level entry: arbitrary invertible matrices, no group membership required."""
        etas = tuple(etas)
        if not etas:
            raise ValueError("need at least one eta")
        if spec is None:
            spec = GroupSpec.GL(etas[0].n)
        return cls(spec, etas, tuple(e.inverse() for e in etas))

    @property
    def r(self) -> int:
        return len(self.etas)

    @property
    def dim(self) -> int:
        return self.spec.dim

    def column(self, i: int, sign: int) -> tuple[Fraction, ...]:
        """``eta_i e_0`` for sign +1, ``eta_i e_n`` for sign -1 (``i`` is 1-based)."""
        idx = self.spec.attracting_index if sign > 0 else self.spec.repelling_index
        return self.etas[i - 1].column(idx)

    def row(self, j: int, sign: int) -> tuple[Fraction, ...]:
        """``e_0^T eta_j^{-1}`` for sign +1, ``e_n^T eta_j^{-1}`` for sign -1."""
        idx = self.spec.attracting_index if sign > 0 else self.spec.repelling_index
        return self.eta_inverses[j - 1].row(idx)

    def covectors(self) -> list[tuple[int, int, tuple[Fraction, ...]]]:
        return [(j, s, self.row(j, s)) for j in range(1, self.r + 1) for s in (1, -1)]


def _is_central_multiple(a: Matrix, b: Matrix, spec: GroupSpec) -> bool:
    if spec.family in ("SL", "GL"):
        return (b.inverse() @ a).is_scalar()
    return a == b


def build_etas(gammas: Sequence[Element], h: Element) -> EtaFamily:
    """``eta_i = h^{-1} gamma_i h`` with exact cached inverses."""
    if not gammas:
        raise ValueError("need at least one gamma")
    spec = h.spec
    for k, g in enumerate([h, *gammas]):
        what = "h" if k == 0 else f"gamma_{k}"
        if g.spec != spec:
            raise MembershipViolation(f"{what} belongs to {g.spec.name()}, expected {spec.name()}")
        ok, why = membership(spec, g.matrix)
        if not ok:
            raise MembershipViolation(f"{what} is not in {spec.name()}: {why}")
    for a in range(len(gammas)):
        for b in range(a + 1, len(gammas)):
            if _is_central_multiple(gammas[a].matrix, gammas[b].matrix, spec):
                raise DuplicateGamma(f"gamma_{a + 1} and gamma_{b + 1} agree modulo the center")
    h_inv = h.inverse().matrix
    etas = tuple(h_inv @ g.matrix @ h.matrix for g in gammas)
    return EtaFamily(spec, etas, tuple(e.inverse() for e in etas))


# non-incidence ------------------------------------------------------------------

def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


PairKey = tuple[int, int, int, int]  # (i, j, sign_i, sign_j)


def compute_pairings(family: EtaFamily) -> dict[PairKey, Fraction]:
    """All ``row_j^{sign_j} . column_i^{sign_i}`` for ``i != j``."""
    out = {}
    for j in range(1, family.r + 1):
        for sj in (1, -1):
            row = family.row(j, sj)
            for i in range(1, family.r + 1):
                if i == j:
                    continue
                for si in (1, -1):
                    out[(i, j, si, sj)] = _dot(row, family.column(i, si))
    return dict(sorted(out.items(), key=lambda kv: (kv[0][0], kv[0][1], -kv[0][2], -kv[0][3])))


def compute_self_pairings(family: EtaFamily) -> dict[tuple[int, int], Fraction]:
    return {(i, s): _dot(family.row(i, s), family.column(i, s))
            for i in range(1, family.r + 1) for s in (1, -1)}


@dataclass
class ViolationReport:
    violations: list[PairKey]
    pairings: dict[PairKey, Fraction]

    @property
    def ok(self) -> bool:
        return False

    def describe(self) -> list[str]:
        return [f"pairing (i={i}, j={j}, {SIGN_NAME[si]},{SIGN_NAME[sj]}) vanishes"
                for i, j, si, sj in self.violations]

    def to_json(self) -> dict:
        return {
            "violations": [{"i": i, "j": j, "sign_i": SIGN_NAME[si], "sign_j": SIGN_NAME[sj]}
                           for i, j, si, sj in self.violations],
            "pairings": _pairings_to_json(self.pairings),
        }


@dataclass
class Certificate:
    family: EtaFamily
    pairings: dict[PairKey, Fraction]
    self_pairings: dict[tuple[int, int], Fraction]
    exponents: tuple[int, ...] | None = None
    h: Element | None = None
    gammas: tuple[Element, ...] | None = None
    z: ProjPointC | None = None
    z_pairings: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    verification: "VerifySummary | None" = None
    seed: int | None = None
    search_attempt: int | None = None

    @property
    def ok(self) -> bool:
        return True

    @property
    def spec(self) -> GroupSpec:
        return self.family.spec

    def to_json(self, created: str | None = None) -> dict:
        if created is None:
            created = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return {
            "schema": SCHEMA,
            "group": self.spec.to_json(),
            "exponents": list(self.exponents) if self.exponents is not None else None,
            "gammas": [g.matrix.to_json() for g in self.gammas] if self.gammas else None,
            "h": self.h.matrix.to_json() if self.h is not None else None,
            "etas": [e.to_json() for e in self.family.etas],
            "pairings": _pairings_to_json(self.pairings),
            "self_pairings": [{"i": i, "sign": SIGN_NAME[s], "value": rational_to_str(v)}
                              for (i, s), v in self.self_pairings.items()],
            "z": self.z.to_json() if self.z is not None else None,
            "z_pairings": [{"j": j, "sign": SIGN_NAME[s], "value": rational_to_str(v)}
                           for (j, s), v in self.z_pairings.items()],
            "verification": self.verification.to_json() if self.verification else None,
            "seed": self.seed,
            "search_attempt": self.search_attempt,
            "metadata": {"created": created, "tool": f"pingpong {__version__}"},
        }


def _pairings_to_json(pairings: dict[PairKey, Fraction]) -> list[dict]:
    return [{"i": i, "j": j, "sign_i": SIGN_NAME[si], "sign_j": SIGN_NAME[sj],
             "value": rational_to_str(v)} for (i, j, si, sj), v in pairings.items()]


def check_nonincidence(family: EtaFamily) -> Certificate | ViolationReport:
    pairings = compute_pairings(family)
    selfp = compute_self_pairings(family)
    # e_0^T eta^{-1} eta e_0 = 1: a failure here means the cached inverses are wrong
    assert all(v == 1 for v in selfp.values()), selfp
    bad = [k for k, v in pairings.items() if v == 0]
    if bad:
        return ViolationReport(bad, pairings)
    return Certificate(family, pairings, selfp)


def find_z(family: EtaFamily) -> ProjPointC:
    """First ``(1, m, m^2, ..., m^n)``, ``m = 1, 2, ...``, off every forbidden hyperplane.

    Each covector vanishes on at most ``n`` values of ``m`` (a nonzero
    polynomial of degree <= n), so ``m <= 2rn + 1`` always succeeds.
    """
    n = family.dim - 1
    covs = [row for _, _, row in family.covectors()]
    bound = 2 * family.r * n + 1
    for m in range(1, bound + 1):
        z = [Fraction(m) ** p for p in range(n + 1)]
        if all(_dot(row, z) != 0 for row in covs):
            return ProjPointC(tuple(z))
    raise Unreachable(f"no base point found for m <= {bound}")


def z_pairings(family: EtaFamily, z: ProjPointC) -> dict[tuple[int, int], Fraction]:
    return {(j, s): _dot(row, z.coords) for j, s, row in family.covectors()}


# generators ----------------------------------------------------------------------

def make_generators(family: EtaFamily, exponents: Sequence[int] | Cocharacter,
                    check: bool = True) -> list[tuple[Matrix, Matrix]]:
    """``(g_i, g_i^{-1})`` with ``g_i = eta_i tau eta_i^{-1}``."""
    tau = build_tau(family.spec, exponents)
    tau_inv = build_tau_inverse(family.spec, exponents)
    out = []
    for eta, eta_inv in zip(family.etas, family.eta_inverses):
        g = eta @ tau @ eta_inv
        g_inv = eta @ tau_inv @ eta_inv
        if check and not (g @ g_inv).is_identity():
            raise AssertionError("g * g^{-1} != I")
        out.append((g, g_inv))
    return out


def word_matrix(word: FreeWord, gens: Sequence[tuple[Matrix, Matrix]]) -> Matrix:
    """Direct Laurent-matrix product ``g_{i_1}^{e_1} ... g_{i_l}^{e_l}``."""
    out = None
    for i, s in word.letters:
        g = gens[i - 1][0 if s > 0 else 1]
        out = g if out is None else out @ g
    if out is None:
        return Matrix.identity(gens[0][0].n).to_laurent()
    return out


# single-word trace (reference path on ProjPointL) ---------------------------------

@dataclass
class TraceStep:
    position: int             # 1-based position of the letter just applied
    letter: tuple[int, int]
    point: ProjPointL
    ball_target: tuple[Fraction, ...]
    in_ball: bool
    hyperplane: tuple[Fraction, ...] | None   # covector of the next letter to apply
    off_hyperplane: bool | None

    @property
    def ok(self) -> bool:
        return self.in_ball and self.off_hyperplane is not False


@dataclass
class WordTrace:
    word: FreeWord
    start_off_hyperplane: bool
    steps: list[TraceStep]
    image_differs: bool

    @property
    def ok(self) -> bool:
        return self.start_off_hyperplane and all(s.ok for s in self.steps) and self.image_differs


@dataclass
class FailureReport:
    word: FreeWord
    position: int        # 1-based letter position; l + 1 for the check on the lifted base point
    check: str           # "off_hyperplane" | "in_ball" | "not_fixed"
    trace: WordTrace | None = None

    @property
    def ok(self) -> bool:
        return False

    def describe(self) -> str:
        return f"word {self.word}: {self.check} check failed at letter position {self.position}"

    def to_json(self) -> dict:
        return {"word": str(self.word), "position": self.position, "check": self.check}


def _first_failure(tr: WordTrace) -> FailureReport | None:
    l = len(tr.word)
    if not tr.start_off_hyperplane:
        return FailureReport(tr.word, l, "off_hyperplane", tr)
    for st in tr.steps:
        if not st.in_ball:
            return FailureReport(tr.word, st.position, "in_ball", tr)
        if st.off_hyperplane is False:
            return FailureReport(tr.word, st.position - 1, "off_hyperplane", tr)
    if not tr.image_differs:
        return FailureReport(tr.word, 1, "not_fixed", tr)
    return None


def trace_word(word: FreeWord, gens: Sequence[tuple[Matrix, Matrix]], family: EtaFamily,
               z: ProjPointC, full: bool = False) -> WordTrace | FailureReport:
    """Apply the letters right to left and check the ball/hyperplane conditions.

    After applying letter ``j`` the point must lie in ``B_{eta e_0}`` (sign +)
    or ``B_{eta e_n}`` (sign -) of that letter's eta, and, when ``j > 1``, off
    the hyperplane of letter ``j - 1``. The final image must differ from the
    lifted base point. With ``full=True`` the trace is completed even after a
    failure.
    """
    if not isinstance(word, FreeWord):
        word = FreeWord(tuple(word))
    if not word.letters:
        raise ValueError("trace_word needs a non-empty reduced word")
    z_lift = ProjPointL.from_rational(z.coords)
    letters = word.letters
    l = len(letters)
    last_i, last_s = letters[-1]
    start_ok = off_hyperplane(z_lift, CovectorQ(family.row(last_i, last_s)))
    point = z_lift
    steps = []
    for pos in range(l, 0, -1):
        i, s = letters[pos - 1]
        point = apply_matrix(gens[i - 1][0 if s > 0 else 1], point)
        target = family.column(i, s)
        ib = in_ball(point, target)
        if pos > 1:
            ni, ns = letters[pos - 2]
            cov = family.row(ni, ns)
            oh = off_hyperplane(point, CovectorQ(cov))
        else:
            cov, oh = None, None
        steps.append(TraceStep(pos, (i, s), point, target, ib, cov, oh))
        if not full and not (ib and oh is not False):
            break
    differs = bool(steps) and len(steps) == l and not point.same_point(z_lift)
    tr = WordTrace(word, start_ok, steps, differs)
    fail = _first_failure(tr)
    if fail is not None:
        return fail
    return tr


# fast verification engine ----------------------------------------------------------

def _integral(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in vec]


def _integral_matrix(m: Matrix) -> np.ndarray:
    flat = _integral([x for r in m.rows for x in r])
    n = m.n
    return np.array([flat[i * n:(i + 1) * n] for i in range(n)], dtype=object)


def _proportional(a: Sequence[int], b: Sequence[int]) -> bool:
    p = next(k for k, x in enumerate(b) if x)
    bp = b[p]
    ap = a[p]
    return all(a[k] * bp == ap * b[k] for k in range(len(a)))


class _Engine:
    """Integer-coefficient replay of the trace.

    A point is an ``N x m`` object array ``V`` with coordinate ``i`` equal to
    ``sum_c V[i, c] t^c``; it is kept normalized (column 0 nonzero) and
    primitive, which is harmless projectively. ``g^{+-1}`` is applied as
    ``eta (tau^{+-1} (eta^{-1} V))``.
    """

    def __init__(self, family: EtaFamily, exponents: Sequence[int]):
        self.r = family.r
        self.n = family.dim
        self.k = tuple(exponents)
        self.fwd = [_integral_matrix(e) for e in family.etas]
        self.bwd = [_integral_matrix(e) for e in family.eta_inverses]
        self.target = {(i, s): _integral(family.column(i, s))
                       for i in range(1, self.r + 1) for s in (1, -1)}
        self.cov = {(i, s): _integral(family.row(i, s))
                    for i in range(1, self.r + 1) for s in (1, -1)}

    def lift(self, z: ProjPointC) -> np.ndarray:
        return np.array([[x] for x in _integral(z.coords)], dtype=object)

    def step(self, v: np.ndarray, i: int, s: int) -> np.ndarray:
        w = self.bwd[i - 1].dot(v)
        exps = [s * k for k in self.k]
        lo, hi = min(exps), max(exps)
        m = w.shape[1]
        shifted = np.zeros((self.n, m + hi - lo), dtype=object)
        for row, e in enumerate(exps):
            off = e - lo
            shifted[row, off:off + m] = w[row]
        u = self.fwd[i - 1].dot(shifted)
        nz = np.flatnonzero([any(col) for col in u.T])
        u = u[:, nz[0]:nz[-1] + 1]
        g = math.gcd(*u.ravel().tolist())
        if g > 1:
            u = u // g
        return u

    def pair(self, key: tuple[int, int], v: np.ndarray) -> int:
        c = self.cov[key]
        return sum(a * b for a, b in zip(c, v[:, 0]) if a)

    def in_ball(self, key: tuple[int, int], v: np.ndarray) -> bool:
        return _proportional(list(v[:, 0]), self.target[key])

    def to_point(self, v: np.ndarray) -> ProjPointL:
        return ProjPointL([LaurentPoly({c: int(x) for c, x in enumerate(row) if x}) for row in v])


@dataclass
class VerifySummary:
    max_len: int
    total: int = 0
    failures: int = 0
    first_failure: FailureReport | None = None
    by_length: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def merge(self, other: "VerifySummary") -> "VerifySummary":
        out = VerifySummary(max(self.max_len, other.max_len), self.total + other.total,
                            self.failures + other.failures)
        cands = [f for f in (self.first_failure, other.first_failure) if f is not None]
        out.first_failure = min(cands, key=_failure_key) if cands else None
        for d in (self.by_length, other.by_length):
            for k, v in d.items():
                out.by_length[k] = out.by_length.get(k, 0) + v
        return out

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "words": self.total,
            "failures": self.failures,
            "all_succeeded": self.ok,
            "first_failure": self.first_failure.to_json() if self.first_failure else None,
            "by_length": {str(k): v for k, v in sorted(self.by_length.items())},
        }


def _failure_key(f: FailureReport):
    r = max(i for i, _ in f.word.letters)
    order = {lt: k for k, lt in enumerate(letter_order(r))}
    return (len(f.word), tuple(order[lt] for lt in f.word.letters))


def _verify_partition(engine: _Engine, z: ProjPointC, max_len: int,
                      first_letters: Sequence[tuple[int, int]]) -> VerifySummary:
    summary = VerifySummary(max_len)
    z_vec = engine.lift(z)
    letters = letter_order(engine.r)

    def visit(v, suffix: tuple, inherited, depth: int):
        # suffix is the applied part of the word, leftmost letter first
        key = suffix[0]
        summary.total += 1
        summary.by_length[depth] = summary.by_length.get(depth, 0) + 1
        fail = inherited
        if fail is None and not engine.in_ball(key, v):
            fail = (depth, "in_ball")
        final = fail
        if final is None and v.shape[1] == 1 and _proportional(list(v[:, 0]), z_vec[:, 0].tolist()):
            final = (depth, "not_fixed")
        if final is not None:
            summary.failures += 1
            word = FreeWord(suffix)
            nfail = _to_report(word, final)
            if summary.first_failure is None or _failure_key(nfail) < _failure_key(summary.first_failure):
                summary.first_failure = nfail
        if depth == max_len:
            return
        for nxt in letters:
            if nxt == (key[0], -key[1]):
                continue
            child_fail = fail
            if child_fail is None and engine.pair(nxt, v) == 0:
                child_fail = (depth, "off_hyperplane_next")
            visit(engine.step(v, *nxt), (nxt,) + suffix, child_fail, depth + 1)

    for first in first_letters:
        start_fail = None if engine.pair(first, z_vec) != 0 else (0, "off_hyperplane_next")
        visit(engine.step(z_vec, *first), (first,), start_fail, 1)
    return summary


def _to_report(word: FreeWord, fail: tuple[int, str]) -> FailureReport:
    """``fail`` counts applied letters from the right; convert to a 1-based position."""
    depth, check = fail
    l = len(word)
    if check == "off_hyperplane_next":
        # point after ``depth`` letters, tested against the letter applied next
        return FailureReport(word, l - depth, "off_hyperplane")
    if check == "in_ball":
        return FailureReport(word, l - depth + 1, "in_ball")
    return FailureReport(word, 1, "not_fixed")


def _run_partition(args):
    family, exponents, z, max_len, firsts = args
    return _verify_partition(_Engine(family, exponents), z, max_len, firsts)


def verify_free_up_to(family: EtaFamily, exponents: Sequence[int] | Cocharacter, max_len: int,
                      z: ProjPointC | None = None, jobs: int = 1) -> VerifySummary:
    """Trace every reduced word of length ``<= max_len`` in ``x_1..x_r``.

    Words sharing a suffix share the computation, so the cost is one
    application per word. ``jobs > 1`` splits the work by the rightmost
    letter across processes; the summaries merge associatively.
    """
    if isinstance(exponents, Cocharacter):
        exponents = exponents.exponents
    Cocharacter(tuple(exponents)).validate(family.spec)
    if max_len <= 0:
        return VerifySummary(max(max_len, 0))
    if z is None:
        z = find_z(family)
    firsts = letter_order(family.r)
    if jobs <= 1:
        out = _verify_partition(_Engine(family, exponents), z, max_len, firsts)
    else:
        chunks = [firsts[k::jobs] for k in range(min(jobs, len(firsts)))]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_run_partition, [(family, tuple(exponents), z, max_len, c) for c in chunks]))
        out = parts[0]
        for p in parts[1:]:
            out = out.merge(p)
    out.by_length = dict(sorted(out.by_length.items()))
    expected = sum(count_reduced(family.r, l) for l in range(1, max_len + 1))
    assert out.total == expected, (out.total, expected)
    return out


# pipeline ----------------------------------------------------------------------------

def certify(gammas: Sequence[Element], h: Element, exponents: Sequence[int] | Cocharacter | None = None,
            max_len: int = 0, jobs: int = 1, seed: int | None = None) -> Certificate | ViolationReport:
    from .groups import default_cocharacter

    family = build_etas(gammas, h)
    if exponents is None:
        exponents = default_cocharacter(family.spec)
    if isinstance(exponents, Cocharacter):
        exponents = exponents.exponents
    Cocharacter(tuple(exponents)).validate(family.spec)
    res = check_nonincidence(family)
    if not res.ok:
        return res
    res.exponents = tuple(exponents)
    res.h = h
    res.gammas = tuple(gammas)
    res.z = find_z(family)
    res.z_pairings = z_pairings(family, res.z)
    res.seed = seed
    if max_len > 0:
        res.verification = verify_free_up_to(family, exponents, max_len, res.z, jobs)
    return res


def search_seed(seed: int, attempt: int) -> int:
    return seed * 1_000_003 + attempt


def search_complexity(attempt: int) -> int:
    """Start at 4 and add 2 after every 10 failed attempts."""
    return 4 + 2 * ((attempt - 1) // 10)


def h_candidates(spec: GroupSpec, budget: int, seed: int) -> Iterable[tuple[int, Element]]:
    """The identity first, then seeded random elements of growing complexity."""
    for k in range(1, budget + 1):
        if k == 1:
            yield k, Element.identity(spec)
        else:
            yield k, random_element(spec, random.Random(search_seed(seed, k)), search_complexity(k))


def search_h(gammas: Sequence[Element], spec: GroupSpec, budget: int = 50, seed: int = 0,
             exponents: Sequence[int] | None = None) -> tuple[Element, Certificate]:
    attempts = []
    for k, h in h_candidates(spec, budget, seed):
        res = certify(gammas, h, exponents, seed=seed)
        if res.ok:
            res.search_attempt = k
            return h, res
        attempts.append({"attempt": k, "violations": res.describe()})
    raise Exhausted(f"no h found in {budget} attempts", attempts)


# serialization and recheck -------------------------------------------------------------

def dump_certificate(cert: Certificate, created: str | None = None) -> str:
    return json.dumps(cert.to_json(created), indent=2) + "\n"


def strip_metadata(obj: dict) -> dict:
    return {k: v for k, v in obj.items() if k != "metadata"}


@dataclass
class RecheckResult:
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems


def load_family(obj: dict) -> tuple[EtaFamily, tuple[int, ...]]:
    spec = GroupSpec.from_json(obj["group"])
    etas = [Matrix.from_json(m) for m in obj["etas"]]
    exps = tuple(int(k) for k in obj["exponents"])
    return EtaFamily(spec, tuple(etas), tuple(e.inverse() for e in etas)), exps


def recheck(obj: dict) -> RecheckResult:
    """Re-derive every stored claim from the stored matrices; stored scalars are never trusted."""
    problems: list[str] = []
    try:
        if obj.get("schema") != SCHEMA:
            return RecheckResult([f"unknown schema {obj.get('schema')!r}"])
        spec = GroupSpec.from_json(obj["group"])
        etas = [Matrix.from_json(m) for m in obj["etas"]]
        if any(e.n != spec.dim for e in etas):
            return RecheckResult(["eta dimension does not match the group"])
        try:
            Cocharacter(tuple(int(k) for k in obj["exponents"])).validate(spec)
        except Exception as exc:
            problems.append(f"exponents: {exc}")
        if obj.get("h") is not None and obj.get("gammas") is not None:
            h = Matrix.from_json(obj["h"])
            gammas = [Matrix.from_json(m) for m in obj["gammas"]]
            if len(gammas) != len(etas):
                problems.append("number of gammas and etas differ")
            for name, m in [("h", h)] + [(f"gamma_{k}", g) for k, g in enumerate(gammas, 1)]:
                ok, why = membership(spec, m)
                if not ok:
                    problems.append(f"{name} is not in {spec.name()}: {why}")
            h_inv = h.inverse()
            for k, (g, e) in enumerate(zip(gammas, etas), 1):
                if h_inv @ g @ h != e:
                    problems.append(f"eta_{k} != h^-1 gamma_{k} h")
        family = EtaFamily(spec, tuple(etas), tuple(e.inverse() for e in etas))

        fresh = compute_pairings(family)
        stored = {}
        for p in obj["pairings"]:
            key = (int(p["i"]), int(p["j"]), SIGN_VALUE[p["sign_i"]], SIGN_VALUE[p["sign_j"]])
            if key in stored:
                problems.append(f"duplicate pairing {key}")
            stored[key] = rational_from_str(p["value"])
        if set(stored) != set(fresh):
            problems.append("pairing table does not cover exactly the pairs i != j")
        for key, v in fresh.items():
            if v == 0:
                problems.append(f"pairing {key} vanishes")
            if key in stored and stored[key] != v:
                problems.append(f"pairing {key}: stored {rational_to_str(stored[key])}, actual {rational_to_str(v)}")

        fresh_self = compute_self_pairings(family)
        stored_self = {(int(p["i"]), SIGN_VALUE[p["sign"]]): rational_from_str(p["value"])
                       for p in obj.get("self_pairings", [])}
        if set(stored_self) != set(fresh_self):
            problems.append("self-pairing table is incomplete")
        for key, v in fresh_self.items():
            if v == 0 or stored_self.get(key) != v:
                problems.append(f"self-pairing {key} does not match")

        if obj.get("z") is None:
            problems.append("missing base point z")
        else:
            z = ProjPointC(tuple(rational_from_str(x) for x in obj["z"]))
            fresh_z = z_pairings(family, z)
            stored_z = {(int(p["j"]), SIGN_VALUE[p["sign"]]): rational_from_str(p["value"])
                        for p in obj.get("z_pairings", [])}
            if set(stored_z) != set(fresh_z):
                problems.append("z pairing table is incomplete")
            for key, v in fresh_z.items():
                if v == 0:
                    problems.append(f"z lies on hyperplane {key}")
                if stored_z.get(key) != v:
                    problems.append(f"z pairing {key} does not match")
        problems.extend(_check_verification(obj.get("verification"), family.r))
        if obj.get("search_attempt") is not None and obj.get("h") is not None:
            k, seed = int(obj["search_attempt"]), int(obj["seed"])
            if k < 1:
                problems.append("search_attempt must be >= 1")
            else:
                *_, (_, h_k) = h_candidates(spec, k, seed)
                if h_k.matrix != Matrix.from_json(obj["h"]):
                    problems.append(f"h is not candidate {k} of the seeded search")
    except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
        problems.append(f"malformed certificate: {exc!r}")
    return RecheckResult(problems)


def _check_verification(v: dict | None, r: int) -> list[str]:
    """Internal consistency of a stored verification summary (the traces are not replayed)."""
    if v is None:
        return []
    out = []
    max_len = int(v["max_len"])
    by_length = {int(k): int(n) for k, n in v["by_length"].items()}
    expected = {l: count_reduced(r, l) for l in range(1, max_len + 1)}
    if by_length != expected:
        out.append("verification: per-length word counts are wrong")
    if int(v["words"]) != sum(expected.values()):
        out.append("verification: total word count is wrong")
    failures = int(v["failures"])
    if failures < 0 or v["all_succeeded"] is not (failures == 0):
        out.append("verification: failure count and success flag disagree")
    if (v["first_failure"] is None) != (failures == 0):
        out.append("verification: first_failure does not match the failure count")
    return out
