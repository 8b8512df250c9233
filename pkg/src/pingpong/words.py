"""Words in free groups and in free products ``G * F_d``.

A word with coefficients is an alternating sequence of group constants
(:class:`~pingpong.groups.Element`) and variable letters ``x_i^{+-1}``.
:class:`FreeProductWord` always holds the canonical reduced form: adjacent
constants multiplied together, identity constants dropped and adjacent
inverse letters cancelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import MembershipViolation, NotNormalized
from .groups import Element, GroupSpec, membership


@dataclass(frozen=True)
class Var:
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> "Var":
        return Var(self.index, -self.sign)

    def __str__(self) -> str:
        return f"x{self.index}" + ("^-1" if self.sign < 0 else "")


Part = Union[Element, Var]


def _invert_part(p: Part) -> Part:
    return p.inverse()


def _reduce_parts(parts: Sequence[Part]) -> tuple[Part, ...]:
    stack: list[Part] = []
    for p in parts:
        if isinstance(p, Var):
            if stack and isinstance(stack[-1], Var) and stack[-1] == p.inverse():
                stack.pop()
            else:
                stack.append(p)
            continue
        if not isinstance(p, Element):
            raise TypeError(f"word parts must be Element or Var, got {type(p).__name__}")
        if stack and isinstance(stack[-1], Element):
            p = stack.pop() @ p
        if not p.is_identity():
            stack.append(p)
    return tuple(stack)


class FreeProductWord:
    """Canonically reduced element of ``G * F_d``."""

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[Part] = ()):
        self.parts = _reduce_parts(parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def is_empty(self) -> bool:
        return not self.parts

    def is_constant(self) -> bool:
        return not any(isinstance(p, Var) for p in self.parts)

    def variables(self) -> list[Var]:
        return [p for p in self.parts if isinstance(p, Var)]

    def rank(self) -> int:
        """Largest variable index occurring (0 for constant words)."""
        return max((p.index for p in self.variables()), default=0)

    def __mul__(self, other: "FreeProductWord") -> "FreeProductWord":
        return FreeProductWord(self.parts + other.parts)

    def inverse(self) -> "FreeProductWord":
        return FreeProductWord([_invert_part(p) for p in reversed(self.parts)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeProductWord):
            return NotImplemented
        if len(self.parts) != len(other.parts):
            return False
        for a, b in zip(self.parts, other.parts):
            if type(a) is not type(b) or a != b:
                return False
        return True

    __hash__ = None

    def format(self, names: dict | None = None) -> str:
        """Text form; constants are named via ``names`` (matrix -> name) or ``c<k>``."""
        if not self.parts:
            return "1"
        out = []
        k = 0
        for p in self.parts:
            if isinstance(p, Var):
                out.append(str(p))
            else:
                label = names.get(p.matrix) if names else None
                if label is None:
                    k += 1
                    label = f"c{k}"
                out.append(label)
        return " ".join(out)

    def __repr__(self) -> str:
        return f"FreeProductWord({self.format()})"


def reduce(parts: Sequence[Part]) -> FreeProductWord:
    return FreeProductWord(parts)


def _check_member(e: Element, spec: GroupSpec, what: str):
    if e.spec != spec:
        raise MembershipViolation(f"{what} belongs to {e.spec.name()}, expected {spec.name()}")
    ok, why = membership(spec, e.matrix)
    if not ok:
        raise MembershipViolation(f"{what} is not in {spec.name()}: {why}")


def evaluate(w: FreeProductWord, assignment: Sequence[Element], group: GroupSpec) -> Element:
    """Substitute ``assignment[i-1]`` for ``x_i`` and multiply out in ``group``."""
    for p in w.parts:
        if isinstance(p, Element):
            _check_member(p, group, "constant")
    if w.rank() > len(assignment):
        raise ValueError(f"word uses x{w.rank()} but only {len(assignment)} values were assigned")
    for i, a in enumerate(assignment, 1):
        _check_member(a, group, f"value of x{i}")
    inverses: dict[int, Element] = {}
    out = Element.identity(group)
    for p in w.parts:
        if isinstance(p, Element):
            out = out @ p
        elif p.sign > 0:
            out = out @ assignment[p.index - 1]
        else:
            if p.index not in inverses:
                inverses[p.index] = assignment[p.index - 1].inverse()
            out = out @ inverses[p.index]
    return out


def constant_value(w: FreeProductWord, group: GroupSpec) -> Element:
    """``w(1, ..., 1)``: the product of the constants."""
    out = Element.identity(group)
    for p in w.parts:
        if isinstance(p, Element):
            out = out @ p
    return out


def is_normalized(w: FreeProductWord, group: GroupSpec) -> bool:
    return constant_value(w, group).is_identity()


def normalize_word(w: FreeProductWord, group: GroupSpec) -> FreeProductWord:
    """``w(1,...,1)^{-1} * w``."""
    c = constant_value(w, group)
    if c.is_identity():
        return w
    return FreeProductWord((c.inverse(),) + w.parts)


@dataclass(frozen=True)
class BasicWord:
    """``g x_i^{sign} g^{-1}``: type ``x_i^{sign}``, coefficient ``g``."""

    coefficient: Element
    index: int
    sign: int

    def to_word(self) -> FreeProductWord:
        g = self.coefficient
        return FreeProductWord((g, Var(self.index, self.sign), g.inverse()))

    def cancels(self, other: "BasicWord") -> bool:
        return (self.index == other.index and self.sign == -other.sign
                and self.coefficient == other.coefficient)


def product_of_basic(words: Sequence[BasicWord]) -> FreeProductWord:
    parts: list[Part] = []
    for b in words:
        parts.extend(b.to_word().parts)
    return FreeProductWord(parts)


def _split(parts: Sequence[Part], group: GroupSpec) -> tuple[list[Element], list[Var]]:
    """Write parts as ``g_0 y_1 g_1 ... y_n g_n``, merging adjacent constants only."""
    consts = [Element.identity(group)]
    letters: list[Var] = []
    for p in parts:
        if isinstance(p, Var):
            letters.append(p)
            consts.append(Element.identity(group))
        else:
            consts[-1] = consts[-1] @ p
    return consts, letters


def decompose_basic(w: FreeProductWord | Sequence[Part], group: GroupSpec) -> list[BasicWord]:
    """Write a normalized word as a product of basic words.

    With ``w = g_0 y_1 g_1 ... y_n g_n`` and ``g_0 ... g_n = 1``, the ``j``-th
    basic word has type ``y_j`` and coefficient ``g_0 g_1 ... g_{j-1}``.
    Adjacent basic words with equal coefficients and mutually inverse types
    are cancelled afterwards. Raw part sequences are accepted unreduced.
    """
    parts = w.parts if isinstance(w, FreeProductWord) else tuple(w)
    consts, letters = _split(parts, group)
    total = consts[0]
    for g in consts[1:]:
        total = total @ g
    if not total.is_identity():
        raise NotNormalized("word does not evaluate to the identity at (1, ..., 1)")
    out: list[BasicWord] = []
    prefix = consts[0]
    for j, y in enumerate(letters, 1):
        b = BasicWord(prefix, y.index, y.sign)
        if out and out[-1].cancels(b):
            out.pop()
        else:
            out.append(b)
        prefix = prefix @ consts[j]
    return out


# free groups -------------------------------------------------------------------

Letter = tuple[int, int]


@dataclass(frozen=True)
class FreeWord:
    """Reduced word in ``x_1, ..., x_r`` as a tuple of ``(index, sign)`` letters."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if i < 1 or s not in (1, -1):
                raise ValueError(f"bad letter {(i, s)}")
        for (i, s), (j, u) in zip(letters, letters[1:]):
            if i == j and s == -u:
                raise ValueError(f"word {letters} is not reduced")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        from .syntax import parse_free_word

        return parse_free_word(text)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{i}" + ("^-1" if s < 0 else "") for i, s in self.letters)


def letter_order(r: int) -> list[Letter]:
    """``x_1, x_1^-1, x_2, x_2^-1, ...``"""
    return [(i, s) for i in range(1, r + 1) for s in (1, -1)]


def count_reduced(r: int, length: int) -> int:
    if length == 0:
        return 1
    return 2 * r * (2 * r - 1) ** (length - 1)


def enumerate_reduced(r: int, max_len: int) -> Iterator[FreeWord]:
    """Every reduced word of length ``1..max_len`` once, length first then lexicographic."""
    if r < 1 or max_len < 0:
        raise ValueError("need r >= 1 and max_len >= 0")
    order = letter_order(r)

    def extend(prefix: list[Letter], remaining: int):
        if remaining == 0:
            yield FreeWord(tuple(prefix))
            return
        for i, s in order:
            if prefix and prefix[-1] == (i, -s):
                continue
            prefix.append((i, s))
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for length in range(1, max_len + 1):
        yield from extend([], length)
