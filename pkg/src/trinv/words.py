"""Words in the free semigroup and their normal forms in the nil algebra N_{3,d}.

``N_{3,d}`` is the free associative algebra without unity on ``x_1..x_d`` modulo the
ideal generated by all cubes.  Every word there is a signed sum of *canonical* words:
for each letter ``x`` the occurrences of ``x`` have one of the shapes

    (none)    w1 x w2    w1 x^2 w2    w1 x^2 u x w2      (u nonempty, x-free)

The rewriting rules, all consequences of ``a^3 = 0`` under linearisation:

    x u x    ->  - x^2 u - u x^2
    x u x^2  ->  - x^2 u x
    x^3      ->  0
    any word of degree >= 4 in one letter -> 0
    x_i^2 u x_j^2 -> 0          (u nonempty; only when p != 3)
    x_j^2 x_i^2 x_j x_i  ~  - x_i^2 x_j^2 x_i x_j    (merged only when both appear)

Termination: each application of the first two rules either moves the rewritten
letter's occurrences strictly leftward (``x u x^2``) or makes that letter's pattern
canonical in both output words without creating a longer word.  The step budget and
cycle detection turn any violation of this into :class:`RewriteBudgetExceeded`.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import RewriteBudgetExceeded, UsageError
from .fields import Field, FieldSpec, get_field

MAX_ENUM_DEGREE = 10


@dataclass(frozen=True, order=True)
class Word:
    letters: tuple[int, ...]

    def __post_init__(self):
        if not self.letters:
            raise UsageError("empty word")
        if any((not isinstance(a, int)) or a < 1 for a in self.letters):
            raise UsageError(f"letters must be positive integers: {self.letters}")

    @classmethod
    def of(cls, *letters: int) -> Word:
        return cls(tuple(letters))

    @property
    def deg(self) -> int:
        return len(self.letters)

    @property
    def d(self) -> int:
        return max(self.letters)

    def degree_in(self, r: int) -> int:
        return self.letters.count(r)

    def mdeg(self, d: int | None = None) -> tuple[int, ...]:
        d = d or self.d
        if self.d > d:
            raise UsageError(f"word {self} uses letters beyond x{d}")
        return tuple(self.letters.count(r) for r in range(1, d + 1))

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def rotations(self) -> list[Word]:
        w = self.letters
        return [Word(w[i:] + w[:i]) for i in range(len(w))]

    @cached_property
    def min_rotation(self) -> Word:
        return min(self.rotations())

    def __str__(self):
        parts = []
        for letter, run in itertools.groupby(self.letters):
            k = len(list(run))
            parts.append(f"x{letter}" if k == 1 else f"x{letter}^{k}")
        return " ".join(parts)

    def __repr__(self):
        return f"Word({self})"


_TOKEN = re.compile(r"\s*(?:x(\d+)(?:\s*\^\s*(\d+))?)")


def parse_word(text: str) -> Word:
    """Parse ``x1^2 x2 x1`` (juxtaposition or whitespace; letters x1..x9)."""
    pos = 0
    letters: list[int] = []
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            col = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip())
            raise UsageError(f"cannot parse word at position {col}: {text[col:col + 8]!r}")
        letter = int(m.group(1))
        if not 1 <= letter <= 9:
            raise UsageError(f"letter x{letter} at position {m.start(1) - 1} outside x1..x9")
        k = int(m.group(2)) if m.group(2) is not None else 1
        if k == 0:
            raise UsageError(f"exponent 0 at position {m.start(2)}")
        letters.extend([letter] * k)
        pos = m.end()
    if not letters:
        raise UsageError("empty word")
    return Word(tuple(letters))


class NilCombination:
    """A finite linear combination of words with coefficients in a field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field | FieldSpec, terms: Mapping[Word, object] | None = None):
        self.field = get_field(field) if isinstance(field, FieldSpec) else field
        F = self.field
        self.terms = {w: c for w, c in (terms or {}).items() if not F.is_zero(c)}

    @classmethod
    def word(cls, field, w: Word | str, coeff=1) -> NilCombination:
        F = get_field(field) if isinstance(field, FieldSpec) else field
        if isinstance(w, str):
            w = parse_word(w)
        return cls(F, {w: F.from_int(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def from_ints(cls, field, terms: Mapping[Word, int]) -> NilCombination:
        F = get_field(field) if isinstance(field, FieldSpec) else field
        return cls(F, {w: F.from_int(c) for w, c in terms.items()})

    def __add__(self, other: NilCombination) -> NilCombination:
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = F.add(out[w], c) if w in out else c
        return NilCombination(F, out)

    def __neg__(self):
        return self.scale(self.field.from_int(-1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> NilCombination:
        F = self.field
        return NilCombination(F, {w: F.mul(c, v) for w, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, NilCombination) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def multidegrees(self, d: int) -> set[tuple[int, ...]]:
        return {w.mdeg(d) for w in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        out = []
        for w, c in sorted(self.terms.items()):
            s = F.signed(c)
            if s is None:
                piece, sign = f"{F.format(c)} {w}", "+"
            else:
                sign = "-" if s < 0 else "+"
                piece = str(w) if abs(s) == 1 else f"{abs(s)} {w}"
            if not out:
                out.append(piece if sign == "+" else f"- {piece}")
            else:
                out.append(f"{sign} {piece}")
        return " ".join(out)

    def __repr__(self):
        return f"NilCombination({self})"


# canonical shapes ---------------------------------------------------------------------------

def _positions(letters: tuple[int, ...]) -> dict[int, list[int]]:
    pos: dict[int, list[int]] = {}
    for i, a in enumerate(letters):
        pos.setdefault(a, []).append(i)
    return pos


def _shape(P: list[int]) -> str | None:
    """Name of the canonical shape of an occurrence list, or ``None``."""
    if len(P) == 1:
        return "x"
    if len(P) == 2 and P[1] == P[0] + 1:
        return "x^2"
    if len(P) == 3 and P[1] == P[0] + 1 and P[2] > P[1] + 1:
        return "x^2 u x"
    return None


def letter_shapes(w: Word) -> dict[int, str | None]:
    """Per-letter diagnostics: the matched canonical shape, ``None`` if not canonical."""
    return {a: _shape(P) for a, P in sorted(_positions(w.letters).items())}


def is_canonical(w: Word) -> bool:
    return all(s is not None for s in letter_shapes(w).values())


# rewriting ------------------------------------------------------------------------------------

def _has_separated_squares(letters: tuple[int, ...]) -> bool:
    squares = [i for i in range(len(letters) - 1) if letters[i] == letters[i + 1]]
    return len(squares) >= 2 and squares[-1] - squares[0] > 2


class Rewriter:
    """Memoised normal-form engine; coefficients are kept as integers until the end.

    All rule coefficients are +-1, so working over the integers and reducing in the
    target field afterwards gives the same result as rewriting in that field.
    """

    def __init__(self, annihilate_separated_squares: bool, budget: int = 2_000_000):
        self.item2 = annihilate_separated_squares
        self.budget = budget
        self.steps = 0
        self._memo: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {}
        self._active: set[tuple[int, ...]] = set()

    def normal_form(self, letters: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        memo = self._memo.get(letters)
        if memo is not None:
            return memo
        if letters in self._active:
            raise RewriteBudgetExceeded(f"rewrite cycle through {Word(letters)}")
        self.steps += 1
        if self.steps > self.budget:
            raise RewriteBudgetExceeded(f"step budget {self.budget} exhausted at {Word(letters)}")
        self._active.add(letters)
        try:
            result = self._rewrite(letters)
        finally:
            self._active.discard(letters)
        self._memo[letters] = result
        return result

    def _rewrite(self, w: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        for i in range(len(w) - 2):
            if w[i] == w[i + 1] == w[i + 2]:
                return {}
        # a letter of degree >= 4 forces a factor x^2 u x^2 = x (x u x) x, which is zero;
        # without this shortcut the two rules can cycle on such words
        if max(Counter(w).values()) >= 4:
            return {}
        if self.item2 and _has_separated_squares(w):
            return {}
        # leftmost non-adjacent consecutive pair of equal letters
        best = None
        for a, P in _positions(w).items():
            if _shape(P) is not None:
                continue
            for s, t in zip(P, P[1:]):
                if t > s + 1:
                    if best is None or s < best[0]:
                        best = (s, t)
                    break
        if best is None:
            return {w: 1}
        s, t = best
        x = w[s]
        u = w[s + 1 : t]
        if t + 1 < len(w) and w[t + 1] == x:
            # x u x^2 -> - x^2 u x
            images = [((x, x) + u + (x,), -1)]
            tail = w[t + 2 :]
        else:
            # x u x -> - x^2 u - u x^2
            images = [((x, x) + u, -1), (u + (x, x), -1)]
            tail = w[t + 1 :]
        head = w[:s]
        out: Counter = Counter()
        for mid, sign in images:
            for v, c in self.normal_form(head + mid + tail).items():
                out[v] += sign * c
        return {v: c for v, c in out.items() if c}


_REWRITERS: dict[bool, Rewriter] = {}


def _rewriter(item2: bool) -> Rewriter:
    if item2 not in _REWRITERS:
        _REWRITERS[item2] = Rewriter(item2)
    return _REWRITERS[item2]


def _merge_sign_pairs(terms: dict[tuple[int, ...], object], F: Field) -> dict:
    """Fold ``w1 x_j^2 x_i^2 x_j x_i w2`` into ``-w1 x_i^2 x_j^2 x_i x_j w2`` when both occur (j > i)."""
    out = dict(terms)
    for w in sorted(terms):
        if w not in out:
            continue
        for k in range(len(w) - 5):
            j, i = w[k], w[k + 2]
            if j > i and w[k : k + 6] == (j, j, i, i, j, i):
                partner = w[:k] + (i, i, j, j, i, j) + w[k + 6 :]
                if partner in out:
                    c = F.sub(out[partner], out.pop(w))
                    if F.is_zero(c):
                        out.pop(partner)
                    else:
                        out[partner] = c
                    break
    return out


def canonicalize(c: NilCombination | Word | str, field: FieldSpec | Field | None = None, budget: int | None = None) -> NilCombination:
    """Rewrite a combination into a sum of canonical words in N_{3,d}."""
    if isinstance(c, (Word, str)):
        c = NilCombination.word(field or FieldSpec.surrogate(), c)
    F = c.field if field is None else (get_field(field) if isinstance(field, FieldSpec) else field)
    item2 = F.characteristic != 3
    eng = _rewriter(item2) if budget is None else Rewriter(item2, budget)
    acc: dict[tuple[int, ...], object] = {}
    for w, coeff in c.terms.items():
        for v, k in eng.normal_form(w.letters).items():
            term = F.mul(coeff, F.from_int(k))
            acc[v] = F.add(acc[v], term) if v in acc else term
    acc = {v: x for v, x in acc.items() if not F.is_zero(x)}
    acc = _merge_sign_pairs(acc, F)
    return NilCombination(F, {Word(v): x for v, x in acc.items()})


# enumeration ----------------------------------------------------------------------------------

def _words_of_mdeg(m: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    pool = [r + 1 for r, k in enumerate(m) for _ in range(k)]
    return sorted(set(itertools.permutations(pool)))


def enumerate_canonical(d: int, bound: int, m: tuple[int, ...] | None = None, cyclic: bool = False) -> list[Word]:
    """All canonical words of degree ``1..bound`` (or of multidegree ``m``) in ``x_1..x_d``.

    With ``cyclic=True`` only the smallest canonical word of each rotation class is kept.
    """
    if bound > MAX_ENUM_DEGREE:
        raise UsageError(f"degree bound {bound} exceeds {MAX_ENUM_DEGREE}")
    if m is not None:
        if len(m) != d or any(k < 0 for k in m) or sum(m) == 0:
            raise UsageError(f"bad multidegree {m} for d={d}")
        if sum(m) > bound:
            raise UsageError(f"multidegree {m} exceeds bound {bound}")
        candidates = _words_of_mdeg(tuple(m))
    else:
        candidates = (
            w
            for n in range(1, bound + 1)
            for w in itertools.product(range(1, d + 1), repeat=n)
            if max(Counter(w).values()) <= 3
        )
    words = [Word(w) for w in candidates]
    words = [w for w in words if is_canonical(w)]
    if cyclic:
        seen: dict[Word, Word] = {}
        for w in words:
            key = w.min_rotation
            if key not in seen or w < seen[key]:
                seen[key] = w
        words = sorted(seen.values())
    return sorted(words, key=lambda w: (w.deg, w.letters))


def specialize_to_one(c: NilCombination, k: int) -> NilCombination:
    """Delete every occurrence of ``x_k`` (substitution ``x_k = 1``)."""
    F = c.field
    acc: dict[Word, object] = {}
    for w, coeff in c.terms.items():
        if w.degree_in(k) not in (1, 2):
            raise UsageError(f"{w} has degree {w.degree_in(k)} in x{k}; need 1 or 2")
        rest = tuple(a for a in w.letters if a != k)
        if not rest:
            raise UsageError(f"{w} becomes the empty word")
        v = Word(rest)
        acc[v] = F.add(acc[v], coeff) if v in acc else coeff
    return NilCombination(F, acc)
