"""Formal invariants σ_k(word), their polynomial combinations, and the named generating sets.

An :class:`InvariantExpr` is a polynomial in :class:`TraceMonomial` atoms with
coefficients in a field.  Evaluation goes through :mod:`trinv.matrices`; the
batched path used by the rank machinery lives in :mod:`trinv.spans`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence


from .errors import ParameterError, UsageError
from .fields import Field, FieldSpec, get_field
from .matrices import Matrix, generic, sigma, word_product
from .poly import MultiPoly, matrix_ring
from .words import Word, enumerate_canonical

MAX_FAMILY_DEGREE = 8


def _as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    return Word(tuple(w))


@dataclass(frozen=True, order=True)
class TraceMonomial:
    """``σ_k(X_{i1}...X_{is})``, the word kept as its smallest cyclic rotation."""

    k: int
    word: Word

    def __post_init__(self):
        if not 1 <= self.k <= 4:
            raise UsageError(f"sigma index {self.k} outside 1..4")
        object.__setattr__(self, "word", _as_word(self.word).min_rotation)

    def mdeg(self, d: int) -> tuple[int, ...]:
        return tuple(self.k * c for c in self.word.mdeg(d))

    @property
    def degree(self) -> int:
        return self.k * self.word.deg

    def __str__(self):
        body = str(self.word).replace("x", "X")
        return f"tr({body})" if self.k == 1 else f"sigma{self.k}({body})"

    __repr__ = __str__


Key = tuple  # sorted tuple of TraceMonomial: a product of atoms


class InvariantExpr:
    """Polynomial in trace monomials over a field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field | FieldSpec, terms=None):
        F = get_field(field) if isinstance(field, FieldSpec) else field
        self.field = F
        self.terms: dict[Key, object] = {}
        for key, c in (terms or {}).items():
            key = tuple(sorted(key))
            if F.is_zero(c):
                continue
            if key in self.terms:
                c = F.add(self.terms[key], c)
                if F.is_zero(c):
                    del self.terms[key]
                    continue
            self.terms[key] = c

    # construction -------------------------------------------------------------
    @classmethod
    def atom(cls, field, k: int, word) -> InvariantExpr:
        F = get_field(field) if isinstance(field, FieldSpec) else field
        return cls(F, {(TraceMonomial(k, _as_word(word)),): F.one})

    @classmethod
    def constant(cls, field, c=1) -> InvariantExpr:
        F = get_field(field) if isinstance(field, FieldSpec) else field
        return cls(F, {(): F.from_int(c) if isinstance(c, int) else c})

    # arithmetic -----------------------------------------------------------------
    def _coerce(self, other) -> InvariantExpr:
        if isinstance(other, InvariantExpr):
            if other.field is not self.field:
                raise UsageError("invariants over different fields")
            return other
        if isinstance(other, int):
            return InvariantExpr.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        F = self.field
        for k, c in other.terms.items():
            terms[k] = F.add(terms[k], c) if k in terms else c
        return InvariantExpr(F, terms)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return InvariantExpr(F, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def scale(self, c) -> InvariantExpr:
        F = self.field
        if isinstance(c, int):
            c = F.from_int(c)
        return InvariantExpr(F, {k: F.mul(c, v) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(sorted(k1 + k2))
                c = F.mul(c1, c2)
                out[key] = F.add(out[key], c) if key in out else c
        return InvariantExpr(F, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, InvariantExpr) and self.field is other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    # structure ------------------------------------------------------------------
    def monomials(self) -> set[TraceMonomial]:
        return {a for key in self.terms for a in key}

    @property
    def d(self) -> int:
        return max((a.word.d for a in self.monomials()), default=1)

    def multidegrees(self, d: int | None = None) -> set[tuple[int, ...]]:
        d = d or self.d
        out = set()
        for key in self.terms:
            md = [0] * d
            for a in key:
                for r, c in enumerate(a.mdeg(d)):
                    md[r] += c
            out.add(tuple(md))
        return out

    def is_homogeneous(self, d: int | None = None) -> bool:
        return len(self.multidegrees(d)) <= 1

    def multidegree(self, d: int | None = None) -> tuple[int, ...]:
        mds = self.multidegrees(d)
        if len(mds) != 1:
            raise UsageError(f"{self} is not multihomogeneous")
        return next(iter(mds))

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for key in sorted(self.terms, key=lambda k: (-len(k), k)):
            c = self.terms[key]
            body = "*".join(str(a) for a in key) or "1"
            s = F.signed(c)
            if s is None:
                parts.append(("+", f"{F.format(c)}*{body}"))
            else:
                sign = "-" if s < 0 else "+"
                parts.append((sign, body if abs(s) == 1 else f"{abs(s)}*{body}"))
        text = parts[0][1] if parts[0][0] == "+" else f"-{parts[0][1]}"
        for sign, piece in parts[1:]:
            text += f" {sign} {piece}"
        return text

    def __repr__(self):
        return f"InvariantExpr({self})"

    # evaluation -------------------------------------------------------------------
    def evaluate(self, matrices: Sequence[Matrix]):
        """Exact value at a tuple of numeric matrices."""
        F = self.field
        if not matrices:
            raise UsageError("empty matrix tuple")
        sizes = {A.shape for A in matrices}
        if len(sizes) != 1:
            raise UsageError("matrices in the tuple differ in size")
        if any(A.ring is not F for A in matrices):
            raise UsageError("matrices are not over the invariant's field")
        if self.d > len(matrices):
            raise UsageError(f"{self} needs {self.d} matrices, got {len(matrices)}")
        values: dict[TraceMonomial, object] = {}
        for a in self.monomials():
            values[a] = sigma(a.k, word_product(a.word, list(matrices)))
        total = F.zero
        for key, c in self.terms.items():
            term = c
            for a in key:
                term = F.mul(term, values[a])
            total = F.add(total, term)
        return total

    def to_poly(self, n: int, d: int | None = None) -> MultiPoly:
        """Expansion as a polynomial in the entries of generic matrices."""
        d = d or self.d
        spec = self.field.spec
        ring = matrix_ring(spec, n, d)
        total = ring.zero
        for key, c in self.terms.items():
            term = ring.const(c)
            for a in key:
                term = term * _atom_poly(spec, n, d, a)
            total = total + term
        return total


@functools.lru_cache(maxsize=4096)
def _atom_poly(spec: FieldSpec, n: int, d: int, a: TraceMonomial) -> MultiPoly:
    return sigma(a.k, _word_poly_product(spec, n, d, a.word.letters))


@functools.lru_cache(maxsize=4096)
def _word_poly_product(spec: FieldSpec, n: int, d: int, letters: tuple[int, ...]) -> Matrix:
    if len(letters) == 1:
        return generic(letters[0], n, d, spec)
    return _word_poly_product(spec, n, d, letters[:-1]) @ generic(letters[-1], n, d, spec)


def tr(field, *letters: int) -> InvariantExpr:
    return InvariantExpr.atom(field, 1, letters)


def sig(field, k: int, *letters: int) -> InvariantExpr:
    return InvariantExpr.atom(field, k, letters)


def W(text: str) -> tuple[int, ...]:
    """Letters of a compact word like ``"1123"`` (one digit per letter)."""
    return tuple(int(ch) for ch in text)


# parameters ------------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamSet:
    """Coefficients of the parameter systems.

    ``alpha1..gamma`` belong to the 19-element system of R_{3,3}; ``pair`` is the
    (alpha, beta) of the 22-element nullcone set and ``quint`` the
    (alpha1, alpha2, alpha3, beta1, beta2) of the 20-element one.
    """

    alpha1: int = 1
    alpha2: int = 1
    beta1: int = 1
    beta2: int = 1
    gamma: int = 1
    pair: tuple[int, int] = (1, 1)
    quint: tuple[int, int, int, int, int] = (1, 1, 1, 1, 1)

    @classmethod
    def default(cls, spec: FieldSpec) -> ParamSet:
        if spec.characteristic == 3:
            return cls(1, 1, 1, 2, 1)
        return cls()

    @classmethod
    def parse(cls, text: str) -> ParamSet:
        try:
            vals = [int(v) for v in text.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse parameters {text!r}; expected a1,a2,b1,b2,g") from None
        if len(vals) != 5:
            raise UsageError(f"expected 5 comma-separated integers, got {len(vals)}")
        return cls(*vals)

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.alpha1, self.alpha2, self.beta1, self.beta2, self.gamma)

    def in_field(self, F: Field) -> dict[str, object]:
        names = ("alpha1", "alpha2", "beta1", "beta2", "gamma")
        return {k: F.from_int(v) for k, v in zip(names, self.as_tuple())}

    def hypothesis_value(self, F: Field):
        v = self.in_field(F)
        return F.add(F.add(v["alpha1"], v["beta1"]), F.mul(v["alpha2"], v["beta2"]))

    def validate(self, F: Field) -> None:
        for name, value in self.in_field(F).items():
            if F.is_zero(value):
                raise ParameterError(f"{name} must be nonzero in {F.spec.describe()}")
        if F.is_zero(self.hypothesis_value(F)):
            raise ParameterError(
                f"alpha1 + beta1 + alpha2*beta2 vanishes in {F.spec.describe()} for {self.as_tuple()}"
            )

    def validate_lemma_sets(self, F: Field) -> None:
        for v in self.pair + self.quint:
            if F.is_zero(F.from_int(v)):
                raise ParameterError(f"coefficient {v} vanishes in {F.spec.describe()}")


# generating sets ----------------------------------------------------------------------------

@dataclass
class GeneratorSet:
    label: str
    elements: list[InvariantExpr]
    spec: FieldSpec
    n: int = 3
    d: int = 3
    params: ParamSet | None = None
    names: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def by_multidegree(self) -> dict[tuple[int, ...], list[InvariantExpr]]:
        out: dict = {}
        for e in self.elements:
            out.setdefault(e.multidegree(self.d), []).append(e)
        return dict(sorted(out.items()))

    def letters_used(self, e: InvariantExpr) -> frozenset[int]:
        return frozenset(r + 1 for r, c in enumerate(e.multidegree(self.d)) if c)

    def restricted_to(self, letters: Iterable[int]) -> list[InvariantExpr]:
        letters = frozenset(letters)
        return [e for e in self.elements if self.letters_used(e) <= letters]

    def replace(self, index: int, new: InvariantExpr, label: str | None = None) -> GeneratorSet:
        elements = list(self.elements)
        elements[index] = new
        return GeneratorSet(label or self.label + "*", elements, self.spec, self.n, self.d, self.params)

    def __str__(self):
        return f"{self.label} ({len(self)} elements over {self.spec.describe()})"


TRIPLES = list(itertools.permutations((1, 2, 3)))
PAIRS = [(1, 2), (1, 3), (2, 3)]


def _g1(F) -> list[InvariantExpr]:
    out = [tr(F, i) for i in (1, 2, 3)]
    out += [tr(F, i, j) for i, j in PAIRS]
    out += [sig(F, 2, i) for i in (1, 2, 3)]
    out += [tr(F, 1, 2, 3), tr(F, 1, 3, 2)]
    out += [tr(F, i, i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j]
    out += [sig(F, 3, i) for i in (1, 2, 3)]
    out += [tr(F, i, i, j, j) for i, j in PAIRS]
    out += [tr(F, i, i, j, k) for i, j, k in TRIPLES]
    out += [tr(F, i, i, j, j, k) for i, j, k in TRIPLES]
    out += [tr(F, i, i, j, i, k) for i, j, k in TRIPLES if j < k]
    return out


def _g2_common(F) -> list[InvariantExpr]:
    out = [tr(F, i, i, j, j, i, j) for i, j in PAIRS]
    out += [tr(F, i, i, j, j, i, k) for i, j, k in TRIPLES]
    return out


def _g2(F) -> list[InvariantExpr]:
    return _g2_common(F) + [tr(F, 1, 1, 2, 2, 3, 3)]


def _g3(F) -> list[InvariantExpr]:
    out = _g2_common(F) + [tr(F, 1, 1, 2, 2, 3, 3), tr(F, 1, 1, 3, 3, 2, 2)]
    out += [tr(F, i, j, j, k, k, j, k) for i, j, k in TRIPLES if j < k]
    out += [tr(F, i, i, j, j, i, k, k) for i, j, k in TRIPLES if j < k]
    out += [tr(F, i, i, j, j, k, k, j, k) for i, j, k in TRIPLES if j < k]
    return out


def build_set(label: str, spec: FieldSpec, params: ParamSet | None = None) -> GeneratorSet:
    """Any of the named sets G1, G2, G3, Gi, Gii, P, P32, P42, Q3, Q4, Q5."""
    F = get_field(spec)
    label_u = label.upper()
    n, d = 3, 3
    if label_u == "G1":
        elems = _g1(F)
    elif label_u == "G2":
        elems = _g2(F)
    elif label_u == "G3":
        elems = _g3(F)
    elif label_u == "GI":
        elems, label = _g1(F) + _g2(F), "Gi"
    elif label_u == "GII":
        elems, label = _g1(F) + _g3(F), "Gii"
    elif label_u in ("P", "R33"):
        return build_hsop("R33", params or ParamSet.default(spec), spec)
    elif label_u in ("P32", "R32"):
        return build_hsop("R32", params, spec)
    elif label_u in ("P42", "R42"):
        return build_hsop("R42", params, spec)
    elif label_u in ("Q3", "Q4", "Q5"):
        return build_nullcone_set(label_u, spec, params or ParamSet.default(spec))
    else:
        raise UsageError(f"unknown set {label!r}")
    return GeneratorSet(label, elems, spec, n, d, params)


def build_generators(spec: FieldSpec) -> GeneratorSet:
    """The minimal generating set of R_{3,3}: G1 ∪ G2 when p != 3, G1 ∪ G3 when p = 3."""
    return build_set("Gii" if spec.characteristic == 3 else "Gi", spec)


def build_hsop(target: str, params: ParamSet | None, spec: FieldSpec) -> GeneratorSet:
    F = get_field(spec)
    target = target.upper()
    if target == "R33":
        params = params or ParamSet.default(spec)
        params.validate(F)
        v = params.in_field(F)
        out = [sig(F, k, i) for i in (1, 2, 3) for k in (1, 2, 3)]
        out += [tr(F, i, j) for i, j in PAIRS]
        out.append(tr(F, 1, 1, 2) + tr(F, 2, 2, 3).scale(v["alpha1"]) + tr(F, 3, 3, 1).scale(v["alpha2"]))
        out.append(tr(F, 1, 1, 3) - tr(F, 3, 3, 2).scale(v["beta1"]))
        out.append(tr(F, 1, 1, 3) - tr(F, 2, 2, 1).scale(v["beta2"]))
        out.append(tr(F, 1, 2, 3) + tr(F, 1, 3, 2).scale(v["gamma"]))
        out += [tr(F, i, i, j, j) for i, j in PAIRS]
        return GeneratorSet("P", out, spec, 3, 3, params)
    if target == "R32":
        out = [sig(F, k, i) for i in (1, 2) for k in (1, 2, 3)]
        out += [tr(F, 1, 2), tr(F, 1, 1, 2), tr(F, 1, 2, 2), tr(F, 1, 1, 2, 2)]
        return GeneratorSet("P32", out, spec, 3, 2, params)
    if target == "R42":
        out = [sig(F, k, i) for i in (1, 2) for k in (1, 2, 3, 4)]
        out += [tr(F, 1, 2), tr(F, 1, 1, 2), tr(F, 1, 2, 2), tr(F, 1, 1, 1, 2), tr(F, 1, 2, 2, 2), tr(F, 1, 1, 2, 2)]
        out += [sig(F, 2, 1, 2), sig(F, 2, 1, 2, 2), sig(F, 2, 1, 1, 2)]
        return GeneratorSet("P42", out, spec, 4, 2, params)
    raise UsageError(f"unknown target {target!r}; expected R33, R32 or R42")


def build_nullcone_set(label: str, spec: FieldSpec, params: ParamSet, d: int = 3) -> GeneratorSet:
    """The auxiliary sets whose common zeros are shown to lie in the nullcone.

    Q3 reads "tr(X_σ(1)...X_σ(r)), σ ∈ S_r" as traces of all words in r distinct
    letters chosen from x_1..x_d (one per rotation class).
    """
    F = get_field(spec)
    params.validate_lemma_sets(F)
    out = [sig(F, k, i) for i in range(1, d + 1) for k in (1, 2, 3)]
    if label == "Q3":
        out += [tr(F, i, i, j) for i in range(1, d + 1) for j in range(1, d + 1) if i != j]
        out += [tr(F, i, i, j, j) for i, j in itertools.combinations(range(1, d + 1), 2)]
        seen = set()
        for r in range(2, d + 1):
            for letters in itertools.permutations(range(1, d + 1), r):
                key = Word(letters).min_rotation
                if key not in seen:
                    seen.add(key)
                    out.append(tr(F, *key.letters))
        return GeneratorSet("Q3", out, spec, 3, d, params)
    if d != 3:
        raise UsageError(f"{label} is defined for three matrices")
    a, b = (F.from_int(x) for x in params.pair)
    out += [tr(F, i, j) for i, j in PAIRS]
    if label == "Q4":
        out += [tr(F, i, i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j]
        out += [tr(F, i, i, j, j) for i, j in PAIRS]
        out.append(tr(F, 1, 2, 3).scale(a) + tr(F, 1, 3, 2).scale(b))
        return GeneratorSet("Q4", out, spec, 3, 3, params)
    if label == "Q5":
        a1, a2, a3, b1, b2 = (F.from_int(x) for x in params.quint)
        out += [tr(F, i, i, j, j) for i, j in PAIRS]
        out += [tr(F, 1, 1, 3), tr(F, 3, 3, 2), tr(F, 2, 2, 1)]
        out.append(tr(F, 1, 1, 2).scale(a1) + tr(F, 2, 2, 3).scale(a2) + tr(F, 3, 3, 1).scale(a3))
        out.append(tr(F, 1, 2, 3).scale(b1) + tr(F, 1, 3, 2).scale(b2))
        return GeneratorSet("Q5", out, spec, 3, 3, params)
    raise UsageError(f"unknown set {label!r}")


def transcendence_degree(n: int, d: int) -> int:
    if d < 2:
        raise UsageError("the formula needs d >= 2")
    return (d - 1) * n * n + 1


def count_msog(d: int) -> int:
    """Size of a minimal homogeneous generating set of R_{3,d} in characteristic zero."""
    if d < 1:
        raise UsageError("d must be positive")
    coeffs = {1: 3, 2: 5, 3: 24, 4: 51, 5: 47, 6: 15}
    return sum(a * comb(d, i) for i, a in coeffs.items())


def evaluate(e: InvariantExpr, matrices: Sequence[Matrix]):
    return e.evaluate(matrices)


# graded families ------------------------------------------------------------------------------

def _sub(m, md):
    return tuple(a - b for a, b in zip(m, md))


def atoms_of_multidegree(m: tuple[int, ...], n: int = 3, words: str = "canonical") -> list[TraceMonomial]:
    """σ_k(w) with k * mdeg(w) = m, w a canonical cyclic representative (or any necklace)."""
    d = len(m)
    out = []
    for k in range(1, n + 1):
        if any(c % k for c in m):
            continue
        mw = tuple(c // k for c in m)
        if sum(mw) == 0:
            continue
        if words == "canonical":
            ws = enumerate_canonical(d, sum(mw), mw, cyclic=True)
        elif words == "all":
            ws = sorted({Word(w).min_rotation for w in _all_words(mw)})
        else:
            raise UsageError(f"unknown word family {words!r}")
        out += [TraceMonomial(k, w) for w in ws]
    return out


def _all_words(m):
    pool = [r + 1 for r, k in enumerate(m) for _ in range(k)]
    return set(itertools.permutations(pool))


def _sub_multidegrees(m: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All nonzero multidegrees componentwise <= m, in increasing total degree."""
    ranges = [range(c + 1) for c in m]
    out = [t for t in itertools.product(*ranges) if sum(t)]
    return sorted(out, key=lambda t: (sum(t), t))


def _products(pieces: list[tuple[tuple[int, ...], object]], m: tuple[int, ...], start: int = 0):
    """Multisets of pieces (index >= start) whose multidegrees sum to m."""
    if not any(m):
        yield ()
        return
    for idx in range(start, len(pieces)):
        md, obj = pieces[idx]
        rest = _sub(m, md)
        if min(rest) < 0:
            continue
        for tail in _products(pieces, rest, idx):
            yield (obj,) + tail


def graded_family(m: tuple[int, ...], source="full", bound: int = MAX_FAMILY_DEGREE, spec: FieldSpec | None = None,
                  n: int = 3, min_factors: int = 1, words: str = "canonical") -> list[InvariantExpr]:
    """Spanning family of the multidegree-``m`` component.

    ``source="full"``: all products of atoms σ_k(w); a :class:`GeneratorSet`: all
    products of its elements.  ``min_factors=2`` gives the decomposable family.
    """
    m = tuple(m)
    if bound > MAX_FAMILY_DEGREE:
        raise UsageError(f"degree bound {bound} exceeds {MAX_FAMILY_DEGREE}")
    if sum(m) > bound:
        raise UsageError(f"multidegree {m} exceeds bound {bound}")
    if isinstance(source, GeneratorSet):
        F = get_field(source.spec)
        pieces = [(e.multidegree(len(m)), e) for e in source.elements]
        pieces = [p for p in pieces if min(_sub(m, p[0])) >= 0]
        out = []
        for combo in _products(pieces, m):
            if len(combo) < min_factors:
                continue
            prod = InvariantExpr.constant(F, 1)
            for e in combo:
                prod = prod * e
            out.append(prod)
        return out
    if source != "full":
        raise UsageError(f"unknown source {source!r}")
    F = get_field(spec or FieldSpec.surrogate())
    pieces = []
    for md in _sub_multidegrees(m):
        for a in atoms_of_multidegree(md, n, words):
            pieces.append((md, a))
    return [
        InvariantExpr(F, {tuple(combo): F.one})
        for combo in _products(pieces, m)
        if len(combo) >= min_factors
    ]


def evaluation_matrix(exprs: Sequence[InvariantExpr], samples) -> list[list]:
    """Entry (s, e) is the value of ``exprs[e]`` at the tuple ``samples[s]``."""
    return [[e.evaluate(tup) for e in exprs] for tup in samples]
