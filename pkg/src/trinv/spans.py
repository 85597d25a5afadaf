"""Monte-Carlo span machinery: graded components of R_{n,d} seen through random samples.

A function on d-tuples of matrices is represented by its vector of values at ``N``
random sample tuples.  For every multidegree ``m`` the engine keeps

* ``Dec_m``: the span of products of >= 2 positive-degree invariants, built
  recursively as the sum of ``h * B_{m - deg h}`` over indecomposable atoms ``h``;
* ``B_m``: ``Dec_m`` plus all atoms ``σ_k(w)`` of multidegree ``m``.

Ranks measured this way never exceed the true dimension.  With ``N >= rank + 16``
samples they equal it except with probability about ``deg / |field|`` per test; the
engine restarts with more samples whenever a rank comes within 16 of ``N``.
"""

from __future__ import annotations

import functools
import itertools
from typing import Sequence

import numpy as np

from .errors import UsageError
from .fields import FieldSpec, get_field
from .invariants import (
    GeneratorSet,
    InvariantExpr,
    TraceMonomial,
    atoms_of_multidegree,
    sig,
    tr,
)
from .linalg import Echelon
from .matrices import batch_matmul, batch_sigma
from .report import FAIL, INCONCLUSIVE, PASS, VerificationReport, derive_seed, make_report
from .words import Word

MARGIN = 16


class SaturationError(RuntimeError):
    """A measured rank came within the safety margin of the sample count."""


class SampleSet:
    """``N`` random d-tuples of n x n matrices with cached word products and atom values."""

    def __init__(self, spec: FieldSpec, n: int, d: int, N: int, seed: int):
        self.spec = spec
        self.field = F = get_field(spec)
        self.n, self.d, self.N, self.seed = n, d, N, seed
        rng = np.random.default_rng(seed)
        self.X = F.vrandom(rng, (d, N, n, n))
        self._products: dict[tuple[int, ...], np.ndarray] = {}
        self._atoms: dict[TraceMonomial, np.ndarray] = {}

    @classmethod
    def from_tuples(cls, spec: FieldSpec, tuples) -> SampleSet:
        """Wrap explicit matrix tuples (lists of :class:`Matrix`)."""
        F = get_field(spec)
        self = cls.__new__(cls)
        self.spec, self.field = spec, F
        self.d = len(tuples[0])
        self.n = tuples[0][0].n
        self.N = len(tuples)
        self.seed = None
        self.X = F.asarray([[[list(r) for r in A.rows] for A in tup] for tup in tuples]).swapaxes(0, 1)
        self._products, self._atoms = {}, {}
        return self

    @classmethod
    def from_array(cls, spec: FieldSpec, X: np.ndarray) -> SampleSet:
        """Wrap a ``(d, N, n, n)`` array of field elements."""
        self = cls.__new__(cls)
        self.spec, self.field = spec, get_field(spec)
        self.d, self.N, self.n = X.shape[0], X.shape[1], X.shape[2]
        self.seed = None
        self.X = X
        self._products, self._atoms = {}, {}
        return self

    def product(self, letters: tuple[int, ...]) -> np.ndarray:
        got = self._products.get(letters)
        if got is not None:
            return got
        if max(letters) > self.d:
            raise UsageError(f"word uses x{max(letters)} but samples have {self.d} matrices")
        if len(letters) == 1:
            out = self.X[letters[0] - 1]
        else:
            out = batch_matmul(self.field, self.product(letters[:-1]), self.X[letters[-1] - 1])
        self._products[letters] = out
        return out

    def atom(self, a: TraceMonomial) -> np.ndarray:
        got = self._atoms.get(a)
        if got is None:
            got = batch_sigma(self.field, self.product(a.word.letters), a.k)
            self._atoms[a] = got
        return got

    def values(self, e: InvariantExpr) -> np.ndarray:
        F = self.field
        total = F.vzeros(self.N)
        for key, c in e.terms.items():
            term = F.vconst(c, self.N)
            for a in key:
                term = F.vmul(term, self.atom(a))
            total = F.vadd(total, term)
        return total

    def matrix(self, exprs: Sequence[InvariantExpr]) -> np.ndarray:
        """Evaluation matrix with one row per expression (transpose of the sample-major layout)."""
        if not exprs:
            return self.field.vzeros((0, self.N))
        return np.vstack([self.values(e)[None, :] for e in exprs])


class GradedSpans:
    """Full and decomposable spans of every multidegree up to the requested ones."""

    def __init__(self, samples: SampleSet, words: str = "canonical"):
        self.samples = samples
        self.words = words
        F = samples.field
        zero = (0,) * samples.d
        self._full: dict[tuple[int, ...], Echelon] = {zero: Echelon(F, samples.N, F.vones((1, samples.N)))}
        self._dec: dict[tuple[int, ...], Echelon] = {}
        self.indecomposables: list[tuple[tuple[int, ...], TraceMonomial]] = []

    def _check(self, e: Echelon) -> None:
        if e.rank > self.samples.N - MARGIN:
            raise SaturationError(f"rank {e.rank} with only {self.samples.N} samples")

    def _ensure(self, m: tuple[int, ...]) -> None:
        if m in self._full:
            return
        for sub in _below(m):
            if sub not in self._full:
                self._compute(sub)

    def _compute(self, m: tuple[int, ...]) -> None:
        S, F = self.samples, self.samples.field
        dec = Echelon(F, S.N)
        for md, h in self.indecomposables:
            rest = tuple(a - b for a, b in zip(m, md))
            if min(rest) < 0 or not any(rest):
                continue
            block = self._full[rest].rows
            dec.extend(F.vmul(block, S.atom(h)[None, :]))
        self._check(dec)
        atoms = atoms_of_multidegree(m, S.n, self.words)
        full = dec.copy()
        if atoms:
            V = np.vstack([S.atom(a)[None, :] for a in atoms])
            picked = dec.greedy_independent(V)
            self.indecomposables += [(m, atoms[i]) for i in picked]
            full.extend(V[picked])
        self._check(full)
        self._dec[m], self._full[m] = dec, full

    def full(self, m) -> Echelon:
        m = tuple(m)
        self._ensure(m)
        return self._full[m]

    def decomposable(self, m) -> Echelon:
        m = tuple(m)
        if not any(m):
            raise UsageError("multidegree must be positive")
        self._ensure(m)
        return self._dec[m]

    def indecomposables_of(self, m) -> list[TraceMonomial]:
        self._ensure(tuple(m))
        return [a for md, a in self.indecomposables if md == tuple(m)]


class GeneratedSpans:
    """Span of products of elements of a generating set, per multidegree."""

    def __init__(self, samples: SampleSet, gens: GeneratorSet):
        self.samples = samples
        self.gens = [(e.multidegree(samples.d), samples.values(e)) for e in gens.elements]
        F = samples.field
        self._span: dict[tuple[int, ...], Echelon] = {(0,) * samples.d: Echelon(F, samples.N, F.vones((1, samples.N)))}

    def span(self, m) -> Echelon:
        m = tuple(m)
        for sub in _below(m):
            if sub not in self._span:
                self._compute(sub)
        return self._span[m]

    def _compute(self, m) -> None:
        S, F = self.samples, self.samples.field
        e = Echelon(F, S.N)
        for md, v in self.gens:
            rest = tuple(a - b for a, b in zip(m, md))
            if min(rest) < 0:
                continue
            e.extend(F.vmul(self._span[rest].rows, v[None, :]))
        if e.rank > S.N - MARGIN:
            raise SaturationError(f"rank {e.rank} with only {S.N} samples")
        self._span[m] = e


def _below(m: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = [t for t in itertools.product(*(range(c + 1) for c in m)) if any(t)]
    return sorted(out, key=lambda t: (sum(t), t))


def multidegrees_up_to(d: int, bound: int) -> list[tuple[int, ...]]:
    out = [t for t in itertools.product(range(bound + 1), repeat=d) if 0 < sum(t) <= bound]
    return sorted(out, key=lambda t: (sum(t), t))


def initial_samples(bound: int, trials: int | None = None) -> int:
    base = {1: 32, 2: 32, 3: 48, 4: 64, 5: 96, 6: 160, 7: 256, 8: 400}.get(bound, 64 * bound)
    return max(base, trials or 0)


def _with_saturation(fn, N: int, limit: int = 4096):
    """Run ``fn(N)``, enlarging ``N`` until no rank comes within the margin."""
    while True:
        try:
            return fn(N), N
        except SaturationError:
            if N >= limit:
                raise
            N = int(N * 1.5) + MARGIN


@functools.lru_cache(maxsize=16)
def _graded(spec: FieldSpec, n: int, d: int, N: int, seed: int, words: str) -> GradedSpans:
    return GradedSpans(SampleSet(spec, n, d, N, seed), words)


# decomposability oracle ------------------------------------------------------------------------

def _expr_d(exprs: Sequence[InvariantExpr], d: int | None) -> int:
    return d or max(e.d for e in exprs)


def decomposable_margin(exprs: Sequence[InvariantExpr], *, n: int = 3, d: int | None = None, trials: int | None = None,
                        seed: int = 0, words: str = "canonical") -> tuple[int, int, int]:
    """``(rank Dec_m, rank of Dec_m plus exprs, N)`` for expressions of one multidegree."""
    if not exprs:
        raise UsageError("no expressions given")
    spec = exprs[0].field.spec
    d = _expr_d(exprs, d)
    mds = {e.multidegree(d) for e in exprs if not e.is_zero()}
    if len(mds) > 1:
        raise UsageError(f"expressions span several multidegrees: {sorted(mds)}")
    if not mds:
        return 0, 0, 0
    m = mds.pop()

    def run(N):
        spans = _graded(spec, n, d, N, seed, words)
        dec = spans.decomposable(m)
        ext = dec.copy()
        ext.extend(spans.samples.matrix(list(exprs)))
        if ext.rank > N - MARGIN:
            raise SaturationError
        return dec.rank, ext.rank

    (r0, r1), N = _with_saturation(run, initial_samples(sum(m), trials))
    return r0, r1, N


def is_decomposable(e: InvariantExpr, trials: int | None = None, seed: int = 0, *, n: int = 3, d: int | None = None,
                    seeds: int = 3) -> bool:
    """Whether ``e`` lies in (R^+)^2, by rank comparison over several sample sets.

    ``True`` is certain up to the rank being saturated; ``False`` holds with high
    probability.  Disagreement between sample sets raises ``RuntimeError``.
    """
    if e.is_zero():
        return True
    verdicts = set()
    for s in range(seeds):
        r0, r1, _ = decomposable_margin([e], n=n, d=d, trials=trials, seed=derive_seed(seed, f"decomp/{s}"))
        verdicts.add(r0 == r1)
    if len(verdicts) != 1:
        raise RuntimeError(f"decomposability of {e} is unstable across sample sets")
    return verdicts.pop()


def independent_mod_decomposables(exprs: Sequence[InvariantExpr], trials: int | None = None, seed: int = 0, *,
                                  n: int = 3, d: int | None = None) -> bool:
    r0, r1, _ = decomposable_margin(exprs, n=n, d=d, trials=trials, seed=derive_seed(seed, "independence"))
    return r1 - r0 == len(exprs)


# verification drivers -----------------------------------------------------------------------------

def verify_generation(gens: GeneratorSet, bound: int | None = None, trials: int | None = None, seed: int = 0,
                      seeds: int = 3, words: str = "canonical") -> VerificationReport:
    """Compare, for every multidegree up to ``bound``, the span of products of ``gens``
    with the full component of the invariant ring."""
    spec = gens.spec
    if bound is None:
        bound = 8 if spec.characteristic == 3 else 6
    mds = multidegrees_up_to(gens.d, bound)
    per_seed = []
    used = []
    for s in range(seeds):
        sd = derive_seed(seed, f"generation/{gens.label}/{s}")
        used.append(sd)

        def run(N, sd=sd):
            samples = SampleSet(spec, gens.n, gens.d, N, sd)
            full = GradedSpans(samples, words)
            gen = GeneratedSpans(samples, gens)
            return {m: (full.full(m).rank, gen.span(m).rank) for m in mds}

        ranks, _ = _with_saturation(run, initial_samples(bound, trials))
        per_seed.append(ranks)
    items = []
    stable = all(r == per_seed[0] for r in per_seed[1:])
    for m in mds:
        fr, gr = per_seed[0][m]
        item = {"id": f"m={m}", "multidegree": list(m), "full_rank": fr, "generated_rank": gr}
        if any(r[m] != (fr, gr) for r in per_seed):
            item["status"] = INCONCLUSIVE
            item["ranks_by_seed"] = [list(r[m]) for r in per_seed]
        else:
            item["status"] = PASS if fr == gr else FAIL
            if fr != gr:
                item["seed"] = used[0]
        items.append(item)
    status = None if stable else INCONCLUSIVE
    if stable and any(it["status"] == FAIL for it in items):
        status = FAIL
    return make_report(
        "generation", spec, items, seeds=used, status=status,
        parameters={"set": gens.label, "size": len(gens), "bound": bound, "words": words},
    )


def verify_minimality(gens: GeneratorSet, trials: int | None = None, seed: int = 0, seeds: int = 3) -> VerificationReport:
    """Elements of equal multidegree must stay independent modulo decomposables."""
    spec = gens.spec
    groups = gens.by_multidegree()
    used = [derive_seed(seed, f"minimality/{gens.label}/{s}") for s in range(seeds)]
    results: dict[tuple, list] = {m: [] for m in groups}
    for sd in used:
        for m, elems in groups.items():

            def run(N, m=m, elems=elems, sd=sd):
                spans = _graded(spec, gens.n, gens.d, N, sd, "canonical")
                dec = spans.decomposable(m)
                ext = dec.copy()
                ext.extend(spans.samples.matrix(elems))
                if ext.rank > N - MARGIN:
                    raise SaturationError
                return dec.rank, ext.rank

            (r0, r1), _ = _with_saturation(run, initial_samples(sum(m), trials))
            results[m].append((r0, r1))
    items = []
    for m, elems in groups.items():
        r0, r1 = results[m][0]
        item = {
            "id": f"m={m}",
            "multidegree": list(m),
            "elements": [str(e) for e in elems],
            "decomposable_rank": r0,
            "rank_with_elements": r1,
            "margin": r1 - r0,
        }
        if any(r != (r0, r1) for r in results[m]):
            item["status"] = INCONCLUSIVE
        else:
            item["status"] = PASS if r1 - r0 == len(elems) else FAIL
        items.append(item)
    return make_report("minimality", spec, items, seeds=used,
                       parameters={"set": gens.label, "size": len(gens)})


def check_sigma2_identity(U: Word, V: Word, trials: int | None = None, seed: int = 0, spec: FieldSpec | None = None,
                          coefficient: int = 1) -> VerificationReport:
    """Whether ``σ2(UV) - c·tr(U^2 V^2)`` is decomposable (expected exactly for c = 1)."""
    spec = spec or FieldSpec.surrogate()
    U, V = (w if isinstance(w, Word) else Word(tuple(w)) for w in (U, V))
    e = sig(spec, 2, *(U.letters + V.letters)) - tr(spec, *(U.letters * 2 + V.letters * 2)).scale(coefficient)
    dec = is_decomposable(e, trials, seed)
    item = {"id": f"U={U}, V={V}", "expression": str(e), "decomposable": dec, "status": PASS if dec else FAIL}
    return make_report("sigma2-identity", spec, [item], seeds=[seed],
                       parameters={"U": str(U), "V": str(V), "coefficient": coefficient})


def characteristic_split(spec: FieldSpec, trials: int | None = None, seed: int = 0) -> list[dict]:
    """The squares-of-three pair is independent modulo decomposables exactly when p = 3;
    otherwise ``tr(X1^2 X2 X3^2 X2) ≡ -tr(X1^2 X2^2 X3^2) - tr(X1^2 X3^2 X2^2)``."""
    F = get_field(spec)
    p3 = spec.characteristic == 3
    pair = [tr(F, 1, 1, 2, 2, 3, 3), tr(F, 1, 1, 3, 3, 2, 2)]
    indep = independent_mod_decomposables(pair, trials, seed)
    items = [{"id": "pair tr(X1^2 X2^2 X3^2), tr(X1^2 X3^2 X2^2)", "independent": indep,
              "expected_independent": p3, "status": PASS if indep == p3 else FAIL}]
    relation = tr(F, 1, 1, 2, 3, 3, 2) + pair[0] + pair[1]
    dec = is_decomposable(relation, trials, seed)
    items.append({"id": "tr(X1^2 X2 X3^2 X2) + tr(X1^2 X2^2 X3^2) + tr(X1^2 X3^2 X2^2)", "decomposable": dec,
                  "status": PASS if (dec or p3) else FAIL})
    return items
