"""Battery of checks on the word-rewriting engine."""

from __future__ import annotations

import itertools

import numpy as np

from .fields import FieldSpec, get_field
from .ideal import in_cube_ideal, rewrite_difference
from .invariants import tr
from .matrices import batch_matmul
from .report import FAIL, PASS, VerificationReport, derive_seed, make_report
from .spans import is_decomposable
from .words import NilCombination, Word, canonicalize, is_canonical


def exhaustive_rewrite(spec: FieldSpec, bound: int = 8, d: int = 3) -> dict:
    """Rewrite every word of degree <= bound; all outputs canonical, multidegrees kept."""
    F = get_field(spec)
    count = bad = 0
    first_bad = None
    for n in range(1, bound + 1):
        for letters in itertools.product(range(1, d + 1), repeat=n):
            w = Word(letters)
            out = canonicalize(w, F)
            count += 1
            m = w.mdeg(d)
            if any(not is_canonical(v) or v.mdeg(d) != m for v in out.terms):
                bad += 1
                first_bad = first_bad or str(w)
    return {"id": f"exhaustive degree <= {bound}", "words": count, "violations": bad,
            "first_violation": first_bad,
            "status": PASS if bad == 0 else FAIL}


def representation_check(spec: FieldSpec, samples: int = 10_000, seed: int = 0, max_degree: int = 8,
                         words: int = 100) -> dict:
    """Evaluate ``w`` and its canonical form on random strictly upper triangular matrices."""
    F = get_field(spec)
    rng = np.random.default_rng(derive_seed(seed, "representation"))
    per_word = max(1, samples // words)
    mask = np.triu(np.ones((3, 3), dtype=bool), 1)
    bad = 0
    for _ in range(words):
        n = int(rng.integers(1, max_degree + 1))
        w = Word(tuple(int(a) for a in rng.integers(1, 4, size=n)))
        X = F.vrandom(rng, (3, per_word, 3, 3))
        X = np.where(mask, X, F.vzeros(X.shape))

        def value(letters):
            acc = X[letters[0] - 1]
            for a in letters[1:]:
                acc = batch_matmul(F, acc, X[a - 1])
            return acc

        lhs = value(w.letters)
        rhs = F.vzeros(lhs.shape)
        for v, c in canonicalize(w, F).terms.items():
            rhs = F.vadd(rhs, F.vmul(F.vconst(c, lhs.shape), value(v.letters)))
        bad += int((~F.vis_zero(F.vsub(lhs, rhs))).any(axis=(1, 2)).sum())
    return {"id": "strictly upper triangular representation", "substitutions": per_word * words,
            "violations": bad, "status": PASS if bad == 0 else FAIL}


def ideal_membership_check(spec: FieldSpec, bound: int = 5, d: int = 3) -> dict:
    """Every rewrite difference ``w - canonicalize(w)`` lies in ``id{x^3}``."""
    F = get_field(spec)
    bad, count = [], 0
    for n in range(1, bound + 1):
        for letters in itertools.product(range(1, d + 1), repeat=n):
            w = Word(letters)
            count += 1
            if not in_cube_ideal(rewrite_difference(w, canonicalize(w, F)), F):
                bad.append(str(w))
    return {"id": f"cube-ideal membership degree <= {bound}", "words": count, "violations": len(bad),
            "examples": bad[:5], "status": PASS if not bad else FAIL}


def identity_checks(spec: FieldSpec, trials: int | None = None, seed: int = 0) -> list[dict]:
    F = get_field(spec)
    items = []
    sign = NilCombination(F, {Word((2, 2, 1, 1, 2, 1)): F.one, Word((1, 1, 2, 2, 1, 2)): F.one})
    out = canonicalize(sign, F)
    items.append({"id": "sign identity", "result": str(out), "status": PASS if not out.terms else FAIL})

    w = Word((1, 1, 2, 3, 3))
    out = canonicalize(w, F)
    member = in_cube_ideal({w.letters: F.one}, F)
    p3 = spec.characteristic == 3
    ok = (bool(out.terms) == p3) and (member != p3)
    items.append({"id": "x1^2 x2 x3^2 annihilation", "result": str(out), "in_cube_ideal": member,
                  "expected_zero": not p3, "status": PASS if ok else FAIL})

    w = Word((1, 1, 2, 2, 1))
    out = canonicalize(w, F)
    items.append({"id": "x1^2 x2^2 x1 survives", "result": str(out),
                  "in_cube_ideal": in_cube_ideal({w.letters: F.one}, F),
                  "status": PASS if out.terms else FAIL})
    e = tr(F, 1, 1, 2, 2, 1, 3)
    dec = is_decomposable(e, trials, seed)
    items.append({"id": "tr(X1^2 X2^2 X1 X3) indecomposable", "decomposable": dec,
                  "status": PASS if not dec else FAIL})
    return items


def trace_bridge_check(spec: FieldSpec, words: int = 6, max_degree: int = 6, trials: int | None = None,
                       seed: int = 0) -> dict:
    """``tr(W X3) - tr(canonicalize(w) X3)`` is decomposable for random words in x1, x2."""
    F = get_field(spec)
    rng = np.random.default_rng(derive_seed(seed, "bridge"))
    results = []
    for _ in range(words):
        n = int(rng.integers(2, max_degree + 1))
        w = Word(tuple(int(a) for a in rng.integers(1, 3, size=n)))
        e = tr(F, *w.letters, 3)
        for v, c in canonicalize(w, F).terms.items():
            e = e - tr(F, *v.letters, 3).scale(c)
        if e.is_zero():
            results.append((str(w), True))
            continue
        results.append((str(w), is_decomposable(e, trials, seed)))
    bad = [w for w, ok in results if not ok]
    return {"id": "trace bridge", "words": [w for w, _ in results], "violations": bad,
            "status": PASS if not bad else FAIL}


def rewrite_suite(spec: FieldSpec, bound: int = 8, samples: int = 10_000, seed: int = 20240601,
                  trials: int | None = None) -> VerificationReport:
    items = [
        exhaustive_rewrite(spec, bound),
        representation_check(spec, samples, seed),
        ideal_membership_check(spec, min(bound, 5)),
        *identity_checks(spec, trials, seed),
        trace_bridge_check(spec, trials=trials, seed=seed),
    ]
    return make_report("rewrite-suite", spec, items, seeds=[seed],
                       parameters={"bound": bound, "samples": samples})
