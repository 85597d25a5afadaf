"""Exact membership in the two-sided ideal generated by all cubes.

Over an infinite field, ``f^3`` for ``f = Σ t_i u_i`` expands into ``t``-monomials
whose coefficients are the sums of ``y_{π1} y_{π2} y_{π3}`` over the distinct
arrangements of a multiset ``{y1, y2, y3}`` of words.  So the multidegree-``m``
component of ``id{x^3}`` (free algebra without unit) is spanned by
``a * s(y1, y2, y3) * b`` with ``y`` nonempty words, ``a``, ``b`` possibly empty and
``s`` the arrangement sum.  The spanning vectors have integer entries; membership
is decided by exact rank over the requested field.
"""

from __future__ import annotations

import functools
import itertools


from .fields import Field
from .linalg import Echelon
from .words import NilCombination, Word


def words_of_multidegree(m: tuple[int, ...]) -> list[tuple[int, ...]]:
    pool = [r + 1 for r, k in enumerate(m) for _ in range(k)]
    return sorted(set(itertools.permutations(pool)))


def _remaining(m, w):
    c = list(m)
    for a in w:
        c[a - 1] -= 1
    return tuple(c)


def _split3(word: tuple[int, ...]):
    n = len(word)
    for i in range(1, n - 1):
        for j in range(i + 1, n):
            yield word[:i], word[i:j], word[j:]


@functools.lru_cache(maxsize=64)
def _component(m: tuple[int, ...], F: Field) -> tuple[dict, Echelon]:
    W = words_of_multidegree(m)
    index = {w: i for i, w in enumerate(W)}
    n = sum(m)
    basis = Echelon(F, len(W))
    if n < 3:
        return index, basis
    seen = set()
    rows = []
    for w in W:
        # every spanning element is determined by (a, {y1, y2, y3}, b) for some word a y1 y2 y3 b
        for la in range(n - 2):
            for lb in range(n - 2 - la):
                a, mid, b = w[:la], w[la:n - lb], w[n - lb:]
                for ys in _split3(mid):
                    key = (a, tuple(sorted(ys)), b)
                    if key in seen:
                        continue
                    seen.add(key)
                    v = [0] * len(W)
                    for perm in set(itertools.permutations(ys)):
                        v[index[a + perm[0] + perm[1] + perm[2] + b]] += 1
                    rows.append([F.from_int(x) for x in v])
    if rows:
        basis.extend(F.asarray(rows))
    return index, basis


def in_cube_ideal(c: NilCombination | dict, F: Field) -> bool:
    """Whether a homogeneous combination of words lies in ``id{x^3}``."""
    terms = c.terms if isinstance(c, NilCombination) else c
    terms = {getattr(w, "letters", w): v for w, v in terms.items() if not F.is_zero(v)}
    if not terms:
        return True
    d = max(max(w) for w in terms)
    groups: dict[tuple[int, ...], dict] = {}
    for w, v in terms.items():
        m = tuple(w.count(r) for r in range(1, d + 1))
        groups.setdefault(m, {})[w] = v
    for m, part in groups.items():
        index, basis = _component(m, F)
        vec = F.vzeros((1, len(index)))
        for w, v in part.items():
            vec[0, index[w]] = v
        if not basis.contains(vec[0]):
            return False
    return True


def rewrite_difference(w: Word, canonical: NilCombination) -> dict:
    """``w - canonical`` as a term map."""
    F = canonical.field
    out = {k.letters if isinstance(k, Word) else k: F.neg(v) for k, v in canonical.terms.items()}
    key = w.letters
    out[key] = F.add(out.get(key, F.zero), F.one)
    return out
