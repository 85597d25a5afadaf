"""Sparse multivariate polynomials over the fields of :mod:`trinv.fields`.

A :class:`PolyRing` fixes the field and an ordered tuple of variable names; a
:class:`MultiPoly` maps exponent tuples (one slot per ring variable) to nonzero
coefficients.  Matrix variables ``x{i}{j}({r})`` come first, ordered by ``(r, i, j)``,
parameters afterwards, so printing and hashing are canonical.
"""

from __future__ import annotations

import functools
from typing import Iterable, Mapping

import numpy as np

from .errors import UsageError
from .fields import Field, FieldSpec, get_field

PARAMETER_NAMES = ("alpha1", "alpha2", "beta1", "beta2", "gamma")


def matrix_var(i: int, j: int, r: int) -> str:
    return f"x{i}{j}({r})"


class PolyRing:
    """Polynomial ring ``field[names]``.

    ``groups`` assigns each variable the index ``r`` of the generic matrix it belongs
    to (``0`` for parameters); it drives matrix multidegrees.
    """

    def __init__(self, field: Field, names: Iterable[str], groups: Iterable[int] | None = None):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise UsageError("duplicate variable names")
        self.nvars = len(self.names)
        self._index = {name: k for k, name in enumerate(self.names)}
        self.groups = tuple(groups) if groups is not None else (0,) * self.nvars
        self.ngroups = max(self.groups, default=0)
        self._zero_exp = (0,) * self.nvars

    def __repr__(self):
        return f"PolyRing({self.field.spec.describe()}, {len(self.names)} vars)"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"variable {name!r} not in ring") from None

    def var(self, name: str) -> MultiPoly:
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return MultiPoly(self, {tuple(exp): self.field.one})

    def vars(self, *names: str) -> list[MultiPoly]:
        return [self.var(n) for n in names]

    def const(self, c) -> MultiPoly:
        if self.field.is_zero(c):
            return MultiPoly(self, {})
        return MultiPoly(self, {self._zero_exp: c})

    @property
    def zero(self) -> MultiPoly:
        return MultiPoly(self, {})

    @property
    def one(self) -> MultiPoly:
        return self.const(self.field.one)

    # ring interface shared with Field, used by generic matrix code
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, n: int) -> MultiPoly:
        return self.const(self.field.from_int(n))

    def is_zero(self, a) -> bool:
        return not a.terms

    def coerce(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            if x.ring is not self:
                raise UsageError("polynomials from different rings")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        return self.const(x)


def matrix_ring(spec: FieldSpec, n: int, d: int, params: tuple[str, ...] = ()) -> PolyRing:
    """Ring of the entries of ``d`` generic ``n x n`` matrices plus optional parameters.

    One shared ring object per argument set, so polynomials built separately combine.
    """
    return _matrix_ring(spec, int(n), int(d), tuple(params))


@functools.lru_cache(maxsize=None)
def _matrix_ring(spec: FieldSpec, n: int, d: int, params: tuple[str, ...]) -> PolyRing:
    names, groups = [], []
    for r in range(1, d + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                names.append(matrix_var(i, j, r))
                groups.append(r)
    names.extend(params)
    groups.extend([0] * len(params))
    ring = PolyRing(get_field(spec), names, groups)
    ring.n, ring.d = n, d
    return ring


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], object] | None = None):
        self.ring = ring
        F = ring.field
        self.terms = {e: c for e, c in (terms or {}).items() if not F.is_zero(c)}

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    # arithmetic -------------------------------------------------------------
    def _check(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring:
                raise UsageError("polynomials from different rings (field or variables differ)")
            return other
        return self.ring.coerce(other)

    def __add__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = F.add(out[e], c)
                if F.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MultiPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return MultiPoly._raw(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.ring.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in out:
                    out[e] = F.add(out[e], c)
                else:
                    out[e] = c
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> MultiPoly:
        F = self.ring.field
        if F.is_zero(c):
            return self.ring.zero
        return MultiPoly._raw(self.ring, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise UsageError("negative power of a polynomial")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # structure ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get(self.ring._zero_exp, self.ring.field.zero)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(self.ring.names[k] for k, a in enumerate(e) if a)
        return used

    def term_multidegree(self, exp: tuple[int, ...]) -> tuple[int, ...]:
        md = [0] * self.ring.ngroups
        for a, g in zip(exp, self.ring.groups):
            if g:
                md[g - 1] += a
        return tuple(md)

    def multidegrees(self) -> set[tuple[int, ...]]:
        return {self.term_multidegree(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    def homogeneous_component(self, md: tuple[int, ...]) -> MultiPoly:
        md = tuple(md)
        return MultiPoly._raw(
            self.ring, {e: c for e, c in self.terms.items() if self.term_multidegree(e) == md}
        )

    # evaluation and calculus ----------------------------------------------------
    def _point_vector(self, point) -> list:
        if isinstance(point, Mapping):
            values = [None] * self.ring.nvars
            for name, v in point.items():
                values[self.ring.index(name)] = v
        else:
            values = list(point)
            if len(values) != self.ring.nvars:
                raise UsageError("point has the wrong number of coordinates")
        return values

    def evaluate(self, point):
        """Exact value at ``point`` (a name->scalar mapping or a full coordinate sequence)."""
        values = self._point_vector(point)
        F = self.ring.field
        used = {k for e in self.terms for k, a in enumerate(e) if a}
        missing = [self.ring.names[k] for k in sorted(used) if values[k] is None]
        if missing:
            raise UsageError(f"unassigned variables: {', '.join(missing)}")
        powers: dict = {}
        total = F.zero
        for e, c in self.terms.items():
            term = c
            for k, a in enumerate(e):
                if a:
                    key = (k, a)
                    if key not in powers:
                        powers[key] = F.power(values[k], a)
                    term = F.mul(term, powers[key])
            total = F.add(total, term)
        return total

    def evaluate_batch(self, point: Mapping[str, np.ndarray], shape=None) -> np.ndarray:
        """Vectorised evaluation: each variable is assigned an array of field elements."""
        F = self.ring.field
        arrays = {self.ring.index(k): np.asarray(v) for k, v in point.items()}
        if shape is None:
            shape = next(iter(arrays.values())).shape if arrays else ()
        total = F.vzeros(shape)
        powers: dict = {}
        for e, c in self.terms.items():
            term = F.vconst(c, shape)
            for k, a in enumerate(e):
                if not a:
                    continue
                if k not in arrays:
                    raise UsageError(f"unassigned variable {self.ring.names[k]}")
                key = (k, a)
                if key not in powers:
                    base, acc = arrays[k], F.vones(shape)
                    for _ in range(a):
                        acc = F.vmul(acc, base)
                    powers[key] = acc
                term = F.vmul(term, powers[key])
            total = F.vadd(total, term)
        return total

    def diff(self, var: str) -> MultiPoly:
        """Formal partial derivative; exponent multipliers are reduced in the field."""
        k = self.ring.index(var)
        F = self.ring.field
        out: dict = {}
        for e, c in self.terms.items():
            a = e[k]
            if not a:
                continue
            coef = F.mul(c, F.from_int(a))
            if F.is_zero(coef):
                continue
            ne = list(e)
            ne[k] -= 1
            out[tuple(ne)] = coef
        return MultiPoly._raw(self.ring, out)

    def subs(self, mapping: Mapping[str, MultiPoly]) -> MultiPoly:
        """Simultaneous substitution of polynomials for variables."""
        ring = self.ring
        idx = {ring.index(k): ring.coerce(v) for k, v in mapping.items()}
        cache: dict = {}
        result = ring.zero
        for e, c in self.terms.items():
            keep = list(e)
            factor = ring.one
            for k, poly in idx.items():
                a = e[k]
                if a:
                    keep[k] = 0
                    if (k, a) not in cache:
                        cache[k, a] = poly**a
                    factor = factor * cache[k, a]
            mono = MultiPoly._raw(ring, {tuple(keep): c})
            result = result + mono * factor
        return result

    def divide_exact(self, other: MultiPoly) -> MultiPoly | None:
        """Quotient if ``other`` divides ``self`` exactly, else ``None``.

        Division by a single polynomial in lex order leaves a zero remainder iff the
        divisor divides, so a leading term that cannot be cancelled settles the answer.
        """
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.ring.field
        lead = max(other.terms)
        lead_inv = F.inv(other.terms[lead])
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            top = max(rem)
            if any(a < b for a, b in zip(top, lead)):
                return None
            shift = tuple(a - b for a, b in zip(top, lead))
            coef = F.mul(rem[top], lead_inv)
            quot[shift] = coef
            for e, c in other.terms.items():
                t = tuple(a + b for a, b in zip(e, shift))
                v = F.sub(rem.get(t, F.zero), F.mul(coef, c))
                if F.is_zero(v):
                    rem.pop(t, None)
                else:
                    rem[t] = v
        return MultiPoly._raw(self.ring, quot)

    # printing -----------------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded-lex order of exponent vectors."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.ring.field
        names = self.ring.names
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[k] if a == 1 else f"{names[k]}^{a}" for k, a in enumerate(e) if a
            )
            s = F.signed(c)
            if s is None:
                coef, neg = F.format(c), False
            else:
                coef, neg = str(abs(s)), s < 0
            if mono:
                body = mono if coef == "1" else f"{coef}*{mono}"
            else:
                body = coef
            pieces.append(("- " if neg else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __repr__(self):
        return f"MultiPoly({self})"


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def poly_eval(a: MultiPoly, point):
    return a.evaluate(point)


def partial_derivative(a: MultiPoly, var: str) -> MultiPoly:
    return a.diff(var)


def parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    """Parse an arithmetic expression (``+ - * ^ **``, integers, parentheses) in ``ring``.

    Variable names must be valid Python identifiers.
    """
    import ast

    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return ring.from_int(node.value)
        if isinstance(node, ast.Name):
            return ring.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise UsageError(f"exponent must be a literal integer in {text!r}")
                return walk(node.left) ** node.right.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise UsageError(f"unsupported syntax in polynomial {text!r}")

    return walk(tree)
