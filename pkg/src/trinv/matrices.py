"""Matrices over a field (numeric) or over a polynomial ring (generic matrices).

One :class:`Matrix` class serves both cases; ``ring`` is either a
:class:`~trinv.fields.Field` or a :class:`~trinv.poly.PolyRing`, each of which exposes
``add/sub/mul/neg/from_int/is_zero``.  Coefficients of the characteristic polynomial
are sums of principal minors, never Newton's identities, so everything here is valid
in characteristic 2 and 3.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import numpy as np

from .errors import SingularMatrixError, UsageError
from .fields import Field, FieldSpec
from .linalg import exact_rank
from .poly import MultiPoly, PolyRing, matrix_ring, matrix_var


class Matrix:
    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        width = {len(r) for r in self.rows}
        if len(width) > 1:
            raise UsageError("ragged matrix")

    # construction ------------------------------------------------------------
    @classmethod
    def zeros(cls, ring, n: int, m: int | None = None) -> Matrix:
        z = ring.from_int(0)
        return cls(ring, [[z] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, ring, n: int) -> Matrix:
        one, zero = ring.from_int(1), ring.from_int(0)
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_ints(cls, ring, rows) -> Matrix:
        return cls(ring, [[ring.from_int(x) for x in r] for r in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    @property
    def n(self) -> int:
        rows, cols = self.shape
        if rows != cols:
            raise UsageError("square matrix expected")
        return rows

    @property
    def field(self) -> Field:
        return self.ring if isinstance(self.ring, Field) else self.ring.field

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        fmt = self.ring.format if isinstance(self.ring, Field) else str
        body = "; ".join(" ".join(fmt(x) for x in r) for r in self.rows)
        return f"Matrix[{body}]"

    # arithmetic -------------------------------------------------------------
    def _same(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise UsageError("matrix expected")
        if other.ring is not self.ring:
            raise UsageError("matrices over different rings")

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise UsageError("size mismatch")
        R = self.ring
        return Matrix(R, [[R.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise UsageError("size mismatch")
        R = self.ring
        return Matrix(R, [[R.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        R = self.ring
        return Matrix(R, [[R.neg(a) for a in r] for r in self.rows])

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same(other)
        (a, b), (c, d) = self.shape, other.shape
        if b != c:
            raise UsageError(f"size mismatch {a}x{b} @ {c}x{d}")
        R = self.ring
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                acc = R.from_int(0)
                for x, y in zip(row, col):
                    if not (R.is_zero(x) or R.is_zero(y)):
                        acc = R.add(acc, R.mul(x, y))
                new.append(acc)
            out.append(new)
        return Matrix(R, out)

    def scale(self, c) -> Matrix:
        R = self.ring
        return Matrix(R, [[R.mul(c, a) for a in r] for r in self.rows])

    def __pow__(self, k: int) -> Matrix:
        result = Matrix.identity(self.ring, self.n)
        for _ in range(k):
            result = result @ self
        return result

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.ring is other.ring and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def transpose(self) -> Matrix:
        return Matrix(self.ring, list(zip(*self.rows)))

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for r in self.rows for x in r)

    def trace(self):
        R = self.ring
        acc = R.from_int(0)
        for i in range(self.n):
            acc = R.add(acc, self.rows[i][i])
        return acc

    def map(self, fn, ring=None) -> Matrix:
        return Matrix(ring or self.ring, [[fn(x) for x in r] for r in self.rows])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows])

    # determinants -------------------------------------------------------------
    def det(self):
        return _laplace_det(self.ring, [list(r) for r in self.rows])

    def adjugate(self) -> Matrix:
        n = self.n
        R = self.ring
        if n == 1:
            return Matrix(R, [[R.from_int(1)]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[self.rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
                c = _laplace_det(R, minor)
                cof[j][i] = c if (i + j) % 2 == 0 else R.neg(c)
        return Matrix(R, cof)

    def inverse(self) -> Matrix:
        if not isinstance(self.ring, Field):
            raise UsageError("only numeric matrices are inverted")
        d = self.det()
        if self.ring.is_zero(d):
            raise SingularMatrixError("matrix is singular")
        return self.adjugate().scale(self.ring.inv(d))

    def rank(self) -> int:
        if not isinstance(self.ring, Field):
            raise UsageError("rank is computed for numeric matrices only")
        return exact_rank([list(r) for r in self.rows], self.ring)

    # polynomial matrices ------------------------------------------------------
    def evaluate(self, point) -> Matrix:
        """Substitute field values into a polynomial matrix."""
        F = self.ring.field
        return Matrix(F, [[x.evaluate(point) for x in r] for r in self.rows])

    def subs(self, mapping) -> Matrix:
        return Matrix(self.ring, [[x.subs(mapping) for x in r] for r in self.rows])

    def to_array(self) -> np.ndarray:
        return self.ring.asarray([list(r) for r in self.rows])


NumericMatrix = Matrix
MatrixPoly = Matrix


def _laplace_det(R, m: list[list]):
    n = len(m)
    if n == 0:
        return R.from_int(1)
    if n == 1:
        return m[0][0]
    if n == 2:
        return R.sub(R.mul(m[0][0], m[1][1]), R.mul(m[0][1], m[1][0]))
    acc = R.from_int(0)
    for j in range(n):
        x = m[0][j]
        if R.is_zero(x):
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = R.mul(x, _laplace_det(R, minor))
        acc = R.add(acc, term) if j % 2 == 0 else R.sub(acc, term)
    return acc


def leibniz_det(M: Matrix):
    """Determinant as the signed sum over permutations (independent of Laplace)."""
    R = M.ring
    n = M.n
    acc = R.from_int(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = R.from_int(1)
        for i, j in enumerate(perm):
            term = R.mul(term, M.rows[i][j])
        acc = R.sub(acc, term) if inversions % 2 else R.add(acc, term)
    return acc


# constructors ----------------------------------------------------------------------

def generic(r: int, n: int, d: int, spec: FieldSpec | None = None, params: tuple[str, ...] = ()) -> Matrix:
    """The generic matrix ``X_r = (x_ij(r))`` in the ring of ``d`` generic ``n x n`` matrices."""
    if n not in (3, 4):
        raise UsageError("matrix size must be 3 or 4")
    if not 1 <= r <= d:
        raise UsageError(f"matrix index {r} outside 1..{d}")
    ring = matrix_ring(spec or FieldSpec.surrogate(), n, d, tuple(params))
    return Matrix(ring, [[ring.var(matrix_var(i, j, r)) for j in range(1, n + 1)] for i in range(1, n + 1)])


def generic_tuple(n: int, d: int, spec: FieldSpec | None = None, params: tuple[str, ...] = ()) -> list[Matrix]:
    return [generic(r, n, d, spec, params) for r in range(1, d + 1)]


def unit(ring, n: int, i: int, j: int) -> Matrix:
    """Matrix unit ``e_ij`` (1-based indices)."""
    rows = [[ring.from_int(1 if (a, b) == (i - 1, j - 1) else 0) for b in range(n)] for a in range(n)]
    return Matrix(ring, rows)


def jordan_j1(ring) -> Matrix:
    return unit(ring, 3, 1, 2)


def jordan_j2(ring) -> Matrix:
    return unit(ring, 3, 1, 2) + unit(ring, 3, 2, 3)


def toeplitz_l(ring, a, b, c) -> Matrix:
    """Upper unitriangular-shaped Toeplitz matrix ``a E + b J2 + c J2^2``; commutes with J2."""
    z = ring.from_int(0)
    return Matrix(ring, [[a, b, c], [z, a, b], [z, z, a]])


# invariant-theoretic operations --------------------------------------------------------

def sigma(k: int, M: Matrix):
    """k-th coefficient of the characteristic polynomial: the sum of k x k principal minors."""
    n = M.n
    if not 1 <= k <= n:
        raise UsageError(f"sigma index {k} outside 1..{n}")
    R = M.ring
    acc = R.from_int(0)
    for idx in itertools.combinations(range(n), k):
        minor = [[M.rows[i][j] for j in idx] for i in idx]
        acc = R.add(acc, _laplace_det(R, minor))
    return acc


def word_product(word, assignment) -> Matrix:
    """Ordered product of the matrices assigned to the letters of ``word``.

    ``assignment`` maps letter indices (1-based) to matrices, either as a mapping or a
    sequence where position ``r-1`` holds the matrix for letter ``r``.
    """
    letters = getattr(word, "letters", word)
    if not letters:
        raise UsageError("empty word")

    def lookup(r):
        try:
            return assignment[r] if isinstance(assignment, Mapping) else assignment[r - 1]
        except (KeyError, IndexError):
            raise UsageError(f"letter x{r} is not assigned") from None

    result = lookup(letters[0])
    for r in letters[1:]:
        nxt = lookup(r)
        if nxt.shape != result.shape or nxt.ring is not result.ring:
            raise UsageError("assigned matrices differ in size or field")
        result = result @ nxt
    return result


def cayley_hamilton_residual(M: Matrix) -> Matrix:
    """``M^n - s1 M^{n-1} + s2 M^{n-2} - ... + (-1)^n s_n E`` with ``s_k = sigma(k, M)``."""
    n = M.n
    R = M.ring
    powers = [Matrix.identity(R, n)]
    for _ in range(n):
        powers.append(powers[-1] @ M)
    total = powers[n]
    for k in range(1, n + 1):
        term = powers[n - k].scale(sigma(k, M))
        total = total - term if k % 2 else total + term
    return total


def conjugate(g: Matrix, M: Matrix) -> Matrix:
    """``g M g^-1`` with the inverse taken through the adjugate."""
    return g @ M @ g.inverse()


def charpoly_coefficients(M: Matrix) -> list:
    """Coefficients ``c_0..c_n`` of ``det(lam E - M) = sum c_k lam^(n-k)`` by Leibniz expansion.

    Independent of :func:`sigma`; serves as its oracle (``c_k = (-1)^k sigma_k``).
    """
    F = M.field
    base = M.ring
    if isinstance(base, Field):
        ring = PolyRing(F, ["lam"])
        lift = ring.const
    else:
        ring = PolyRing(F, base.names + ("lam",), base.groups + (0,))

        def lift(p):
            return MultiPoly(ring, {e + (0,): c for e, c in p.terms.items()})
    lam = ring.var("lam")
    n = M.n
    shifted = Matrix(
        ring,
        [[(lam if i == j else ring.zero) - lift(M.rows[i][j]) for j in range(n)] for i in range(n)],
    )
    det = leibniz_det(shifted)
    k_lam = ring.index("lam")
    coeffs = []
    for k in range(n + 1):
        part = {e: c for e, c in det.terms.items() if e[k_lam] == n - k}
        if isinstance(base, Field):
            coeffs.append(next(iter(part.values()), F.zero))
        else:
            coeffs.append(MultiPoly(base, {e[:-1]: c for e, c in part.items()}))
    return coeffs


# batched numeric kernels used by the sampling machinery ----------------------------------

def batch_matmul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Products of stacks of square matrices, shape ``(..., n, n)``."""
    n = A.shape[-1]
    acc = F.vmul(A[..., :, 0, None], B[..., None, 0, :])
    for k in range(1, n):
        acc = F.vadd(acc, F.vmul(A[..., :, k, None], B[..., None, k, :]))
    return acc


def _batch_det(F: Field, A: np.ndarray, idx: Sequence[int]) -> np.ndarray:
    if len(idx) == 1:
        return A[..., idx[0], idx[0]]
    return _batch_minor(F, A, list(idx), list(idx))


def _batch_minor(F: Field, A, rows: list[int], cols: list[int]):
    if len(rows) == 1:
        return A[..., rows[0], cols[0]]
    if len(rows) == 2:
        return F.vsub(
            F.vmul(A[..., rows[0], cols[0]], A[..., rows[1], cols[1]]),
            F.vmul(A[..., rows[0], cols[1]], A[..., rows[1], cols[0]]),
        )
    acc = None
    for t, c in enumerate(cols):
        rest = cols[:t] + cols[t + 1 :]
        term = F.vmul(A[..., rows[0], c], _batch_minor(F, A, rows[1:], rest))
        if acc is None:
            acc = term
        else:
            acc = F.vsub(acc, term) if t % 2 else F.vadd(acc, term)
    return acc


def batch_sigma(F: Field, A: np.ndarray, k: int) -> np.ndarray:
    n = A.shape[-1]
    if not 1 <= k <= n:
        raise UsageError(f"sigma index {k} outside 1..{n}")
    acc = None
    for idx in itertools.combinations(range(n), k):
        v = _batch_det(F, A, idx)
        acc = v if acc is None else F.vadd(acc, v)
    return acc


def batch_det(F: Field, A: np.ndarray) -> np.ndarray:
    n = A.shape[-1]
    return _batch_det(F, A, list(range(n)))


def batch_adjugate(F: Field, A: np.ndarray) -> np.ndarray:
    n = A.shape[-1]
    out = F.vzeros(A.shape)
    for i in range(n):
        for j in range(n):
            rows = [a for a in range(n) if a != i]
            cols = [b for b in range(n) if b != j]
            c = _batch_minor(F, A, rows, cols)
            out[..., j, i] = c if (i + j) % 2 == 0 else F.vneg(c)
    return out
