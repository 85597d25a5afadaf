"""Exact rank, row reduction and kernels over the shipped fields."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .fields import Field


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            row, prow = m[r], m[rank]
            for c in range(col + 1, ncols):
                # exact by Sylvester's identity
                row[c] = (p * row[c] - f * prow[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


def _field_rank(rows: list[list], field: Field) -> int:
    F = field
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if not F.is_zero(m[r][col])), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = F.inv(m[rank][col])
        prow = [F.mul(x, inv) for x in m[rank]]
        m[rank] = prow
        for r in range(rank + 1, nrows):
            f = m[r][col]
            if F.is_zero(f):
                continue
            m[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[r], prow)]
        rank += 1
    return rank


def exact_rank(rows, field: Field) -> int:
    """Rank of a rectangular matrix of field elements.

    Over the rationals the matrix is cleared of denominators row by row and handed to
    Bareiss elimination; finite fields use ordinary elimination (vectorised for larger
    inputs).
    """
    if isinstance(rows, np.ndarray):
        if rows.size == 0:
            return 0
        if field.characteristic == 0:
            rows = rows.tolist()
        else:
            return len(row_reduce(rows, field))
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if field.characteristic == 0:
        ints = []
        for r in rows:
            r = [Fraction(x) for x in r]
            scale = lcm(*(x.denominator for x in r)) if r else 1
            ints.append([int(x * scale) for x in r])
        return bareiss_rank(ints)
    if len(rows) * len(rows[0]) > 400 and field.dtype is not object:
        return len(row_reduce(field.asarray(rows), field))
    return _field_rank(rows, field)


def row_reduce(a: np.ndarray, field: Field) -> np.ndarray:
    """Echelon form of ``a`` (rows spanning the same space), zero rows dropped.

    Each returned row is normalised to a leading one.  Works column by column on the
    still-active block so that the cost is proportional to rank x rows x cols.
    """
    F = field
    a = np.array(a, dtype=F.dtype, copy=True)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0)
    nrows, ncols = a.shape
    pivots: list[np.ndarray] = []
    active = a
    for col in range(ncols):
        if active.shape[0] == 0:
            break
        column = active[:, col]
        nz = np.flatnonzero(~F.vis_zero(column))
        if nz.size == 0:
            continue
        p = nz[0]
        lead = active[p, col]
        prow = F.vmul(active[p], F.inv(lead if F.dtype is object else int(lead)))
        others = nz[1:]
        if others.size:
            factors = active[others, col]
            update = F.vmul(factors[:, None], prow[None, col:])
            active[others, col:] = F.vsub(active[others, col:], update)
        keep = np.ones(active.shape[0], dtype=bool)
        keep[p] = False
        pivots.append(prow)
        active = active[keep]
        if (len(pivots) & 31) == 0 and active.shape[0]:
            # drop rows that have become zero to shrink later sweeps
            alive = ~np.all(F.vis_zero(active[:, col + 1 :]), axis=1)
            active = active[alive]
    if not pivots:
        return a[:0]
    return np.vstack(pivots)


def nullspace(rows, field: Field) -> list[list]:
    """Basis of the right kernel ``{v : M v = 0}`` as a list of vectors."""
    F = field
    m = [list(r) for r in rows]
    if not m:
        return []
    nrows, ncols = len(m), len(m[0])
    pivcols = []
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, nrows) if not F.is_zero(m[k][col])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = F.inv(m[r][col])
        m[r] = [F.mul(x, inv) for x in m[r]]
        for k in range(nrows):
            if k != r and not F.is_zero(m[k][col]):
                f = m[k][col]
                m[k] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[k], m[r])]
        pivcols.append(col)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivcols]
    basis = []
    for fc in free:
        v = [F.zero] * ncols
        v[fc] = F.one
        for i, pc in enumerate(pivcols):
            v[pc] = F.neg(m[i][fc])
        basis.append(v)
    return basis


def field_matmul(A: np.ndarray, B: np.ndarray, field: Field) -> np.ndarray:
    """Matrix product over the field for 2-D arrays."""
    F = field
    A = np.asarray(A, dtype=F.dtype)
    B = np.asarray(B, dtype=F.dtype)
    if A.shape[1] == 0:
        return F.vzeros((A.shape[0], B.shape[1]))
    p = F.characteristic
    if F.dtype is not object and getattr(F, "order", None) == p and A.shape[1] < 2**16:
        # split A into 16-bit halves so every partial sum stays below 2**63
        lo = (A & 0xFFFF) @ B % p
        hi = (A >> 16) @ B % p
        return (hi * 65536 + lo) % p
    acc = F.vmul(A[:, 0, None], B[None, 0, :])
    for t in range(1, A.shape[1]):
        acc = F.vadd(acc, F.vmul(A[:, t, None], B[None, t, :]))
    return acc


class Echelon:
    """Fully reduced row-echelon basis of a subspace of F^N."""

    def __init__(self, field: Field, ncols: int, rows: np.ndarray | None = None):
        self.field = field
        self.ncols = ncols
        self.rows = field.vzeros((0, ncols))
        self.pivots = np.zeros(0, dtype=np.int64)
        if rows is not None and len(rows):
            self._set(row_reduce(rows, field))

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _set(self, echelon: np.ndarray) -> None:
        F = self.field
        if len(echelon) == 0:
            return
        pivots = np.array([int(np.flatnonzero(~F.vis_zero(r))[0]) for r in echelon], dtype=np.int64)
        R = np.array(echelon, dtype=F.dtype, copy=True)
        # back substitution: clear entries above each pivot
        for t in range(len(R) - 1, 0, -1):
            col = R[:t, pivots[t]]
            nz = np.flatnonzero(~F.vis_zero(col))
            if nz.size:
                R[nz] = F.vsub(R[nz], F.vmul(col[nz, None], R[t][None, :]))
        merged = np.vstack([self.rows, R]) if len(self.rows) else R
        piv = np.concatenate([self.pivots, pivots])
        order = np.argsort(piv, kind="stable")
        self.rows, self.pivots = merged[order], piv[order]

    def reduce(self, V: np.ndarray) -> np.ndarray:
        """Residues of the rows of ``V`` modulo the subspace."""
        F = self.field
        V = np.asarray(V, dtype=F.dtype)
        if V.ndim == 1:
            V = V[None, :]
        if not len(self.rows):
            return V.copy()
        return F.vsub(V, field_matmul(V[:, self.pivots], self.rows, F))

    def extend(self, V: np.ndarray) -> int:
        """Add the rows of ``V``; returns the rank increase."""
        F = self.field
        res = self.reduce(V)
        alive = ~np.all(F.vis_zero(res), axis=1)
        res = res[alive]
        if not len(res):
            return 0
        before = self.rank
        new = row_reduce(res, F)
        if len(new):
            # new rows have zeros in old pivot columns; clear new pivots from old rows
            npiv = np.array([int(np.flatnonzero(~F.vis_zero(r))[0]) for r in new], dtype=np.int64)
            R = np.array(new, dtype=F.dtype, copy=True)
            for t in range(len(R) - 1, 0, -1):
                col = R[:t, npiv[t]]
                nz = np.flatnonzero(~F.vis_zero(col))
                if nz.size:
                    R[nz] = F.vsub(R[nz], F.vmul(col[nz, None], R[t][None, :]))
            if len(self.rows):
                old = self.rows
                coeffs = old[:, npiv]
                old = F.vsub(old, field_matmul(coeffs, R, F))
                merged = np.vstack([old, R])
            else:
                merged = R
            piv = np.concatenate([self.pivots, npiv])
            order = np.argsort(piv, kind="stable")
            self.rows, self.pivots = merged[order], piv[order]
        return self.rank - before

    def contains(self, v: np.ndarray) -> bool:
        return bool(np.all(self.field.vis_zero(self.reduce(v))))

    def greedy_independent(self, V: np.ndarray) -> list[int]:
        """Indices of rows of ``V`` that raise the rank when added one at a time in order.

        Does not modify the basis.
        """
        F = self.field
        res = self.reduce(V)
        chosen: list[int] = []
        basis: list[np.ndarray] = []
        pivs: list[int] = []
        for i, r in enumerate(res):
            r = r.copy()
            for b, pc in zip(basis, pivs):
                c = r[pc]
                if not F.is_zero(c if F.dtype is object else int(c)):
                    r = F.vsub(r, F.vmul(c, b))
            nz = np.flatnonzero(~F.vis_zero(r))
            if nz.size:
                pc = int(nz[0])
                lead = r[pc]
                r = F.vmul(r, F.inv(lead if F.dtype is object else int(lead)))
                basis.append(r)
                pivs.append(pc)
                chosen.append(i)
        return chosen

    def copy(self) -> Echelon:
        e = Echelon(self.field, self.ncols)
        e.rows, e.pivots = self.rows.copy(), self.pivots.copy()
        return e
