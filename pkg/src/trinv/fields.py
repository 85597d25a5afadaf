"""Exact scalar fields: the rationals, prime fields and two small-characteristic extensions.

Elements are plain Python values so that polynomial code can store them in dicts:

* ``QQ``: :class:`fractions.Fraction`;
* ``GF(p)``: ``int`` in ``[0, p)``;
* ``GF(p^k)``: ``int`` whose base-``p`` digits are the coefficients of the residue
  polynomial in the generator ``g`` (low digit = constant term).  The integer ``c < p``
  therefore encodes the prime-subfield constant ``c``.

Every field also offers vectorised operations on numpy arrays (``v*`` methods), used
by the Monte-Carlo rank machinery.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UsageError

SURROGATE_PRIME = 2_147_483_647  # 2**31 - 1; stands in for characteristic zero

# Monic primitive moduli, coefficients listed from the constant term upwards.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 16): (1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1),
    (3, 10): (2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
}

DEFAULT_EXTENSION = {2: 16, 3: 10}


def modulus_string(coeffs: tuple[int, ...]) -> str:
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if not c:
            continue
        mono = "1" if e == 0 else ("x" if e == 1 else f"x^{e}")
        if e == 0:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts)


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int
    extension_degree: int = 1
    modulus_id: str | None = None

    def __post_init__(self):
        p, k = self.characteristic, self.extension_degree
        if p < 0 or (p != 0 and not _is_prime(p)):
            raise UsageError(f"characteristic must be 0 or prime, got {p}")
        if p >= 2**64:
            raise UsageError("prime fields are limited to 64-bit characteristics")
        if k < 1:
            raise UsageError("extension degree must be positive")
        if p == 0 and k != 1:
            raise UsageError("the rationals have no extensions here")
        if k > 1:
            if (p, k) not in MODULI:
                raise UsageError(f"no shipped modulus for GF({p}^{k})")
            mid = modulus_string(MODULI[p, k])
            if self.modulus_id is None:
                object.__setattr__(self, "modulus_id", mid)
            elif self.modulus_id != mid:
                raise UsageError(f"unknown modulus {self.modulus_id!r} for GF({p}^{k})")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(0)

    @classmethod
    def surrogate(cls) -> FieldSpec:
        return cls(SURROGATE_PRIME)

    @classmethod
    def small_char(cls, p: int, k: int | None = None) -> FieldSpec:
        return cls(p, DEFAULT_EXTENSION.get(p, 1) if k is None else k)

    @property
    def order(self) -> int | None:
        if self.characteristic == 0:
            return None
        return self.characteristic**self.extension_degree

    def describe(self) -> str:
        p, k = self.characteristic, self.extension_degree
        if p == 0:
            return "QQ"
        if k == 1:
            return f"GF({p})"
        return f"GF({p}^{k}) mod {self.modulus_id}"


class Field:
    """Common interface.  Subclasses implement scalar and vectorised arithmetic."""

    spec: FieldSpec
    characteristic: int
    order: int | None
    dtype: object = object
    zero = 0
    one = 1

    def __repr__(self):
        return f"<Field {self.spec.describe()}>"

    # scalar API -----------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == 0

    def power(self, a, e: int):
        if e < 0:
            return self.power(self.inv(a), -e)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def random(self, rng: np.random.Generator):
        raise NotImplementedError

    def random_nonzero(self, rng: np.random.Generator):
        while True:
            a = self.random(rng)
            if not self.is_zero(a):
                return a

    def format(self, a) -> str:
        raise NotImplementedError

    def signed(self, a):
        """Small-integer representative when ``a`` lies in the prime subfield, else ``None``."""
        raise NotImplementedError

    # vectorised API -------------------------------------------------------
    def asarray(self, values) -> np.ndarray:
        return np.asarray(values, dtype=self.dtype)

    def vzeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, self.zero, dtype=object)
        return np.zeros(shape, dtype=self.dtype)

    def vones(self, shape) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, self.one, dtype=object)
        return np.ones(shape, dtype=self.dtype)

    def vconst(self, c, shape) -> np.ndarray:
        return np.full(shape, c, dtype=self.dtype)

    def vadd(self, a, b):
        raise NotImplementedError

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vneg(self, a):
        raise NotImplementedError

    def vmul(self, a, b):
        raise NotImplementedError

    def vinv(self, a):
        raise NotImplementedError

    def vsum(self, a, axis: int):
        a = np.moveaxis(np.asarray(a), axis, 0)
        acc = a[0]
        for row in a[1:]:
            acc = self.vadd(acc, row)
        return acc

    def vrandom(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    def vis_zero(self, a) -> np.ndarray:
        return np.asarray(a) == 0


class RationalField(Field):
    def __init__(self, spec: FieldSpec, sample_bound: int = 2**20):
        self.spec = spec
        self.characteristic = 0
        self.order = None
        self.zero = Fraction(0)
        self.one = Fraction(1)
        self.sample_bound = sample_bound

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def random(self, rng):
        return Fraction(int(rng.integers(-self.sample_bound, self.sample_bound + 1)))

    def format(self, a):
        return str(Fraction(a))

    def signed(self, a):
        a = Fraction(a)
        return int(a) if a.denominator == 1 else None

    def asarray(self, values):
        arr = np.asarray(values, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr

    def vadd(self, a, b):
        return a + b

    def vsub(self, a, b):
        return a - b

    def vneg(self, a):
        return -a

    def vmul(self, a, b):
        return a * b

    def vinv(self, a):
        return 1 / a

    def vsum(self, a, axis):
        return np.asarray(a).sum(axis=axis)

    def vrandom(self, rng, shape):
        raw = rng.integers(-self.sample_bound, self.sample_bound + 1, size=shape)
        return np.vectorize(lambda v: Fraction(int(v)), otypes=[object])(raw)


class PrimeField(Field):
    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = p = spec.characteristic
        self.characteristic = p
        self.order = p
        # products of two reduced residues must fit into int64
        self.dtype = np.int64 if (p - 1) ** 2 < 2**63 else object

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def random(self, rng):
        if self.p < 2**63:
            return int(rng.integers(0, self.p))
        hi = int(rng.integers(0, 2**32))
        lo = int(rng.integers(0, 2**32))
        return ((hi << 32) | lo) % self.p

    def signed(self, a):
        a %= self.p
        return a if a <= self.p // 2 else a - self.p

    def format(self, a):
        return str(self.signed(a))

    def asarray(self, values):
        arr = np.asarray(values, dtype=self.dtype)
        return arr % self.p

    def vadd(self, a, b):
        return (a + b) % self.p

    def vsub(self, a, b):
        return (a - b) % self.p

    def vneg(self, a):
        return (-a) % self.p

    def vmul(self, a, b):
        return (a * b) % self.p

    def vinv(self, a):
        if np.any(np.asarray(a) % self.p == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.dtype is object:
            return np.vectorize(lambda x: pow(x, -1, self.p), otypes=[object])(a)
        result = np.ones_like(a)
        base = np.asarray(a).copy()
        e = self.p - 2
        while e:
            if e & 1:
                result = result * base % self.p
            base = base * base % self.p
            e >>= 1
        return result

    def vsum(self, a, axis):
        a = np.asarray(a)
        if self.dtype is object or a.shape[axis] > 2**31:
            return super().vsum(a, axis)
        return a.sum(axis=axis) % self.p

    def vrandom(self, rng, shape):
        if self.dtype is object:
            flat = [self.random(rng) for _ in range(int(np.prod(shape)))]
            return np.array(flat, dtype=object).reshape(shape)
        return rng.integers(0, self.p, size=shape, dtype=np.int64)


class ExtensionField(Field):
    """GF(p^k) via exp/log tables for multiplication and digit tables for addition."""

    dtype = np.int64

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, k = spec.characteristic, spec.extension_degree
        self.p, self.k = p, k
        self.characteristic = p
        self.order = p**k
        self.modulus = MODULI[p, k]
        self._build_mul_tables()
        self._build_add_tables()

    def _build_mul_tables(self):
        p, k, q = self.p, self.k, self.order
        mod = self.modulus
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        seen = np.zeros(q, dtype=bool)
        digits = [1] + [0] * (k - 1)
        for e in range(q - 1):
            code = sum(d * p**i for i, d in enumerate(digits))
            if seen[code]:
                raise ValueError(f"modulus for GF({p}^{k}) is not primitive")
            seen[code] = True
            exp[e] = code
            log[code] = e
            # multiply by the generator and reduce by the monic modulus
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(d - top * m) % p for d, m in zip(digits, mod)]
        exp[q - 1 :] = exp[: q - 1]
        self._exp, self._log = exp, log
        self._exp_list, self._log_list = exp.tolist(), log.tolist()

    def _build_add_tables(self):
        p = self.p
        if p == 2:
            return
        width = 1
        while width < self.k and p ** (2 * (width + 1)) <= 2**16:
            width += 1
        self._chunk = width
        base = p**width
        self._base = base
        digs = np.array([[(x // p**i) % p for i in range(width)] for x in range(base)])
        weights = p ** np.arange(width)
        add = ((digs[:, None, :] + digs[None, :, :]) % p) @ weights
        neg = ((-digs) % p) @ weights
        self._add_t = add.astype(np.int64)
        self._neg_t = neg.astype(np.int64)
        self._add_list = self._add_t.tolist()
        self._neg_list = self._neg_t.tolist()
        self._nchunks = -(-self.k // width)

    # scalar -------------------------------------------------------------
    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        base, out, scale = self._base, 0, 1
        for _ in range(self._nchunks):
            out += self._add_list[a % base][b % base] * scale
            a //= base
            b //= base
            scale *= base
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        base, out, scale = self._base, 0, 1
        for _ in range(self._nchunks):
            out += self._neg_list[a % base] * scale
            a //= base
            scale *= base
        return out

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp_list[(self.order - 1 - self._log_list[a]) % (self.order - 1)]

    def from_int(self, n):
        return n % self.p

    def random(self, rng):
        return int(rng.integers(0, self.order))

    def signed(self, a):
        if a >= self.p:
            return None
        return a if a <= self.p // 2 else a - self.p

    def format(self, a):
        s = self.signed(a)
        if s is not None:
            return str(s)
        terms = []
        for i in range(self.k - 1, -1, -1):
            d = (a // self.p**i) % self.p
            if not d:
                continue
            mono = "1" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if i == 0:
                terms.append(str(d))
            else:
                terms.append(mono if d == 1 else f"{d}{mono}")
        return "(" + "+".join(terms) + ")"

    # vectorised -----------------------------------------------------------
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        base = self._base
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        scale = 1
        for _ in range(self._nchunks):
            out += self._add_t[a % base, b % base] * scale
            a = a // base
            b = b // base
            scale *= base
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        base = self._base
        out = np.zeros(a.shape, dtype=np.int64)
        scale = 1
        for _ in range(self._nchunks):
            out += self._neg_t[a % base] * scale
            a = a // base
            scale *= base
        return out

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def vsum(self, a, axis):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        return super().vsum(a, axis)

    def vrandom(self, rng, shape):
        return rng.integers(0, self.order, size=shape, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> Field:
    if spec.characteristic == 0:
        return RationalField(spec)
    if spec.extension_degree == 1:
        return PrimeField(spec)
    return ExtensionField(spec)


def parse_field(char: str | int, ext: int | None = None) -> FieldSpec:
    """Translate a command-line characteristic selector into a :class:`FieldSpec`.

    ``0`` selects the large prime surrogate for characteristic zero, ``Q`` the exact
    rationals; ``2`` and ``3`` default to the shipped extensions.
    """
    text = str(char).strip()
    if text.upper() in ("Q", "QQ"):
        if ext not in (None, 1):
            raise UsageError("the rationals have no extensions here")
        return FieldSpec.rationals()
    try:
        p = int(text)
    except ValueError:
        raise UsageError(f"bad characteristic selector {char!r}") from None
    if p == 0:
        if ext not in (None, 1):
            raise UsageError("characteristic 0 runs use the prime surrogate, no extension")
        return FieldSpec.surrogate()
    return FieldSpec.small_char(p, ext)
