"""Dense square matrix algebra over Z/l^k Z.

Matrices are immutable-by-convention numpy int64 arrays with canonical entries
in [0, l^k).  No sparse representation: dim <= 12, dense is faster and simpler.
Products are exact: when dim*(l^k - 1)^2 could overflow int64 the code drops to
Python-int (object dtype) arithmetic.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, ModMismatch, NotInvertible, RangeError
from .residue_ring import Modulus, inv_int

MAX_DIM = 12


def _as_canonical(entries, modulus: Modulus) -> np.ndarray:
    a = np.asarray(entries, dtype=np.int64)
    if a.ndim == 1:
        n = int(round(len(a) ** 0.5))
        if n * n != len(a):
            raise DimMismatch(f"flat entry list of length {len(a)} is not square")
        a = a.reshape(n, n)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise RangeError(f"dimension {a.shape[0]} exceeds the cap {MAX_DIM}")
    return np.mod(a, modulus.value)


def product_fits_int64(dim: int, value: int) -> bool:
    """True when a dot product of canonical entries cannot overflow int64."""
    return dim * (value - 1) ** 2 < 2**63


def mul_arrays(a: np.ndarray, b: np.ndarray, modulus: Modulus) -> np.ndarray:
    """Exact matrix product mod l^k on raw arrays."""
    if product_fits_int64(a.shape[-1], modulus.value):
        return (a @ b) % modulus.value
    wide = a.astype(object) @ b.astype(object)
    return (wide % modulus.value).astype(np.int64)


class MatMod:
    """A dim x dim matrix over Z/l^k Z with canonical entries.

    Hashable and comparable through its canonical byte key; supports *, +, -,
    and unary - with modulus checks.
    """

    __slots__ = ("dim", "modulus", "entries", "_key")

    def __init__(self, entries, modulus: Modulus):
        self.entries = _as_canonical(entries, modulus)
        self.entries.setflags(write=False)
        self.dim = self.entries.shape[0]
        self.modulus = modulus
        self._key = None

    @classmethod
    def identity(cls, dim: int, modulus: Modulus) -> "MatMod":
        return cls(np.eye(dim, dtype=np.int64), modulus)

    @classmethod
    def zeros(cls, dim: int, modulus: Modulus) -> "MatMod":
        return cls(np.zeros((dim, dim), dtype=np.int64), modulus)

    @classmethod
    def from_rows(cls, rows, modulus: Modulus) -> "MatMod":
        return cls(np.asarray(rows, dtype=np.int64), modulus)

    def transpose(self) -> "MatMod":
        return MatMod(self.entries.T, self.modulus)

    def row_major(self) -> list:
        return [int(x) for x in self.entries.ravel()]

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(self.dim, dtype=np.int64)))

    def __mul__(self, other: "MatMod") -> "MatMod":
        return mat_mul(self, other)

    def __add__(self, other: "MatMod") -> "MatMod":
        _check_pair(self, other)
        return MatMod(self.entries + other.entries, self.modulus)

    def __sub__(self, other: "MatMod") -> "MatMod":
        _check_pair(self, other)
        return MatMod(self.entries - other.entries, self.modulus)

    def __neg__(self) -> "MatMod":
        return MatMod(-self.entries, self.modulus)

    def scale(self, c: int) -> "MatMod":
        return MatMod(self.entries * (int(c) % self.modulus.value), self.modulus)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatMod):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.modulus == other.modulus
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash(canonical_key(self))

    def __repr__(self) -> str:
        rows = ", ".join("[" + " ".join(str(x) for x in r) + "]" for r in self.entries)
        return f"MatMod({rows} mod {self.modulus.value})"


def _check_pair(a: MatMod, b: MatMod) -> None:
    if a.dim != b.dim:
        raise DimMismatch(f"{a.dim} vs {b.dim}")
    if a.modulus != b.modulus:
        raise ModMismatch(f"{a.modulus} vs {b.modulus}")


def mat_mul(a: MatMod, b: MatMod) -> MatMod:
    """Exact product mod l^k."""
    _check_pair(a, b)
    return MatMod(mul_arrays(a.entries, b.entries, a.modulus), a.modulus)


def mat_pow(a: MatMod, n: int) -> MatMod:
    """n-fold product by binary exponentiation; n = 0 yields the identity."""
    if n < 0:
        raise RangeError("negative exponent; invert explicitly with mat_inv")
    result = MatMod.identity(a.dim, a.modulus)
    base = a
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def mat_inv(a: MatMod) -> MatMod:
    """Inverse by in-place Gauss-Jordan elimination on unit pivots.

    Over Z/l^k a matrix is invertible iff its mod-l reduction is, so pivot
    search only needs unit detection (entry not divisible by l).
    """
    m = a.modulus
    n = a.dim
    work = a.entries.astype(object)
    aug = np.concatenate([work, np.eye(n, dtype=object)], axis=1)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if aug[row, col] % m.l != 0:
                pivot = row
                break
        if pivot is None:
            raise NotInvertible(f"no unit pivot in column {col}")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = (aug[col] * inv_int(int(aug[col, col]), m)) % m.value
        for row in range(n):
            if row != col and aug[row, col] != 0:
                aug[row] = (aug[row] - aug[row, col] * aug[col]) % m.value
    return MatMod(aug[:, n:].astype(np.int64), m)


def mat_reduce(a: MatMod, j: int) -> MatMod:
    """Entry-wise reduction from level k to level j."""
    return MatMod(a.entries, a.modulus.reduce_to(j))


def entry_bits(modulus: Modulus) -> int:
    """Bits per entry in the canonical key: ceil(log2 l^k)."""
    return max(1, (modulus.value - 1).bit_length())


def canonical_key(a: MatMod) -> bytes:
    """Injective byte encoding of (dim, l, k, entries).

    Entries are packed little-endian at ceil(log2 l^k) bits each, prefixed by
    (dim, l, k); fixed-width keys keep closure hash sets compact.
    """
    if a._key is not None:
        return a._key
    m = a.modulus
    bits = entry_bits(m)
    packed = 0
    for i, e in enumerate(a.entries.ravel().tolist()):
        packed |= e << (i * bits)
    nbytes = (a.dim * a.dim * bits + 7) // 8
    key = bytes((a.dim, m.l, m.k)) + packed.to_bytes(nbytes, "little")
    a._key = key
    return key
