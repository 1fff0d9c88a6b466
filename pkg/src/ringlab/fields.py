"""Prime fields GF(p) and exact dense linear algebra over them.

Residues are machine integers reduced eagerly mod p; with p <= 2^16 all
products fit comfortably in int64. Values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

MAX_PRIME = 2**16


def is_prime(n: int) -> bool:
    """Trial-division primality check (sufficient for p <= 2^16)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p):
    if not isinstance(p, (int, np.integer)) or not (2 <= p <= MAX_PRIME) or not is_prime(int(p)):
        raise ValueError(f"p must be a prime in [2, {MAX_PRIME}], got {p!r}")
    return int(p)


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p); primality is checked at construction."""

    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", _check_prime(self.p))

    def elements(self):
        return range(self.p)

    def __repr__(self):
        return f"GF({self.p})"


def field_elements(p):
    """All residues 0..p-1 of GF(p); validates p."""
    return iter(range(_check_prime(p)))


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class FVector:
    """An immutable coordinate vector over GF(p)."""

    __slots__ = ("p", "_coords", "_hash")

    def __init__(self, p, coords):
        self.p = _check_prime(p)
        arr = np.asarray(coords, dtype=np.int64) % self.p
        if arr.ndim != 1:
            raise ValueError("FVector needs a 1-d coordinate sequence")
        self._coords = _freeze(arr)
        self._hash = None

    @property
    def coords(self):
        return self._coords

    def __len__(self):
        return self._coords.shape[0]

    def __iter__(self):
        return iter(int(x) for x in self._coords)

    def __getitem__(self, i):
        return int(self._coords[i])

    def to_list(self):
        return [int(x) for x in self._coords]

    def is_zero(self):
        return not self._coords.any()

    def _same_space(self, other):
        if not isinstance(other, FVector) or other.p != self.p or len(other) != len(self):
            raise ValueError("vectors live over different fields or lengths")

    def __add__(self, other):
        self._same_space(other)
        return FVector(self.p, self._coords + other._coords)

    def __sub__(self, other):
        self._same_space(other)
        return FVector(self.p, self._coords - other._coords)

    def __neg__(self):
        return FVector(self.p, -self._coords)

    def scale(self, c):
        return FVector(self.p, self._coords * (int(c) % self.p))

    def __eq__(self, other):
        return (
            isinstance(other, FVector)
            and self.p == other.p
            and self._coords.shape == other._coords.shape
            and bool((self._coords == other._coords).all())
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self._coords.tobytes()))
        return self._hash

    def __repr__(self):
        return f"FVector(p={self.p}, {self.to_list()})"


class FMatrix:
    """An immutable matrix of residues over GF(p), rows x cols."""

    __slots__ = ("p", "_array", "_hash")

    def __init__(self, p, array):
        self.p = _check_prime(p)
        arr = np.asarray(array, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("FMatrix needs a 2-d array")
        self._array = _freeze(arr % self.p)
        self._hash = None

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, p, rows, cols=None):
        if len(rows) == 0:
            return cls.zeros(p, 0, 0 if cols is None else cols)
        return cls(p, np.asarray(list(rows), dtype=np.int64))

    @property
    def array(self):
        return self._array

    @property
    def shape(self):
        return self._array.shape

    @property
    def rows(self):
        return self._array.shape[0]

    @property
    def cols(self):
        return self._array.shape[1]

    def row(self, i):
        return FVector(self.p, self._array[i])

    def __eq__(self, other):
        return (
            isinstance(other, FMatrix)
            and self.p == other.p
            and self._array.shape == other._array.shape
            and bool((self._array == other._array).all())
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self._array.shape, self._array.tobytes()))
        return self._hash

    def __repr__(self):
        return f"FMatrix(p={self.p}, {self._array.tolist()})"


def rref(m: FMatrix):
    """Unique reduced row-echelon form with zero rows dropped, plus pivots."""
    red, piv = kernels.rref(m.array, m.p)
    return FMatrix(m.p, red.reshape(-1, m.cols)), [int(c) for c in piv]


def solve_linear(a: FMatrix, b: FVector):
    """One x with a @ x = b, or None when the system is inconsistent."""
    if a.p != b.p:
        raise ValueError("matrix and vector live over different fields")
    if a.rows != len(b):
        raise ValueError("dimension mismatch")
    x = kernels.solve(a.array, b.coords, a.p)
    return None if x is None else FVector(a.p, x)
