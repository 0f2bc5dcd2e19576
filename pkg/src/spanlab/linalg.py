"""Exact matrices over Z, Q and Z/n.

Everything is stored in numpy object arrays holding Python ints or
Fractions, so arithmetic never overflows or rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import NotInvertible


@dataclass(frozen=True)
class CoeffRing:
    """Coefficient ring: ``"Z"``, ``"Q"`` or ``"Zmod"`` with modulus ``n``."""

    kind: str = "Z"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zmod"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zmod" and self.n < 2:
            raise ValueError("Zmod needs a modulus n >= 2")
        if self.kind != "Zmod" and self.n != 0:
            raise ValueError("only Zmod takes a modulus")

    @classmethod
    def parse(cls, text: str) -> "CoeffRing":
        text = text.strip()
        if text in ("Z", "Q"):
            return cls(text)
        if text.startswith("Zmod:"):
            return cls("Zmod", int(text[5:]))
        raise ValueError(f"cannot parse ring {text!r}")

    def __str__(self):
        return f"Zmod:{self.n}" if self.kind == "Zmod" else self.kind

    def coerce(self, x):
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "Z":
                    raise ValueError(f"{x} is not an integer")
                return (x.numerator * pow(x.denominator, -1, self.n)) % self.n
            x = x.numerator
        x = int(x)
        return x % self.n if self.kind == "Zmod" else x

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = self.coerce(v)
        return out

    def is_unit(self, x) -> bool:
        x = self.coerce(x)
        if self.kind == "Q":
            return x != 0
        if self.kind == "Z":
            return x in (1, -1)
        return gcd(x, self.n) == 1

    def matrix(self, rows) -> np.ndarray:
        arr = np.array(rows, dtype=object)
        if arr.ndim != 2:
            arr = arr.reshape((len(rows), -1)) if len(rows) else np.zeros((0, 0), dtype=object)
        return self.reduce(arr)

    def zeros(self, r: int, c: int) -> np.ndarray:
        z = np.empty((r, c), dtype=object)
        z.fill(self.coerce(0))
        return z

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self.coerce(1)
        return m

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.reduce(a @ b)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        """Exact inverse of a square matrix; raises NotInvertible."""
        n, m = a.shape
        if n != m:
            raise NotInvertible(f"non-square matrix {a.shape}")
        if n == 0:
            return self.zeros(0, 0)
        if _is_permutation(a):
            return a.T.copy()
        det, inv_q = _det_and_inverse_q(a)
        if det == 0 or not self.is_unit(det):
            raise NotInvertible(f"determinant {det} is not a unit in {self}")
        if self.kind == "Q":
            return self.reduce(inv_q)
        if self.kind == "Z":
            return self.reduce(inv_q)  # det = +-1 so inv_q is integral
        # adjugate = det * inverse is integral; divide by det modulo n
        dinv = pow(int(det) % self.n, -1, self.n)
        adj = det * inv_q
        return self.reduce(adj * dinv)

    def is_invertible(self, a: np.ndarray) -> bool:
        try:
            self.inverse(a)
        except NotInvertible:
            return False
        return True


Z = CoeffRing("Z")
Q = CoeffRing("Q")


def _is_permutation(a: np.ndarray) -> bool:
    nz = a != 0
    if not (nz.sum(axis=0) == 1).all() or not (nz.sum(axis=1) == 1).all():
        return False
    return all(v == 1 for v in a[nz])


def _det_and_inverse_q(a: np.ndarray):
    """Gauss-Jordan over the rationals on an integer/rational lift."""
    n = a.shape[0]
    m = [[Fraction(a[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0), None
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    inv = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            inv[i, j] = m[i][n + j]
    return det, inv


def blocks_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def block_diag(ring: CoeffRing, blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = ring.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A linear map R^src_rank -> R^tgt_rank, stored as a tgt x src matrix."""

    ring: CoeffRing
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ValueError("ModuleMap matrix must be 2-dimensional")

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, ring.eye(n))

    @classmethod
    def zero(cls, ring, tgt, src):
        return cls(ring, ring.zeros(tgt, src))

    @classmethod
    def from_rows(cls, ring, rows, src_rank=None):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(ring, ring.zeros(0, src_rank or 0))
        return cls(ring, ring.matrix(rows))

    @property
    def src_rank(self) -> int:
        return self.matrix.shape[1]

    @property
    def tgt_rank(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.ring, self.ring.matmul(self.matrix, other.matrix))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.matrix.shape != other.matrix.shape:
            raise ValueError("shape mismatch in sum")
        return ModuleMap(self.ring, self.ring.reduce(self.matrix + other.matrix))

    def scale(self, k) -> "ModuleMap":
        return ModuleMap(self.ring, self.ring.reduce(self.matrix * k))

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.ring == other.ring and blocks_equal(self.matrix, other.matrix)

    __hash__ = None

    def is_identity(self) -> bool:
        return self.src_rank == self.tgt_rank and self == ModuleMap.identity(self.ring, self.src_rank)

    def is_invertible(self) -> bool:
        return self.ring.is_invertible(self.matrix)

    def inverse(self) -> "ModuleMap":
        return ModuleMap(self.ring, self.ring.inverse(self.matrix))

    def tolist(self):
        return [[v for v in row] for row in self.matrix]

    def __repr__(self):
        return f"ModuleMap({self.ring}, {self.tolist()})"
