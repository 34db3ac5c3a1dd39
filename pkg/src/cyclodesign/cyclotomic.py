"""Exact arithmetic in the cyclotomic ring Z[zeta_p].

A :class:`CycInt` stores coordinates in the power basis
``1, zeta, ..., zeta^(p-2)``; ``zeta^(p-1)`` is rewritten as
``-(1 + zeta + ... + zeta^(p-2))``, which makes the representation unique.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import MixedModulus


class CycInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coordinates, got {len(coeffs)}")
        self.p = p
        self.coeffs = tuple(int(c) for c in coeffs)

    # construction -----------------------------------------------------
    @classmethod
    def integer(cls, p: int, c: int) -> CycInt:
        return cls(p, (c,) + (0,) * (p - 2))

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> CycInt:
        return cls.from_exponents(p, {k % p: 1})

    @classmethod
    def from_histogram(cls, p: int, hist: Sequence[int]) -> CycInt:
        """sum_k hist[k] zeta^k for a length-p histogram."""
        top = int(hist[p - 1])
        return cls(p, [int(hist[k]) - top for k in range(p - 1)])

    @classmethod
    def from_exponents(cls, p: int, terms: dict[int, int]) -> CycInt:
        hist = [0] * p
        for k, c in terms.items():
            hist[k % p] += c
        return cls.from_histogram(p, hist)

    # ring operations --------------------------------------------------
    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise MixedModulus(f"cannot combine Z[zeta_{self.p}] with Z[zeta_{other.p}]")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.integer(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycInt(self.p, [x + y for x, y in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, [-x for x in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CycInt(self.p, [int(other) * x for x in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        hist = [0] * p
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        hist[(i + j) % p] += x * y
        return CycInt.from_histogram(p, hist)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not in Z[zeta]")
        out = CycInt.integer(self.p, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = CycInt.integer(self.p, int(other))
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"CycInt(p={self.p}, coeffs={list(self.coeffs)})"

    # structure --------------------------------------------------------
    def galois(self, c: int) -> CycInt:
        """Apply the automorphism zeta -> zeta^c (c a unit mod p)."""
        if c % self.p == 0:
            raise ValueError("galois twist needs c coprime to p")
        return CycInt.from_exponents(self.p, {(k * c) % self.p: x for k, x in enumerate(self.coeffs)})

    def conj(self) -> CycInt:
        return self.galois(-1)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def norm_squared(self) -> int:
        """|x|^2 = x * conj(x), which always lands in Z for x in Z[zeta]."""
        return (self * self.conj()).to_int()

    def to_complex(self) -> complex:
        z = np.exp(2j * np.pi / self.p)
        return complex(sum(c * z**k for k, c in enumerate(self.coeffs)))


def cyc_add(x: CycInt, y) -> CycInt:
    return x + y


def cyc_mul(x: CycInt, y) -> CycInt:
    return x * y


def cyc_scale(x: CycInt, c: int) -> CycInt:
    return x * int(c)
