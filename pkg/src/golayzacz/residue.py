"""
Residues mod H, H-th roots of unity and Gaussian integers.

Phases are integers mod an even H.  When H divides 4 every root of unity is
one of 1, i, -1, -i, so sums of roots can be carried out exactly as Gaussian
integers.  Other moduli fall back to double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np


def check_modulus(H: int) -> int:
    if isinstance(H, bool) or not isinstance(H, (int, np.integer)):
        raise TypeError(f"modulus must be an integer, got {H!r}")
    H = int(H)
    if H < 2 or H % 2:
        raise ValueError(f"modulus must be an even integer >= 2, got {H}")
    return H


def is_exact_modulus(H: int) -> bool:
    """True when every H-th root of unity is a Gaussian integer."""
    return 4 % H == 0


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, "value", int(self.value) % int(self.modulus))
        object.__setattr__(self, "modulus", int(self.modulus))

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


@dataclass(frozen=True)
class GaussianInt:
    """An element re + im*i of Z[i]."""

    re: int
    im: int

    def __post_init__(self):
        object.__setattr__(self, "re", int(self.re))
        object.__setattr__(self, "im", int(self.im))

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianInt):
            return other
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return GaussianInt(int(other), 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) + other
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) - other
        return GaussianInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) * other
        return GaussianInt(self.re * o.re - self.im * o.im,
                           self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is not None:
            return self.re == o.re and self.im == o.im
        if isinstance(other, (complex, float)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def conjugate(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"


ExactComplex = Union[GaussianInt, complex]

# i**k for k = 0..3
_GAUSS_RE = np.array([1, 0, -1, 0], dtype=np.int64)
_GAUSS_IM = np.array([0, 1, 0, -1], dtype=np.int64)


@dataclass(frozen=True)
class UnitRoot:
    """The root of unity xi**exponent with xi = exp(2*pi*i/H)."""

    exponent: Residue

    @property
    def modulus(self) -> int:
        return self.exponent.modulus

    def __mul__(self, other: UnitRoot) -> UnitRoot:
        return UnitRoot(self.exponent + other.exponent)

    def to_complex(self) -> ExactComplex:
        return root_to_complex(self)


def root_to_complex(r: UnitRoot | Residue) -> ExactComplex:
    """
    Evaluate a root of unity.

    Returns a :class:`GaussianInt` when H divides 4, otherwise a Python
    ``complex``.
    """
    e = r.exponent if isinstance(r, UnitRoot) else r
    k, H = e.value, e.modulus
    if is_exact_modulus(H):
        k4 = k * (4 // H)
        return GaussianInt(_GAUSS_RE[k4], _GAUSS_IM[k4])
    return _float_root(k, H)


def _float_root(k: int, H: int) -> complex:
    # Reduced to the first quadrant so that xi**(H-k) == conj(xi**k) exactly.
    k %= H
    if 4 * k % H == 0:
        q = 4 * k // H
        return complex(_GAUSS_RE[q], _GAUSS_IM[q])
    if 2 * k > H:
        return _float_root(H - k, H).conjugate()
    if 4 * k > H:
        return -_float_root(H // 2 - k, H).conjugate()
    return cmath.exp(2j * math.pi * k / H)


def root_table(H: int) -> np.ndarray:
    """Complex values xi**k for k = 0..H-1."""
    H = check_modulus(H)
    return np.array([_float_root(k, H) for k in range(H)], dtype=np.complex128)


def gaussian_table(H: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer (re, im) tables of xi**k for H in {2, 4}."""
    H = check_modulus(H)
    if not is_exact_modulus(H):
        raise ValueError(f"roots of unity of order {H} are not Gaussian integers")
    step = 4 // H
    return _GAUSS_RE[::step].copy(), _GAUSS_IM[::step].copy()


def bits_of(i: int, m: int) -> tuple[int, ...]:
    """
    Binary digits (i_1, ..., i_m) of i with i_1 the most significant.

    >>> bits_of(5, 3)
    (1, 0, 1)
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0 <= i < (1 << m):
        raise ValueError(f"index {i} out of range for m={m}")
    return tuple((i >> (m - k)) & 1 for k in range(1, m + 1))


def int_of_bits(bits) -> int:
    m = len(bits)
    return sum(int(b) << (m - k) for k, b in enumerate(bits, start=1))


def bit_matrix(m: int) -> np.ndarray:
    """Array ``X`` of shape (m, 2**m) with ``X[k-1, i] = i_k``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    i = np.arange(1 << m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return (i[None, :] >> shifts[:, None]) & 1
