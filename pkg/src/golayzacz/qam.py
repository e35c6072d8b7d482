"""
4^q-QAM Golay complementary pairs built from a quaternary Golay sequence.

Level e of the sequence is the base quaternary sequence a_{i,0} shifted by an
offset s_{i,e} in Z_4; the levels are weighted by r_e = 2^{q-1-e}/sqrt((4^q-1)/3)
and summed, then rotated by gamma = exp(i*pi/4).

Sequences keep the exact Gaussian integer

    G_i = sum_e 2^{q-1-e} i^{a_{i,e}}

alongside the float values: A_i = gamma * G_i / sqrt((4^q-1)/3).  The rotated
grid point (1+i) G_i has odd real and imaginary parts in [-(2^q-1), 2^q-1].
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .gbf import GolayParams, phases
from .residue import bit_matrix

GAMMA = cmath.exp(1j * math.pi / 4)

MU_CHOICES = ("pi1", "pim")
_CASE_MU = {1: "pi1", 2: "pim"}


def weights(q: int) -> np.ndarray:
    """
    Level weights r_0 > r_1 > ... > r_{q-1}.

    >>> weights(2) * np.sqrt(5)
    array([2., 1.])
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    norm = math.sqrt((4 ** q - 1) / 3)
    return np.array([2.0 ** (q - 1 - e) / norm for e in range(q)])


@dataclass(frozen=True)
class OffsetSpec:
    """
    Offsets s_{i,e} for levels e = 1..q-1.

    ``d`` holds one tuple per level: (d0, d1) for cases 1 and 2, (d0, d1, d2)
    for case 3.  Case 3 also needs the position ``w``.  ``mu`` picks the pair
    partner shift mu_i = 2 i_{pi(1)} ("pi1") or 2 i_{pi(m)} ("pim"); it is
    forced by cases 1 and 2 and defaults to "pi1" for case 3.
    """

    case: int
    d: tuple[tuple[int, ...], ...] = ()
    w: int | None = None
    mu: str | None = None

    def __post_init__(self):
        if self.case not in (1, 2, 3):
            raise ValueError(f"offset case must be 1, 2 or 3, got {self.case!r}")
        width = 3 if self.case == 3 else 2
        d = tuple(tuple(int(x) % 4 for x in level) for level in self.d)
        for level in d:
            if len(level) != width:
                raise ValueError(f"case {self.case} needs {width} coefficients per level, got {level}")
            if self.case == 3 and (2 * level[0] + level[1] + level[2]) % 4:
                raise ValueError(f"case 3 needs 2*d0 + d1 + d2 = 0 mod 4, got {level}")
        mu = self.mu
        if self.case in _CASE_MU:
            if mu is not None and mu != _CASE_MU[self.case]:
                raise ValueError(f"case {self.case} requires mu={_CASE_MU[self.case]!r}")
            mu = _CASE_MU[self.case]
            if self.w is not None:
                raise ValueError("w is only meaningful for case 3")
        else:
            mu = mu or "pi1"
            if self.w is None and d:
                raise ValueError("case 3 needs a position w")
        if mu not in MU_CHOICES:
            raise ValueError(f"mu must be one of {MU_CHOICES}, got {mu!r}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "mu", mu)

    def to_dict(self) -> dict:
        out = {"case": self.case, "mu": self.mu, "d": [list(level) for level in self.d]}
        if self.w is not None:
            out["w"] = self.w
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> OffsetSpec:
        return cls(case=int(d["case"]), d=tuple(tuple(x) for x in d.get("d", ())),
                   w=d.get("w"), mu=d.get("mu"))


@dataclass(frozen=True)
class QamParams:
    q: int
    base: GolayParams
    offsets: OffsetSpec

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.base.H != 4:
            raise ValueError(f"QAM sequences are built on H = 4, got H={self.base.H}")
        if len(self.offsets.d) != self.q - 1:
            raise ValueError(f"need {self.q - 1} offset levels for q={self.q}, got {len(self.offsets.d)}")
        w = self.offsets.w
        if self.offsets.case == 3 and w is not None and not 1 <= w <= self.base.m - 1:
            raise ValueError(f"w must lie in [1, {self.base.m - 1}], got {w}")

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def N(self) -> int:
        return self.base.N

    def to_dict(self) -> dict:
        out = self.base.to_dict()
        out["q"] = self.q
        out["offsets"] = self.offsets.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> QamParams:
        base = GolayParams.from_dict(d)
        try:
            q, off = d["q"], d["offsets"]
        except KeyError as e:
            raise ValueError(f"missing field {e.args[0]!r} in QAM parameters") from None
        return cls(q=int(q), base=base, offsets=OffsetSpec.from_dict(off))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> QamParams:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class ComplexSeq:
    """
    A 4^q-QAM sequence held as Gaussian integers ``gauss_re + i gauss_im``
    (pre-rotation, pre-normalization).
    """

    q: int
    gauss_re: np.ndarray = field(repr=False)
    gauss_im: np.ndarray = field(repr=False)

    def __post_init__(self):
        re = np.asarray(self.gauss_re, dtype=np.int64)
        im = np.asarray(self.gauss_im, dtype=np.int64)
        if re.shape != im.shape or re.ndim != 1:
            raise ValueError("real and imaginary parts must be 1-d arrays of equal length")
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "gauss_re", re)
        object.__setattr__(self, "gauss_im", im)

    def __len__(self):
        return self.gauss_re.size

    def __eq__(self, other):
        if not isinstance(other, ComplexSeq):
            return NotImplemented
        return (self.q == other.q and np.array_equal(self.gauss_re, other.gauss_re)
                and np.array_equal(self.gauss_im, other.gauss_im))

    __hash__ = None

    @property
    def energy_scale(self) -> Fraction:
        """|A_i|^2 = energy_scale * |G_i|^2."""
        return Fraction(3, 4 ** self.q - 1)

    @property
    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Odd-integer constellation coordinates of sqrt(2(4^q-1)/3) * A."""
        re, im = self.gauss_re, self.gauss_im
        return re - im, re + im

    @property
    def values(self) -> np.ndarray:
        g = self.gauss_re + 1j * self.gauss_im
        return GAMMA * g / math.sqrt((4 ** self.q - 1) / 3)


def level_phases(params: QamParams) -> np.ndarray:
    """Integer array (q, N) of a_{i,e} mod 4."""
    p, base = params, params.base
    X = bit_matrix(base.m)
    a0 = phases(base.m, 4, base.pi, base.c, quad_coeff=2)
    out = np.empty((p.q, base.N), dtype=np.int64)
    out[0] = a0
    off = p.offsets
    for e, level in enumerate(off.d, start=1):
        if off.case == 1:
            s = level[0] + level[1] * X[base.pi[-1] - 1]
        elif off.case == 2:
            s = level[0] + level[1] * X[base.pi[0] - 1]
        else:
            w = off.w
            s = level[0] + level[1] * X[base.pi[w - 1] - 1] + level[2] * X[base.pi[w] - 1]
        out[e] = (a0 + s) % 4
    return out


def mu_vector(params: QamParams) -> np.ndarray:
    X = bit_matrix(params.m)
    k = params.base.pi[0] if params.offsets.mu == "pi1" else params.base.pi[-1]
    return 2 * X[k - 1]


_IRE = np.array([1, 0, -1, 0], dtype=np.int64)
_IIM = np.array([0, 1, 0, -1], dtype=np.int64)


def _combine(q: int, lv: np.ndarray) -> ComplexSeq:
    scale = (1 << np.arange(q - 1, -1, -1, dtype=np.int64))[:, None]
    return ComplexSeq(q, (scale * _IRE[lv]).sum(axis=0), (scale * _IIM[lv]).sum(axis=0))


def qam_sequence(params: QamParams) -> ComplexSeq:
    """The sequence A alone."""
    return _combine(params.q, level_phases(params))


def qam_pair(params: QamParams) -> tuple[ComplexSeq, ComplexSeq]:
    """
    Build the complementary pair (A, B).

    B uses phases b_{i,e} = a_{i,e} + mu_i on every level, so
    B_i = (-1)^{mu_i/2} A_i.
    """
    lv = level_phases(params)
    mu = mu_vector(params)
    return _combine(params.q, lv), _combine(params.q, (lv + mu[None, :]) % 4)


def _aperiodic_gauss(re: np.ndarray, im: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    N = re.size
    out_re = np.empty(N, dtype=np.int64)
    out_im = np.empty(N, dtype=np.int64)
    for t in range(N):
        r0, i0, r1, i1 = re[:N - t], im[:N - t], re[t:], im[t:]
        out_re[t] = np.dot(r0, r1) + np.dot(i0, i1)
        out_im[t] = np.dot(i0, r1) - np.dot(r0, i1)
    return out_re, out_im


def is_qam_complementary(A: ComplexSeq | np.ndarray, B: ComplexSeq | np.ndarray,
                         tol: float | None = None) -> bool:
    """
    True iff C_A(tau) + C_B(tau) = 0 for 1 <= tau <= N-1.

    Exact for :class:`ComplexSeq` inputs; plain complex arrays are compared
    against ``tol`` (default 1e-9 * N).
    """
    if len(A) != len(B):
        raise ValueError(f"length mismatch: {len(A)} vs {len(B)}")
    N = len(A)
    if isinstance(A, ComplexSeq) and isinstance(B, ComplexSeq):
        if A.q != B.q:
            raise ValueError("sequences come from different constellations")
        ar, ai = _aperiodic_gauss(A.gauss_re, A.gauss_im)
        br, bi = _aperiodic_gauss(B.gauss_re, B.gauss_im)
        return not (np.any(ar[1:] + br[1:]) or np.any(ai[1:] + bi[1:]))
    from .correlation import aperiodic_autocorr
    tol = 1e-9 * N if tol is None else tol
    s = aperiodic_autocorr(A).values + aperiodic_autocorr(B).values
    return bool(np.all(np.abs(s[1:]) <= tol))


def in_constellation(seq: ComplexSeq) -> bool:
    """Check every point lies on the odd-integer 4^q-QAM grid."""
    x, y = seq.grid
    lim = 2 ** seq.q - 1
    return bool(np.all(x % 2 == 1) and np.all(y % 2 == 1)
                and np.all(np.abs(x) <= lim) and np.all(np.abs(y) <= lim))
