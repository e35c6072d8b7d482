"""
Aperiodic and periodic autocorrelation, zero-zone detection and the
theorem checks built on them.

Phase sequences are correlated by counting phase differences: for each shift
the number n_d of index pairs with a_i - a_j = d is an exact integer, and the
correlation is sum_d n_d xi^d.  For H in {2, 4} that last sum is a Gaussian
integer and every zero test is exact.  For other even H it is evaluated in
double precision and "zero" means |value| <= tol (default 1e-9 * N).

QAM sequences are correlated on their Gaussian-integer form, also exactly.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .gbf import (ConditionId, GolayParams, PhaseSeq, as_condition,
                  check_condition, generate)
from .qam import ComplexSeq, QamParams, qam_sequence
from .residue import (GaussianInt, bit_matrix, gaussian_table,
                      is_exact_modulus, root_table)

AnySeq = Union[PhaseSeq, ComplexSeq, np.ndarray]

DEFAULT_REL_TOL = 1e-9

# Shifts per block when materializing the (shift, index) difference table.
_BLOCK_CELLS = 1 << 22


class PreconditionError(ValueError):
    """The inputs do not satisfy the hypothesis of the check requested."""


@dataclass(frozen=True, eq=False)
class CorrProfile:
    """
    Correlation values for tau = 0..N-1.

    On the exact path ``re``/``im`` are int64 and the true value is
    ``scale * (re + i im)``; otherwise they are float64 and ``scale`` is 1.
    """

    kind: str
    re: np.ndarray = field(repr=False)
    im: np.ndarray = field(repr=False)
    exact: bool
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("aperiodic", "periodic"):
            raise ValueError(f"unknown profile kind {self.kind!r}")

    @property
    def N(self) -> int:
        return self.re.size

    def __len__(self):
        return self.re.size

    @property
    def values(self) -> np.ndarray:
        v = self.re + 1j * self.im
        return v * float(self.scale) if self.scale != 1 else v.astype(np.complex128)

    def __getitem__(self, tau):
        return self.values[tau]

    def exact_value(self, tau: int) -> GaussianInt:
        if not self.exact:
            raise ValueError("profile was computed in floating point")
        return GaussianInt(self.re[tau], self.im[tau])

    def default_tol(self) -> float:
        return 0.0 if self.exact else DEFAULT_REL_TOL * self.N

    def zero_mask(self, tol: float | None = None) -> np.ndarray:
        if self.exact:
            return (self.re == 0) & (self.im == 0)
        tol = self.default_tol() if tol is None else tol
        return np.hypot(self.re, self.im) <= tol


@dataclass(frozen=True)
class ZaczReport:
    intervals: tuple[tuple[int, int], ...]
    tol_used: float

    def lengths(self) -> list[int]:
        return [hi - lo + 1 for lo, hi in self.intervals]

    def covers(self, lo: int, hi: int) -> bool:
        return any(a <= lo and hi <= b for a, b in self.intervals)

    def to_list(self) -> list[list[int]]:
        return [[lo, hi] for lo, hi in self.intervals]


@dataclass(frozen=True)
class PartitionSums:
    s1: GaussianInt | complex
    s2: GaussianInt | complex
    s3: GaussianInt | complex

    @property
    def total(self):
        return self.s1 + self.s2 + self.s3


# ---------------------------------------------------------------------------
# profiles

def _diff_counts(a: np.ndarray, H: int, kind: str) -> np.ndarray:
    """counts[tau, d] = #{i : a_i - a_{i+tau} = d mod H} over the overlap."""
    N = a.size
    counts = np.zeros((N, H), dtype=np.int64)
    idx = np.arange(N)
    step = max(1, _BLOCK_CELLS // N)
    for t0 in range(0, N, step):
        taus = np.arange(t0, min(N, t0 + step))
        j = idx[None, :] + taus[:, None]
        D = (a[None, :] - a[j % N]) % H
        if kind == "aperiodic":
            D = np.where(j < N, D, H)
        for d in range(H):
            counts[taus, d] = np.count_nonzero(D == d, axis=1)
    return counts


def _phase_profile(seq: PhaseSeq, kind: str) -> CorrProfile:
    H = seq.H
    counts = _diff_counts(seq.values, H, kind)
    if is_exact_modulus(H):
        tre, tim = gaussian_table(H)
        return CorrProfile(kind, counts @ tre, counts @ tim, exact=True)
    v = counts @ root_table(H)
    return CorrProfile(kind, v.real.copy(), v.imag.copy(), exact=False)


def _gauss_profile(re: np.ndarray, im: np.ndarray, kind: str) -> tuple[np.ndarray, np.ndarray]:
    N = re.size
    out_re = np.empty(N, dtype=np.int64)
    out_im = np.empty(N, dtype=np.int64)
    for t in range(N):
        if kind == "periodic":
            r1, i1 = np.roll(re, -t), np.roll(im, -t)
            r0, i0 = re, im
        else:
            r0, i0, r1, i1 = re[:N - t], im[:N - t], re[t:], im[t:]
        # z0 * conj(z1)
        out_re[t] = np.dot(r0, r1) + np.dot(i0, i1)
        out_im[t] = np.dot(i0, r1) - np.dot(r0, i1)
    return out_re, out_im


def _float_profile(z: np.ndarray, kind: str) -> CorrProfile:
    z = np.asarray(z, dtype=np.complex128)
    N = z.size
    out = np.empty(N, dtype=np.complex128)
    for t in range(N):
        if kind == "periodic":
            out[t] = np.vdot(np.roll(z, -t), z)
        else:
            out[t] = np.vdot(z[t:], z[:N - t])
    return CorrProfile(kind, out.real.copy(), out.imag.copy(), exact=False)


def _profile(seq: AnySeq, kind: str) -> CorrProfile:
    if isinstance(seq, PhaseSeq):
        return _phase_profile(seq, kind)
    if isinstance(seq, ComplexSeq):
        re, im = _gauss_profile(seq.gauss_re, seq.gauss_im, kind)
        return CorrProfile(kind, re, im, exact=True, scale=seq.energy_scale)
    z = np.asarray(seq)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("expected a nonempty 1-d sequence")
    return _float_profile(z, kind)


def aperiodic_autocorr(seq: AnySeq) -> CorrProfile:
    """C(tau) = sum_{i=0}^{N-1-tau} z_i conj(z_{i+tau}) for tau = 0..N-1."""
    return _profile(seq, "aperiodic")


def periodic_autocorr(seq: AnySeq, method: str = "direct") -> CorrProfile:
    """
    R(tau) = sum_i z_i conj(z_{(i+tau) mod N}) for tau = 0..N-1.

    ``method="fft"`` evaluates the same quantity in O(N log N) floating
    point; the default definitional path is exact where possible.
    """
    if method == "direct":
        return _profile(seq, "periodic")
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    z = as_complex(seq)
    Z = np.fft.fft(z)
    r = np.conj(np.fft.ifft(np.abs(Z) ** 2))
    return CorrProfile("periodic", r.real.copy(), r.imag.copy(), exact=False)


def as_complex(seq: AnySeq) -> np.ndarray:
    if isinstance(seq, PhaseSeq):
        return seq.to_complex()
    if isinstance(seq, ComplexSeq):
        return seq.values
    return np.asarray(seq, dtype=np.complex128)


def is_complementary_pair(a, b, tol=None) -> bool:
    """True iff C_a(tau) + C_b(tau) = 0 for every 1 <= tau <= N-1."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    ca, cb = aperiodic_autocorr(a), aperiodic_autocorr(b)
    if ca.exact and cb.exact and ca.scale == cb.scale:
        return not (np.any(ca.re[1:] + cb.re[1:]) or np.any(ca.im[1:] + cb.im[1:]))
    tol = 1e-9 * len(a) if tol is None else tol
    s = ca.values + cb.values
    return bool(np.abs(s[1:]).max(initial=0.0) <= tol)


# ---------------------------------------------------------------------------
# zones

def zero_intervals(mask: np.ndarray) -> tuple[tuple[int, int], ...]:
    """Maximal runs of True in mask[1:], as closed (lo, hi) shift intervals."""
    out = []
    lo = None
    N = mask.size
    for t in range(1, N):
        if mask[t]:
            if lo is None:
                lo = t
        elif lo is not None:
            out.append((lo, t - 1))
            lo = None
    if lo is not None:
        out.append((lo, N - 1))
    return tuple(out)


def find_zacz(profile: CorrProfile, tol: float | None = None) -> ZaczReport:
    """
    Maximal shift intervals in [1, N-1] where a periodic profile vanishes.

    ``tol`` applies to floating-point profiles only (default 1e-9 * N);
    exact profiles are tested for exact zeros and report ``tol_used = 0``.
    """
    if tol is not None and tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    if profile.kind != "periodic":
        raise ValueError("zero autocorrelation zones are defined on periodic profiles")
    tol_used = 0.0 if profile.exact else (profile.default_tol() if tol is None else float(tol))
    return ZaczReport(zero_intervals(profile.zero_mask(tol_used)), tol_used)


def predicted_zones(family: str, m: int) -> list[tuple[int, int]]:
    """Closed shift intervals on which the A, B or C family forces R = 0."""
    N = 1 << m
    if family == "A":
        return [(1, N // 4), (3 * N // 4, N - 1)]
    if family == "B":
        return [(N // 4, 3 * N // 4)]
    if family == "C":
        e = N // 8
        return [(1, e), (3 * e, 5 * e), (7 * e, N - 1)]
    raise ValueError(f"unknown condition family {family!r}")


def zone_violations(profile: CorrProfile, zones: Sequence[tuple[int, int]],
                    tol: float | None = None) -> list[int]:
    """Shifts inside ``zones`` where the profile is not zero."""
    mask = profile.zero_mask(tol)
    return [t for lo, hi in zones for t in range(lo, hi + 1) if not mask[t]]


def _params_sequence(params: GolayParams | QamParams):
    if isinstance(params, QamParams):
        return qam_sequence(params)
    return generate(params)


def verify_theorem(params: GolayParams | QamParams, cond: ConditionId | str,
                   tol: float | None = None) -> bool:
    """
    Check the zero zones that condition ``cond`` predicts for ``params``.

    Returns False on a counterexample.  Raises :class:`PreconditionError` if
    ``params`` does not meet ``cond`` or, for QAM parameters, if the offsets
    are not of case 1 or 2.
    """
    return not theorem_violations(params, cond, tol)


def theorem_violations(params: GolayParams | QamParams, cond: ConditionId | str,
                       tol: float | None = None) -> list[int]:
    if isinstance(params, QamParams):
        cond = as_condition(cond, "qam")
        if params.offsets.case not in (1, 2):
            raise PreconditionError(
                f"zone theorems cover offset cases 1 and 2, got case {params.offsets.case}")
        base = params.base
    else:
        cond = as_condition(cond, "golay")
        base = params
    if not check_condition(base, cond):
        raise PreconditionError(f"parameters do not satisfy condition {cond.tag} ({cond.context})")
    profile = periodic_autocorr(_params_sequence(params))
    return zone_violations(profile, predicted_zones(cond.family, base.m), tol)


# ---------------------------------------------------------------------------
# diagnostics

def partition_sums(params: GolayParams, tau: int) -> PartitionSums:
    """
    Split R(tau) by how the bits at pi(1) and pi(m) of i and j = i + tau
    compare: I_1 (pi(1) bits agree), I_2 (pi(1) differ, pi(m) agree) and
    I_3 (both differ).
    """
    N = params.N
    if not 1 <= tau <= N - 1:
        raise ValueError(f"tau must lie in [1, {N - 1}], got {tau}")
    a = generate(params).values
    X = bit_matrix(params.m)
    i = np.arange(N)
    j = (i + tau) % N
    first, last = X[params.pi[0] - 1], X[params.pi[-1] - 1]
    same_first = first[i] == first[j]
    same_last = last[i] == last[j]
    classes = (same_first, ~same_first & same_last, ~same_first & ~same_last)
    d = (a[i] - a[j]) % params.H
    H = params.H
    sums = []
    for cls in classes:
        counts = np.bincount(d[cls], minlength=H)
        if is_exact_modulus(H):
            tre, tim = gaussian_table(H)
            sums.append(GaussianInt(counts @ tre, counts @ tim))
        else:
            sums.append(complex(counts @ root_table(H)))
    return PartitionSums(*sums)


def estimate_delay(reference: AnySeq, received, search_window: int | None = None) -> int:
    """
    Recover a cyclic delay by peak-picking the cross-correlation.

    Scores tau in [0, search_window) by |sum_i received_{i+tau} conj(ref_i)|
    and returns the best; ``received = np.roll(ref, d)`` scores highest at d.
    """
    ref = as_complex(reference)
    rx = np.asarray(received, dtype=np.complex128)
    N = ref.size
    if rx.size != N:
        raise ValueError(f"received has length {rx.size}, expected {N}")
    W = N if search_window is None else int(search_window)
    if not 1 <= W <= N:
        raise ValueError(f"search window must lie in [1, {N}], got {W}")
    scores = np.array([abs(np.vdot(ref, np.roll(rx, -t))) for t in range(W)])
    return int(np.argmax(scores))


# ---------------------------------------------------------------------------
# export

def _fmt(x: float) -> str:
    return "%.17g" % x


def _fmt_exact(v: int, scale: Fraction) -> str:
    f = scale * int(v)
    if f.denominator == 1:
        return str(f.numerator)
    return _fmt(float(f))


def profile_rows(profile: CorrProfile) -> list[tuple[int, str, str, str]]:
    rows = []
    for t in range(profile.N):
        if profile.exact:
            r, i = int(profile.re[t]), int(profile.im[t])
            re_s, im_s = _fmt_exact(r, profile.scale), _fmt_exact(i, profile.scale)
            norm = profile.scale ** 2 * (r * r + i * i)
            root = math.isqrt(norm.numerator), math.isqrt(norm.denominator)
            if root[0] ** 2 == norm.numerator and root[1] ** 2 == norm.denominator:
                abs_s = _fmt_exact(root[0], Fraction(1, root[1]))
            else:
                abs_s = _fmt(math.sqrt(float(norm)))
        else:
            re_s, im_s = _fmt(profile.re[t]), _fmt(profile.im[t])
            abs_s = _fmt(math.hypot(profile.re[t], profile.im[t]))
        rows.append((t, re_s, im_s, abs_s))
    return rows


def profile_to_csv(profile: CorrProfile) -> str:
    buf = io.StringIO()
    buf.write("tau,re,im,abs\n")
    for row in profile_rows(profile):
        buf.write(",".join(str(x) for x in row) + "\n")
    return buf.getvalue()
