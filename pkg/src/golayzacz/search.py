"""
Parameter sweeps over Golay and QAM Golay sequences.

A :class:`SearchSpec` describes a candidate space (lengths, alphabets,
permutation and coefficient constraints, QAM offset shapes).  :func:`sweep`
walks it exhaustively or by seeded sampling, evaluates candidates in
vectorized batches and streams one :class:`SearchResult` per candidate.
:func:`table8_audit` checks each row of the condition/zone summary table
against its satisfying instances.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .correlation import DEFAULT_REL_TOL, ZaczReport, predicted_zones, zero_intervals
from .gbf import (CONDITIONS, TAGS, ConditionId, GolayParams, _check, _quadratic_form,
                  allowed_c12, consistent_permutations, random_permutation,
                  resolve_positions)
from .qam import MU_CHOICES, OffsetSpec, QamParams
from .residue import bit_matrix, gaussian_table, is_exact_modulus, root_table

DEFAULT_CAP = 10 ** 7
BATCH = 4096


class SearchSpaceTooLarge(RuntimeError):
    def __init__(self, cardinality: int, cap: int):
        super().__init__(f"exhaustive search space has {cardinality} candidates, cap is {cap}")
        self.cardinality = cardinality
        self.cap = cap


@dataclass
class SearchSpec:
    """
    Candidate space for a sweep.

    Positions in ``pi_fixed`` are one-based; negative positions count from
    the back (-1 is m).  ``cond`` restricts to instances of one condition tag,
    read in the golay or qam context according to ``kind``.  For QAM, case 3
    offsets range over ``w_values`` (all of 1..m-1 when None) and
    ``mu_values``; each level's (d0, d1) ranges over Z_4 x Z_4 and d2 is
    fixed by 2 d0 + d1 + d2 = 0.
    """

    kind: str = "golay"
    m_values: Sequence[int] = (4,)
    H_values: Sequence[int] = (4,)
    q_values: Sequence[int] = (2,)
    cond: str | None = None
    pi_fixed: Mapping[int, int] = field(default_factory=dict)
    c_fixed: Mapping[int, int] = field(default_factory=dict)
    offset_cases: Sequence[int] = (1, 2, 3)
    w_values: Sequence[int] | None = None
    mu_values: Sequence[str] = ("pi1",)
    predicate: Callable[[GolayParams | QamParams], bool] | None = None
    mode: str = "exhaustive"
    count: int = 1000
    seed: int = 0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.kind not in ("golay", "qam"):
            raise ValueError(f"kind must be 'golay' or 'qam', got {self.kind!r}")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {self.mode!r}")
        if self.cond is not None and self.cond not in CONDITIONS:
            raise ValueError(f"unknown condition tag {self.cond!r}")
        if any(c not in (1, 2, 3) for c in self.offset_cases):
            raise ValueError(f"offset cases must be among 1, 2, 3: {self.offset_cases}")
        if any(mu not in MU_CHOICES for mu in self.mu_values):
            raise ValueError(f"mu values must be among {MU_CHOICES}")
        if any(m < 4 for m in self.m_values):
            raise ValueError("sweeps classify conditions, which need m >= 4")

    @property
    def context(self) -> str:
        return self.kind


@dataclass(frozen=True)
class SearchResult:
    params: GolayParams | QamParams
    zacz: ZaczReport
    conditions: tuple[str, ...]
    agrees: bool

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "zacz": self.zacz.to_list(),
                "conditions": list(self.conditions), "agrees": self.agrees}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ---------------------------------------------------------------------------
# candidate space

@dataclass(frozen=True)
class _Slice:
    """One (m, alphabet) block of the candidate space."""

    m: int
    H: int
    q: int
    fixed: dict
    c12: tuple
    c_other: tuple  # value lists for c_0, c_3, ..., c_m
    offsets: tuple  # OffsetSpec templates as (case, w, mu)


def _slices(spec: SearchSpec) -> list[_Slice]:
    out = []
    alphabets = [(H, 1) for H in spec.H_values] if spec.kind == "golay" else \
        [(4, q) for q in spec.q_values]
    for m in spec.m_values:
        fixed: dict[int, int] = {}
        ok = True
        if spec.cond is not None:
            fixed = resolve_positions(ConditionId(spec.cond, spec.context), m)
            ok = bool(fixed) and max(fixed) <= m
        for k, v in spec.pi_fixed.items():
            k = k if k > 0 else m + 1 + k
            if fixed.get(k, v) != v or not 1 <= k <= m:
                ok = False
            fixed[k] = v
        if len(set(fixed.values())) != len(fixed) or any(not 1 <= v <= m for v in fixed.values()):
            ok = False
        for H, q in alphabets:
            if spec.cond is not None:
                pairs = allowed_c12(ConditionId(spec.cond, spec.context), H)
            else:
                pairs = [(a, b) for a in range(H) for b in range(H)]
            pairs = [(a, b) for a, b in pairs
                     if spec.c_fixed.get(1, a) % H == a and spec.c_fixed.get(2, b) % H == b]
            others = tuple(
                (spec.c_fixed[k] % H,) if k in spec.c_fixed else tuple(range(H))
                for k in [0] + list(range(3, m + 1)))
            offsets: list[tuple] = []
            if spec.kind == "qam":
                for case in spec.offset_cases:
                    if case in (1, 2):
                        offsets.append((case, None, None))
                    else:
                        ws = range(1, m) if spec.w_values is None else \
                            [w for w in spec.w_values if 1 <= w <= m - 1]
                        offsets.extend((3, w, mu) for w in ws for mu in spec.mu_values)
            else:
                offsets.append(None)
            out.append(_Slice(m, H, q, fixed if ok else None, tuple(pairs), others, tuple(offsets)))
    return out


def _d_choices(case: int, q: int) -> int:
    return 16 ** (q - 1)


def _slice_size(s: _Slice) -> int:
    if s.fixed is None or not s.c12:
        return 0
    n_pi = math.factorial(s.m - len(s.fixed))
    n_c = len(s.c12) * math.prod(len(v) for v in s.c_other)
    n_off = 1 if s.offsets == (None,) else sum(_d_choices(o[0], s.q) for o in s.offsets)
    return n_pi * n_c * n_off


def cardinality(spec: SearchSpec) -> int:
    """Size of the exhaustive candidate space (before ``predicate``)."""
    return sum(_slice_size(s) for s in _slices(spec))


def _levels(case: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    if case in (1, 2):
        per = [(d0, d1) for d0 in range(4) for d1 in range(4)]
    else:
        per = [(d0, d1, (-2 * d0 - d1) % 4) for d0 in range(4) for d1 in range(4)]
    return itertools.product(per, repeat=q - 1)


def _make(s: _Slice, pi, c, off, d) -> GolayParams | QamParams:
    base = GolayParams(m=s.m, H=s.H, pi=pi, c=c)
    if off is None:
        return base
    case, w, mu = off
    return QamParams(q=s.q, base=base, offsets=OffsetSpec(case=case, d=d, w=w, mu=mu))


def _exhaustive(spec: SearchSpec) -> Iterator[GolayParams | QamParams]:
    for s in _slices(spec):
        if not _slice_size(s):
            continue
        for pi in consistent_permutations(s.m, s.fixed):
            for c0, (c1, c2), *rest in itertools.product(s.c_other[0], s.c12, *s.c_other[1:]):
                c = (c0, c1, c2, *rest)
                for off in s.offsets:
                    ds = [()] if off is None else _levels(off[0], s.q)
                    for d in ds:
                        p = _make(s, pi, c, off, d)
                        if spec.predicate is None or spec.predicate(p):
                            yield p


def _sampled(spec: SearchSpec) -> Iterator[GolayParams | QamParams]:
    rng = np.random.default_rng(spec.seed)
    slices = [s for s in _slices(spec) if _slice_size(s)]
    if not slices:
        return
    sizes = np.array([_slice_size(s) for s in slices], dtype=float)
    probs = sizes / sizes.sum()
    produced = attempts = 0
    while produced < spec.count and attempts < 100 * max(spec.count, 1):
        attempts += 1
        s = slices[int(rng.choice(len(slices), p=probs))]
        pi = random_permutation(s.m, s.fixed, rng)
        c1, c2 = s.c12[int(rng.integers(len(s.c12)))]
        other = [vals[int(rng.integers(len(vals)))] for vals in s.c_other]
        c = (other[0], c1, c2, *other[1:])
        off = s.offsets[int(rng.integers(len(s.offsets)))]
        d = ()
        if off is not None:
            levels = []
            for _ in range(s.q - 1):
                d0, d1 = (int(x) for x in rng.integers(0, 4, size=2))
                levels.append((d0, d1) if off[0] in (1, 2) else (d0, d1, (-2 * d0 - d1) % 4))
            d = tuple(levels)
        p = _make(s, pi, c, off, d)
        if spec.predicate is None or spec.predicate(p):
            produced += 1
            yield p


def candidates(spec: SearchSpec) -> Iterator[GolayParams | QamParams]:
    """Stream the candidate parameters of ``spec`` in sweep order."""
    if spec.mode == "exhaustive":
        n = cardinality(spec)
        if n > spec.cap:
            raise SearchSpaceTooLarge(n, spec.cap)
        return _exhaustive(spec)
    return _sampled(spec)


# ---------------------------------------------------------------------------
# batched evaluation

def _gauss_periodic_batch(re: np.ndarray, im: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    B, N = re.shape
    out_re = np.empty((B, N), dtype=np.int64)
    out_im = np.empty((B, N), dtype=np.int64)
    for t in range(N):
        r1, i1 = np.roll(re, -t, axis=1), np.roll(im, -t, axis=1)
        out_re[:, t] = np.einsum("bn,bn->b", re, r1) + np.einsum("bn,bn->b", im, i1)
        out_im[:, t] = np.einsum("bn,bn->b", im, r1) - np.einsum("bn,bn->b", re, i1)
    return out_re, out_im


def _complex_periodic_batch(z: np.ndarray) -> np.ndarray:
    B, N = z.shape
    out = np.empty((B, N), dtype=np.complex128)
    for t in range(N):
        out[:, t] = np.einsum("bn,bn->b", z, np.conj(np.roll(z, -t, axis=1)))
    return out


@lru_cache(maxsize=16)
def _affine_basis(m: int) -> np.ndarray:
    return np.vstack([np.ones((1, 1 << m), dtype=np.int64), bit_matrix(m)])


def _base_phases(batch: Sequence[GolayParams], quad: int, H: int) -> np.ndarray:
    m = batch[0].m
    Q = np.stack([_quadratic_form(m, p.pi) for p in batch])
    C = np.array([p.c for p in batch], dtype=np.int64)
    return (quad * Q + C @ _affine_basis(m)) % H


def zero_masks(batch: Sequence[GolayParams | QamParams]) -> tuple[np.ndarray, float]:
    """
    Periodic zero masks (B, N) for a batch sharing m and alphabet.

    Returns the mask array and the tolerance used (0 on the exact path).
    """
    first = batch[0]
    if isinstance(first, QamParams):
        q, m = first.q, first.m
        bases = [p.base for p in batch]
        a0 = _base_phases(bases, 2, 4)
        X = bit_matrix(m)
        B, N = a0.shape
        d = np.zeros((B, max(q - 1, 1), 3), dtype=np.int64)
        k1 = np.zeros(B, dtype=np.int64)
        k2 = np.zeros(B, dtype=np.int64)
        for b, p in enumerate(batch):
            off, pi = p.offsets, p.base.pi
            if off.case == 1:
                k1[b] = pi[-1] - 1
            elif off.case == 2:
                k1[b] = pi[0] - 1
            else:
                k1[b], k2[b] = pi[off.w - 1] - 1, pi[off.w] - 1
            for e, level in enumerate(off.d):
                d[b, e, :len(level)] = level
        gre = (1 << (q - 1)) * gaussian_table(4)[0][a0]
        gim = (1 << (q - 1)) * gaussian_table(4)[1][a0]
        X1, X2 = X[k1], X[k2]
        for e in range(1, q):
            s = d[:, e - 1, 0:1] + d[:, e - 1, 1:2] * X1 + d[:, e - 1, 2:3] * X2
            lv = (a0 + s) % 4
            w = 1 << (q - 1 - e)
            gre = gre + w * gaussian_table(4)[0][lv]
            gim = gim + w * gaussian_table(4)[1][lv]
        rre, rim = _gauss_periodic_batch(gre, gim)
        return (rre == 0) & (rim == 0), 0.0
    H, m = first.H, first.m
    a = _base_phases(batch, H // 2, H)
    if is_exact_modulus(H):
        tre, tim = gaussian_table(H)
        rre, rim = _gauss_periodic_batch(tre[a], tim[a])
        return (rre == 0) & (rim == 0), 0.0
    r = _complex_periodic_batch(root_table(H)[a])
    tol = DEFAULT_REL_TOL * a.shape[1]
    return np.abs(r) <= tol, tol


@lru_cache(maxsize=1 << 16)
def _matched_tags(pi: tuple[int, ...], c1: int, c2: int, H: int, context: str) -> tuple[str, ...]:
    if context == "qam" and H != 4:
        return ()
    return tuple(t for t in TAGS if _check(pi, c1, c2, H, ConditionId(t, context)))


def _covers(mask: np.ndarray, zones) -> bool:
    return all(mask[lo:hi + 1].all() for lo, hi in zones)


def _evaluate(batch: list, context: str) -> list[SearchResult]:
    masks, tol = zero_masks(batch)
    out = []
    for p, mask in zip(batch, masks):
        base = p.base if isinstance(p, QamParams) else p
        tags = _matched_tags(base.pi, base.c[1], base.c[2], base.H, context)
        agrees = all(_covers(mask, predicted_zones(t[0], base.m)) for t in tags)
        out.append(SearchResult(p, ZaczReport(zero_intervals(mask), tol), tags, agrees))
    return out


def _batches(stream, size: int) -> Iterator[list]:
    batch: list = []
    key = None
    for p in stream:
        k = (type(p), p.m, getattr(p, "q", None), (p.base if isinstance(p, QamParams) else p).H)
        if batch and (k != key or len(batch) >= size):
            yield batch
            batch = []
        key = k
        batch.append(p)
    if batch:
        yield batch


def sweep(spec: SearchSpec, workers: int = 1, results_path: str | None = None,
          batch_size: int = BATCH) -> Iterator[SearchResult]:
    """
    Stream one :class:`SearchResult` per candidate of ``spec``.

    Order is the candidate order for any ``workers``.  With
    ``results_path`` every result is also appended to that file as a JSON
    line.  Raises :class:`SearchSpaceTooLarge` for an exhaustive space over
    ``spec.cap`` before any work is done.
    """
    stream = candidates(spec)
    batches = _batches(stream, batch_size)
    sink = open(results_path, "a") if results_path else None
    try:
        if workers <= 1:
            chunks = (_evaluate(b, spec.context) for b in batches)
        else:
            chunks = _parallel(batches, spec.context, workers)
        for chunk in chunks:
            for r in chunk:
                if sink is not None:
                    sink.write(r.to_json() + "\n")
                yield r
    finally:
        if sink is not None:
            sink.close()


def _parallel(batches, context: str, workers: int):
    with ProcessPoolExecutor(max_workers=workers) as ex:
        pending: deque = deque()
        for b in batches:
            pending.append(ex.submit(_evaluate, b, context))
            if len(pending) >= 2 * workers:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


# ---------------------------------------------------------------------------
# summary table audit

def _pos_text(cond: str) -> str:
    pos, _ = CONDITIONS[cond]
    parts = []
    for k, v in pos.items():
        k_s = str(k) if k > 0 else ("m" if k == -1 else f"m{k + 1}")
        parts.append(f"pi({k_s})={v}")
    return ", ".join(parts)


def _coeff_text(cond: str) -> str:
    kind = CONDITIONS[cond][1]
    return {"free": "2c1=0", "c1=2c2": "2c1=0, c1=2c2", "c1=2c2+t": "2c1=0, c1=2c2+t"}[kind]


@dataclass(frozen=True)
class Table8Row:
    tag: str
    permutation: str
    coefficients: str
    zones: Callable[[int], list[tuple[int, int]]]


def table8_rows() -> list[Table8Row]:
    """The sixteen condition rows with the zones each one claims."""
    order = ["A1", "A1'", "A2", "A2'", "A3", "A3'", "B", "B'",
             "C1", "C1'", "C2", "C2'", "C3", "C3'", "C4", "C4'"]
    rows = []
    for tag in order:
        fam = tag[0]
        rows.append(Table8Row(tag, _pos_text(tag), _coeff_text(tag),
                              lambda m, fam=fam: predicted_zones(fam, m)))
    return rows


@dataclass(frozen=True)
class AuditRow:
    tag: str
    zones: tuple[tuple[int, int], ...]
    instances: int
    failures: int
    exhaustive: bool

    @property
    def passed(self) -> bool:
        return self.instances > 0 and self.failures == 0

    def to_dict(self) -> dict:
        return {"tag": self.tag, "zones": [list(z) for z in self.zones],
                "instances": self.instances, "failures": self.failures,
                "exhaustive": self.exhaustive, "passed": self.passed}


def table8_audit(m: int, H: int, rows: Sequence[Table8Row] | None = None,
                 max_instances: int = 20000, seed: int = 0) -> list[AuditRow]:
    """
    Check every summary row on Golay sequences of length 2**m over Z_H.

    Each row's satisfying instances are enumerated when there are at most
    ``max_instances`` of them, otherwise ``max_instances`` are sampled.  A
    row passes when it has instances and none has a nonzero correlation
    inside the row's zones.
    """
    if not 4 <= m <= 7:
        raise ValueError(f"audit covers 4 <= m <= 7, got m={m}")
    rows = table8_rows() if rows is None else rows
    report = []
    for row in rows:
        spec = SearchSpec(kind="golay", m_values=(m,), H_values=(H,), cond=row.tag)
        n = cardinality(spec)
        exhaustive = n <= max_instances
        if not exhaustive:
            spec = replace(spec, mode="sampled", count=max_instances, seed=seed)
        zones = tuple(row.zones(m))
        inst = fails = 0
        for batch in _batches(candidates(spec), BATCH):
            masks, _ = zero_masks(batch)
            inst += len(batch)
            fails += sum(not _covers(mask, zones) for mask in masks)
        report.append(AuditRow(row.tag, zones, inst, fails, exhaustive))
    return report


def write_results(results, path: str) -> int:
    """Append results as JSON lines; returns the number written."""
    n = 0
    with open(path, "a") as fh:
        for r in results:
            fh.write(r.to_json() + "\n")
            n += 1
    return n
