"""
Golay sequences from quadratic generalized Boolean functions.

A sequence over Z_H of length 2**m is read off the truth table of

    (H/2) * sum_{k=1}^{m-1} x_{pi(k)} x_{pi(k+1)} + sum_{k=1}^{m} c_k x_k + c_0

with the index bits taken most-significant first.  Together with the shifted
copy ``a + (H/2) x_{pi(1)} + c'`` it forms a Golay complementary pair.

This module also holds the permutation/coefficient conditions under which a
single such sequence has a large zero autocorrelation zone.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .residue import bit_matrix, check_modulus

CONTEXTS = ("golay", "qam")


# ---------------------------------------------------------------------------
# permutations

def check_permutation(pi: Sequence[int]) -> tuple[int, ...]:
    pi = tuple(int(v) for v in pi)
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ValueError(f"not a permutation of 1..{len(pi)}: {pi}")
    return pi


def mirror(pi: Sequence[int]) -> tuple[int, ...]:
    """The reversed path pi'(k) = pi(m+1-k)."""
    return tuple(reversed(tuple(pi)))


def parse_permutation(text: str, m: int | None = None) -> tuple[int, ...]:
    """
    Parse a permutation written in one-line or cycle notation.

    One-line form lists pi(1), ..., pi(m): ``"2,1,3,4"`` or ``"[2, 1, 3, 4]"``.
    Cycle form such as ``"(143)"`` or ``"(1 4 3)(2 5)"`` needs ``m``; each
    cycle (a b c) sends a -> b -> c -> a and products are applied right to
    left.  Single-digit cycle entries may be written without separators.
    """
    s = text.strip()
    if s.startswith("("):
        if m is None:
            raise ValueError("cycle notation needs m")
        cycles = re.findall(r"\(([^()]*)\)", s)
        if re.sub(r"\([^()]*\)", "", s).strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        perm = list(range(m + 1))
        for body in cycles:
            body = body.strip()
            if re.search(r"[\s,]", body):
                elems = [int(x) for x in re.split(r"[\s,]+", body) if x]
            else:
                elems = [int(ch) for ch in body]
            if len(set(elems)) != len(elems) or any(not 1 <= e <= m for e in elems):
                raise ValueError(f"bad cycle ({body}) for m={m}")
            step = {a: b for a, b in zip(elems, elems[1:] + elems[:1])}
            # perm <- perm o cycle, so the rightmost cycle acts first
            perm = [perm[step.get(k, k)] if k else 0 for k in range(m + 1)]
        return check_permutation(perm[1:])
    vals = [int(x) for x in re.split(r"[\s,]+", s.strip("[]").strip()) if x]
    pi = check_permutation(vals)
    if m is not None and len(pi) != m:
        raise ValueError(f"permutation has length {len(pi)}, expected {m}")
    return pi


# ---------------------------------------------------------------------------
# parameters and sequences

@dataclass(frozen=True)
class GolayParams:
    m: int
    H: int
    pi: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        m = int(self.m)
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        H = check_modulus(self.H)
        pi = check_permutation(self.pi)
        if len(pi) != m:
            raise ValueError(f"pi has length {len(pi)}, expected m={m}")
        c = tuple(int(v) % H for v in self.c)
        if len(c) != m + 1:
            raise ValueError(f"expected {m + 1} coefficients c_0..c_m, got {len(c)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "c", c)

    @property
    def N(self) -> int:
        return 1 << self.m

    def replace(self, **kw) -> GolayParams:
        d = dict(m=self.m, H=self.H, pi=self.pi, c=self.c)
        d.update(kw)
        return GolayParams(**d)

    def to_dict(self) -> dict:
        return {"m": self.m, "H": self.H, "pi": list(self.pi), "c": list(self.c)}

    @classmethod
    def from_dict(cls, d: Mapping) -> GolayParams:
        try:
            m, H, pi, c = d["m"], d["H"], d["pi"], d["c"]
        except KeyError as e:
            raise ValueError(f"missing field {e.args[0]!r} in parameters") from None
        if isinstance(pi, str):
            pi = parse_permutation(pi, m)
        return cls(m=m, H=H, pi=tuple(pi), c=tuple(c))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> GolayParams:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class PhaseSeq:
    """A sequence over Z_H, stored as an int64 array."""

    H: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        H = check_modulus(self.H)
        v = np.asarray(self.values, dtype=np.int64) % H
        n = v.size
        if v.ndim != 1 or n == 0 or n & (n - 1):
            raise ValueError(f"length must be a power of two, got {n}")
        v.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, PhaseSeq):
            return NotImplemented
        return self.H == other.H and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.H, self.values.tobytes()))

    def to_complex(self) -> np.ndarray:
        from .residue import root_table
        return root_table(self.H)[self.values]


@lru_cache(maxsize=64)
def _quadratic_form(m: int, pi: tuple[int, ...]) -> np.ndarray:
    """sum_k x_{pi(k)} x_{pi(k+1)} over the truth table, as integers."""
    X = bit_matrix(m)
    q = np.zeros(1 << m, dtype=np.int64)
    for k in range(m - 1):
        q += X[pi[k] - 1] * X[pi[k + 1] - 1]
    q.setflags(write=False)
    return q


def phases(m: int, H: int, pi: Sequence[int], c: Sequence[int],
           quad_coeff: int | None = None) -> np.ndarray:
    """Raw truth table as an int64 array (no validation)."""
    if quad_coeff is None:
        quad_coeff = H // 2
    X = bit_matrix(m)
    a = quad_coeff * _quadratic_form(m, tuple(pi)) + int(c[0])
    a = a + np.asarray(c[1:], dtype=np.int64) @ X
    return a % H


def generate(params: GolayParams) -> PhaseSeq:
    """
    Truth table of the quadratic GBF defined by ``params``.

    Parameters
    ----------
    params : GolayParams
        Length parameter m, alphabet size H, path permutation and affine
        coefficients.

    Returns
    -------
    PhaseSeq
        The length-2**m sequence over Z_H.
    """
    p = params
    return PhaseSeq(p.H, phases(p.m, p.H, p.pi, p.c))


def golay_pair(params: GolayParams, c_prime: int = 0) -> tuple[PhaseSeq, PhaseSeq]:
    """Return (a, b) with b_i = a_i + (H/2) i_{pi(1)} + c_prime."""
    a = generate(params)
    X = bit_matrix(params.m)
    b = a.values + (params.H // 2) * X[params.pi[0] - 1] + int(c_prime)
    return a, PhaseSeq(params.H, b)


# ---------------------------------------------------------------------------
# conditions

# Positions are one-based from the front; negative positions count from the
# back (-1 is m, -2 is m-1, ...).  Affine kinds: "free" means only 2c_1 = 0,
# "c1=2c2" and "c1=2c2+t" add the stated relation.
_BASE_CONDITIONS: dict[str, tuple[dict[int, int], str]] = {
    "A1": ({1: 1, 2: 2}, "free"),
    "A2": ({2: 2, 3: 1, 4: 3}, "c1=2c2"),
    "A3": ({1: 2, 2: 1, 3: 3}, "c1=2c2+t"),
    "B": ({1: 2, 2: 1, 3: 3}, "c1=2c2"),
    "C1": ({1: 1, 2: 3, 3: 2}, "free"),
    "C2": ({1: 1, 2: 3, -1: 2}, "free"),
    "C3": ({1: 2, 2: 4, 3: 1, 4: 3}, "c1=2c2"),
    "C4": ({1: 2, 2: 3, 3: 1, 4: 4}, "c1=2c2"),
}


def _mirror_positions(pos: Mapping[int, int]) -> dict[int, int]:
    return {-k: v for k, v in pos.items()}


CONDITIONS: dict[str, tuple[dict[int, int], str]] = {}
for _tag, (_pos, _kind) in _BASE_CONDITIONS.items():
    CONDITIONS[_tag] = (_pos, _kind)
    CONDITIONS[_tag + "'"] = (_mirror_positions(_pos), _kind)

TAGS: tuple[str, ...] = tuple(CONDITIONS)


@dataclass(frozen=True, order=True)
class ConditionId:
    tag: str
    context: str = "golay"

    def __post_init__(self):
        if self.tag not in CONDITIONS:
            raise ValueError(f"unknown condition tag {self.tag!r}")
        if self.context not in CONTEXTS:
            raise ValueError(f"unknown context {self.context!r}")

    @property
    def family(self) -> str:
        return self.tag[0]

    @property
    def primed(self) -> bool:
        return self.tag.endswith("'")

    def __str__(self):
        return self.tag


def as_condition(cond: ConditionId | str, context: str = "golay") -> ConditionId:
    if isinstance(cond, ConditionId):
        return cond
    return ConditionId(str(cond), context)


def resolve_positions(cond: ConditionId | str, m: int) -> dict[int, int]:
    """Map one-based positions k to required values pi(k) for a given m."""
    pos, _ = CONDITIONS[as_condition(cond).tag]
    out: dict[int, int] = {}
    for k, v in pos.items():
        k = k if k > 0 else m + 1 + k
        if k in out and out[k] != v:
            return {}
        out[k] = v
    return out


def t_value(H: int, context: str) -> int:
    return H // 2 if context == "golay" else 2


def affine_ok(kind: str, c1: int, c2: int, H: int, context: str = "golay") -> bool:
    if (2 * c1) % H:
        return False
    if kind == "c1=2c2":
        return (c1 - 2 * c2) % H == 0
    if kind == "c1=2c2+t":
        return (c1 - 2 * c2 - t_value(H, context)) % H == 0
    return True


def positions_ok(cond: ConditionId | str, pi: Sequence[int]) -> bool:
    m = len(pi)
    pos = resolve_positions(cond, m)
    if not pos or max(pos) > m:
        return False
    return all(pi[k - 1] == v for k, v in pos.items())


def check_condition(params: GolayParams, cond: ConditionId | str,
                    context: str | None = None) -> bool:
    """
    Decide whether ``params`` satisfies a ZACZ condition.

    ``cond`` is a :class:`ConditionId` or a bare tag such as ``"A1"`` or
    ``"C3'"``; a bare tag is read in ``context`` (default ``"golay"``), which
    selects t = H/2 (golay) or t = 2 (qam) in the (A)(3) relation.
    """
    if params.m < 4:
        raise ValueError(f"conditions are defined for m >= 4, got m={params.m}")
    if isinstance(cond, str):
        cond = ConditionId(cond, context or "golay")
    if cond.context == "qam" and params.H != 4:
        return False
    return _check(params.pi, params.c[1], params.c[2], params.H, cond)


@lru_cache(maxsize=1 << 16)
def _check(pi: tuple[int, ...], c1: int, c2: int, H: int, cond: ConditionId) -> bool:
    _, kind = CONDITIONS[cond.tag]
    return positions_ok(cond, pi) and affine_ok(kind, c1, c2, H, cond.context)


def enumerate_conditions(params: GolayParams) -> set[ConditionId]:
    """All condition ids (golay, and qam when H = 4) that ``params`` meets."""
    contexts = CONTEXTS if params.H == 4 else ("golay",)
    return {ConditionId(tag, ctx) for ctx in contexts for tag in TAGS
            if check_condition(params, ConditionId(tag, ctx))}


# ---------------------------------------------------------------------------
# sampling satisfying instances

def allowed_c12(cond: ConditionId | str, H: int,
                context: str = "golay") -> list[tuple[int, int]]:
    cond = as_condition(cond, context)
    _, kind = CONDITIONS[cond.tag]
    return [(c1, c2) for c1 in range(H) for c2 in range(H)
            if affine_ok(kind, c1, c2, H, cond.context)]


def consistent_permutations(m: int, fixed: Mapping[int, int]) -> Iterable[tuple[int, ...]]:
    """All permutations of 1..m with pi(k) = fixed[k], in lexicographic order."""
    from itertools import permutations
    if any(not 1 <= k <= m for k in fixed) or len(set(fixed.values())) != len(fixed):
        return
    if any(not 1 <= v <= m for v in fixed.values()):
        return
    free_slots = [k for k in range(1, m + 1) if k not in fixed]
    free_vals = sorted(set(range(1, m + 1)) - set(fixed.values()))
    for rest in permutations(free_vals):
        pi = [0] * m
        for k, v in fixed.items():
            pi[k - 1] = v
        for k, v in zip(free_slots, rest):
            pi[k - 1] = v
        yield tuple(pi)


def random_permutation(m: int, fixed: Mapping[int, int], rng: np.random.Generator) -> tuple[int, ...]:
    free_slots = [k for k in range(1, m + 1) if k not in fixed]
    free_vals = sorted(set(range(1, m + 1)) - set(fixed.values()))
    rest = rng.permutation(free_vals) if free_vals else []
    pi = [0] * m
    for k, v in fixed.items():
        pi[k - 1] = v
    for k, v in zip(free_slots, rest):
        pi[k - 1] = int(v)
    return tuple(pi)


def random_instance(cond: ConditionId | str, m: int, H: int,
                    rng: np.random.Generator, context: str = "golay") -> GolayParams:
    """Draw a uniformly random GolayParams satisfying ``cond``."""
    cond = as_condition(cond, context)
    fixed = resolve_positions(cond, m)
    pairs = allowed_c12(cond, H)
    if not fixed or max(fixed) > m or not pairs:
        raise ValueError(f"condition {cond.tag} has no instances at m={m}, H={H}")
    pi = random_permutation(m, fixed, rng)
    c = [int(v) for v in rng.integers(0, H, size=m + 1)]
    c[1], c[2] = pairs[int(rng.integers(len(pairs)))]
    return GolayParams(m=m, H=H, pi=pi, c=tuple(c))
