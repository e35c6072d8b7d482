"""
Command-line front end.

Exit status: 0 on success, 1 when a verification fails (a nonzero value
inside a predicted zone, a failed audit row, a missed delay), 2 on usage or
domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .correlation import (PreconditionError, aperiodic_autocorr, find_zacz,
                          is_complementary_pair, periodic_autocorr,
                          predicted_zones, profile_rows, estimate_delay,
                          theorem_violations)
from .gbf import (TAGS, ConditionId, GolayParams, PhaseSeq, check_condition,
                  generate, golay_pair, parse_permutation, random_instance)
from .qam import (ComplexSeq, OffsetSpec, QamParams, is_qam_complementary,
                  qam_pair, qam_sequence)
from .search import SearchSpaceTooLarge, SearchSpec, cardinality, sweep, table8_audit


class CliError(Exception):
    """A diagnostic for the error stream; exits with status 2."""


def _fmt(x: float) -> str:
    return "%.17g" % x


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", ",").split(",") if x]


def _mapping(text: str) -> dict[int, int]:
    out = {}
    for item in filter(None, text.split(",")):
        k, _, v = item.partition("=")
        out[int(k)] = int(v)
    return out


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as e:
        raise CliError(f"cannot read parameter file {path!r}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"malformed JSON in {path!r}: {e}") from None


def _load_params(args) -> GolayParams | QamParams | None:
    """Parameters from --json or inline flags; None when neither is given."""
    if getattr(args, "json", None):
        d = _read_json(args.json)
        if not isinstance(d, dict):
            raise CliError("parameter JSON must be an object")
        if "params" in d and isinstance(d["params"], dict):
            d = d["params"]
    elif getattr(args, "m", None) is not None and getattr(args, "pi", None) is not None:
        m = args.m
        c = _ints(args.c) if args.c else [0] * (m + 1)
        d = {"m": m, "H": args.H, "pi": list(parse_permutation(args.pi, m)), "c": c}
        if getattr(args, "q", None) is not None:
            d["H"] = 4
            d["q"] = args.q
            if args.offsets_file:
                d["offsets"] = _read_json(args.offsets_file)
            else:
                d["offsets"] = {"case": 1, "d": [[0, 0]] * (args.q - 1)}
    else:
        return None
    if "q" in d:
        if getattr(args, "offsets_file", None) and "offsets" not in d:
            d["offsets"] = _read_json(args.offsets_file)
        return QamParams.from_dict(d)
    return GolayParams.from_dict(d)


def _require_params(args):
    p = _load_params(args)
    if p is None:
        raise CliError("no parameters: give --json FILE or --m, --pi (and --H, --c)")
    return p


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def cmd_generate(args) -> int:
    p = _require_params(args)
    if isinstance(p, QamParams):
        return cmd_qam(args, p)
    seq = generate(p)
    if args.format == "csv":
        _emit(args, "i,value\n" + "".join(f"{i},{v}\n" for i, v in enumerate(seq.values)))
    else:
        _emit(args, _dump({"kind": "phase", "params": p.to_dict(), "H": p.H,
                           "values": seq.values.tolist()}))
    return 0


def cmd_pair(args) -> int:
    p = _require_params(args)
    if isinstance(p, QamParams):
        raise CliError("pair works on Golay parameters; use the qam subcommand")
    a, b = golay_pair(p, args.c_prime)
    ok = is_complementary_pair(a, b, args.tol)
    if args.format == "csv":
        _emit(args, "i,a,b\n" + "".join(f"{i},{x},{y}\n" for i, (x, y)
                                       in enumerate(zip(a.values, b.values))))
    else:
        _emit(args, _dump({"params": p.to_dict(), "c_prime": args.c_prime % p.H,
                           "a": a.values.tolist(), "b": b.values.tolist(),
                           "complementary": ok}))
    return 0 if ok else 1


def _complex_json(s: ComplexSeq) -> dict:
    v = s.values
    return {"gauss_re": s.gauss_re.tolist(), "gauss_im": s.gauss_im.tolist(),
            "re": [float(x) for x in v.real], "im": [float(x) for x in v.imag]}


def cmd_qam(args, p=None) -> int:
    p = p or _require_params(args)
    if not isinstance(p, QamParams):
        raise CliError("qam needs --q and offsets (or q/offsets in the JSON)")
    A, B = qam_pair(p)
    ok = is_qam_complementary(A, B)
    if args.format == "csv":
        a, b = A.values, B.values
        lines = ["i,A_re,A_im,B_re,B_im\n"] + [
            f"{i},{_fmt(a[i].real)},{_fmt(a[i].imag)},{_fmt(b[i].real)},{_fmt(b[i].imag)}\n"
            for i in range(len(A))]
        _emit(args, "".join(lines))
    else:
        _emit(args, _dump({"kind": "qam", "params": p.to_dict(), "q": p.q,
                           "A": _complex_json(A), "B": _complex_json(B),
                           "complementary": ok}))
    return 0 if ok else 1


def _sequence_from_json(d):
    kind = d.get("kind")
    if kind == "phase":
        return PhaseSeq(d["H"], d["values"])
    if kind == "qam":
        a = d["A"]
        return ComplexSeq(d["q"], a["gauss_re"], a["gauss_im"])
    if kind == "complex":
        return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    if "m" in d and "pi" in d:
        p = QamParams.from_dict(d) if "q" in d else GolayParams.from_dict(d)
        return qam_sequence(p) if isinstance(p, QamParams) else generate(p)
    raise CliError("input JSON is neither a sequence nor a parameter object")


def cmd_correlate(args) -> int:
    p = _load_params(args)
    if p is not None:
        seq = qam_sequence(p) if isinstance(p, QamParams) else generate(p)
    else:
        d = _read_json(args.input or "-")
        if not isinstance(d, dict):
            raise CliError("sequence JSON must be an object")
        seq = _sequence_from_json(d)
    if args.aperiodic:
        prof = aperiodic_autocorr(seq)
    else:
        prof = periodic_autocorr(seq, method=args.method)
    rows = profile_rows(prof)
    if args.tau_range:
        lo, _, hi = args.tau_range.partition(":")
        lo = int(lo) if lo else 0
        hi = int(hi) if hi else prof.N - 1
        rows = [r for r in rows if lo <= r[0] <= hi]
    if args.format == "csv":
        _emit(args, "tau,re,im,abs\n" + "".join(",".join(map(str, r)) + "\n" for r in rows))
    else:
        out = {"kind": prof.kind, "exact": prof.exact, "N": prof.N,
               "tau": [r[0] for r in rows], "re": [_number(r[1]) for r in rows],
               "im": [_number(r[2]) for r in rows], "abs": [_number(r[3]) for r in rows]}
        if prof.kind == "periodic":
            out["zacz"] = find_zacz(prof, args.tol).to_list()
        _emit(args, _dump(out))
    return 0


def cmd_verify(args) -> int:
    p = _require_params(args)
    base = p.base if isinstance(p, QamParams) else p
    context = "qam" if isinstance(p, QamParams) else "golay"
    if base.m < 4:
        raise CliError(f"conditions need m >= 4, got m={base.m}")
    tags = [args.cond] if args.cond else [
        t for t in TAGS if check_condition(base, ConditionId(t, context))]
    if not tags:
        raise CliError("parameters satisfy none of the listed conditions")
    seq = qam_sequence(p) if isinstance(p, QamParams) else generate(p)
    detected = find_zacz(periodic_autocorr(seq), args.tol)
    reports = []
    for tag in tags:
        if tag not in TAGS:
            raise CliError(f"unknown condition tag {tag!r}")
        try:
            bad = theorem_violations(p, tag, args.tol)
        except PreconditionError as e:
            raise CliError(str(e)) from None
        reports.append({"cond": tag, "context": context,
                        "predicted": [list(z) for z in predicted_zones(tag[0], base.m)],
                        "violations": bad, "holds": not bad})
    holds = all(r["holds"] for r in reports)
    _emit(args, _dump({"params": p.to_dict(), "pi": list(base.pi),
                       "detected": detected.to_list(), "tol_used": detected.tol_used,
                       "checks": reports, "holds": holds}))
    return 0 if holds else 1


def cmd_search(args) -> int:
    kind = "qam" if args.q else "golay"
    spec = SearchSpec(
        kind=kind, m_values=tuple(_ints(args.m)),
        H_values=tuple(_ints(args.H)), q_values=tuple(_ints(args.q)) if args.q else (2,),
        cond=args.cond, pi_fixed=_mapping(args.pi_fixed or ""),
        c_fixed=_mapping(args.c_fixed or ""),
        offset_cases=tuple(_ints(args.case)),
        w_values=tuple(_ints(args.w)) if args.w else None,
        mu_values=tuple(args.mu.split(",")),
        mode=args.mode, count=args.count, seed=args.seed, cap=args.cap)
    n = agree = 0
    fh = open(args.out, "w") if args.out else sys.stdout
    try:
        for r in sweep(spec, workers=args.workers):
            n += 1
            agree += r.agrees
            fh.write(r.to_json() + "\n")
    except SearchSpaceTooLarge as e:
        raise CliError(f"search space too large: {e.cardinality} candidates exceed cap {e.cap}") from None
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(f"candidates={n} agree={agree} disagree={n - agree}", file=sys.stderr)
    return 0


def cmd_audit(args) -> int:
    rows = table8_audit(args.m, args.H, max_instances=args.max_instances, seed=args.seed)
    ok = all(r.passed for r in rows)
    _emit(args, _dump({"m": args.m, "H": args.H, "rows": [r.to_dict() for r in rows],
                       "passed": ok}))
    return 0 if ok else 1


def _sync_window(family: str, m: int) -> int:
    zones = predicted_zones(family, m)
    lo, hi = zones[0]
    if lo != 1:
        raise CliError(f"family {family} has no zero zone next to the origin")
    return hi + 1


def cmd_sync_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    cond = args.cond
    if cond not in TAGS:
        raise CliError(f"unknown condition tag {cond!r}")
    H = 4 if args.q else args.H
    base = random_instance(cond, args.m, H, rng, context="qam" if args.q else "golay")
    if args.q:
        d = tuple((int(x), int(y)) for x, y in rng.integers(0, 4, size=(args.q - 1, 2)))
        params = QamParams(args.q, base, OffsetSpec(case=1, d=d))
        ref = qam_sequence(params).values
    else:
        params = base
        ref = generate(base).to_complex()
    window = args.window or _sync_window(cond[0], args.m)
    hits = 0
    estimates = []
    for _ in range(args.trials):
        rx = np.roll(ref, args.delay)
        if args.noise > 0:
            rx = rx + args.noise / np.sqrt(2) * (rng.standard_normal(rx.size)
                                                 + 1j * rng.standard_normal(rx.size))
        est = estimate_delay(ref, rx, window)
        estimates.append(est)
        hits += est == args.delay
    rate = hits / args.trials if args.trials else 1.0
    _emit(args, _dump({"params": params.to_dict(), "delay": args.delay, "window": window,
                       "noise": args.noise, "trials": args.trials, "hits": hits,
                       "rate": rate, "estimates": estimates}))
    return 0 if rate >= args.min_rate else 1


# ---------------------------------------------------------------------------

def _add_params(sp, qam=True):
    sp.add_argument("--json", metavar="FILE", help="parameter JSON ('-' for stdin)")
    sp.add_argument("--m", type=int)
    sp.add_argument("--H", type=int, default=4)
    sp.add_argument("--pi", help="permutation: '2,1,3,4' or cycles like '(143)'")
    sp.add_argument("--c", help="coefficients c_0..c_m, comma separated")
    if qam:
        sp.add_argument("--q", type=int)
        sp.add_argument("--offsets-file", metavar="FILE", help="QAM offsets JSON object")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="golayzacz", description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="emit the phase sequence")
    _add_params(sp)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("pair", help="emit a Golay complementary pair")
    _add_params(sp, qam=False)
    sp.add_argument("--c-prime", type=int, default=0)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("qam", help="emit a 4^q-QAM Golay complementary pair")
    _add_params(sp)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_qam)

    sp = sub.add_parser("correlate", help="autocorrelation profile")
    _add_params(sp)
    sp.add_argument("--input", metavar="FILE", help="sequence JSON (default: stdin)")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--periodic", action="store_true", default=True)
    g.add_argument("--aperiodic", action="store_true")
    sp.add_argument("--method", choices=("direct", "fft"), default="direct")
    sp.add_argument("--tau-range", metavar="LO:HI")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_correlate)

    sp = sub.add_parser("verify", help="check the zones a condition predicts")
    _add_params(sp)
    sp.add_argument("--cond", help="condition tag; default: every satisfied tag")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search", help="sweep a parameter space (JSON lines)")
    sp.add_argument("--m", default="4", help="comma-separated m values")
    sp.add_argument("--H", default="4", help="comma-separated H values (Golay)")
    sp.add_argument("--q", help="comma-separated q values (selects QAM)")
    sp.add_argument("--cond")
    sp.add_argument("--pi-fixed", help="positions like '1=1,2=2' (negative counts from m)")
    sp.add_argument("--c-fixed", help="coefficients like '1=0'")
    sp.add_argument("--case", default="1,2,3")
    sp.add_argument("--w")
    sp.add_argument("--mu", default="pi1")
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cap", type=int, default=10 ** 7)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("audit", help="audit the condition/zone summary table")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--H", type=int, required=True)
    sp.add_argument("--max-instances", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("sync-demo", help="cyclic delay recovery by correlation peak")
    sp.add_argument("--m", type=int, default=6)
    sp.add_argument("--H", type=int, default=4)
    sp.add_argument("--q", type=int, help="use a QAM sequence (offset case 1)")
    sp.add_argument("--cond", default="A1")
    sp.add_argument("--delay", type=int, default=9)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--window", type=int)
    sp.add_argument("--min-rate", type=float, default=0.99)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_sync_demo)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
