"""Command-line front end.

Every command prints one or more result records. Exit status is 0 on
success, 1 on a domain error (reported by its exception name) and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import checks
from .errors import EvenLevel, InvariantError
from .families import ChainSpec, TorusKnot, chain_eval, volume_estimate
from .qarith import DEFAULT_TOL, QParams, vol_oct
from .skein import sixj, tet_admissible
from .surgery import (LinkingMatrix, chain_presentation, classes_by_first_meridian,
                      lens_sum, nr, nr0_knot_surgery, nr0_symmetric_knot, signature,
                      torus_surgery_nr)


@dataclass
class ResultRecord:
    command: str
    inputs: dict[str, Any]
    value_re: float
    value_im: float
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def of(cls, command, inputs, value, **meta):
        v = complex(value)
        return cls(command, inputs, v.real, v.imag, meta)

    def to_json(self) -> str:
        return json.dumps(_jsonable(asdict(self)), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        return cls(**json.loads(text))


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


# ---------------------------------------------------------------------------
# literal parsing

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?i)?$")


def _exact(s: str) -> Fraction:
    if "/" in s:
        num, den = s.split("/")
        return Fraction(num) / Fraction(den)
    return Fraction(s)


def parse_complex(text: str) -> complex:
    """Parse ``RE[+IMi]`` where RE and IM may be rationals like 2/65."""
    s = text.strip().replace(" ", "")
    m = _COMPLEX.match(s)
    if not s or m is None:
        raise ValueError(f"not a complex literal: {text!r}")
    re_part = _exact(m["re"]) if m["re"] else Fraction(0)
    im_part = Fraction(0)
    if s.endswith("i"):
        if m["re"] and m["sign"] is None:
            # "2i" alone: the leading number was the imaginary part
            re_part, im_part = Fraction(0), _exact(m["re"])
        else:
            im_part = _exact(m["im"]) if m["im"] else Fraction(1)
            if m["sign"] == "-":
                im_part = -im_part
    return complex(float(re_part), float(im_part))


def _complex_list(text: str) -> list[complex]:
    return [parse_complex(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# commands

def _need_r(args) -> QParams:
    if args.r is None:
        raise _Usage(f"{args.command} needs --r")
    return QParams(args.r, args.tol)


class _Usage(Exception):
    pass


def cmd_sixj(args):
    p = _need_r(args)
    js = _complex_list(args.colors)
    if len(js) != 6:
        raise _Usage("--colors needs six values")
    val = sixj(p, *js)
    return [ResultRecord.of("sixj", {"r": p.r, "colors": js}, val,
                            admissible=tet_admissible(p, *js))]


def cmd_dmod(args):
    p = _need_r(args)
    a = parse_complex(args.alpha)
    return [ResultRecord.of("dmod", {"r": p.r, "alpha": a}, p.mdim(a))]


def cmd_delta(args):
    p = _need_r(args)
    meta = {"delta_plus": p.delta(1), "gauss_delta_minus": p.gauss_delta(-1)}
    if p.r % 4 == 0:
        msg = f"warning: Delta_- = 0 at r = {p.r}; surgery commands are disabled at this level"
        print(msg, file=sys.stderr)
        meta["warning"] = msg
    return [ResultRecord.of("delta", {"r": p.r}, p.delta(-1), **meta)]


def cmd_chain(args):
    p = _need_r(args)
    framings = _int_list(args.framings)
    clasps = _int_list(args.clasps) if args.clasps else None
    if (args.colors is None) == (args.cls is None):
        raise _Usage("chain needs exactly one of --colors or --class")
    if args.colors is not None:
        spec = ChainSpec(tuple(framings), tuple(_complex_list(args.colors)), clasps)
        return [ResultRecord.of("chain", {"r": p.r, "framings": framings, "colors": list(spec.colors)},
                                chain_eval(p, spec))]
    pres = chain_presentation(p, framings, clasps)
    classes = classes_by_first_meridian(pres.lk)
    det = abs(pres.lk.det())
    k = args.cls % det
    lifts = _int_list(args.lifts) if args.lifts else None
    val = nr(p, pres, classes[k], lifts)
    return [ResultRecord.of("chain", {"r": p.r, "framings": framings, "class": k}, val,
                            signature=list(signature(pres.lk)),
                            meridian_values=[str(x) for x in classes[k].exact],
                            lifts=lifts or [0] * len(framings),
                            terms=p.r ** len(framings))]


def cmd_lens_sum(args):
    p = _need_r(args)
    framings = _int_list(args.framings)
    res = lens_sum(p, framings)
    sig = list(signature(LinkingMatrix.chain(framings)))
    inputs = {"r": p.r, "framings": framings}
    if args.multiset:
        return [ResultRecord.of("lens-sum", inputs, v, class_index=k,
                                meridian_values=[str(x) for x in c.exact] if c.exact else None)
                for k, c, v in res.rows]
    return [ResultRecord.of("lens-sum", inputs, res.total, signature=sig, classes=len(res.rows),
                            order=res.det, terms=len(res.rows) * p.r ** len(framings))]


def cmd_torus_surgery(args):
    p = _need_r(args)
    val = torus_surgery_nr(p, args.f, args.n, args.cls, args.lift)
    framing = args.f + 2 * args.n + 1
    return [ResultRecord.of("torus-surgery", {"r": p.r, "f": args.f, "n": args.n, "class": args.cls},
                            val, framing=framing, lift=args.lift,
                            meridian_value=str(Fraction(2 * args.cls, framing) % 2))]


def cmd_poincare(args):
    p = _need_r(args)
    K = TorusKnot(p, -2, 1)
    a = nr0_knot_surgery(K)
    b = nr0_knot_surgery(K, weighting=-1)
    meta: dict[str, Any] = {"route_plus": a, "route_minus": b}
    try:
        c = nr0_symmetric_knot(K)
        meta["route_symmetric"] = c
        meta["agree"] = bool(abs(a - c) <= 1e-8 * max(1.0, abs(a)) and abs(a - b) <= 1e-8 * max(1.0, abs(a)))
    except EvenLevel:
        meta["route_symmetric"] = None
        meta["agree"] = bool(abs(a - b) <= 1e-8 * max(1.0, abs(a)))
    if p.r == 5:
        meta["expected"] = -(p.q ** 2 + 1) ** 2
    return [ResultRecord.of("poincare", {"r": p.r}, a, **meta)]


def cmd_volume(args):
    if args.rmin > args.rmax or args.step <= 0:
        raise _Usage("need rmin <= rmax and step > 0")
    target = 2 * (args.k - 1) * vol_oct()
    out = []
    for r in range(args.rmin, args.rmax + 1, args.step):
        v = volume_estimate(QParams(r, args.tol), args.k)
        out.append(ResultRecord.of("volume", {"k": args.k, "r": r}, v, target=target,
                                   rel_err=abs(v - target) / target))
    return out


def cmd_selftest(args):
    results = checks.run_all(args.seed)
    out = [ResultRecord.of("selftest", {"check": name, "seed": args.seed}, float(ok), detail=detail)
           for name, ok, detail in results]
    passed = sum(ok for _, ok, _ in results)
    out.append(ResultRecord.of("selftest", {"seed": args.seed}, passed,
                               passed=passed, failed=len(results) - passed))
    return out


COMMANDS = {
    "sixj": cmd_sixj, "dmod": cmd_dmod, "delta": cmd_delta, "chain": cmd_chain,
    "lens-sum": cmd_lens_sum, "torus-surgery": cmd_torus_surgery, "poincare": cmd_poincare,
    "volume": cmd_volume, "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# output

def format_records(records: Sequence[ResultRecord], fmt: str) -> str:
    if fmt == "json":
        return "\n".join(r.to_json() for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", "inputs", "value_re", "value_im", "meta"])
        for r in records:
            w.writerow([r.command, json.dumps(_jsonable(r.inputs), sort_keys=True),
                        repr(r.value_re), repr(r.value_im),
                        json.dumps(_jsonable(r.meta), sort_keys=True)])
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in records:
        ins = " ".join(f"{k}={_plain(v)}" for k, v in r.inputs.items())
        meta = " ".join(f"{k}={_plain(v)}" for k, v in r.meta.items())
        lines.append(f"{r.command} {ins} value={_plain(complex(r.value_re, r.value_im))} {meta}".rstrip())
    return "\n".join(lines)


def _plain(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}i"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return ",".join(_plain(x) for x in v)
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, help="level r >= 2")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="nrinv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sixj", parents=[common], help="6j-symbol")
    s.add_argument("--colors", required=True, help="j1,...,j6")
    s = sub.add_parser("dmod", parents=[common], help="modified dimension d(alpha)")
    s.add_argument("--alpha", required=True)
    sub.add_parser("delta", parents=[common], help="Delta_- (Delta_+ in meta)")
    s = sub.add_parser("chain", parents=[common], help="chain link value or N_r of its surgery")
    s.add_argument("--framings", required=True)
    s.add_argument("--clasps")
    s.add_argument("--colors")
    s.add_argument("--class", dest="cls", type=int)
    s.add_argument("--lifts", help="even lift offsets, one per component")
    s = sub.add_parser("lens-sum", parents=[common], help="sum of N_r over nonzero classes")
    s.add_argument("--framings", required=True)
    s.add_argument("--multiset", action="store_true", help="one record per class")
    s = sub.add_parser("torus-surgery", parents=[common], help="N_r of torus-knot surgery")
    s.add_argument("--f", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--class", dest="cls", type=int, required=True)
    s.add_argument("--lift", type=int, default=0)
    sub.add_parser("poincare", parents=[common], help="N_r^0 of the Poincare sphere, both routes")
    s = sub.add_parser("volume", parents=[common], help="(2 pi / r) log of the fundamental link norm")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--rmin", type=int, required=True)
    s.add_argument("--rmax", type=int, required=True)
    s.add_argument("--step", type=int, default=2)
    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return ap


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        records = COMMANDS[args.command](args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - t0
    if args.command != "selftest":     # keep the selftest report seed-deterministic
        for rec in records:
            rec.meta.setdefault("wall_time", wall)
    print(format_records(records, args.format), file=out)
    if args.command == "selftest":
        return 0 if records[-1].meta["failed"] == 0 else 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
