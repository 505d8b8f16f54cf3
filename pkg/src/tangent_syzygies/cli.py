"""Command-line front end.

Exit codes: 0 success, 1 verdict or consistency failure, 2 usage or
precondition error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .api import ConsistencyError, ModelSpec, compute_table
from .config import SweepConfig, TableConfig
from .errors import (
    CharTooSmall,
    CharTwoUnsupported,
    InvalidRange,
    UnsupportedDegree,
    ZeroFunctional,
)
from .linalg import FieldSpec, rank
from .multilinear import (
    MapVariant,
    co_wahl,
    dual_map,
    fiber_dual_injectivity,
    gamma,
    gamma_prime,
    koszul_delta,
    sym_mult,
)
from .report import Report
from .suite import (
    GATES,
    SuiteContext,
    gate_golden,
    gate_k11,
    gate_kappa,
    gate_theorem1,
    gate_theorem2,
)

log = logging.getLogger(__name__)

PRECONDITION_ERRORS = (CharTwoUnsupported, CharTooSmall, UnsupportedDegree, InvalidRange, ZeroFunctional, ValueError, KeyError)


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"5"``, ``"3..12"`` or ``"3-12"``."""
    for sep in ("..", "-", ":"):
        if sep in text:
            a, b = text.split(sep, 1)
            return int(a), int(b)
    return int(text), int(text)


def parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _model_ids(args) -> list[str]:
    out = []
    for m in args.model or []:
        if ":" in m:
            out.append(m)
        elif m == "tangent-rnc":
            if args.g is None:
                raise UsageError("--model tangent-rnc needs --g")
            lo, hi = args.g
            out.extend(f"tangent-rnc:g={g}" for g in range(lo, hi + 1))
        elif m == "elliptic":
            if args.d is None:
                raise UsageError("--model elliptic needs --d")
            lo, hi = args.d
            out.extend(f"elliptic:d={d}" for d in range(lo, hi + 1))
        elif m == "genus2":
            out.append("genus2:deg13")
        else:
            raise UsageError(f"unknown model {m!r}")
    for mid in out:
        ModelSpec.parse(mid)
    return out


def _sweep_config(args) -> SweepConfig:
    kw = dict(seed=args.seed, jobs=args.jobs, out=args.out)
    if args.char is not None:
        kw["chars"] = args.char
    if args.proxy_primes is not None:
        kw["proxy_primes"] = args.proxy_primes
    if getattr(args, "g", None) is not None:
        kw["g_range"] = args.g
    if getattr(args, "p", None) is not None:
        kw["p_range"] = args.p
    if getattr(args, "q", None) is not None:
        kw["q_range"] = args.q
    return SweepConfig(**kw)


def _emit(args, report: Report, stem: str, pretty: str, json_text: str | None = None) -> None:
    json_text = json_text or report.to_json()
    text = {"json": json_text, "csv": report.to_csv(), "pretty": pretty}[args.format]
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(json_text)
        (out / f"{stem}.csv").write_text(report.to_csv())
        (out / f"{stem}.txt").write_text(pretty)


def _table_config(args, cfg: SweepConfig) -> TableConfig:
    p_max = None if args.p is None else args.p[1]
    q_max = 3 if args.q is None else args.q[1]
    return cfg.table_config(p_max=p_max, q_max=q_max)


def _trim(table, args):
    if args.p is None and args.q is None:
        return table
    p_lo = 0 if args.p is None else args.p[0]
    q_lo = 0 if args.q is None else args.q[0]
    table.entries = {k: v for k, v in table.entries.items() if k[0] >= p_lo and k[1] >= q_lo}
    table.p_range = (p_lo, table.p_range[1])
    table.q_range = (q_lo, table.q_range[1])
    return table


def cmd_betti(args) -> int:
    ids = _model_ids(args)
    if not ids:
        raise UsageError("betti needs --model")
    cfg = _sweep_config(args)
    chars = args.char or (0,)
    tables, pretty = [], []
    for mid in ids:
        for c in chars:
            t = _trim(compute_table(mid, c, _table_config(args, cfg)), args)
            tables.append(t)
            head = f"{t.model}  char {t.char}  [{t.certification}]\n"
            pretty.append(head + t.pretty() + "".join(f"note: {n}\n" for n in t.notes))
    report = Report.from_tables(tables, timings=args.timings)
    stem = "betti" if len(tables) > 1 else f"{tables[0].model.replace(':', '_')}_char{tables[0].char}"
    if len(tables) == 1:
        json_text = tables[0].to_json() + "\n"
    else:
        json_text = json.dumps([t.to_dict() for t in tables], indent=1) + "\n"
    _emit(args, report, stem, "\n".join(pretty), json_text)
    return 0


def cmd_theorem(args) -> int:
    cfg = _sweep_config(args)
    fn = gate_theorem1 if args.which.upper() == "T1" else gate_theorem2
    res = fn(SuiteContext(cfg), invert=args.invert)
    report = Report.from_gates([res], timings=args.timings)
    _emit(args, report, f"theorem_{args.which.lower()}", report.summary())
    return 0 if report.passed else 1


def cmd_suite(args) -> int:
    cfg = _sweep_config(args)
    ctx = SuiteContext(cfg)
    names = args.gate or list(GATES)
    results = []
    for name in names:
        if name not in GATES:
            raise UsageError(f"unknown gate {name!r}; available: {', '.join(GATES)}")
        if args.quick and name in ("golden", "kappa", "k11"):
            fn = {"golden": gate_golden, "kappa": gate_kappa, "k11": gate_k11}[name]
            results.append(fn(ctx, include_genus2=False))
        else:
            results.append(GATES[name](ctx))
    report = Report.from_gates(results, timings=args.timings)
    _emit(args, report, "suite", report.summary())
    return 0 if report.passed else 1


def cmd_maps(args) -> int:
    p = args.p[0] if args.p else 0
    q = args.q[0] if args.q else 0
    variant = MapVariant.parse(args.variant)
    chars = args.char or (0,)
    lines = []
    for c in chars:
        f = FieldSpec(c)
        cw = co_wahl(p, variant, f)
        V = cw.V
        g = p + 3 + q
        mats = {
            f"Delta_{p + 2}": cw.matrix,
            f"dual ({'wahl' if variant is MapVariant.TANGENT else 'tau'})_{p + 2}": dual_map(variant, p + 2, f),
            f"delta (q={q})": koszul_delta(q, V, f),
            f"mult (q={q + 1})": sym_mult(q + 1, V, f),
            f"gamma (g={g})": gamma(g, p, variant, f),
            f"gamma' (k={p})": gamma_prime(p, p, variant, f),
        }
        lines.append(f"p={p} variant={variant.value} char={c}")
        for name, m in mats.items():
            lines.append(f"  {name:24s} {m.nrows:>6d} x {m.ncols:<6d} rank {rank(m)}")
            if args.triplets:
                for r, cc, v in sorted(zip(m.rows.tolist(), m.cols.tolist(), [str(x) for x in m.vals])):
                    lines.append(f"    {r} {cc} {v}")
        one = [1] + [0] * (p + 2)
        ok = fiber_dual_injectivity(p, one, variant, f)
        lines.append(f"  fiber h=1: {'injective' if ok else 'fails (a vector is sent to 0)'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_sweep(args) -> int:
    ids = _model_ids(args)
    if not ids:
        raise UsageError("sweep needs --model")
    cfg = _sweep_config(args)
    tables = [compute_table(mid, c, _table_config(args, cfg)) for mid in ids for c in (args.char or (0,))]
    tables = [_trim(t, args) for t in tables]
    report = Report.from_tables(tables, timings=args.timings)
    pretty = "\n".join(f"{t.model}  char {t.char}  [{t.certification}]\n{t.pretty()}" for t in tables)
    _emit(args, report, "sweep", pretty)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", action="append", help="model id (tangent-rnc:g=N, elliptic:d=N, genus2:deg13) or family name")
    common.add_argument("--g", type=parse_range, help="genus or genus range, e.g. 3..12")
    common.add_argument("--d", type=parse_range, help="degree or degree range for elliptic models")
    common.add_argument("--char", type=parse_ints, help="comma-separated characteristics, 0 allowed")
    common.add_argument("--p", type=parse_range, help="p or p range")
    common.add_argument("--q", type=parse_range, help="q or q range")
    common.add_argument("--proxy-primes", type=parse_ints, help="primes standing in for characteristic 0")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="directory for JSON, CSV and text outputs")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    common.add_argument("--timings", action="store_true", help="include wall times (makes output run-dependent)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="tangent-syzygies", description="Koszul cohomology of tangent developables and K3 carpets")
    sub = ap.add_subparsers(dest="command", required=True)
    b = sub.add_parser("betti", parents=[common], help="Betti table of a model")
    b.set_defaults(func=cmd_betti)
    t = sub.add_parser("theorem", parents=[common], help="vanishing sweep for T1 (tangent) or T2 (carpet)")
    t.add_argument("which", choices=("T1", "T2", "t1", "t2"))
    t.add_argument("--invert", action="store_true", help="negate every expectation (negative control)")
    t.set_defaults(func=cmd_theorem)
    s = sub.add_parser("suite", parents=[common], help="run property gates")
    s.add_argument("--gate", action="append", help=f"gate to run (repeatable): {', '.join(GATES)}")
    s.add_argument("--quick", action="store_true", help="leave the genus-2 table out of the table gates")
    s.set_defaults(func=cmd_suite)
    m = sub.add_parser("maps", parents=[common], help="dimensions and ranks of the multilinear maps")
    m.add_argument("--variant", default="tangent", choices=[v.value for v in MapVariant])
    m.add_argument("--triplets", action="store_true", help="print sparse triplets")
    m.set_defaults(func=cmd_maps)
    w = sub.add_parser("sweep", parents=[common], help="Betti tables over a grid of models and characteristics")
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConsistencyError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (UsageError, *PRECONDITION_ERRORS) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
