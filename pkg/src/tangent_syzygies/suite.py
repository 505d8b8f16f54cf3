"""Property gates: each returns a ``GateResult`` with per-cell records and failures.

Verdicts are derived only from the recorded cells. Gates that need Betti
tables share them through a ``SuiteContext`` so a table is computed once per
(model, characteristic).
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from sympy import isprime, nextprime

from .api import ModelSpec, compute_table
from .config import SweepConfig
from .errors import HilbertMismatch
from .koszul import BettiTable, duality_check, hilbert_numerator_check
from .linalg import EXACT_FP, QQ, FieldSpec, rank, rank_with_certificate
from .models.base import associativity_check, hilbert_check
from .multilinear import (
    Div,
    MapVariant,
    Sym,
    Wedge2Div,
    Wedge2Sym,
    co_wahl_delta,
    conic_inclusion,
    double_line_inclusion,
    fiber_dual_injectivity,
    gamma,
    gamma_prime,
    is_surjective,
    kernel_regularity,
    koszul_module_dim_with_certificate,
    sample_functionals,
    sym_mult,
    tau_map,
    wahl_map,
)

log = logging.getLogger(__name__)

GOLDEN = {
    "elliptic:d=9": {
        (0, 0): 1,
        (1, 1): 9, (2, 1): 3,
        (1, 2): 6, (2, 2): 81, (3, 2): 171, (4, 2): 165, (5, 2): 81, (6, 2): 18, (7, 2): 2,
        (6, 3): 1,
    },
    "elliptic:d=10": {
        (0, 0): 1,
        (1, 1): 15, (2, 1): 20,
        (2, 2): 70, (3, 2): 252, (4, 2): 350, (5, 2): 260, (6, 2): 105, (7, 2): 20, (8, 2): 2,
        (7, 3): 1,
    },
    "genus2:deg13": {
        (0, 0): 1,
        (1, 1): 24, (2, 1): 48,
        (2, 2): 153, (3, 2): 864, (4, 2): 1848, (5, 2): 2304, (6, 2): 1827,
        (7, 2): 928, (8, 2): 288, (9, 2): 48, (10, 2): 4,
        (9, 3): 1,
    },
}  # fmt: skip


@dataclass
class Record:
    model: str
    g: int | str
    char: int
    p: int
    q: int
    value: int
    certification: str
    ms: float = 0.0

    def row(self) -> list:
        return [self.model, self.g, self.char, self.p, self.q, self.value, self.certification, round(self.ms, 1)]


@dataclass
class GateResult:
    name: str
    records: list[Record] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, ok: bool, message: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(message)

    def to_dict(self) -> dict:
        return {
            "gate": self.name,
            "verdict": "PASS" if self.passed else "FAIL",
            "checked": self.checked,
            "failures": self.failures,
            "notes": self.notes,
        }


class SuiteContext:
    """Shared cache of Betti tables for the gates of one run."""

    def __init__(self, config: SweepConfig | None = None):
        self.config = config or SweepConfig()
        self._tables: dict[tuple[str, int], BettiTable] = {}

    def table(self, model_id: str, char: int) -> BettiTable:
        key = (model_id, char)
        if key not in self._tables:
            t0 = time.perf_counter()
            self._tables[key] = compute_table(model_id, char, self.config.table_config())
            log.info("table %s char %d in %.1fs", model_id, char, time.perf_counter() - t0)
        return self._tables[key]

    def tables(self) -> list[BettiTable]:
        return list(self._tables.values())


def _field(c: int) -> FieldSpec:
    return FieldSpec(c)


def smallest_good_prime(g: int) -> int:
    """Smallest prime ``>= (g+2)/2`` (at least 3, since the model excludes char 2)."""
    lo = max(3, -(-(g + 2) // 2))
    return lo if isprime(lo) else int(nextprime(lo))


# ---------------------------------------------------------------------------
# linear-algebra identities


def gate_exactness(ctx: SuiteContext, d_max: int = 8) -> GateResult:
    """Exactness of the conic sequence (char 0) and the double-line sequence (odd chars)."""
    res = GateResult("exactness")
    for d in range(d_max + 1):
        comp = wahl_map(d + 2, QQ) @ conic_inclusion(d, QQ)
        res.expect(comp.is_zero(), f"wahl o conic_inclusion != 0 at d={d}")
        total = rank(conic_inclusion(d, QQ)) + rank(wahl_map(d + 2, QQ))
        res.expect(total == Wedge2Sym(d + 2).dim, f"conic rank sum {total} != {Wedge2Sym(d + 2).dim} at d={d}")
    for c in [x for x in ctx.config.chars if x != 2]:
        f = _field(c)
        for d in range(d_max + 1):
            comp = tau_map(d + 2, f) @ double_line_inclusion(d, f)
            res.expect(comp.is_zero(), f"tau o double_line_inclusion != 0 at d={d}, char {c}")
            rk = rank(tau_map(d + 2, f))
            res.expect(rk == 2 * d + 3, f"rank tau_{d + 2} = {rk} != {2 * d + 3} over char {c}")
    return res


def gate_adjointness(ctx: SuiteContext, p_max: int = 6) -> GateResult:
    """``<Delta w, v> = <w, mu v>`` on all basis pairs under the monomial pairings."""
    res = GateResult("adjointness")
    for c in ctx.config.chars:
        f = _field(c)
        for p in range(p_max + 1):
            delta = co_wahl_delta(p, MapVariant.TANGENT, f).to_dense()
            mu = wahl_map(p + 2, f).to_dense()
            W, wedge_v = Div(2 * p + 2), Wedge2Div(p + 2)
            wedge_u, sym = Wedge2Sym(p + 2), Sym(2 * p + 2)
            ok = True
            for w in W.labels:
                for v in wedge_u.labels:
                    lhs = delta[wedge_v.index(v), W.index(w)]  # <x^(i)^x^(j), x^i^x^j> = 1
                    rhs = mu[sym.index(w), wedge_u.index(v)]  # <x^(a), x^a> = 1
                    ok &= int(lhs) == int(rhs)
            res.expect(ok, f"adjointness fails for p={p} over char {c}")
    return res


def gate_complex(ctx: SuiteContext) -> GateResult:
    """``mult o gamma = 0`` for every ``(g, p)``, both variants, every field."""
    res = GateResult("complex")
    g_lo, g_hi = ctx.config.g_range
    for c in ctx.config.chars:
        f = _field(c)
        for variant in MapVariant:
            for g in range(g_lo, g_hi + 1):
                for p in range(g - 2):
                    gam = gamma(g, p, variant, f)
                    mult = sym_mult(g - p - 2, Div(p + 2), f)
                    res.expect((mult @ gam).is_zero(), f"mult o gamma != 0 at g={g}, p={p}, {variant.value}, char {c}")
    return res


# ---------------------------------------------------------------------------
# theorem boundaries


def theorem1_expectation(g: int, p: int, c: int) -> bool | None:
    """``True`` = must vanish, ``False`` = must not vanish, ``None`` = reported only."""
    b = (g - 3) // 2
    good = c == 0 or 2 * c >= g + 2
    if p <= b and good:
        return True
    if p == b and 2 <= c and 2 * c <= g + 1:
        return False
    if p > b:
        return False
    return None


def theorem2_expectation(g: int, p: int, c: int) -> bool | None:
    b = (g - 3) // 2
    if c == 2:
        return None
    if p <= b and (c == 0 or c >= max(3, (g - 1) // 2)):
        return True
    return None


def _koszul_cell(args):
    g, p, variant, c, linalg = args
    t0 = time.perf_counter()
    v, cert = koszul_module_dim_with_certificate(g, p, variant, FieldSpec(c), linalg)
    return g, p, c, v, cert, 1000 * (time.perf_counter() - t0)


def _theorem_gate(
    ctx: SuiteContext, name: str, variant: MapVariant, rule: Callable[[int, int, int], bool | None], invert: bool = False
) -> GateResult:
    res = GateResult(name)
    g_lo, g_hi = ctx.config.g_range
    chars = [c for c in ctx.config.chars if not (variant is MapVariant.CARPET and c == 2)]
    jobs = []
    for g in range(g_lo, g_hi + 1):
        p_lo, p_hi = (0, g - 3) if ctx.config.p_range is None else ctx.config.p_range
        for c in chars:
            for p in range(max(0, p_lo), min(g - 3, p_hi) + 1):
                jobs.append((g, p, variant, c, ctx.config.linalg))
    if ctx.config.jobs > 1:
        with ProcessPoolExecutor(ctx.config.jobs) as ex:
            cells = list(ex.map(_koszul_cell, jobs))
    else:
        cells = [_koszul_cell(j) for j in jobs]
    cells.sort(key=lambda t: (t[2], t[0], t[1]))
    label = f"koszul-module:{variant.value}"
    for g, p, c, v, cert, ms in cells:
        res.records.append(Record(label, g, c, p, 2, v, cert, ms))
        exp = rule(g, p, c)
        if exp is None:
            continue
        if invert:
            exp = not exp
        want = "= 0" if exp else "!= 0"
        res.expect((v == 0) == exp, f"g={g} p={p} char={c}: koszul module dim {v}, expected {want}")
    return res


def gate_theorem1(ctx: SuiteContext, invert: bool = False) -> GateResult:
    return _theorem_gate(ctx, "theorem1", MapVariant.TANGENT, theorem1_expectation, invert)


def gate_theorem2(ctx: SuiteContext, invert: bool = False) -> GateResult:
    return _theorem_gate(ctx, "theorem2", MapVariant.CARPET, theorem2_expectation, invert)


# ---------------------------------------------------------------------------
# gamma', fibers and regularity


def gate_propagation(ctx: SuiteContext, p_max: int = 4) -> GateResult:
    """Surjectivity of ``gamma'_p`` propagates to ``gamma'_k`` for ``p < k <= g_max - p - 3``."""
    res = GateResult("propagation")
    g_max = ctx.config.g_range[1]
    for c in ctx.config.chars:
        f = _field(c)
        for variant in MapVariant:
            for p in range(p_max + 1):
                if not is_surjective(gamma_prime(p, p, variant, f), ctx.config.linalg):
                    res.notes.append(f"gamma'_{p} not surjective ({variant.value}, char {c}); nothing to propagate")
                    continue
                for k in range(p + 1, g_max - p - 2):
                    ok = is_surjective(gamma_prime(p, k, variant, f), ctx.config.linalg)
                    res.expect(ok, f"gamma'({p},{k}) not surjective although gamma'({p},{p}) is ({variant.value}, char {c})")
    return res


def gate_remark33(ctx: SuiteContext, p_max: int = 4, random_count: int = 4) -> GateResult:
    """Fiber failure at ``h = 1`` whenever ``char <= p + 2`` (negative control).

    Fiber/bundle consistency: a failing sampled fiber must show up as a
    non-regular kernel or a non-surjective ``gamma'``.
    """
    res = GateResult("remark33")
    g_max = ctx.config.g_range[1]
    for c in ctx.config.chars:
        f = _field(c)
        for p in range(p_max + 1):
            one = [1] + [0] * (p + 2)
            inj = fiber_dual_injectivity(p, one, MapVariant.TANGENT, f)
            res.records.append(Record("fiber:h=1", "-", c, p, 2, int(inj), EXACT_FP))
            if 0 < c <= p + 2:
                res.expect(not inj, f"h=1 fiber should fail for p={p}, char {c}")
            if c == 2:
                continue
            for variant in MapVariant:
                hs = sample_functionals(p, f, random_count, seed=ctx.config.seed)
                failed = sum(not fiber_dual_injectivity(p, h, variant, f) for h in hs)
                regular, _ = kernel_regularity(p, variant, f, ctx.config.linalg)
                res.notes.append(
                    f"p={p} {variant.value} char {c}: {failed}/{len(hs)} sampled fibers fail; kernel regular: {regular}"
                )
                if failed and regular:
                    ks = range(p, max(p, g_max - p - 3) + 1)
                    gap = any(not is_surjective(gamma_prime(p, k, variant, f), ctx.config.linalg) for k in ks)
                    res.expect(gap, f"p={p} {variant.value} char {c}: sampled fibers fail but every rank test passes")
    return res


# ---------------------------------------------------------------------------
# models and tables


def rnc_chars(g: int) -> list[int]:
    return [0, smallest_good_prime(g)]


def gate_hilbert(ctx: SuiteContext, m_max: int = 4, curve_degrees=(9, 10)) -> GateResult:
    res = GateResult("hilbert")
    specs = [(f"tangent-rnc:g={g}", c) for g in range(3, 10) for c in (3, 5, 7, 32003)]
    specs += [(f"elliptic:d={d}", 32003) for d in curve_degrees] + [("genus2:deg13", 32003)]
    for mid, c in specs:
        spec = ModelSpec.parse(mid)
        for prime in [c] if c != 0 else list(ctx.config.proxy_primes):
            model = spec.build(FieldSpec(prime))
            try:
                hilbert_check(model, m_max)
                res.expect(True, "")
            except HilbertMismatch as e:
                res.expect(False, f"{mid} over F_{prime}: {e}")
            res.expect(associativity_check(model, 100, seed=ctx.config.seed), f"{mid} over F_{prime}: associativity")
            for m in range(1, m_max + 1):
                res.records.append(Record(mid, spec.param, prime, -1, m, model.piece_dim(m), EXACT_FP))
    return res


def gate_duality(ctx: SuiteContext, g_max: int = 9) -> GateResult:
    res = GateResult("duality")
    for g in range(3, g_max + 1):
        for c in rnc_chars(g):
            t = ctx.table(f"tangent-rnc:g={g}", c)
            res.expect(duality_check(t, g), f"duality fails for tangent-rnc:g={g} over char {c}")
            res.expect(all(t[p, q] == 0 for (p, q) in t.entries if q >= 4), f"nonzero entry with q >= 4 (g={g})")
    return res


def gate_direct_vs_gamma(ctx: SuiteContext, g_max: int = 9) -> GateResult:
    """Koszul cohomology of the model against the Koszul module and ``ker gamma``."""
    res = GateResult("direct_vs_gamma")
    for g in range(3, g_max + 1):
        for c in rnc_chars(g):
            t = ctx.table(f"tangent-rnc:g={g}", c)
            f = _field(c)
            for p in range(g - 2):
                km, cert = koszul_module_dim_with_certificate(g, p, MapVariant.TANGENT, f, ctx.config.linalg)
                gam = gamma(g, p, MapVariant.TANGENT, f)
                rk, _ = rank_with_certificate(gam, ctx.config.linalg)
                res.records.append(Record(f"tangent-rnc:g={g}", g, c, p, 2, t[p, 2], t.certification))
                res.records.append(Record("koszul-module:tangent", g, c, p, 2, km, cert))
                res.expect(t[p, 2] == km, f"g={g} char={c} p={p}: kappa_(p,2)={t[p, 2]} vs koszul module {km}")
                res.expect(
                    t[p + 1, 1] == gam.ncols - rk,
                    f"g={g} char={c} p={p}: kappa_(p+1,1)={t[p + 1, 1]} vs dim ker gamma {gam.ncols - rk}",
                )
    return res


def _curve_ids(include_genus2: bool) -> list[str]:
    ids = ["elliptic:d=9", "elliptic:d=10"]
    return ids + (["genus2:deg13"] if include_genus2 else [])


def gate_golden(ctx: SuiteContext, include_genus2: bool = True) -> GateResult:
    res = GateResult("golden")
    for mid in _curve_ids(include_genus2):
        t = ctx.table(mid, 0)
        for (p, q), v in sorted(t.entries.items()):
            res.records.append(Record(mid, t.g, 0, p, q, v, t.certification, t.ms.get((p, q), 0.0)))
        want = GOLDEN[mid]
        keys = set(want) | {k for k, v in t.entries.items() if v}
        bad = [f"{k}: {t[k]} vs {want.get(k, 0)}" for k in sorted(keys) if t[k] != want.get(k, 0)]
        res.expect(not bad, f"{mid} differs from the printed table at " + ", ".join(bad))
        res.expect(not t.notes, f"{mid}: " + "; ".join(t.notes))
    return res


def gate_kappa(ctx: SuiteContext, include_genus2: bool = True) -> GateResult:
    """``kappa_{0,0} = 1``, ``kappa_{p,0} != 0`` iff ``p = 0``, and ``kappa_{r-2,3} = 1``."""
    res = GateResult("kappa")
    for mid in _curve_ids(include_genus2):
        ctx.table(mid, 0)
    for g in range(3, 10):
        ctx.table(f"tangent-rnc:g={g}", 0)
    for t in ctx.tables():
        r = ModelSpec.parse(t.model).r
        res.expect(t[0, 0] == 1, f"{t.model} char {t.char}: kappa_00 = {t[0, 0]}")
        res.expect(all(t[p, 0] == 0 for p in range(1, t.p_range[1] + 1)), f"{t.model} char {t.char}: kappa_(p,0) != 0 for p > 0")
        res.expect(t[r - 2, 3] == 1, f"{t.model} char {t.char}: kappa_(r-2,3) = {t[r - 2, 3]}")
    return res


def gate_numerator(ctx: SuiteContext) -> GateResult:
    """Hilbert-series identity for every table of the run, against the full ring over ``P^r``."""
    res = GateResult("numerator")
    for t in ctx.tables():
        spec = ModelSpec.parse(t.model)
        model = spec.build(FieldSpec(t.char or ctx.config.proxy_primes[0]))
        ok = hilbert_numerator_check(t, model.expected_hilbert, spec.r + 1, degree=t.p_range[1] + t.q_range[1])
        res.expect(ok, f"{t.model} char {t.char}: Betti numbers do not match the Hilbert function")
    if not ctx.tables():
        res.notes.append("no tables were built in this run")
    return res


def gate_k11(ctx: SuiteContext, include_genus2: bool = True) -> GateResult:
    """``kappa_{1,1} = (r-2)(r-3)/2 - 6g``, ``kappa_{r-2,2} = 2g(r+1)``, ``kappa_{r-1,2} = 2g``."""
    res = GateResult("k11")
    for mid in _curve_ids(include_genus2):
        spec = ModelSpec.parse(mid)
        t = ctx.table(mid, 0)
        r, g = spec.r, spec.genus
        res.expect(t[1, 1] == (r - 2) * (r - 3) // 2 - 6 * g, f"{mid}: kappa_11 = {t[1, 1]}")
        res.expect(t[r - 2, 2] == 2 * g * (r + 1), f"{mid}: kappa_(r-2,2) = {t[r - 2, 2]}")
        res.expect(t[r - 1, 2] == 2 * g, f"{mid}: kappa_(r-1,2) = {t[r - 1, 2]}")
    return res


def gate_remark45(ctx: SuiteContext) -> GateResult:
    """Expected vanishing of ``K_{p,1}`` and ``K_{p,2}`` on the elliptic tables, with sharpness."""
    res = GateResult("remark45")
    for d in (9, 10):
        mid = f"elliptic:d={d}"
        t = ctx.table(mid, 0)
        r = d - 1
        b1 = (d - 3) // 2
        res.expect(all(t[p, 1] == 0 for p in range(b1, r)), f"{mid}: K_(p,1) != 0 for some p >= {b1}")
        res.expect(t[b1 - 1, 1] != 0, f"{mid}: K_(p,1) vanishing not sharp at p={b1 - 1}")
        b2 = (d - 7) // 3
        res.expect(all(t[p, 2] == 0 for p in range(b2 + 1)), f"{mid}: K_(p,2) != 0 for some p <= {b2}")
        res.expect(t[b2 + 1, 2] != 0, f"{mid}: K_(p,2) vanishing not sharp at p={b2 + 1}")
    return res


GATES: dict[str, Callable[[SuiteContext], GateResult]] = {
    "exactness": gate_exactness,
    "adjointness": gate_adjointness,
    "complex": gate_complex,
    "theorem1": gate_theorem1,
    "theorem2": gate_theorem2,
    "propagation": gate_propagation,
    "remark33": gate_remark33,
    "hilbert": gate_hilbert,
    "duality": gate_duality,
    "direct_vs_gamma": gate_direct_vs_gamma,
    "golden": gate_golden,
    "kappa": gate_kappa,
    "k11": gate_k11,
    "remark45": gate_remark45,
    "numerator": gate_numerator,
}


def run_gates(names: list[str] | None, ctx: SuiteContext | None = None) -> list[GateResult]:
    ctx = ctx or SuiteContext()
    out = []
    for name in names or list(GATES):
        if name not in GATES:
            raise KeyError(f"unknown gate {name!r}; available: {', '.join(GATES)}")
        t0 = time.perf_counter()
        r = GATES[name](ctx)
        log.info("gate %s: %s (%d checks, %.1fs)", name, "PASS" if r.passed else "FAIL", r.checked, time.perf_counter() - t0)
        out.append(r)
    return out
