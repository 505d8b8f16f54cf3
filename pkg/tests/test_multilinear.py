"""Multilinear maps on ``U``, ``Delta``, the Koszul pair, ``gamma`` and ``gamma'``.

Oracle for the maps on ``^2 S^m U``: identify ``x^i ^ x^j`` with the
antisymmetric polynomial ``F = x^i y^j - x^j y^i``. Then

* the Wahl map is ``dF/dx`` restricted to ``y = x``;
* the conic / double-line inclusions multiply ``F`` by ``(x - y)^2`` / ``(x + y)^2``;
* ``tau(F) = (F_x(x,-x) - 1/2 d/dx F(x,-x), -1/2 F(x,-x))``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tangent_syzygies.errors import InvalidRange, ZeroFunctional
from tangent_syzygies.linalg import QQ, FieldSpec, rank
from tangent_syzygies.multilinear import (
    Div,
    MapVariant,
    Sym,
    SymOfDiv,
    Wedge2Div,
    Wedge2Sym,
    co_wahl_delta,
    conic_inclusion,
    double_line_inclusion,
    fiber_dual_injectivity,
    gamma,
    gamma_prime,
    hermite_dims,
    is_surjective,
    kernel_regularity,
    koszul_module_dim,
    koszul_pair,
    line_bundle_h,
    sample_functionals,
    sym_mult,
    tau_map,
    wahl_map,
)

FIELDS = [0, 3, 5, 7, 11, 32003]
ODD = [0, 3, 5, 7, 11, 32003]


# ---------------------------------------------------------------------------
# bivariate oracle


def wedge_poly(i: int, j: int) -> dict:
    return {(i, j): Fraction(1), (j, i): Fraction(-1)}


def poly_mul(F: dict, G: dict) -> dict:
    out: dict = {}
    for (a, b), c in F.items():
        for (e, f), d in G.items():
            out[(a + e, b + f)] = out.get((a + e, b + f), 0) + c * d
    return {k: v for k, v in out.items() if v}


def d_dx(F: dict) -> dict:
    return {(a - 1, b): c * a for (a, b), c in F.items() if a}


def restrict(F: dict, sign: int) -> dict:
    """``F(x, sign * x)`` as ``{degree: coeff}``."""
    out: dict = {}
    for (a, b), c in F.items():
        out[a + b] = out.get(a + b, 0) + c * sign**b
    return {k: v for k, v in out.items() if v}


def reduce(c: Fraction, p: int):
    if not p:
        return c
    return c.numerator * pow(c.denominator, -1, p) % p


def as_matrix(columns: list[dict], nrows: int, p: int) -> np.ndarray:
    a = np.zeros((nrows, len(columns)), dtype=object)
    for k, col in enumerate(columns):
        for r, c in col.items():
            a[r, k] = reduce(Fraction(c), p)
    return a


def oracle_wahl(m: int, p: int) -> np.ndarray:
    cols = [restrict(d_dx(wedge_poly(i, j)), 1) for i, j in Wedge2Sym(m).labels]
    return as_matrix(cols, 2 * m - 1, p)


def oracle_inclusion(d: int, sign: int, p: int) -> np.ndarray:
    sq = {(2, 0): Fraction(1), (1, 1): Fraction(-2 * sign), (0, 2): Fraction(1)}
    target = Wedge2Sym(d + 2)
    cols = []
    for i, j in Wedge2Sym(d).labels:
        G = poly_mul(wedge_poly(i, j), sq)
        cols.append({target.index((a, b)): c for (a, b), c in G.items() if a > b})
    return as_matrix(cols, target.dim, p)


def oracle_tau(m: int, p: int) -> np.ndarray:
    cols = []
    for i, j in Wedge2Sym(m).labels:
        F = wedge_poly(i, j)
        on_anti = restrict(F, -1)
        first = restrict(d_dx(F), -1)
        for deg, c in on_anti.items():
            if deg:
                first[deg - 1] = first.get(deg - 1, 0) - Fraction(deg, 2) * c
        col = {k: v for k, v in first.items() if v}
        col.update({2 * m - 1 + k: -v / 2 for k, v in on_anti.items()})
        cols.append(col)
    return as_matrix(cols, 4 * m, p)


def dense(m) -> np.ndarray:
    p = m.field.characteristic
    a = m.to_dense()
    return np.vectorize(lambda x: reduce(Fraction(x), p), otypes=[object])(a) if a.size else a.astype(object)


@pytest.mark.parametrize("p", FIELDS)
@pytest.mark.parametrize("m", range(1, 8))
def test_wahl_map_oracle(m, p):
    assert np.array_equal(dense(wahl_map(m, FieldSpec(p))), oracle_wahl(m, p))


@pytest.mark.parametrize("p", FIELDS)
@pytest.mark.parametrize("d", range(7))
def test_inclusions_oracle(d, p):
    f = FieldSpec(p)
    assert np.array_equal(dense(conic_inclusion(d, f)), oracle_inclusion(d, 1, p))
    assert np.array_equal(dense(double_line_inclusion(d, f)), oracle_inclusion(d, -1, p))


@pytest.mark.parametrize("p", ODD)
@pytest.mark.parametrize("m", range(1, 8))
def test_tau_oracle(m, p):
    assert np.array_equal(dense(tau_map(m, FieldSpec(p))), oracle_tau(m, p))


# ---------------------------------------------------------------------------
# documented examples


def col(m, space_dom, label):
    return m.to_dense()[:, space_dom.index(label)]


def test_hermite_dims():
    assert hermite_dims(2, 3) == (6, 6)
    for d in range(6):
        assert hermite_dims(1, d) == (d + 1, d + 1)
    assert hermite_dims(3, 6) == (35, 35)


@given(st.data())
def test_hermite_dims_binomial(data):
    d = data.draw(st.integers(0, 8))
    n = data.draw(st.integers(1, d + 1))
    a, b = hermite_dims(n, d)
    assert a == b == comb(d + 1, n)
    with pytest.raises(InvalidRange):
        hermite_dims(d + 2, d)


def test_wahl_examples():
    w = wahl_map(2, QQ)
    dom = Wedge2Sym(2)
    assert col(w, dom, (2, 0)).tolist() == [0, 2, 0]
    assert col(w, dom, (1, 0)).tolist() == [1, 0, 0]
    assert rank(wahl_map(2, FieldSpec(2))) == 2


def test_inclusion_examples():
    c = conic_inclusion(1, QQ).to_dense()[:, 0]
    tgt = Wedge2Sym(3)
    expect = np.zeros(tgt.dim, dtype=np.int64)
    expect[tgt.index((3, 0))] = 1
    expect[tgt.index((2, 1))] = -3
    assert np.array_equal(c, expect)
    dl = double_line_inclusion(1, QQ).to_dense()[:, 0]
    expect[tgt.index((2, 1))] = 1
    assert np.array_equal(dl, expect)
    assert conic_inclusion(0, QQ).shape == (Wedge2Sym(2).dim, 0)
    for d in range(6):
        assert conic_inclusion(d, FieldSpec(2)) == double_line_inclusion(d, FieldSpec(2))


def test_tau_examples():
    t = tau_map(2, QQ)
    dom = Wedge2Sym(2)
    # codomain: S^2 U (3 coords) then S^4 U (5 coords)
    assert col(t, dom, (2, 0)).tolist() == [0, 2, 0, 0, 0, 0, 0, 0]
    assert col(t, dom, (1, 0)).tolist() == [0, 0, 0, 0, -1, 0, 0, 0]
    assert col(t, dom, (2, 1)).tolist() == [0, 0, 0, 0, 0, 0, 1, 0]


@pytest.mark.parametrize("p", FIELDS)
@pytest.mark.parametrize("d", range(9))
def test_exactness(d, p):
    f = FieldSpec(p)
    if p == 0:
        assert (wahl_map(d + 2, f) @ conic_inclusion(d, f)).is_zero()
        assert rank(conic_inclusion(d, f)) + rank(wahl_map(d + 2, f)) == Wedge2Sym(d + 2).dim
    assert (tau_map(d + 2, f) @ double_line_inclusion(d, f)).is_zero()
    assert rank(tau_map(d + 2, f)) == 2 * d + 3


def test_delta_examples():
    d = co_wahl_delta(0, MapVariant.TANGENT, QQ).to_dense()
    W, wv = Div(2), Wedge2Div(2)
    assert d[wv.index((2, 0)), W.index(1)] == 2
    assert np.count_nonzero(d[:, W.index(1)]) == 1
    assert d[wv.index((1, 0)), W.index(0)] == 1
    assert np.count_nonzero(d[:, W.index(0)]) == 1


@pytest.mark.parametrize("p", range(7))
def test_delta_rank(p):
    for v in MapVariant:
        assert rank(co_wahl_delta(p, v, QQ)) == 2 * p + 3
    assert comb(p + 3, 2) - comb(p + 1, 2) == 2 * p + 3


@pytest.mark.parametrize("c", [0, 2, 3, 5])
@pytest.mark.parametrize("p", range(7))
def test_adjointness(p, c):
    f = FieldSpec(c)
    delta = co_wahl_delta(p, MapVariant.TANGENT, f).to_dense()
    mu = wahl_map(p + 2, f).to_dense()
    W, wv, wu, sym = Div(2 * p + 2), Wedge2Div(p + 2), Wedge2Sym(p + 2), Sym(2 * p + 2)
    for w in W.labels:
        for v in wu.labels:
            assert delta[wv.index(v), W.index(w)] == mu[sym.index(w), wu.index(v)]


def test_koszul_pair_examples():
    V = Div(2)
    delta, mult = koszul_pair(0, V, QQ)
    c = delta.to_dense()[:, Wedge2Div(2).index((1, 0))]
    # S^1 V (x) V: index f * 3 + j with f the S^1 label of x^(f)
    expect = np.zeros(9, dtype=np.int64)
    expect[1 * 3 + 0] = 1
    expect[0 * 3 + 1] = -1
    assert np.array_equal(c, expect)
    assert (mult @ delta).is_zero()
    m = sym_mult(1, V, QQ).to_dense()
    assert m[SymOfDiv(2, 2).index((0, 1)), 0 * 3 + 1] == 1
    assert rank(sym_mult(2, V, QQ)) == SymOfDiv(3, 2).dim == 10


@pytest.mark.parametrize("c", [0, 2, 3])
@given(q=st.integers(0, 3), n=st.integers(1, 4))
def test_koszul_pair_exact(c, q, n):
    # S^q V (x) ^2 V -> S^{q+1} V (x) V -> S^{q+2} V is exact in the middle over any field
    V = Div(n)
    f = FieldSpec(c)
    delta, mult = koszul_pair(q, V, f)
    assert (mult @ delta).is_zero()
    assert rank(delta) + rank(mult) == SymOfDiv(q + 1, n).dim * V.dim
    assert rank(mult) == SymOfDiv(q + 2, n).dim


def test_gamma_examples():
    assert rank(gamma(3, 0, MapVariant.TANGENT, FieldSpec(5))) == 3
    assert rank(gamma(3, 0, MapVariant.TANGENT, FieldSpec(2))) == 2
    assert gamma(3, 0, MapVariant.TANGENT, QQ).shape == (9, 3)
    with pytest.raises(InvalidRange):
        gamma(3, 1, MapVariant.TANGENT, QQ)


@pytest.mark.parametrize("c", [0, 2, 3, 7])
@pytest.mark.parametrize("g", range(3, 9))
def test_mult_gamma_zero(g, c):
    f = FieldSpec(c)
    for v in MapVariant:
        for p in range(g - 2):
            assert (sym_mult(g - p - 2, Div(p + 2), f) @ gamma(g, p, v, f)).is_zero()


def test_koszul_module_examples():
    assert koszul_module_dim(3, 0, MapVariant.TANGENT, QQ) == 0
    assert koszul_module_dim(3, 0, MapVariant.TANGENT, FieldSpec(2)) == 1
    assert koszul_module_dim(7, 2, MapVariant.CARPET, QQ) == 0


def test_gamma_prime_examples():
    for g, p in [(5, 0), (6, 1), (7, 2)]:
        q = g - p - 3
        assert rank(gamma_prime(p, q, MapVariant.TANGENT, QQ)) == rank(gamma(g, p, MapVariant.TANGENT, QQ))
    assert is_surjective(gamma_prime(1, 1, MapVariant.TANGENT, QQ))
    assert not is_surjective(gamma_prime(1, 1, MapVariant.TANGENT, FieldSpec(2)))


def test_gamma_prime_codomain_is_kernel_dim():
    # rows of gamma' = dim ker(mult) = dim S^{k+1}V (x) V - dim S^{k+2}V
    for p, k in [(0, 0), (1, 2), (2, 1)]:
        n = p + 2
        expect = SymOfDiv(k + 1, n).dim * (n + 1) - SymOfDiv(k + 2, n).dim
        assert gamma_prime(p, k, MapVariant.TANGENT, QQ).nrows == expect


def test_fiber_examples():
    assert not fiber_dual_injectivity(1, [1, 0, 0, 0], MapVariant.TANGENT, FieldSpec(3))
    assert fiber_dual_injectivity(1, [0, 0, 0, 1], MapVariant.TANGENT, QQ)
    assert fiber_dual_injectivity(2, [0, 1, 0, 1, 0], MapVariant.CARPET, QQ)
    with pytest.raises(ZeroFunctional):
        fiber_dual_injectivity(1, [0, 0, 0, 0], MapVariant.TANGENT, QQ)


@pytest.mark.parametrize("p", range(5))
def test_fiber_h1_fails_iff_small_char(p):
    one = [1] + [0] * (p + 2)
    for c in (2, 3, 5, 7):
        inj = fiber_dual_injectivity(p, one, MapVariant.TANGENT, FieldSpec(c))
        if c <= p + 2:
            assert not inj
    assert fiber_dual_injectivity(p, one, MapVariant.TANGENT, QQ)


def test_kernel_regularity_examples():
    assert kernel_regularity(1, MapVariant.TANGENT, QQ)[0]
    assert not kernel_regularity(1, MapVariant.TANGENT, FieldSpec(2))[0]
    for v in MapVariant:
        for c in (0, 3, 5, 7):
            regular, witness = kernel_regularity(0, v, FieldSpec(c))
            assert regular
            assert all(x == 0 for x in witness.values())


def test_sample_functionals_deterministic():
    f = FieldSpec(7)
    a = sample_functionals(2, f, random_count=5, seed=3)
    b = sample_functionals(2, f, random_count=5, seed=3)
    assert a == b
    assert len(a) == 5 + 5 + 2 * comb(5, 2)
    assert all(any(x % 7 for x in h) for h in a)


@given(st.integers(1, 4), st.integers(-8, 8))
def test_line_bundle_serre_duality(n, t):
    assert line_bundle_h(0, n, t) == line_bundle_h(n, n, -n - 1 - t)
    if t >= 0:
        assert line_bundle_h(0, n, t) == comb(n + t, n)
    for i in range(1, n):
        assert line_bundle_h(i, n, t) == 0


def test_variant_parse():
    assert MapVariant.parse("tangent") is MapVariant.TANGENT
    assert MapVariant.parse(MapVariant.CARPET) is MapVariant.CARPET
    with pytest.raises(ValueError):
        MapVariant.parse("nonsense")
