"""Section-ring models.

Oracle: ``dim R_m`` is the rank of the evaluation matrix of all degree-``m``
monomials in the generators at random points of the surface. Points, sections
and derivatives are written out here from the curve equations, independently
of the model code.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from sympy.ntheory import sqrt_mod

from tangent_syzygies.errors import (
    CharTooSmall,
    CharTwoUnsupported,
    HilbertMismatch,
    UnsupportedDegree,
)
from tangent_syzygies.linalg import FieldSpec, span_reduce
from tangent_syzygies.models.base import associativity_check, hilbert_check
from tangent_syzygies.models.curves import elliptic_tangent_model, genus2_tangent_model
from tangent_syzygies.models.rnc import rnc_tangent_model

P = 32003


def gauss_rank(a: np.ndarray, p: int) -> int:
    a = a.copy() % p
    r = 0
    for c in range(a.shape[1]):
        piv = np.flatnonzero(a[r:, c])
        if piv.size == 0:
            continue
        k = r + piv[0]
        a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        r += 1
        if r == a.shape[0]:
            break
    return r


def hilbert_by_evaluation(values: np.ndarray, m: int, p: int) -> int:
    """``values[k, i]`` = generator ``i`` at point ``k``."""
    n = values.shape[1]
    cols = []
    for mono in itertools.combinations_with_replacement(range(n), m):
        v = np.ones(values.shape[0], dtype=np.int64)
        for i in mono:
            v = v * values[:, i] % p
        cols.append(v)
    return gauss_rank(np.stack(cols, axis=1), p)


def rnc_points(g: int, npts: int, rng) -> np.ndarray:
    out = []
    for _ in range(npts):
        s, t = (int(x) for x in rng.integers(1, P, size=2))
        out.append([(pow(s, i, P) + i * t * pow(s, i - 1, P)) % P if i else 1 for i in range(g + 1)])
    return np.array(out, dtype=np.int64)


def elliptic_points(d: int, npts: int, rng) -> np.ndarray:
    exps = sorted(((i, j) for j in (0, 1) for i in range((d - 3 * j) // 2 + 1)), key=lambda e: 2 * e[0] + 3 * e[1])
    out = []
    while len(out) < npts:
        x = int(rng.integers(2, P))
        roots = sqrt_mod((x**3 - x) % P, P, all_roots=True)
        if not roots:
            continue
        y = roots[0]
        u = int(rng.integers(1, P))
        row = []
        for i, j in exps:
            f = pow(x, i, P) * pow(y, j, P)
            fx = i * pow(x, i - 1, P) * pow(y, j, P) if i else 0
            fy = j * pow(x, i, P) if j else 0
            df = 2 * y * fx + (3 * x * x - 1) * fy
            row.append((f + u * df) % P)
        out.append(row)
    return np.array(out, dtype=np.int64)


def genus2_points(npts: int, rng) -> np.ndarray:
    exps = [(a, b) for b in range(3) for a in range(4)]
    out = []
    while len(out) < npts:
        t = int(rng.integers(2, P))
        den = (t**3 + 1) % P
        if den == 0:
            continue
        rhs = (t - t * t) * pow(den, -1, P) % P
        roots = sqrt_mod(rhs, P, all_roots=True)
        if not roots:
            continue
        s = roots[0]
        Ft = (3 * s * s * t * t + 2 * t - 1) % P
        Fs = 2 * s * (t**3 + 1) % P
        u = int(rng.integers(1, P))
        row = []
        for a, b in exps:
            f = pow(s, a, P) * pow(t, b, P)
            fs = a * pow(s, a - 1, P) * pow(t, b, P) if a else 0
            ft = b * pow(s, a, P) * pow(t, b - 1, P) if b else 0
            row.append((f + u * (Ft * fs - Fs * ft)) % P)
        out.append(row)
    return np.array(out, dtype=np.int64)


# ---------------------------------------------------------------------------


def test_rnc_generators_and_span():
    m = rnc_tangent_model(3, FieldSpec(P))
    # (s-exponent, t-exponent, -, coeff)
    assert m.gens == [[(0, 0, 0, 1)], [(1, 0, 0, 1), (0, 1, 0, 1)], [(2, 0, 0, 1), (1, 1, 0, 2)], [(3, 0, 0, 1), (2, 1, 0, 3)]]
    padded = np.zeros((4, 4 * 2), dtype=np.int64)
    for k, gen in enumerate(m.gens):
        for a, b, _, c in gen:
            padded[k, a * 2 + b] = c
    assert span_reduce(padded, FieldSpec(P)).dim == 4
    assert m.piece_dim(1) == 4


@pytest.mark.parametrize("g", [3, 4, 5, 9])
def test_rnc_hilbert(g):
    m = rnc_tangent_model(g, FieldSpec(P))
    assert hilbert_check(m, 4)
    assert [m.piece_dim(k) for k in range(1, 5)] == [(g - 1) * k * k + 2 for k in range(1, 5)]
    if g == 9:
        assert [m.piece_dim(k) for k in range(1, 5)] == [10, 34, 74, 130]


@pytest.mark.parametrize("g", [3, 5, 6])
def test_rnc_hilbert_oracle(g):
    rng = np.random.default_rng(g)
    m = rnc_tangent_model(g, FieldSpec(P))
    vals = rnc_points(g, 200, rng)
    for k in (1, 2, 3):
        assert m.piece_dim(k) == hilbert_by_evaluation(vals, k, P)


@pytest.mark.parametrize("c", [3, 5, 7])
def test_rnc_small_char(c):
    assert hilbert_check(rnc_tangent_model(5, FieldSpec(c)), 4)


def test_elliptic_hilbert():
    m = elliptic_tangent_model(9, FieldSpec(P))
    assert [m.piece_dim(k) for k in range(1, 5)] == [9, 36, 81, 144]
    assert m.r == 8


@pytest.mark.parametrize("d", [7, 9, 10])
def test_elliptic_hilbert_oracle(d):
    rng = np.random.default_rng(d)
    m = elliptic_tangent_model(d, FieldSpec(P))
    vals = elliptic_points(d, 260, rng)
    for k in (1, 2, 3):
        assert m.piece_dim(k) == hilbert_by_evaluation(vals, k, P) == d * k * k


def test_genus2_hilbert():
    m = genus2_tangent_model(FieldSpec(P))
    assert [m.piece_dim(k) for k in range(1, 5)] == [12, 54, 124, 222]
    assert m.r == 11


def test_genus2_hilbert_oracle():
    rng = np.random.default_rng(2)
    m = genus2_tangent_model(FieldSpec(P))
    vals = genus2_points(200, rng)
    for k in (1, 2):
        assert m.piece_dim(k) == hilbert_by_evaluation(vals, k, P)


@pytest.mark.parametrize(
    "build",
    [lambda f: rnc_tangent_model(5, f), lambda f: elliptic_tangent_model(9, f), lambda f: genus2_tangent_model(f)],
)
def test_associativity(build):
    assert associativity_check(build(FieldSpec(P)), 100, seed=0)


def test_hilbert_mismatch_detected():
    m = rnc_tangent_model(4, FieldSpec(P))
    m.expected_hilbert = lambda k: 999
    with pytest.raises(HilbertMismatch) as err:
        hilbert_check(m, 2)
    assert err.value.degree == 1 and err.value.found == 5


def test_model_preconditions():
    with pytest.raises(CharTwoUnsupported):
        rnc_tangent_model(3, FieldSpec(2))
    with pytest.raises(UnsupportedDegree):
        elliptic_tangent_model(6, FieldSpec(P))
    with pytest.raises(CharTooSmall):
        elliptic_tangent_model(9, FieldSpec(7))
    with pytest.raises(CharTooSmall):
        genus2_tangent_model(FieldSpec(13))


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("SYZYGY_CACHE_DIR", str(tmp_path))
    a = elliptic_tangent_model(9, FieldSpec(P))
    dims = [a.piece_dim(k) for k in range(1, 4)]
    assert list(tmp_path.iterdir())
    b = elliptic_tangent_model(9, FieldSpec(P))
    assert [b.piece_dim(k) for k in range(1, 4)] == dims
    for i in range(a.nvars):
        assert np.array_equal(a.mult_by(i, 2), b.mult_by(i, 2))
