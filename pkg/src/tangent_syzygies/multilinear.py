"""Multilinear algebra over the two-dimensional space U = <1, x>.

Bases are enumerated explicitly and every map is an exact ``SparseMatrix``
whose column ``j`` is the image of the ``j``-th domain basis vector. Symmetric
powers ``S^d U`` have basis ``x^0..x^d``, divided powers ``D^d U`` have basis
``x^(0)..x^(d)`` (dual to the monomials under ``<x^(a), x^b> = delta_ab``), and
wedge squares use the pairs ``x^i ^ x^j`` with ``j < i``.

The maps here are the Wahl map, the map ``tau`` attached to the double line,
the conic and double-line inclusions, the co-Wahl map ``Delta`` (for the
tangent and carpet variants), the Koszul pair ``delta``/``mult`` on ``S(V)``
with ``V = D^{p+2} U``, the composite ``gamma = delta o (id x Delta)`` whose
middle homology against ``mult`` is the Koszul module, its corestriction
``gamma'``, the fiberwise dual injectivity test and the regularity witness for
the kernel bundle ``K``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import cache, lru_cache
from math import comb

import numpy as np

from .errors import InvalidRange, ZeroFunctional
from .linalg import (
    DEFAULT_CONFIG,
    FieldSpec,
    LinalgConfig,
    SparseMatrix,
    homology_with_certificate,
    kron,
    span_reduce,
)
from .linalg import rank as _rank

# ---------------------------------------------------------------------------
# bases


@dataclass(frozen=True, eq=False)
class BasisSpace:
    """A vector space with an ordered basis of hashable labels."""

    kind: str
    params: tuple
    labels: tuple = dc_field(repr=False)
    parts: tuple = dc_field(default=(), repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BasisSpace) and (self.kind, self.params) == (other.kind, other.params)

    def __hash__(self) -> int:
        return hash((self.kind, self.params))

    def __str__(self) -> str:
        if self.kind in ("Tensor", "DirectSum"):
            sep = " x " if self.kind == "Tensor" else " + "
            return "(" + sep.join(str(s) for s in self.parts) + ")"
        return f"{self.kind}{self.params}"


@cache
def Sym(d: int) -> BasisSpace:
    """``S^d U`` with basis ``x^0..x^d`` (labels are exponents)."""
    return BasisSpace("Sym", (d,), tuple(range(d + 1)) if d >= 0 else ())


@cache
def Div(d: int) -> BasisSpace:
    """``D^d U`` with basis ``x^(0)..x^(d)``."""
    return BasisSpace("Div", (d,), tuple(range(d + 1)) if d >= 0 else ())


def _wedge_labels(m: int) -> tuple:
    return tuple((i, j) for i in range(m + 1) for j in range(i))


@cache
def Wedge2Sym(m: int) -> BasisSpace:
    """``^2 S^m U`` with basis ``x^i ^ x^j`` for ``0 <= j < i <= m``, ordered by ``(i, j)``."""
    return BasisSpace("Wedge2Sym", (m,), _wedge_labels(m))


@cache
def Wedge2Div(m: int) -> BasisSpace:
    return BasisSpace("Wedge2Div", (m,), _wedge_labels(m))


@cache
def SymOfDiv(q: int, n: int) -> BasisSpace:
    """``S^q(D^n U)``: monomials of degree ``q`` in ``x^(0)..x^(n)``.

    A label is the nondecreasing tuple of variable indices; labels are in
    lexicographic order.
    """
    labels = tuple(itertools.combinations_with_replacement(range(n + 1), q)) if q >= 0 else ()
    return BasisSpace("SymOfDiv", (q, n), labels)


@cache
def Tensor(*spaces: BasisSpace) -> BasisSpace:
    """Tensor product; the last factor varies fastest."""
    labels = tuple(itertools.product(*(s.labels for s in spaces)))
    return BasisSpace("Tensor", tuple((s.kind, s.params) for s in spaces), labels, spaces)


@cache
def DirectSum(*spaces: BasisSpace) -> BasisSpace:
    labels = tuple((k, lab) for k, s in enumerate(spaces) for lab in s.labels)
    return BasisSpace("DirectSum", tuple((s.kind, s.params) for s in spaces), labels, spaces)


def Coordinate(name: str, dim: int) -> BasisSpace:
    """A space known only through a chosen basis ``e_0..e_{dim-1}``."""
    return BasisSpace("Coordinate", (name, dim), tuple(range(dim)))


class MapVariant(enum.Enum):
    TANGENT = "tangent"  # the smooth conic Q
    CARPET = "carpet"  # the double line 2l

    @classmethod
    def parse(cls, text: str | MapVariant) -> MapVariant:
        if isinstance(text, MapVariant):
            return text
        return cls(text.lower())


def hermite_dims(n: int, d: int) -> tuple[int, int]:
    """``(dim ^n S^d U, dim S^{d-n+1} D^n U)``; Hermite reciprocity says these agree."""
    if not 1 <= n <= d + 1:
        raise InvalidRange(f"need 1 <= n <= d+1, got n={n}, d={d}")
    return comb(d + 1, n), comb(d - n + 1 + n, n)


def _matrix(codomain: BasisSpace, domain: BasisSpace, entries, field: FieldSpec) -> SparseMatrix:
    return SparseMatrix.from_entries(codomain.dim, domain.dim, entries, field)


# ---------------------------------------------------------------------------
# maps on U


def wahl_map(m: int, field: FieldSpec) -> SparseMatrix:
    """``^2 S^m U -> S^{2m-2} U``, ``x^i ^ x^j |-> (i-j) x^{i+j-1}``."""
    if m < 1:
        raise InvalidRange("wahl_map needs m >= 1")
    dom, cod = Wedge2Sym(m), Sym(2 * m - 2)
    ents = [(i + j - 1, c, i - j) for c, (i, j) in enumerate(dom.labels)]
    return _matrix(cod, dom, ents, field)


def _normalize_wedge(a: int, b: int, coeff: int):
    if a == b:
        return None
    if a < b:
        return (b, a), -coeff
    return (a, b), coeff


def _inclusion(d: int, middle: int, field: FieldSpec) -> SparseMatrix:
    dom, cod = Wedge2Sym(d), Wedge2Sym(d + 2)
    ents = []
    for c, (i, j) in enumerate(dom.labels):
        for a, b, k in ((i + 2, j, 1), (i + 1, j + 1, middle), (i, j + 2, 1)):
            t = _normalize_wedge(a, b, k)
            if t is not None:
                ents.append((cod.index(t[0]), c, t[1]))
    return _matrix(cod, dom, ents, field)


def conic_inclusion(d: int, field: FieldSpec) -> SparseMatrix:
    """``^2 S^d U -> ^2 S^{d+2} U``, ``x^i^x^j |-> x^{i+2}^x^j - 2 x^{i+1}^x^{j+1} + x^i^x^{j+2}``."""
    if d < 0:
        raise InvalidRange("conic_inclusion needs d >= 0")
    return _inclusion(d, -2, field)


def double_line_inclusion(d: int, field: FieldSpec) -> SparseMatrix:
    """As :func:`conic_inclusion` with ``+2`` in the middle term."""
    if d < 0:
        raise InvalidRange("double_line_inclusion needs d >= 0")
    return _inclusion(d, 2, field)


def tau_map(m: int, field: FieldSpec) -> SparseMatrix:
    """``^2 S^m U -> S^{2m-2} U + S^{2m} U``.

    ``x^i ^ x^j`` goes to ``((-1)^i (i-j) x^{i+j-1}, 0)`` when ``i = j mod 2``
    and to ``(0, (-1)^i x^{i+j})`` otherwise.
    """
    if m < 1:
        raise InvalidRange("tau_map needs m >= 1")
    dom = Wedge2Sym(m)
    cod = DirectSum(Sym(2 * m - 2), Sym(2 * m))
    off = 2 * m - 1
    ents = []
    for c, (i, j) in enumerate(dom.labels):
        sign = -1 if i % 2 else 1
        if (i - j) % 2 == 0:
            ents.append((i + j - 1, c, sign * (i - j)))
        else:
            ents.append((off + i + j, c, sign))
    return _matrix(cod, dom, ents, field)


def dual_map(variant: MapVariant | str, m: int, field: FieldSpec) -> SparseMatrix:
    """The map ``Delta^vee`` factors through: the Wahl map (tangent) or ``tau`` (carpet)."""
    variant = MapVariant.parse(variant)
    return wahl_map(m, field) if variant is MapVariant.TANGENT else tau_map(m, field)


# ---------------------------------------------------------------------------
# Delta and the Koszul pair


@dataclass(frozen=True)
class CoWahl:
    """``Delta: W -> ^2 V`` together with its spaces."""

    matrix: SparseMatrix
    W: BasisSpace
    V: BasisSpace


def co_wahl(p: int, variant: MapVariant | str, field: FieldSpec) -> CoWahl:
    if p < 0:
        raise InvalidRange("co_wahl_delta needs p >= 0")
    variant = MapVariant.parse(variant)
    V = Div(p + 2)
    if variant is MapVariant.TANGENT:
        W = Div(2 * p + 2)
        return CoWahl(wahl_map(p + 2, field).T, W, V)
    # W is the dual of im(tau); in an echelon basis of im(tau) with pivot rows P,
    # the coordinates of tau(v) are tau(v)[P], so Delta = tau[P, :]^T.
    tau = tau_map(p + 2, field)
    sb = span_reduce(tau.T.to_dense(), field, ambient_dim=tau.nrows)
    corestricted = tau.submatrix(sb.pivots, list(range(tau.ncols)))
    W = Coordinate(f"dual of im tau_{p + 2}", sb.dim)
    return CoWahl(corestricted.T, W, V)


def co_wahl_delta(p: int, variant: MapVariant | str, field: FieldSpec) -> SparseMatrix:
    """Matrix of ``Delta_{p+2}: W -> ^2 V`` with ``V = D^{p+2} U``."""
    return co_wahl(p, variant, field).matrix


@lru_cache(maxsize=256)
def _sym_mult_entries(k: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    dom_f = SymOfDiv(k, n)
    cod = SymOfDiv(k + 1, n)
    rows, cols = [], []
    c = 0
    for f in dom_f.labels:
        for i in range(n + 1):
            rows.append(cod.index(tuple(sorted(f + (i,)))))
            cols.append(c)
            c += 1
    return np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)


def sym_mult(k: int, V: BasisSpace, field: FieldSpec) -> SparseMatrix:
    """Multiplication ``S^k V (x) V -> S^{k+1} V`` on the formal symmetric algebra."""
    n = V.dim - 1
    rows, cols = _sym_mult_entries(k, n)
    return SparseMatrix(comb(k + 1 + n, n), comb(k + n, n) * (n + 1), rows, cols, np.ones_like(rows), field)


def koszul_delta(q: int, V: BasisSpace, field: FieldSpec) -> SparseMatrix:
    """``S^q V (x) ^2 V -> S^{q+1} V (x) V``, ``f(x)(x^(i)^x^(j)) |-> f x^(i) (x) x^(j) - f x^(j) (x) x^(i)``."""
    n = V.dim - 1
    dom_f = SymOfDiv(q, n)
    wedge = Wedge2Div(n)
    cod_f = SymOfDiv(q + 1, n)
    nv = n + 1
    rows, cols, vals = [], [], []
    c = 0
    for f in dom_f.labels:
        for i, j in wedge.labels:
            rows.append(cod_f.index(tuple(sorted(f + (i,)))) * nv + j)
            cols.append(c)
            vals.append(1)
            rows.append(cod_f.index(tuple(sorted(f + (j,)))) * nv + i)
            cols.append(c)
            vals.append(-1)
            c += 1
    return SparseMatrix(cod_f.dim * nv, dom_f.dim * wedge.dim, rows, cols, vals, field)


def koszul_pair(q: int, V: BasisSpace, field: FieldSpec) -> tuple[SparseMatrix, SparseMatrix]:
    """``(delta, mult)`` for ``S^q V (x) ^2 V -> S^{q+1} V (x) V -> S^{q+2} V``."""
    if q < 0:
        raise InvalidRange("koszul_pair needs q >= 0")
    return koszul_delta(q, V, field), sym_mult(q + 1, V, field)


def _gamma_k(p: int, k: int, variant, field: FieldSpec) -> tuple[SparseMatrix, CoWahl]:
    cw = co_wahl(p, variant, field)
    sq = SymOfDiv(k, cw.V.dim - 1)
    lifted = kron(SparseMatrix.identity(sq.dim, field), cw.matrix)
    return koszul_delta(k, cw.V, field) @ lifted, cw


def gamma(g: int, p: int, variant: MapVariant | str, field: FieldSpec) -> SparseMatrix:
    """``gamma_{p+2}: S^q V (x) W -> S^{q+1} V (x) V`` with ``q = g - p - 3``."""
    if not 0 <= p <= g - 3:
        raise InvalidRange(f"gamma needs 0 <= p <= g-3, got g={g}, p={p}")
    return _gamma_k(p, g - p - 3, variant, field)[0]


def koszul_module_dim_with_certificate(
    g: int, p: int, variant: MapVariant | str, field: FieldSpec, config: LinalgConfig | None = None
) -> tuple[int, str]:
    if not 0 <= p <= g - 3:
        raise InvalidRange(f"koszul_module_dim needs 0 <= p <= g-3, got g={g}, p={p}")
    q = g - p - 3
    gam = gamma(g, p, variant, field)
    mult = sym_mult(q + 1, Div(p + 2), field)
    return homology_with_certificate(gam, mult, config or DEFAULT_CONFIG)


def koszul_module_dim(g: int, p: int, variant: MapVariant | str, field: FieldSpec, config: LinalgConfig | None = None) -> int:
    """Dimension of the Koszul module ``W_q(V, W)``, ``q = g - p - 3``."""
    return koszul_module_dim_with_certificate(g, p, variant, field, config)[0]


def kernel_basis_rows(k: int, V: BasisSpace) -> list[int]:
    """Rows of ``S^{k+1} V (x) V`` giving coordinates on ``ker(mult)``.

    Each monomial ``M`` of ``S^{k+2} V`` has a fiber of basis vectors
    ``f (x) x^(i)`` with ``f x^(i) = M``, all sent to ``M`` with coefficient 1.
    The kernel is spanned by ``e_a - e_last`` over the fibers, so a kernel
    vector is determined by its entries away from the last slot of each fiber.
    """
    rows, _ = _sym_mult_entries(k + 1, V.dim - 1)
    last = {}
    for pos, target in enumerate(rows.tolist()):
        last[target] = pos
    drop = set(last.values())
    return [pos for pos in range(rows.size) if pos not in drop]


def gamma_prime(p: int, k: int, variant: MapVariant | str, field: FieldSpec) -> SparseMatrix:
    """``gamma'_k: W (x) S^k V -> ker(S^{k+1} V (x) V -> S^{k+2} V)``."""
    if p < 0 or k < 0:
        raise InvalidRange("gamma_prime needs p, k >= 0")
    gk, cw = _gamma_k(p, k, variant, field)
    nsq = comb(k + cw.V.dim - 1, k)
    nw = cw.W.dim
    # reorder the domain from S^k V (x) W to W (x) S^k V
    perm = [f * nw + w for w in range(nw) for f in range(nsq)]
    return gk.submatrix(kernel_basis_rows(k, cw.V), perm)


def is_surjective(m: SparseMatrix, config: LinalgConfig | None = None) -> bool:
    return _rank(m, config) == m.nrows


# ---------------------------------------------------------------------------
# fiberwise test and kernel-bundle regularity


def _poly_degree(h) -> int:
    nz = [i for i, c in enumerate(h) if c != 0]
    if not nz:
        raise ZeroFunctional("h must be nonzero")
    return nz[-1]


def fiber_vectors(p: int, h, field: FieldSpec) -> SparseMatrix:
    """The vectors ``v_j = x^j ^ h`` (``j != deg h``) in ``^2 S^{p+2} U``, as columns."""
    m = p + 2
    h = [field.reduce(int(c)) for c in h]
    if len(h) != m + 1:
        raise ValueError(f"h must have {m + 1} coefficients")
    d = _poly_degree(h)
    space = Wedge2Sym(m)
    ents = []
    col = 0
    for j in range(m + 1):
        if j == d:
            continue
        for i, b in enumerate(h):
            if b == 0 or i == j:
                continue
            lab, s = _normalize_wedge(j, i, int(b))
            ents.append((space.index(lab), col, s))
        col += 1
    return SparseMatrix.from_entries(space.dim, m, ents, field)


def fiber_dual_injectivity(p: int, h, variant: MapVariant | str, field: FieldSpec) -> bool:
    """Whether the images of ``x^j ^ h`` (``j != deg h``) under ``Delta^vee`` are independent."""
    vs = fiber_vectors(p, h, field)
    img = dual_map(variant, p + 2, field) @ vs
    return _rank(img) == vs.ncols


def sample_functionals(p: int, field: FieldSpec, random_count: int = 0, seed: int = 0) -> list[list[int]]:
    """Monomials ``x^d``, binomials ``x^d +- x^e`` and seeded random elements of ``S^{p+2} U``."""
    m = p + 2
    out = []
    for d in range(m + 1):
        h = [0] * (m + 1)
        h[d] = 1
        out.append(h)
    for e, d in itertools.combinations(range(m + 1), 2):
        for s in (1, -1):
            h = [0] * (m + 1)
            h[d] = 1
            h[e] = s
            out.append(h)
    rng = np.random.default_rng(seed)
    bound = field.characteristic or 1000
    while random_count > 0:
        h = rng.integers(-bound + 1, bound, size=m + 1).tolist()
        if any(field.reduce(c) != 0 for c in h):
            out.append(h)
            random_count -= 1
    return out


def line_bundle_h(i: int, n: int, t: int) -> int:
    """``h^i(P^n, O(t))`` (Bott's formula; characteristic free)."""
    if i == 0:
        return comb(t + n, n) if t >= 0 else 0
    if i == n:
        return comb(-t - 1, n) if t <= -n - 1 else 0
    return 0


def kernel_regularity(
    p: int, variant: MapVariant | str, field: FieldSpec, config: LinalgConfig | None = None
) -> tuple[bool, dict[tuple[int, int], int]]:
    """Check that ``K = ker(W (x) O -> M_V(1))`` on ``P^{p+2}`` is ``(p+1)``-regular.

    Returns ``(regular, witness)`` with ``witness[(i, m)]`` bounding
    ``h^i(K(m))`` for ``m = p + 1 - i``, ``1 <= i <= p + 2``:

    * ``h^1(K(p)) = dim coker gamma'_p`` (``H^1(W (x) O(p)) = 0``);
    * for ``i >= 2``, ``h^i(K(m)) <= h^{i-1}(M_V(m+1)) + h^i(W (x) O(m))``, where
      ``h^1(M_V(t))`` is the cokernel of ``V (x) S^t V -> S^{t+1} V`` (a rank
      computation) and ``h^j(M_V(t))`` for ``j >= 2`` is bounded by line-bundle
      cohomology from ``0 -> M_V -> V (x) O -> O(1) -> 0``.

    A zero bound is an exact zero, so ``regular`` is exact.
    """
    variant = MapVariant.parse(variant)
    n = p + 2
    V = Div(n)
    cw = co_wahl(p, variant, field)
    witness: dict[tuple[int, int], int] = {}

    gp = gamma_prime(p, p, variant, field)
    witness[(1, p)] = gp.nrows - _rank(gp, config)

    for i in range(2, n + 1):
        m = p + 1 - i
        t = m + 1
        j = i - 1
        if j == 1:
            if t >= 0:
                mult = sym_mult(t, V, field)
                h_mv = mult.nrows - _rank(mult, config)
            else:
                h_mv = line_bundle_h(0, n, t + 1)
            h_mv += V.dim * line_bundle_h(1, n, t)
        else:
            h_mv = line_bundle_h(j - 1, n, t + 1) + V.dim * line_bundle_h(j, n, t)
        witness[(i, m)] = h_mv + cw.W.dim * line_bundle_h(i, n, m)
    return all(v == 0 for v in witness.values()), witness
