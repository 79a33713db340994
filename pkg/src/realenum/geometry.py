"""Linear subspaces of projective space and their Pluecker coordinates.

Pluecker coordinates are the maximal minors of a basis matrix, indexed by
column subsets in lexicographic order (``itertools.combinations``).  Integer
or rational bases are handled exactly; anything else goes through numpy in
complex double precision with relative tolerance ``RTOL``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polysys import MultiPoly

__all__ = [
    "RTOL",
    "ProjSubspace",
    "PluckerVector",
    "PluckerForm",
    "Chart",
    "column_subsets",
    "plucker",
    "exterior_power",
    "incidence_form",
    "meets_condition",
    "line_meets_condition",
    "chart_subspace",
    "chart_plucker",
    "four_planes",
    "FOUR_PLANE_IDEALS",
    "grassmann_plucker_residual",
]

RTOL = 1e-10


def column_subsets(m: int, r: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(m), r))


def _is_exact(a: np.ndarray) -> bool:
    if a.dtype.kind in "iub":
        return True
    if a.dtype == object:
        return all(isinstance(x, (int, Fraction)) for x in a.flat)
    return False


def _exact_det(rows: list[list]) -> Fraction | int:
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] / m[col][col]
            if f:
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return int(det) if det.denominator == 1 else det


def _exact_rank(rows: list[list]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def numeric_rank(a: np.ndarray, rtol: float = RTOL) -> int:
    s = np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def matrix_rank(a: np.ndarray, rtol: float = RTOL) -> int:
    a = np.asarray(a)
    if _is_exact(a):
        return _exact_rank(a.tolist())
    return numeric_rank(a, rtol)


@dataclass(frozen=True)
class ProjSubspace:
    """Row span of a full-rank r x m matrix; projective dimension r - 1."""

    basis: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.basis)
        if b.ndim != 2 or b.shape[0] < 1 or b.shape[0] > b.shape[1]:
            raise ValueError(f"basis must be r x m with 1 <= r <= m, got shape {b.shape}")
        if matrix_rank(b) != b.shape[0]:
            raise ValueError("basis is rank deficient")
        object.__setattr__(self, "basis", b)

    @property
    def r(self) -> int:
        return self.basis.shape[0]

    @property
    def m(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.r - 1

    @property
    def ambient_dim(self) -> int:
        return self.m - 1

    def is_exact(self) -> bool:
        return _is_exact(self.basis)

    def transform(self, g: np.ndarray) -> "ProjSubspace":
        """Image under the linear map x -> x @ g (row-vector convention)."""
        return ProjSubspace(self.basis @ np.asarray(g))

    def to_json(self) -> list:
        return matrix_to_json(self.basis)

    @classmethod
    def from_json(cls, rows) -> "ProjSubspace":
        return cls(matrix_from_json(rows))


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a)
    if a.dtype.kind in "iub":
        return a.tolist()
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        return [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return np.real(a).astype(float).tolist()


def matrix_from_json(rows) -> np.ndarray:
    if not rows:
        raise ValueError("empty matrix")
    first = rows[0][0]
    if isinstance(first, list):
        return np.array([[complex(re, im) for re, im in row] for row in rows])
    if all(isinstance(x, int) for row in rows for x in row):
        return np.array(rows, dtype=np.int64)
    return np.array(rows, dtype=float)


@dataclass(frozen=True)
class PluckerVector:
    coords: np.ndarray
    r: int
    m: int

    def __post_init__(self) -> None:
        if len(self.coords) != math.comb(self.m, self.r):
            raise ValueError("wrong number of Pluecker coordinates")

    def normalized(self) -> np.ndarray:
        c = np.asarray(self.coords, dtype=complex)
        k = int(np.argmax(np.abs(c)))
        return c / c[k]


def _minors(a: np.ndarray, r: int) -> np.ndarray:
    cols = column_subsets(a.shape[1], r)
    if _is_exact(a):
        rows = a.tolist()
        return np.array([_exact_det([[row[j] for j in J] for row in rows]) for J in cols], dtype=object)
    sub = np.stack([a[:, J] for J in cols])
    return np.linalg.det(sub.astype(complex))


def plucker(S: ProjSubspace) -> PluckerVector:
    return PluckerVector(_minors(S.basis, S.r), S.r, S.m)


def exterior_power(g: np.ndarray, r: int) -> np.ndarray:
    """Matrix of the r-th exterior power for row vectors: p(H g) = p(H) @ result."""
    g = np.asarray(g)
    subsets = column_subsets(g.shape[0], r)
    out = np.empty((len(subsets), len(subsets)), dtype=object if _is_exact(g) else complex)
    for a, I in enumerate(subsets):
        for b, J in enumerate(subsets):
            block = g[np.ix_(I, J)]
            out[a, b] = _exact_det(block.tolist()) if _is_exact(g) else np.linalg.det(block.astype(complex))
    return out


def grassmann_plucker_residual(p: PluckerVector) -> float:
    """Largest relative violation of the three-term Pluecker relations
    p_{Sij} p_{Skl} - p_{Sik} p_{Sjl} + p_{Sil} p_{Sjk} over all S, i<j<k<l."""
    index = {J: n for n, J in enumerate(column_subsets(p.m, p.r))}
    c = np.asarray(p.coords, dtype=complex)
    scale = np.max(np.abs(c)) ** 2
    worst = 0.0

    def q(S, a, b):
        if a in S or b in S or a == b:
            return 0.0
        key = tuple(sorted(S + (a, b)))
        sign = 1
        # sign of sorting (S..., a, b)
        seq = list(S) + [a, b]
        for x, y in itertools.combinations(range(len(seq)), 2):
            if seq[x] > seq[y]:
                sign = -sign
        return sign * c[index[key]]

    for S in itertools.combinations(range(p.m), p.r - 2):
        rest = [x for x in range(p.m) if x not in S]
        for i, j, k, l in itertools.combinations(rest, 4):
            v = q(S, i, j) * q(S, k, l) - q(S, i, k) * q(S, j, l) + q(S, i, l) * q(S, j, k)
            worst = max(worst, abs(v) / scale)
    return worst


@dataclass(frozen=True)
class PluckerForm:
    """Linear form on Pluecker coordinates of r-planes in m-space."""

    coeffs: np.ndarray
    r: int
    m: int

    def __call__(self, p: PluckerVector):
        if (p.r, p.m) != (self.r, self.m):
            raise ValueError("Pluecker vector has the wrong shape for this form")
        return sum(a * b for a, b in zip(self.coeffs, p.coords))

    def compose(self, polys: Sequence[MultiPoly]) -> MultiPoly:
        """Substitute polynomial Pluecker coordinates (e.g. from a chart)."""
        out = MultiPoly.constant(0, polys[0].nvars)
        for a, f in zip(self.coeffs, polys):
            if a != 0:
                out = out + f * (a if isinstance(a, (int, Fraction)) else complex(a))
        return out


def incidence_form(K: ProjSubspace, r: int) -> PluckerForm:
    """det([K; H]) as a linear form in the Pluecker coordinates of H.

    K has m - r rows; the form vanishes exactly when H meets K.
    """
    m = K.m
    if K.r + r != m:
        raise ValueError(f"K has {K.r} rows; need {m - r} for incidence with {r}-dimensional H")
    subsets = column_subsets(m, r)
    exact = K.is_exact()
    rowsum = sum(range(K.r + 1, m + 1))  # 1-based rows of H in the stacked matrix
    coeffs = []
    for J in subsets:
        Jc = [j for j in range(m) if j not in J]
        block = K.basis[:, Jc]
        d = _exact_det(block.tolist()) if exact else np.linalg.det(block.astype(complex))
        sign = -1 if (rowsum + sum(j + 1 for j in J)) % 2 else 1
        coeffs.append(sign * d)
    return PluckerForm(np.array(coeffs, dtype=object if exact else complex), r, m)


def meets_condition(K: ProjSubspace) -> PluckerForm:
    """Hyperplane section of G(2,5) of planes meeting the plane K in P^5."""
    if (K.r, K.m) != (3, 6):
        raise ValueError(f"expected a plane in P^5, got a {K.dim}-plane in P^{K.ambient_dim}")
    return incidence_form(K, 3)


def line_meets_condition(K: ProjSubspace) -> PluckerForm:
    """Linear condition on lines in P^3 to meet the line K."""
    if (K.r, K.m) != (2, 4):
        raise ValueError(f"expected a line in P^3, got a {K.dim}-plane in P^{K.ambient_dim}")
    return incidence_form(K, 2)


@dataclass(frozen=True)
class Chart:
    """Affine chart on G(r, m): identity in the pivot columns, ``free`` elsewhere."""

    pivots: tuple[int, ...]
    free: np.ndarray

    def __post_init__(self) -> None:
        f = np.asarray(self.free)
        piv = tuple(int(p) for p in self.pivots)
        if len(set(piv)) != len(piv):
            raise ValueError("pivot columns must be distinct")
        if f.ndim != 2 or f.shape[0] != len(piv):
            raise ValueError("free block must have one row per pivot")
        m = len(piv) + f.shape[1]
        if any(not 0 <= p < m for p in piv):
            raise ValueError("pivot column out of range")
        object.__setattr__(self, "pivots", piv)
        object.__setattr__(self, "free", f)

    @property
    def r(self) -> int:
        return len(self.pivots)

    @property
    def m(self) -> int:
        return self.r + self.free.shape[1]

    @property
    def others(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.m) if j not in self.pivots)

    @classmethod
    def standard(cls, r: int, m: int, free=None) -> "Chart":
        free = np.zeros((r, m - r), dtype=np.int64) if free is None else free
        return cls(tuple(range(r)), free)


def chart_subspace(c: Chart) -> ProjSubspace:
    dtype = c.free.dtype if c.free.dtype.kind in "iubfc" else object
    M = np.zeros((c.r, c.m), dtype=dtype)
    for i, p in enumerate(c.pivots):
        M[i, p] = 1
    M[:, list(c.others)] = c.free
    return ProjSubspace(M)


def _poly_det(m: list[list[MultiPoly]]) -> MultiPoly:
    n = len(m)
    out = MultiPoly.constant(0, m[0][0].nvars)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a, b in itertools.combinations(range(n), 2):
            if perm[a] > perm[b]:
                sign = -sign
        term = MultiPoly.constant(sign, out.nvars)
        for i in range(n):
            term = term * m[i][perm[i]]
        out = out + term
    return out


def chart_matrix(c: Chart) -> list[list[MultiPoly]]:
    """Symbolic r x m matrix; variable i*(m-r)+j is the free entry (i, j)."""
    nv = c.r * (c.m - c.r)
    zero, one = MultiPoly.constant(0, nv), MultiPoly.constant(1, nv)
    rows = [[zero] * c.m for _ in range(c.r)]
    for i, p in enumerate(c.pivots):
        rows[i][p] = one
    for i in range(c.r):
        for j, col in enumerate(c.others):
            rows[i][col] = MultiPoly.variable(i * (c.m - c.r) + j, nv)
    return rows


def chart_plucker(c: Chart) -> list[MultiPoly]:
    """Pluecker coordinates of the chart as polynomials in its free entries."""
    M = chart_matrix(c)
    return [_poly_det([[row[j] for j in J] for row in M]) for J in column_subsets(c.m, c.r)]


# coordinate order x11, x12, x13, x22, x23, x33
FOUR_PLANE_IDEALS: tuple[frozenset[int], ...] = (
    frozenset({0, 3, 5}),  # <x11, x22, x33>
    frozenset({0, 3, 1}),  # <x11, x22, x12>
    frozenset({0, 5, 2}),  # <x11, x33, x13>
    frozenset({3, 5, 4}),  # <x22, x33, x23>
)


def four_planes(frame: np.ndarray) -> list[ProjSubspace]:
    """The four planes of the flat Veronese limit in the given frame.

    Row k of ``frame`` is the k-th coordinate point, so a plane cut out by
    three coordinates is spanned by the frame rows of the other three.
    """
    frame = np.asarray(frame)
    if frame.shape != (6, 6):
        raise ValueError("frame must be 6 x 6")
    if matrix_rank(frame) < 6:
        raise ValueError("frame is singular")
    return [ProjSubspace(frame[[k for k in range(6) if k not in ideal]]) for ideal in FOUR_PLANE_IDEALS]
