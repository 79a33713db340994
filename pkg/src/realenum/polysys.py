"""Sparse multivariate polynomials and the condition polynomials used by the
conic and Veronese experiments.

Coefficients may be any Python numbers (int, Fraction, float, complex);
exact inputs stay exact through the arithmetic, which the symbolic checks
rely on.
"""

from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "MultiPoly",
    "PolySystem",
    "Conic",
    "disc2",
    "disc3",
    "conic_point_condition",
    "conic_line_tangency",
    "conic_conic_tangency",
    "veronese_generators",
    "veronese_generators_symbolic",
    "monomial_min_primes",
    "VERONESE_VARS",
]

Exponent = tuple[int, ...]


def _is_zero(c) -> bool:
    return c == 0


class MultiPoly:
    """Polynomial as a map exponent-vector -> coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, numbers.Number] | None = None):
        self.nvars = int(nvars)
        clean: dict[Exponent, numbers.Number] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {self.nvars}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e}")
            if not _is_zero(c):
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if not _is_zero(c)}

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def variables(cls, nvars: int) -> list["MultiPoly"]:
        return [cls.variable(i, nvars) for i in range(nvars)]

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, numbers.Number):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, numbers.Number] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, numbers.Number):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"({self.terms[e]})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_real(self) -> bool:
        return all(not isinstance(c, complex) or c.imag == 0 for c in self.terms.values())

    def coefficient_norm(self) -> float:
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.terms.values())))

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def normalized(self) -> "MultiPoly":
        """Scaled to unit coefficient 2-norm (float coefficients)."""
        n = self.coefficient_norm()
        if n == 0:
            return self
        return self.map_coefficients(lambda c: c / n)

    # evaluation ---------------------------------------------------------
    def __call__(self, x: Sequence) -> numbers.Number:
        return self.eval(x)

    def eval(self, x: Sequence) -> numbers.Number:
        if len(x) != self.nvars:
            raise ValueError(f"point has length {len(x)}, polynomial has {self.nvars} variables")
        total = 0
        for e, c in self.terms.items():
            term = c
            for xi, k in zip(x, e):
                if k:
                    term = term * xi**k
            total = total + term
        return total

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.nvars, out)

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomial ``subs[i]`` for variable i."""
        if len(subs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutions, got {len(subs)}")
        if not subs:
            raise ValueError("cannot compose a polynomial in zero variables")
        m = subs[0].nvars
        cache: dict[tuple[int, int], MultiPoly] = {}

        def pw(i: int, k: int) -> MultiPoly:
            if (i, k) not in cache:
                cache[(i, k)] = subs[i] if k == 1 else pw(i, k - 1) * subs[i]
            return cache[(i, k)]

        acc: dict[Exponent, numbers.Number] = {}
        for e, c in self.terms.items():
            term = MultiPoly.constant(c, m)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            for f, d in term.terms.items():
                acc[f] = acc.get(f, 0) + d
        return MultiPoly(m, acc)

    def substitute(self, values: Mapping[int, numbers.Number]) -> "MultiPoly":
        """Fix some variables to numbers, keeping the variable count."""
        out: dict[Exponent, numbers.Number] = {}
        for e, c in self.terms.items():
            f = list(e)
            for i, v in values.items():
                if f[i]:
                    c = c * v ** f[i]
                    f[i] = 0
            key = tuple(f)
            out[key] = out.get(key, 0) + c
        return MultiPoly(self.nvars, out)

    def drop_variables(self, keep: Sequence[int]) -> "MultiPoly":
        """Reindex onto the variables ``keep``; all others must be absent."""
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(self.nvars) if i not in keep):
                raise ValueError("polynomial depends on a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return MultiPoly(len(keep), out)

    def homogenize(self, d: int | None = None) -> "MultiPoly":
        """Homogenize to degree ``d`` with a new variable in position 0."""
        d = self.degree() if d is None else d
        if d < self.degree():
            raise ValueError(f"cannot homogenize degree {self.degree()} to {d}")
        return MultiPoly(self.nvars + 1, {(d - sum(e),) + e: c for e, c in self.terms.items()})

    # serialization ------------------------------------------------------
    def to_json(self) -> dict[str, list[float]]:
        out = {}
        for e in sorted(self.terms):
            c = complex(self.terms[e])
            out[",".join(map(str, e))] = [c.real, c.imag]
        return out

    @classmethod
    def from_json(cls, nvars: int, data: Mapping[str, Sequence[float]]) -> "MultiPoly":
        terms = {}
        for key, val in data.items():
            e = tuple(int(x) for x in key.split(",")) if key else ()
            re, im = val
            terms[e] = complex(re, im) if im else float(re)
        return cls(nvars, terms)


@dataclass
class PolySystem:
    """A list of polynomials in a shared set of variables."""

    polys: list[MultiPoly]

    def __post_init__(self) -> None:
        if not self.polys:
            raise ValueError("empty system")
        n = self.polys[0].nvars
        if any(p.nvars != n for p in self.polys):
            raise ValueError("polynomials have different variable counts")

    @property
    def nvars(self) -> int:
        return self.polys[0].nvars

    @property
    def degrees(self) -> list[int]:
        return [p.degree() for p in self.polys]

    def __len__(self) -> int:
        return len(self.polys)

    def is_square(self) -> bool:
        return len(self.polys) == self.nvars

    def is_real(self) -> bool:
        return all(p.is_real() for p in self.polys)

    def eval(self, x: Sequence) -> np.ndarray:
        return np.array([p.eval(x) for p in self.polys], dtype=complex)

    def jacobian(self, x: Sequence) -> np.ndarray:
        if len(x) != self.nvars:
            raise ValueError(f"point has length {len(x)}, system has {self.nvars} variables")
        return np.array([[p.diff(j).eval(x) for j in range(self.nvars)] for p in self.polys], dtype=complex)

    def normalized(self) -> "PolySystem":
        return PolySystem([p.normalized() for p in self.polys])

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "polys": [p.to_json() for p in self.polys]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PolySystem":
        return cls([MultiPoly.from_json(data["nvars"], p) for p in data["polys"]])


# ---------------------------------------------------------------------------
# discriminants

def disc2(a, b, c):
    """Discriminant of a*s^2 + b*s*t + c*t^2."""
    return b * b - 4 * a * c


def disc3(a, b, c, d):
    """Discriminant of a*s^3 + b*s^2*t + c*s*t^2 + d*t^3."""
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2


# ---------------------------------------------------------------------------
# conics

CONIC_INDEX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def _half(x):
    if isinstance(x, (int, Fraction)) or (isinstance(x, MultiPoly) and all(
            isinstance(c, (int, Fraction)) for c in x.terms.values())):
        return x * Fraction(1, 2)
    return x * 0.5


def _sym_matrix(c: Sequence) -> list[list]:
    """Symmetric matrix of q(x) = sum_{i<=j} c_ij x_i x_j (off-diagonals halved)."""
    c11, c12, c13, c22, c23, c33 = c
    h12, h13, h23 = _half(c12), _half(c13), _half(c23)
    return [[c11, h12, h13], [h12, c22, h23], [h13, h23, c33]]


def _det3(m: list[list]):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _adj3(m: list[list]) -> list[list]:
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        s = [k for k in range(3) if k != j]
        minor = m[r[0]][s[0]] * m[r[1]][s[1]] - m[r[0]][s[1]] * m[r[1]][s[0]]
        return minor if (i + j) % 2 == 0 else -minor
    return [[cof(j, i) for j in range(3)] for i in range(3)]


@dataclass(frozen=True)
class Conic:
    """Plane conic q(x) = sum_{i<=j} c_ij x_i x_j with coefficients
    (c11, c12, c13, c22, c23, c33)."""

    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.coeffs) != 6:
            raise ValueError("a conic has six coefficients")
        if all(c == 0 for c in self.coeffs):
            raise ValueError("zero conic")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def from_matrix(cls, m) -> "Conic":
        m = np.asarray(m)
        if not np.allclose(m, m.T):
            raise ValueError("conic matrix must be symmetric")
        return cls(tuple(m[i, j] * (1 if i == j else 2) for i, j in CONIC_INDEX))

    def matrix(self) -> np.ndarray:
        return np.array(_sym_matrix(self.coeffs), dtype=complex if self._is_complex() else float)

    def _is_complex(self) -> bool:
        return any(isinstance(c, complex) and c.imag != 0 for c in self.coeffs)

    def exact_matrix(self) -> list[list]:
        return _sym_matrix(self.coeffs)

    def det(self):
        return _det3(self.exact_matrix())

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def rank(self, rtol: float = 1e-10) -> int:
        if self.is_exact():
            m = self.exact_matrix()
            if _det3(m) != 0:
                return 3
            return 2 if any(x != 0 for row in _adj3(m) for x in row) else 1
        s = np.linalg.svd(self.matrix(), compute_uv=False)
        return int(np.sum(s > rtol * s[0]))

    def __call__(self, x: Sequence):
        return sum(c * x[i] * x[j] for c, (i, j) in zip(self.coeffs, CONIC_INDEX))


def _conic_vars() -> list[MultiPoly]:
    return MultiPoly.variables(6)


def conic_point_condition(p: Sequence) -> MultiPoly:
    """Linear form c -> q_c(p)."""
    if len(p) != 3 or all(x == 0 for x in p):
        raise ValueError(f"not a point of P^2: {p}")
    return MultiPoly.linear_form([p[i] * p[j] for i, j in CONIC_INDEX])


def conic_line_tangency(p0: Sequence, p1: Sequence) -> MultiPoly:
    """Quadratic condition for the conic to be tangent to the line p0 p1.

    Discriminant of the binary form (s, t) -> q_c(s p0 + t p1).
    """
    if len(p0) != 3 or len(p1) != 3:
        raise ValueError("points of P^2 need three coordinates")
    if np.linalg.matrix_rank(np.array([p0, p1], dtype=complex)) < 2:
        raise ValueError("line needs two independent points")
    a = conic_point_condition(p0)
    c = conic_point_condition(p1)
    b = MultiPoly.linear_form([
        (2 * p0[i] * p1[i]) if i == j else (p0[i] * p1[j] + p0[j] * p1[i]) for i, j in CONIC_INDEX
    ])
    return disc2(a, b, c)


def conic_conic_tangency(C: Conic | Sequence) -> MultiPoly:
    """Degree-6 tact invariant of C against the unknown conic.

    The binary cubic (l, m) -> det(l*A + m*B) has coefficients
    det A, tr(adj(A) B), tr(A adj(B)), det B; its discriminant vanishes iff
    the conics do not meet in four distinct points.
    """
    if not isinstance(C, Conic):
        C = Conic(tuple(C))
    A = C.exact_matrix()
    if C.rank() < 3:
        raise ValueError("tangency to a degenerate conic is not supported")
    B = _sym_matrix(_conic_vars())
    adjA = _adj3(A)
    adjB = _adj3(B)
    a3 = MultiPoly.constant(_det3(A), 6)
    a2 = sum((adjA[i][j] * B[j][i] for i in range(3) for j in range(3)), MultiPoly.constant(0, 6))
    a1 = sum((A[i][j] * adjB[j][i] for i in range(3) for j in range(3)), MultiPoly.constant(0, 6))
    a0 = _det3(B)
    return disc3(a3, a2, a1, a0)


# ---------------------------------------------------------------------------
# Veronese family

VERONESE_VARS = ("x11", "x12", "x13", "x22", "x23", "x33")


def veronese_generators_symbolic() -> list[MultiPoly]:
    """The six quadrics of the degenerating Veronese family in variables
    (x11, x12, x13, x22, x23, x33, t)."""
    x11, x12, x13, x22, x23, x33, t = MultiPoly.variables(7)
    return [
        x11 * x33 - t**2 * x13**2,
        x11 * x22 - t**2 * x12**2,
        x11 * x23 - t * x12 * x13,
        x12 * x33 - t * x13 * x23,
        x13 * x22 - t * x12 * x23,
        x22 * x33 - t**2 * x23**2,
    ]


def veronese_generators(t) -> list[MultiPoly]:
    """Generators of the Veronese surface V(t) in P^5; at t = 0 these are the
    six monomials whose ideal cuts out four coordinate planes."""
    return [g.substitute({6: t}).drop_variables(range(6)) for g in veronese_generators_symbolic()]


def _support(m) -> frozenset[int]:
    if isinstance(m, MultiPoly):
        if len(m.terms) != 1:
            raise ValueError(f"not a monomial: {m}")
        (e,) = m.terms
    else:
        e = tuple(m)
    if any(k > 1 for k in e):
        raise ValueError(f"monomial is not squarefree: {e}")
    if not any(e):
        raise ValueError("the constant monomial generates the unit ideal")
    return frozenset(i for i, k in enumerate(e) if k)


def monomial_min_primes(gens: Iterable[MultiPoly | Sequence[int]]) -> list[frozenset[int]]:
    """Minimal primes of a squarefree monomial ideal.

    Each prime is generated by a set of variables, and these sets are exactly
    the minimal vertex covers of the hypergraph of generator supports.
    """
    edges = sorted({_support(g) for g in gens}, key=lambda s: (len(s), sorted(s)))
    covers: set[frozenset[int]] = set()

    def rec(chosen: frozenset[int], k: int) -> None:
        while k < len(edges) and edges[k] & chosen:
            k += 1
        if k == len(edges):
            covers.add(chosen)
            return
        for v in sorted(edges[k]):
            rec(chosen | {v}, k + 1)

    rec(frozenset(), 0)
    minimal = [c for c in covers if not any(o < c for o in covers)]
    return sorted(minimal, key=lambda s: (len(s), sorted(s)))
