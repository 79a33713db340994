"""Problem instances and their polynomial systems.

Lines meeting four lines and planes meeting nine planes are written in an
affine chart of the Grassmannian after a random real change of frame; conic
problems are written in an affine chart of the P^5 of conics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from ..geometry import (
    Chart,
    ProjSubspace,
    chart_plucker,
    incidence_form,
    matrix_from_json,
    matrix_rank,
    matrix_to_json,
)
from ..polysys import (
    Conic,
    MultiPoly,
    PolySystem,
    conic_conic_tangency,
    conic_line_tangency,
    conic_point_condition,
)
from ..schubert import BoxShape, degree
from ..tracker import PairingError, TrackedSolution, TrackOptions, classify_real, distinct_regular, solve

__all__ = [
    "NonGenericInput",
    "Point",
    "Line",
    "Condition",
    "ProblemInstance",
    "InstanceResult",
    "chasles_table",
    "expected_conic_count",
    "build_lines4",
    "build_planes9",
    "build_conics_mixed",
    "solve_instance",
    "random_frame",
    "random_instance",
    "conic_of_solution",
]

KINDS = ("lines4", "planes9", "conics_mixed", "conics5")
RANK_GAP = 1e-6


class NonGenericInput(ValueError):
    """Input data lies in a special position the problem does not handle."""


@dataclass(frozen=True)
class Point:
    coords: tuple

    def __post_init__(self) -> None:
        if len(self.coords) != 3 or all(c == 0 for c in self.coords):
            raise ValueError(f"not a point of P^2: {self.coords}")
        object.__setattr__(self, "coords", tuple(self.coords))

    def array(self) -> np.ndarray:
        return np.asarray(self.coords)


@dataclass(frozen=True)
class Line:
    """Line {a x + b y + c z = 0} in P^2."""

    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.coeffs) != 3 or all(c == 0 for c in self.coeffs):
            raise ValueError(f"not a line of P^2: {self.coeffs}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def through(cls, p: Sequence, q: Sequence) -> "Line":
        return cls(tuple(np.cross(np.asarray(p), np.asarray(q)).tolist()))

    def contains(self, p: Sequence, tol: float = 1e-12) -> bool:
        val = sum(a * b for a, b in zip(self.coeffs, p))
        exact = all(isinstance(x, int) for x in list(self.coeffs) + list(p))
        if exact:
            return val == 0
        return abs(val) <= tol * np.linalg.norm(self.coeffs) * np.linalg.norm(p)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Two independent points spanning the line."""
        ell = np.asarray(self.coeffs)
        cands = [np.cross(ell, e) for e in np.eye(3, dtype=ell.dtype)]
        cands.sort(key=lambda v: -float(np.linalg.norm(v)))
        p0 = cands[0]
        for p1 in cands[1:]:
            if np.linalg.matrix_rank(np.array([p0, p1], dtype=complex)) == 2:
                return p0, p1
        raise AssertionError("unreachable for a nonzero line")

    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs)


Condition = Union[Point, Line, Conic]


def chasles_table() -> tuple[tuple[int, ...], int]:
    """Degrees of p^j l^(5-j) on the space of conics, and Chasles' number.

    The count of conics through j points tangent to 5 - j lines is
    2^min(j, 5-j); a conic condition is 2p + 2l, so five conics give
    32 * sum_j C(5, j) * deg_j.
    """
    degrees = tuple(2 ** min(j, 5 - j) for j in range(6))
    total = 32 * sum(math.comb(5, j) * d for j, d in enumerate(degrees))
    return degrees, total


def expected_conic_count(conditions: Sequence[Condition]) -> int:
    """Intersection number of the given point/line/conic conditions."""
    degrees, _ = chasles_table()
    a = sum(isinstance(c, Point) for c in conditions)
    b = sum(isinstance(c, Line) for c in conditions)
    c = sum(isinstance(c, Conic) for c in conditions)
    if a + b + c != 5:
        raise ValueError("need exactly five conditions")
    # conic = 2p + 2l; the table is indexed by the number of points
    return 2**c * sum(math.comb(c, k) * degrees[a + k] for k in range(c + 1))


def random_frame(rng: np.random.Generator, m: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(m, m)))
    return q * np.sign(np.diag(r))


def _frame_seed(seed: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng([seed, attempt, 90210])


@dataclass
class ProblemInstance:
    kind: str
    data: list
    expected_count: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}")
        need = {"lines4": 4, "planes9": 9, "conics_mixed": 5, "conics5": 5}[self.kind]
        if len(self.data) != need:
            raise ValueError(f"{self.kind} needs {need} items, got {len(self.data)}")
        if self.kind == "lines4":
            for L in self.data:
                if not isinstance(L, ProjSubspace) or (L.r, L.m) != (2, 4):
                    raise ValueError("lines4 data must be lines in P^3")
        elif self.kind == "planes9":
            for P in self.data:
                if not isinstance(P, ProjSubspace) or (P.r, P.m) != (3, 6):
                    raise ValueError("planes9 data must be planes in P^5")
        elif self.kind == "conics5":
            if not all(isinstance(c, Conic) for c in self.data):
                raise ValueError("conics5 data must be conics")
        elif not all(isinstance(c, (Point, Line, Conic)) for c in self.data):
            raise ValueError("conic conditions must be points, lines or conics")
        if not self.expected_count:
            self.expected_count = self.default_count()
        if self.expected_count <= 0:
            raise ValueError("expected count must be positive")

    def default_count(self) -> int:
        if self.kind == "lines4":
            return degree(BoxShape(2, 2))
        if self.kind == "planes9":
            return degree(BoxShape(3, 3))
        return expected_conic_count(self.data)

    def is_real(self) -> bool:
        def real(a) -> bool:
            return not np.iscomplexobj(np.asarray(a)) or bool(np.all(np.asarray(a).imag == 0))
        if self.kind in ("lines4", "planes9"):
            return all(real(S.basis) for S in self.data)
        return all(real(getattr(c, "coords", None) or getattr(c, "coeffs")) for c in self.data)

    def to_json(self) -> dict:
        if self.kind in ("lines4", "planes9"):
            items = [S.to_json() for S in self.data]
            return {"kind": self.kind, "expected_count": self.expected_count, "subspaces": items}
        conds = []
        for c in self.data:
            if isinstance(c, Point):
                conds.append({"type": "point", "coords": _vec_to_json(c.coords)})
            elif isinstance(c, Line):
                conds.append({"type": "line", "coeffs": _vec_to_json(c.coeffs)})
            else:
                conds.append({"type": "conic", "coeffs": _vec_to_json(c.coeffs)})
        return {"kind": self.kind, "expected_count": self.expected_count, "conditions": conds}

    @classmethod
    def from_json(cls, data: dict) -> "ProblemInstance":
        try:
            kind = data["kind"]
            if kind in ("lines4", "planes9"):
                items = [ProjSubspace(matrix_from_json(m)) for m in data["subspaces"]]
            else:
                items = []
                for k, c in enumerate(data["conditions"]):
                    typ = c["type"]
                    if typ == "point":
                        items.append(Point(_vec_from_json(c["coords"])))
                    elif typ == "line":
                        items.append(Line(_vec_from_json(c["coeffs"])))
                    elif typ == "conic":
                        items.append(Conic(_vec_from_json(c["coeffs"])))
                    else:
                        raise ValueError(f"conditions[{k}].type: unknown condition type {typ!r}")
        except KeyError as exc:
            raise ValueError(f"missing field {exc.args[0]!r}") from None
        return cls(kind, items, int(data.get("expected_count", 0)))


def _vec_to_json(v) -> list:
    out = []
    for x in v:
        if isinstance(x, (int, np.integer)):
            out.append(int(x))
        elif isinstance(x, complex) and x.imag != 0:
            out.append([x.real, x.imag])
        else:
            out.append(float(np.real(x)))
    return out


def _vec_from_json(v) -> tuple:
    return tuple(complex(*x) if isinstance(x, list) else x for x in v)


# ---------------------------------------------------------------------------
# Grassmannian problems

def _common_point(subspaces: Sequence[ProjSubspace]) -> bool:
    """Whether all subspaces share a point (rank of stacked annihilators < m)."""
    m = subspaces[0].m
    ann = []
    for S in subspaces:
        _, s, vh = np.linalg.svd(np.asarray(S.basis, dtype=complex))
        ann.append(vh[S.r:].conj())
    return np.linalg.matrix_rank(np.vstack(ann), tol=1e-9) < m


def _common_hyperplane(subspaces: Sequence[ProjSubspace]) -> bool:
    m = subspaces[0].m
    return matrix_rank(np.vstack([S.basis for S in subspaces])) < m


def _check_distinct(subspaces: Sequence[ProjSubspace]) -> None:
    for (i, A), (j, B) in itertools.combinations(enumerate(subspaces), 2):
        if matrix_rank(np.vstack([A.basis, B.basis])) == A.r:
            raise NonGenericInput(f"subspaces {i} and {j} coincide")


def _grassmann_system(subspaces: Sequence[ProjSubspace], r: int, frame: np.ndarray) -> PolySystem:
    finv = np.linalg.inv(frame)
    chart = chart_plucker(Chart.standard(r, frame.shape[0]))
    polys = []
    for K in subspaces:
        Kf = ProjSubspace(np.asarray(K.basis, dtype=complex) @ finv)
        polys.append(incidence_form(Kf, r).compose(chart).normalized())
    return PolySystem(polys)


def build_lines4(lines: Sequence[ProjSubspace], frame: np.ndarray | None = None) -> PolySystem:
    """Four incidence conditions for a line in P^3, in a 2x2 chart."""
    if len(lines) != 4 or any((L.r, L.m) != (2, 4) for L in lines):
        raise ValueError("need four lines in P^3")
    _check_distinct(lines)
    if _common_point(lines):
        raise NonGenericInput("all four lines pass through one point; the solution set is not finite")
    if _common_hyperplane(lines):
        raise NonGenericInput("all four lines lie in one plane; the solution set is not finite")
    frame = np.eye(4) if frame is None else frame
    return _grassmann_system(lines, 2, frame)


def build_planes9(planes: Sequence[ProjSubspace], frame: np.ndarray | None = None) -> PolySystem:
    """Nine 'meets K_i' conditions for a plane in P^5, in a 3x3 chart."""
    if len(planes) != 9 or any((P.r, P.m) != (3, 6) for P in planes):
        raise ValueError("need nine planes in P^5")
    _check_distinct(planes)
    frame = np.eye(6) if frame is None else frame
    return _grassmann_system(planes, 3, frame)


def chart_solution_subspace(x: np.ndarray, r: int, m: int, frame: np.ndarray) -> ProjSubspace:
    M = np.hstack([np.eye(r), np.asarray(x, dtype=complex).reshape(r, m - r)])
    return ProjSubspace(M @ frame)


# ---------------------------------------------------------------------------
# conic problems

@dataclass(frozen=True)
class ConicChart:
    """Affine chart {L(c) = 1} of the P^5 of conics: c = base + basis @ y."""

    functional: np.ndarray
    base: np.ndarray
    basis: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator) -> "ConicChart":
        L = rng.normal(size=6)
        L /= np.linalg.norm(L)
        basis = np.linalg.svd(L[None, :])[2][1:].T
        return cls(L, L.copy(), basis)

    def substitutions(self) -> list[MultiPoly]:
        ys = MultiPoly.variables(5)
        return [float(self.base[k]) + sum((float(self.basis[k, j]) * ys[j] for j in range(5)),
                                          MultiPoly.constant(0, 5)) for k in range(6)]

    def conic(self, y: np.ndarray) -> np.ndarray:
        return self.base + self.basis @ np.asarray(y)


def _condition_poly(c: Condition) -> MultiPoly:
    if isinstance(c, Point):
        return conic_point_condition(c.coords)
    if isinstance(c, Line):
        p0, p1 = c.points()
        return conic_line_tangency(tuple(p0.tolist()), tuple(p1.tolist()))
    return conic_conic_tangency(c)


def build_conics_mixed(conditions: Sequence[Condition], chart: ConicChart) -> PolySystem:
    """Five point/line/conic conditions in the affine chart ``chart``."""
    if len(conditions) != 5:
        raise ValueError("need five conditions")
    subs = chart.substitutions()
    return PolySystem([_condition_poly(c).compose(subs).normalized() for c in conditions])


def conic_of_solution(chart: ConicChart, y: np.ndarray) -> Conic:
    return Conic(tuple(complex(v) for v in chart.conic(y)))


def conic_rank(coeffs: np.ndarray, gap: float = RANK_GAP) -> int:
    c = np.asarray(coeffs, dtype=complex)
    M = np.array([[c[0], c[1] / 2, c[2] / 2], [c[1] / 2, c[3], c[4] / 2], [c[2] / 2, c[4] / 2, c[5]]])
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > gap * s[0]))


def random_instance(kind: str, rng: np.random.Generator, real: bool = True, points: int = 0,
                    lines: int = 0) -> ProblemInstance:
    """Gaussian random data. For conic problems, ``points`` and ``lines`` fix
    how many conditions are points and lines; the rest are conics, which are
    always complex when ``real`` is false."""

    def vec(size):
        v = rng.normal(size=size)
        return v if real else v + 1j * rng.normal(size=size)

    if kind == "lines4":
        return ProblemInstance(kind, [ProjSubspace(vec((2, 4))) for _ in range(4)])
    if kind == "planes9":
        return ProblemInstance(kind, [ProjSubspace(vec((3, 6))) for _ in range(9)])
    if kind not in ("conics_mixed", "conics5"):
        raise ValueError(f"unknown problem kind {kind!r}")
    if kind == "conics5" and (points or lines):
        raise ValueError("conics5 has no point or line conditions")
    if points < 0 or lines < 0 or points + lines > 5:
        raise ValueError(f"bad condition split: {points} points, {lines} lines")
    conds: list[Condition] = [Point(tuple(vec(3).tolist())) for _ in range(points)]
    conds += [Line(tuple(vec(3).tolist())) for _ in range(lines)]
    conds += [Conic(tuple(vec(6).tolist())) for _ in range(5 - points - lines)]
    return ProblemInstance("conics5" if points + lines == 0 else "conics_mixed", conds)


# ---------------------------------------------------------------------------
# solving

@dataclass
class InstanceResult:
    kind: str
    expected_count: int
    n_paths: int
    n_regular: int
    n_real: int
    n_pairs: int
    n_singular: int
    n_diverged: int
    n_degenerate: int = 0
    n_rank2: int = 0
    attempts: int = 1
    pairing_ok: bool = True
    solutions: list[TrackedSolution] = field(default_factory=list, repr=False)
    accepted: list[TrackedSolution] = field(default_factory=list, repr=False)
    figures: list[TrackedSolution] = field(default_factory=list, repr=False)

    @property
    def count_ok(self) -> bool:
        return self.n_regular == self.expected_count

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "expected_count": self.expected_count,
            "paths": self.n_paths,
            "regular": self.n_regular,
            "real": self.n_real,
            "conjugate_pairs": self.n_pairs,
            "singular": self.n_singular,
            "diverged": self.n_diverged,
            "degenerate_filtered": self.n_degenerate,
            "rank2": self.n_rank2,
            "attempts": self.attempts,
            "pairing_ok": self.pairing_ok,
            "count_ok": self.count_ok,
        }


def _system_for(inst: ProblemInstance, rng: np.random.Generator):
    if inst.kind == "lines4":
        frame = random_frame(rng, 4)
        return build_lines4(inst.data, frame), frame
    if inst.kind == "planes9":
        frame = random_frame(rng, 6)
        return build_planes9(inst.data, frame), frame
    chart = ConicChart.random(rng)
    return build_conics_mixed(inst.data, chart), chart


def _projector(inst: ProblemInstance, chart, x: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the solution's span, flattened: the same
    figure gives the same vector in every chart."""
    if inst.kind == "lines4":
        B = chart_solution_subspace(x, 2, 4, chart).basis
    elif inst.kind == "planes9":
        B = chart_solution_subspace(x, 3, 6, chart).basis
    else:
        B = chart.conic(x)[None, :]
    Q = np.linalg.qr(B.T)[0]
    return (Q @ Q.conj().T).ravel()


def solve_instance(inst: ProblemInstance, seed: int = 0, opts: TrackOptions = TrackOptions(),
                   workers: int | None = None, retries: int = 5) -> InstanceResult:
    """Solve with a random chart and homotopy; while the distinct accepted
    solutions fall short of the expected count, solve again with a fresh
    chart and gamma and merge the results.

    Solutions of different attempts are compared through ``figures``, the
    chart-free projector form. ``accepted`` and ``chart`` belong to the last
    attempt; the counts cover the union.
    """
    figures: list[TrackedSolution] = []
    counts = {s: 0 for s in ("regular", "singular", "diverged")}
    n_paths = degenerate = rank2 = 0
    for attempt in range(retries + 1):
        rng = _frame_seed(seed, attempt)
        F, chart = _system_for(inst, rng)
        sols = solve(F, seed=seed + 1000 * attempt, opts=opts, workers=workers)
        regs = distinct_regular(sols, opts.dedup_tol)
        accepted = regs
        if inst.kind in ("conics_mixed", "conics5"):
            ranks = [conic_rank(chart.conic(s.point)) for s in regs]
            accepted = [s for s, k in zip(regs, ranks) if k >= 2]
            # degenerate counts describe the attempt that produced the result
            degenerate = sum(k <= 1 for k in ranks)
            rank2 = sum(k == 2 for k in ranks)
        for s in sols:
            counts[s.status] += 1
        n_paths += len(sols)
        figures = distinct_regular(figures + [replace(s, point=_projector(inst, chart, s.point)) for s in accepted],
                                   opts.dedup_tol)
        if len(figures) >= inst.expected_count:
            break
    pairing_ok = True
    n_real = sum(s.is_real for s in figures)
    n_pairs = 0
    if inst.is_real():
        try:
            n_real, n_pairs = classify_real(figures, opts.dedup_tol, real_system=True)
        except PairingError:
            pairing_ok = False
    res = InstanceResult(
        kind=inst.kind, expected_count=inst.expected_count, n_paths=n_paths, n_regular=len(figures),
        n_real=n_real, n_pairs=n_pairs, n_singular=counts["singular"], n_diverged=counts["diverged"],
        n_degenerate=degenerate, n_rank2=rank2, attempts=attempt + 1, pairing_ok=pairing_ok,
        solutions=sols, accepted=accepted, figures=figures,
    )
    res.chart = chart
    return res
