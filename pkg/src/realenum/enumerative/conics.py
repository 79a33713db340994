"""Conic experiments: the mixed point/line table, maximal configurations of
points on lines, and conics degenerating to line pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..polysys import Conic
from ..tracker import TrackOptions
from .problems import (
    Condition,
    Line,
    NonGenericInput,
    Point,
    ProblemInstance,
    chasles_table,
    solve_instance,
)

__all__ = [
    "conditioning_transform",
    "transform_conditions",
    "MaximalConfig",
    "figure_seed_config",
    "maximal_config_verify",
    "search_maximal_config",
    "ConicDegenConfig",
    "conic_family",
    "mixed_table_problems",
]


def _finite_points(conditions: Sequence[Condition]) -> list[np.ndarray]:
    pts = [np.asarray(c.coords, dtype=float) for c in conditions if isinstance(c, Point)]
    lines = [np.asarray(c.coeffs, dtype=float) for c in conditions if isinstance(c, Line)]
    for a, b in itertools.combinations(lines, 2):
        pts.append(np.cross(a, b))
    out = []
    for p in pts:
        if abs(p[2]) > 1e-12 * np.linalg.norm(p):
            out.append(p[:2] / p[2])
    return out


def conditioning_transform(conditions: Sequence[Condition]) -> np.ndarray:
    """Real similarity moving the finite data to the unit scale around 0."""
    pts = _finite_points(conditions)
    if not pts:
        return np.eye(3)
    P = np.array(pts)
    c = P.mean(axis=0)
    s = float(np.sqrt(np.mean(np.sum((P - c) ** 2, axis=1))))
    if s == 0 or not np.isfinite(s):
        s = 1.0
    return np.array([[1 / s, 0, -c[0] / s], [0, 1 / s, -c[1] / s], [0, 0, 1.0]])


def transform_conditions(conditions: Sequence[Condition], T: np.ndarray) -> list[Condition]:
    """Image of the conditions under x -> T x."""
    Tinv = np.linalg.inv(T)
    out: list[Condition] = []
    for c in conditions:
        if isinstance(c, Point):
            out.append(Point(tuple((T @ np.asarray(c.coords)).tolist())))
        elif isinstance(c, Line):
            out.append(Line(tuple((Tinv.T @ np.asarray(c.coeffs)).tolist())))
        else:
            M = Tinv.T @ c.matrix() @ Tinv
            out.append(Conic.from_matrix(M))
    return out


def mixed_table_problems(rng: np.random.Generator, real: bool = True) -> list[ProblemInstance]:
    """The six problems 'j points and 5-j lines', j = 5..0, on random data."""
    probs = []
    for j in range(5, -1, -1):
        conds: list[Condition] = []
        for k in range(5):
            v = rng.normal(size=3) if real else rng.normal(size=3) + 1j * rng.normal(size=3)
            conds.append(Point(tuple(v.tolist())) if k < j else Line(tuple(v.tolist())))
        probs.append(ProblemInstance("conics_mixed", conds))
    return probs


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaximalConfig:
    """Five points p_i and five lines l_i with p_i on l_i."""

    points: tuple
    lines: tuple

    def __post_init__(self) -> None:
        if len(self.points) != 5 or len(self.lines) != 5:
            raise ValueError("need five points and five lines")
        pts = tuple(p if isinstance(p, Point) else Point(tuple(p)) for p in self.points)
        lns = tuple(l if isinstance(l, Line) else Line(tuple(l)) for l in self.lines)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "lines", lns)
        for i, (p, l) in enumerate(zip(pts, lns)):
            if not l.contains(p.coords):
                raise ValueError(f"point {i} does not lie on line {i}")

    def check_generic(self) -> None:
        L = np.array([l.coeffs for l in self.lines], dtype=float)
        if np.linalg.matrix_rank(L, tol=1e-10 * np.linalg.norm(L)) < 3:
            raise NonGenericInput("the five lines are concurrent")
        for (i, a), (j, b) in itertools.combinations(enumerate(self.lines), 2):
            if np.linalg.matrix_rank(np.array([a.coeffs, b.coeffs], dtype=float), tol=1e-12) < 2:
                raise NonGenericInput(f"lines {i} and {j} coincide")
        P = np.array([p.coords for p in self.points], dtype=float)
        for idx in itertools.combinations(range(5), 3):
            sub = P[list(idx)]
            if abs(np.linalg.det(sub)) <= 1e-12 * np.prod(np.linalg.norm(sub, axis=1)):
                raise NonGenericInput(f"points {idx} are collinear")

    def subproblem(self, mask: int) -> list[Condition]:
        """Bit i of mask set: use the point p_i, else the line l_i."""
        return [self.points[i] if mask >> i & 1 else self.lines[i] for i in range(5)]

    def to_json(self) -> dict:
        return {
            "points": [list(p.coords) for p in self.points],
            "lines": [list(l.coeffs) for l in self.lines],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MaximalConfig":
        try:
            return cls(tuple(tuple(p) for p in data["points"]), tuple(tuple(l) for l in data["lines"]))
        except KeyError as exc:
            raise ValueError(f"missing field {exc.args[0]!r}") from None


def figure_seed_config() -> MaximalConfig:
    """Integer points on integer lines laid out like the classical picture:
    five points around a convex pentagon-like arc, each with its own
    tangent-like direction."""
    pts = [(63, 10, 1), (25, 45, 1), (59, 86, 1), (114, 74, 1), (112, 24, 1)]
    lines = [(0, 1, -10), (2, 1, -95), (2, -3, 140), (2, 3, -450), (2, -1, -200)]
    return MaximalConfig(tuple(pts), tuple(lines))


def maximal_config_verify(cfg: MaximalConfig, seed: int = 0, opts: TrackOptions = TrackOptions(),
                          workers: int | None = None) -> dict:
    """Solve the 32 problems obtained by choosing p_i or l_i for each i."""
    cfg.check_generic()
    degrees, _ = chasles_table()
    T = conditioning_transform(list(cfg.points) + list(cfg.lines))
    rows = []
    for mask in range(32):
        conds = transform_conditions(cfg.subproblem(mask), T)
        inst = ProblemInstance("conics_mixed", conds)
        res = solve_instance(inst, seed=seed, opts=opts, workers=workers)
        rows.append({
            "mask": mask,
            "points": bin(mask).count("1"),
            "expected": inst.expected_count,
            "regular": res.n_regular,
            "real": res.n_real,
            "conjugate_pairs": res.n_pairs,
            "pairing_ok": res.pairing_ok,
            "parity_ok": res.n_real % 2 == inst.expected_count % 2,
        })
    total_expected = sum(r["expected"] for r in rows)
    total_real = sum(r["real"] for r in rows)
    return {
        "subproblems": rows,
        "expected_total": total_expected,
        "real_total": total_real,
        "counts_ok": all(r["regular"] == r["expected"] for r in rows),
        "maximal": all(r["real"] == r["expected"] for r in rows),
    }


def search_maximal_config(start: MaximalConfig, seed: int = 0, rounds: int = 20, scale: float = 0.05,
                          opts: TrackOptions = TrackOptions(), workers: int | None = None):
    """Random perturbation + verify, keeping the best configuration.

    Perturbations move each point and rotate its line about it, so the
    incidence p_i in l_i is kept exactly in floating point. Returns the best
    configuration and its report.
    """
    rng = np.random.default_rng(seed)
    best = start
    best_rep = maximal_config_verify(start, seed, opts, workers)
    T = conditioning_transform(list(start.points) + list(start.lines))
    for _ in range(rounds):
        if best_rep["maximal"]:
            break
        pts, lines = [], []
        for p, l in zip(best.points, best.lines):
            xy = np.asarray(p.coords, dtype=float)
            xy = xy[:2] / xy[2]
            ang = np.arctan2(-l.coeffs[0], l.coeffs[1]) + scale * rng.normal()
            xy = xy + scale * rng.normal(size=2) / T[0, 0]
            d = np.array([np.cos(ang), np.sin(ang)])
            ell = np.array([-d[1], d[0], d[1] * xy[0] - d[0] * xy[1]])
            pts.append((float(xy[0]), float(xy[1]), 1.0))
            lines.append(tuple(float(v) for v in ell))
        try:
            cand = MaximalConfig(tuple(pts), tuple(lines))
            cand.check_generic()
        except (ValueError, NonGenericInput):
            continue
        rep = maximal_config_verify(cand, seed, opts, workers)
        if rep["real_total"] > best_rep["real_total"]:
            best, best_rep = cand, rep
    return best, best_rep


# ---------------------------------------------------------------------------

def _line_form(l: Line) -> np.ndarray:
    return np.asarray(l.coeffs, dtype=float)


@dataclass(frozen=True)
class ConicDegenConfig:
    """Triples (p_i, l_i, l_i') of a point on two distinct lines, and a
    smoothing conic S_i for each triple."""

    points: tuple
    lines: tuple
    lines2: tuple
    smoothers: tuple

    def __post_init__(self) -> None:
        if not (len(self.points) == len(self.lines) == len(self.lines2) == len(self.smoothers) == 5):
            raise ValueError("need five triples and five smoothing conics")
        object.__setattr__(self, "points", tuple(p if isinstance(p, Point) else Point(tuple(p)) for p in self.points))
        object.__setattr__(self, "lines", tuple(l if isinstance(l, Line) else Line(tuple(l)) for l in self.lines))
        object.__setattr__(self, "lines2", tuple(l if isinstance(l, Line) else Line(tuple(l)) for l in self.lines2))
        object.__setattr__(self, "smoothers",
                           tuple(s if isinstance(s, Conic) else Conic(tuple(s)) for s in self.smoothers))
        for i in range(5):
            p = self.points[i].coords
            if not self.lines[i].contains(p) or not self.lines2[i].contains(p):
                raise ValueError(f"point {i} is not on both of its lines")
        allines = [_line_form(l) for l in self.lines + self.lines2]
        for a, b in itertools.combinations(range(10), 2):
            if np.linalg.matrix_rank(np.array([allines[a], allines[b]]), tol=1e-12) < 2:
                raise ValueError(f"lines {a} and {b} of the configuration coincide")

    @classmethod
    def from_maximal(cls, cfg: MaximalConfig, angle: float = 0.05, smoother: Sequence | None = None) -> "ConicDegenConfig":
        """Primed lines are the l_i rotated about p_i by ``angle`` radians;
        the default smoothing conic is z^2.

        The configuration is first moved by the conditioning similarity and
        its lines scaled to unit normals, so that l_i l_i' and the smoother
        have comparable size and t measures the relative perturbation.
        """
        T = conditioning_transform(list(cfg.points) + list(cfg.lines))
        moved = transform_conditions(list(cfg.points) + list(cfg.lines), T)
        pts, lines, lines2 = [], [], []
        c, s = np.cos(angle), np.sin(angle)
        for p, l in zip(moved[:5], moved[5:]):
            xy = np.asarray(p.coords, dtype=float)
            xy = xy[:2] / xy[2]
            ell = _line_form(l)
            ell = ell / np.linalg.norm(ell[:2])
            n = np.array([c * ell[0] - s * ell[1], s * ell[0] + c * ell[1]])
            pts.append((float(xy[0]), float(xy[1]), 1.0))
            lines.append((float(ell[0]), float(ell[1]), float(-ell[:2] @ xy)))
            lines2.append((float(n[0]), float(n[1]), float(-n @ xy)))
        S = tuple(smoother) if smoother is not None else (0, 0, 0, 0, 0, 1)
        return cls(tuple(pts), tuple(lines), tuple(lines2), (S,) * 5)

    def to_json(self) -> dict:
        return {
            "points": [list(p.coords) for p in self.points],
            "lines": [list(l.coeffs) for l in self.lines],
            "lines2": [list(l.coeffs) for l in self.lines2],
            "smoothers": [list(s.coeffs) for s in self.smoothers],
        }

    @classmethod
    def from_json(cls, d: dict) -> "ConicDegenConfig":
        try:
            return cls(tuple(map(tuple, d["points"])), tuple(map(tuple, d["lines"])),
                       tuple(map(tuple, d["lines2"])), tuple(map(tuple, d["smoothers"])))
        except KeyError as exc:
            raise ValueError(f"missing field {exc.args[0]!r}") from None


def _product_conic(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # (a.x)(b.x) in the basis x^2, xy, xz, y^2, yz, z^2
    return np.array([a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[2] * b[0],
                     a[1] * b[1], a[1] * b[2] + a[2] * b[1], a[2] * b[2]])


def conic_family(cfg: ConicDegenConfig, t: float) -> list[Conic]:
    """C_i(t) = l_i l_i' - t S_i."""
    if t < 0:
        raise ValueError("t must be non-negative")
    out = []
    for i in range(5):
        a = np.asarray(cfg.lines[i].coeffs)
        b = np.asarray(cfg.lines2[i].coeffs)
        S = np.asarray(cfg.smoothers[i].coeffs)
        C = Conic(tuple((_product_conic(a, b) - t * S).tolist()))
        if t > 0 and C.rank() < 3:
            raise ValueError(f"conic {i} is degenerate at t={t}")
        out.append(C)
    return out
