"""Degeneration sweeps: solve one instance of a family, then follow the
solutions through a schedule of parameter values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from ..polysys import PolySystem
from ..tracker import (
    PairingError,
    TrackedSolution,
    TrackOptions,
    classify_real,
    distinct_regular,
    parameter_track,
    solve,
)
from .conics import ConicDegenConfig, conditioning_transform, conic_family, transform_conditions
from .problems import ConicChart, build_conics_mixed, build_planes9, conic_rank, random_frame
from ..geometry import ProjSubspace

__all__ = [
    "SweepStep",
    "SweepReport",
    "degeneration_sweep",
    "PlanesPencilFamily",
    "planes9_sweep",
    "conics5_sweep",
]


@dataclass
class SweepStep:
    t: float
    n_tracked: int
    n_regular: int
    n_real: int
    n_pairs: int
    n_singular: int
    n_diverged: int
    pairing_ok: bool
    resolved: bool
    max_cond: float
    crossing: bool = False

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "tracked": self.n_tracked,
            "regular": self.n_regular,
            "real": self.n_real,
            "conjugate_pairs": self.n_pairs,
            "singular": self.n_singular,
            "diverged": self.n_diverged,
            "pairing_ok": self.pairing_ok,
            "resolved_from_scratch": self.resolved,
            "max_cond": self.max_cond,
            "real_count_changed": self.crossing,
        }


@dataclass
class SweepReport:
    schedule: list[float]
    expected_count: int
    steps: list[SweepStep] = field(default_factory=list)
    best_t: float | None = None
    best_real: int = -1
    best_config: Any = None

    @property
    def fully_real(self) -> bool:
        return self.best_real == self.expected_count

    def to_json(self) -> dict:
        return {
            "schedule": list(self.schedule),
            "expected_count": self.expected_count,
            "steps": [s.to_json() for s in self.steps],
            "best": {"t": self.best_t, "real": self.best_real, "config": self.best_config},
            "fully_real": self.fully_real,
        }


def _affine_combination(F0: PolySystem, F1: PolySystem) -> Callable[[np.ndarray], PolySystem]:
    def family(q: np.ndarray) -> PolySystem:
        s = complex(np.asarray(q).reshape(-1)[0])
        return PolySystem([(1 - s) * f + s * g for f, g in zip(F0.polys, F1.polys)])
    return family


def _step_record(t: float, sols: list[TrackedSolution], accept, expected: int, opts: TrackOptions,
                 resolved: bool) -> tuple[SweepStep, list[TrackedSolution]]:
    regs = [s for s in distinct_regular(sols, opts.dedup_tol) if accept(s.point)]
    pairing_ok = True
    try:
        n_real, n_pairs = classify_real(regs, opts.dedup_tol, real_system=True)
    except PairingError:
        pairing_ok = False
        n_real, n_pairs = sum(s.is_real for s in regs), 0
    finite = [s.cond for s in regs if np.isfinite(s.cond)]
    step = SweepStep(
        t=float(t), n_tracked=len(sols), n_regular=len(regs), n_real=n_real, n_pairs=n_pairs,
        n_singular=sum(s.status == "singular" for s in sols), n_diverged=sum(s.status == "diverged" for s in sols),
        pairing_ok=pairing_ok, resolved=resolved, max_cond=float(max(finite, default=0.0)),
    )
    return step, regs


def degeneration_sweep(build: Callable[[Any], PolySystem], source: Callable[[float], Any], schedule: Sequence[float],
                       expected: int, seed: int = 0, opts: TrackOptions = TrackOptions(),
                       workers: int | None = None, accept: Callable[[np.ndarray], bool] = lambda x: True,
                       serialize: Callable[[float], Any] = lambda t: None, detour: float = 0.5) -> SweepReport:
    """Solve ``build(source(schedule[0]))`` by total degree, then continue the
    accepted regular solutions from step to step.

    Between consecutive parameter values the systems are joined by the
    segment (1 - s) F_k + s F_{k+1}, taken along a complex arc so that real
    discriminant crossings are avoided. A step that loses solutions is
    re-solved from scratch and marked as such. The configuration with the
    largest real count is kept through ``serialize``.
    """
    if not schedule:
        raise ValueError("empty schedule")
    report = SweepReport([float(t) for t in schedule], expected)
    F = build(source(schedule[0]))
    sols = solve(F, seed=seed, opts=opts, workers=workers)
    step, regs = _step_record(schedule[0], sols, accept, expected, opts, True)
    report.steps.append(step)
    for k, t in enumerate(schedule[1:], start=1):
        try:
            F1 = build(source(t))
        except ValueError:
            break
        starts = np.array([s.point for s in regs]) if regs else np.zeros((0, F.nvars), dtype=complex)
        resolved = False
        if len(starts):
            new = parameter_track(_affine_combination(F, F1), [0.0], [1.0], starts, opts,
                                  detour=detour, seed=seed + k, workers=workers)
            st, nregs = _step_record(t, new, accept, expected, opts, False)
        if not len(starts) or st.n_regular < min(expected, len(regs)):
            new = solve(F1, seed=seed + k, opts=opts, workers=workers)
            st, nregs = _step_record(t, new, accept, expected, opts, True)
            resolved = True
        st.resolved = resolved
        st.crossing = st.n_real != report.steps[-1].n_real
        report.steps.append(st)
        F, regs = F1, nregs
    for st in report.steps:
        if st.pairing_ok and st.n_regular == expected and st.n_real > report.best_real:
            report.best_real = st.n_real
            report.best_t = st.t
    if report.best_t is not None:
        report.best_config = serialize(report.best_t)
    return report


# ---------------------------------------------------------------------------
# planes in P^5, pencil-paired

@dataclass(frozen=True)
class PlanesPencilFamily:
    """Four pairs of real planes (K_i, K_i'(t)) plus a ninth plane K_9.

    At t = 0 each pair meets in the line mu_i and spans the 3-space M_i, the
    degenerate position in which the pair's intersection of conditions
    splits into two Schubert conditions; K_i'(t) moves away linearly in t.
    """

    mus: tuple
    a: tuple
    b: tuple
    c: tuple
    last: tuple

    @classmethod
    def random(cls, rng: np.random.Generator) -> "PlanesPencilFamily":
        return cls(
            tuple(rng.normal(size=(2, 6)) for _ in range(4)),
            tuple(rng.normal(size=6) for _ in range(4)),
            tuple(rng.normal(size=6) for _ in range(4)),
            tuple(rng.normal(size=(2, 6)) for _ in range(4)),
            tuple(rng.normal(size=(3, 6)).ravel()),
        )

    def planes(self, t: float) -> list[ProjSubspace]:
        out = []
        for mu, a, b, c in zip(self.mus, self.a, self.b, self.c):
            out.append(ProjSubspace(np.vstack([mu, a])))
            out.append(ProjSubspace(np.vstack([mu + t * c, b])))
        out.append(ProjSubspace(np.asarray(self.last).reshape(3, 6)))
        return out

    def to_json(self, t: float) -> dict:
        return {"kind": "planes9", "expected_count": 42,
                "subspaces": [P.to_json() for P in self.planes(t)]}


def planes9_sweep(family: PlanesPencilFamily, schedule: Sequence[float], seed: int = 0,
                  opts: TrackOptions = TrackOptions(), workers: int | None = None) -> SweepReport:
    frame = random_frame(np.random.default_rng([seed, 4242]), 6)
    return degeneration_sweep(lambda planes: build_planes9(planes, frame), family.planes, schedule, 42,
                              seed=seed, opts=opts, workers=workers, serialize=family.to_json)


def conics5_sweep(cfg: ConicDegenConfig, schedule: Sequence[float], seed: int = 0,
                  opts: TrackOptions = TrackOptions(), workers: int | None = None) -> SweepReport:
    """Sweep the conics l_i l_i' - t S_i through ``schedule``; target 3264 real."""
    T = conditioning_transform(list(cfg.points) + list(cfg.lines))
    chart = ConicChart.random(np.random.default_rng([seed, 3264]))

    def build(conics):
        return build_conics_mixed(transform_conditions(conics, T), chart)

    def accept(y: np.ndarray) -> bool:
        return conic_rank(chart.conic(y)) >= 2

    def serialize(t: float) -> dict:
        return {"config": cfg.to_json(), "t": t}

    return degeneration_sweep(build, lambda t: conic_family(cfg, t), schedule, 3264, seed=seed, opts=opts,
                              workers=workers, accept=accept, serialize=serialize)
