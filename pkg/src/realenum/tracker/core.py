"""Homotopy continuation: total-degree starts, path tracking, parameter
homotopies, endpoint classification and real/complex accounting."""

from __future__ import annotations

import cmath
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from ..polysys import MultiPoly, PolySystem
from . import _kernels as K
from .compiled import CompiledHomotopy

__all__ = [
    "Homotopy",
    "TrackOptions",
    "TrackedSolution",
    "PairingError",
    "total_degree_start",
    "track",
    "track_many",
    "solve",
    "parameter_track",
    "classify_real",
    "distinct_regular",
    "default_workers",
]

REGULAR = "regular"
SINGULAR = "singular"
DIVERGED = "diverged"
_STATUS_ORDER = {REGULAR: 0, SINGULAR: 1, DIVERGED: 2}
_CHUNK = 64


# relative size of the second refinement step allowed at a regular endpoint
NEWTON_STEP_TOL = 1e-8


class PairingError(ValueError):
    """A non-real solution of a real system has no conjugate partner."""


def default_workers() -> int:
    return max(1, int(os.environ.get("REALENUM_WORKERS", "1")))


@dataclass(frozen=True)
class TrackOptions:
    initial_step: float = 0.05
    min_step: float = 1e-12
    max_step: float = 0.1
    growth_factor: float = 1.5
    growth_after: int = 5
    shrink_factor: float = 0.5
    corrector_iters: int = 3
    corrector_tol: float = 1e-8
    corrector_contraction: float = 0.25
    truncation: float = 1.0 - 1e-6
    polish_iters: int = 8
    divergence: float = 1e8
    dedup_tol: float = 1e-6
    reality_tol: float = 1e-6
    residual_tol: float = 1e-8
    singular_cond: float = 1e12
    predictor: str = "euler"
    max_steps: int = 200_000
    endgame_min_step: float = 1e-14
    endgame_max_steps: int = 2000
    retrack_rounds: int = 2

    def __post_init__(self) -> None:
        positive = [self.initial_step, self.min_step, self.max_step, self.growth_factor, self.shrink_factor,
                    self.corrector_tol, self.divergence, self.dedup_tol, self.reality_tol, self.residual_tol]
        if any(x <= 0 for x in positive):
            raise ValueError("tracking options must be positive")
        if not self.min_step < self.initial_step <= self.max_step:
            raise ValueError("need min_step < initial_step <= max_step")
        if not 0 < self.truncation <= 1:
            raise ValueError("truncation point must lie in (0, 1]")
        if self.predictor not in ("euler", "rk4"):
            raise ValueError(f"unknown predictor {self.predictor!r}")


@dataclass
class TrackedSolution:
    point: np.ndarray
    residual: float
    status: str
    is_real: bool
    path: int = -1
    cond: float = float("inf")
    steps: int = 0

    @property
    def is_regular(self) -> bool:
        return self.status == REGULAR

    def to_json(self) -> dict:
        return {
            "point": [[float(z.real), float(z.imag)] for z in self.point],
            "residual": float(self.residual),
            "status": self.status,
            "is_real": bool(self.is_real),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrackedSolution":
        def num(v):  # null encodes a non-finite value
            return float("nan") if v is None else float(v)
        point = np.array([complex(num(a), num(b)) for a, b in data["point"]])
        res = data["residual"]
        return cls(point, float("inf") if res is None else float(res), data["status"], data["is_real"])


def _seeded_unit(rng: np.random.Generator) -> complex:
    return cmath.exp(2j * np.pi * rng.random())


def _default_patch(n1: int) -> np.ndarray:
    rng = np.random.default_rng(7_771_891 + n1)
    p = rng.normal(size=n1) + 1j * rng.normal(size=n1)
    return p / np.linalg.norm(p)


@dataclass
class Homotopy:
    """H(x, t) = (1 - s) * gamma * start(x) + s * target(x), s = t + i*detour*t*(1-t).

    ``detour = 0`` gives the straight segment; a nonzero detour bends the
    parameter path off the real axis while keeping both ends fixed.
    """

    start: PolySystem
    target: PolySystem
    gamma: complex = 1.0
    detour: float = 0.0
    patch: np.ndarray | None = None
    _compiled: CompiledHomotopy | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if not (self.start.is_square() and self.target.is_square()):
            raise ValueError("homotopy systems must be square")
        if self.start.nvars != self.target.nvars:
            raise ValueError("start and target have different variable counts")
        if abs(abs(self.gamma) - 1) > 1e-12:
            raise ValueError("gamma must have unit modulus")
        if self.patch is None:
            self.patch = _default_patch(self.start.nvars + 1)

    @property
    def compiled(self) -> CompiledHomotopy:
        if self._compiled is None:
            self._compiled = CompiledHomotopy.build(self.start, self.target)
        return self._compiled

    def __call__(self, x: Sequence, t: float) -> np.ndarray:
        s = t + 1j * self.detour * t * (1 - t)
        return (1 - s) * self.gamma * self.start.eval(x) + s * self.target.eval(x)


def total_degree_start(F: PolySystem) -> tuple[PolySystem, np.ndarray]:
    """Start system {x_i^d_i - 1} and all tuples of d_i-th roots of unity."""
    if not F.is_square():
        raise ValueError(f"system is not square: {len(F)} equations in {F.nvars} variables")
    n = F.nvars
    degs = F.degrees
    if any(d < 1 for d in degs):
        raise ValueError("constant equation in system")
    xs = MultiPoly.variables(n)
    G = PolySystem([xs[i] ** d - 1 for i, d in enumerate(degs)])
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degs]
    starts = np.array(list(itertools.product(*roots)), dtype=complex).reshape(-1, n)
    return G, starts


def _to_projective(x: np.ndarray, patch: np.ndarray) -> np.ndarray:
    z = np.hstack([np.ones((x.shape[0], 1), dtype=complex), x.astype(complex)])
    scale = z @ patch
    return z / scale[:, None]


def _run_kernel(h: Homotopy, zstarts: np.ndarray, opts: TrackOptions, workers: int):
    c = h.compiled
    n1 = c.n + 1
    N = zstarts.shape[0]
    out_z = np.empty((N, n1), dtype=complex)
    out_status = np.empty(N, dtype=np.int64)
    out_t = np.empty(N)
    out_steps = np.empty(N, dtype=np.int64)
    out_rejects = np.empty(N, dtype=np.int64)
    out_polish = np.empty((N, max(opts.polish_iters, 1)))
    predictor = K.EULER if opts.predictor == "euler" else K.RK4
    arrays = c.arrays()

    def run(lo: int, hi: int) -> None:
        K.track_paths(zstarts[lo:hi], *arrays, h.patch.astype(complex), complex(h.gamma), float(h.detour),
                      opts.truncation, opts.initial_step, opts.min_step, opts.max_step, opts.growth_factor,
                      opts.growth_after, opts.shrink_factor, opts.corrector_iters, opts.corrector_tol,
                      opts.corrector_contraction, opts.divergence, opts.max_steps, predictor, opts.polish_iters,
                      opts.endgame_min_step, opts.endgame_max_steps,
                      out_z[lo:hi], out_status[lo:hi], out_t[lo:hi], out_steps[lo:hi], out_rejects[lo:hi],
                      out_polish[lo:hi])

    bounds = [(lo, min(lo + _CHUNK, N)) for lo in range(0, N, _CHUNK)]
    if workers <= 1 or len(bounds) <= 1:
        for lo, hi in bounds:
            run(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: run(*b), bounds))
    return out_z, out_status, out_steps + out_rejects, out_t


def _classify(h: Homotopy, out_z, out_status, steps, out_t, opts: TrackOptions,
              paths: Sequence[int]) -> list[TrackedSolution]:
    c = h.compiled
    n = c.n
    N = out_z.shape[0]
    z0 = out_z[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        x = out_z[:, 1:] / z0[:, None]
    allfinite = np.all(np.isfinite(x), axis=1)
    norms = np.where(allfinite, np.linalg.norm(np.where(np.isfinite(x), x, 0), axis=1), np.inf)
    candidates = (out_status == K.REACHED_END) & (norms <= opts.divergence)
    idx = np.flatnonzero(candidates)
    refined = np.array(x, dtype=complex)
    residual = np.full(N, np.inf)
    cond = np.full(N, np.inf)
    newton = np.full((N, 2), np.inf)
    noise = np.full(N, np.inf)
    scale = np.ones(N)
    if idx.size:
        pts = np.ascontiguousarray(x[idx])
        o_pts = np.empty_like(pts)
        o_res = np.empty(idx.size)
        o_cond = np.empty(idx.size)
        o_steps = np.full((idx.size, 2), np.inf)
        o_noise = np.empty(idx.size)
        o_scale = np.empty(idx.size)
        K.affine_diagnostics(pts, *c.arrays(), 2, o_pts, o_res, o_cond, o_steps, o_noise, o_scale)
        noise[idx] = o_noise
        scale[idx] = np.maximum(o_scale, 1.0)
        refined[idx] = o_pts
        residual[idx] = o_res
        cond[idx] = o_cond
        newton[idx] = o_steps
    sols = []
    for i in range(N):
        st = int(out_status[i])
        if st == K.DIVERGED or norms[i] > opts.divergence:
            status = DIVERGED  # includes endpoints at infinity of the chart
        elif not candidates[i]:
            status = SINGULAR
        else:
            d1, d2 = newton[i]
            # contraction, or both steps already at the roundoff level
            quadratic = d2 <= 0.1 * d1 or d2 <= noise[i]
            # A path continued all the way to t = 1 ends at a nonsingular
            # point, so there the Newton step only has to reach the roundoff
            # floor; endpoints taken from the truncation point must also pass
            # a fixed step bound, which keeps near-singular points out.
            step_ok = d2 < NEWTON_STEP_TOL or (out_t[i] == 1.0 and d2 <= noise[i])
            # large cancelling terms leave a residual floor proportional to their size
            if residual[i] < opts.residual_tol * scale[i] and quadratic and step_ok \
                    and cond[i] < opts.singular_cond:
                status = REGULAR
            else:
                status = SINGULAR
        pt = refined[i] if status != DIVERGED else x[i]
        if status == DIVERGED:
            is_real = False
        else:
            is_real = bool(np.max(np.abs(pt.imag) / (1 + np.abs(pt)), initial=0.0) < opts.reality_tol)
        sols.append(TrackedSolution(pt, float(residual[i]), status, is_real, int(paths[i]), float(cond[i]),
                                    int(steps[i])))
    return sols


def _check_starts(h: Homotopy, starts: np.ndarray) -> None:
    for k, x in enumerate(starts):
        r = np.linalg.norm(h.start.eval(x))
        if not r < 1e-10 * max(1.0, np.linalg.norm(x) ** max(h.start.degrees)):
            raise ValueError(f"start point {k} does not solve the start system (residual {r:.3g})")


def track_many(h: Homotopy, starts: np.ndarray, opts: TrackOptions = TrackOptions(), workers: int | None = None,
               check: bool = True) -> list[TrackedSolution]:
    starts = np.atleast_2d(np.asarray(starts, dtype=complex))
    if starts.shape[1] != h.start.nvars:
        raise ValueError(f"start points have {starts.shape[1]} coordinates, system has {h.start.nvars}")
    if check:
        _check_starts(h, starts)
    workers = default_workers() if workers is None else workers
    zs = _to_projective(starts, h.patch)
    out_z, out_status, steps, out_t = _run_kernel(h, zs, opts, workers)
    return _classify(h, out_z, out_status, steps, out_t, opts, range(len(starts)))


def track(h: Homotopy, x0: Sequence, opts: TrackOptions = TrackOptions()) -> TrackedSolution:
    """Track a single path from t = 0 to t = 1."""
    return track_many(h, np.asarray([x0], dtype=complex), opts, workers=1)[0]


def _rel_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise relative distances between rows of a and rows of b."""
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    s = 1 + np.maximum(np.linalg.norm(a, axis=1)[:, None], np.linalg.norm(b, axis=1)[None, :])
    return d / s


def _clusters(points: np.ndarray, tol: float) -> list[list[int]]:
    """Group rows closer than ``tol`` (relative) with union-find."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    block = 512
    for lo in range(0, n, block):
        d = _rel_dist(points[lo:lo + block], points)
        for a, b in zip(*np.nonzero(d < tol)):
            i, j = lo + int(a), int(b)
            if i < j:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def distinct_regular(sols: Iterable[TrackedSolution], tol: float = 1e-6) -> list[TrackedSolution]:
    regs = [s for s in sols if s.is_regular]
    if not regs:
        return []
    groups = _clusters(np.array([s.point for s in regs]), tol)
    return [regs[min(g)] for g in sorted(groups, key=min)]


def _sort_key(s: TrackedSolution):
    coords = tuple(v for z in s.point for v in (round(float(z.real), 6), round(float(z.imag), 6))) \
        if s.status != DIVERGED else ()
    return (_STATUS_ORDER[s.status], coords, s.path)


def _sorted(sols: list[TrackedSolution]) -> list[TrackedSolution]:
    for s in sols:
        s.point = s.point + 0.0  # drop negative zeros
    return sorted(sols, key=_sort_key)


def _track_with_retries(h: Homotopy, starts: np.ndarray, opts: TrackOptions, workers: int) -> list[TrackedSolution]:
    """Track all paths; paths landing on the same regular endpoint are
    re-tracked with smaller steps, which cures most path jumping."""
    sols = track_many(h, starts, opts, workers, check=False)
    cur = opts
    for _ in range(opts.retrack_rounds):
        regs = [i for i, s in enumerate(sols) if s.is_regular]
        if len(regs) < 2:
            break
        groups = _clusters(np.array([sols[i].point for i in regs]), opts.dedup_tol)
        redo = sorted(regs[j] for g in groups if len(g) > 1 for j in g)
        if not redo:
            break
        cur = replace(cur, max_step=cur.max_step / 4, initial_step=min(cur.initial_step, cur.max_step / 4) / 2)
        again = track_many(h, starts[redo], cur, workers, check=False)
        for i, s in zip(redo, again):
            s.path = i
            sols[i] = s
    return sols


def solve(F: PolySystem, seed: int = 0, opts: TrackOptions = TrackOptions(),
          workers: int | None = None) -> list[TrackedSolution]:
    """All endpoints of the gamma-trick total-degree homotopy, one per path,
    in a deterministic order (regular first, then by rounded coordinates)."""
    if not F.is_square():
        raise ValueError(f"system is not square: {len(F)} equations in {F.nvars} variables")
    G, starts = total_degree_start(F)
    rng = np.random.default_rng(seed)
    gamma = _seeded_unit(rng)
    patch = rng.normal(size=F.nvars + 1) + 1j * rng.normal(size=F.nvars + 1)
    h = Homotopy(G, F, gamma=gamma, patch=patch / np.linalg.norm(patch))
    workers = default_workers() if workers is None else workers
    return _sorted(_track_with_retries(h, starts, opts, workers))


def parameter_track(family: Callable[[np.ndarray], PolySystem], q0: Sequence, q1: Sequence, starts: np.ndarray,
                    opts: TrackOptions = TrackOptions(), detour: float = 0.0, seed: int = 0,
                    workers: int | None = None) -> list[TrackedSolution]:
    """Continue solutions of family(q0) to family(q1) along q0 + s (q1 - q0).

    ``family`` must be affine-linear in q (for instance, coefficients of the
    polynomials taken as parameters); then the homotopy is exactly the
    parameter path.  Output order matches the order of ``starts``.
    """
    q0 = np.asarray(q0)
    q1 = np.asarray(q1)
    starts = np.atleast_2d(np.asarray(starts, dtype=complex))
    F0, F1 = family(q0), family(q1)
    if q0.shape == q1.shape and np.array_equal(q0, q1):
        out = []
        for i, x in enumerate(starts):
            r = float(np.linalg.norm(F0.eval(x)))
            real = bool(np.max(np.abs(x.imag) / (1 + np.abs(x)), initial=0.0) < opts.reality_tol)
            out.append(TrackedSolution(x.copy(), r, REGULAR if r < opts.residual_tol else SINGULAR, real, i))
        return out
    rng = np.random.default_rng(seed)
    patch = rng.normal(size=F0.nvars + 1) + 1j * rng.normal(size=F0.nvars + 1)
    h = Homotopy(F0, F1, gamma=1.0, detour=detour, patch=patch / np.linalg.norm(patch))
    for k, x in enumerate(starts):
        r = np.linalg.norm(F0.eval(x))
        if not r < 1e-8 * max(1.0, np.linalg.norm(x)) ** max(F0.degrees):
            raise ValueError(f"start {k} does not solve the initial system (residual {r:.3g})")
    workers = default_workers() if workers is None else workers
    sols = track_many(h, starts, opts, workers, check=False)
    return sols


def classify_real(sols: Iterable[TrackedSolution], tol: float = 1e-6, real_system: bool = True) -> tuple[int, int]:
    """(number of real solutions, number of conjugate pairs) among the
    distinct regular solutions."""
    regs = distinct_regular(sols, tol)
    real = [s for s in regs if s.is_real]
    nonreal = [s for s in regs if not s.is_real]
    if not nonreal:
        return len(real), 0
    pts = np.array([s.point for s in nonreal])
    d = _rel_dist(pts, pts.conj())
    used = np.zeros(len(nonreal), dtype=bool)
    pairs = 0
    for i in np.argsort(pts[:, 0].imag, kind="stable"):
        if used[i]:
            continue
        order = np.argsort(d[i], kind="stable")
        j = next((int(j) for j in order if j != i and not used[j]), None)
        if j is None or d[i, j] >= tol:
            if real_system:
                raise PairingError(f"solution {nonreal[i].point} has no conjugate partner")
            continue
        used[i] = used[j] = True
        pairs += 1
    return len(real), pairs
