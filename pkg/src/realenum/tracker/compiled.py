"""Flatten a pair of polynomial systems into the arrays the kernels consume."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..polysys import PolySystem


def _parent(e: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    k = max(i for i, x in enumerate(e) if x)
    f = list(e)
    f[k] -= 1
    return tuple(f), k


@dataclass(frozen=True)
class CompiledHomotopy:
    """Projectivized start/target pair as term arrays.

    Variable 0 is the homogenizing coordinate.  System 0 is the start,
    system 1 the target; equation i of both is homogenized to the larger of
    their two degrees.
    """

    n: int
    degrees: tuple[int, ...]
    mon_parent: np.ndarray
    mon_var: np.ndarray
    f_sys: np.ndarray
    f_eq: np.ndarray
    f_mon: np.ndarray
    f_coef: np.ndarray
    j_sys: np.ndarray
    j_eq: np.ndarray
    j_var: np.ndarray
    j_mon: np.ndarray
    j_coef: np.ndarray

    @classmethod
    def build(cls, start: PolySystem, target: PolySystem) -> "CompiledHomotopy":
        if not (start.is_square() and target.is_square()):
            raise ValueError("homotopy systems must be square")
        if start.nvars != target.nvars:
            raise ValueError("start and target have different variable counts")
        n = start.nvars
        degrees = tuple(max(g.degree(), f.degree()) for g, f in zip(start.polys, target.polys))
        homog = [[p.homogenize(d) for p, d in zip(sys.polys, degrees)] for sys in (start, target)]

        needed: set[tuple[int, ...]] = set()
        for sys in homog:
            for p in sys:
                for e in p.terms:
                    needed.add(e)
                    for j, k in enumerate(e):
                        if k:
                            f = list(e)
                            f[j] -= 1
                            needed.add(tuple(f))
        zero = (0,) * (n + 1)
        closed: set[tuple[int, ...]] = {zero}
        stack = list(needed)
        while stack:
            e = stack.pop()
            if e in closed:
                continue
            closed.add(e)
            par, _ = _parent(e)
            if par not in closed:
                stack.append(par)
        order = sorted(closed, key=lambda e: (sum(e), e))
        index = {e: i for i, e in enumerate(order)}
        mon_parent = np.zeros(len(order), dtype=np.int64)
        mon_var = np.zeros(len(order), dtype=np.int64)
        mon_parent[0] = -1
        for e, i in index.items():
            if i:
                par, k = _parent(e)
                mon_parent[i] = index[par]
                mon_var[i] = k

        f_rows, j_rows = [], []
        for s, sys in enumerate(homog):
            for q, p in enumerate(sys):
                for e in sorted(p.terms):
                    c = complex(p.terms[e])
                    f_rows.append((s, q, index[e], c))
                    for j, k in enumerate(e):
                        if k:
                            f = list(e)
                            f[j] -= 1
                            j_rows.append((s, q, j, index[tuple(f)], c * k))

        def col(rows, i, dtype):
            return np.array([r[i] for r in rows], dtype=dtype)

        return cls(
            n=n,
            degrees=degrees,
            mon_parent=mon_parent,
            mon_var=mon_var,
            f_sys=col(f_rows, 0, np.int64),
            f_eq=col(f_rows, 1, np.int64),
            f_mon=col(f_rows, 2, np.int64),
            f_coef=col(f_rows, 3, np.complex128),
            j_sys=col(j_rows, 0, np.int64),
            j_eq=col(j_rows, 1, np.int64),
            j_var=col(j_rows, 2, np.int64),
            j_mon=col(j_rows, 3, np.int64),
            j_coef=col(j_rows, 4, np.complex128),
        )

    def arrays(self) -> tuple:
        return (self.mon_parent, self.mon_var, self.f_sys, self.f_eq, self.f_mon, self.f_coef,
                self.j_sys, self.j_eq, self.j_var, self.j_mon, self.j_coef)
