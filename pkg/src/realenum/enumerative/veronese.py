"""Flat limit of the Veronese surface and the resulting real count."""

from __future__ import annotations

import numpy as np

from ..geometry import FOUR_PLANE_IDEALS, four_planes
from ..polysys import VERONESE_VARS, MultiPoly, monomial_min_primes, veronese_generators, veronese_generators_symbolic
from ..schubert import BoxShape, degree

__all__ = ["veronese_limit_check", "veronese_count", "parametrization_check"]


def parametrization_check() -> bool:
    """x_ii = t u_i^2, x_ij = u_i u_j kills every generator identically."""
    t, u1, u2, u3 = MultiPoly.variables(4)
    u = (u1, u2, u3)
    subs = []
    for i in range(3):
        for j in range(i, 3):
            subs.append(t * u[i] ** 2 if i == j else u[i] * u[j])
    gens = veronese_generators_symbolic()
    # generator variables: the six x's then t
    return all(len(g.compose(subs + [t]).terms) == 0 for g in gens)


def veronese_limit_check(rng: np.random.Generator | None = None) -> dict:
    """Minimal primes of the t = 0 ideal against the four coordinate planes."""
    rng = np.random.default_rng(0) if rng is None else rng
    gens = veronese_generators(0)
    primes = monomial_min_primes(gens)
    expected = sorted((frozenset(s) for s in FOUR_PLANE_IDEALS), key=lambda s: (len(s), sorted(s)))
    planes = four_planes(np.eye(6, dtype=int))
    vanish = True
    for P in planes:
        for _ in range(3):
            x = rng.normal(size=3) @ np.asarray(P.basis, dtype=float)
            vanish &= all(abs(g(x)) == 0 for g in gens)
    names = [sorted(VERONESE_VARS[i] for i in p) for p in primes]
    return {
        "ok": primes == expected and vanish and parametrization_check(),
        "components": names,
        "count": len(primes),
        "planes_annihilate_generators": bool(vanish),
        "parametrization": parametrization_check(),
    }


def veronese_count() -> int:
    """Choices of one plane per degenerate Veronese, times the Schubert degree."""
    return 4**9 * degree(BoxShape(3, 3))
