"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion
printed in the terminal summary.

Counts that come from the literature are compared with hard-coded values;
derived values are recomputed here from independent formulas.

Time budgets are stated for a 4-core machine. On a host with fewer cores
the wall-clock budget is scaled by 4 / cores (the work is path-parallel),
and the detail line reports both the measured time and the budget used.
"""

import math
import os
import time

import numpy as np
import pytest

from realenum.enumerative import (
    ConicChart,
    build_conics_mixed,
    chasles_table,
    load_fixture,
    maximal_config_verify,
    mixed_table_problems,
    parametrization_check,
    random_instance,
    solve_instance,
    veronese_count,
    veronese_limit_check,
)
from realenum.jsonio import dumps
from realenum.schubert import BoxShape, ClassSum, degree, power, witness_cycle_class, witness_cycle_signatures
from realenum.tracker import Homotopy, TrackOptions, total_degree_start, track_many

CORES = os.cpu_count() or 1
WORKERS = CORES
B33 = BoxShape(3, 3)


def budget(seconds_on_4_cores: float) -> float:
    return seconds_on_4_cores * 4 / min(CORES, 4)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_c01_sigma1_fourth_power(criterion):
    sig1 = ClassSum.schubert((1,), B33)
    got, dt = timed(lambda: power(sig1, 4).as_dict())
    expected = {"(3,1)": 3, "(2,2)": 2, "(2,1,1)": 3}
    ok = got == expected and dt < 1.0
    criterion(1, ok, f"sigma1^4 = {got}  ({dt:.3f} s < 1 s)")
    assert ok


def test_c02_degree(criterion):
    (d33, d22), dt = timed(lambda: (degree(B33), degree(BoxShape(2, 2))))
    formula = math.factorial(1) * math.factorial(2) * math.factorial(9) // (
        math.factorial(3) * math.factorial(4) * math.factorial(5))
    ok = d33 == 42 == formula and d22 == 2 and dt < 1.0
    criterion(2, ok, f"degree 3x3 = {d33} (formula {formula}), 2x2 = {d22}  ({dt:.3f} s < 1 s)")
    assert ok


def test_c03_witness_cycle(criterion):
    (sigs, total), dt = timed(lambda: (witness_cycle_signatures(), witness_cycle_class()))
    target = power(ClassSum.schubert((1,), B33), 4)
    ok = len(sigs) == 8 and total == target and dt < 1.0
    criterion(3, ok, f"{len(sigs)} components summing to {total.as_dict()}  ({dt:.3f} s < 1 s)")
    assert ok


def test_c04_veronese_limit(criterion):
    (rep, param), dt = timed(lambda: (veronese_limit_check(), parametrization_check()))
    ok = rep["ok"] and rep["count"] == 4 and param and dt < 1.0
    criterion(4, ok, f"{rep['count']} minimal primes {rep['components']}, parametrization {param}  ({dt:.3f} s < 1 s)")
    assert ok


def _lines4_batch(workers):
    out = []
    for seed in range(50):
        inst = random_instance("lines4", np.random.default_rng(seed), real=True)
        out.append(solve_instance(inst, seed=seed, workers=workers))
    return out


def test_c05_lines(criterion):
    results, dt = timed(lambda: _lines4_batch(WORKERS))
    fixture = solve_instance(load_fixture("lines4_real"), seed=0, workers=WORKERS)
    counts_ok = all(r.n_regular == 2 and r.pairing_ok and r.n_real + 2 * r.n_pairs == 2 for r in results)
    real_split = sorted({(r.n_real, r.n_pairs) for r in results})
    ok = counts_ok and fixture.n_regular == 2 and fixture.n_real == 2 and dt < budget(5.0)
    criterion(5, ok, f"50 instances with 2 regular, (real, pairs) seen {real_split}; fixture {fixture.n_real} real  "
                     f"({dt:.2f} s < {budget(5.0):.0f} s)")
    assert ok


def test_c06_planes(criterion):
    def run():
        out = []
        for seed in range(5):
            inst = random_instance("planes9", np.random.default_rng(seed), real=False)
            out.append(solve_instance(inst, seed=seed, workers=WORKERS))
        return out

    results, dt = timed(run)
    fixture, dt_fix = timed(lambda: solve_instance(load_fixture("planes9_real"), seed=0, workers=WORKERS))
    per = [(r.n_regular, len(r.solutions), r.attempts) for r in results]
    counts_ok = all(n == 42 and paths == 19683 for n, paths, _ in per)
    fix_ok = fixture.n_regular == 42 and fixture.n_real == 42 and fixture.pairing_ok
    ok = counts_ok and fix_ok and dt < budget(600) and dt_fix < budget(600)
    criterion(6, ok, f"(regular, paths, attempts) {per} ({dt:.0f} s < {budget(600):.0f} s); "
                     f"fixture {fixture.n_real} real of {fixture.n_regular} ({dt_fix:.0f} s)")
    assert ok


def test_c07_conic_table(criterion):
    probs = mixed_table_problems(np.random.default_rng(7), real=True)
    counts, dt = timed(lambda: [solve_instance(p, seed=7, workers=WORKERS).n_regular for p in probs])
    ok = counts == [1, 2, 4, 4, 2, 1] and dt < budget(60)
    criterion(7, ok, f"5 points .. 5 lines: {counts}  ({dt:.1f} s < {budget(60):.0f} s)")
    assert ok


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_c08_chasles(criterion, seed):
    inst = random_instance("conics5", np.random.default_rng(seed), real=False)
    res, dt = timed(lambda: solve_instance(inst, seed=seed, workers=WORKERS))
    ok = res.n_regular == 3264 and res.n_rank2 == 0 and len(res.solutions) == 7776 and dt < budget(900)
    criterion(8, ok, f"seed {seed}: {res.n_regular} regular rank-3 conics, {res.n_rank2} rank 2, "
                     f"{len(res.solutions)} paths per attempt, {res.attempts} attempt(s)  "
                     f"({dt:.0f} s < {budget(900):.0f} s)")
    assert ok


def test_c09_maximal_configuration(criterion):
    rep, dt = timed(lambda: maximal_config_verify(load_fixture("maximal_conics"), seed=0, workers=WORKERS))
    ok = rep["counts_ok"] and rep["maximal"] and rep["real_total"] == 102 and dt < budget(120)
    criterion(9, ok, f"{rep['real_total']} of {rep['expected_total']} real over {len(rep['subproblems'])} "
                     f"subproblems  ({dt:.1f} s < {budget(120):.0f} s)")
    assert ok


def test_c10_arithmetic(criterion):
    (count, (degrees, total)), dt = timed(lambda: (veronese_count(), chasles_table()))
    ok = count == 11010048 == 4 ** 9 * 42 and total == 3264 and list(degrees) == [1, 2, 4, 4, 2, 1] and dt < 1.0
    criterion(10, ok, f"veronese count {count}, chasles total {total}  ({dt:.3f} s < 1 s)")
    assert ok


def _report(res):
    return dumps({"summary": res.summary(), "solutions": [s.to_json() for s in res.accepted],
                  "figures": [s.to_json() for s in res.figures]})


def _determinism_payload(workers):
    parts = [_report(r) for r in _lines4_batch(workers)]
    probs = mixed_table_problems(np.random.default_rng(7), real=True)
    parts += [_report(solve_instance(p, seed=7, workers=workers)) for p in probs]
    parts.append(dumps(maximal_config_verify(load_fixture("maximal_conics"), seed=0, workers=workers)))
    parts.append(_report(solve_instance(load_fixture("planes9_real"), seed=0, workers=workers)))
    # a slice of the conics5 paths: same kernel, same chunking, far cheaper than all 7776
    inst = random_instance("conics5", np.random.default_rng(0), real=False)
    F = build_conics_mixed(inst.data, ConicChart.random(np.random.default_rng(0)))
    G, starts = total_degree_start(F)
    h = Homotopy(G, F, gamma=np.exp(0.7j))
    sols = track_many(h, starts[::13], TrackOptions(), workers)
    parts.append(dumps([s.to_json() for s in sols]))
    return "\n".join(parts)


@pytest.mark.slow
def test_c11_determinism(criterion):
    ref = _determinism_payload(1)
    same = {w: _determinism_payload(w) == ref for w in (2, 8)}
    ok = all(same.values())
    criterion(11, ok, f"byte-identical to 1 worker: {same} (lines4 x50, conic table, maximal fixture, "
                      f"planes9 fixture, 599 conics5 paths)")
    assert ok
