"""Versioned JSON fixtures of real configurations, and their constructors."""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Sequence

import numpy as np

from ..geometry import ProjSubspace
from .conics import MaximalConfig, figure_seed_config
from .problems import ProblemInstance

__all__ = [
    "FIXTURE_VERSION",
    "osculating_flag",
    "osculating_planes_instance",
    "tangent_lines_instance",
    "load_fixture",
    "fixture_names",
    "fixture_payload",
]

FIXTURE_VERSION = 1
_FILES = {
    "lines4_real": "lines4_real.json",
    "planes9_real": "planes9_real.json",
    "maximal_conics": "maximal_conics.json",
}


def osculating_flag(theta: float, m: int, r: int) -> np.ndarray:
    """Span of the first r derivatives of the rational normal curve in P^(m-1)
    at angle theta, in the balanced parametrization
    gamma_k(theta) = sqrt(C(m-1, k)) cos^(m-1-k) sin^k."""
    d = m - 1
    w = np.array([math.sqrt(math.comb(d, k)) for k in range(m)])
    # derivatives of cos^a sin^b via the binomial expansion in e^{i theta}
    rows = []
    for order in range(r):
        row = np.empty(m)
        for k in range(m):
            row[k] = w[k] * _trig_derivative(d - k, k, theta, order)
        rows.append(row)
    return np.array(rows)


def _trig_derivative(a: int, b: int, theta: float, order: int) -> float:
    # cos^a sin^b = sum over expansions of ((e^{it}+e^{-it})/2)^a ((e^{it}-e^{-it})/2i)^b
    total = 0j
    for j in range(a + 1):
        for k in range(b + 1):
            freq = (a - 2 * j) + (b - 2 * k)
            coef = math.comb(a, j) * math.comb(b, k) * (-1) ** k / (2 ** (a + b) * (1j) ** b)
            total += coef * (1j * freq) ** order * np.exp(1j * freq * theta)
    return float(total.real)


def _angles(count: int) -> list[float]:
    return [math.pi * (k + 0.5) / count for k in range(count)]


def osculating_planes_instance(angles: Sequence[float] | None = None) -> ProblemInstance:
    """Nine planes osculating the rational normal curve in P^5 at real points;
    all 42 planes meeting them are real."""
    angles = _angles(9) if angles is None else angles
    return ProblemInstance("planes9", [ProjSubspace(osculating_flag(a, 6, 3)) for a in angles])


def tangent_lines_instance(angles: Sequence[float] | None = None) -> ProblemInstance:
    """Four lines tangent to the twisted cubic at real points; both lines
    meeting them are real."""
    angles = _angles(4) if angles is None else angles
    return ProblemInstance("lines4", [ProjSubspace(osculating_flag(a, 4, 2)) for a in angles])


def fixture_payload(name: str) -> dict:
    """Freshly constructed content of a fixture file."""
    if name == "lines4_real":
        body = tangent_lines_instance().to_json()
        note = "lines tangent to the twisted cubic at four real points"
    elif name == "planes9_real":
        body = osculating_planes_instance().to_json()
        note = "planes osculating the rational normal curve at nine real points"
    elif name == "maximal_conics":
        body = figure_seed_config().to_json()
        note = "five points on five lines; every one of the 32 point/line problems is fully real"
    else:
        raise KeyError(name)
    return {"version": FIXTURE_VERSION, "name": name, "description": note, "data": body}


def fixture_names() -> list[str]:
    return sorted(_FILES)


def load_fixture(name: str):
    """ProblemInstance (lines4_real, planes9_real) or MaximalConfig."""
    if name not in _FILES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    text = resources.files("realenum.fixtures").joinpath(_FILES[name]).read_text()
    payload = json.loads(text)
    if payload.get("version") != FIXTURE_VERSION:
        raise ValueError(f"fixture {name} has version {payload.get('version')}, expected {FIXTURE_VERSION}")
    if name == "maximal_conics":
        return MaximalConfig.from_json(payload["data"])
    return ProblemInstance.from_json(payload["data"])
