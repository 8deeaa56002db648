"""Tri-local bound comparisons, parameter sweeps and polygon studies."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .correlator import (
    distribution,
    polygon_closed_form,
    prob_all_equal,
    ring_conditional_all_given_prefix,
    ring_prob_all_equal,
)
from .ejm import THETA_MAX, basis_entanglement
from .network import RingNetwork
from .sources import Partial, Singlet, SourceSpec, Werner, parse_sources

TRILOCAL_BOUND = Fraction(61, 256)

DEFAULT_POINTS = {"theta": 500, "alpha": 500, "noise": 200}

FIG5_THETAS = {
    "0": 0.0,
    "pi_8": np.pi / 8,
    "pi_4": np.pi / 4,
    "3pi_8": 3 * np.pi / 8,
    "7pi_16": 7 * np.pi / 16,
    "pi_2": np.pi / 2,
}
FIG6_THETAS = {k: v for k, v in FIG5_THETAS.items() if k != "7pi_16"}


def trilocal_bound() -> Fraction:
    """Largest p(a=b=c) reached by the natural tri-local model family."""
    return TRILOCAL_BOUND


@dataclass
class SweepCurve:
    parameter: str
    grid: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)
    evaluate: Callable[[float], float] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.shape != self.values.shape or self.grid.ndim != 1:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("sweep grid must be strictly increasing")


@dataclass
class BoundComparison:
    bound: float
    crossings: list[float]
    regions_above: list[tuple[float, float]]


def _as_sources(sources: str | Sequence[SourceSpec]) -> tuple[SourceSpec, ...]:
    if isinstance(sources, str):
        return parse_sources(sources)
    return tuple(sources)


def triangle_all_equal(sources: str | Sequence[SourceSpec], theta: float) -> float:
    return prob_all_equal(distribution(RingNetwork(_as_sources(sources)), theta))


def sweep_theta(sources: str | Sequence[SourceSpec], grid: Sequence[float]) -> SweepCurve:
    specs = _as_sources(sources)
    label = sources if isinstance(sources, str) else " ".join(s.label() for s in specs)

    def evaluate(theta: float) -> float:
        return triangle_all_equal(specs, theta)

    grid = np.asarray(grid, dtype=float)
    if grid.size and (grid.min() < 0 or grid.max() > THETA_MAX + 1e-15):
        raise ValueError("theta grid must lie in [0, pi/2]")
    values = [evaluate(t) for t in grid]
    return SweepCurve("theta", grid, values, {"sources": label}, evaluate)


def sweep_alpha(theta: float, grid: Sequence[float], phase: int = -1) -> SweepCurve:
    """All three sources ``Partial(alpha, phase)``."""

    def evaluate(alpha: float) -> float:
        return triangle_all_equal([Partial(alpha, phase)] * 3, theta)

    values = [evaluate(a) for a in grid]
    return SweepCurve("alpha", grid, values, {"theta": theta, "phase": phase}, evaluate)


def sweep_noise(theta: float, grid: Sequence[float]) -> SweepCurve:
    """All three sources ``Werner(V)``; density-matrix path."""

    def evaluate(v: float) -> float:
        return triangle_all_equal([Werner(v)] * 3, theta)

    values = [evaluate(v) for v in grid]
    return SweepCurve("noise", grid, values, {"theta": theta}, evaluate)


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_crossings(curve: SweepCurve, bound: float, tol: float = 1e-6) -> BoundComparison:
    """Locate where ``curve`` crosses ``bound``.

    Sign changes are bracketed on the grid and refined by bisection on the
    curve's evaluator (linear interpolation when it has none). Grid points
    lying exactly on the bound only count when the sign actually changes.
    """
    bound = float(bound)
    x, diff = curve.grid, curve.values - bound
    nonzero = np.flatnonzero(diff != 0)
    crossings: list[float] = []
    for j, k in zip(nonzero[:-1], nonzero[1:]):
        if (diff[j] > 0) == (diff[k] > 0):
            continue
        if k > j + 1:
            crossings.append(float(x[j + 1]))
        elif curve.evaluate is not None:
            crossings.append(_bisect(lambda t: curve.evaluate(t) - bound, x[j], x[k], tol))
        else:
            crossings.append(float(x[j] - diff[j] * (x[k] - x[j]) / (diff[k] - diff[j])))

    regions: list[tuple[float, float]] = []
    edges = [float(x[0])] + crossings + [float(x[-1])]
    for lo, hi in zip(edges[:-1], edges[1:]):
        inside = (x >= lo) & (x <= hi) & (diff != 0)
        if np.any(inside) and diff[inside][0] > 0:
            regions.append((lo, hi))
    return BoundComparison(bound, crossings, regions)


@dataclass
class PolygonReport:
    n_parties: int
    pattern: str
    theta: float
    all_equal: float
    conditional: float
    closed_form: Fraction | None = None

    @property
    def closed_form_error(self) -> float | None:
        if self.closed_form is None:
            return None
        return abs(self.all_equal - float(self.closed_form))


def polygon_study(n_parties: int, pattern: str | Sequence[SourceSpec], theta: float = 0.0) -> PolygonReport:
    """All-equal and prefix-conditional probabilities of an N-ring by contraction.

    A one-letter pattern (``"s"`` or ``"p"``) is repeated around the ring.
    """
    specs = _as_sources(pattern)
    if len(specs) == 1:
        specs = specs * n_parties
    if len(specs) != n_parties:
        raise ValueError(f"pattern has {len(specs)} sources for N={n_parties}")
    if not 3 <= n_parties <= 24:
        raise ValueError("polygon studies support 3 <= N <= 24")
    net = RingNetwork(specs)
    label = pattern if isinstance(pattern, str) else " ".join(s.label() for s in specs)
    closed = None
    if theta == 0 and all(isinstance(s, Singlet) for s in specs):
        closed = polygon_closed_form(n_parties)
    return PolygonReport(
        n_parties,
        label,
        theta,
        ring_prob_all_equal(net, theta),
        ring_conditional_all_given_prefix(net, theta),
        closed,
    )


def placement_study(pattern: str, theta: float = 0.0) -> dict[str, float]:
    """p(all equal) for every cyclic placement of a triangle pattern."""
    out = {}
    for k in range(len(pattern)):
        rotated = pattern[k:] + pattern[:k]
        out[rotated] = triangle_all_equal(rotated, theta)
    return out


# --- figure tables -------------------------------------------------------------


def figure_table(
    name: str, grid: Sequence[float] | None = None, max_n: int = 10
) -> tuple[list[str], list[list[float]]]:
    """Columns and rows reproducing one figure as data.

    ``grid`` overrides the default parameter grid (ignored for ``polygon``,
    which tabulates N = 3..max_n).
    """
    bound = float(TRILOCAL_BOUND)
    if name in ("fig2", "fig4"):
        grid = np.linspace(0.0, THETA_MAX, DEFAULT_POINTS["theta"]) if grid is None else grid
    elif name == "fig5":
        grid = np.linspace(0.0, 1.0, DEFAULT_POINTS["noise"]) if grid is None else grid
    elif name == "fig6":
        grid = np.linspace(0.0, 1.0, DEFAULT_POINTS["alpha"]) if grid is None else grid

    if name == "fig2":
        return ["theta", "entanglement_bits"], [[t, basis_entanglement(t)] for t in grid]
    if name == "fig4":
        curves = [sweep_theta(p, grid).values for p in ("sss", "ssp", "spp")]
        rows = [[t, *(c[i] for c in curves), bound] for i, t in enumerate(grid)]
        return ["theta", "p_sss", "p_ssp", "p_spp", "bound"], rows
    if name == "fig5":
        curves = [sweep_noise(t, grid).values for t in FIG5_THETAS.values()]
        cols = ["noise"] + [f"p_theta_{k}" for k in FIG5_THETAS] + ["bound"]
        return cols, [[v, *(c[i] for c in curves), bound] for i, v in enumerate(grid)]
    if name == "fig6":
        curves = [sweep_alpha(t, grid).values for t in FIG6_THETAS.values()]
        cols = ["alpha"] + [f"p_theta_{k}" for k in FIG6_THETAS] + ["bound"]
        return cols, [[a, *(c[i] for c in curves), bound] for i, a in enumerate(grid)]
    if name == "polygon":
        rows = []
        for n in range(3, max_n + 1):
            rep = polygon_study(n, "s", 0.0)
            rows.append([n, rep.all_equal, rep.conditional, float(rep.closed_form)])
        return ["n", "p_all_equal", "p_conditional", "closed_form"], rows
    raise KeyError(f"unknown figure {name!r}")


FIGURES = ("fig2", "fig4", "fig5", "fig6", "polygon")
