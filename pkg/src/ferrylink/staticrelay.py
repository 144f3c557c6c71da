"""Hover-point optimization for the regime where both hops coexist.

The end-to-end rate at relay position ``d_rg`` (distance to the far-side
station, with ``D - d_rg`` to the near-side swarm) is the minimum of the two
hop rates. The rate-vs-position function is piecewise constant with jumps at
the mode-switching thresholds of either hop, so the optimum is found by
evaluating every in-box threshold (from both hops), the box endpoints, and one
interior probe per gap; the probes matter because the half-open mode intervals
make some interval interiors strictly better than their endpoints.

Boundary convention: a hop sitting exactly at the maximum communication
distance is treated as still connected at the outermost positive-rate mode,
matching the usable closure of the placement box. The one exception is the
degenerate geometry where *both* hops sit at maximum range (the end-to-end
distance equals twice the range): that placement is classified as static but
achieves zero rate and is flagged instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass

from .acm import AcmTable, select_mode
from .errors import DirectLinkPossible, InfeasiblePlacement, MobileRelayRequired

_EPS = 1e-9


def boundary_se(table: AcmTable, d: float) -> float:
    """Spectral efficiency with the max-range endpoint inclusive."""
    if d > table.d_max + _EPS:
        raise InfeasiblePlacement(f"{d} m exceeds the maximum range {table.d_max} m")
    if d >= table.d_max - _EPS:
        return table.modes[1].spectral_efficiency
    return table.modes[select_mode(table, d)].spectral_efficiency


def e2e_se(table: AcmTable, big_d: float, d_rg: float) -> float:
    """End-to-end spectral efficiency per stream at hover position ``d_rg``."""
    d_dr = big_d - d_rg
    for name, d in (("d_rg", d_rg), ("d_dr", d_dr)):
        if not table.d_min - _EPS <= d <= table.d_max + _EPS:
            raise InfeasiblePlacement(
                f"{name} = {d} m outside [{table.d_min}, {table.d_max}] m for D = {big_d} m"
            )
    if d_rg >= table.d_max - _EPS and d_dr >= table.d_max - _EPS:
        return 0.0  # both hops pinned at maximum range
    return min(boundary_se(table, d_rg), boundary_se(table, d_dr))


@dataclass(frozen=True)
class OptimalInterval:
    lo_m: float
    hi_m: float
    lo_inclusive: bool
    hi_inclusive: bool

    def to_dict(self):
        return {"lo_m": self.lo_m, "hi_m": self.hi_m,
                "lo_inclusive": self.lo_inclusive, "hi_inclusive": self.hi_inclusive}


@dataclass(frozen=True)
class StaticPlacementResult:
    max_per_ta_se: float
    optimal_intervals: tuple[OptimalInterval, ...]
    critical_points: tuple[tuple[float, float, float], ...]  # (d_rg, d_dr, se)
    empty_positive_rate: bool = False

    def to_dict(self):
        return {
            "max_per_ta_se": self.max_per_ta_se,
            "optimal_intervals": [iv.to_dict() for iv in self.optimal_intervals],
            "critical_points": [
                {"d_rg_m": a, "d_dr_m": b, "e2e_se": c} for a, b, c in self.critical_points
            ],
            "empty_positive_rate": self.empty_positive_rate,
        }


def optimize(table: AcmTable, big_d: float) -> StaticPlacementResult:
    """Best hover position(s) for end-to-end distance ``big_d``."""
    d_max, d_min = table.d_max, table.d_min
    if big_d > 2.0 * d_max + _EPS:
        raise MobileRelayRequired(
            f"D = {big_d} m exceeds the combined range {2 * d_max} m; use the ferry loop"
        )
    if big_d <= d_max:
        raise DirectLinkPossible(f"D = {big_d} m is within a single hop's range")

    lo = max(d_min, big_d - d_max)
    hi = min(d_max, big_d - d_min)
    if lo > hi + _EPS:
        raise InfeasiblePlacement(f"no feasible hover position for D = {big_d} m")

    candidates = {lo, hi}
    for mode in table.modes:
        for cand in (mode.switch_threshold_m, big_d - mode.switch_threshold_m):
            if lo - _EPS <= cand <= hi + _EPS:
                candidates.add(min(max(cand, lo), hi))
    points = sorted(candidates)
    merged = [points[0]]
    for c in points[1:]:
        if c - merged[-1] > _EPS:
            merged.append(c)
    points = merged

    point_vals = [e2e_se(table, big_d, c) for c in points]
    probe_vals = [e2e_se(table, big_d, (a + b) / 2.0)
                  for a, b in zip(points, points[1:])]
    best = max(point_vals + probe_vals) if probe_vals else max(point_vals)

    intervals = []
    run_start = None  # index into points
    # Walk points and gaps alternately; a "run" is a maximal stretch at best.
    for i, c in enumerate(points):
        at_best_point = point_vals[i] == best
        at_best_gap = i < len(probe_vals) and probe_vals[i] == best
        if run_start is None and (at_best_point or at_best_gap):
            run_start = i
        ends_here = run_start is not None and not at_best_gap
        if ends_here:
            intervals.append(OptimalInterval(
                lo_m=points[run_start], hi_m=c,
                lo_inclusive=point_vals[run_start] == best,
                hi_inclusive=at_best_point,
            ))
            run_start = None

    crit = tuple((c, big_d - c, v) for c, v in zip(points, point_vals))
    return StaticPlacementResult(
        max_per_ta_se=best,
        optimal_intervals=tuple(intervals),
        critical_points=crit,
        empty_positive_rate=best == 0.0,
    )
