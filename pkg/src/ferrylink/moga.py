"""Elitist multi-objective genetic optimizer with a box-grid elite archive.

Two objectives: maximize delivered data, minimize delay. The elite archive
discretizes the observed objective ranges into ``n_box`` cells per axis and
keeps at most one member per occupied cell; a candidate enters only if no
member's cell dominates its cell, and cell ties are broken by range-normalized
distance to the cell's ideal corner. Ranges adapt: when a candidate falls
outside, the grid is rebuilt deterministically by re-inserting members in
their original insertion order.

Variation draws one parent from the main population and one from the archive;
with probability ``1 - p_cm`` they recombine linearly with a weight drawn from
``omega_range`` (an extended range allows extrapolation), otherwise both are
Gaussian-mutated. Offspring replace randomly chosen population members they
dominate on the grid. Everything is driven by one seeded generator, so runs
are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ConfigInvalid, EvaluationFailed
from .ferry.params import FerryParams, LatticeSnapWarning
from .ferry.sim import run as ferry_run


@dataclass(frozen=True)
class Individual:
    """Decision vector: hover points (m), caching and offloading fractions."""

    d_load: float
    d_offload: float
    alpha: float
    beta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d_load, self.d_offload, self.alpha, self.beta])

    @classmethod
    def from_array(cls, arr) -> "Individual":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3]))


@dataclass(frozen=True)
class ObjectiveVector:
    delivered_bits: float
    delay_s: float

    def __post_init__(self):
        if self.delivered_bits < 0 or self.delay_s < 0:
            raise ConfigInvalid("objectives must be non-negative")


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """Pareto dominance: no worse in both, strictly better in one."""
    if a.delivered_bits < b.delivered_bits or a.delay_s > b.delay_s:
        return False
    return a.delivered_bits > b.delivered_bits or a.delay_s < b.delay_s


@dataclass(frozen=True)
class Bounds:
    """Per-dimension decision box (alpha lower edge kept off zero)."""

    d_load: tuple[float, float]
    d_offload: tuple[float, float]
    alpha: tuple[float, float] = (1e-6, 1.0)
    beta: tuple[float, float] = (0.0, 1.0 - 1e-9)

    def lo(self) -> np.ndarray:
        return np.array([self.d_load[0], self.d_offload[0], self.alpha[0], self.beta[0]])

    def hi(self) -> np.ndarray:
        return np.array([self.d_load[1], self.d_offload[1], self.alpha[1], self.beta[1]])

    def repair(self, vec: np.ndarray) -> Individual:
        """Clamp into the box, then enforce beta < alpha by swap-with-margin."""
        v = np.minimum(np.maximum(vec, self.lo()), self.hi())
        alpha, beta = v[2], v[3]
        if beta >= alpha:
            alpha, beta = beta, alpha
            alpha = min(max(alpha, self.alpha[0]), self.alpha[1])
            beta = min(max(beta, self.beta[0]), self.beta[1])
            if beta >= alpha:
                beta = max(self.beta[0], alpha - 1e-3)
        return Individual(float(v[0]), float(v[1]), float(alpha), float(beta))

    def sample(self, rng: np.random.Generator) -> Individual:
        v = rng.uniform(self.lo(), self.hi())
        return self.repair(v)


@dataclass(frozen=True)
class MogaParams:
    population: int = 100
    generations: int = 200
    offspring: int = 20
    p_cm: float = 0.1
    omega_range: tuple[float, float] = (-0.25, 1.25)
    mutation_sigma: float = 0.1
    n_box: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ConfigInvalid("population must be >= 2")
        if self.generations < 1:
            raise ConfigInvalid("generations must be >= 1")
        if self.offspring < 2 or self.offspring % 2:
            raise ConfigInvalid("offspring must be an even count >= 2")
        if not 0.0 <= self.p_cm <= 1.0:
            raise ConfigInvalid("p_cm must be in [0, 1]")
        if self.n_box < 2:
            raise ConfigInvalid("n_box must be >= 2")
        if self.mutation_sigma < 0:
            raise ConfigInvalid("mutation sigma must be >= 0")


def crossover(rp: Individual, ra: Individual, omega: float, bounds: Bounds):
    """Extended linear recombination; both blends, repaired into the box."""
    a, b = rp.as_array(), ra.as_array()
    return (bounds.repair(omega * a + (1.0 - omega) * b),
            bounds.repair((1.0 - omega) * a + omega * b))


def mutate(r: Individual, params: MogaParams, bounds: Bounds,
           rng: np.random.Generator) -> Individual:
    """Gaussian perturbation scaled by each dimension's range."""
    scale = params.mutation_sigma * (bounds.hi() - bounds.lo())
    return bounds.repair(r.as_array() + rng.normal(0.0, 1.0, 4) * scale)


@dataclass
class ArchiveEntry:
    individual: Individual
    objectives: ObjectiveVector
    box: tuple[int, int] = (0, 0)


class EpsArchive:
    """Grid-based elite archive over (delivered up, delay down)."""

    def __init__(self, n_box: int):
        if n_box < 2:
            raise ConfigInvalid("n_box must be >= 2")
        self.n_box = n_box
        self.members: list[ArchiveEntry] = []
        self.lo = np.array([math.inf, math.inf])
        self.hi = np.array([-math.inf, -math.inf])

    def __len__(self):
        return len(self.members)

    def _widths(self) -> np.ndarray:
        span = np.maximum(self.hi - self.lo, 1e-12)
        return span / self.n_box

    def box_of(self, obj: ObjectiveVector) -> tuple[int, int]:
        """Cell coordinates, clamped to the grid."""
        if not np.all(np.isfinite(self.lo)):
            raise ConfigInvalid("archive ranges not initialized")
        w = self._widths()
        bi = int((obj.delivered_bits - self.lo[0]) // w[0])
        bj = int((obj.delay_s - self.lo[1]) // w[1])
        return (min(max(bi, 0), self.n_box - 1), min(max(bj, 0), self.n_box - 1))

    @staticmethod
    def _box_dominates(a: tuple[int, int], b: tuple[int, int]) -> bool:
        return a != b and a[0] >= b[0] and a[1] <= b[1]

    def _corner_distance(self, entry_obj: ObjectiveVector, box) -> float:
        w = self._widths()
        best_delivered = self.lo[0] + (box[0] + 1) * w[0]
        best_delay = self.lo[1] + box[1] * w[1]
        return math.hypot((best_delivered - entry_obj.delivered_bits) / w[0],
                          (entry_obj.delay_s - best_delay) / w[1])

    def _expand(self, obj: ObjectiveVector) -> bool:
        pt = np.array([obj.delivered_bits, obj.delay_s])
        new_lo = np.minimum(self.lo, pt)
        new_hi = np.maximum(self.hi, pt)
        if np.array_equal(new_lo, self.lo) and np.array_equal(new_hi, self.hi):
            return False
        self.lo, self.hi = new_lo, new_hi
        return True

    def insert(self, individual: Individual, objectives: ObjectiveVector) -> bool:
        """Try to add a candidate; True when it joins the archive."""
        if self._expand(objectives) and self.members:
            survivors = self.members
            self.members = []
            for entry in survivors:
                self._place(entry.individual, entry.objectives)
        return self._place(individual, objectives)

    def _place(self, individual: Individual, objectives: ObjectiveVector) -> bool:
        box = self.box_of(objectives)
        kept = []
        occupant: ArchiveEntry | None = None
        for entry in self.members:
            entry.box = self.box_of(entry.objectives)
            if self._box_dominates(entry.box, box):
                return False
            if entry.box == box:
                occupant = entry
                kept.append(entry)
            elif not self._box_dominates(box, entry.box):
                kept.append(entry)
        if occupant is not None:
            if dominates(occupant.objectives, objectives):
                self.members = kept
                return False
            if not dominates(objectives, occupant.objectives):
                if (self._corner_distance(objectives, box)
                        >= self._corner_distance(occupant.objectives, box)):
                    self.members = kept
                    return False
            kept = [e for e in kept if e is not occupant]
        kept.append(ArchiveEntry(individual, objectives, box))
        self.members = kept
        return True

    def eps_dominates(self, a: ObjectiveVector, b: ObjectiveVector) -> bool:
        """Grid-level dominance used for the population update."""
        box_a, box_b = self.box_of(a), self.box_of(b)
        if box_a == box_b:
            return dominates(a, b)
        return self._box_dominates(box_a, box_b)

    def to_records(self) -> list[dict]:
        recs = []
        for e in sorted(self.members, key=lambda e: (-e.objectives.delivered_bits,
                                                     e.objectives.delay_s)):
            recs.append({
                "d1_m": e.individual.d_load, "d2_m": e.individual.d_offload,
                "alpha": e.individual.alpha, "beta": e.individual.beta,
                "delivered_bits": e.objectives.delivered_bits,
                "delay_s": e.objectives.delay_s,
            })
        return recs


Evaluator = Callable[[Individual], ObjectiveVector]


def _evaluate(evaluator: Evaluator, ind: Individual) -> ObjectiveVector:
    try:
        return evaluator(ind)
    except EvaluationFailed:
        raise
    except Exception as exc:
        raise EvaluationFailed(f"objective evaluation failed: {exc}",
                               individual=ind) from exc


def run(bounds: Bounds, params: MogaParams, evaluator: Evaluator,
        on_generation: Optional[Callable[[int, EpsArchive], None]] = None) -> EpsArchive:
    """Generational loop; returns the final elite archive."""
    rng = np.random.default_rng(params.seed)
    population = [bounds.sample(rng) for _ in range(params.population)]
    objectives = [_evaluate(evaluator, ind) for ind in population]

    archive = EpsArchive(params.n_box)
    for ind, obj in zip(population, objectives):
        archive.insert(ind, obj)
    if on_generation is not None:
        on_generation(0, archive)

    for g in range(1, params.generations + 1):
        offspring: list[Individual] = []
        for _ in range(params.offspring // 2):
            rp = population[int(rng.integers(len(population)))]
            ra = archive.members[int(rng.integers(len(archive)))].individual
            if rng.random() > params.p_cm:
                omega = float(rng.uniform(*params.omega_range))
                offspring.extend(crossover(rp, ra, omega, bounds))
            else:
                offspring.append(mutate(rp, params, bounds, rng))
                offspring.append(mutate(ra, params, bounds, rng))
        child_objs = [_evaluate(evaluator, c) for c in offspring]
        for child, obj in zip(offspring, child_objs):
            archive.insert(child, obj)
        for child, obj in zip(offspring, child_objs):
            j = int(rng.integers(len(population)))
            if archive.eps_dominates(obj, objectives[j]):
                population[j] = child
                objectives[j] = obj
        if on_generation is not None:
            on_generation(g, archive)
    return archive


def ferry_evaluator(template: FerryParams) -> Evaluator:
    """Objective function: replay the ferry loop with a candidate's decisions.

    Delay is the time to reach the template's rate floor; candidates that
    never reach it get a penalized delay beyond the horizon, scaled by the
    delivery deficit, so reaching candidates always win on that axis.
    Candidates whose hover points cannot both fit the end-to-end distance are
    assigned the worst corner outright.
    """
    import warnings

    horizon = template.t_total_s
    floor = template.rate_floor_bps

    def evaluate(ind: Individual) -> ObjectiveVector:
        if ind.d_load + ind.d_offload > template.big_d:
            return ObjectiveVector(0.0, 2.0 * horizon + 1.0)
        params = replace(template, d_load=ind.d_load, d_offload=ind.d_offload,
                         alpha=ind.alpha, beta=ind.beta)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LatticeSnapWarning)
            _, metrics = ferry_run(params)
        delivered = metrics.delivered_total_bits
        if metrics.delay_to_rate_floor_s is not None:
            delay = metrics.delay_to_rate_floor_s
        elif floor > 0:
            deficit = max(floor * horizon - delivered, 0.0)
            delay = horizon + deficit / floor
        else:
            delay = horizon + template.dt_s
        return ObjectiveVector(delivered, delay)

    return evaluate
