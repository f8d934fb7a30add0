"""Sample-budget allocation for functions of empirical means.

The error-probability bound for a margin-shifted monotone/quasiconvex
estimate has the form

    exp( -2 (sum_n g_n alpha_n)_+^2 / sum_n g_n^2 D_n^2 / M_n )

with gradients g evaluated at the anchor point (true means minus margins),
per-coordinate oscillation diameters D, and sample counts M(n).  Only the
denominator depends on the allocation, so minimizing the bound over integer
allocations summing to a fixed budget M means minimizing sum_n c_n / M_n
with c_n = g_n^2 D_n^2; the continuous optimum is M_n proportional to
|g_n| D_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chernoff import BoundReport, report_from_exponent
from .geometry import GeometryError, as_vector


class InfeasibleBudgetError(GeometryError):
    """Budget cannot cover the per-coordinate minimum."""


@dataclass(frozen=True)
class AllocationProblem:
    gradient: np.ndarray
    margins: np.ndarray
    diameters: np.ndarray
    total_budget: int
    min_per_coordinate: int = 1

    def __post_init__(self):
        object.__setattr__(self, "gradient", as_vector(self.gradient, name="gradient"))
        n = self.gradient.size
        object.__setattr__(self, "margins", as_vector(self.margins, dim=n, name="margins"))
        object.__setattr__(self, "diameters",
                           as_vector(self.diameters, dim=n, name="diameters"))
        if np.any(self.diameters < 0):
            raise GeometryError("diameters must be nonnegative")
        object.__setattr__(self, "total_budget", int(self.total_budget))
        object.__setattr__(self, "min_per_coordinate", int(self.min_per_coordinate))
        if self.total_budget < 1 or self.min_per_coordinate < 1:
            raise GeometryError("budget and per-coordinate minimum must be >= 1")

    @property
    def dim(self):
        return self.gradient.size

    def costs(self):
        """c_n = g_n^2 D_n^2, the denominator weights."""
        return (self.gradient * self.diameters) ** 2


def link_bound(problem: AllocationProblem, allocation) -> BoundReport:
    """Evaluate exp(-2 (g . alpha)_+^2 / sum c_n / M_n) at a given
    allocation."""
    M = np.asarray(allocation, dtype=float)
    if M.shape != (problem.dim,):
        raise GeometryError("allocation length does not match the problem")
    if np.any(M < 1):
        raise GeometryError("allocations must be >= 1")
    numerator = max(float(problem.gradient @ problem.margins), 0.0)
    if numerator == 0.0:
        return report_from_exponent(0.0, "link", exactness="upper-bound",
                                    notes="margin sum not positive")
    denominator = float(np.sum(problem.costs() / M))
    if denominator == 0.0:
        return report_from_exponent(-math.inf, "link", degenerate=True,
                                    exactness="upper-bound",
                                    notes="zero denominator with positive margin")
    return report_from_exponent(-2.0 * numerator**2 / denominator, "link",
                                exactness="upper-bound")


def _denominator(costs, alloc):
    return float(np.sum(costs / alloc))


def _continuous_relaxation(costs, budget, floor):
    """Water-filling: allocate proportionally to sqrt(c_n), pinning
    coordinates that fall below the floor."""
    n = costs.size
    target = np.full(n, float(floor))
    free = np.ones(n, dtype=bool)
    weights = np.sqrt(costs)
    for _ in range(n):
        remaining = budget - floor * np.count_nonzero(~free)
        w = weights[free]
        if w.sum() <= 0:
            target[free] = remaining / np.count_nonzero(free)
        else:
            target[free] = remaining * w / w.sum()
        low = free & (target < floor)
        if not low.any():
            break
        target[low] = floor
        free &= ~low
    return np.maximum(target, floor)


def _largest_remainder(target, budget, floor):
    base = np.maximum(np.floor(target).astype(int), floor)
    deficit = int(budget - base.sum())
    if deficit < 0:
        # Floors overshot the budget after rounding; trim the largest
        # above-floor entries, lowest index first on ties.
        order = np.lexsort((np.arange(base.size), -base))
        for i in order:
            while deficit < 0 and base[i] > floor:
                base[i] -= 1
                deficit += 1
        return base
    remainders = target - np.floor(target)
    order = np.lexsort((np.arange(base.size), -remainders))
    for i in order[:deficit]:
        base[i] += 1
    return base


def _greedy_polish(costs, alloc, floor):
    """Move single units between coordinates while the denominator drops;
    ties resolve toward the lowest donor/receiver indices."""
    alloc = alloc.copy()
    n = alloc.size
    while True:
        best_gain, best_move = 0.0, None
        for i in range(n):
            if alloc[i] <= floor:
                continue
            gain_i = costs[i] / (alloc[i] - 1) - costs[i] / alloc[i]
            for j in range(n):
                if j == i:
                    continue
                drop_j = costs[j] / alloc[j] - costs[j] / (alloc[j] + 1)
                gain = drop_j - gain_i
                if gain > best_gain + 1e-15:
                    best_gain, best_move = gain, (i, j)
        if best_move is None:
            return alloc
        i, j = best_move
        alloc[i] -= 1
        alloc[j] += 1


def optimize_allocation(problem: AllocationProblem):
    """Best integer allocation summing to the budget.

    Proportional-to-sqrt(cost) relaxation, largest-remainder rounding, then
    greedy single-unit transfers until no move lowers the bound.  Returns
    (allocation, report).  Coordinates with nonpositive margin contribution
    still receive the per-coordinate minimum.
    """
    n, floor = problem.dim, problem.min_per_coordinate
    if problem.total_budget < n * floor:
        raise InfeasibleBudgetError(
            f"budget {problem.total_budget} cannot cover {n} x {floor}")
    costs = problem.costs()
    target = _continuous_relaxation(costs, problem.total_budget, floor)
    alloc = _largest_remainder(target, problem.total_budget, floor)
    alloc = _greedy_polish(costs, alloc, floor)
    return alloc, link_bound(problem, alloc)


def exhaustive_allocation(problem: AllocationProblem):
    """Brute force over all integer compositions of the budget (small
    problems only); the reference optimum for tests."""
    n, floor = problem.dim, problem.min_per_coordinate
    budget = problem.total_budget
    if budget < n * floor:
        raise InfeasibleBudgetError("infeasible budget")
    costs = problem.costs()
    best = None

    def recurse(prefix, remaining, coords_left):
        nonlocal best
        if coords_left == 1:
            alloc = prefix + [remaining]
            den = _denominator(costs, np.array(alloc, dtype=float))
            if best is None or den < best[0] - 1e-15:
                best = (den, alloc)
            return
        for m in range(floor, remaining - floor * (coords_left - 1) + 1):
            recurse(prefix + [m], remaining - m, coords_left - 1)

    recurse([], budget, n)
    alloc = np.array(best[1], dtype=int)
    return alloc, link_bound(problem, alloc)
