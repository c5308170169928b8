"""Linear extension operators and certified bounds on their norms.

An operator is stored through its time-side generators Phi_j, one per
point t_j of the target point set; the frequency-side images
Psi_j = synthesize(Phi_j) satisfy the interpolation identity
Psi_j(t_i) = delta_ij, so applying the operator to values f on the point
set produces a function on the whole group that restricts back to f.

The operator norm over the sup-unit ball of functions on the point set is
attained at unimodular coefficient vectors (the extreme points of the
ball; the norm of a linear image is convex in the coefficients). It is
bracketed by scanning a finite phase grid: the scan maximum is attained,
hence a true lower bound, and moving each coefficient to the nearest grid
phase changes the objective by at most
2*sin(pi/(2M)) * sum_j ||Psi_j||_A, which gives the upper end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetError, PeakError, ResolutionError
from .groups import Group, PointSet, character_table, difference_set
from .peaks import Peak, validate_peak
from .spectral import GroupFunction, frequency_function, fsum_abs

GRID_POINT_BUDGET = 10_000_000
SIGN_ENUM_MAX_N = 20
_CHUNK = 1 << 15


@dataclass(frozen=True)
class ExtensionOperator:
    """Extension operator with generators ``phi`` (rows, time side)."""

    group: Group
    points: PointSet
    phi: np.ndarray
    psi: np.ndarray

    @property
    def n(self) -> int:
        return self.points.n

    def generator(self, j: int) -> GroupFunction:
        """Frequency-side image of the j-th basis vector on the point set."""
        return frequency_function(self.group, self.psi[j])


@dataclass(frozen=True)
class NormCertificate:
    """Interval [grid_max, grid_max + slack] containing the operator norm."""

    grid_max: float
    slack: float
    resolution: int

    @property
    def lo(self) -> float:
        return self.grid_max

    @property
    def hi(self) -> float:
        return self.grid_max + self.slack

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)


def point_indices(group: Group, points: PointSet) -> list[int]:
    return [group.index_of(t) for t in points]


def interpolation_defect(group: Group, points: PointSet, psi: np.ndarray) -> float:
    """Largest deviation of Psi_j(t_i) from the identity matrix."""
    at_points = psi[:, point_indices(group, points)]
    return float(np.max(np.abs(at_points - np.eye(points.n))))


def from_generators(
    group: Group,
    points: PointSet,
    phi: np.ndarray,
    check: bool = True,
    tolerance: float = 1e-9,
) -> ExtensionOperator:
    """Assemble an operator from time-side generators, verifying interpolation."""
    phi = np.array(phi, dtype=np.complex128)
    if phi.shape != (points.n, group.order):
        raise ValueError(
            f"generators must have shape {(points.n, group.order)}, got {phi.shape}"
        )
    psi = phi @ character_table(group).conj()
    if check:
        defect = interpolation_defect(group, points, psi)
        if defect > tolerance:
            raise ValueError(f"interpolation defect {defect:.3e} exceeds {tolerance:.1e}")
    phi.setflags(write=False)
    psi.setflags(write=False)
    return ExtensionOperator(group=group, points=points, phi=phi, psi=psi)


def canonical_operator(group: Group, points: PointSet, peak: Peak) -> ExtensionOperator:
    """Operator that extends f by translated peaks: sum_j f(t_j) * delta(t - t_j).

    Its generators are Phi_j(x) = (x, t_j) * density(x). The peak must
    vanish on the pairwise differences of the point set, otherwise the
    translates fail to interpolate.
    """
    if peak.group != group:
        raise PeakError("peak was built for a different group")
    report = validate_peak(peak, difference_set(group, points))
    if not report.passed:
        raise PeakError(
            f"peak is not admissible for this point set (worst violation {report.worst:.3e})"
        )
    table = character_table(group)
    columns = table[:, point_indices(group, points)]
    phi = (columns * peak.density.values[:, None]).T
    return from_generators(group, points, phi)


def apply(op: ExtensionOperator, values: Sequence[complex]) -> GroupFunction:
    """Extend values given on the point set to the whole group."""
    coeffs = np.asarray(values, dtype=np.complex128)
    if coeffs.shape != (op.n,):
        raise ValueError(f"expected {op.n} values on the point set, got shape {coeffs.shape}")
    return frequency_function(op.group, coeffs @ op.psi)


def generator_norms(op: ExtensionOperator) -> list[float]:
    """||Psi_j||_A for each generator, i.e. the L1 norms of the Phi_j."""
    return [fsum_abs(row) for row in op.phi]


def _phase_grid_guard(n: int, resolution: int, max_points: int) -> int:
    if resolution < 4:
        raise ResolutionError(f"phase grid resolution must be at least 4, got {resolution}")
    if n * math.log(resolution) > math.log(max_points) + 1e-12:
        raise BudgetError(
            f"phase grid {resolution}^{n} exceeds the enumeration budget of {max_points} points"
        )
    return resolution**n


def grid_max_combination(
    phi: np.ndarray, resolution: int, max_points: int = GRID_POINT_BUDGET
) -> tuple[float, np.ndarray]:
    """Maximize ||sum_j f_j * phi_j||_L1 over grid phases f_j = exp(2*pi*i*k_j/M).

    Scans all M^n phase vectors in fixed chunks; the winner's norm is
    recomputed with compensated summation so the reported value does not
    depend on chunking. Returns the value and the maximizing phase vector
    (first in enumeration order on ties).
    """
    n = phi.shape[0]
    total = _phase_grid_guard(n, resolution, max_points)
    roots = np.exp(2j * np.pi * np.arange(resolution) / resolution)
    shape = (resolution,) * n
    best_value = -math.inf
    best_phases: np.ndarray | None = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        digits = np.stack(np.unravel_index(idx, shape), axis=1)
        phases = roots[digits]
        scores = np.abs(phases @ phi).sum(axis=1)
        j = int(np.argmax(scores))
        if scores[j] > best_value:
            best_value = float(scores[j])
            best_phases = phases[j].copy()
    assert best_phases is not None
    return fsum_abs(best_phases @ phi), best_phases


def norm_certified(
    op: ExtensionOperator, resolution: int, max_points: int = GRID_POINT_BUDGET
) -> NormCertificate:
    """Two-sided certificate for the operator norm at a given grid resolution.

    The interval lower end is attained at a grid point; the slack
    2*sin(pi/(2M)) * sum_j ||Psi_j||_A covers the distance from arbitrary
    unimodular coefficients to the grid, so the true norm lies in
    [grid_max, grid_max + slack].
    """
    grid_max, _ = grid_max_combination(op.phi, resolution, max_points)
    slack = 2.0 * math.sin(math.pi / (2.0 * resolution)) * math.fsum(generator_norms(op))
    return NormCertificate(grid_max=grid_max, slack=slack, resolution=resolution)


def _sign_chunks(n: int):
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (idx[:, None] >> np.arange(n)) & 1
        yield 1.0 - 2.0 * bits


def _check_sign_budget(n: int, max_n: int) -> None:
    if n > max_n:
        raise BudgetError(f"sign enumeration needs 2^{n} patterns, budget allows n <= {max_n}")


def sign_max(op: ExtensionOperator, max_n: int = SIGN_ENUM_MAX_N) -> float:
    """Largest extension norm over all +-1 value patterns on the point set.

    A lower bound for the operator norm, since each pattern has sup norm 1.
    """
    _check_sign_budget(op.n, max_n)
    best_value = -math.inf
    best_signs: np.ndarray | None = None
    for signs in _sign_chunks(op.n):
        scores = np.abs(signs @ op.phi).sum(axis=1)
        j = int(np.argmax(scores))
        if scores[j] > best_value:
            best_value = float(scores[j])
            best_signs = signs[j].copy()
    assert best_signs is not None
    return fsum_abs(best_signs @ op.phi)


def rademacher_average(op: ExtensionOperator, max_n: int = SIGN_ENUM_MAX_N) -> float:
    """Mean extension norm over all 2^n +-1 value patterns (exact enumeration)."""
    _check_sign_budget(op.n, max_n)
    partials = [
        math.fsum(np.abs(signs @ op.phi).sum(axis=1).tolist()) for signs in _sign_chunks(op.n)
    ]
    return math.fsum(partials) / (1 << op.n)
