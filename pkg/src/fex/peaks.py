"""Peak functions: unit bumps whose support avoids a forbidden difference set.

A peak for a base set I is the normalized autocorrelation of the
indicator of I on the frequency side, together with its time-side
density. It satisfies, exactly by construction:

  * value 1 at zero, all values in [0, 1];
  * support contained in I - I;
  * nonnegative time-side density of total mass 1.

If I - I avoids a set D of forbidden differences, the peak vanishes on
all of D, which is what makes it usable as an interpolation bump for a
point set whose pairwise differences are D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PeakError
from .groups import Element, Group, sub
from .spectral import GroupFunction, analyze, frequency_function, synthesize, time_function

CHECK_NAMES = (
    "support",
    "unit_at_zero",
    "range_01",
    "nonneg_density",
    "unit_mass",
    "separation",
)


@dataclass(frozen=True)
class Peak:
    """A peak function: frequency-side bump ``delta`` with time density."""

    group: Group
    base_set: tuple[Element, ...]
    delta: GroupFunction
    density: GroupFunction


@dataclass(frozen=True)
class PeakValidation:
    """Worst violation per peak property, plus the transform consistency defect."""

    violations: dict[str, float]
    transform_defect: float
    tolerance: float

    @property
    def worst(self) -> float:
        return max(self.violations.values())

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "transform_defect": self.transform_defect,
            "checks": {
                name: {"violation": v, "passed": v <= self.tolerance}
                for name, v in self.violations.items()
            },
        }


def greedy_base_set(group: Group, forbidden: Iterable[Element]) -> tuple[Element, ...]:
    """Grow a base set I containing zero with (I - I) disjoint from ``forbidden``.

    Elements are examined once in enumeration order and kept whenever they
    do not create a forbidden difference, so the result is deterministic
    and greedily maximal. {0} is always admissible because the forbidden
    set may not contain zero.
    """
    banned = {group.element(d) for d in forbidden}
    if group.zero in banned:
        raise PeakError("forbidden difference set must not contain zero")
    for d in banned:
        if sub(group, group.zero, d) not in banned:
            raise PeakError("forbidden difference set must be closed under negation")
    base: list[Element] = [group.zero]
    for x in group.elements():
        if x == group.zero:
            continue
        if all(
            sub(group, x, y) not in banned and sub(group, y, x) not in banned for y in base
        ):
            base.append(x)
    return tuple(base)


def build_peak(group: Group, base_set: Sequence[Element]) -> Peak:
    """Peak for a base set I: delta(t) = |I & (I + t)| / |I|.

    delta is computed by integer autocorrelation counting, so its range,
    support and symmetry properties hold exactly; the density comes from
    the squared modulus of the inverse transform of the indicator of I,
    scaled to total mass 1.
    """
    elements = [group.element(e) for e in base_set]
    if not elements:
        raise PeakError("base set must be nonempty")
    if len(set(elements)) != len(elements):
        raise PeakError("base set contains duplicate elements")
    if group.zero not in elements:
        raise PeakError("base set must contain zero")

    members = set(elements)
    size = len(elements)
    counts = np.zeros(group.order, dtype=np.int64)
    for i, t in enumerate(group.elements()):
        counts[i] = sum(1 for y in elements if sub(group, y, t) in members)
    delta = frequency_function(group, counts / size)

    indicator = frequency_function(
        group, [1.0 if g in members else 0.0 for g in group.elements()]
    )
    xi = analyze(indicator).values
    density_values = (xi.real**2 + xi.imag**2) * (group.order / size)
    density = time_function(group, density_values)

    return Peak(group=group, base_set=tuple(elements), delta=delta, density=density)


def validate_peak(
    peak: Peak, forbidden: Iterable[Element], tolerance: float = 1e-12
) -> PeakValidation:
    """Measure the worst violation of each peak property.

    Checks, in order: support inside I - I, unit value at zero, range in
    [0, 1], nonnegative density, unit mass, and vanishing on the forbidden
    set. Failures are reported, never raised. The defect of
    ``synthesize(density) == delta`` is reported separately since it
    measures transform rounding, not a peak property.
    """
    group = peak.group
    delta = peak.delta.values
    density = peak.density.values

    self_diffs = {sub(group, y, z) for y in peak.base_set for z in peak.base_set}
    outside = [group.index_of(t) for t in group.elements() if t not in self_diffs]
    support = float(np.max(np.abs(delta[outside]))) if outside else 0.0

    unit_at_zero = abs(delta[group.index_of(group.zero)] - 1.0)

    re, im = delta.real, delta.imag
    range_01 = max(0.0, float(np.max(re - 1.0)), float(np.max(-re)), float(np.max(np.abs(im))))

    nonneg = max(0.0, float(np.max(-density.real)), float(np.max(np.abs(density.imag))))

    unit_mass = abs(math.fsum(density.real.tolist()) - 1.0)

    banned = [group.index_of(group.element(d)) for d in forbidden]
    separation = float(np.max(np.abs(delta[banned]))) if banned else 0.0

    defect = float(np.max(np.abs(synthesize(peak.density).values - delta)))

    return PeakValidation(
        violations={
            "support": support,
            "unit_at_zero": float(unit_at_zero),
            "range_01": range_01,
            "nonneg_density": nonneg,
            "unit_mass": float(unit_mass),
            "separation": separation,
        },
        transform_defect=defect,
        tolerance=tolerance,
    )
