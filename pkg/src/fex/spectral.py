"""Transforms and norms for complex functions on a finite abelian group.

Every function is a vector over the group in enumeration order, tagged
with the side it lives on: ``time`` (integrable densities) or
``frequency`` (their transforms). With counting measure on the time side
and counting/|G| on the frequency side the transform pair below is an
exact inverse pair and Plancherel holds with constant 1.

Transforms are applied as dense character-table products: at the group
orders this package targets, structural exactness beats FFT speed.
Norms accumulate through ``math.fsum`` so they are reproducible and
independent of summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GroupError, SideMismatchError
from .groups import Group, character_table

TIME = "time"
FREQUENCY = "frequency"


@dataclass(frozen=True)
class GroupFunction:
    """A complex vector over a group, tagged with the side it lives on."""

    group: Group
    side: str
    values: np.ndarray


def _as_values(group: Group, values: Sequence[complex]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128).copy()
    if arr.shape != (group.order,):
        raise GroupError(
            f"function needs {group.order} values in enumeration order, got shape {arr.shape}"
        )
    arr.setflags(write=False)
    return arr


def time_function(group: Group, values: Sequence[complex]) -> GroupFunction:
    """Wrap values as a time-side function."""
    return GroupFunction(group=group, side=TIME, values=_as_values(group, values))


def frequency_function(group: Group, values: Sequence[complex]) -> GroupFunction:
    """Wrap values as a frequency-side function."""
    return GroupFunction(group=group, side=FREQUENCY, values=_as_values(group, values))


def _require_side(f: GroupFunction, side: str) -> None:
    if f.side != side:
        raise SideMismatchError(f"expected a {side}-side function, got {f.side}-side")


def synthesize(lam: GroupFunction) -> GroupFunction:
    """Transform a time-side density: f(gamma) = sum_g (-g, gamma) * lam(g)."""
    _require_side(lam, TIME)
    table = character_table(lam.group)
    return frequency_function(lam.group, lam.values @ table.conj())


def analyze(f: GroupFunction) -> GroupFunction:
    """Invert the transform: lam(g) = (1/|G|) sum_gamma (g, gamma) * f(gamma)."""
    _require_side(f, FREQUENCY)
    table = character_table(f.group)
    return time_function(f.group, (table @ f.values) / f.group.order)


def fsum_abs(values: np.ndarray) -> float:
    """Exactly rounded sum of absolute values (order independent)."""
    return math.fsum(np.abs(values).tolist())


def a_norm(f: GroupFunction) -> float:
    """Absolute-convergence norm of a frequency-side function.

    Equals the L1 norm of the time-side density whose transform is ``f``;
    it dominates the sup norm.
    """
    _require_side(f, FREQUENCY)
    return fsum_abs(analyze(f).values)


def sup_norm(f: GroupFunction) -> float:
    """Largest absolute value."""
    return float(np.max(np.abs(f.values))) if f.group.order else 0.0


def l1_time_norm(lam: GroupFunction) -> float:
    """Sum of absolute values (counting measure)."""
    return fsum_abs(lam.values)
