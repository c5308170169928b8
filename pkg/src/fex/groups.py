"""Finite abelian groups given as products of cyclic factors.

A group of order ``n_1 * ... * n_k`` is identified with its own dual;
elements double as characters. Elements are residue tuples, enumerated
lexicographically (row-major over the factor shape), and this index order
is the layout of every vector defined over the group.

Haar normalization is fixed once for the whole package: counting measure
on the time side, counting measure divided by the group order on the
frequency side.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import GroupError

Element = tuple[int, ...]


@dataclass(frozen=True)
class Group:
    """A finite abelian group presented as a product of cyclic factors."""

    factors: tuple[int, ...]
    order: int

    def element(self, residues: Sequence[int]) -> Element:
        """Normalize a residue vector to the canonical reduced tuple."""
        if len(residues) != len(self.factors):
            raise GroupError(
                f"element has {len(residues)} coordinates, group has {len(self.factors)} factors"
            )
        return tuple(int(r) % n for r, n in zip(residues, self.factors))

    def index_of(self, g: Element) -> int:
        """Enumeration index of an element (row-major over the factors)."""
        g = self.element(g)
        idx = 0
        for r, n in zip(g, self.factors):
            idx = idx * n + r
        return idx

    def element_at(self, index: int) -> Element:
        """Element with the given enumeration index."""
        if not 0 <= index < self.order:
            raise GroupError(f"index {index} out of range for group of order {self.order}")
        residues = []
        for n in reversed(self.factors):
            index, r = divmod(index, n)
            residues.append(r)
        return tuple(reversed(residues))

    def elements(self) -> list[Element]:
        """All elements in enumeration order."""
        return [tuple(v) for v in itertools.product(*(range(n) for n in self.factors))]

    @property
    def zero(self) -> Element:
        return (0,) * len(self.factors)


def make_group(factors: Iterable[int]) -> Group:
    """Build a group from cyclic factor orders; every factor must be >= 1."""
    fs = tuple(int(n) for n in factors)
    if not fs:
        raise GroupError("at least one cyclic factor is required")
    if any(n <= 0 for n in fs):
        raise GroupError(f"cyclic factor orders must be positive, got {fs}")
    order = 1
    for n in fs:
        order *= n
    return Group(factors=fs, order=order)


def add(group: Group, g: Element, h: Element) -> Element:
    """Componentwise sum modulo the factor orders."""
    g = group.element(g)
    h = group.element(h)
    return tuple((a + b) % n for a, b, n in zip(g, h, group.factors))


def neg(group: Group, g: Element) -> Element:
    """Componentwise negation modulo the factor orders."""
    g = group.element(g)
    return tuple((-a) % n for a, n in zip(g, group.factors))


def sub(group: Group, g: Element, h: Element) -> Element:
    """g - h, the difference used throughout for shifts and separations."""
    return add(group, g, neg(group, h))


@functools.lru_cache(maxsize=128)
def _roots(n: int) -> np.ndarray:
    """Table of the n-th roots of unity exp(2*pi*i*k/n), k = 0..n-1."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def pairing(group: Group, g: Element, gamma: Element) -> complex:
    """Character value (g, gamma) = exp(2*pi*i * sum_j g_j*gamma_j/n_j).

    Unimodular up to floating rounding; computed from per-factor root
    tables so repeated calls cannot drift.
    """
    g = group.element(g)
    gamma = group.element(gamma)
    value = complex(1.0)
    for a, b, n in zip(g, gamma, group.factors):
        value *= _roots(n)[(a * b) % n]
    return value


@functools.lru_cache(maxsize=32)
def _character_table(factors: tuple[int, ...]) -> np.ndarray:
    table = np.ones((1, 1), dtype=np.complex128)
    for n in factors:
        roots = _roots(n)
        block = roots[np.outer(np.arange(n), np.arange(n)) % n]
        table = np.kron(table, block)
    table.setflags(write=False)
    return table


def character_table(group: Group) -> np.ndarray:
    """Full pairing matrix T[i, j] = pairing(element_at(i), element_at(j)).

    Read-only and cached per group; the Kronecker factorization matches the
    row-major enumeration order.
    """
    return _character_table(group.factors)


@dataclass(frozen=True)
class PointSet:
    """Distinct group elements sorted in enumeration order."""

    points: tuple[Element, ...]
    n: int

    def __iter__(self):
        return iter(self.points)


def make_point_set(group: Group, points: Iterable[Sequence[int]]) -> PointSet:
    """Normalize, deduplicate-check and sort a collection of elements."""
    normalized = [group.element(p) for p in points]
    if not normalized:
        raise GroupError("a point set must contain at least one element")
    if len(set(normalized)) != len(normalized):
        raise GroupError("point set contains duplicate elements")
    ordered = sorted(normalized, key=group.index_of)
    return PointSet(points=tuple(ordered), n=len(ordered))


def difference_set(group: Group, points: PointSet) -> frozenset[Element]:
    """All nonzero pairwise differences p - q of distinct points.

    The result excludes zero and is closed under negation.
    """
    out = set()
    for p, q in itertools.permutations(points.points, 2):
        out.add(sub(group, p, q))
    out.discard(group.zero)
    return frozenset(out)


def sample_point_set(group: Group, n: int, rng: np.random.Generator) -> PointSet:
    """Uniform n-subset of the group, drawn without replacement by index."""
    if not 1 <= n <= group.order:
        raise GroupError(f"cannot sample {n} distinct points from a group of order {group.order}")
    idx = rng.choice(group.order, size=n, replace=False)
    return make_point_set(group, [group.element_at(int(i)) for i in idx])
