"""Finite abelian groups, their duals, and time-frequency phase space.

Every group is a product of cyclic factors Z/n1 x ... x Z/nk.  Elements
are integer coordinate tuples reduced componentwise mod n_j, enumerated
lexicographically (last coordinate fastest).  The dual group is
identified with the same coordinate grid through the pairing

    w(x) = exp(2 pi i sum_j x_j w_j / n_j)

Haar measure is a constant per-point weight.  A group always carries the
pair (weight, dual_weight) tied by

    weight * dual_weight * |G| = 1

which is exactly the normalization that makes Fourier inversion an
identity rather than an approximation.  The default is counting measure
on the group and |G|^{-1} times counting measure on the dual.  Weights
are stored as exact rationals so the constraint is checked without
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import LatticeError

__all__ = [
    "Group",
    "PhasePoint",
    "Lattice",
    "make_group",
    "product_group",
    "phase_space",
    "character_value",
    "character_table",
    "difference_table",
    "negation_table",
    "make_lattice",
]


class PhasePoint(NamedTuple):
    """A point (x, w) of the phase space G x dual(G)."""

    x: tuple
    w: tuple


def _as_coords(coords) -> tuple:
    if isinstance(coords, PhasePoint):
        raise TypeError("expected group coordinates, got a phase point")
    try:
        out = tuple(int(c) for c in coords)
    except TypeError:
        raise TypeError(f"coordinates must be an integer sequence, got {coords!r}") from None
    return out


@dataclass(frozen=True)
class Group:
    """A finite abelian group with a fixed Haar normalization.

    orders      : cyclic factor sizes (n1, ..., nk), each >= 1
    weight      : Haar weight per point of the group
    dual_weight : Haar weight per point of the dual group
    """

    orders: tuple
    weight: Fraction
    dual_weight: Fraction

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders:
            raise ValueError("a group needs at least one cyclic factor")
        if any(n < 1 for n in orders):
            raise ValueError(f"factor sizes must be positive, got {orders}")
        object.__setattr__(self, "orders", orders)
        w = Fraction(self.weight)
        dw = Fraction(self.dual_weight)
        if w <= 0 or dw <= 0:
            raise ValueError("Haar weights must be positive")
        if w * dw * self.order != 1:
            raise ValueError(
                f"weight * dual_weight * |G| must equal 1, got {w} * {dw} * {self.order}"
            )
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "dual_weight", dw)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def nfactors(self) -> int:
        return len(self.orders)

    def dual(self) -> "Group":
        """The dual group: same coordinate grid, Haar weights swapped."""
        return Group(self.orders, self.dual_weight, self.weight)

    def reduce(self, coords) -> tuple:
        """Canonical representative: componentwise mod n_j.

        Negative integers are accepted and mean group inverses, so
        reduce((-1,)) on Z/8 is (7,).
        """
        coords = _as_coords(coords)
        if len(coords) != self.nfactors:
            raise ValueError(
                f"expected {self.nfactors} coordinates for orders {self.orders}, "
                f"got {len(coords)}"
            )
        return tuple(c % n for c, n in zip(coords, self.orders))

    def add(self, a, b) -> tuple:
        return tuple((x + y) % n for x, y, n in zip(self.reduce(a), self.reduce(b), self.orders))

    def neg(self, a) -> tuple:
        return tuple((-x) % n for x, n in zip(self.reduce(a), self.orders))

    def index(self, coords) -> int:
        """Position of an element in the lexicographic enumeration."""
        coords = self.reduce(coords)
        idx = 0
        for c, n in zip(coords, self.orders):
            idx = idx * n + c
        return idx

    def coords(self, index: int) -> tuple:
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for group of order {self.order}")
        out = []
        for n in reversed(self.orders):
            out.append(index % n)
            index //= n
        return tuple(reversed(out))

    def elements(self) -> list:
        """All elements in enumeration order."""
        return [self.coords(i) for i in range(self.order)]

    def __repr__(self):
        parts = " x ".join(f"Z/{n}" for n in self.orders)
        return f"Group({parts}, weight={self.weight}, dual_weight={self.dual_weight})"


def make_group(orders: Sequence[int]) -> Group:
    """Group with the default normalization: counting measure on G."""
    orders = tuple(int(n) for n in orders)
    if not orders:
        raise ValueError("a group needs at least one cyclic factor")
    if any(n < 1 for n in orders):
        raise ValueError(f"factor sizes must be positive, got {orders}")
    n = math.prod(orders)
    return Group(orders, Fraction(1), Fraction(1, n))


def product_group(a: Group, b: Group) -> Group:
    """Direct product; Haar weights multiply."""
    return Group(a.orders + b.orders, a.weight * b.weight, a.dual_weight * b.dual_weight)


def phase_space(g: Group) -> Group:
    """The group G x dual(G) with per-point weight = weight * dual_weight.

    With the default normalization the phase space of a group of order N
    has N^2 points of weight 1/N each, and is self-dual.
    """
    w = g.weight * g.dual_weight
    return Group(g.orders + g.orders, w, Fraction(1) / (Fraction(g.order) ** 2 * w))


def character_value(group: Group, x, w) -> complex:
    """The character of the dual element w evaluated at x.

    The phase exponent is accumulated as an exact rational before the
    single complex exponential, so characters of roots of unity come out
    as accurately as double precision allows.
    """
    x = group.reduce(x)
    w = group.reduce(w)
    frac = sum((Fraction(a * b, n) for a, b, n in zip(x, w, group.orders)), Fraction(0)) % 1
    return complex(np.exp(2j * np.pi * float(frac)))


@lru_cache(maxsize=64)
def character_table(group: Group) -> np.ndarray:
    """Matrix of all character values, [w_index, x_index] = w(x).

    Built as a Kronecker product of the cyclic factor tables, which
    matches the lexicographic enumeration on both axes.  Read-only.
    """
    table = np.ones((1, 1), dtype=complex)
    for n in group.orders:
        grid = np.outer(np.arange(n), np.arange(n))
        factor = np.exp(2j * np.pi * grid / n)
        table = np.kron(table, factor)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=64)
def difference_table(group: Group) -> np.ndarray:
    """Index table [x_index, t_index] = index(t - x); read-only."""
    shape = group.orders
    coords = [ax.ravel() for ax in np.indices(shape)]
    diffs = [(c[None, :] - c[:, None]) % n for c, n in zip(coords, shape)]
    table = np.ravel_multi_index(diffs, shape)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=64)
def negation_table(group: Group) -> np.ndarray:
    """Index table [t_index] = index(-t); read-only."""
    shape = group.orders
    coords = [ax.ravel() for ax in np.indices(shape)]
    negs = [(-c) % n for c, n in zip(coords, shape)]
    table = np.ravel_multi_index(negs, shape)
    table.flags.writeable = False
    return table


def _broadcast_step(group: Group, step) -> tuple:
    if isinstance(step, (int, np.integer)):
        step = (int(step),) * group.nfactors
    else:
        step = tuple(int(s) for s in step)
    if len(step) != group.nfactors:
        raise LatticeError(
            f"need one step per factor ({group.nfactors}), got {len(step)}"
        )
    return step


@dataclass(frozen=True)
class Lattice:
    """A separable subgroup of the phase space: time steps a_j, frequency
    steps b_j, each dividing the factor order, plus a per-point weight.

    Points are enumerated time-major (all frequencies for the first time
    node, then the next time node, ...), lexicographically within each
    side.
    """

    group: Group
    time_step: tuple
    freq_step: tuple
    weight: Fraction

    def __post_init__(self):
        ts = _broadcast_step(self.group, self.time_step)
        fs = _broadcast_step(self.group, self.freq_step)
        for name, steps in (("time", ts), ("freq", fs)):
            for s, n in zip(steps, self.group.orders):
                if s < 1 or n % s != 0:
                    raise LatticeError(
                        f"{name} step {s} does not divide factor order {n}"
                    )
        object.__setattr__(self, "time_step", ts)
        object.__setattr__(self, "freq_step", fs)
        w = Fraction(self.weight)
        if w <= 0:
            raise LatticeError("lattice weight must be positive")
        object.__setattr__(self, "weight", w)

    @property
    def size(self) -> int:
        n_time = math.prod(n // s for n, s in zip(self.group.orders, self.time_step))
        n_freq = math.prod(n // s for n, s in zip(self.group.orders, self.freq_step))
        return n_time * n_freq

    @property
    def index_in_phase_space(self) -> int:
        return self.group.order ** 2 // self.size

    def _side_nodes(self, steps) -> list:
        axes = [range(0, n, s) for n, s in zip(self.group.orders, steps)]
        nodes = [()]
        for ax in axes:
            nodes = [pre + (v,) for pre in nodes for v in ax]
        return nodes

    def points(self) -> list:
        """All lattice points as PhasePoint tuples, time-major."""
        times = self._side_nodes(self.time_step)
        freqs = self._side_nodes(self.freq_step)
        return [PhasePoint(x, w) for x in times for w in freqs]

    def contains(self, point: PhasePoint) -> bool:
        x = self.group.reduce(point.x)
        w = self.group.reduce(point.w)
        return all(c % s == 0 for c, s in zip(x, self.time_step)) and all(
            c % s == 0 for c, s in zip(w, self.freq_step)
        )


def make_lattice(group: Group, time_step, freq_step, weighting: str = "ambient") -> Lattice:
    """Build a lattice with one of the two supported weight conventions.

    weighting="ambient" gives every lattice point the ambient per-point
    phase-space weight (the default), "index" multiplies that by the
    subgroup index [G x dual(G) : lattice].
    """
    ambient = group.weight * group.dual_weight
    lat = Lattice(group, time_step, freq_step, ambient)
    if weighting == "ambient":
        return lat
    if weighting == "index":
        return Lattice(group, time_step, freq_step, ambient * lat.index_in_phase_space)
    raise LatticeError(f"unknown weighting {weighting!r}, expected 'ambient' or 'index'")
