"""Signals on a finite abelian group and the operations tying them to
the group structure: shifts, modulations, Fourier transform,
convolution, pairings, and tensor products.

Two pairings are kept strictly apart.  The bilinear pairing

    (f, s) = sum_t weight * f(t) * s(t)

has no conjugation, is symmetric, and is the duality at work in every
weak identity in this package.  The sesquilinear inner product

    <f, g> = (f, conj(g))

is the L2 form.  Conflating them silently breaks the reconstruction
identities, so every call site here names the one it means.

All value arrays are complex128, flat in the group's lexicographic
enumeration order, and frozen (read-only) once constructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GroupMismatchError
from .groups import Group, PhasePoint, negation_table, product_group

__all__ = [
    "Signal",
    "dirac",
    "constant",
    "gauss",
    "random_signal",
    "signal_from_spec",
    "translate",
    "modulate",
    "tf_shift",
    "fourier",
    "inv_fourier",
    "convolve",
    "pointwise",
    "involute",
    "pair_bilinear",
    "inner",
    "l1_norm",
    "l2_norm",
    "sup_norm",
    "tensor",
]


@dataclass(frozen=True, eq=False)
class Signal:
    """A complex function on a group, stored as a flat read-only array."""

    group: Group
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.size != self.group.order:
            raise ValueError(
                f"expected {self.group.order} values for {self.group}, got {vals.size}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def grid(self) -> np.ndarray:
        """Values reshaped to the factor grid (read-only view)."""
        return self.values.reshape(self.group.orders)

    def __add__(self, other: "Signal") -> "Signal":
        _same_group(self, other)
        return Signal(self.group, self.values + other.values)

    def __sub__(self, other: "Signal") -> "Signal":
        _same_group(self, other)
        return Signal(self.group, self.values - other.values)

    def __mul__(self, scalar) -> "Signal":
        return Signal(self.group, self.values * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Signal":
        return Signal(self.group, -self.values)

    def __repr__(self):
        return f"Signal({self.group}, {self.values!r})"


def _same_group(a: Signal, b: Signal):
    if a.group != b.group:
        raise GroupMismatchError(f"signals live on {a.group} and {b.group}")


def dirac(group: Group, at=None) -> Signal:
    """Unit impulse: 1 at the given element (default: identity), else 0."""
    vals = np.zeros(group.order, dtype=complex)
    idx = 0 if at is None else group.index(at)
    vals[idx] = 1.0
    return Signal(group, vals)


def constant(group: Group, value=1.0) -> Signal:
    return Signal(group, np.full(group.order, complex(value)))


def _periodized_sqdist(group: Group) -> np.ndarray:
    """d(t, 0)^2 with the wrap-around distance per factor, flat order."""
    coords = [ax.ravel() for ax in np.indices(group.orders)]
    sq = np.zeros(group.order)
    for c, n in zip(coords, group.orders):
        d = np.minimum(c, n - c)
        sq = sq + d.astype(float) ** 2
    return sq


def gauss(group: Group, spread: float) -> Signal:
    """Periodized Gaussian bump exp(-pi d(t,0)^2 / spread^2)."""
    if not spread > 0:
        raise ValueError(f"spread must be positive, got {spread}")
    return Signal(group, np.exp(-np.pi * _periodized_sqdist(group) / spread**2))


def random_signal(group: Group, seed) -> Signal:
    """Complex Gaussian noise from the seeded PCG64 stream.

    The generator is named and platform independent, so equal seeds give
    byte-equal signals everywhere; no OS entropy is consulted.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(
        np.random.PCG64(seed)
    )
    re = rng.standard_normal(group.order)
    im = rng.standard_normal(group.order)
    return Signal(group, re + 1j * im)


def signal_from_spec(group: Group, spec: dict) -> Signal:
    """Build a signal from a config literal.

    Supported kinds:
      {"kind": "dirac", "at": [..]}            impulse (default at 0)
      {"kind": "gauss", "spread": s}           periodized Gaussian
      {"kind": "random", "seed": n}            seeded complex noise
      {"kind": "values", "re": [..], "im": [..]}  explicit values
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"signal literal must be an object with a 'kind', got {spec!r}")
    kind = spec["kind"]
    if kind == "dirac":
        at = spec.get("at")
        try:
            return dirac(group, at)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad dirac position {at!r}: {exc}") from exc
    if kind == "gauss":
        if "spread" not in spec:
            raise ConfigError("gauss literal needs a 'spread'")
        spread = float(spec["spread"])
        if not spread > 0:
            raise ConfigError(f"gauss spread must be positive, got {spread}")
        return gauss(group, spread)
    if kind == "random":
        if "seed" not in spec:
            raise ConfigError("random literal needs a 'seed'")
        return random_signal(group, int(spec["seed"]))
    if kind == "values":
        if "re" not in spec:
            raise ConfigError("values literal needs 're'")
        re = np.asarray(spec["re"], dtype=float)
        im = np.asarray(spec.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ConfigError("'re' and 'im' must have equal length")
        if re.size != group.order:
            raise ConfigError(
                f"values literal has {re.size} entries, group order is {group.order}"
            )
        return Signal(group, re + 1j * im)
    raise ConfigError(f"unknown signal kind {kind!r}")


def translate(f: Signal, x) -> Signal:
    """(T_x f)(t) = f(t - x)."""
    x = f.group.reduce(x)
    rolled = np.roll(f.grid(), shift=x, axis=tuple(range(f.group.nfactors)))
    return Signal(f.group, rolled.ravel())


def _character_row(group: Group, w) -> np.ndarray:
    """Values t -> w(t) as a flat array, built factor by factor."""
    w = group.reduce(w)
    row = np.ones(1, dtype=complex)
    for wj, n in zip(w, group.orders):
        factor = np.exp(2j * np.pi * wj * np.arange(n) / n)
        row = np.multiply.outer(row, factor).ravel()
    return row


def modulate(f: Signal, w) -> Signal:
    """(E_w f)(t) = w(t) f(t)."""
    return Signal(f.group, _character_row(f.group, w) * f.values)


def tf_shift(f: Signal, point) -> Signal:
    """Time-frequency shift pi(x, w) = E_w T_x.

    Composition picks up a phase: pi(x1,w1) pi(x2,w2) equals
    w2(-x1) * pi(x1+x2, w1+w2).
    """
    if not isinstance(point, PhasePoint):
        point = PhasePoint(tuple(point[0]), tuple(point[1]))
    return modulate(translate(f, point.x), point.w)


def fourier(f: Signal) -> Signal:
    """Fourier transform onto the dual group.

    fhat(w) = sum_t weight * f(t) * conj(w(t)), computed with the
    factor-wise FFT; the tests keep an O(N^2) direct-sum oracle.
    """
    g = f.group
    spec = np.fft.fftn(f.grid()) * float(g.weight)
    return Signal(g.dual(), spec.ravel())


def inv_fourier(f: Signal) -> Signal:
    """Inverse transform; exact because weight * dual_weight * |G| = 1.

    The argument lives on some dual group H; the result lives on H.dual()
    (the double dual, i.e. the original group) with values
    sum_w H.weight * f(w) * w(x).
    """
    h = f.group
    vals = np.fft.ifftn(f.grid()) * (float(h.weight) * h.order)
    return Signal(h.dual(), vals.ravel())


def convolve(f: Signal, g: Signal) -> Signal:
    """(f * g)(t) = sum_s weight * f(s) g(t - s).

    Computed through the Fourier transform, where the stated Haar
    weights make the convolution theorem exact: fourier(f * g) =
    pointwise(fourier(f), fourier(g)).
    """
    _same_group(f, g)
    return inv_fourier(pointwise(fourier(f), fourier(g)))


def pointwise(f: Signal, g: Signal) -> Signal:
    _same_group(f, g)
    return Signal(f.group, f.values * g.values)


def involute(f: Signal) -> Signal:
    """f(-t); applying it twice gives the original signal back."""
    return Signal(f.group, f.values[negation_table(f.group)])


def pair_bilinear(f: Signal, s: Signal) -> complex:
    """Bilinear duality pairing (f, s) = sum weight * f * s; symmetric."""
    _same_group(f, s)
    return complex(np.sum(f.values * s.values) * float(f.group.weight))


def inner(f: Signal, g: Signal) -> complex:
    """L2 inner product <f, g> = (f, conj g), antilinear in g."""
    _same_group(f, g)
    return complex(np.vdot(g.values, f.values) * float(f.group.weight))


def l1_norm(f: Signal) -> float:
    return float(np.sum(np.abs(f.values)) * float(f.group.weight))


def l2_norm(f: Signal) -> float:
    return float(math.sqrt(max(inner(f, f).real, 0.0)))


def sup_norm(f: Signal) -> float:
    return float(np.max(np.abs(f.values)))


def tensor(f: Signal, g: Signal) -> Signal:
    """(f tensor g)(s, t) = f(s) g(t) on the product group."""
    return Signal(
        product_group(f.group, g.group), np.outer(f.values, g.values).ravel()
    )
