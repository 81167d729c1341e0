"""Nets of smoothing operators that converge to the identity, and the
machinery to certify that convergence.

Three constructions are provided:

  pc_net           product-convolution stages (s . g) * h with a plateau
                   g rising to 1 and an L1-normalized spike h
  localization_net masked phase-space synthesis around one window
  gabor_partial_net growing partial sums of a Parseval Gabor frame

check_regularizing evaluates the four certificate conditions on a net:
(i) the final stage reproduces probes in the windowed m1 norm, (ii) the
stage operators are uniformly bounded m1 -> m1, (iii) likewise for the
sup norm, (iv) the final stage reproduces probes weakly.  The operator
norms in (ii)/(iii) are computed exactly for the phase-space lift of
each stage (analysis o T o synthesis through the window), which
dominates the norm on the embedded signal space; finiteness of the
logged values is the certificate.

sandwich pushes a fixed operator through two nets stage by stage, and
compose_approx staggers two sandwiched operators to approximate a
composition; with the Fourier kernel and its inverse this reproduces the
collapse of the character sum sum_w w(y - x) to the identity kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FrameError, GroupMismatchError, WindowError
from .groups import Group, character_table
from .kernels import KernelOperator, bilinear_form, compose
from .signals import (
    Signal,
    dirac,
    fourier,
    gauss,
    l1_norm,
    l2_norm,
    pair_bilinear,
    random_signal,
    _periodized_sqdist,
)
from .transform import (
    PhaseTable,
    m1_norm,
    _char_sum_rows,
    _shift_matrix,
)
from .frames import GaborSystem, frame_bounds, partial_frame_sum

__all__ = [
    "RegNet",
    "pc_operator",
    "cp_operator",
    "plateau_window",
    "spike_window",
    "pc_net",
    "box_mask",
    "localization_net",
    "gabor_partial_net",
    "standard_probes",
    "induced_m1_norm",
    "induced_minf_norm",
    "induced_m1_to_minf_norm",
    "RegularizingReport",
    "check_regularizing",
    "pair_weak",
    "sandwich",
    "ComposeApproxReport",
    "compose_approx",
]


@dataclass(frozen=True)
class RegNet:
    """A finite staged net of endomorphisms of one group."""

    group: Group
    stages: tuple
    labels: tuple

    def __post_init__(self):
        stages = tuple(self.stages)
        labels = tuple(str(x) for x in self.labels)
        if len(stages) != len(labels):
            raise ValueError("one label per stage, please")
        if not stages:
            raise ValueError("a net needs at least one stage")
        for op in stages:
            if op.domain != self.group or op.codomain != self.group:
                raise GroupMismatchError("net stages must be endomorphisms of the group")
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.stages)

    @property
    def final(self) -> KernelOperator:
        return self.stages[-1]


def pc_operator(h1: Signal, h2: Signal) -> KernelOperator:
    """Product then convolution: s -> (s . h1) * h2.

    Kernel K(s, t) = h1(s) h2(t - s), the sheared tensor of the pair.
    """
    if h1.group != h2.group:
        raise GroupMismatchError("factors live on different groups")
    k = h1.values[:, None] * _shift_matrix(h2)
    return KernelOperator(h1.group, h1.group, k)


def cp_operator(h1: Signal, h2: Signal) -> KernelOperator:
    """Convolution then product: s -> (s * h1) . h2.

    Kernel K(s, t) = h1(t - s) h2(t), the other shear of the tensor.
    """
    if h1.group != h2.group:
        raise GroupMismatchError("factors live on different groups")
    k = _shift_matrix(h1) * h2.values[None, :]
    return KernelOperator(h1.group, h1.group, k)


def plateau_window(group: Group, spread: float) -> Signal:
    """A raised-cosine plateau around 0 that widens as spread shrinks.

    For spread <= 1/2 the plateau covers the whole group and the window
    is exactly the constant 1.  The Fourier coefficient l1 norm is
    normalized to at most 1 (it equals 1 for the constant), so the
    multiplication stage never inflates.
    """
    if not spread > 0:
        raise ValueError(f"spread must be positive, got {spread}")
    dist = np.sqrt(_periodized_sqdist(group))
    dmax = float(dist.max())
    u = dist * (spread / dmax) if dmax > 0 else np.zeros_like(dist)
    vals = np.where(
        u <= 0.5, 1.0, np.where(u < 1.0, 0.5 * (1.0 + np.cos(2 * np.pi * (u - 0.5))), 0.0)
    )
    window = Signal(group, vals)
    a_norm = l1_norm(fourier(window))
    if a_norm > 1.0:
        window = Signal(group, vals / a_norm)
    return window


def spike_window(group: Group, spread: float) -> Signal:
    """Periodized Gaussian normalized to ||h||_1 = 1: an approximate
    convolution unit that collapses to the unit impulse as spread -> 0."""
    g = gauss(group, spread)
    return Signal(group, g.values / l1_norm(g))


def pc_net(group: Group, spreads) -> RegNet:
    """Product-convolution net: stage s -> (s . plateau) * spike.

    spreads must be positive and strictly decreasing; as they shrink the
    plateau rises to the constant 1 and the spike sharpens to the unit
    impulse, so the last stage is the identity up to floating-point
    underflow of the Gaussian tails.
    """
    spreads = [float(s) for s in spreads]
    if not spreads:
        raise ValueError("need at least one spread")
    if any(not s > 0 for s in spreads):
        raise ValueError(f"spreads must be positive, got {spreads}")
    if any(b >= a for a, b in zip(spreads, spreads[1:])):
        raise ValueError(f"spreads must be strictly decreasing, got {spreads}")
    stages = []
    labels = []
    for s in spreads:
        stages.append(pc_operator(plateau_window(group, s), spike_window(group, s)))
        labels.append(f"pc[spread={s:g}]")
    return RegNet(group, tuple(stages), tuple(labels))


def box_mask(group: Group, time_radius: float, freq_radius: float) -> PhaseTable:
    """Indicator of a centered phase-space box: wrap-around distance at
    most time_radius in every time coordinate and freq_radius in every
    frequency coordinate."""
    coords = [ax.ravel() for ax in np.indices(group.orders)]
    dist = np.zeros(group.order)
    for c, n in zip(coords, group.orders):
        dist = np.maximum(dist, np.minimum(c, n - c))
    tmask = dist <= time_radius
    fmask = dist <= freq_radius
    return PhaseTable(group, np.outer(tmask, fmask).astype(complex))


def localization_net(window: Signal, masks) -> RegNet:
    """Stages T s = sum_nu phase_weight * H(nu) <s, pi(nu) g> pi(nu) g.

    Needs ||g||_2 = 1 (to 1e-10); the all-ones mask then gives the
    identity exactly, by the inversion formula.
    """
    if abs(l2_norm(window) - 1.0) > 1e-10:
        raise WindowError("localization window must be L2-normalized")
    grp = window.group
    n = grp.order
    atoms = (
        _shift_matrix(window)[:, None, :] * character_table(grp)[None, :, :]
    ).reshape(n * n, n)
    wp = float(grp.weight * grp.dual_weight)
    stages = []
    labels = []
    for i, mask in enumerate(masks):
        if mask.group != grp:
            raise GroupMismatchError("mask lives on the wrong group")
        h = mask.values.ravel()
        k = ((atoms.conj() * h[:, None]).T @ atoms) * wp
        coverage = float(np.count_nonzero(h)) / h.size
        stages.append(KernelOperator(grp, grp, k))
        labels.append(f"loc[{i}:{coverage:.0%}]")
    return RegNet(grp, tuple(stages), tuple(labels))


def gabor_partial_net(system: GaborSystem, exhaustion) -> RegNet:
    """Partial sums of a Parseval system along a growing exhaustion of
    the lattice; the full lattice gives the identity."""
    a, b = frame_bounds(system)
    if abs(a - 1.0) > 1e-8 or abs(b - 1.0) > 1e-8:
        raise FrameError(
            f"gabor_partial_net needs a Parseval system, bounds ({a:.3e}, {b:.3e})",
            bounds=(a, b),
        )
    stages = []
    labels = []
    for i, subset in enumerate(exhaustion):
        subset = list(subset)
        stages.append(partial_frame_sum(system, subset))
        labels.append(f"gabor[{i}:{len(subset)}/{system.lattice.size}]")
    return RegNet(system.group, tuple(stages), tuple(labels))


def standard_probes(group: Group, seed: int, extra: int = 2) -> list:
    """Deterministic probe set: impulse, Gaussian, seeded noise."""
    probes = [dirac(group), gauss(group, 1.0)]
    for j in range(extra):
        probes.append(random_signal(group, seed + j))
    return probes


def _lift_table(op: KernelOperator, g1: Signal, g2: Signal) -> np.ndarray:
    """LiftT[nu, nu'] = bilinear table at nu' of T applied to the nu-th
    synthesis atom of g1; the transpose of the lifted matrix."""
    if g1.group != op.domain or g2.group != op.codomain:
        raise GroupMismatchError("windows do not match the operator's groups")
    G1, G2 = op.domain, op.codomain
    n1, n2 = G1.order, G2.order
    wp1 = float(G1.weight * G1.dual_weight)
    atoms1 = (
        _shift_matrix(g1)[:, None, :] * character_table(G1)[None, :, :]
    ).reshape(n1 * n1, n1)
    synth = atoms1.conj() * (wp1 / l2_norm(g1) ** 2)
    images = (synth @ op.kernel) * float(G1.weight)  # (n1^2, n2)
    rows = images[:, None, :] * _shift_matrix(g2)[None, :, :]
    tables = _char_sum_rows(rows.reshape(n1 * n1 * n2, n2), G2).reshape(
        n1 * n1, n2, n2
    ) * float(G2.weight)
    return tables.reshape(n1 * n1, n2 * n2)


def induced_m1_norm(op: KernelOperator, g1: Signal, g2: Signal = None) -> float:
    """Exact norm of the phase-space lift of T between weighted-l1
    coefficient spaces; an upper bound for the m1 -> m1 operator norm."""
    g2 = g1 if g2 is None else g2
    lift = _lift_table(op, g1, g2)
    wp1 = float(op.domain.weight * op.domain.dual_weight)
    wp2 = float(op.codomain.weight * op.codomain.dual_weight)
    return float(np.max(np.sum(np.abs(lift), axis=1)) * wp2 / wp1)


def induced_minf_norm(op: KernelOperator, g1: Signal, g2: Signal = None) -> float:
    """Exact norm of the lift between sup coefficient spaces; an upper
    bound for the sup-modulation operator norm."""
    g2 = g1 if g2 is None else g2
    lift = _lift_table(op, g1, g2)
    return float(np.max(np.sum(np.abs(lift), axis=0)))


def induced_m1_to_minf_norm(op: KernelOperator, g1: Signal, g2: Signal = None) -> float:
    """Lift norm from weighted l1 into sup; the uniform bound logged for
    sandwiched nets."""
    g2 = g1 if g2 is None else g2
    lift = _lift_table(op, g1, g2)
    wp1 = float(op.domain.weight * op.domain.dual_weight)
    return float(np.max(np.abs(lift)) / wp1)


@dataclass(frozen=True)
class RegularizingReport:
    """Certificate data for one net against one window and probe set."""

    labels: tuple
    final_m1_errors: tuple
    weak_errors: tuple
    m1_opnorms: tuple
    minf_opnorms: tuple
    tol: float

    @property
    def sup_m1_opnorm(self) -> float:
        return max(self.m1_opnorms)

    @property
    def sup_minf_opnorm(self) -> float:
        return max(self.minf_opnorms)

    @property
    def final_ok(self) -> bool:
        return max(self.final_m1_errors) <= self.tol

    @property
    def weak_ok(self) -> bool:
        return max(self.weak_errors) <= self.tol

    @property
    def bounded_ok(self) -> bool:
        return math.isfinite(self.sup_m1_opnorm) and math.isfinite(self.sup_minf_opnorm)

    @property
    def passed(self) -> bool:
        return self.final_ok and self.weak_ok and self.bounded_ok


def check_regularizing(net: RegNet, probes, window: Signal, tol: float) -> RegularizingReport:
    """Evaluate the four conditions: final-stage m1 errors on the probes,
    uniform lifted m1 and sup operator norms over the stages, and
    final-stage weak errors over probe pairs."""
    final = net.final
    m1_errors = tuple(m1_norm(final.apply(f) - f, window) for f in probes)
    weak = []
    for f in probes:
        for s in probes:
            weak.append(abs(pair_weak(final, f, s)))
    m1_ops = tuple(induced_m1_norm(op, window) for op in net.stages)
    minf_ops = tuple(induced_minf_norm(op, window) for op in net.stages)
    return RegularizingReport(
        labels=net.labels,
        final_m1_errors=m1_errors,
        weak_errors=tuple(weak),
        m1_opnorms=m1_ops,
        minf_opnorms=minf_ops,
        tol=tol,
    )


def pair_weak(op: KernelOperator, f: Signal, s: Signal) -> complex:
    """(f, T s - s): the weak defect of op against the identity."""
    return bilinear_form(op, s, f) - pair_bilinear(f, s)


def sandwich(op: KernelOperator, net1: RegNet, net2: RegNet) -> list:
    """Stage-by-stage net2[j] o op o net1[j]; nets must have equal length
    and live on the operator's domain and codomain."""
    if net1.group != op.domain or net2.group != op.codomain:
        raise GroupMismatchError("nets must live on the operator's groups")
    if len(net1) != len(net2):
        raise ValueError(f"stage counts differ: {len(net1)} vs {len(net2)}")
    return [
        compose(compose(s1, op), s2) for s1, s2 in zip(net1.stages, net2.stages)
    ]


@dataclass(frozen=True)
class ComposeApproxReport:
    """Staged approximation of a composition by sandwiched factors."""

    stages: tuple
    weak_errors: tuple
    kernel_errors: tuple
    target: KernelOperator
    tol: float

    @property
    def final_weak_error(self) -> float:
        return self.weak_errors[-1]

    @property
    def passed(self) -> bool:
        return self.final_weak_error <= self.tol


def compose_approx(
    first: KernelOperator,
    second: KernelOperator,
    nets,
    probes1=None,
    probes2=None,
    tol: float = 1e-10,
    seed: int = 0,
) -> ComposeApproxReport:
    """Approximate 'first then second' by composing the sandwiched stages.

    nets is a triple on (domain of first, middle group, codomain of
    second).  Weak errors pair probe signals on the outer groups against
    the defect from the exact composition.
    """
    net1, net2, net3 = nets
    target = compose(first, second)
    first_stages = sandwich(first, net1, net2)
    second_stages = sandwich(second, net2, net3)
    if probes1 is None:
        probes1 = standard_probes(first.domain, seed)
    if probes2 is None:
        probes2 = standard_probes(second.codomain, seed + 100)
    stages = []
    weak = []
    kerr = []
    for s1, s2 in zip(first_stages, second_stages):
        approx = compose(s1, s2)
        stages.append(approx)
        worst = 0.0
        for fa in probes1:
            for fb in probes2:
                defect = bilinear_form(approx, fa, fb) - bilinear_form(target, fa, fb)
                worst = max(worst, abs(defect))
        weak.append(worst)
        kerr.append(float(np.max(np.abs(approx.kernel - target.kernel))))
    return ComposeApproxReport(
        stages=tuple(stages),
        weak_errors=tuple(weak),
        kernel_errors=tuple(kerr),
        target=target,
        tol=tol,
    )
