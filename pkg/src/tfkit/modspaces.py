"""Mixed-norm conditions on operator phase tables, and the empirical
operator norms they dominate.

For an operator T with windows g1, g2, the table

    B[nu1, nu2] = (pi(nu2) g2, T pi(nu1) g1)

carries everything the windows can see of T.  Its mixed (p, q) norm --
inner exponent p over the domain index, outer exponent q over the
codomain index, both weighted by the phase-space weights -- is a
computable condition number: scaled by ||g1||_2^{-2} it dominates the
empirical operator norm from the p-conjugate modulation norm on the
domain into the q modulation norm on the codomain, for windows closed
under conjugation (real windows in particular).

The domination is generally strict; for the identity operator at
p = q = 2 the empirical norm is exactly 1 while the condition number
grows like sqrt(order), a gap worth logging rather than hiding.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import GroupMismatchError
from .groups import Group
from .kernels import KernelOperator, operator_pairing_table
from .signals import Signal, l2_norm
from .transform import PhaseTable, mod_norm, stft_invert

__all__ = [
    "conjugate_exponent",
    "mixed_norm_condition",
    "mpq_bound",
    "empirical_mpq_opnorm",
    "stft_probes",
]


def conjugate_exponent(p) -> float:
    """The exponent p' with 1/p + 1/p' = 1; maps 1 <-> inf and fixes 2."""
    if p == math.inf:
        return 1.0
    if not p >= 1:
        raise ValueError(f"exponent must be in [1, inf], got {p}")
    if p == 1:
        return math.inf
    return p / (p - 1.0)


def _weighted_pnorm(mags: np.ndarray, weight: float, p, axis: int) -> np.ndarray:
    if p == math.inf:
        return np.max(mags, axis=axis)
    return (np.sum(mags**p, axis=axis) * weight) ** (1.0 / p)


def mixed_norm_condition(
    op: KernelOperator, g1: Signal, g2: Signal, p, q
) -> float:
    """Mixed (p, q) norm of the operator phase table: exponent p across
    the domain phase space (inner), q across the codomain (outer)."""
    if p != math.inf and not p >= 1:
        raise ValueError(f"inner exponent must be in [1, inf], got {p}")
    if q != math.inf and not q >= 1:
        raise ValueError(f"outer exponent must be in [1, inf], got {q}")
    mags = np.abs(operator_pairing_table(op, g1, g2))
    wp1 = float(op.domain.weight * op.domain.dual_weight)
    wp2 = float(op.codomain.weight * op.codomain.dual_weight)
    inner = _weighted_pnorm(mags, wp1, p, axis=0)
    return float(_weighted_pnorm(inner, wp2, q, axis=0))


def mpq_bound(op: KernelOperator, g1: Signal, g2: Signal, p, q) -> float:
    """The constant-folded condition ||g1||_2^{-2} * mixed_norm_condition:
    an upper bound for empirical_mpq_opnorm when g1 is closed under
    conjugation."""
    return mixed_norm_condition(op, g1, g2, p, q) / l2_norm(g1) ** 2


def empirical_mpq_opnorm(
    op: KernelOperator, g1: Signal, g2: Signal, p, q, probes
) -> float:
    """max over probes of mod_norm(T s, g2, q) / mod_norm(s, g1, p'),
    the observed norm of T from the p-conjugate modulation space into
    the q one.  Probes with vanishing denominator are skipped; if all
    vanish, ValueError."""
    p_conj = conjugate_exponent(p)
    best = None
    for s in probes:
        if s.group != op.domain:
            raise GroupMismatchError("probe lives off the operator's domain")
        den = mod_norm(s, g1, p_conj)
        if den <= 1e-300:
            continue
        num = mod_norm(op.apply(s), g2, q)
        ratio = num / den
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise ValueError("every probe had vanishing modulation norm")
    return float(best)


def stft_probes(group: Group, window: Signal, seed: int, count: int = 4) -> list:
    """Probe signals synthesized from seeded random phase tables, so the
    probe energy is spread over all of phase space rather than pinned to
    a few points."""
    if window.group != group:
        raise GroupMismatchError("window lives on the wrong group")
    rng = np.random.Generator(np.random.PCG64(seed))
    n = group.order
    probes = []
    for _ in range(count):
        table = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        probes.append(stft_invert(window, PhaseTable(group, table)))
    return probes
