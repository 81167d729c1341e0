"""Operators between signal spaces, stored as kernels.

An operator T from signals on G1 to signals on G2 is represented by its
kernel K on G1 x G2, with no Haar weight folded into the stored values:

    K(x, y) = (T delta_x)(y)

where delta_x is the point mass (the unit impulse divided by the Haar
weight, so that (f, delta_x) = f(x)).  Application folds the weight:

    (T s)(y) = sum_x weight_G1 * K(x, y) * s(x)

Because the kernel is itself a signal on the product group, every norm
and expansion defined for signals applies verbatim to operators; the
operator-level phase-space norms at the bottom of this module are the
bridge the tests cross in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import GroupMismatchError
from .groups import Group, character_table, product_group
from .signals import Signal, gauss, l2_norm
from .transform import m1_norm, stft, _shift_matrix, _char_sum_rows

__all__ = [
    "KernelOperator",
    "compose",
    "bilinear_form",
    "rank_one",
    "kernel_from_operator",
    "identity_operator",
    "fourier_operator",
    "inv_fourier_operator",
    "kernel_signal",
    "operator_matrix",
    "operator_pairing_table",
    "operator_m1_norm",
    "operator_minf_norm",
    "TensorExpansion",
    "tensor_expand",
    "weak_reconstruct",
]


@dataclass(frozen=True, eq=False)
class KernelOperator:
    """An operator held as its kernel array, shaped (|G1|, |G2|)."""

    domain: Group
    codomain: Group
    kernel: np.ndarray

    def __post_init__(self):
        k = np.array(self.kernel, dtype=complex).reshape(
            self.domain.order, self.codomain.order
        )
        k.flags.writeable = False
        object.__setattr__(self, "kernel", k)

    def apply(self, s: Signal) -> Signal:
        """(T s)(y) = sum_x weight * K(x, y) s(x)."""
        if s.group != self.domain:
            raise GroupMismatchError(
                f"operator domain is {self.domain}, signal lives on {s.group}"
            )
        return Signal(self.codomain, (s.values @ self.kernel) * float(self.domain.weight))

    __call__ = apply

    def trace(self) -> complex:
        """sum_x weight * K(x, x); needs domain == codomain."""
        if self.domain != self.codomain:
            raise GroupMismatchError("trace needs an endomorphism")
        return complex(np.trace(self.kernel) * float(self.domain.weight))

    def transpose(self) -> "KernelOperator":
        """Argument swap K(y, x); the transpose in the bilinear duality,
        not the L2 adjoint."""
        return KernelOperator(self.codomain, self.domain, self.kernel.T)

    def adjoint(self) -> "KernelOperator":
        """L2 adjoint: kernel conj(K(x, y)) with arguments swapped."""
        return KernelOperator(self.codomain, self.domain, self.kernel.conj().T)

    def __repr__(self):
        return f"KernelOperator({self.domain} -> {self.codomain})"


def compose(first: KernelOperator, second: KernelOperator) -> KernelOperator:
    """The operator 'apply first, then second'.

    Kernel: K(x, z) = sum_y weight_mid * K1(x, y) K2(y, z).  Matches
    second.apply(first.apply(s)) exactly (dense matrix product oracle in
    the tests).
    """
    if first.codomain != second.domain:
        raise GroupMismatchError(
            f"cannot chain {first.codomain} -> into -> {second.domain}"
        )
    k = (first.kernel @ second.kernel) * float(first.codomain.weight)
    return KernelOperator(first.domain, second.codomain, k)


def bilinear_form(op: KernelOperator, s1: Signal, s2: Signal) -> complex:
    """(K, s1 tensor s2) = (T s1, s2); symmetric route via transpose."""
    if s1.group != op.domain or s2.group != op.codomain:
        raise GroupMismatchError("bilinear_form arguments do not match the operator")
    w = float(op.domain.weight) * float(op.codomain.weight)
    return complex((s1.values @ op.kernel @ s2.values) * w)


def rank_one(f1: Signal, f2: Signal) -> KernelOperator:
    """The operator s -> (f1, s) * f2, with kernel f1 tensor f2."""
    return KernelOperator(f1.group, f2.group, np.outer(f1.values, f2.values))


def kernel_from_operator(probe: Callable[[Signal], Signal], domain: Group) -> KernelOperator:
    """Recover the kernel of a black-box linear map by point-mass probing:
    row x of the kernel is probe(delta_x)."""
    w = float(domain.weight)
    rows = []
    codomain = None
    for i in range(domain.order):
        vals = np.zeros(domain.order, dtype=complex)
        vals[i] = 1.0 / w
        out = probe(Signal(domain, vals))
        if not isinstance(out, Signal):
            raise TypeError(f"probe returned {type(out).__name__}, expected Signal")
        if codomain is None:
            codomain = out.group
        elif out.group != codomain:
            raise GroupMismatchError("probe outputs live on inconsistent groups")
        rows.append(out.values)
    return KernelOperator(domain, codomain, np.stack(rows))


def identity_operator(group: Group) -> KernelOperator:
    """Kernel delta(x - y) / weight, so that application is the identity."""
    k = np.eye(group.order, dtype=complex) / float(group.weight)
    return KernelOperator(group, group, k)


def fourier_operator(group: Group) -> KernelOperator:
    """The Fourier transform as a kernel on G x dual(G): K(x, w) = conj(w(x)),
    independent of the Haar normalization."""
    return KernelOperator(group, group.dual(), character_table(group).conj().T)


def inv_fourier_operator(group: Group) -> KernelOperator:
    """The inverse transform as a kernel on dual(G) x G: K(w, x) = w(x).

    Composing fourier_operator and inv_fourier_operator collapses the
    character sum sum_w w(y - x) to a point mass at y = x: the identity
    kernel.
    """
    return KernelOperator(group.dual(), group, character_table(group))


def kernel_signal(op: KernelOperator) -> Signal:
    """The kernel as a signal on the product group G1 x G2."""
    return Signal(product_group(op.domain, op.codomain), op.kernel.ravel())


def operator_matrix(op: KernelOperator) -> np.ndarray:
    """Weight-folded matrix acting on value vectors: M[y, x] = weight * K(x, y)."""
    return op.kernel.T * float(op.domain.weight)


def operator_pairing_table(op: KernelOperator, g1: Signal, g2: Signal) -> np.ndarray:
    """Table B[nu1, nu2] = (pi(nu2) g2, T pi(nu1) g1), shape (|G1|^2, |G2|^2).

    Computed by two passes of batched bilinear phase tables (FFT along
    each side separately); the tests keep the quadruple direct sum as an
    oracle on small orders.
    """
    if g1.group != op.domain or g2.group != op.codomain:
        raise GroupMismatchError("windows do not match the operator's groups")
    G1, G2 = op.domain, op.codomain
    n1, n2 = G1.order, G2.order
    # pass 1: m[nu1, y] = (T pi(nu1) g1)(y)
    rows = op.kernel.T[:, None, :] * _shift_matrix(g1)[None, :, :]  # (n2, n1, n1)
    m = _char_sum_rows(rows.reshape(n2 * n1, n1), G1).reshape(n2, n1, n1)
    m = np.transpose(m, (1, 2, 0)).reshape(n1 * n1, n2) * float(G1.weight)
    # pass 2: B[nu1, nu2] = (pi(nu2) g2, m[nu1, :])
    rows2 = m[:, None, :] * _shift_matrix(g2)[None, :, :]  # (n1^2, n2, n2)
    b = _char_sum_rows(rows2.reshape(n1 * n1 * n2, n2), G2).reshape(n1 * n1, n2, n2)
    return b.reshape(n1 * n1, n2 * n2) * float(G2.weight)


def _phase_weight(group: Group) -> float:
    return float(group.weight * group.dual_weight)


def operator_m1_norm(op: KernelOperator, g1: Signal, g2: Signal) -> float:
    """Phase-space L1 size of the operator against a window pair:

        integral over (nu1, nu2) of |(pi(nu2) g2, T pi(nu1) g1)|

    Finite for every kernel at finite scale; equals the m1 norm of the
    kernel signal with window tensor(g1, g2), which the tests check as a
    second, independent code path.
    """
    b = np.abs(operator_pairing_table(op, g1, g2))
    return float(np.sum(b) * _phase_weight(op.domain) * _phase_weight(op.codomain))


def operator_minf_norm(op: KernelOperator, g1: Signal, g2: Signal) -> float:
    """Supremum counterpart: max |(pi(nu2) g2, T pi(nu1) g1)|; equals the
    sup modulation norm of the kernel signal with the tensor window."""
    return float(np.max(np.abs(operator_pairing_table(op, g1, g2))))


@dataclass(frozen=True)
class TensorExpansion:
    """Rank-one decomposition T = sum_j rank_one(left[j], right[j])."""

    left: tuple
    right: tuple
    singular_values: tuple
    max_error: float
    projective_m1: float

    @property
    def rank(self) -> int:
        return len(self.left)


def tensor_expand(
    op: KernelOperator,
    tol: float,
    g1: Optional[Signal] = None,
    g2: Optional[Signal] = None,
) -> TensorExpansion:
    """Split a kernel into rank-one tensors by singular value decomposition.

    Keeps singular triples with sigma_j > tol * sigma_max (absolute
    cutoff on the scale of the kernel).  The weight is folded so that
    the kernel equals sum_j outer(left_j, right_j) with no extra factor;
    max_error reports the sup-norm reconstruction defect.  projective_m1
    is sum_j m1(left_j) * m1(right_j) against the given windows (default:
    unit-spread periodized Gaussians), a finite upper bound certificate
    for the kernel's own m1 norm.
    """
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    u, sing, vh = np.linalg.svd(op.kernel)
    if sing.size and sing[0] > 0:
        keep = sing > tol * sing[0]
    else:
        keep = np.zeros(sing.shape, dtype=bool)
    left = []
    right = []
    kept = []
    for j in np.nonzero(keep)[0]:
        left.append(Signal(op.domain, sing[j] * u[:, j]))
        right.append(Signal(op.codomain, vh[j, :]))
        kept.append(float(sing[j]))
    rec = np.zeros_like(op.kernel)
    for f1, f2 in zip(left, right):
        rec = rec + np.outer(f1.values, f2.values)
    max_error = float(np.max(np.abs(op.kernel - rec))) if op.kernel.size else 0.0
    if g1 is None:
        g1 = gauss(op.domain, 1.0)
    if g2 is None:
        g2 = gauss(op.codomain, 1.0)
    projective = sum(m1_norm(f1, g1) * m1_norm(f2, g2) for f1, f2 in zip(left, right))
    return TensorExpansion(
        left=tuple(left),
        right=tuple(right),
        singular_values=tuple(kept),
        max_error=max_error,
        projective_m1=float(projective),
    )


def weak_reconstruct(op: KernelOperator, window: Signal, s: Signal) -> Signal:
    """Rebuild T s from the action of T on time-frequency shifts of one
    window:

        T s = ||g||_2^{-2} sum_nu phase_weight * stft(g, s)[nu] * T(pi(nu) g)

    Exact at finite scale; the tests compare against apply directly.
    """
    if window.group != op.domain or s.group != op.domain:
        raise GroupMismatchError("window and signal must live on the operator domain")
    G1 = op.domain
    n1 = G1.order
    coeffs = stft(window, s).values.ravel()
    # atoms[(x, w), t] = w(t) g(t - x), x-major like the stft table
    atoms = (
        _shift_matrix(window)[:, None, :] * character_table(G1)[None, :, :]
    ).reshape(n1 * n1, n1)
    images = (atoms @ op.kernel) * float(G1.weight)  # row nu = T(pi(nu) g)
    scale = _phase_weight(G1) / l2_norm(window) ** 2
    return Signal(op.codomain, (coeffs @ images) * scale)
