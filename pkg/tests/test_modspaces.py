import math

import numpy as np
import pytest

from tfkit.errors import GroupMismatchError
from tfkit.groups import make_group
from tfkit.kernels import (
    KernelOperator,
    fourier_operator,
    identity_operator,
    operator_m1_norm,
    operator_minf_norm,
    rank_one,
)
from tfkit.modspaces import (
    conjugate_exponent,
    empirical_mpq_opnorm,
    mixed_norm_condition,
    mpq_bound,
    stft_probes,
)
from tfkit.signals import Signal, gauss, l2_norm, random_signal

EXPONENTS = (1, 2, math.inf)


def normalized_gauss(group, spread=1.0):
    g = gauss(group, spread)
    return Signal(group, g.values / l2_norm(g))


def operator_zoo(g):
    rng = np.random.Generator(np.random.PCG64(99))
    k = rng.standard_normal((g.order, g.order)) + 1j * rng.standard_normal(
        (g.order, g.order)
    )
    return {
        "rank_one": rank_one(random_signal(g, 1), random_signal(g, 2)),
        "identity": identity_operator(g),
        "random": KernelOperator(g, g, k),
    }


# ---------------------------------------------------------------------------
# exponent arithmetic


def test_conjugate_exponent_values():
    assert conjugate_exponent(1) == math.inf
    assert conjugate_exponent(math.inf) == 1.0
    assert conjugate_exponent(2) == pytest.approx(2.0)
    assert conjugate_exponent(4) == pytest.approx(4.0 / 3.0)
    assert conjugate_exponent(conjugate_exponent(3.0)) == pytest.approx(3.0)


def test_conjugate_exponent_rejects_bad_values():
    for bad in (0.5, 0, -1, math.nan):
        with pytest.raises(ValueError):
            conjugate_exponent(bad)


def test_mixed_norm_rejects_bad_exponents():
    g = make_group((4,))
    w = normalized_gauss(g)
    op = identity_operator(g)
    with pytest.raises(ValueError):
        mixed_norm_condition(op, w, w, 0.5, 2)
    with pytest.raises(ValueError):
        mixed_norm_condition(op, w, w, 2, 0.5)


# ---------------------------------------------------------------------------
# corners of the mixed-norm grid coincide with the operator norms


def test_mixed_norm_corners_match_operator_norms():
    g = make_group((6,))
    w1, w2 = normalized_gauss(g), normalized_gauss(g, 0.7)
    for op in operator_zoo(g).values():
        assert mixed_norm_condition(op, w1, w2, 1, 1) == pytest.approx(
            operator_m1_norm(op, w1, w2), rel=1e-13
        )
        assert mixed_norm_condition(op, w1, w2, math.inf, math.inf) == pytest.approx(
            operator_minf_norm(op, w1, w2), rel=1e-13
        )


def test_mixed_norms_interpolate_between_corners():
    g = make_group((6,))
    w = normalized_gauss(g)
    op = operator_zoo(g)["random"]
    values = [mixed_norm_condition(op, w, w, p, p) for p in (1, 1.5, 2, 4, math.inf)]
    for earlier, later in zip(values, values[1:]):
        assert later <= earlier * (1 + 1e-12)


def test_mpq_bound_folds_window_energy():
    g = make_group((6,))
    w = gauss(g, 1.0)  # deliberately unnormalized
    op = operator_zoo(g)["random"]
    assert mpq_bound(op, w, w, 2, 2) == pytest.approx(
        mixed_norm_condition(op, w, w, 2, 2) / l2_norm(w) ** 2, rel=1e-13
    )


# ---------------------------------------------------------------------------
# domination of the empirical norm


def test_condition_dominates_empirical_norm():
    g = make_group((8,))
    w = normalized_gauss(g)
    probes = stft_probes(g, w, 202, count=3) + [random_signal(g, 11)]
    worst = 0.0
    for name, op in operator_zoo(g).items():
        for p in EXPONENTS:
            for q in EXPONENTS:
                bound = mpq_bound(op, w, w, p, q)
                observed = empirical_mpq_opnorm(op, w, w, p, q, probes)
                assert observed <= bound * (1 + 1e-9), (name, p, q)
                worst = max(worst, observed / bound)
    assert worst <= 1 + 1e-9


def test_condition_dominates_for_fourier_kernel():
    g = make_group((8,))
    w1 = normalized_gauss(g)
    w2 = normalized_gauss(g.dual())
    op = fourier_operator(g)
    probes = stft_probes(g, w1, 404, count=3)
    for p in EXPONENTS:
        for q in EXPONENTS:
            bound = mpq_bound(op, w1, w2, p, q)
            observed = empirical_mpq_opnorm(op, w1, w2, p, q, probes)
            assert observed <= bound * (1 + 1e-9)


def test_identity_gap_at_p_equals_q_equals_two():
    # the weighted (2,2) table norm of the identity is sqrt(order) for a
    # unit window, while the observed operator norm is exactly 1: the
    # domination bound is honest but far from tight here
    for n in (4, 8, 16):
        g = make_group((n,))
        w = normalized_gauss(g)
        op = identity_operator(g)
        cond = mixed_norm_condition(op, w, w, 2, 2)
        assert cond == pytest.approx(math.sqrt(n), rel=1e-10)
        probes = stft_probes(g, w, 7, count=3)
        observed = empirical_mpq_opnorm(op, w, w, 2, 2, probes)
        assert observed == pytest.approx(1.0, rel=1e-12)


# ---------------------------------------------------------------------------
# probes


def test_stft_probes_are_deterministic():
    g = make_group((8,))
    w = normalized_gauss(g)
    a = stft_probes(g, w, 5)
    b = stft_probes(g, w, 5)
    assert len(a) == 4
    for f, h in zip(a, b):
        assert np.array_equal(f.values, h.values)
    different = stft_probes(g, w, 6)
    assert not np.array_equal(a[0].values, different[0].values)


def test_stft_probes_reject_foreign_window():
    g = make_group((8,))
    with pytest.raises(GroupMismatchError):
        stft_probes(g, normalized_gauss(make_group((6,))), 5)


def test_empirical_norm_rejects_foreign_probe():
    g = make_group((8,))
    w = normalized_gauss(g)
    with pytest.raises(GroupMismatchError):
        empirical_mpq_opnorm(
            identity_operator(g), w, w, 2, 2, [random_signal(make_group((6,)), 1)]
        )


def test_empirical_norm_needs_a_live_probe():
    g = make_group((8,))
    w = normalized_gauss(g)
    dead = Signal(g, np.zeros(8))
    with pytest.raises(ValueError):
        empirical_mpq_opnorm(identity_operator(g), w, w, 2, 2, [dead])
