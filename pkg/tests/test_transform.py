import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tfkit.errors import GroupMismatchError, WindowError
from tfkit.groups import PhasePoint, make_group
from tfkit.signals import (
    Signal,
    constant,
    dirac,
    gauss,
    involute,
    l2_norm,
    random_signal,
)
from tfkit.transform import (
    PhaseTable,
    m1_norm,
    mod_norm,
    mod_norm_conv,
    pairing_table,
    phase_points,
    stft,
    stft_invert,
    window_equivalence_ratio,
)

ORDERS = st.sampled_from([(2,), (3,), (6,), (2, 3)])


def naive_char(group, x, w):
    phase = 0.0
    for xi, wi, n in zip(x, w, group.orders):
        phase += (xi % n) * (wi % n) / n
    return cmath.exp(2j * math.pi * phase)


def naive_stft(window, s):
    """V[x, w] = sum_t weight * s(t) conj(w(t) g(t - x))."""
    g = window.group
    els = g.elements()
    wt = float(g.weight)
    out = np.zeros((g.order, g.order), dtype=complex)
    for ix, x in enumerate(els):
        for iw, w in enumerate(els):
            acc = 0j
            for it, t in enumerate(els):
                atom = naive_char(g, t, w) * window.values[g.index(g.add(t, g.neg(x)))]
                acc += s.values[it] * atom.conjugate()
            out[ix, iw] = acc * wt
    return out


def naive_pairing(window, s):
    """B[x, w] = sum_t weight * w(t) g(t - x) s(t)   (no conjugation)."""
    g = window.group
    els = g.elements()
    wt = float(g.weight)
    out = np.zeros((g.order, g.order), dtype=complex)
    for ix, x in enumerate(els):
        for iw, w in enumerate(els):
            acc = 0j
            for it, t in enumerate(els):
                atom = naive_char(g, t, w) * window.values[g.index(g.add(t, g.neg(x)))]
                acc += s.values[it] * atom
            out[ix, iw] = acc * wt
    return out


def test_phase_table_validation():
    g = make_group((4,))
    with pytest.raises(ValueError):
        PhaseTable(g, np.zeros((4, 3)))
    table = PhaseTable(g, np.zeros((4, 4)))
    assert table.phase_weight == pytest.approx(0.25)


def test_phase_points_enumeration():
    g = make_group((2,))
    pts = phase_points(g)
    assert pts == [
        PhasePoint((0,), (0,)),
        PhasePoint((0,), (1,)),
        PhasePoint((1,), (0,)),
        PhasePoint((1,), (1,)),
    ]


def test_zero_window_rejected():
    g = make_group((4,))
    zero = Signal(g, np.zeros(4))
    with pytest.raises(WindowError):
        stft(zero, dirac(g))
    with pytest.raises(WindowError):
        mod_norm(dirac(g), zero, 1)


def test_group_mismatch_rejected():
    a = make_group((4,))
    b = make_group((5,))
    with pytest.raises(GroupMismatchError):
        stft(dirac(a), dirac(b))


def test_stft_matches_direct_sum():
    for orders in [(6,), (2, 3)]:
        g = make_group(orders)
        win = random_signal(g, 1)
        s = random_signal(g, 2)
        fast = stft(win, s).values
        slow = naive_stft(win, s)
        assert np.max(np.abs(fast - slow)) < 1e-12


def test_pairing_table_matches_direct_sum():
    for orders in [(6,), (2, 3)]:
        g = make_group(orders)
        win = random_signal(g, 3)
        s = random_signal(g, 4)
        fast = pairing_table(win, s).values
        slow = naive_pairing(win, s)
        assert np.max(np.abs(fast - slow)) < 1e-12


@given(st.data())
def test_stft_inversion(data):
    g = make_group(data.draw(ORDERS))
    win = random_signal(g, data.draw(st.integers(0, 5)))
    s = random_signal(g, data.draw(st.integers(6, 11)))
    back = stft_invert(win, stft(win, s))
    assert np.max(np.abs(back.values - s.values)) < 1e-10


def test_stft_inversion_on_basis():
    g = make_group((8,))
    win = gauss(g, 1.0)
    for k in range(8):
        e = dirac(g, (k,))
        back = stft_invert(win, stft(win, e))
        assert np.max(np.abs(back.values - e.values)) < 1e-12


def test_energy_identity():
    """sum of |stft|^2 with the phase weight = ||f||^2 ||g||^2."""
    g = make_group((2, 3))
    win = random_signal(g, 1)
    s = random_signal(g, 2)
    table = stft(win, s)
    total = float(np.sum(np.abs(table.values) ** 2) * table.phase_weight)
    assert total == pytest.approx((l2_norm(s) * l2_norm(win)) ** 2, rel=1e-12)


def test_mod_norm_exponent_validation():
    g = make_group((4,))
    with pytest.raises(ValueError):
        mod_norm(dirac(g), gauss(g, 1.0), 0.5)


def test_mod_norms_from_table():
    g = make_group((6,))
    win = gauss(g, 1.0)
    s = random_signal(g, 5)
    mags = np.abs(naive_pairing(win, s))
    wp = float(g.weight * g.dual_weight)
    for p in (1, 2, 4):
        want = (np.sum(mags**p) * wp) ** (1.0 / p)
        assert mod_norm(s, win, p) == pytest.approx(want, rel=1e-12)
    assert mod_norm(s, win, math.inf) == pytest.approx(mags.max(), rel=1e-12)


def test_m2_equals_energy():
    g = make_group((8,))
    win = random_signal(g, 1)
    s = random_signal(g, 2)
    assert mod_norm(s, win, 2) == pytest.approx(l2_norm(s) * l2_norm(win), rel=1e-12)


def test_frozen_values():
    # hand-checkable: impulse window and impulse signal on Z/2
    g2 = make_group((2,))
    assert m1_norm(dirac(g2), dirac(g2)) == pytest.approx(1.0, abs=1e-15)
    # frozen against a direct triple-sum oracle run
    g8 = make_group((8,))
    win = gauss(g8, 1.0)
    s = random_signal(g8, 1)
    assert m1_norm(s, win) == pytest.approx(6.331315826314121, rel=1e-12)
    assert mod_norm(s, win, math.inf) == pytest.approx(1.474290355708497, rel=1e-12)


def test_conv_route_equals_reflected_window_route():
    """The convolution form of the time-frequency l1 size equals the m1
    norm against the reflected window, exactly."""
    for orders in [(6,), (2, 3), (8,)]:
        g = make_group(orders)
        win = random_signal(g, 7)
        s = random_signal(g, 8)
        lhs = mod_norm_conv(s, win)
        rhs = m1_norm(s, involute(win))
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_conv_route_is_equivalent_for_symmetric_windows():
    # gauss is symmetric, so the two routes agree on the nose
    g = make_group((8,))
    win = gauss(g, 1.0)
    s = random_signal(g, 9)
    assert mod_norm_conv(s, win) == pytest.approx(m1_norm(s, win), rel=1e-12)


def test_window_equivalence_ratio():
    g = make_group((8,))
    g1 = gauss(g, 1.0)
    g2 = gauss(g, 0.5)
    probes = [random_signal(g, k) for k in range(6)] + [dirac(g), constant(g)]
    lo, hi = window_equivalence_ratio(g1, g2, probes)
    assert 0 < lo <= hi
    # swapping windows inverts the bracket
    lo2, hi2 = window_equivalence_ratio(g2, g1, probes)
    assert lo2 == pytest.approx(1.0 / hi, rel=1e-10)
    assert hi2 == pytest.approx(1.0 / lo, rel=1e-10)


def test_window_equivalence_ratio_rejects_all_zero():
    g = make_group((4,))
    with pytest.warns(UserWarning), pytest.raises(ValueError):
        window_equivalence_ratio(gauss(g, 1.0), gauss(g, 0.5), [Signal(g, np.zeros(4))])


def test_window_equivalence_ratio_skips_zero_probes():
    g = make_group((4,))
    probes = [Signal(g, np.zeros(4)), random_signal(g, 1)]
    with pytest.warns(UserWarning):
        lo, hi = window_equivalence_ratio(gauss(g, 1.0), gauss(g, 0.5), probes)
    assert 0 < lo <= hi
