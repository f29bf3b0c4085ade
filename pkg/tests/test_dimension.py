import math
import random
from fractions import Fraction

import pytest

from cantorspectra.cantor import (
    Branch,
    CantorPresentation,
    MoebiusMap,
    PiecewiseAffineMap,
    continued_fraction_cantor,
    k_alpha_cantor,
    middle_third_cantor,
)
from cantorspectra.dimension import (
    bounds_from_stats,
    derivative_bounds,
    dimension_bounds,
    pressure_root,
    removed_cylinder_bounds,
    solve_pressure,
)
from cantorspectra.errors import InputError, OutOfRangeError
from cantorspectra.horseshoe import affine_sft_dimension_bracket
from cantorspectra.symbolic import TransitionMatrix

F = Fraction
K3 = middle_third_cantor()
C2 = continued_fraction_cantor(2)
LOG23 = math.log(2) / math.log(3)


# -- derivative bounds ------------------------------------------------------------


def test_affine_weights_exact():
    for n in (1, 3, 5):
        stats = derivative_bounds(K3, n)
        assert all(c.lam == c.Lam == 3**n for c in stats.cylinders)
        assert stats.distortion == 1
        assert len(stats.cylinders) == 2**n
    K45 = k_alpha_cantor(F(9, 20))
    stats = derivative_bounds(K45, 2)
    assert all(c.lam == c.Lam == (F(40, 11)) ** 2 for c in stats.cylinders)


def test_moebius_weights_certified_vs_sampling():
    stats = derivative_bounds(C2, 1)
    for cyl in stats.cylinders:
        (a,) = cyl.word
        # sample |(psi)'| = 1/|f'| over the cylinder through its extensions
        for b in C2.letters:
            m = C2.branch(a, b).inverse_map
            lo, hi = C2.base[b]
            for i in range(0, 33):
                t = lo + (hi - lo) * F(i, 32)
                val = 1 / abs(m.derivative(t))
                assert cyl.lam <= val <= cyl.Lam


def test_generic_chain_rule_path():
    # same set as middle-third but with one branch given as a table map:
    # certified bounds must still bracket the true 3^n
    M = TransitionMatrix.full_shift(2)
    table_map = PiecewiseAffineMap(
        ((F(0), F(0)), (F(1, 2), F(1, 6)), (F(1), F(1, 3)))
    )
    K = CantorPresentation(
        M,
        [(F(0), F(1, 3)), (F(2, 3), F(1))],
        [Branch(0, 0, table_map), Branch(0, 1, table_map)]
        + [Branch(1, b, MoebiusMap.affine(F(-1, 3), 1)) for b in range(2)],
    )
    stats = derivative_bounds(K, 3)
    for c in stats.cylinders:
        assert c.lam <= 27 <= c.Lam


# -- pressure roots ----------------------------------------------------------------


def test_pressure_closed_forms():
    assert abs(pressure_root([F(3), F(3)], 1) - LOG23) < 1e-9
    phi = (1 + math.sqrt(5)) / 2
    assert abs(pressure_root([F(2), F(4)], 1) - math.log(phi) / math.log(2)) < 1e-9
    assert pressure_root([F(3), F(3)], 2) == 0.0


def test_pressure_errors():
    with pytest.raises(OutOfRangeError):
        pressure_root([F(3)], 2)
    with pytest.raises(InputError):
        pressure_root([], 1)
    with pytest.raises(InputError):
        pressure_root([F(1, 2), F(3)], 1)


def test_solve_pressure_on_stats():
    stats = derivative_bounds(K3, 4)
    assert abs(solve_pressure(stats, "lower", 1) - LOG23) < 1e-9
    assert abs(solve_pressure(stats, "upper", 1) - LOG23) < 1e-9


# -- dimension bounds ---------------------------------------------------------------


def test_closed_form_family():
    for alpha in (F(1, 3), F(1, 5), F(9, 20)):
        lam = (1 - alpha) / 2
        want = -math.log(2) / (math.log(lam.numerator) - math.log(lam.denominator))
        for n in (1, 4):
            b = dimension_bounds(k_alpha_cantor(alpha), n)
            assert abs(b.alpha_n - want) < 1e-9
            assert abs(b.beta_n - want) < 1e-9


def test_c2_bracketing_and_gap_bound():
    prev = None
    for n in (2, 4, 6, 8):
        b = dimension_bounds(C2, n)
        assert b.alpha_n <= b.beta_n
        if b.gap_bound is not None:
            assert b.width <= b.gap_bound + 1e-12
        if prev is not None:
            assert b.alpha_n >= prev.alpha_n - 1e-12
            assert b.beta_n <= prev.beta_n + 1e-12
        prev = b
    assert 0.51 < prev.alpha_n < prev.beta_n < 0.55  # around HD(C(2)) ~ 0.531


def test_c2_vs_box_counting_oracle():
    # independent oracle: box-counting estimate from the depth-10 cover
    cover = C2.cover(10)
    lengths = [float(hi - lo) for lo, hi in (it.interval for it in cover.items)]
    est = math.log(len(lengths)) / -math.log(
        math.exp(sum(map(math.log, lengths)) / len(lengths))
    )
    b = dimension_bounds(C2, 8)
    assert b.alpha_n - 0.05 <= est <= b.beta_n + 0.05


def test_gap_bound_property_suite():
    for K in (C2, continued_fraction_cantor(3), continued_fraction_cantor(4),
              k_alpha_cantor(F(2, 5))):
        for n in (2, 3, 4, 5):
            b = dimension_bounds(K, n)
            if b.gap_bound is not None:
                assert b.beta_n - b.alpha_n <= b.gap_bound + 1e-12


def test_constant_c_configurable():
    b2 = dimension_bounds(K3, 3, C=F(2))
    assert b2.alpha_n < LOG23 < b2.beta_n + 1e-12
    assert b2.constant_c == 2


# -- removed cylinders ---------------------------------------------------------------


def test_removed_cylinder_examples():
    r = removed_cylinder_bounds(K3, (0, 0, 0), 8)
    assert abs(r.eps_pred - math.log(8 / 7) / (3 * math.log(3))) < 1e-12
    assert not r.empty and not r.degenerate
    assert LOG23 - r.bounds.alpha_n <= r.eps_pred + 1e-6
    # beta-bound comparison via the certified Perron bracket: the removed
    # set's dimension is at most the original's
    _, hi = affine_sft_dimension_bracket(r.presentation)
    assert hi <= LOG23 + 1e-9


def test_removed_single_letter_degenerates():
    r = removed_cylinder_bounds(K3, (0,), 4)
    assert r.degenerate
    assert r.bounds.alpha_n == 0.0 and r.bounds.beta_n == 0.0


def test_removed_drop_decreasing_in_word_length():
    drops = []
    for m in range(1, 6):
        r = removed_cylinder_bounds(K3, (0,) * m, 5)
        drops.append(LOG23 - r.bounds.alpha_n)
    assert all(b < a for a, b in zip(drops, drops[1:]))


def test_removed_vs_perron_oracle():
    # the certified Perron bracket gives the true limit dimension of the
    # block system; pressure bounds converge to it from above as depth grows
    r8 = removed_cylinder_bounds(K3, (0, 0, 0), 8)
    lo, hi = affine_sft_dimension_bracket(r8.presentation)
    assert abs(lo - math.log(1.8392867552141612) / math.log(3)) < 1e-6
    assert hi - lo < 1e-6
    b12 = dimension_bounds(r8.presentation, 12)
    assert b12.alpha_n >= lo - 1e-9  # finite-depth block bounds overshoot
    assert b12.alpha_n - lo < r8.bounds.alpha_n - lo  # and shrink toward it
