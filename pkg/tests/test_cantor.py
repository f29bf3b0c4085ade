import json
import math
import random
from fractions import Fraction

import pytest

from cantorspectra.cantor import (
    AffineImageSet,
    Branch,
    CantorPresentation,
    MoebiusMap,
    PiecewiseAffineMap,
    RestrictedSet,
    _alternating_fixed_points,
    cf_value,
    cf_value_digits,
    continued_fraction_cantor,
    extreme_sequence,
    k_alpha_cantor,
    limit_geometry,
    middle_third_cantor,
    preset,
    remove_word,
    thickness,
)
from cantorspectra.errors import (
    EmptySubshiftError,
    ExactArithmeticError,
    InputError,
    PresentationError,
)
from cantorspectra.surd import SurdSum
from cantorspectra.symbolic import SymbolicSequence, TransitionMatrix

F = Fraction
K3 = middle_third_cantor()
C2 = continued_fraction_cantor(2)
C3 = continued_fraction_cantor(3)
C4 = continued_fraction_cantor(4)


# -- branch maps ---------------------------------------------------------------


def test_moebius_algebra():
    m = MoebiusMap.cf_digit(2)
    assert m(F(0)) == F(1, 2)
    assert m.inverse()(m(F(1, 3))) == F(1, 3)
    comp = m.compose(MoebiusMap.cf_digit(1))
    assert comp(F(1, 2)) == m(MoebiusMap.cf_digit(1)(F(1, 2)))
    lo, hi = m.derivative_range(F(1, 4), F(1, 2))
    assert lo == F(1, (2 + F(1, 2)) ** 2 / 1) or lo == 1 / (2 + F(1, 2)) ** 2
    assert hi == 1 / (2 + F(1, 4)) ** 2


def test_moebius_derivative_enclosure_vs_sampling():
    # certified enclosure strictly contains densely sampled values
    m = MoebiusMap.cf_digit(2)
    lo, hi = F(37, 100), F(41, 100)
    dmin, dmax = m.derivative_range(lo, hi)
    for i in range(101):
        x = lo + (hi - lo) * F(i, 100)
        v = abs(m.derivative(x))
        assert dmin <= v <= dmax


def test_pole_rejected():
    m = MoebiusMap(F(1), F(0), F(1), F(-1))  # pole at 1
    with pytest.raises(ExactArithmeticError):
        m.map_interval(F(0), F(2))


def test_table_branch():
    t = PiecewiseAffineMap(((F(0), F(0)), (F(1, 2), F(1, 8)), (F(1), F(1, 4))))
    assert t(F(1, 4)) == F(1, 16)
    assert t.map_interval(F(0), F(1)) == (F(0), F(1, 4))
    assert t.derivative_range(F(0), F(1)) == (F(1, 4), F(1, 4))
    with pytest.raises(InputError):
        PiecewiseAffineMap(((F(0), F(0)), (F(1), F(0))))


# -- presentations and covers ----------------------------------------------------


def test_middle_third_cover_examples():
    c1 = K3.cover(1)
    assert [it.interval for it in c1.items] == [(F(0), F(1, 3)), (F(2, 3), F(1))]
    c2 = K3.cover(2)
    assert len(c2.items) == 4
    assert all(hi - lo == F(1, 9) for lo, hi in (it.interval for it in c2.items))


def test_cover_nesting_and_exact_length():
    for K, depths in ((K3, range(1, 8)), (C2, range(1, 6)), (C4, range(1, 5))):
        for d in depths:
            assert K.cover_union(d).contains_union(K.cover_union(d + 1))
    K = k_alpha_cantor(F(2, 5))
    for d in (1, 3, 6):
        assert K.cover_union(d).total_length == 2**d * F(3, 10) ** d


def test_markov_property_on_labels():
    # applying the expanding map to a depth-(n+1) cylinder gives the depth-n
    # cylinder of the shifted word: g(I(a0 a1 ... an)) == I(a1 ... an)
    for K in (K3, C2):
        for item in K.cover(3).items:
            w = item.word
            g = K.branch(w[0], w[1]).inverse_map.inverse()
            assert g.map_interval(*item.interval) == K.word_interval(w[1:])


def test_presentation_validation():
    M = TransitionMatrix.full_shift(2)
    with pytest.raises(PresentationError):
        # expanding certificate fails: slope 1 branch
        CantorPresentation(
            M,
            [(F(0), F(1, 2)), (F(1, 2), F(1))],
            [Branch(a, b, MoebiusMap.affine(F(1, 2) if a else F(1), 0))
             for a in range(2) for b in range(2)],
        )
    with pytest.raises(PresentationError):
        # overlapping branch domains inside I(0)
        CantorPresentation(
            M,
            [(F(0), F(2, 3)), (F(2, 3), F(1))],
            [Branch(0, 0, MoebiusMap.affine(F(1, 2), 0)),
             Branch(0, 1, MoebiusMap.affine(F(1, 2), F(-1, 12))),
             Branch(1, 0, MoebiusMap.affine(F(1, 4), F(2, 3))),
             Branch(1, 1, MoebiusMap.affine(F(1, 4), F(17, 24)))],
        )


def test_cn_requires_two_digits():
    with pytest.raises(InputError):
        continued_fraction_cantor(1)


def test_cn_nesting_by_digit_sets():
    # C(2) subset C(3) subset C(4) at depth 5 as point sets
    u2 = C2.cover_union(5)
    u3 = C3.cover_union(5)
    u4 = C4.cover_union(5)
    assert u3.contains_union(u2)
    assert u4.contains_union(u3)


def test_c4_extreme_points():
    mn, mx = _alternating_fixed_points(4)
    half_sqrt2m1 = (SurdSum.sqrt(2) - 1) / 2
    assert mn == half_sqrt2m1
    assert mx == (SurdSum.sqrt(2) - 1) * 2
    pre, per, val = extreme_sequence(C4, "inf")
    assert val == mn
    pre, per, val = extreme_sequence(C4, "sup")
    assert val == mx
    lo, hi = C4.hull
    assert SurdSum.rational(lo) < mn and mx < SurdSum.rational(hi)
    # the rational carrier padding is tiny
    assert (mn - lo).enclosure(140)[1] < F(1, 2**90)


def test_k_alpha_family():
    K = k_alpha_cantor(F(1, 3))
    assert K.cover_union(1) == K3.cover_union(1)
    K45 = k_alpha_cantor(F(9, 20))
    lam = F(11, 40)
    for (a, b), br in K45.branches.items():
        m = br.inverse_map
        slope = m.a / m.d
        assert abs(slope) == lam  # branch slopes +-(1-alpha)/2
    with pytest.raises(InputError):
        k_alpha_cantor(F(3, 2))


def test_json_roundtrip_and_presets():
    for K in (K3, C4, k_alpha_cantor(F(2, 5))):
        doc = json.loads(json.dumps(K.to_json()))
        K2 = CantorPresentation.from_json(doc)
        assert K2.cover_union(3) == K.cover_union(3)
    assert preset("c2").matrix.n == 2
    assert preset("middle-third").cover_union(1) == K3.cover_union(1)
    assert preset("kalpha:2/5").name == "kalpha:2/5"
    with pytest.raises(InputError):
        preset("nope")


# -- thickness -------------------------------------------------------------------


def test_thickness_examples():
    for d in range(1, 6):
        assert thickness(K3, d).value == 1
    assert thickness(k_alpha_cantor(F(3, 5)), 1).value == F(1, 3)
    assert thickness(k_alpha_cantor(F(2, 5)), 4).value == F(3, 4)
    t3 = thickness(C4, 3)
    assert t3.value > 1
    t5 = thickness(C4, 5)
    assert t5.value > 1


def test_thickness_monotone_in_depth():
    for K in (C2, C3):
        vals = [thickness(K, d).value for d in range(1, 6)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))


# -- continued fraction values -----------------------------------------------------


def test_cf_value_examples():
    assert cf_value_digits((), (1,)) == (SurdSum.rational(1) + SurdSum.sqrt(5)) / 2
    assert cf_value_digits((0,), (2,)) == SurdSum.sqrt(2) - 1
    assert cf_value_digits((0, 7), ()) == SurdSum.rational(F(1, 7))


def test_cf_value_recursion_consistency():
    rng = random.Random(4)
    for _ in range(30):
        pre = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        per = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        x = cf_value_digits(pre, per)
        y = cf_value_digits(pre[1:], per) if len(pre) > 1 else cf_value_digits(per, per)
        # [a0; a1, ...] = a0 + 1/[a1; ...]
        assert x == SurdSum.rational(pre[0]) + SurdSum.rational(1) / y


def test_cf_value_on_sequences():
    x = SymbolicSequence((1,), (0,), (1,), 0)  # digits: ...22 1 22... with offset 1
    fwd = cf_value(x, "positive", digit_offset=1)
    assert fwd == cf_value_digits((1,), (2,))
    bwd = cf_value(x, "negative", digit_offset=1)
    assert bwd == cf_value_digits((0,), (2,))
    with pytest.raises(InputError):
        cf_value(x, "sideways")


def test_cf_value_matches_float_oracle():
    rng = random.Random(11)
    for _ in range(20):
        pre = tuple(rng.randint(1, 4) for _ in range(rng.randint(0, 3)))
        per = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        exact = float(cf_value_digits(pre, per))
        digits = list(pre) + list(per) * 40
        approx = float(digits[-1])
        for d in reversed(digits[:-1]):
            approx = d + 1 / approx
        assert abs(exact - approx) < 1e-10


# -- limit geometries -----------------------------------------------------------


def test_limit_geometry_affine_is_identity():
    for word in ((0, 1, 0), (1, 1, 0, 1)):
        lg = limit_geometry(K3, word, len(word) - 1)
        assert lg.map.is_affine
        assert lg.map.a / lg.map.d == 1 and lg.map.b / lg.map.d == 0


def test_limit_geometry_cauchy_decay():
    # growing the past at fixed theta_0: stage differences decay with
    # |I(theta^n)|, with a bounded ratio across consecutive stages
    word = (0, 1) * 6
    diffs, scales = [], []
    for n in range(4, 9):
        a = limit_geometry(C2, word, n)
        b = limit_geometry(C2, word, n + 1)
        diffs.append(a.sample_sup_distance(b))
        scales.append(a.scale)
    for d, s in zip(diffs, scales):
        assert d <= 4 * s
    ratios = [float(d2 / d1) for d1, d2 in zip(diffs, diffs[1:])]
    assert all(r < 1 for r in ratios)


def test_limit_geometry_tail_dependence():
    # distinct pasts with the same last letter: normalized maps stay within
    # a constant of the ultrametric distance scale
    theta1 = (0, 0, 0, 0, 1)
    theta2 = (1, 0, 0, 0, 1)
    a = limit_geometry(C2, theta1, 4)
    b = limit_geometry(C2, theta2, 4)
    d = a.sample_sup_distance(b)
    assert d > 0
    assert d <= 1  # bounded by a modest constant on the unit-size domain


def test_limit_geometry_orientation_and_fixing():
    lg = limit_geometry(C2, (0, 1, 0, 1, 1), 4)
    lo, hi = lg.domain
    assert lg.eval(lo) == lo and lg.eval(hi) == hi
    dmin, _ = lg.map.derivative_range(lo, hi)
    assert dmin > 0  # orientation preserving


# -- removal and restriction -------------------------------------------------------


def test_remove_word_block_presentation():
    Kb = remove_word(K3, (0, 0, 0))
    assert Kb.matrix.n == 7
    assert Kb.block_letters is not None
    # block cover at depth 1 = original depth-3 cylinders except I(000)
    u = Kb.cover_union(1)
    full = K3.cover_union(3)
    assert full.contains_union(u)
    assert not u.contains_point(F(1, 54))  # inside I(000)
    # forbidding the only remaining letter empties the subshift
    single = remove_word(K3, (0,))
    with pytest.raises(EmptySubshiftError):
        remove_word(single, (0,))


def test_restricted_and_affine_sources():
    r = RestrictedSet(K3, (0,))
    u = r.cover_union(2)
    assert u.hull[1] <= F(1, 3)
    a = AffineImageSet(r, -2, 1)
    ua = a.cover_union(2)
    assert ua == u.affine_image(-2, 1)
