import random
from fractions import Fraction

import pytest

from cantorspectra.cantor import k_alpha_cantor, middle_third_cantor
from cantorspectra.dimension import dimension_bounds
from cantorspectra.errors import InputError
from cantorspectra.horseshoe import (
    AffinePlaneMap,
    ConjugacyObservable,
    ProductHorseshoe,
    QuadraticCapMap,
    affine_product_base,
    affine_sft_dimension_bracket,
    check_H_phi,
    conjugacy_point,
    demo_main,
    demo_refusal,
    main_theorem_demo,
    model_step,
)
from cantorspectra.spectra import lagrange_value, markov_value
from cantorspectra.symbolic import SymbolicSequence, TransitionMatrix

F = Fraction
H3 = ProductHorseshoe(middle_third_cantor())


def _random_sequences(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(SymbolicSequence(
            tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
            tuple(rng.randrange(2) for _ in range(rng.randint(0, 4))),
            tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
            rng.randint(-3, 3),
        ))
    return out


# -- conjugacy ----------------------------------------------------------------


def test_fixed_point_corner():
    pt = conjugacy_point(H3, SymbolicSequence.periodic((0,)), 5)
    assert pt.exact_stable.as_fraction() == 0
    assert pt.exact_unstable.as_fraction() == 0
    pt1 = conjugacy_point(H3, SymbolicSequence.periodic((1,)), 5)
    # the letter-1 fixed point of the reversing branch x -> 1 - x/3
    assert pt1.exact_unstable.as_fraction() == F(3, 4)


def test_enclosure_diameter_decay():
    x = SymbolicSequence((0,), (1, 0, 1), (1,), 0)
    diams = [conjugacy_point(H3, x, d).diameter for d in range(1, 9)]
    for a, b in zip(diams, diams[1:]):
        assert b <= a / 3 + F(1, 10**9)  # contraction ratio 1/3


def test_conjugacy_equivariance_on_random_points():
    for x in _random_sequences(8, 100):
        p0 = conjugacy_point(H3, x, 9)
        p1 = conjugacy_point(H3, x.shift(1), 9)
        stepped = model_step(H3, p0, x.symbol_at(0), x.symbol_at(1))
        assert stepped.unstable[0] <= p1.exact_unstable.enclosure(64)[1]
        assert p1.exact_unstable.enclosure(64)[0] <= stepped.unstable[1]
        assert stepped.stable[0] <= p1.exact_stable.enclosure(64)[1]
        assert p1.exact_stable.enclosure(64)[0] <= stepped.stable[1]


def test_dimension_additivity():
    bu = dimension_bounds(H3.unstable, 5)
    bs = dimension_bounds(H3.stable, 5)
    import math

    assert abs(bu.alpha_n + bs.alpha_n - 2 * math.log(2) / math.log(3)) < 1e-9


def test_asymmetric_matrix_needs_explicit_stable():
    M = TransitionMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    from cantorspectra.cantor import Branch, CantorPresentation, MoebiusMap

    base = [(F(0), F(1, 5)), (F(2, 5), F(3, 5)), (F(4, 5), F(1))]
    branches = [
        Branch(a, b, MoebiusMap.affine(F(1, 5), base[a][0]))
        for a in range(3)
        for b in M.successors[a]
    ]
    K = CantorPresentation(M, base, branches, require_mixing=False)
    with pytest.raises(InputError):
        ProductHorseshoe(K)


# -- H_phi ---------------------------------------------------------------------


def test_h_phi_pass_fail_unknown():
    assert check_H_phi(AffinePlaneMap(1, 1), H3, 5).passed
    rep = check_H_phi(AffinePlaneMap(0, 1), H3, 4)
    assert rep.status == "fail"
    rep2 = check_H_phi(QuadraticCapMap(F(1), F(1)), H3, 5)
    assert rep2.status == "fail"


def test_h_phi_monotone_certification():
    # pass at depth d implies pass at every finer depth
    for d in (3, 4, 5, 6):
        assert check_H_phi(AffinePlaneMap(1, 1), H3, d).passed
        assert check_H_phi(AffinePlaneMap(-2, 1), H3, d).passed


def test_h_phi_locates_the_right_corner():
    rep = check_H_phi(AffinePlaneMap(-1, 2), H3, 4)
    assert rep.passed
    ws, wu = rep.boxes[0]
    assert ws[0] == wu[0]  # the factors share the letter at position 0
    # maximizer: u maximal at 1 (letter 1 then 0bar via the reversing
    # branch); s minimal inside I_s(1), which is 2/3 = h(1,1,0bar)
    s_iv = H3.stable.word_interval(ws)
    u_iv = H3.unstable.word_interval(wu)
    assert s_iv[0] <= F(2, 3) <= s_iv[1]
    assert u_iv[0] <= F(1) <= u_iv[1]


def test_perron_bracket_matches_closed_form():
    import math

    K = affine_product_base(3, F(3, 10), [F(0), F(7, 20), F(7, 10)])
    lo, hi = affine_sft_dimension_bracket(K)
    want = math.log(3) / math.log(F(10, 3))
    assert lo <= want <= hi and hi - lo < 1e-9


# -- conjugacy observable ---------------------------------------------------------


def test_conjugacy_observable_values():
    obs = ConjugacyObservable(H3, AffinePlaneMap(1, 1))
    one = SymbolicSequence.periodic((1,))
    v = obs.exact_value(one)
    assert v.as_fraction() == F(3, 2)  # the (3/4, 3/4) fixed point
    mv = markov_value(obs, SymbolicSequence((0,), (1,), (0,), 0))
    assert mv.exact


def test_conjugacy_observable_tail_bound_decays():
    obs = ConjugacyObservable(H3, AffinePlaneMap(1, 1))
    bounds = [obs.tail_bound(n) for n in range(0, 8)]
    assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))


# -- the pipeline -------------------------------------------------------------------


def test_main_theorem_demo_succeeds():
    H, fmap, config = demo_main()
    rep = main_theorem_demo(H, fmap, config)
    assert rep.succeeded
    assert rep.certified_length > 0
    names = [s.name for s in rep.stages]
    assert names == [
        "H_phi", "remove_cylinder", "surgery_context", "image_cover",
        "certify_interval", "verify_membership",
    ]
    assert all(s.ok for s in rep.stages)
    doc = rep.to_json()
    assert doc["succeeded"] and doc["certified_interval"] is not None


def test_refusal_demo_stops_at_thickness():
    H, fmap, config = demo_refusal()
    rep = main_theorem_demo(H, fmap, config)
    assert not rep.succeeded
    assert "thickness" in rep.refusal
    # dimension stage passed before the refusal
    stage_by_name = {s.name: s for s in rep.stages}
    assert stage_by_name["remove_cylinder"].ok
    assert not stage_by_name["certify_interval"].ok


def test_demo_fails_on_degenerate_observable():
    H, _, config = demo_main()
    rep = main_theorem_demo(H, AffinePlaneMap(0, 1), config)
    assert not rep.succeeded
    assert rep.stages[0].name == "H_phi" and not rep.stages[0].ok
