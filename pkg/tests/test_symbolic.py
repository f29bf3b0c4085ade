import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cantorspectra.errors import BracketUndefinedError, InputError, NoPathError
from cantorspectra.symbolic import (
    Cylinder,
    FiniteWord,
    SymbolicSequence,
    TransitionMatrix,
    admissible_words,
    bracket,
    connecting_word,
    count_paths,
    enumerate_periodic,
    forbid_word,
    is_admissible,
    max_connection_length,
    metric_distance,
    remove_cylinder,
)

B2 = TransitionMatrix.full_shift(2)
GM = TransitionMatrix.golden_mean()
CYC3 = TransitionMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


# -- matrices ---------------------------------------------------------------


def test_matrix_validation():
    with pytest.raises(InputError):
        TransitionMatrix([[1, 0], [1, 0]])  # letter 1 has empty column
    with pytest.raises(InputError):
        TransitionMatrix([[0, 0], [1, 1]])  # empty row
    with pytest.raises(InputError):
        TransitionMatrix([[2]])


def test_structure_flags():
    assert B2.is_irreducible and B2.is_primitive
    assert GM.is_irreducible and GM.is_primitive
    assert CYC3.is_irreducible and not CYC3.is_primitive and CYC3.period == 3
    red = TransitionMatrix([[1, 1], [0, 1]])
    assert not red.is_irreducible


def test_json_roundtrip():
    doc = GM.to_json(labels=["a", "b"])
    assert TransitionMatrix.from_json(doc) == GM


# -- admissibility and path counting ----------------------------------------


def test_is_admissible_examples():
    assert is_admissible((0, 1, 0, 1), B2)
    assert not is_admissible((1, 1), GM)
    assert is_admissible((0,), B2)
    with pytest.raises(InputError):
        is_admissible((0, 5), B2)
    with pytest.raises(InputError):
        is_admissible((), B2)


def test_count_paths_examples():
    assert count_paths(B2, 0, 1, 2) == 2
    assert [count_paths(GM, 0, 0, n) for n in range(1, 7)] == [1, 2, 3, 5, 8, 13]
    for M in (B2, GM, CYC3):
        for x in range(M.n):
            for y in range(M.n):
                assert count_paths(M, x, y, 0) == (1 if x == y else 0)


def _brute_paths(M, x, y, n):
    if n == 0:
        return 1 if x == y else 0
    total = 0
    stack = [(x, 0)]
    while stack:
        u, k = stack.pop()
        if k == n:
            total += u == y
            continue
        for v in M.successors[u]:
            stack.append((v, k + 1))
    return total


def test_count_paths_vs_bruteforce_random_matrices():
    rng = random.Random(12)
    for _ in range(5):
        n = rng.randint(2, 3)
        while True:
            rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
            try:
                M = TransitionMatrix(rows)
                break
            except InputError:
                continue
        for trial in range(6):
            x, y = rng.randrange(n), rng.randrange(n)
            k = rng.randint(1, 8)
            assert count_paths(M, x, y, k) == _brute_paths(M, x, y, k)


def test_chapman_kolmogorov():
    rng = random.Random(5)
    for M in (B2, GM, CYC3):
        for _ in range(10):
            x, y = rng.randrange(M.n), rng.randrange(M.n)
            n, m = rng.randint(0, 6), rng.randint(0, 6)
            assert count_paths(M, x, y, n + m) == sum(
                count_paths(M, x, z, n) * count_paths(M, z, y, m)
                for z in range(M.n)
            )


def test_connecting_word():
    assert connecting_word(B2, 0, 1).symbols == ()
    assert connecting_word(GM, 1, 1).symbols == (0,)
    assert connecting_word(CYC3, 0, 0).symbols == (1, 2)
    red = TransitionMatrix([[1, 1], [0, 1]])
    with pytest.raises(NoPathError):
        connecting_word(red, 1, 0)
    assert max_connection_length(GM) == 2


# -- sequences ---------------------------------------------------------------


def test_canonicalization_collapses_equivalent_representations():
    x1 = SymbolicSequence((0, 1), (0, 1, 0, 1, 1), (1,), 0)
    x2 = SymbolicSequence((1, 0), (1, 1), (1,), 3)
    for p in range(-10, 11):
        assert x1.symbol_at(p) == x2.symbol_at(p)
    assert x1 == x2 and hash(x1) == hash(x2)


def test_fully_periodic_normal_form():
    y1 = SymbolicSequence((0, 1), (), (0, 1), 4)
    y2 = SymbolicSequence((0, 1, 0, 1), (0,), (1, 0), 0)
    assert y1 == y2 and y1.is_periodic and y1.least_period == 2


def test_shift_and_tails():
    x = SymbolicSequence((0,), (1, 1, 0), (2,), -1)
    assert x.shift(2).symbol_at(-3) == x.symbol_at(-1)
    t = x.right_tail_sequence()
    assert t.is_periodic
    for p in range(x.core_span[1], x.core_span[1] + 6):
        assert t.symbol_at(p) == x.symbol_at(p)


def test_admissibility_of_sequences():
    x = SymbolicSequence((0,), (1,), (0,), 0)
    assert x.is_admissible(B2)
    assert x.is_admissible(GM)
    bad = SymbolicSequence((1, 0), (1, 1), (0, 1), 0)
    assert not bad.is_admissible(GM)


def test_sequence_json_roundtrip():
    x = SymbolicSequence((0, 1), (1, 1, 0), (1,), -2)
    assert SymbolicSequence.from_json(x.to_json()) == x


@st.composite
def sequences(draw):
    alphabet = 2
    left = tuple(draw(st.integers(0, alphabet - 1))
                 for _ in range(draw(st.integers(1, 3))))
    right = tuple(draw(st.integers(0, alphabet - 1))
                  for _ in range(draw(st.integers(1, 3))))
    core = tuple(draw(st.integers(0, alphabet - 1))
                 for _ in range(draw(st.integers(0, 4))))
    start = draw(st.integers(-4, 4))
    return SymbolicSequence(left, core, right, start)


@given(sequences(), st.integers(-6, 6))
@settings(max_examples=80)
def test_canonical_equality_is_pointwise(x, pad):
    # re-encode x with redundant period copies and a padded core, keeping
    # the period phases aligned to the new core boundaries
    lo = x.core_start - abs(pad) - 1
    hi = x.core_span[1] + abs(pad)
    core = x.window(lo, hi - 1)
    q, p = len(x.left), len(x.right)
    left = tuple(x.symbol_at(lo - q + i) for i in range(q)) * 2
    right = tuple(x.symbol_at(hi + i) for i in range(p)) * 3
    y = SymbolicSequence(left, core, right, lo)
    for t in range(-12, 13):
        assert y.symbol_at(t) == x.symbol_at(t)
    assert y == x


# -- metric -------------------------------------------------------------------


def test_metric_examples():
    zero = SymbolicSequence.periodic((0,))
    x = SymbolicSequence((0,), (1,), (0,), 0)
    assert metric_distance(zero, zero) == 0
    assert metric_distance(zero, x) == Fraction(1, 2)
    b = SymbolicSequence((0,), (), (1,), 1)
    assert metric_distance(zero, b) == Fraction(1, 6)


def test_metric_vs_truncated_series():
    rng = random.Random(9)
    for _ in range(25):
        a = SymbolicSequence(
            tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
            tuple(rng.randrange(2) for _ in range(rng.randint(0, 4))),
            tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
            rng.randint(-3, 3),
        )
        b = SymbolicSequence(
            tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
            tuple(rng.randrange(2) for _ in range(rng.randint(0, 4))),
            tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
            rng.randint(-3, 3),
        )
        exact = metric_distance(a, b)
        trunc = sum(
            Fraction(1, 2 ** (2 * abs(n) + 1))
            for n in range(-60, 61)
            if a.symbol_at(n) != b.symbol_at(n)
        )
        assert abs(exact - trunc) <= Fraction(1, 2**50)


@given(sequences(), sequences())
@settings(max_examples=60)
def test_metric_laws(a, b):
    d = metric_distance(a, b)
    assert 0 <= d <= 1
    assert metric_distance(b, a) == d
    if d < Fraction(1, 2):
        assert a.symbol_at(0) == b.symbol_at(0)
    if a.symbol_at(0) == b.symbol_at(0):
        assert d < Fraction(1, 2)
    assert (d == 0) == (a == b)


# -- bracket -----------------------------------------------------------------


def test_bracket_examples():
    a = SymbolicSequence((0,), (), (1,), 1)   # ...0 0.0 1 1...
    b = SymbolicSequence((1,), (0,), (0,), 0)  # ...1 1.0 0 0...
    br = bracket(a, b)
    assert br == SymbolicSequence((1,), (0,), (1,), 0)
    assert bracket(a, a) == a
    assert bracket(bracket(a, b), b) == bracket(a, b)
    with pytest.raises(BracketUndefinedError):
        bracket(SymbolicSequence.periodic((0,)), SymbolicSequence.periodic((1,)))


@given(sequences(), sequences())
@settings(max_examples=60)
def test_bracket_splices_coordinates(a, b):
    if a.symbol_at(0) != b.symbol_at(0):
        return
    br = bracket(a, b)
    for p in range(1, 9):
        assert br.symbol_at(p) == a.symbol_at(p)
    for p in range(-8, 1):
        assert br.symbol_at(p) == b.symbol_at(p)


# -- periodic enumeration ------------------------------------------------------


def test_enumerate_periodic_counts():
    assert len(enumerate_periodic(B2, 1)) == 2
    assert len(enumerate_periodic(B2, 2)) == 3
    for M in (B2, GM, CYC3):
        for p in range(1, 7):
            trace = sum(M.matrix_power(p)[i][i] for i in range(M.n))
            by_divisors = sum(
                d * sum(1 for o in enumerate_periodic(M, p) if o.least_period == d)
                for d in range(1, p + 1)
                if p % d == 0
            )
            assert trace == by_divisors


def test_enumerate_periodic_shift_closed():
    for orbit in enumerate_periodic(GM, 4):
        p = orbit.least_period
        shifted = {orbit.shift(n) for n in range(p)}
        assert orbit.shift(p) == orbit
        assert len(shifted) == p


# -- cylinders and removal ------------------------------------------------------


def test_cylinder_nonempty():
    c = Cylinder.centered((0, 1, 0))
    assert c.is_nonempty(GM)
    assert not Cylinder.centered((1, 1, 1)).is_nonempty(GM)
    red = TransitionMatrix([[1, 1], [0, 1]])
    assert Cylinder((0, 1), 0, 1).is_nonempty(red)


def test_remove_cylinder_examples():
    r = remove_cylinder(B2, Cylinder.centered((1,)))
    assert r.letters == ((0,),) and r.matrix.n == 1
    rg = forbid_word(GM, (1,))
    assert rg.letters == ((0,),)
    r3 = remove_cylinder(B2, Cylinder.centered((0, 0, 0)))
    assert len(r3.letters) == 7
    for orbit in enumerate_periodic(r3.matrix, 6):
        word = r3.decode_word(orbit.right * 3)
        assert "000" not in "".join(map(str, word))


def test_remove_can_empty():
    r = forbid_word(TransitionMatrix([[0, 1], [1, 0]]), (0, 1))
    assert r.is_empty


def test_encode_decode_roundtrip():
    r = forbid_word(B2, (0, 0, 0))
    w = (1, 0, 0, 1, 1, 0)
    assert r.decode_word(r.encode_word(w)) == w
    with pytest.raises(InputError):
        r.encode_word((0, 0, 0, 1))


def test_word_helpers():
    w = FiniteWord.checked((0, 1, 0), GM)
    assert len(w) == 3 and w.repeat(2).symbols == (0, 1, 0, 0, 1, 0)
    with pytest.raises(InputError):
        FiniteWord.checked((1, 1), GM)
    assert list(admissible_words(GM, 2)) == [(0, 0), (0, 1), (1, 0)]
