"""Affine product horseshoes: conjugacy, maximizer certification, and the
desk-scale interior-interval pipeline.

The model is K^s x K^u with the two-sided shift acting through the
conjugacy Pi(theta) = (h^s(... theta_-1 theta_0), h^u(theta_0 theta_1 ...)).
Everything is exact for affine factor presentations: conjugacy points of
eventually periodic sequences are rationals, observables evaluate exactly,
and the pipeline's interval claim is certified through the thickness-based
gap lemma on the removed-and-restricted factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .cantor import (
    Branch,
    CantorPresentation,
    MoebiusMap,
    extreme_sequence,
    remove_word,
)
from .errors import EmptySubshiftError, InputError, PresentationError
from .intervals import IntervalUnion, thickness_of_union
from .surd import SurdSum
from .symbolic import SymbolicSequence, TransitionMatrix, Word, WordLike, _word
from .spectra import (
    SurgeryContext,
    build_periodic_surgery_context,
    build_surgery_context,
    markov_value,
    surgery_A,
    verify_limsup_identity,
    verify_sup_identity,
)
from .sumsets import (
    AffineCombination,
    CertificateRefusal,
    IntervalCertificate,
    certify_interval,
    image_cover,
)
from . import dimension as dim_mod

Interval = tuple[Fraction, Fraction]


# ---------------------------------------------------------------------------
# Product horseshoes
# ---------------------------------------------------------------------------


def affine_product_base(
    letters: int, ratio, offsets: Sequence, name: str = ""
) -> CantorPresentation:
    """Full-shift affine presentation: branch a maps onto [o_a, o_a + ratio]."""
    ratio = Fraction(ratio)
    offsets = [Fraction(o) for o in offsets]
    if len(offsets) != letters:
        raise InputError("one offset per letter")
    matrix = TransitionMatrix.full_shift(letters)
    base = [(o, o + ratio) for o in offsets]
    branches = [
        Branch(a, b, MoebiusMap.affine(ratio, offsets[a]))
        for a in range(letters)
        for b in range(letters)
    ]
    return CantorPresentation(matrix, base, branches, name=name)


class ProductHorseshoe:
    """Lambda = K^s x K^u with a shared transition structure.

    The stable presentation reads words into the past; for a symmetric
    transition matrix the same presentation serves both factors (the default
    when ``stable`` is omitted).
    """

    def __init__(self, unstable: CantorPresentation,
                 stable: Optional[CantorPresentation] = None, name: str = ""):
        if stable is None:
            if unstable.matrix != unstable.matrix.transpose():
                raise InputError(
                    "asymmetric transitions need an explicit stable presentation"
                )
            stable = unstable
        if stable.matrix != unstable.matrix.transpose():
            raise PresentationError(
                "stable matrix must be the transpose of the unstable one"
            )
        if stable.matrix.n != unstable.matrix.n:
            raise PresentationError("factors must share the alphabet")
        self.unstable = unstable
        self.stable = stable
        self.matrix = unstable.matrix
        self.name = name

    @property
    def chart(self) -> tuple[Interval, Interval]:
        return (self.stable.hull, self.unstable.hull)

    def dimension_bounds_sum(self, depth: int):
        bu = dim_mod.dimension_bounds(self.unstable, depth)
        bs = dim_mod.dimension_bounds(self.stable, depth)
        return bu, bs


# ---------------------------------------------------------------------------
# Conjugacy
# ---------------------------------------------------------------------------


def _one_sided_words(x: SymbolicSequence) -> tuple[tuple[Word, Word], tuple[Word, Word]]:
    """((pre_u, per_u), (pre_s, per_s)) of the forward and backward reads."""
    anchor = max(x.core_span[1], 1)
    pre_u = tuple(x.symbol_at(p) for p in range(0, anchor))
    per_u = tuple(x.symbol_at(anchor + i) for i in range(len(x.right)))
    anchor_s = min(x.core_start, 0)
    pre_s = tuple(x.symbol_at(-p) for p in range(0, -anchor_s + 1))
    per_s = tuple(x.symbol_at(anchor_s - 1 - i) for i in range(len(x.left)))
    return (pre_u, per_u), (pre_s, per_s)


def _coordinate(K: CantorPresentation, pre: Word, per: Word) -> SurdSum:
    from .cantor import _periodic_point_value

    return _periodic_point_value(K, pre, per)


@dataclass(frozen=True)
class PointEnclosure:
    stable: Interval
    unstable: Interval
    exact_stable: Optional[SurdSum] = None
    exact_unstable: Optional[SurdSum] = None

    @property
    def diameter(self) -> Fraction:
        return max(self.stable[1] - self.stable[0],
                   self.unstable[1] - self.unstable[0])


def conjugacy_point(H: ProductHorseshoe, theta: SymbolicSequence, depth: int) -> PointEnclosure:
    """Pi(theta) as a box enclosure shrinking with depth; exact limits for
    eventually periodic sequences over Moebius/affine presentations."""
    if depth < 1:
        raise InputError("depth must be >= 1")
    w_u = tuple(theta.symbol_at(p) for p in range(0, depth))
    w_s = tuple(theta.symbol_at(-p) for p in range(0, depth))
    box_u = H.unstable.word_interval(w_u)
    box_s = H.stable.word_interval(w_s)
    (pre_u, per_u), (pre_s, per_s) = _one_sided_words(theta)
    exact_u = _coordinate(H.unstable, pre_u, per_u)
    exact_s = _coordinate(H.stable, pre_s, per_s)
    return PointEnclosure(box_s, box_u, exact_s, exact_u)


def model_step(H: ProductHorseshoe, point: PointEnclosure, a: int, b: int) -> PointEnclosure:
    """One step of the model dynamics on boxes: expand the unstable
    coordinate through branch (a, b), contract the stable one by appending b."""
    gu = H.unstable.branch(a, b).inverse_map.inverse()
    box_u = gu.map_interval(*point.unstable)
    fs = H.stable.branch(b, a).inverse_map
    box_s = fs.map_interval(*point.stable)
    return PointEnclosure(box_s, box_u)


# ---------------------------------------------------------------------------
# Geometric observables on the chart
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffinePlaneMap:
    """f(s, u) = a_s * s + a_u * u + c with exact box ranges and gradient."""

    a_s: Fraction
    a_u: Fraction
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a_s", Fraction(self.a_s))
        object.__setattr__(self, "a_u", Fraction(self.a_u))
        object.__setattr__(self, "c", Fraction(self.c))

    def point(self, s, u):
        return SurdSum.of(s) * self.a_s + SurdSum.of(u) * self.a_u + self.c

    def box(self, s_iv: Interval, u_iv: Interval) -> Interval:
        vals = [self.a_s * s + self.a_u * u + self.c for s in s_iv for u in u_iv]
        return min(vals), max(vals)

    def ds_box(self, s_iv: Interval, u_iv: Interval) -> Interval:
        return (self.a_s, self.a_s)

    def du_box(self, s_iv: Interval, u_iv: Interval) -> Interval:
        return (self.a_u, self.a_u)

    def gradient_scale(self) -> Fraction:
        return max(abs(self.a_s), abs(self.a_u))


@dataclass(frozen=True)
class QuadraticCapMap:
    """f(s, u) = -(s - p)^2 - (u - q)^2: the gradient-degenerate example."""

    p: Fraction
    q: Fraction

    def point(self, s, u):
        ds = SurdSum.of(s) - Fraction(self.p)
        du = SurdSum.of(u) - Fraction(self.q)
        return -(ds * ds) - (du * du)

    def _sq_range(self, iv: Interval, center) -> Interval:
        lo, hi = iv[0] - center, iv[1] - center
        vals = [lo * lo, hi * hi]
        mn = Fraction(0) if lo <= 0 <= hi else min(vals)
        return mn, max(vals)

    def box(self, s_iv, u_iv) -> Interval:
        s2 = self._sq_range(s_iv, self.p)
        u2 = self._sq_range(u_iv, self.q)
        return (-(s2[1] + u2[1]), -(s2[0] + u2[0]))

    def ds_box(self, s_iv, u_iv) -> Interval:
        return (-2 * (s_iv[1] - self.p), -2 * (s_iv[0] - self.p))

    def du_box(self, s_iv, u_iv) -> Interval:
        return (-2 * (u_iv[1] - self.q), -2 * (u_iv[0] - self.q))

    def gradient_scale(self) -> Fraction:
        return Fraction(4)


PlaneMap = Union[AffinePlaneMap, QuadraticCapMap]


class ConjugacyObservable:
    """f composed with the conjugacy: a shift observable on sequence space.

    Exact on eventually periodic sequences (affine/Moebius coordinates are
    exact surds); the modulus of continuity comes from branch contraction:
    agreement on [-N, N] confines both coordinates to depth-(N+1) cylinders.
    """

    def __init__(self, H: ProductHorseshoe, fmap: PlaneMap):
        self.H = H
        self.fmap = fmap
        hull_s = H.stable.hull
        hull_u = H.unstable.hull
        self._diam0 = max(hull_s[1] - hull_s[0], hull_u[1] - hull_u[0])
        self._contraction = max(
            H.stable._contraction_sup, H.unstable._contraction_sup
        )

    def exact_value(self, x: SymbolicSequence) -> SurdSum:
        (pre_u, per_u), (pre_s, per_s) = _one_sided_words(x)
        u = _coordinate(self.H.unstable, pre_u, per_u)
        s = _coordinate(self.H.stable, pre_s, per_s)
        return SurdSum.of(self.fmap.point(s, u))

    def value_at(self, seq, shift: int) -> SurdSum:
        if isinstance(seq, SymbolicSequence):
            return self.exact_value(seq.shift(shift))
        raise InputError("exact values need an eventually periodic sequence")

    def enclosure_at(self, seq, shift: int, radius: int) -> tuple[SurdSum, SurdSum]:
        radius = max(radius, 0)
        w_u = tuple(seq.symbol_at(shift + j) for j in range(0, radius + 1))
        w_s = tuple(seq.symbol_at(shift - j) for j in range(0, radius + 1))
        box = self.fmap.box(
            self.H.stable.word_interval(w_s), self.H.unstable.word_interval(w_u)
        )
        return SurdSum.rational(box[0]), SurdSum.rational(box[1])

    def tail_bound(self, agree_radius: int) -> Fraction:
        if agree_radius < 0:
            agree_radius = 0
        diam = self._diam0 * self._contraction ** agree_radius
        return 2 * self.fmap.gradient_scale() * diam


# ---------------------------------------------------------------------------
# The maximizer predicate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HPhiReport:
    """Certified branch-and-bound localization of the maximizer set.

    status 'pass' certifies a unique maximizer box at the resolution with
    both partial derivative enclosures excluding 0; 'fail' names which part
    broke; 'unknown' means the resolution did not separate the candidates
    (never a false positive).
    """

    status: str
    reason: str
    boxes: tuple[tuple[Word, Word], ...]
    max_value_bounds: Interval
    ds_bounds: Optional[Interval]
    du_bounds: Optional[Interval]

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "boxes": [
                {"stable_word": list(ws), "unstable_word": list(wu)}
                for ws, wu in self.boxes
            ],
            "max_value_bounds": [float(v) for v in self.max_value_bounds],
            "ds_bounds": None if self.ds_bounds is None else [float(v) for v in self.ds_bounds],
            "du_bounds": None if self.du_bounds is None else [float(v) for v in self.du_bounds],
        }


def _box_witness_values(fmap: PlaneMap, H: ProductHorseshoe, ws: Word, wu: Word):
    """Exact f-values at points of Lambda inside the box: the four greedy
    extreme-tail continuations of the two words.  These sharpen the
    branch-and-bound lower bound enough to break exact corner ties."""
    from .cantor import _periodic_point_value

    out = []
    cand_s, cand_u = [], []
    for side in ("sup", "inf"):
        try:
            pre, per, _ = extreme_sequence_from(H.stable, side, ws[-1])
            cand_s.append(_periodic_point_value(H.stable, ws[:-1] + pre, per))
        except InputError:
            pass
        try:
            pre, per, _ = extreme_sequence_from(H.unstable, side, wu[-1])
            cand_u.append(_periodic_point_value(H.unstable, wu[:-1] + pre, per))
        except InputError:
            pass
    for s_pt in cand_s:
        for u_pt in cand_u:
            out.append(SurdSum.of(fmap.point(s_pt, u_pt)))
    return out


def check_H_phi(fmap: PlaneMap, H: ProductHorseshoe, depth: int = 6) -> HPhiReport:
    """Locate argmax f over the product via cylinder-box branch-and-bound
    and check the maximizer predicate (unique box, nonvanishing partials).

    Boxes are pruned against the best exact point value found inside any
    box, so the certification is never optimistic: a pruned box provably
    contains no maximizer."""
    if depth < 1:
        raise InputError("depth must be >= 1")
    boxes = [((a,), (a,)) for a in range(H.matrix.n)]
    for level in range(1, depth + 1):
        scored = []
        best_point = None
        for ws, wu in boxes:
            s_iv = H.stable.word_interval(ws)
            u_iv = H.unstable.word_interval(wu)
            lo, hi = fmap.box(s_iv, u_iv)
            scored.append((ws, wu, lo, hi))
            for val in _box_witness_values(fmap, H, ws, wu):
                if best_point is None or val > best_point:
                    best_point = val
        boxes = [
            (ws, wu)
            for ws, wu, lo, hi in scored
            if best_point is None or not (SurdSum.rational(hi) < best_point)
        ]
        if level == depth:
            survivors = boxes
            break
        refined = []
        for ws, wu in boxes:
            for b_s in H.stable.matrix.successors[ws[-1]]:
                for b_u in H.unstable.matrix.successors[wu[-1]]:
                    refined.append((ws + (b_s,), wu + (b_u,)))
        boxes = refined
    bounds = []
    partials = []
    for ws, wu in survivors:
        s_iv = H.stable.word_interval(ws)
        u_iv = H.unstable.word_interval(wu)
        bounds.append(fmap.box(s_iv, u_iv))
        ds = fmap.ds_box(s_iv, u_iv)
        du = fmap.du_box(s_iv, u_iv)
        partials.append((ds, du, (ds[0] > 0 or ds[1] < 0) and (du[0] > 0 or du[1] < 0)))
    vlo = max(lo for lo, _ in bounds)
    vhi = max(hi for _, hi in bounds)
    if all(not ok for _, _, ok in partials):
        # the maximizer lies in some surviving box, and every one of them
        # has a partial enclosure containing 0: certified failure
        ds, du, _ = partials[0]
        return HPhiReport(
            "fail",
            "every candidate maximizer box has a partial-derivative "
            "enclosure containing 0",
            tuple(survivors),
            (vlo, vhi),
            ds,
            du,
        )
    if len(survivors) != 1:
        return HPhiReport(
            "unknown",
            f"{len(survivors)} candidate boxes remain at depth {depth}",
            tuple(survivors),
            (vlo, vhi),
            None,
            None,
        )
    ds, du, ok = partials[0]
    if ok:
        return HPhiReport("pass", "unique maximizer box, partials exclude 0",
                          (survivors[0],), (vlo, vhi), ds, du)
    return HPhiReport(
        "fail",
        "partial derivative enclosure contains 0 at the maximizer box",
        (survivors[0],),
        (vlo, vhi),
        ds,
        du,
    )


# ---------------------------------------------------------------------------
# Certified dimension for uniform affine block systems
# ---------------------------------------------------------------------------


def affine_sft_dimension_bracket(K: CantorPresentation, power: int = 40) -> tuple[float, float]:
    """[lo, hi] bracketing HD(K) for a uniform-|ratio| affine presentation:
    log(spectral radius)/log(1/ratio) with certified Collatz-Wielandt
    bounds for the Perron root."""
    data = K.uniform_affine_data()
    if data is None:
        raise InputError("certified bracket needs a uniform affine presentation")
    lam = data[0]
    A = K.matrix.matrix_power(power)
    v = [sum(row) for row in A]
    w = [
        sum(K.matrix.rows[i][j] * v[j] for j in range(K.matrix.n))
        for i in range(K.matrix.n)
    ]
    ratios = [Fraction(w[i], v[i]) for i in range(K.matrix.n) if v[i] > 0]
    rho_lo, rho_hi = min(ratios), max(ratios)
    denom = -(math.log(lam.numerator) - math.log(lam.denominator))
    return (
        (math.log(rho_lo.numerator) - math.log(rho_lo.denominator)) / denom,
        (math.log(rho_hi.numerator) - math.log(rho_hi.denominator)) / denom,
    )


# ---------------------------------------------------------------------------
# Restricted cover sources for the pipeline
# ---------------------------------------------------------------------------


class BlockRestriction:
    """Cover of a block presentation restricted to an original-letter prefix."""

    def __init__(self, block: CantorPresentation, original_prefix: WordLike):
        if block.block_letters is None:
            raise InputError("needs a block presentation from remove_word")
        self.block = block
        self.prefix = _word(original_prefix)
        L = len(block.block_letters[0])
        if not 1 <= len(self.prefix) <= L:
            raise InputError("prefix must fit inside the block window")
        self.letters = tuple(
            i
            for i, w in enumerate(block.block_letters)
            if w[: len(self.prefix)] == self.prefix
        )
        if not self.letters:
            raise EmptySubshiftError("no block letter matches the prefix")

    def cover_union(self, depth: int) -> IntervalUnion:
        allowed = set(self.letters)
        return IntervalUnion.of(
            item.interval
            for item in self.block.cover_items(depth)
            if item.word[0] in allowed
        )


# ---------------------------------------------------------------------------
# The Main-Theorem pipeline at desk scale
# ---------------------------------------------------------------------------


@dataclass
class DemoConfig:
    removal_radius: int = 1
    hphi_depth: int = 5
    dim_power: int = 40
    thickness_depth: int = 6
    cover_depth: int = 6
    k: int = 3
    d_word: Word = (1, 1, 1)
    witnesses: tuple[SymbolicSequence, ...] = ()
    limsup_blocks: int = 3

    def to_json(self) -> dict:
        return {
            "removal_radius": self.removal_radius,
            "hphi_depth": self.hphi_depth,
            "dim_power": self.dim_power,
            "thickness_depth": self.thickness_depth,
            "cover_depth": self.cover_depth,
            "k": self.k,
            "d_word": list(self.d_word),
            "witness_count": len(self.witnesses),
            "limsup_blocks": self.limsup_blocks,
        }


@dataclass
class StageReport:
    name: str
    ok: bool
    detail: dict

    def to_json(self) -> dict:
        return {"stage": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class DemoReport:
    stages: list[StageReport]
    certified_interval: Optional[tuple[float, float]]
    certified_length: Optional[float]
    refusal: Optional[str]

    @property
    def succeeded(self) -> bool:
        return all(s.ok for s in self.stages) and self.certified_interval is not None

    def to_json(self) -> dict:
        return {
            "succeeded": self.succeeded,
            "stages": [s.to_json() for s in self.stages],
            "certified_interval": self.certified_interval,
            "certified_length": self.certified_length,
            "refusal": self.refusal,
        }


def _extreme_address(K: CantorPresentation, side: str, start: int) -> tuple[Word, Word]:
    """Greedy extreme address forced to begin at ``start``; pre includes it."""
    pre, per, _ = extreme_sequence_from(K, side, start)
    if not pre:
        pre = (per[0],)
        per = per[1:] + (per[0],)
    return pre, per


def extreme_sequence_from(K: CantorPresentation, side: str, start: int):
    """extreme_sequence with a forced initial letter."""
    if side not in ("sup", "inf"):
        raise InputError("side must be 'sup' or 'inf'")
    want_max = side == "sup"
    path = [(start, want_max)]
    seen = {path[0]: 0}
    while True:
        a, wm = path[-1]
        succ = K.matrix.successors[a]
        vals = [
            (K.branch_domain(a, b)[1] if wm else K.branch_domain(a, b)[0])
            for b in succ
        ]
        target = max(vals) if wm else min(vals)
        winners = [b for b, v in zip(succ, vals) if v == target]
        if len(winners) > 1:
            raise InputError("extreme address not determined by endpoints")
        b = winners[0]
        orient = K.branch(a, b).inverse_map.orientation
        nxt = (b, wm if orient > 0 else not wm)
        if nxt in seen:
            i = seen[nxt]
            letters = [s for s, _ in path]
            from .cantor import _periodic_point_value

            pre, per = tuple(letters[:i]), tuple(letters[i:])
            return pre, per, _periodic_point_value(K, pre, per)
        seen[nxt] = len(path)
        path.append(nxt)


def _compose_affine(K: CantorPresentation, word: Word) -> MoebiusMap:
    """Composite contraction for prepending ``word`` (uniform affine only)."""
    comp = MoebiusMap.identity()
    for a in reversed(word):
        b = K.matrix.successors[a][0]
        m = K.branch(a, b).inverse_map
        if not (isinstance(m, MoebiusMap) and m.is_affine):
            raise InputError("pipeline needs uniform affine branches")
        comp = m.compose(comp)
    return comp


def main_theorem_demo(H: ProductHorseshoe, fmap: PlaneMap, config: DemoConfig) -> DemoReport:
    """Desk-scale run of the interior-interval pipeline.

    1. certify the maximizer predicate; 2. remove the maximizer cylinder and
    check the removed product still has certified dimension > 1; 3. build
    the splice context from the maximizer's symbolic tails; 4. cover the
    spliced image of the restricted product; 5. certify an interval inside
    it via the gap lemma; 6. verify the sup/limsup identities on witnesses.
    Any failure produces a structured report naming the stage.
    """
    stages: list[StageReport] = []

    def fail(report_stage: StageReport, refusal: str) -> DemoReport:
        stages.append(report_stage)
        return DemoReport(stages, None, None, refusal)

    # -- stage 1: maximizer predicate -------------------------------------
    s = config.removal_radius
    hphi = check_H_phi(fmap, H, max(config.hphi_depth, s + 1))
    st1 = StageReport("H_phi", hphi.passed, hphi.to_json())
    if not hphi.passed:
        return fail(st1, f"H_phi: {hphi.reason}")
    stages.append(st1)
    ws, wu = hphi.boxes[0]
    theta0 = wu[0]

    # maximizer window (theta_-s .. theta_s) from the surviving box
    window = tuple(reversed(ws[1 : s + 1])) + (theta0,) + wu[1 : s + 1]

    # -- stage 2: cylinder removal keeps dimension > 1 ---------------------
    try:
        Ku = remove_word(H.unstable, window)
        Ks = remove_word(H.stable, tuple(reversed(window)))
    except EmptySubshiftError as exc:
        return fail(StageReport("remove_cylinder", False, {"error": str(exc)}),
                    "removal emptied the subshift")
    du_lo, du_hi = affine_sft_dimension_bracket(Ku, config.dim_power)
    ds_lo, ds_hi = affine_sft_dimension_bracket(Ks, config.dim_power)
    dim_ok = du_lo + ds_lo > 1
    st2 = StageReport(
        "remove_cylinder",
        dim_ok,
        {
            "window": list(window),
            "block_letters": Ku.matrix.n,
            "unstable_dim": [du_lo, du_hi],
            "stable_dim": [ds_lo, ds_hi],
            "dim_sum_lower": du_lo + ds_lo,
        },
    )
    if not dim_ok:
        return fail(st2, "dimension: removed product no longer exceeds 1")
    stages.append(st2)

    # -- stage 3: surgery context from the maximizer's tails ---------------
    pre_u, per_u = _extreme_address(
        H.unstable, "sup" if fmap.du_box(*H.chart)[0] > 0 else "inf", theta0
    )
    pre_s, per_s = _extreme_address(
        H.stable, "sup" if fmap.ds_box(*H.chart)[0] > 0 else "inf", theta0
    )
    core = tuple(reversed(pre_s)) + pre_u[1:]
    core_zero = len(pre_s) - 1
    left_word = tuple(reversed(per_s))
    right_word = per_u
    x_m = SymbolicSequence(left_word, core, right_word, -core_zero)
    if x_m.window(-s, s) != window:
        return fail(
            StageReport("surgery_context", False,
                        {"x_M_window": list(x_m.window(-s, s)),
                         "removed_window": list(window)}),
            "maximizer window disagrees with the branch-and-bound box",
        )
    try:
        if x_m.is_periodic:
            ctx = build_periodic_surgery_context(
                H.matrix, config.d_word, x_m.right, config.k
            )
        else:
            ctx = build_surgery_context(
                H.matrix, config.d_word, left_word, core, core_zero,
                right_word, config.k,
            )
    except InputError as exc:
        return fail(StageReport("surgery_context", False, {"error": str(exc)}),
                    f"surgery context: {exc}")
    st3 = StageReport(
        "surgery_context",
        True,
        {
            "x_M": x_m.to_json(),
            "periodic_maximizer": x_m.is_periodic,
            "alpha_length": len(ctx.alpha),
            "k": ctx.k,
        },
    )
    stages.append(st3)

    # -- stage 4: image cover of the spliced restricted product ------------
    # A(x)+ = alpha[zero:] f x_1 ...; A(x)- = ... x_0 e alpha[:zero+1]
    center = len(config.d_word) // 2
    w_u_prepend = ctx.alpha[ctx.alpha_zero :] + ctx.f
    w_s_append = ctx.e + ctx.alpha[: ctx.alpha_zero + 1]
    Fu = _compose_affine(H.unstable, w_u_prepend)
    # appending letters to the past = prepending the reversed word to the
    # stable address
    Fs_map = _compose_affine(H.stable, tuple(reversed(w_s_append)))
    pu, qu = Fu.a / Fu.d, Fu.b / Fu.d
    ps, qs = Fs_map.a / Fs_map.d, Fs_map.b / Fs_map.d
    # restricted factors: x_1 pins the unstable follower, x_0 x_-1 ... the stable
    Ru = BlockRestriction(Ku, config.d_word[center + 1 : center + 2])
    Rs = BlockRestriction(Ks, tuple(reversed(config.d_word[: center + 1]))[:2])
    fa = fmap  # affine plane map required for the exact pipeline
    if not isinstance(fa, AffinePlaneMap):
        return fail(StageReport("image_cover", False,
                                {"error": "pipeline needs an affine observable"}),
                    "image cover: non-affine observable")
    # V(x) = a_s (ps * s0 + qs) + a_u (pu * u1 + qu) + c
    cu = fa.a_u * pu
    cs = fa.a_s * ps
    const = fa.a_s * qs + fa.a_u * qu + fa.c
    wcover = image_cover(AffineCombination(cs, cu, const), Rs, Ru, config.cover_depth)
    st4 = StageReport(
        "image_cover",
        True,
        {
            "components": len(wcover.union),
            "hull": [float(v) for v in wcover.union.hull],
            "measure": float(wcover.measure),
        },
    )
    stages.append(st4)

    # -- stage 5: certified interval via the gap lemma ---------------------
    from .cantor import AffineImageSet

    left_src = AffineImageSet(Rs, cs, 0)
    right_src = AffineImageSet(Ru, cu, 0)
    hull_l = left_src.cover_union(config.thickness_depth).hull
    hull_r = right_src.cover_union(config.thickness_depth).hull
    t_lo = hull_l[0] + hull_r[0]
    t_hi = hull_l[1] + hull_r[1]
    cert = certify_interval(
        left_src, right_src, (t_lo, t_hi), config.thickness_depth, "plus"
    )
    if isinstance(cert, CertificateRefusal):
        return fail(StageReport("certify_interval", False, cert.to_json()),
                    f"thickness: {cert.reason}")
    exact_lo, exact_hi = const + t_lo, const + t_hi
    if exact_hi < exact_lo:
        exact_lo, exact_hi = exact_hi, exact_lo
    interval = (float(exact_lo), float(exact_hi))
    st5 = StageReport(
        "certify_interval",
        True,
        {"certificate": cert.to_json(), "value_interval": list(interval),
         "offset": float(const)},
    )
    stages.append(st5)

    # -- stage 6: spectrum membership via the splice identities ------------
    obs = ConjugacyObservable(H, fmap)
    wit_reports = []
    all_ok = bool(config.witnesses)
    for x in config.witnesses:
        try:
            rep_sup = verify_sup_identity(obs, x, ctx)
            rep_lim = verify_limsup_identity(obs, x, ctx, config.limsup_blocks)
        except InputError as exc:
            wit_reports.append({"witness": x.to_json(), "error": str(exc)})
            all_ok = False
            continue
        ax = surgery_A(x, ctx)
        shift0 = rep_sup.achieving_shifts[0] if rep_sup.achieving_shifts else 0
        value = obs.exact_value(ax.shift(shift0))
        inside = SurdSum.rational(exact_lo) <= value <= SurdSum.rational(exact_hi)
        ok = rep_sup.holds and rep_lim.holds and inside
        all_ok = all_ok and ok
        wit_reports.append({
            "witness": x.to_json(),
            "sup_identity": rep_sup.holds,
            "limsup_identity": rep_lim.holds,
            "value": float(value),
            "value_in_certified_interval": inside,
        })
    st6 = StageReport("verify_membership", all_ok, {"witnesses": wit_reports})
    stages.append(st6)
    if not all_ok:
        return DemoReport(stages, None, None, "witness verification failed")
    return DemoReport(stages, interval, interval[1] - interval[0], None)


# ---------------------------------------------------------------------------
# Shipped demo configurations
# ---------------------------------------------------------------------------


def demo_main() -> tuple[ProductHorseshoe, AffinePlaneMap, DemoConfig]:
    """The configuration the acceptance suite certifies end to end:
    three equal branches of ratio 3/10, f = 2u - s."""
    K = affine_product_base(
        3, Fraction(3, 10), [Fraction(0), Fraction(7, 20), Fraction(7, 10)],
        name="demo-3x0.3",
    )
    H = ProductHorseshoe(K, name="demo-main")
    fmap = AffinePlaneMap(Fraction(-1), Fraction(2), Fraction(0))
    # every witness passes through the (1,1,1) cylinder and avoids letter 2,
    # hence avoids the removed maximizer window
    witnesses = (
        SymbolicSequence.periodic((1,)),
        SymbolicSequence((1,), (0,), (1,), 3),
        SymbolicSequence((0, 1), (1, 1, 1), (1,), -1),
        SymbolicSequence((1,), (1, 1, 1, 0, 0), (0, 1), -1),
    )
    config = DemoConfig(
        removal_radius=1,
        hphi_depth=5,
        thickness_depth=6,
        cover_depth=6,
        k=3,
        d_word=(1, 1, 1),
        witnesses=witnesses,
        limsup_blocks=3,
    )
    return H, fmap, config


def demo_refusal() -> tuple[ProductHorseshoe, AffinePlaneMap, DemoConfig]:
    """K_{0.4} x K_{0.4}: dimension survives a width-5 removal but the
    thickness product 0.75^2 < 1 forces the documented stage-5 refusal."""
    from .cantor import k_alpha_cantor

    K = k_alpha_cantor(Fraction(2, 5))
    H = ProductHorseshoe(K, name="demo-k04")
    fmap = AffinePlaneMap(Fraction(-1), Fraction(2), Fraction(0))
    witnesses = (SymbolicSequence.periodic((0,)),)
    config = DemoConfig(
        removal_radius=2,
        hphi_depth=5,
        thickness_depth=6,
        cover_depth=6,
        k=3,
        d_word=(0, 0, 0, 0, 0),
        witnesses=witnesses,
        limsup_blocks=3,
    )
    return H, fmap, config
