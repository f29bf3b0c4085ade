"""Regular Cantor sets as certified iterated-function-system presentations.

A presentation carries a transition matrix, one base interval per letter,
and one contracting inverse branch per allowed letter pair.  Affine and
Moebius branches are handled with exact rational arithmetic end to end:
covers, derivative bounds, gaps, and thickness all come out as exact
fractions.  Piecewise-affine ("table") branches cover the user-supplied
monotone map case with certified slope enclosures.

Depth convention: the depth-n cover is the union of cylinder intervals
I(w) over admissible words w of length n, so depth 1 is the base intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import EmptySubshiftError, ExactArithmeticError, InputError, PresentationError
from .intervals import IntervalUnion, ThicknessResult, thickness_of_union
from .surd import SurdSum
from .symbolic import (
    RecodedSFT,
    TransitionMatrix,
    WordLike,
    admissible_words,
    forbid_word,
    _word,
)

Interval = tuple[Fraction, Fraction]


# ---------------------------------------------------------------------------
# Branch maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusMap:
    """x -> (a x + b) / (c x + d) with rational coefficients (c may be 0)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for f in ("a", "b", "c", "d"):
            object.__setattr__(self, f, Fraction(getattr(self, f)))
        if self.det == 0:
            raise InputError("singular Moebius map")

    @classmethod
    def affine(cls, slope, intercept) -> "MoebiusMap":
        return cls(Fraction(slope), Fraction(intercept), Fraction(0), Fraction(1))

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls.affine(1, 0)

    @classmethod
    def cf_digit(cls, digit: int) -> "MoebiusMap":
        """Inverse branch x -> 1/(digit + x) of the Gauss map."""
        if digit < 1:
            raise InputError("continued fraction digits must be >= 1")
        return cls(Fraction(0), Fraction(1), Fraction(1), Fraction(digit))

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def is_affine(self) -> bool:
        return self.c == 0

    def __call__(self, x):
        if isinstance(x, SurdSum):
            den = SurdSum.rational(self.c) * x + self.d
            return (SurdSum.rational(self.a) * x + self.b) / den
        x = Fraction(x)
        den = self.c * x + self.d
        if den == 0:
            raise ExactArithmeticError("Moebius map evaluated at its pole")
        return (self.a * x + self.b) / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other: (self . other)(x) = self(other(x))."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def _check_no_pole(self, lo: Fraction, hi: Fraction) -> None:
        if self.c != 0:
            dlo = self.c * lo + self.d
            dhi = self.c * hi + self.d
            if dlo == 0 or dhi == 0 or (dlo > 0) != (dhi > 0):
                raise ExactArithmeticError("pole inside interval")

    def map_interval(self, lo, hi) -> Interval:
        lo, hi = Fraction(lo), Fraction(hi)
        self._check_no_pole(lo, hi)
        u, v = self(lo), self(hi)
        return (u, v) if u <= v else (v, u)

    def derivative_range(self, lo, hi) -> tuple[Fraction, Fraction]:
        """(inf, sup) of |f'| on [lo, hi], exact (f' monotone there)."""
        lo, hi = Fraction(lo), Fraction(hi)
        self._check_no_pole(lo, hi)
        vals = [abs(self.derivative(lo)), abs(self.derivative(hi))]
        return (min(vals), max(vals))

    def derivative(self, x) -> Fraction:
        x = Fraction(x)
        den = self.c * x + self.d
        return self.det / (den * den)

    @property
    def orientation(self) -> int:
        return 1 if self.det > 0 else -1

    def to_json(self) -> dict:
        return {
            "type": "affine" if self.is_affine else "moebius",
            **(
                {"slope": str(self.a / self.d), "intercept": str(self.b / self.d)}
                if self.is_affine
                else {"a": str(self.a), "b": str(self.b), "c": str(self.c), "d": str(self.d)}
            ),
        }


@dataclass(frozen=True)
class PiecewiseAffineMap:
    """Monotone piecewise-affine map given by breakpoints (the 'table' kind).

    Serves as the user-supplied monotone branch with a certified derivative
    enclosure: on any subinterval the derivative range is the range of the
    overlapped segment slopes, exactly.
    """

    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.points)
        if len(pts) < 2:
            raise InputError("table map needs at least two breakpoints")
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InputError("table map breakpoints must be strictly increasing")
        ys = [y for _, y in pts]
        inc = all(b > a for a, b in zip(ys, ys[1:]))
        dec = all(b < a for a, b in zip(ys, ys[1:]))
        if not (inc or dec):
            raise InputError("table map must be strictly monotone")
        object.__setattr__(self, "points", pts)

    @property
    def orientation(self) -> int:
        return 1 if self.points[1][1] > self.points[0][1] else -1

    @property
    def is_affine(self) -> bool:
        return False

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        pts = self.points
        if not pts[0][0] <= x <= pts[-1][0]:
            raise InputError("table map evaluated outside its breakpoint span")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise AssertionError

    def map_interval(self, lo, hi) -> Interval:
        u, v = self(lo), self(hi)
        return (u, v) if u <= v else (v, u)

    def derivative_range(self, lo, hi) -> tuple[Fraction, Fraction]:
        lo, hi = Fraction(lo), Fraction(hi)
        slopes = []
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            if x1 > lo and x0 < hi or (lo == hi and x0 <= lo <= x1):
                slopes.append(abs((y1 - y0) / (x1 - x0)))
        if not slopes:
            raise InputError("empty overlap in table derivative range")
        return (min(slopes), max(slopes))

    def to_json(self) -> dict:
        return {
            "type": "table",
            "points": [[str(x), str(y)] for x, y in self.points],
        }


BranchMap = Union[MoebiusMap, PiecewiseAffineMap]


def _map_from_json(doc: dict) -> BranchMap:
    kind = doc["type"]
    if kind == "affine":
        return MoebiusMap.affine(Fraction(doc["slope"]), Fraction(doc["intercept"]))
    if kind == "moebius":
        return MoebiusMap(
            Fraction(doc["a"]), Fraction(doc["b"]), Fraction(doc["c"]), Fraction(doc["d"])
        )
    if kind == "table":
        return PiecewiseAffineMap(tuple((Fraction(x), Fraction(y)) for x, y in doc["points"]))
    raise InputError(f"unknown branch map type {kind!r}")


@dataclass(frozen=True)
class Branch:
    """Contracting inverse branch f_{source,target}: I(target) -> I(source,target)."""

    source: int
    target: int
    inverse_map: BranchMap


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverItem:
    word: tuple[int, ...]
    interval: Interval


@dataclass(frozen=True)
class Cover:
    depth: int
    items: tuple[CoverItem, ...]
    union: IntervalUnion


class CantorPresentation:
    """Certified IFS presentation of a regular Cantor set."""

    def __init__(
        self,
        matrix: TransitionMatrix,
        base: Sequence[Interval],
        branches: Iterable[Branch],
        name: str = "",
        require_mixing: bool = True,
        block_letters: Optional[tuple[tuple[int, ...], ...]] = None,
    ):
        base = tuple((Fraction(lo), Fraction(hi)) for lo, hi in base)
        if len(base) != matrix.n:
            raise PresentationError("one base interval per letter required")
        for lo, hi in base:
            if hi <= lo:
                raise PresentationError("base intervals must have positive length")
        bmap: dict[tuple[int, int], Branch] = {}
        for br in branches:
            key = (br.source, br.target)
            if key in bmap:
                raise PresentationError(f"duplicate branch {key}")
            bmap[key] = br
        for a in range(matrix.n):
            for b in matrix.successors[a]:
                if (a, b) not in bmap:
                    raise PresentationError(f"missing branch for allowed pair {(a, b)}")
        self.matrix = matrix
        self.base = base
        self.branches = bmap
        self.name = name
        self.block_letters = block_letters
        self._domains: dict[tuple[int, int], Interval] = {}
        self._validate(require_mixing)

    # -- validation ---------------------------------------------------------

    def _validate(self, require_mixing: bool) -> None:
        contraction_sup = Fraction(0)
        for (a, b), br in self.branches.items():
            lo, hi = self.base[b]
            dom = br.inverse_map.map_interval(lo, hi)
            if not (self.base[a][0] <= dom[0] and dom[1] <= self.base[a][1]):
                raise PresentationError(
                    f"branch {(a, b)} image {dom} leaves base interval of {a}"
                )
            self._domains[(a, b)] = dom
            dmin, dmax = br.inverse_map.derivative_range(lo, hi)
            if dmax >= 1:
                raise PresentationError(
                    f"branch {(a, b)} is not certified contracting (sup|f'|={dmax})"
                )
            contraction_sup = max(contraction_sup, dmax)
        # domains within a common base interval must have disjoint interiors
        for a in range(self.matrix.n):
            doms = sorted(self._domains[(a, b)] for b in self.matrix.successors[a])
            for (l1, h1), (l2, h2) in zip(doms, doms[1:]):
                if l2 < h1:
                    raise PresentationError(
                        f"overlapping branch domains inside base interval {a}"
                    )
        self._contraction_sup = contraction_sup
        if require_mixing and not self.matrix.is_primitive:
            raise PresentationError("presentation is not topologically mixing")

    # -- geometry -----------------------------------------------------------

    @property
    def letters(self) -> range:
        return range(self.matrix.n)

    @property
    def hull(self) -> Interval:
        return (min(lo for lo, _ in self.base), max(hi for _, hi in self.base))

    def branch(self, a: int, b: int) -> Branch:
        try:
            return self.branches[(a, b)]
        except KeyError:
            raise InputError(f"pair {(a, b)} is not admissible") from None

    def branch_domain(self, a: int, b: int) -> Interval:
        """I(a, b) = f_(a,b)(I(b)), the expanding map's branch domain."""
        return self._domains[(a, b)]

    @property
    def min_expansion(self) -> Fraction:
        """Certified lower bound > 1 for |Dg| over all branch domains."""
        return 1 / self._contraction_sup

    def word_interval(self, word: WordLike) -> Interval:
        w = _word(word)
        if not w:
            raise InputError("empty word has no cylinder")
        iv = self.base[w[-1]]
        for a, b in zip(reversed(w[:-1]), reversed(w[1:])):
            iv = self.branch(a, b).inverse_map.map_interval(*iv)
        return iv

    def cover_items(self, depth: int) -> list[CoverItem]:
        if depth < 1:
            raise InputError("cover depth must be >= 1")
        level = [CoverItem((a,), self.base[a]) for a in self.letters]
        for _ in range(depth - 1):
            nxt = []
            for item in level:
                first = item.word[0]
                for a in self.matrix.predecessors[first]:
                    iv = self.branch(a, first).inverse_map.map_interval(*item.interval)
                    nxt.append(CoverItem((a,) + item.word, iv))
            level = nxt
        level.sort(key=lambda it: it.word)
        return level

    def cover(self, depth: int) -> Cover:
        items = tuple(self.cover_items(depth))
        return Cover(depth, items, IntervalUnion.of(it.interval for it in items))

    def cover_union(self, depth: int) -> IntervalUnion:
        return self.cover(depth).union

    # -- structure flags -----------------------------------------------------

    def uniform_affine_data(self) -> Optional[tuple[Fraction, dict]]:
        """(|slope|, {(a,b): (sign, intercept)}) when every branch is affine
        with one common absolute slope; None otherwise."""
        slope_abs: Optional[Fraction] = None
        data = {}
        for key, br in self.branches.items():
            m = br.inverse_map
            if not (isinstance(m, MoebiusMap) and m.is_affine):
                return None
            s = m.a / m.d
            t = m.b / m.d
            if slope_abs is None:
                slope_abs = abs(s)
            elif abs(s) != slope_abs:
                return None
            data[key] = (1 if s > 0 else -1, t)
        if slope_abs is None or slope_abs == 0:
            return None
        return slope_abs, data

    def affine_image(self, a, b, name: str = "") -> "CantorPresentation":
        """Presentation of {a*x + b : x in K} (a != 0), exactly."""
        a, b = Fraction(a), Fraction(b)
        if a == 0:
            raise InputError("degenerate affine image")
        t = MoebiusMap.affine(a, b)
        tinv = t.inverse()
        new_base = [t.map_interval(lo, hi) for lo, hi in self.base]
        new_branches = []
        for (s, tgt), br in self.branches.items():
            m = br.inverse_map
            if isinstance(m, MoebiusMap):
                nm: BranchMap = t.compose(m).compose(tinv)
            else:
                nm = PiecewiseAffineMap(tuple(sorted((t(x), t(y)) for x, y in m.points)))
            new_branches.append(Branch(s, tgt, nm))
        return CantorPresentation(
            self.matrix, new_base, new_branches,
            name=name or f"affine({a},{b})({self.name})",
            require_mixing=False,
        )

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        kinds = set()
        for br in self.branches.values():
            kinds.add(br.inverse_map.to_json()["type"])
        kind = kinds.pop() if len(kinds) == 1 else "mixed"
        return {
            "type": kind,
            "name": self.name,
            "alphabet": self.matrix.n,
            "transitions": [list(r) for r in self.matrix.rows],
            "base": [[str(lo), str(hi)] for lo, hi in self.base],
            "branches": [
                {"source": a, "target": b, "map": br.inverse_map.to_json()}
                for (a, b), br in sorted(self.branches.items())
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CantorPresentation":
        matrix = TransitionMatrix(doc["transitions"])
        base = [(Fraction(lo), Fraction(hi)) for lo, hi in doc["base"]]
        branches = [
            Branch(br["source"], br["target"], _map_from_json(br["map"]))
            for br in doc["branches"]
        ]
        return cls(matrix, base, branches, name=doc.get("name", ""),
                   require_mixing=False)

    def __repr__(self):
        return f"CantorPresentation({self.name or 'unnamed'}, n={self.matrix.n})"


# ---------------------------------------------------------------------------
# Cover sources: restriction and affine images at cover level
# ---------------------------------------------------------------------------


class RestrictedSet:
    """K intersected with the cylinder of a finite prefix word.

    Covers at depth d are the cylinder intervals I(prefix + v) over
    admissible continuations v of length d.
    """

    def __init__(self, presentation: CantorPresentation, prefix: WordLike):
        self.presentation = presentation
        self.prefix = _word(prefix)
        if not self.prefix:
            raise InputError("empty restriction prefix")

    def cover_union(self, depth: int) -> IntervalUnion:
        K = self.presentation
        out = []
        for item in K.cover_items(depth):
            if K.matrix.rows[self.prefix[-1]][item.word[0]]:
                iv = item.interval
                for a, b in zip(reversed(self.prefix),
                                reversed(self.prefix[1:] + (item.word[0],))):
                    iv = K.branch(a, b).inverse_map.map_interval(*iv)
                out.append(iv)
        if not out:
            raise EmptySubshiftError("restriction cylinder is empty")
        return IntervalUnion.of(out)


class AffineImageSet:
    """{a*x + b : x in S} for any cover source S, at cover level."""

    def __init__(self, source, a, b):
        self.source = source
        self.a = Fraction(a)
        self.b = Fraction(b)

    def cover_union(self, depth: int) -> IntervalUnion:
        return self.source.cover_union(depth).affine_image(self.a, self.b)


# ---------------------------------------------------------------------------
# Standard presentations
# ---------------------------------------------------------------------------


def k_alpha_cantor(alpha) -> CantorPresentation:
    """Two affine branches of ratio (1-alpha)/2 on [0, r] and [1-r, 1];
    the right branch is orientation-reversing."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise InputError("alpha must lie in (0, 1)")
    lam = (1 - alpha) / 2
    matrix = TransitionMatrix.full_shift(2)
    base = [(Fraction(0), lam), (1 - lam, Fraction(1))]
    branches = []
    for b in (0, 1):
        branches.append(Branch(0, b, MoebiusMap.affine(lam, 0)))
        branches.append(Branch(1, b, MoebiusMap.affine(-lam, 1)))
    return CantorPresentation(matrix, base, branches, name=f"kalpha:{alpha}")


def middle_third_cantor() -> CantorPresentation:
    return k_alpha_cantor(Fraction(1, 3))


def _alternating_fixed_points(n: int) -> tuple[SurdSum, SurdSum]:
    """(min, max) of C(n): fixed points of f_n.f_1 and f_1.f_n."""
    fn = MoebiusMap.cf_digit(n)
    f1 = MoebiusMap.cf_digit(1)
    lo = attracting_fixed_point(fn.compose(f1))
    hi = attracting_fixed_point(f1.compose(fn))
    return lo, hi


def attracting_fixed_point(m: MoebiusMap) -> SurdSum:
    """Positive fixed point of a Moebius map with c > 0 and nonnegative
    entries (the value of a purely periodic continued fraction)."""
    if m.c <= 0:
        raise InputError("expected c > 0")
    disc = (m.a - m.d) ** 2 + 4 * m.b * m.c
    root = SurdSum.sqrt(disc)
    return (SurdSum.rational(m.a - m.d) + root) / (2 * m.c)


def continued_fraction_cantor(n: int, bits: int = 100) -> CantorPresentation:
    """Presentation of C(n): continued fractions with digits in {1..n}.

    Letter a stands for digit a+1.  The common carrier interval is a
    rational outward rounding of [min C(n), max C(n)]; the rounding keeps
    every branch image strictly inside the carrier, which is verified
    exactly, so all cylinder endpoints are exact rationals.
    """
    if n < 2:
        raise InputError("C(n) needs n >= 2 (C(1) is a single point)")
    lo_surd, hi_surd = _alternating_fixed_points(n)
    ulp = Fraction(1, 2**bits)
    p = lo_surd.enclosure(bits)[0] - ulp
    q = hi_surd.enclosure(bits)[1] + ulp
    # carrier invariance, exact check: f_d([p, q]) inside [p, q] for all digits
    if not (Fraction(1, n + q) >= p and Fraction(1, 1 + p) <= q):
        raise PresentationError("carrier rounding failed; increase bits")
    matrix = TransitionMatrix.full_shift(n)
    maps = [MoebiusMap.cf_digit(d) for d in range(1, n + 1)]
    base = [m.map_interval(p, q) for m in maps]
    branches = [
        Branch(a, b, maps[a]) for a in range(n) for b in range(n)
    ]
    return CantorPresentation(matrix, base, branches, name=f"c{n}")


def remove_word(K: CantorPresentation, word: WordLike) -> CantorPresentation:
    """Presentation of the subset of K avoiding ``word``, over the block
    alphabet of the higher-block recoding.  Raises EmptySubshiftError when
    the removal empties the subshift."""
    recoded = forbid_word(K.matrix, word)
    if recoded.is_empty:
        raise EmptySubshiftError(f"forbidding {tuple(word)} empties the subshift")
    letters = recoded.letters
    base = [K.word_interval(w) for w in letters]
    branches = []
    for i, u in enumerate(letters):
        for j in recoded.matrix.successors[i]:
            if len(u) == 1:
                m = K.branch(u[0], letters[j][0]).inverse_map
            else:
                m = K.branch(u[0], u[1]).inverse_map
            branches.append(Branch(i, j, m))
    return CantorPresentation(
        recoded.matrix,
        base,
        branches,
        name=f"{K.name}-minus-{''.join(map(str, _word(word)))}",
        require_mixing=False,
        block_letters=letters,
    )


def build_cover(K: CantorPresentation, depth: int) -> Cover:
    """Cylinder cover at the given depth (depth n = words of length n)."""
    return K.cover(depth)


# ---------------------------------------------------------------------------
# Thickness
# ---------------------------------------------------------------------------


def thickness(K: CantorPresentation, depth: int) -> ThicknessResult:
    """Newhouse thickness of the depth-truncated set, exactly.

    The value is the exact finite-stage quantity for the cover's gap and
    bridge structure; it approximates tau(K) from above as depth grows
    (refinement only adds gaps).
    """
    return thickness_of_union(K.cover_union(depth))


# ---------------------------------------------------------------------------
# Continued fraction values
# ---------------------------------------------------------------------------


_DIGIT_MATRIX_CACHE: dict[tuple[int, ...], MoebiusMap] = {}


def _continuant_map(digits: Sequence[int]) -> MoebiusMap:
    # digit validity is the caller's concern (a leading 0 is legitimate)
    key = tuple(digits)
    if key not in _DIGIT_MATRIX_CACHE:
        m = MoebiusMap.identity()
        for d in key:
            m = m.compose(MoebiusMap(Fraction(d), Fraction(1), Fraction(1), Fraction(0)))
        _DIGIT_MATRIX_CACHE[key] = m
    return _DIGIT_MATRIX_CACHE[key]


def cf_value_digits(pre: Sequence[int], period: Sequence[int]) -> SurdSum:
    """Value of [pre_0; pre_1, ..., (period repeated)], an exact surd.

    An empty period gives the terminating continued fraction [pre...].
    The leading digit may be 0 (for values in (0,1)); all later digits
    must be >= 1.
    """
    pre = tuple(int(d) for d in pre)
    period = tuple(int(d) for d in period)
    if not pre and not period:
        raise InputError("empty continued fraction")
    tail = pre[1:] if pre else ()
    if any(d < 1 for d in tail) or any(d < 1 for d in period):
        raise InputError("continued fraction digits beyond the first must be >= 1")
    if pre and pre[0] < 0:
        raise InputError("leading digit must be >= 0")
    if period:
        x = attracting_fixed_point(_continuant_map(period))
    else:
        m = _continuant_map(pre)
        return SurdSum.rational(Fraction(m.a, m.c)) if m.c != 0 else SurdSum.rational(
            Fraction(m.a, m.d)
        )
    if pre:
        m = _continuant_map(pre)
        x = m(x)
    return x


def cf_value(seq, side: str, digit_offset: int = 0) -> SurdSum:
    """Continued fraction value read off a symbolic sequence.

    side='positive': [x_0; x_1, x_2, ...] (the forward value, >= 1 when
    digits are >= 1).  side='negative': [0; x_-1, x_-2, ...] in (0, 1).
    ``digit_offset`` maps letters to digits (digit = letter + offset).
    """
    if side == "positive":
        anchor = max(seq.core_span[1], 1)
        pre = tuple(seq.symbol_at(p) + digit_offset for p in range(0, anchor))
        per = tuple(
            seq.symbol_at(anchor + i) + digit_offset for i in range(len(seq.right))
        )
        return cf_value_digits(pre, per)
    if side == "negative":
        anchor = min(seq.core_start, 0)
        digits = [0]
        digits += [seq.symbol_at(p) + digit_offset for p in range(-1, anchor - 1, -1)]
        per = tuple(
            seq.symbol_at(anchor - 1 - i) + digit_offset for i in range(len(seq.left))
        )
        return cf_value_digits(tuple(digits), per)
    raise InputError("side must be 'positive' or 'negative'")


# ---------------------------------------------------------------------------
# Limit geometries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitGeometryApprox:
    """Stage-n renormalized inverse branch composition along a past word.

    ``map`` is B(theta^n) . f_{theta^n} as an exact Moebius map of the base
    interval of the word's last letter; ``theta_interval`` is I(theta^n),
    whose length is the Proposition's contraction scale.
    """

    word: tuple[int, ...]
    stage: int
    map: MoebiusMap
    domain: Interval
    theta_interval: Interval

    @property
    def scale(self) -> Fraction:
        return self.theta_interval[1] - self.theta_interval[0]

    def eval(self, x) -> Fraction:
        return self.map(Fraction(x))

    def sample_sup_distance(self, other: "LimitGeometryApprox", samples: int = 33) -> Fraction:
        """max |self - other| over an even rational grid of the domain."""
        lo, hi = self.domain
        best = Fraction(0)
        for i in range(samples):
            x = lo + (hi - lo) * Fraction(i, samples - 1)
            best = max(best, abs(self.eval(x) - other.eval(x)))
        return best


def limit_geometry(K: CantorPresentation, theta_word: WordLike, stage: int) -> LimitGeometryApprox:
    """k_n for the past word theta^n = (theta_-n, ..., theta_0).

    Requires stage + 1 <= len(theta_word); uses the last stage+1 letters.
    All branches along the word must be Moebius/affine (exact path).
    """
    w = _word(theta_word)
    if stage < 0 or stage + 1 > len(w):
        raise InputError("stage must satisfy 0 <= stage <= len(word) - 1")
    w = w[len(w) - stage - 1:]
    from .symbolic import is_admissible

    if not is_admissible(w, K.matrix):
        raise InputError(f"inadmissible theta word {w}")
    comp = MoebiusMap.identity()
    for a, b in zip(w, w[1:]):
        m = K.branch(a, b).inverse_map
        if not isinstance(m, MoebiusMap):
            raise ExactArithmeticError("limit geometry needs Moebius/affine branches")
        comp = comp.compose(m)
    # comp = f_{theta^n}: I(theta_0) -> I(theta^n)  (theta_0 = last letter)
    domain = K.base[w[-1]]
    theta_iv = comp.map_interval(*domain)
    dlo, dhi = domain
    tlo, thi = theta_iv
    scale = (dhi - dlo) / (thi - tlo)
    if comp.orientation > 0:
        norm = MoebiusMap.affine(scale, dlo - scale * tlo)
    else:
        norm = MoebiusMap.affine(-scale, dlo + scale * thi)
    return LimitGeometryApprox(w, stage, norm.compose(comp), domain, theta_iv)


# ---------------------------------------------------------------------------
# Extreme points
# ---------------------------------------------------------------------------


def extreme_sequence(K: CantorPresentation, side: str) -> tuple[tuple[int, ...], tuple[int, ...], SurdSum]:
    """(preperiod, period, exact value) of the symbolic address of sup K or
    inf K, found by greedy endpoint comparison (ties between distinct
    letters are rejected)."""
    if side not in ("sup", "inf"):
        raise InputError("side must be 'sup' or 'inf'")
    want_max = side == "sup"
    # initial letter: extreme base interval endpoint
    if want_max:
        start = max(K.letters, key=lambda a: K.base[a][1])
    else:
        start = min(K.letters, key=lambda a: K.base[a][0])
    # state: (letter, want_max); transition via branch orientation
    path = [(start, want_max)]
    seen = {path[0]: 0}
    while True:
        a, wm = path[-1]
        succ = K.matrix.successors[a]

        def endpoint(b):
            dom = K.branch_domain(a, b)
            return dom[1] if wm else dom[0]

        vals = [endpoint(b) for b in succ]
        target = max(vals) if wm else min(vals)
        winners = [b for b, v in zip(succ, vals) if v == target]
        if len(winners) > 1:
            raise InputError("extreme point is not determined by interval endpoints")
        b = winners[0]
        orient = K.branch(a, b).inverse_map.orientation
        nxt = (b, wm if orient > 0 else not wm)
        if nxt in seen:
            i = seen[nxt]
            letters = [s for s, _ in path]
            pre, per = tuple(letters[:i]), tuple(letters[i:])
            value = _periodic_point_value(K, pre, per)
            return pre, per, value
        seen[nxt] = len(path)
        path.append(nxt)


def _periodic_point_value(K: CantorPresentation, pre: tuple[int, ...], per: tuple[int, ...]) -> SurdSum:
    """Exact coordinate of the point with address pre + per^infinity."""
    comp = MoebiusMap.identity()
    word = per + (per[0],)
    for a, b in zip(word, word[1:]):
        m = K.branch(a, b).inverse_map
        if not isinstance(m, MoebiusMap):
            raise ExactArithmeticError("exact point values need Moebius/affine branches")
        comp = comp.compose(m)
    x = _moebius_fixed_point_in(comp, K.base[per[0]])
    if pre:
        word = pre + (per[0],)
        for a, b in zip(reversed(word[:-1]), reversed(word[1:])):
            x = K.branch(a, b).inverse_map(x)
    return x


def _moebius_fixed_point_in(m: MoebiusMap, interval: Interval) -> SurdSum:
    """The fixed point of a contracting Moebius map inside its interval."""
    if m.c == 0:
        slope = m.a / m.d
        x = Fraction(m.b, m.d) / (1 - slope)
        return SurdSum.rational(x)
    disc = (m.a - m.d) ** 2 + 4 * m.b * m.c
    root = SurdSum.sqrt(disc)
    lo, hi = interval
    for sign in (1, -1):
        x = (SurdSum.rational(m.a - m.d) + root * sign) / (2 * m.c)
        if SurdSum.rational(lo) <= x <= SurdSum.rational(hi):
            return x
    raise ExactArithmeticError("no fixed point inside the expected interval")


# ---------------------------------------------------------------------------
# Named presets
# ---------------------------------------------------------------------------


def preset(name: str) -> CantorPresentation:
    """Resolve a preset name: 'c2'..'c9', 'kalpha:<fraction>', 'middle-third'."""
    if name == "middle-third":
        return middle_third_cantor()
    if name.startswith("kalpha:"):
        return k_alpha_cantor(Fraction(name.split(":", 1)[1]))
    if name.startswith("c") and name[1:].isdigit():
        return continued_fraction_cantor(int(name[1:]))
    raise InputError(f"unknown preset {name!r}")
