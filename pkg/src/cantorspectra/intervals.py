"""Finite unions of disjoint closed intervals with exact rational endpoints.

This is the covering currency for Cantor-set covers, Minkowski sums, measure
bounds, and the gap/bridge structure behind thickness.  Touching intervals
are merged, so the components of an :class:`IntervalUnion` are separated by
gaps of strictly positive length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError

Interval = tuple[Fraction, Fraction]


def _merge(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted((Fraction(lo), Fraction(hi)) for lo, hi in intervals)
    out: list[Interval] = []
    for lo, hi in items:
        if hi < lo:
            raise InputError(f"interval with hi < lo: [{lo}, {hi}]")
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


@dataclass(frozen=True)
class IntervalUnion:
    intervals: tuple[Interval, ...]

    @classmethod
    def of(cls, intervals: Iterable[Interval]) -> "IntervalUnion":
        return cls(_merge(intervals))

    @classmethod
    def single(cls, lo, hi) -> "IntervalUnion":
        return cls.of([(Fraction(lo), Fraction(hi))])

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def total_length(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    @property
    def hull(self) -> Optional[Interval]:
        if not self.intervals:
            return None
        return (self.intervals[0][0], self.intervals[-1][1])

    def gaps(self) -> tuple[Interval, ...]:
        """Bounded complementary gaps, in increasing order."""
        out = []
        for (_, hi), (lo2, _) in zip(self.intervals, self.intervals[1:]):
            out.append((hi, lo2))
        return tuple(out)

    def max_gap(self) -> Fraction:
        gaps = self.gaps()
        if not gaps:
            return Fraction(0)
        return max(hi - lo for lo, hi in gaps)

    def contains_point(self, x) -> bool:
        x = Fraction(x)
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def covers_interval(self, lo, hi) -> bool:
        """True iff [lo, hi] is inside a single component (no gap meets it)."""
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise InputError("empty query interval")
        return any(a <= lo and hi <= b for a, b in self.intervals)

    def contains_union(self, other: "IntervalUnion") -> bool:
        """Point-set inclusion other ⊆ self."""
        return all(self.covers_interval(lo, hi) for lo, hi in other.intervals)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion.of(self.intervals + other.intervals)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion.of(out)

    def affine_image(self, a, b) -> "IntervalUnion":
        """Image under x -> a*x + b (a may be negative; a == 0 collapses)."""
        a, b = Fraction(a), Fraction(b)
        if a >= 0:
            return IntervalUnion(tuple((a * lo + b, a * hi + b) for lo, hi in self.intervals))
        return IntervalUnion(tuple(
            (a * hi + b, a * lo + b) for lo, hi in reversed(self.intervals)
        ))

    def translate(self, t) -> "IntervalUnion":
        return self.affine_image(1, t)

    def reflect(self) -> "IntervalUnion":
        return self.affine_image(-1, 0)

    def minkowski_sum(self, other: "IntervalUnion") -> "IntervalUnion":
        pairs = [
            (lo1 + lo2, hi1 + hi2)
            for lo1, hi1 in self.intervals
            for lo2, hi2 in other.intervals
        ]
        if len(pairs) > 10_000:
            return IntervalUnion.of_nondegenerate(pairs)
        return IntervalUnion.of(pairs)

    @classmethod
    def of_nondegenerate(cls, intervals) -> "IntervalUnion":
        """Merge like ``of`` but sort by scaled-integer keys for speed.

        Sound only when every interval is longer than 2**-96 (the key
        granularity): inversions within a key bucket then concern intervals
        that overlap anyway, so the defensive merge below reconstructs the
        exact union.  Falls back to the exact sort when a short interval is
        present.
        """
        scale = 1 << 96
        min_len = Fraction(1, 1 << 80)
        items = []
        for lo, hi in intervals:
            if hi - lo < min_len:
                return cls.of(intervals)
            items.append(((lo.numerator * scale) // lo.denominator, lo, hi))
        items.sort(key=lambda t: t[0])
        out: list[list[Fraction]] = []
        for _, lo, hi in items:
            if out and lo <= out[-1][1]:
                if lo < out[-1][0]:
                    out[-1][0] = lo
                    while len(out) >= 2 and out[-1][0] <= out[-2][1]:
                        out[-2][1] = max(out[-2][1], out[-1][1])
                        out[-2][0] = min(out[-2][0], out[-1][0])
                        out.pop()
                if hi > out[-1][1]:
                    out[-1][1] = hi
            else:
                out.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in out))

    def to_csv(self) -> str:
        """CSV with exact fraction strings and float decimals."""
        lines = ["lo,hi,lo_decimal,hi_decimal"]
        for lo, hi in self.intervals:
            lines.append(f"{lo},{hi},{float(lo):.17g},{float(hi):.17g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ThicknessResult:
    """Newhouse thickness of a finite interval configuration.

    ``value is None`` flags the degenerate single-interval case (no gaps,
    thickness +infinity).  ``witness_gap`` is the gap realizing the minimum.
    """

    value: Optional[Fraction]
    witness_gap: Optional[Interval]
    gap_count: int

    @property
    def is_infinite(self) -> bool:
        return self.value is None


def thickness_of_union(union: IntervalUnion) -> ThicknessResult:
    """min over gaps of min(left bridge, right bridge) / gap length.

    The bridge at a gap endpoint extends to the nearest endpoint of a gap at
    least as long, or to the hull boundary.  For the middle-thirds structure
    (every gap flanked by bridges of its own size) this gives 1 at every
    depth.
    """
    if not union.intervals:
        raise InputError("thickness of empty union")
    gaps = union.gaps()
    if not gaps:
        return ThicknessResult(None, None, 0)
    hull_lo, hull_hi = union.hull
    lengths = [hi - lo for lo, hi in gaps]
    best: Optional[Fraction] = None
    witness: Optional[Interval] = None
    for i, (glo, ghi) in enumerate(gaps):
        glen = lengths[i]
        # left bridge: from glo back to the nearest gap of length >= glen
        left_edge = hull_lo
        for j in range(i - 1, -1, -1):
            if lengths[j] >= glen:
                left_edge = gaps[j][1]
                break
        # right bridge: from ghi forward to the nearest gap of length >= glen
        right_edge = hull_hi
        for j in range(i + 1, len(gaps)):
            if lengths[j] >= glen:
                right_edge = gaps[j][0]
                break
        bridge = min(glo - left_edge, right_edge - ghi)
        ratio = bridge / glen
        if best is None or ratio < best:
            best = ratio
            witness = (glo, ghi)
    return ThicknessResult(best, witness, len(gaps))
