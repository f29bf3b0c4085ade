"""Markov and Lagrange values over subshifts, and the splice operators.

For eventually periodic sequences every sup/limsup here is a finite
computation: locally constant observables are evaluated exactly on the
finitely many distinct windows, and continued-fraction observables get
exact quadratic-surd values on shift classes plus a Fibonacci tail bound
for the remaining (far) shifts, yielding enclosures of controllable width
that collapse to exact values whenever the sup is attained at a finite
shift or on a periodic tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Sequence, Union

from .cantor import cf_value, cf_value_digits
from .errors import InputError, SurgeryError
from .surd import SurdSum
from .symbolic import (
    Cylinder,
    LazySequence,
    SymbolicSequence,
    TransitionMatrix,
    Word,
    WordLike,
    _word,
    connecting_word,
    enumerate_periodic,
    is_admissible,
    max_connection_length,
    metric_distance,
)

# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------


class TableObservable:
    """Locally constant observable: one value per (2m+1)-window."""

    def __init__(self, radius: int, table: dict[Word, Union[int, Fraction, SurdSum]]):
        if radius < 0:
            raise InputError("window radius must be >= 0")
        self.radius = radius
        self.table = {tuple(k): SurdSum.of(v) for k, v in table.items()}
        if not self.table:
            raise InputError("empty observable table")
        width = 2 * radius + 1
        for k in self.table:
            if len(k) != width:
                raise InputError(f"table key {k} does not have width {width}")
        self._span = _max_surd(self.table.values()) - _min_surd(self.table.values())

    @classmethod
    def coordinate(cls, alphabet: int, values: Optional[Sequence] = None) -> "TableObservable":
        """Radius-0 observable reading the letter at position 0."""
        vals = values if values is not None else range(alphabet)
        return cls(0, {(a,): Fraction(v) for a, v in zip(range(alphabet), vals)})

    def exact_value(self, x: SymbolicSequence) -> SurdSum:
        w = x.window(-self.radius, self.radius)
        try:
            return self.table[w]
        except KeyError:
            raise InputError(f"window {w} not covered by the observable table") from None

    def value_at(self, seq, shift: int) -> SurdSum:
        """Exact value at sigma^shift of anything with symbol_at."""
        w = tuple(seq.symbol_at(shift + j) for j in range(-self.radius, self.radius + 1))
        try:
            return self.table[w]
        except KeyError:
            raise InputError(f"window {w} not covered by the observable table") from None

    def enclosure_at(self, seq, shift: int, radius: int) -> tuple[SurdSum, SurdSum]:
        # radius is advisory; the exact window value only needs self.radius
        v = self.value_at(seq, shift)
        return v, v

    def tail_bound(self, agree_radius: int) -> Fraction:
        """|f(x) - f(y)| bound when x, y agree on [-N, N]."""
        if agree_radius >= self.radius:
            return Fraction(0)
        lo, hi = self._span.enclosure(64)
        return max(abs(lo), abs(hi))


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


class CFObservable:
    """f(x) = [x_0; x_1, ...] + [0; x_-1, x_-2, ...] on digit sequences.

    ``digit_offset`` maps letters to digits (digit = letter + offset); use 1
    for alphabets {0..n-1} standing for digits {1..n}.  The modulus of
    continuity is Hoelder with respect to the sequence metric: agreement on
    [-N, N] pins both continued fractions to cylinders of length at most
    1/Fib(N+1)^2.
    """

    def __init__(self, digit_offset: int = 0):
        self.digit_offset = digit_offset

    def exact_value(self, x: SymbolicSequence) -> SurdSum:
        return cf_value(x, "positive", self.digit_offset) + cf_value(
            x, "negative", self.digit_offset
        )

    def value_at(self, seq, shift: int) -> SurdSum:
        if isinstance(seq, SymbolicSequence):
            return self.exact_value(seq.shift(shift))
        raise InputError("exact CF values need an eventually periodic sequence")

    def enclosure_at(self, seq, shift: int, radius: int) -> tuple[SurdSum, SurdSum]:
        """Enclosure from the window [-radius, radius] around the shift."""
        fwd = [seq.symbol_at(shift + j) + self.digit_offset for j in range(radius + 1)]
        bwd = [0] + [
            seq.symbol_at(shift - j) + self.digit_offset for j in range(1, radius + 1)
        ]
        val = SurdSum.of(_finite_cf(fwd)) + SurdSum.of(_finite_cf(bwd))
        err = SurdSum.rational(self.tail_bound(radius))
        return val - err, val + err

    def tail_bound(self, agree_radius: int) -> Fraction:
        f = _fib(agree_radius + 1)
        return Fraction(2, f * f)


def _finite_cf(digits: Sequence[int]) -> Fraction:
    val = Fraction(digits[-1])
    for d in reversed(digits[:-1]):
        if val == 0:
            raise InputError("interior continued fraction digit is 0")
        val = d + 1 / val
    return val


Observable = Union[TableObservable, CFObservable]


def _max_surd(values) -> SurdSum:
    best = None
    for v in values:
        v = SurdSum.of(v)
        if best is None or v > best:
            best = v
    if best is None:
        raise InputError("empty maximum")
    return best


def _min_surd(values) -> SurdSum:
    best = None
    for v in values:
        v = SurdSum.of(v)
        if best is None or v < best:
            best = v
    return best


# ---------------------------------------------------------------------------
# Markov and Lagrange values
# ---------------------------------------------------------------------------


@dataclass
class ValueEnclosure:
    """[lo, hi] certainly containing the requested sup/limsup.

    ``witness_shift`` realizes ``lo`` (a finite shift, or a shift of the
    periodic tail orbit when ``witness_kind`` is 'right-tail'/'left-tail').
    """

    lo: SurdSum
    hi: SurdSum
    witness_shift: int
    witness_kind: str
    achieving_shifts: tuple[int, ...] = ()

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        lo, hi = (self.hi - self.lo).enclosure(96)
        return hi

    def __float__(self) -> float:
        return float(self.lo) if self.exact else float((self.lo + self.hi) / 2)

    def to_json(self) -> dict:
        if self.exact:
            return {"exact": repr(self.lo), "value": float(self.lo)}
        return {"lo": float(self.lo), "hi": float(self.hi)}


DEFAULT_VALUE_TOL = Fraction(1, 2**48)


def _orbit_max(f, y: SymbolicSequence) -> tuple[SurdSum, int]:
    """(max of f over the orbit of a periodic sequence, achieving shift)."""
    p = y.least_period
    best = None
    best_shift = 0
    for n in range(p):
        v = f.exact_value(y.shift(n))
        if best is None or v > best:
            best, best_shift = v, n
    return best, best_shift


def markov_value(
    f, x: SymbolicSequence, tol: Fraction = DEFAULT_VALUE_TOL
) -> ValueEnclosure:
    """sup over all shifts of f, as an enclosure (exact whenever possible).

    For periodic x the orbit is finite and the value exact.  Otherwise the
    finitely many core shifts are evaluated exactly; far shifts approach the
    two periodic tails, and f's tail bound caps their values, so widening
    the explicit window shrinks the enclosure below any tolerance.
    """
    if x.is_periodic:
        val, shift = _orbit_max(f, x)
        return ValueEnclosure(val, val, shift, "shift",
                              _orbit_achievers(f, x, val))
    cs, ce = x.core_span
    if not x.core:
        ce = cs  # empty core: junction at cs
    pl, pr = len(x.left), len(x.right)
    tail_r, _ = _orbit_max(f, x.right_tail_sequence())
    tail_l, _ = _orbit_max(f, x.left_tail_sequence())
    values: dict[int, SurdSum] = {}
    k = 1
    while True:
        lo_n = cs - k * pl
        hi_n = ce + k * pr
        for n in range(lo_n, hi_n):
            if n not in values:
                values[n] = f.exact_value(x.shift(n))
        window_best = _max_surd(values.values())
        lo = _max_surd([window_best, tail_r, tail_l])
        bound = SurdSum.rational(f.tail_bound(min(k * pl, k * pr)))
        hi = _max_surd([lo, tail_r + bound, tail_l + bound])
        if hi == lo or (hi - lo) <= SurdSum.rational(tol):
            achieving = tuple(n for n, v in sorted(values.items()) if v == lo)
            if achieving:
                wshift, wkind = achieving[0], "shift"
            elif tail_r >= tail_l:
                wshift, wkind = 0, "right-tail"
            else:
                wshift, wkind = 0, "left-tail"
            return ValueEnclosure(lo, hi, wshift, wkind, achieving)
        k *= 2


def _orbit_achievers(f, y: SymbolicSequence, val: SurdSum) -> tuple[int, ...]:
    return tuple(
        n for n in range(y.least_period) if f.exact_value(y.shift(n)) == val
    )


def lagrange_value(f, x: SymbolicSequence) -> ValueEnclosure:
    """limsup along the forward orbit: exactly the maximum of f over the
    shift-orbit of the right periodic tail (the forward orbit accumulates
    there and f is continuous)."""
    y = x.right_tail_sequence()
    val, shift = _orbit_max(f, y)
    return ValueEnclosure(val, val, shift, "right-tail", _orbit_achievers(f, y, val))


def classical_lagrange(
    digits: Union[SymbolicSequence, tuple[Sequence[int], Sequence[int]]],
    digit_offset: int = 0,
) -> ValueEnclosure:
    """k(alpha) = limsup (alpha_n + beta_n) for one-sided eventually
    periodic digit strings, exact as a quadratic surd.

    Accepts either a SymbolicSequence (its right data is used) or a
    (preperiod, period) pair of digit tuples.
    """
    if isinstance(digits, SymbolicSequence):
        x = digits
    else:
        pre, per = digits
        pre, per = tuple(pre), tuple(per)
        if not per:
            raise InputError("period must be nonempty")
        x = SymbolicSequence(per, pre, per, 0)
    return lagrange_value(CFObservable(digit_offset), x)


# ---------------------------------------------------------------------------
# Spectrum scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumSample:
    value: ValueEnclosure
    witness: SymbolicSequence
    period: int
    kind: str = "markov"

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "witness": self.witness.to_json(),
            "period": self.period,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class ScanResult:
    samples: tuple[SpectrumSample, ...]
    gaps: tuple[SurdSum, ...]          # successive differences of the values

    @property
    def values(self) -> tuple[SurdSum, ...]:
        return tuple(s.value.lo for s in self.samples)

    def to_csv(self) -> str:
        lines = ["value_lo,value_hi,period,witness"]
        for s in self.samples:
            w = "".join(map(str, s.witness.right))
            lines.append(
                f"{float(s.value.lo):.17g},{float(s.value.hi):.17g},{s.period},{w}"
            )
        return "\n".join(lines) + "\n"


def spectrum_scan(f, matrix: TransitionMatrix, max_period: int) -> ScanResult:
    """Markov values of every periodic orbit of period <= max_period,
    deduplicated by exact equality and sorted increasingly.

    Each value lies in the Markov spectrum, and (witnessed by eventually
    periodic points) in the Lagrange spectrum as well.
    """
    raw: list[SpectrumSample] = []
    for orbit in enumerate_periodic(matrix, max_period):
        v = markov_value(f, orbit)
        raw.append(SpectrumSample(v, orbit, orbit.least_period))
    raw.sort(key=cmp_to_key(lambda a, b: _surd_cmp(a.value.lo, b.value.lo)))
    dedup: list[SpectrumSample] = []
    for s in raw:
        if dedup and dedup[-1].value.lo == s.value.lo:
            continue
        dedup.append(s)
    gaps = tuple(
        b.value.lo - a.value.lo for a, b in zip(dedup, dedup[1:])
    )
    return ScanResult(tuple(dedup), gaps)


def _surd_cmp(a: SurdSum, b: SurdSum) -> int:
    return (a - b).sign()


# ---------------------------------------------------------------------------
# Surgery contexts and the splice operator A
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurgeryContext:
    """Fixed data for splicing the block beta = e alpha f into sequences
    of a centered cylinder.

    alpha = (left_word^k) core (right_word^k) with its designated zero
    letter at index alpha_zero; for a periodic maximizer alpha is just
    word^k and the sup is only required to land somewhere inside alpha.
    """

    matrix: TransitionMatrix
    cylinder: Cylinder
    alpha: Word
    alpha_zero: int
    e: Word
    f: Word
    k: int
    periodic_max: bool

    @property
    def beta(self) -> Word:
        return self.e + self.alpha + self.f

    def alpha_positions(self) -> range:
        """Positions of the alpha block inside A(x)."""
        return range(-self.alpha_zero, -self.alpha_zero + len(self.alpha))


def _default_k(matrix: TransitionMatrix) -> int:
    return max_connection_length(matrix) + 1


def build_surgery_context(
    matrix: TransitionMatrix,
    d_word: WordLike,
    left_word: WordLike,
    core: WordLike,
    core_zero: int,
    right_word: WordLike,
    k: Optional[int] = None,
) -> SurgeryContext:
    """Context for a non-periodic maximizer with past period ``left_word``,
    core ``core`` (zero position at index core_zero), future period
    ``right_word``.  ``d_word`` is the centered cylinder the inputs x must
    lie in."""
    left, core_w, right = _word(left_word), _word(core), _word(right_word)
    d = _word(d_word)
    if not core_w:
        raise InputError("core must be nonempty (it carries the zero position)")
    if not (0 <= core_zero < len(core_w)):
        raise InputError("core_zero out of range")
    if k is None:
        k = _default_k(matrix)
    if k < 1:
        raise InputError("k must be >= 1")
    for w, what in ((left, "left period"), (right, "right period")):
        if not w:
            raise InputError(f"{what} must be nonempty")
        if not is_admissible(w + w, matrix):
            raise SurgeryError(f"{what} {w} is not an admissible cycle")
    alpha = left * k + core_w + right * k
    if not is_admissible(alpha, matrix):
        raise SurgeryError("alpha block is not admissible at a junction")
    alpha_zero = k * len(left) + core_zero
    return _finish_context(matrix, d, alpha, alpha_zero, k, periodic_max=False)


def build_periodic_surgery_context(
    matrix: TransitionMatrix,
    d_word: WordLike,
    period_word: WordLike,
    k: Optional[int] = None,
) -> SurgeryContext:
    """Context for a periodic maximizer: alpha = period_word^k."""
    per = _word(period_word)
    d = _word(d_word)
    if not per:
        raise InputError("period word must be nonempty")
    if k is None:
        k = _default_k(matrix)
    if not is_admissible(per + per, matrix):
        raise SurgeryError(f"period {per} is not an admissible cycle")
    alpha = per * k
    return _finish_context(matrix, d, alpha, 0, k, periodic_max=True)


def _finish_context(
    matrix: TransitionMatrix,
    d: Word,
    alpha: Word,
    alpha_zero: int,
    k: int,
    periodic_max: bool,
) -> SurgeryContext:
    if len(d) % 2 != 1:
        raise InputError("cylinder word must have odd width 2s+1")
    if not is_admissible(d, matrix):
        raise SurgeryError(f"cylinder word {d} is not admissible")
    cyl = Cylinder.centered(d)
    center = len(d) // 2
    d0, d1 = d[center], d[center + 1] if center + 1 < len(d) else None
    if d1 is None:
        # width-1 cylinder: the letter after x_0 is unconstrained; use d0
        # itself as the worst case only if allowed, else refuse
        raise InputError("cylinder must have width >= 3 so that x_1 is pinned")
    e = connecting_word(matrix, d0, alpha[0]).symbols
    f = connecting_word(matrix, alpha[-1], d1).symbols
    if not (len(e) < len(alpha) and len(f) < len(alpha)):
        raise SurgeryError("connector length must stay below |alpha|")
    return SurgeryContext(matrix, cyl, alpha, alpha_zero, e, f, k, periodic_max)


def surgery_A(x: SymbolicSequence, ctx: SurgeryContext) -> SymbolicSequence:
    """Splice: A(x) = (..., x_-1, x_0, e, alpha, f, x_1, x_2, ...) with the
    alpha block's designated letter at position 0.  Tails of x are kept."""
    if not ctx.cylinder.contains(x):
        raise SurgeryError(
            f"x does not lie in the cylinder {ctx.cylinder.word}", position=0
        )
    pos0 = -ctx.alpha_zero - len(ctx.e) - 1  # position of x_0 inside A(x)
    lcut = min(x.core_start, 0)
    q = len(x.left)
    left = tuple(x.symbol_at(lcut - q + i) for i in range(q))
    prefix = x.window(lcut, 0)
    rcut = max(x.core_span[1] - 1, 1)
    p = len(x.right)
    right = tuple(x.symbol_at(rcut + 1 + i) for i in range(p))
    suffix = x.window(1, rcut)
    core = prefix + ctx.e + ctx.alpha + ctx.f + suffix
    out = SymbolicSequence(left, core, right, pos0 + lcut)
    _check_splice(out, ctx.matrix, pos0)
    return out


def _check_splice(seq: SymbolicSequence, matrix: TransitionMatrix, lo: int) -> None:
    span = seq.core_span
    for p in range(span[0] - 1, span[1] + 1):
        if not matrix.allows(seq.symbol_at(p), seq.symbol_at(p + 1)):
            raise SurgeryError(
                f"inadmissible junction at position {p}", position=p
            )


# ---------------------------------------------------------------------------
# Identity checks: Eq-(1)-style sup and Eq-(5)-style limsup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupIdentityReport:
    holds: bool
    sup: ValueEnclosure
    value_at_zero: SurdSum
    achieving_shifts: tuple[int, ...]
    periodic_max: bool
    achieving_in_alpha: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "sup": self.sup.to_json(),
            "value_at_zero": float(self.value_at_zero),
            "achieving_shifts": list(self.achieving_shifts),
            "periodic_max": self.periodic_max,
            "achieving_in_alpha": list(self.achieving_in_alpha),
        }


def verify_sup_identity(f, x: SymbolicSequence, ctx: SurgeryContext) -> SupIdentityReport:
    """Check sup_n f(sigma^n A(x)) against f(A(x)).

    Non-periodic contexts require the sup to be attained exactly once, at
    shift 0 (the alpha block's zero letter), with both periodic tails
    strictly below it; that is the unique-maximizer mechanism behind the
    identity, and it is what a precondition violator (x passing through the
    maximal window) breaks.  Periodic contexts only require attainment
    inside the alpha block and report the achieving positions p_i.
    """
    ax = surgery_A(x, ctx)
    sup = markov_value(f, ax)
    v0 = f.exact_value(ax)
    in_alpha = tuple(
        n for n in sup.achieving_shifts if n in ctx.alpha_positions()
    )
    tails_max = _max_surd(
        [_orbit_max(f, ax.right_tail_sequence())[0],
         _orbit_max(f, ax.left_tail_sequence())[0]]
    )
    if ctx.periodic_max:
        holds = sup.exact and bool(in_alpha) and sup.lo == f.exact_value(
            ax.shift(in_alpha[0])
        )
    else:
        holds = (
            sup.exact
            and sup.lo == v0
            and sup.achieving_shifts == (0,)
            and tails_max < sup.lo
        )
    return SupIdentityReport(holds, sup, v0, sup.achieving_shifts,
                             ctx.periodic_max, in_alpha)


class SurgeryA1(LazySequence):
    """The non-eventually-periodic splice A_1(x).

    Bi-infinite block structure ... B_3 B_2 B_1 | B_1 B_2 B_3 ... where
    B_i = (x_1 ... x_i, E_i, x_-i ... x_0, beta), with E_i the shortest
    connector from x_i to x_-i and beta = e alpha f as in A.  Position 0 is
    the first letter of the right-hand B_1.
    """

    def __init__(self, x: SymbolicSequence, ctx: SurgeryContext):
        super().__init__()
        if not ctx.cylinder.contains(x):
            raise SurgeryError("x does not lie in the cylinder", position=0)
        self.x = x
        self.ctx = ctx
        self.beta = ctx.beta
        self._blocks: list[Word] = []
        self._cum: list[int] = [0]

    def _block(self, i: int) -> Word:
        while len(self._blocks) < i:
            j = len(self._blocks) + 1
            e_j = connecting_word(self.ctx.matrix, self.x.symbol_at(j),
                                  self.x.symbol_at(-j)).symbols
            if len(e_j) >= len(self.ctx.alpha):
                raise SurgeryError("connector E_i at least as long as alpha")
            content = (
                tuple(self.x.symbol_at(t) for t in range(1, j + 1))
                + e_j
                + tuple(self.x.symbol_at(t) for t in range(-j, 1))
                + self.beta
            )
            self._blocks.append(content)
            self._cum.append(self._cum[-1] + len(content))
        return self._blocks[i - 1]

    def _locate(self, offset: int) -> tuple[int, int]:
        """(block index i >= 1, offset within block) for offset >= 0 counted
        from the central junction."""
        i = 1
        while True:
            self._block(i)
            if offset < self._cum[i]:
                return i, offset - self._cum[i - 1]
            i += 1

    def _compute(self, p: int) -> int:
        if p >= 0:
            i, off = self._locate(p)
            return self._block(i)[off]
        i, off = self._locate(-p - 1)
        blk = self._block(i)
        return blk[len(blk) - 1 - off]

    def beta_center(self, j: int) -> int:
        """Position (>= 0) of the alpha block's zero letter inside the j-th
        right-hand block."""
        if j < 1:
            raise InputError("block index must be >= 1")
        self._block(j)
        start = self._cum[j - 1]
        blk_prefix = len(self._block(j)) - len(self.beta)
        return start + blk_prefix + len(self.ctx.e) + self.ctx.alpha_zero

    def beta_center_left(self, j: int) -> int:
        """Position (< 0) of the alpha block's zero letter inside the j-th
        left-hand block (mirror of beta_center)."""
        within = self.beta_center(j) - self._cum[j - 1]
        return -self._cum[j] + within


def surgery_A1(x: SymbolicSequence, ctx: SurgeryContext) -> SurgeryA1:
    return SurgeryA1(x, ctx)


def surgery_A1_prefix(x: SymbolicSequence, ctx: SurgeryContext, horizon: int) -> Word:
    """Window of A_1(x) covering positions [-horizon, horizon]."""
    if horizon < 0:
        raise InputError("horizon must be >= 0")
    return surgery_A1(x, ctx).window(-horizon, horizon)


def _agreement_radius(seq_a, seq_b, max_radius: int) -> int:
    """Largest r <= max_radius with agreement on [-r, r] (seq duck-typed)."""
    r = -1
    while r + 1 <= max_radius:
        t = r + 1
        if seq_a.symbol_at(t) != seq_b.symbol_at(t) or seq_a.symbol_at(-t) != seq_b.symbol_at(-t):
            break
        r = t
    return r


def _metric_tail_mass(radius: int) -> Fraction:
    """Exact bound for d(a, b) when a, b agree on [-radius, radius]."""
    if radius < 0:
        return Fraction(5, 6)  # total mass of the weight series
    return Fraction(1, 3 * 4**radius)


@dataclass(frozen=True)
class LimsupRow:
    block: int
    center: int
    value_lo: SurdSum
    value_hi: SurdSum
    agreement_radius: int
    distance_bound: Fraction
    value_error_bound: Fraction
    exact_match: bool


@dataclass(frozen=True)
class LimsupIdentityReport:
    holds: bool
    target: SurdSum
    rows: tuple[LimsupRow, ...]
    nonbeta_max: Optional[SurdSum]
    nonbeta_strictly_below: Optional[bool]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "target": float(self.target),
            "rows": [
                {
                    "block": r.block,
                    "center": r.center,
                    "value": [float(r.value_lo), float(r.value_hi)],
                    "agreement_radius": r.agreement_radius,
                    "distance_bound": float(r.distance_bound),
                    "value_error_bound": float(r.value_error_bound),
                    "exact_match": r.exact_match,
                }
                for r in self.rows
            ],
            "nonbeta_max": None if self.nonbeta_max is None else float(self.nonbeta_max),
            "nonbeta_strictly_below": self.nonbeta_strictly_below,
        }


def verify_limsup_identity(
    f,
    x: SymbolicSequence,
    ctx: SurgeryContext,
    blocks: int = 4,
) -> LimsupIdentityReport:
    """Check limsup_n f(sigma^n A_1(x)) against the A-splice target.

    The limsup is approached along the beta-block centers; the j-th such
    shift of A_1(x) agrees with A(x) on a radius growing with j, so the
    values converge with the observable's tail bound as a certified
    envelope.  Locally constant observables must match exactly once the
    agreement radius clears their window; enclosure-valued observables must
    show a monotonically shrinking certified envelope.
    """
    ax = surgery_A(x, ctx)
    if ctx.periodic_max:
        sup = markov_value(f, ax)
        target = sup.lo
        target_shift = sup.achieving_shifts[0] if sup.achieving_shifts else 0
    else:
        target = f.exact_value(ax)
        target_shift = 0
    a1 = surgery_A1(x, ctx)
    rows = []
    ok = True
    for j in range(1, blocks + 1):
        c = a1.beta_center(j) + target_shift

        class _Shifted:
            def __init__(self, base, s):
                self.base, self.s = base, s

            def symbol_at(self, t):
                return self.base.symbol_at(t + self.s)

        shifted = _Shifted(a1, c)
        ax_t = ax.shift(target_shift)
        max_r = max(2 * j + len(ctx.beta) + 4, 8)
        r = _agreement_radius(shifted, ax_t, max_r)
        err = f.tail_bound(max(r, 0))
        vlo, vhi = f.enclosure_at(a1, c, max(r, 0))
        exact_match = vlo == vhi == target
        # certified: |value - target| <= err
        if not (
            vlo - SurdSum.rational(err) <= target <= vhi + SurdSum.rational(err)
        ):
            ok = False
        rows.append(
            LimsupRow(j, c, vlo, vhi, r, _metric_tail_mass(r), err, exact_match)
        )
    # convergence requirement
    if isinstance(f, TableObservable):
        if not rows[-1].exact_match:
            ok = False
        nonbeta_vals = []
        horizon = a1.beta_center(blocks) + len(ctx.beta)
        centers = {a1.beta_center(j) + target_shift for j in range(1, blocks + 2)}
        centers |= {a1.beta_center_left(j) + target_shift for j in range(1, blocks + 2)}
        for pshift in range(-horizon, horizon + 1):
            if pshift in centers:
                continue
            nonbeta_vals.append(f.value_at(a1, pshift))
        nonbeta_max = _max_surd(nonbeta_vals)
        nonbeta_strict = nonbeta_max < target
        return LimsupIdentityReport(ok, target, tuple(rows), nonbeta_max, nonbeta_strict)
    # enclosure path: the j-th beta-center window agrees with A(x) out to a
    # radius of at least j + 1 + c0 (the beta block plus the adjacent x-runs
    # shared with the next block), so the certified error envelope
    # tail_bound(j + 1 + c0) is monotone geometric; the observed radii must
    # respect the guarantee
    c0 = min(
        ctx.alpha_zero + len(ctx.e),
        len(ctx.alpha) - 1 - ctx.alpha_zero + len(ctx.f),
    )
    for r in rows:
        if r.agreement_radius < max(r.block + 1 + c0 - abs(target_shift), 1):
            ok = False
    return LimsupIdentityReport(ok, target, tuple(rows), None, None)


# ---------------------------------------------------------------------------
# The Lagrange-inside-Markov law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LSubsetMEntry:
    witness: SymbolicSequence
    lagrange: ValueEnclosure
    markov_of_tail_point: SurdSum
    tail_point_dominates_orbit: bool
    equal: bool


@dataclass(frozen=True)
class LSubsetMReport:
    entries: tuple[LSubsetMEntry, ...]

    @property
    def all_pass(self) -> bool:
        return all(e.equal and e.tail_point_dominates_orbit for e in self.entries)

    @property
    def failures(self) -> tuple[LSubsetMEntry, ...]:
        return tuple(e for e in self.entries if not (e.equal and e.tail_point_dominates_orbit))


# ---------------------------------------------------------------------------
# Randomized identity suite (used by the test suite and the CLI)
# ---------------------------------------------------------------------------


def _random_cycle(rng, matrix: TransitionMatrix, max_len: int = 2) -> Word:
    for _ in range(64):
        length = rng.randint(1, max_len)
        start = rng.randrange(matrix.n)
        w = [start]
        ok = True
        for _ in range(length - 1):
            succ = matrix.successors[w[-1]]
            w.append(succ[rng.randrange(len(succ))])
        if matrix.rows[w[-1]][w[0]]:
            return tuple(w)
    raise InputError("could not sample an admissible cycle")


def _random_through_word(rng, matrix: TransitionMatrix, center: Word) -> SymbolicSequence:
    """Random eventually periodic sequence whose window around 0 is `center`
    (odd length, centered)."""
    wl = _random_cycle(rng, matrix)
    wr = _random_cycle(rng, matrix)
    conn_l = connecting_word(matrix, wl[-1], center[0]).symbols
    conn_r = connecting_word(matrix, center[-1], wr[0]).symbols
    core = conn_l + center + conn_r
    s = len(center) // 2
    core_start = -(len(conn_l) + s)
    return SymbolicSequence(wl, core, wr, core_start)


@dataclass(frozen=True)
class IdentitySuiteReport:
    instances: int
    sup_failures: int
    limsup_failures: int
    violator_failed_as_designed: bool

    @property
    def all_pass(self) -> bool:
        return (
            self.sup_failures == 0
            and self.limsup_failures == 0
            and self.violator_failed_as_designed
        )

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "sup_failures": self.sup_failures,
            "limsup_failures": self.limsup_failures,
            "violator_failed_as_designed": self.violator_failed_as_designed,
            "all_pass": self.all_pass,
        }


def random_identity_suite(seed: int, instances: int, blocks: int = 3) -> IdentitySuiteReport:
    """Randomized check of the sup and limsup splice identities.

    Each instance draws a small irreducible matrix, builds a surgery context
    from random periodic tails and core, equips it with a locally constant
    observable whose strict maximum sits at the alpha block's zero window,
    and draws a random input sequence through the context's cylinder that
    avoids the maximal window.  One constructed precondition violator (the
    maximal window planted inside the input) must fail.
    """
    import random

    rng = random.Random(seed)
    matrices = [
        TransitionMatrix.full_shift(2),
        TransitionMatrix.full_shift(3),
        TransitionMatrix.golden_mean(),
        TransitionMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]]),
    ]
    sup_failures = 0
    limsup_failures = 0
    done = 0
    violator_ok = None
    attempts = 0
    while done < instances and attempts < instances * 60:
        attempts += 1
        matrix = matrices[rng.randrange(len(matrices))]
        try:
            left = _random_cycle(rng, matrix)
            right = _random_cycle(rng, matrix)
            # admissible core joining the two cycles
            conn = connecting_word(matrix, left[-1], right[0]).symbols
            core = conn if conn else None
            if core is None:
                # need a nonempty core carrying the zero position
                mid = rng.randrange(matrix.n)
                c1 = connecting_word(matrix, left[-1], mid).symbols
                c2 = connecting_word(matrix, mid, right[0]).symbols
                core = c1 + (mid,) + c2
            d_center = rng.randrange(matrix.n)
            d0 = connecting_word(matrix, d_center, d_center).symbols
            d_word = (d_center,) + d0 + (d_center,) + d0 + (d_center,)
            if len(d_word) % 2 == 0:
                continue
            ctx = build_surgery_context(
                matrix, d_word, left, core, rng.randrange(len(core)), right,
                k=rng.randint(2, 3),
            )
            radius = 1
            w_max = tuple(
                ctx.alpha[ctx.alpha_zero + t] if 0 <= ctx.alpha_zero + t < len(ctx.alpha)
                else -1
                for t in range(-radius, radius + 1)
            )
            if -1 in w_max:
                continue
            table = {
                w: Fraction(0)
                for w in _all_windows(matrix, radius)
            }
            table[w_max] = Fraction(1)
            f = TableObservable(radius, table)
            x = _random_through_word(rng, matrix, d_word)
            if _contains_window(x, w_max):
                continue
            ax = surgery_A(x, ctx)
            if _window_count(ax, w_max) != 1:
                continue
            # the maximal window must appear in A_1(x) only at beta centers
            # (junction connectors can recreate it by accident, which
            # violates the unique-maximizer precondition)
            a1 = surgery_A1(x, ctx)
            horizon = a1.beta_center(blocks) + len(ctx.beta) + radius
            centers = {a1.beta_center(j) for j in range(1, blocks + 2)}
            centers |= {a1.beta_center_left(j) for j in range(1, blocks + 2)}
            spurious = False
            for p in range(-horizon, horizon + 1):
                if p in centers:
                    continue
                if a1.window(p - radius, p + radius) == w_max:
                    spurious = True
                    break
            if spurious:
                continue
        except (InputError, SurgeryError):
            continue
        rep = verify_sup_identity(f, x, ctx)
        if not rep.holds:
            sup_failures += 1
        rep5 = verify_limsup_identity(f, x, ctx, blocks)
        if not (rep5.holds and rep5.nonbeta_strictly_below):
            limsup_failures += 1
        if violator_ok is None:
            bad_core = x.core + w_max
            try:
                xbad = SymbolicSequence(x.left, bad_core, x.right, x.core_start)
                if ctx.cylinder.contains(xbad) and xbad.is_admissible(matrix):
                    violator_ok = not verify_sup_identity(f, xbad, ctx).holds
            except (InputError, SurgeryError):
                violator_ok = None
        done += 1
    if done < instances:
        raise InputError("instance generation starved; widen the pools")
    return IdentitySuiteReport(done, sup_failures, limsup_failures,
                               bool(violator_ok))


def _all_windows(matrix: TransitionMatrix, radius: int):
    from .symbolic import admissible_words

    return admissible_words(matrix, 2 * radius + 1)


def _contains_window(x: SymbolicSequence, w: Word) -> bool:
    lo = x.core_start - len(x.left) - len(w)
    hi = x.core_span[1] + len(x.right) + len(w)
    return any(
        x.window(p, p + len(w) - 1) == w for p in range(lo, hi + 1)
    )


def _window_count(x: SymbolicSequence, w: Word) -> int:
    lo = x.core_start - len(x.left) - len(w)
    hi = x.core_span[1] + len(x.right) + len(w)
    return sum(
        1 for p in range(lo, hi + 1) if x.window(p, p + len(w) - 1) == w
    )


def check_L_subset_M(f, witnesses: Sequence[SymbolicSequence]) -> LSubsetMReport:
    """For each witness x: the Lagrange value of x equals the Markov value
    of the point y0 on x's right-tail orbit that achieves it, and f(y0)
    dominates f along y0's whole orbit.  Any failure is a bug certificate."""
    entries = []
    for x in witnesses:
        lag = lagrange_value(f, x)
        y = x.right_tail_sequence()
        y0 = y.shift(lag.witness_shift)
        mv = markov_value(f, y0)
        dominates = mv.exact and mv.lo == f.exact_value(y0)
        entries.append(
            LSubsetMEntry(x, lag, mv.lo, dominates, mv.exact and mv.lo == lag.lo)
        )
    return LSubsetMReport(tuple(entries))
