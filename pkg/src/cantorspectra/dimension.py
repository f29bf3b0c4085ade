"""Hausdorff/box dimension bounds from pressure-type sums over cylinders.

For a depth-n Markov partition with certified per-cylinder bounds
lam <= |(psi^n)'| <= Lam, the exponents solving

    sum Lam^(-alpha) = C      and      sum lam^(-beta) = 1

bracket the Hausdorff and upper box dimensions: HD(K) >= alpha_n and
d(K) <= beta_n.  The per-cylinder bounds are exact rationals for affine
and Moebius branches (endpoint evaluation of the composite derivative);
piecewise-affine branches fall back to certified chain-rule enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cantor import CantorPresentation, MoebiusMap, remove_word
from .errors import EmptySubshiftError, InputError, OutOfRangeError
from .symbolic import WordLike, _word

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class CylinderStats:
    word: tuple[int, ...]
    lam: Fraction   # certified inf of |(psi^n)'| on the cylinder
    Lam: Fraction   # certified sup


@dataclass(frozen=True)
class PartitionStats:
    """Per-cylinder derivative bounds at one depth, plus global constants."""

    depth: int
    cylinders: tuple[CylinderStats, ...]
    min_expansion: Fraction          # lambda = inf |psi'| > 1 over all branches

    def __post_init__(self):
        if not self.cylinders:
            raise InputError("no cylinders at this depth")
        if self.min_expansion <= 1:
            raise InputError("expansion bound must exceed 1")
        floor = self.min_expansion**self.depth
        for c in self.cylinders:
            if not 1 < floor <= c.lam <= c.Lam:
                raise InputError(f"inconsistent bounds on cylinder {c.word}")

    @property
    def distortion(self) -> Fraction:
        """Least a with Lam <= a * lam across this depth's cylinders."""
        return max(c.Lam / c.lam for c in self.cylinders)

    @property
    def sup_lam(self) -> Fraction:
        """A_n = sup over cylinders of lam."""
        return max(c.lam for c in self.cylinders)

    @property
    def inf_lam(self) -> Fraction:
        """B_n = inf over cylinders of lam."""
        return min(c.lam for c in self.cylinders)

    def weights(self, which: str) -> list[Fraction]:
        if which == "lower":
            return [c.lam for c in self.cylinders]
        if which == "upper":
            return [c.Lam for c in self.cylinders]
        raise InputError("weights must be 'lower' or 'upper'")


def derivative_bounds(K: CantorPresentation, n: int) -> PartitionStats:
    """Certified inf/sup of |(psi^n)'| per depth-n cylinder.

    On the cylinder of the length-n word w, psi^n maps each one-letter
    extension w.b onto the base interval of b; the derivative is the
    reciprocal of the composite inverse-branch derivative, evaluated
    exactly at the endpoints for Moebius chains.
    """
    if n < 1:
        raise InputError("depth must be >= 1")
    all_moebius = all(
        isinstance(br.inverse_map, MoebiusMap) for br in K.branches.values()
    )
    stats: dict[tuple[int, ...], list[Fraction]] = {}
    if all_moebius:
        # words of length n+1 = w . b, composite built by left extension
        level = [((b,), MoebiusMap.identity()) for b in K.letters]
        for _ in range(n):
            nxt = []
            for word, comp in level:
                first = word[0]
                for a in K.matrix.predecessors[first]:
                    nxt.append(((a,) + word, K.branch(a, first).inverse_map.compose(comp)))
            level = nxt
        for word, comp in level:
            w, b = word[:-1], word[-1]
            lo, hi = K.base[b]
            dmin, dmax = comp.derivative_range(lo, hi)
            lam_ext = 1 / dmax
            Lam_ext = 1 / dmin
            cur = stats.get(w)
            if cur is None:
                stats[w] = [lam_ext, Lam_ext]
            else:
                cur[0] = min(cur[0], lam_ext)
                cur[1] = max(cur[1], Lam_ext)
    else:
        # chain-rule enclosure: per-step derivative ranges on the running
        # interval, multiplied; certified but not endpoint-tight
        level2 = [((b,), K.base[b], (Fraction(1), Fraction(1))) for b in K.letters]
        for _ in range(n):
            nxt = []
            for word, iv, (dmin, dmax) in level2:
                first = word[0]
                for a in K.matrix.predecessors[first]:
                    m = K.branch(a, first).inverse_map
                    smin, smax = m.derivative_range(*iv)
                    nxt.append((
                        (a,) + word,
                        m.map_interval(*iv),
                        (dmin * smin, dmax * smax),
                    ))
            level2 = nxt
        for word, _, (dmin, dmax) in level2:
            w = word[:-1]
            lam_ext = 1 / dmax
            Lam_ext = 1 / dmin
            cur = stats.get(w)
            if cur is None:
                stats[w] = [lam_ext, Lam_ext]
            else:
                cur[0] = min(cur[0], lam_ext)
                cur[1] = max(cur[1], Lam_ext)
    cylinders = tuple(
        CylinderStats(w, lam, Lam) for w, (lam, Lam) in sorted(stats.items())
    )
    return PartitionStats(n, cylinders, K.min_expansion)


def _log(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def pressure_root(bases: Sequence[Fraction], C, tol: float = DEFAULT_TOL) -> float:
    """Unique t >= 0 with sum(base**-t) = C, by monotone bisection.

    The map t -> sum is strictly decreasing (all bases > 1), so the root is
    bracketed and bisection is certified down to the tolerance, up to
    floating-point evaluation of exp/log.
    """
    if not bases:
        raise InputError("empty weight list")
    C = Fraction(C)
    if C <= 0:
        raise InputError("pressure constant must be positive")
    if any(b <= 1 for b in bases):
        raise InputError("weight bases must exceed 1")
    if C > len(bases):
        raise OutOfRangeError(
            f"sum at t=0 is {len(bases)} < C={C}; root would be negative"
        )
    if C == len(bases):
        return 0.0
    logs = [_log(b) for b in bases]
    target = float(C)

    def total(t: float) -> float:
        return math.fsum(math.exp(-t * L) for L in logs)

    lo, hi = 0.0, 1.0
    while total(hi) >= target:
        hi *= 2
        if hi > 1e6:
            raise OutOfRangeError("pressure root exceeds 1e6")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            break
        if total(mid) >= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_pressure(stats: PartitionStats, weights: str, C, tol: float = DEFAULT_TOL) -> float:
    """Root of sum(weight**-t) = C for the chosen weight family."""
    return pressure_root(stats.weights(weights), C, tol)


@dataclass(frozen=True)
class DimensionBounds:
    """alpha_n <= HD(K) and d(K) <= beta_n, with the diagnostic gap bound.

    ``gap_bound`` evaluates (beta_n log a + log C)/(n log lambda - log a)
    with beta_n standing in for the Hausdorff dimension; None when the
    denominator is not positive.
    """

    depth: int
    alpha_n: float
    beta_n: float
    constant_c: Fraction
    gap_bound: Optional[float]
    distortion: Fraction
    min_expansion: Fraction
    cylinder_count: int

    @property
    def width(self) -> float:
        return self.beta_n - self.alpha_n

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "alpha_n": {"value": self.alpha_n, "tag": "bisection(tol)"},
            "beta_n": {"value": self.beta_n, "tag": "bisection(tol)"},
            "constant_c": {"exact": str(self.constant_c)},
            "gap_bound": self.gap_bound,
            "distortion": {"exact": str(self.distortion), "value": float(self.distortion)},
            "min_expansion": {"exact": str(self.min_expansion), "value": float(self.min_expansion)},
            "cylinder_count": self.cylinder_count,
        }


def bounds_from_stats(stats: PartitionStats, C=Fraction(1), tol: float = DEFAULT_TOL) -> DimensionBounds:
    C = Fraction(C)
    alpha = pressure_root(stats.weights("upper"), C, tol)
    beta = pressure_root(stats.weights("lower"), Fraction(1), tol)
    if C >= 1 and alpha > beta + 4 * tol:
        raise AssertionError("alpha exceeded beta with C >= 1; bounds are broken")
    a = stats.distortion
    lam = stats.min_expansion
    denom = stats.depth * _log(lam) - _log(a)
    gap = None
    if denom > 0:
        gap = (beta * _log(a) + math.log(float(C))) / denom
    return DimensionBounds(
        stats.depth, alpha, beta, C, gap, a, lam, len(stats.cylinders)
    )


def dimension_bounds(K: CantorPresentation, n: int, C=Fraction(1), tol: float = DEFAULT_TOL) -> DimensionBounds:
    return bounds_from_stats(derivative_bounds(K, n), C, tol)


@dataclass(frozen=True)
class RemovedCylinderResult:
    """Dimension bounds for K minus one word-cylinder, with the predicted
    drop eps_pred = log(k^m / (k^m - 1)) / (m log lambda)."""

    word: tuple[int, ...]
    eps_pred: float
    empty: bool
    degenerate: bool
    bounds: Optional[DimensionBounds]
    presentation: Optional[CantorPresentation]


def removed_cylinder_bounds(
    K: CantorPresentation, word: WordLike, n: int, C=Fraction(1), tol: float = DEFAULT_TOL
) -> RemovedCylinderResult:
    w = _word(word)
    m = len(w)
    k = K.matrix.n
    lam = K.min_expansion
    km = Fraction(k) ** m
    eps_pred = (_log(km) - _log(km - 1)) / (m * _log(lam))
    try:
        Kb = remove_word(K, w)
    except EmptySubshiftError:
        return RemovedCylinderResult(w, eps_pred, True, True, None, None)
    degenerate = all(len(s) == 1 for s in Kb.matrix.successors)
    bounds = dimension_bounds(Kb, n, C, tol)
    return RemovedCylinderResult(w, eps_pred, False, degenerate, bounds, Kb)
