"""Subshifts of finite type: transition matrices, words, bi-infinite sequences.

Bi-infinite sequences are represented as eventually periodic on both sides
(periodic left tail, finite core, periodic right tail).  The representation
is canonicalized (primitive periods, minimal core, maximal left slide of the
junction when the core is empty), which makes equality and hashing decidable
and sup/limsup computations over shifts finite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import (
    BracketUndefinedError,
    EmptySubshiftError,
    InputError,
    NoPathError,
)

Word = tuple[int, ...]
WordLike = Union["FiniteWord", Sequence[int]]


def _word(w: WordLike) -> Word:
    if isinstance(w, FiniteWord):
        return w.symbols
    return tuple(int(s) for s in w)


# ---------------------------------------------------------------------------
# Transition matrices
# ---------------------------------------------------------------------------


class TransitionMatrix:
    """0/1 transition matrix over a finite alphabet {0, ..., n-1}.

    Every letter must occur (each row and each column contains a 1).
    Irreducibility and primitivity are computed properties, never assumed.
    """

    __slots__ = ("rows", "n", "successors", "predecessors", "_cache")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        n = len(rows)
        if n == 0:
            raise InputError("empty alphabet")
        for r in rows:
            if len(r) != n:
                raise InputError("transition matrix must be square")
            for v in r:
                if v not in (0, 1):
                    raise InputError("transition entries must be 0 or 1")
        for i in range(n):
            if not any(rows[i]):
                raise InputError(f"letter {i} has no successor (empty row)")
            if not any(rows[j][i] for j in range(n)):
                raise InputError(f"letter {i} has no predecessor (empty column)")
        self.rows = rows
        self.n = n
        self.successors = tuple(
            tuple(j for j in range(n) if rows[i][j]) for i in range(n)
        )
        self.predecessors = tuple(
            tuple(i for i in range(n) if rows[i][j]) for j in range(n)
        )
        self._cache: dict = {}

    # -- basics ------------------------------------------------------------

    @classmethod
    def full_shift(cls, n: int) -> "TransitionMatrix":
        return cls([[1] * n for _ in range(n)])

    @classmethod
    def golden_mean(cls) -> "TransitionMatrix":
        return cls([[1, 1], [1, 0]])

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def allows(self, i: int, j: int) -> bool:
        self._check_letter(i)
        self._check_letter(j)
        return bool(self.rows[i][j])

    def _check_letter(self, a: int) -> None:
        if not (0 <= a < self.n):
            raise InputError(f"letter {a} outside alphabet of size {self.n}")

    def transpose(self) -> "TransitionMatrix":
        return TransitionMatrix(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)]
        )

    def __eq__(self, other):
        return isinstance(other, TransitionMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"TransitionMatrix({[list(r) for r in self.rows]})"

    # -- exact path counting -------------------------------------------------

    def matrix_power(self, n: int) -> tuple[tuple[int, ...], ...]:
        """B**n with exact (big) integer arithmetic."""
        if n < 0:
            raise InputError("negative matrix power")
        key = ("pow", n)
        if key in self._cache:
            return self._cache[key]
        size = self.n
        result = tuple(
            tuple(1 if i == j else 0 for j in range(size)) for i in range(size)
        )
        base = self.rows
        e = n
        while e:
            if e & 1:
                result = _matmul(result, base)
            e >>= 1
            if e:
                base = _matmul(base, base)
        self._cache[key] = result
        return result

    # -- structure -----------------------------------------------------------

    @property
    def is_irreducible(self) -> bool:
        key = "irr"
        if key not in self._cache:
            fwd = _reachable(self.successors, 0)
            back = _reachable(self.predecessors, 0)
            self._cache[key] = len(fwd) == self.n and len(back) == self.n
        return self._cache[key]

    @property
    def period(self) -> int:
        """gcd of cycle lengths (defined for irreducible matrices)."""
        key = "period"
        if key not in self._cache:
            if not self.is_irreducible:
                raise InputError("period undefined for reducible matrix")
            from math import gcd

            dist = _bfs_levels(self.successors, 0)
            g = 0
            for u in range(self.n):
                for v in self.successors[u]:
                    g = gcd(g, dist[u] + 1 - dist[v])
            self._cache[key] = abs(g)
        return self._cache[key]

    @property
    def is_primitive(self) -> bool:
        return self.is_irreducible and self.period == 1

    def letters_with_infinite_past(self) -> frozenset[int]:
        """Letters reachable from some cycle (extendable to the left)."""
        return self._extendable("past")

    def letters_with_infinite_future(self) -> frozenset[int]:
        """Letters from which some cycle is reachable (extendable right)."""
        return self._extendable("future")

    def _extendable(self, direction: str) -> frozenset[int]:
        key = ("ext", direction)
        if key not in self._cache:
            on_cycle = _cycle_nodes(self.successors)
            graph = self.successors if direction == "past" else self.predecessors
            # past: reachable from a cycle (walk forward from cycle nodes)
            seen = set(on_cycle)
            stack = list(on_cycle)
            while stack:
                u = stack.pop()
                for v in graph[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            self._cache[key] = frozenset(seen)
        return self._cache[key]

    # -- serialization ---------------------------------------------------------

    def to_json(self, labels: Optional[Sequence[str]] = None) -> dict:
        doc = {"alphabet": self.n, "transitions": [list(r) for r in self.rows]}
        if labels is not None:
            doc["labels"] = list(labels)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "TransitionMatrix":
        m = cls(doc["transitions"])
        if doc.get("alphabet") not in (None, m.n):
            raise InputError("alphabet size disagrees with transition matrix")
        return m


def _matmul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _reachable(adj, start):
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _bfs_levels(adj, start):
    from collections import deque

    dist = {start: 0}
    q = deque([start])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def _cycle_nodes(successors) -> frozenset[int]:
    """Nodes lying on some directed cycle (via iterative Tarjan SCC)."""
    n = len(successors)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out = set()
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            u, pi = work[-1]
            if pi == 0:
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                on_stack[u] = True
            advanced = False
            for k in range(pi, len(successors[u])):
                v = successors[u][k]
                if index[v] == -1:
                    work[-1] = (u, k + 1)
                    work.append((v, 0))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == u:
                        break
                if len(comp) > 1 or any(w in successors[w] for w in comp):
                    out.update(comp)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Finite words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteWord:
    """A finite string of letters, optionally certified admissible."""

    symbols: Word

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))

    @classmethod
    def checked(cls, symbols: Sequence[int], matrix: TransitionMatrix) -> "FiniteWord":
        w = cls(tuple(symbols))
        if len(w) == 0:
            raise InputError("empty word cannot be certified")
        if not is_admissible(w, matrix):
            raise InputError(f"word {w.symbols} is not admissible")
        return w

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def concat(self, other: WordLike) -> "FiniteWord":
        return FiniteWord(self.symbols + _word(other))

    def repeat(self, k: int) -> "FiniteWord":
        if k < 1:
            raise InputError("repetition count must be >= 1")
        return FiniteWord(self.symbols * k)


def is_admissible(word: WordLike, matrix: TransitionMatrix) -> bool:
    """True iff all consecutive pairs of the word are allowed."""
    w = _word(word)
    if len(w) == 0:
        raise InputError("admissibility of the empty word is undefined")
    for a in w:
        matrix._check_letter(a)
    return all(matrix.rows[a][b] for a, b in zip(w, w[1:]))


def admissible_words(matrix: TransitionMatrix, length: int) -> Iterator[Word]:
    """All admissible words of the given length, in lexicographic order."""
    if length < 1:
        raise InputError("word length must be >= 1")
    stack: list[Word] = [(a,) for a in reversed(range(matrix.n))]
    while stack:
        w = stack.pop()
        if len(w) == length:
            yield w
            continue
        for b in reversed(matrix.successors[w[-1]]):
            stack.append(w + (b,))


def count_paths(matrix: TransitionMatrix, x: int, y: int, n: int) -> int:
    """Number of admissible strings of length n+1 from x to y: (B**n)[x][y]."""
    matrix._check_letter(x)
    matrix._check_letter(y)
    if n < 0:
        raise InputError("path length must be >= 0")
    return matrix.matrix_power(n)[x][y]


def connecting_word(matrix: TransitionMatrix, x: int, y: int) -> FiniteWord:
    """Shortest admissible interior string w with (x, w..., y) admissible.

    Ties are broken lexicographically.  The returned word may be empty (when
    x -> y is itself allowed).  Raises NoPathError when y is unreachable.
    """
    matrix._check_letter(x)
    matrix._check_letter(y)
    from collections import deque

    # BFS over paths of length >= 1 starting at x; lexicographic neighbor
    # order makes the first shortest path the lexicographically least one.
    parent: dict[int, int] = {}
    q = deque()
    for s in matrix.successors[x]:
        if s == y:
            return FiniteWord(())
        if s not in parent:
            parent[s] = -1
            q.append(s)
    while q:
        u = q.popleft()
        for v in matrix.successors[u]:
            if v == y:
                path = [u]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return FiniteWord(tuple(reversed(path)))
            if v not in parent:
                parent[v] = u
                q.append(v)
    raise NoPathError(f"no admissible path from {x} to {y}")


def min_connection_length(matrix: TransitionMatrix, x: int, y: int) -> int:
    """Least n >= 1 with count_paths(x, y, n) > 0."""
    return len(connecting_word(matrix, x, y)) + 1


def max_connection_length(matrix: TransitionMatrix) -> int:
    """max over letter pairs of the least connecting exponent."""
    return max(
        min_connection_length(matrix, x, y)
        for x in range(matrix.n)
        for y in range(matrix.n)
    )


# ---------------------------------------------------------------------------
# Bi-infinite eventually periodic sequences
# ---------------------------------------------------------------------------


def _primitive(w: Word) -> Word:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w == w[:p] * (n // p):
            return w[:p]
    return w


@dataclass(frozen=True)
class SymbolicSequence:
    """Bi-infinite sequence, periodic to the left and to the right.

    ``core`` occupies positions [core_start, core_start + len(core)); the
    left period repeats to the left of it (its last letter at core_start-1),
    the right period to the right (its first letter at the core's end).
    Instances are canonical: periods primitive, core minimal, and for an
    empty core the junction slid maximally to the left; fully periodic
    sequences are anchored at position 0.
    """

    left: Word
    core: Word
    right: Word
    core_start: int = 0

    def __post_init__(self):
        left = _primitive(tuple(int(s) for s in self.left))
        right = _primitive(tuple(int(s) for s in self.right))
        core = tuple(int(s) for s in self.core)
        start = int(self.core_start)
        if not left or not right:
            raise InputError("periods must be nonempty")
        # absorb core symbols that extend the periodic tails
        changed = True
        while changed:
            changed = False
            while core and core[-1] == right[-1]:
                core = core[:-1]
                right = (right[-1],) + right[:-1]
                changed = True
            while core and core[0] == left[0]:
                core = core[1:]
                left = left[1:] + (left[0],)
                start += 1
                changed = True
        if not core:
            if left == right:
                # fully periodic: anchor the pattern at position 0
                p = len(right)
                word = tuple(right[(k - start) % p] for k in range(p))
                left = right = word
                start = 0
            else:
                # slide the junction maximally to the left
                guard = len(left) * len(right) + len(left) + len(right)
                while left[-1] == right[-1] and guard > 0:
                    right = (right[-1],) + right[:-1]
                    left = (left[-1],) + left[:-1]
                    start -= 1
                    guard -= 1
                if guard == 0:
                    raise AssertionError("junction slide failed to terminate")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "core_start", start)

    # -- constructors --------------------------------------------------------

    @classmethod
    def periodic(cls, word: WordLike) -> "SymbolicSequence":
        w = _word(word)
        if not w:
            raise InputError("periodic word must be nonempty")
        return cls(w, (), w, 0)

    @classmethod
    def eventually_periodic(
        cls, left: WordLike, core: WordLike, right: WordLike, core_start: int = 0
    ) -> "SymbolicSequence":
        return cls(_word(left), _word(core), _word(right), core_start)

    # -- access ----------------------------------------------------------------

    def symbol_at(self, p: int) -> int:
        off = p - self.core_start
        if off < 0:
            return self.left[off % len(self.left)]
        if off < len(self.core):
            return self.core[off]
        return self.right[(off - len(self.core)) % len(self.right)]

    def window(self, lo: int, hi: int) -> Word:
        """Symbols at positions lo..hi inclusive."""
        return tuple(self.symbol_at(p) for p in range(lo, hi + 1))

    @property
    def core_span(self) -> tuple[int, int]:
        """Half-open position range occupied by the core."""
        return (self.core_start, self.core_start + len(self.core))

    @property
    def is_periodic(self) -> bool:
        return not self.core and self.left == self.right

    @property
    def least_period(self) -> Optional[int]:
        return len(self.right) if self.is_periodic else None

    def shift(self, n: int = 1) -> "SymbolicSequence":
        """sigma**n: the sequence k -> self[k + n]."""
        return SymbolicSequence(self.left, self.core, self.right, self.core_start - n)

    def right_tail_sequence(self) -> "SymbolicSequence":
        """The fully periodic sequence carrying this one's right tail,
        aligned so that it agrees with self on the tail positions."""
        start, _ = self.core_span
        anchor = start + len(self.core)
        p = len(self.right)
        word = tuple(self.right[(k - anchor) % p] for k in range(p))
        return SymbolicSequence.periodic(word)

    def left_tail_sequence(self) -> "SymbolicSequence":
        anchor = self.core_start  # left period's last letter at anchor-1
        q = len(self.left)
        word = tuple(self.left[(k - anchor) % q] for k in range(q))
        return SymbolicSequence.periodic(word)

    def is_admissible(self, matrix: TransitionMatrix) -> bool:
        lo = self.core_start - len(self.left) - 1
        hi = self.core_start + len(self.core) + len(self.right)
        return all(
            matrix.allows(self.symbol_at(p), self.symbol_at(p + 1))
            for p in range(lo, hi + 1)
        )

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "left": list(self.left),
            "core": list(self.core),
            "right": list(self.right),
            "offset": self.core_start,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SymbolicSequence":
        return cls(
            tuple(doc["left"]),
            tuple(doc.get("core", ())),
            tuple(doc["right"]),
            int(doc.get("offset", 0)),
        )

    def __repr__(self):
        return (
            f"SymbolicSequence(left={self.left}, core={self.core}, "
            f"right={self.right}, core_start={self.core_start})"
        )


# ---------------------------------------------------------------------------
# Cylinders and lazy sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    """Positions lo..hi (inclusive) fixed to the given word."""

    word: Word
    lo: int
    hi: int

    def __post_init__(self):
        object.__setattr__(self, "word", _word(self.word))
        if self.hi - self.lo + 1 != len(self.word):
            raise InputError("cylinder range does not match word length")
        if not self.word:
            raise InputError("cylinder word must be nonempty")

    @classmethod
    def centered(cls, word: WordLike) -> "Cylinder":
        w = _word(word)
        if len(w) % 2 != 1:
            raise InputError("centered cylinder needs an odd-width word")
        s = len(w) // 2
        return cls(w, -s, s)

    @property
    def is_centered(self) -> bool:
        return self.lo == -self.hi

    def is_nonempty(self, matrix: TransitionMatrix) -> bool:
        """Nonempty as a subset of the two-sided subshift: the word is
        admissible and extendable to a bi-infinite admissible sequence."""
        if not is_admissible(self.word, matrix):
            return False
        return (
            self.word[0] in matrix.letters_with_infinite_past()
            and self.word[-1] in matrix.letters_with_infinite_future()
        )

    def contains(self, x: SymbolicSequence) -> bool:
        return x.window(self.lo, self.hi) == self.word


class LazySequence:
    """Symbol-at-index access for sequences that are not eventually periodic.

    Once a symbol is produced for an index it is memoized, so repeated or
    wider queries can never contradict earlier ones.  ``base`` and
    ``agreement_radius`` optionally record a symbolic sequence this one is
    known to agree with on [-radius, radius].
    """

    def __init__(self, base: Optional[SymbolicSequence] = None,
                 agreement_radius: Optional[int] = None):
        self._memo: dict[int, int] = {}
        self.base = base
        self.agreement_radius = agreement_radius

    def symbol_at(self, i: int) -> int:
        if i not in self._memo:
            self._memo[i] = self._compute(i)
        return self._memo[i]

    def window(self, lo: int, hi: int) -> Word:
        return tuple(self.symbol_at(p) for p in range(lo, hi + 1))

    def _compute(self, i: int) -> int:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Metric and bracket
# ---------------------------------------------------------------------------


def metric_distance(a: SymbolicSequence, b: SymbolicSequence) -> Fraction:
    """d(a, b) = sum over n of 2**-(2|n|+1) * [a_n != b_n], exactly.

    The two tails are eventually periodic, so beyond an explicit middle
    window the disagreement indicator is periodic and the remaining series
    is a finite sum of geometric series.
    """
    if a == b:
        return Fraction(0)
    mid_lo = min(a.core_start, b.core_start, -1)
    mid_hi = max(a.core_span[1], b.core_span[1], 1)
    total = Fraction(0)
    for n in range(mid_lo, mid_hi):
        if a.symbol_at(n) != b.symbol_at(n):
            total += Fraction(1, 2 ** (2 * abs(n) + 1))
    # right tail: positions n >= mid_hi >= 1, indicator periodic with period p
    p = _lcm(len(a.right), len(b.right))
    unit = Fraction(1, 1 - Fraction(1, 4**p))
    block = Fraction(0)
    for r in range(p):
        n = mid_hi + r
        if a.symbol_at(n) != b.symbol_at(n):
            block += Fraction(1, 2 ** (2 * n + 1))
    total += block * unit
    # left tail: positions n <= mid_lo - 1 <= -2
    q = _lcm(len(a.left), len(b.left))
    unit = Fraction(1, 1 - Fraction(1, 4**q))
    block = Fraction(0)
    for r in range(q):
        n = mid_lo - 1 - r
        if a.symbol_at(n) != b.symbol_at(n):
            block += Fraction(1, 2 ** (2 * abs(n) + 1))
    total += block * unit
    return total


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def bracket(a: SymbolicSequence, b: SymbolicSequence) -> SymbolicSequence:
    """Local product splice: negative part and position 0 from b, positive
    part from a.  Defined when a and b share the letter at position 0."""
    if a.symbol_at(0) != b.symbol_at(0):
        raise BracketUndefinedError(
            f"bracket undefined: letters at position 0 differ "
            f"({a.symbol_at(0)} vs {b.symbol_at(0)})"
        )
    cl = min(b.core_start, 0)
    cr = max(a.core_span[1] - 1, 0)
    q = len(b.left)
    p = len(a.right)
    left = tuple(b.symbol_at(cl - q + i) for i in range(q))
    right = tuple(a.symbol_at(cr + 1 + i) for i in range(p))
    core = tuple(b.symbol_at(i) for i in range(cl, 1)) + tuple(
        a.symbol_at(i) for i in range(1, cr + 1)
    )
    return SymbolicSequence(left, core, right, cl)


# ---------------------------------------------------------------------------
# Periodic orbit enumeration
# ---------------------------------------------------------------------------


def enumerate_periodic(
    matrix: TransitionMatrix, max_period: int
) -> list[SymbolicSequence]:
    """One representative per periodic orbit of least period <= max_period.

    Representatives are the lexicographically least rotations; the result is
    ordered by (least period, word).
    """
    if max_period < 1:
        raise InputError("max_period must be >= 1")
    out: list[SymbolicSequence] = []
    for p in range(1, max_period + 1):
        for w in admissible_words(matrix, p):
            if not matrix.rows[w[-1]][w[0]]:
                continue
            if _primitive(w) != w:
                continue
            if min(w[i:] + w[:i] for i in range(len(w))) != w:
                continue
            out.append(SymbolicSequence.periodic(w))
    return out


# ---------------------------------------------------------------------------
# Cylinder removal via higher-block recoding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecodedSFT:
    """Sub-SFT presentation after forbidding one word, over a block alphabet.

    Block letter i stands for the original word ``letters[i]``; transitions
    are overlap compatibility.  ``matrix`` is None when the removal empties
    the subshift.
    """

    original: TransitionMatrix
    removed: Word
    letters: tuple[Word, ...]
    matrix: Optional[TransitionMatrix]

    @property
    def is_empty(self) -> bool:
        return self.matrix is None

    @property
    def window(self) -> int:
        return len(self.removed)

    def decode_word(self, blocks: Sequence[int]) -> Word:
        """Original word spelled by a path of block letters."""
        blocks = tuple(blocks)
        if not blocks:
            return ()
        out = list(self.letters[blocks[0]])
        for b in blocks[1:]:
            out.append(self.letters[b][-1])
        return tuple(out)

    def encode_word(self, word: WordLike) -> Word:
        """Block spelling of an original word of length >= window."""
        w = _word(word)
        L = self.window
        if len(w) < L:
            raise InputError("word shorter than the block window")
        index = {v: i for i, v in enumerate(self.letters)}
        try:
            return tuple(index[w[i:i + L]] for i in range(len(w) - L + 1))
        except KeyError as exc:
            raise InputError(f"word {w} enters the removed cylinder") from exc


def forbid_word(matrix: TransitionMatrix, word: WordLike) -> RecodedSFT:
    """Higher-block recoding of the subshift avoiding ``word`` everywhere.

    New alphabet: admissible words of the same length except ``word``;
    transitions by one-letter overlap; letters with empty row or column are
    deleted iteratively.  An empty result is allowed and flagged.
    """
    w = _word(word)
    if not w:
        raise InputError("cannot forbid the empty word")
    if not is_admissible(w, matrix):
        raise InputError(f"forbidden word {w} is not admissible")
    L = len(w)
    letters = [v for v in admissible_words(matrix, L) if v != w]
    while True:
        if not letters:
            return RecodedSFT(matrix, w, (), None)
        index = {v: i for i, v in enumerate(letters)}
        n = len(letters)
        rows = [[0] * n for _ in range(n)]
        for i, u in enumerate(letters):
            suffix = u[1:]
            for c in matrix.successors[u[-1]]:
                v = suffix + (c,)
                j = index.get(v)
                if j is not None:
                    rows[i][j] = 1
        keep = [
            i
            for i in range(n)
            if any(rows[i]) and any(rows[j][i] for j in range(n))
        ]
        if len(keep) == n:
            return RecodedSFT(matrix, w, tuple(letters), TransitionMatrix(rows))
        letters = [letters[i] for i in keep]


def remove_cylinder(matrix: TransitionMatrix, cyl: Cylinder) -> RecodedSFT:
    """Remove a centered cylinder of odd width 2s+1 (the paper's R_q)."""
    if not cyl.is_centered:
        raise InputError("remove_cylinder expects a centered cylinder")
    return forbid_word(matrix, cyl.word)
