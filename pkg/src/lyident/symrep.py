"""Irreducible representations of the symmetric group via Clifton's matrices.

For a partition pi of n, the representation matrix of a permutation is
R(sigma) = A(iota)^-1 A(sigma), where A(sigma) is indexed by pairs of standard
tableaux and its (i, j) entry is e(t_i, sigma t_j):

    e(s, u) = 0 if two numbers share a row of s and a column of u, and
    otherwise the sign of the unique column permutation of u that makes every
    entry land in the row it occupies in s.

Standard tableaux are ordered lexicographically by row-reading word, which
makes A(iota) unit lower triangular, hence invertible in any characteristic
used here (0 or p > n).

clifton_matrix evaluates A(sigma) directly; RepTable composes cached matrices
of adjacent transpositions instead, which is how the pipeline consumes
representations. The two must agree (tested), since R is a homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import factorial, gcd

import numpy as np

from . import _perm
from .exactla import QQ, FieldSpec

__all__ = [
    "Partition",
    "partitions",
    "parse_partition",
    "standard_tableaux",
    "dimension",
    "RepMatrix",
    "clifton_a_matrix",
    "clifton_matrix",
    "RepTable",
    "rep_of_element",
]


@dataclass(frozen=True)
class Partition:
    """Partition of n as a non-increasing tuple of positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(self.parts)
        object.__setattr__(self, "parts", p)
        if not p or any(x < 1 for x in p) or any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"not a partition: {p}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def dimension(self) -> int:
        return dimension(self)

    def render(self) -> str:
        """Compact form with exponents, e.g. (3, 2, 1, 1, 1) -> '3+2+1^3'."""
        bits = []
        i = 0
        while i < len(self.parts):
            j = i
            while j < len(self.parts) and self.parts[j] == self.parts[i]:
                j += 1
            bits.append(str(self.parts[i]) + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return "+".join(bits)

    def __repr__(self):
        return f"Partition({self.render()})"


def parse_partition(s: str) -> Partition:
    parts: list[int] = []
    for bit in s.split("+"):
        if "^" in bit:
            base, exp = bit.split("^")
            parts.extend([int(base)] * int(exp))
        else:
            parts.append(int(bit))
    return Partition(tuple(parts))


@cache
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n, reverse-lexicographic: (n) first, 1^n last."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out: list[tuple[int, ...]] = []

    def grow(rest: int, maxpart: int, acc: tuple[int, ...]):
        if rest == 0:
            out.append(acc)
            return
        for k in range(min(rest, maxpart), 0, -1):
            grow(rest - k, k, acc + (k,))

    grow(n, n, ())
    return tuple(Partition(p) for p in out)


@cache
def standard_tableaux(pi: Partition) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Standard Young tableaux of shape pi, sorted by row-reading word."""
    shape = pi.parts
    rows = len(shape)
    out = []

    def grow(k: int, filling: list[list[int]]):
        if k > pi.n:
            out.append(tuple(tuple(r) for r in filling))
            return
        for i in range(rows):
            j = len(filling[i])
            if j < shape[i] and (i == 0 or len(filling[i - 1]) > j):
                filling[i].append(k)
                grow(k + 1, filling)
                filling[i].pop()

    grow(1, [[] for _ in shape])
    out.sort(key=lambda t: sum(t, ()))
    return tuple(out)


def dimension(pi: Partition) -> int:
    """Hook length formula."""
    shape = pi.parts
    cols = [0] * shape[0]
    for row in shape:
        for c in range(row):
            cols[c] += 1
    num = factorial(pi.n)
    den = 1
    for i, row in enumerate(shape):
        for j in range(row):
            den *= (row - j) + (cols[j] - i) - 1
    return num // den


@dataclass(frozen=True)
class RepMatrix:
    """d x d representation matrix of one permutation."""

    partition: Partition
    perm: tuple[int, ...]
    matrix: tuple[tuple[object, ...], ...]


def _column_sign(s_row_of: list[int], u: tuple[tuple[int, ...], ...], heights: list[int]) -> int:
    """e(s, u) given the row-lookup table of s; 0 on a row/column clash."""
    sign = 1
    for c in range(len(heights)):
        targets = [s_row_of[u[i][c]] for i in range(heights[c])]
        if sorted(targets) != list(range(len(targets))):
            return 0
        # parity of the arrangement that sorts this column by target row
        inv = sum(
            1
            for a in range(len(targets))
            for b in range(a + 1, len(targets))
            if targets[a] > targets[b]
        )
        if inv & 1:
            sign = -sign
    return sign


def clifton_a_matrix(pi: Partition, sigma: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Integer matrix A(sigma) with entries e(t_i, sigma t_j)."""
    n = pi.n
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {sigma}")
    tabs = standard_tableaux(pi)
    heights = [0] * pi.parts[0]
    for row in pi.parts:
        for c in range(row):
            heights[c] += 1
    row_lookups = []
    for t in tabs:
        row_of = [0] * (n + 1)
        for i, row in enumerate(t):
            for x in row:
                row_of[x] = i
        row_lookups.append(row_of)
    out = []
    for row_of in row_lookups:
        line = []
        for t in tabs:
            moved = tuple(tuple(sigma[x - 1] for x in row) for row in t)
            line.append(_column_sign(row_of, moved, heights))
        out.append(tuple(line))
    return tuple(out)


@cache
def _a_iota_inverse(pi: Partition) -> tuple[tuple[int, ...], ...]:
    """A(iota) is unit lower triangular over ZZ; its inverse is integral."""
    a = clifton_a_matrix(pi, _perm.identity(pi.n))
    d = len(a)
    for i in range(d):
        if a[i][i] != 1 or any(a[i][j] for j in range(i + 1, d)):
            raise AssertionError("A(iota) is not unit lower triangular")
    inv = [[int(i == j) for j in range(d)] for i in range(d)]
    for i in range(d):
        for k in range(i):
            c = a[i][k]
            if c:
                for j in range(k + 1):
                    inv[i][j] -= c * inv[k][j]
    return tuple(tuple(r) for r in inv)


def clifton_matrix(pi: Partition, sigma: tuple[int, ...], field: FieldSpec = QQ) -> RepMatrix:
    """R(sigma) = A(iota)^-1 A(sigma), evaluated by direct Clifton expansion."""
    inv = _a_iota_inverse(pi)
    a = clifton_a_matrix(pi, sigma)
    d = len(a)
    rows = []
    for i in range(d):
        rows.append(
            tuple(
                field.element(sum(inv[i][k] * a[k][j] for k in range(d)))
                for j in range(d)
            )
        )
    return RepMatrix(pi, tuple(sigma), tuple(rows))


class RepTable:
    """Memoized R(sigma) for one partition, composed from transpositions.

    Modular matrices are memoized as int8 (entries < p <= 127), which keeps a
    full S_8 table for a 90-dimensional representation near 300 MB; int64 is
    used in characteristic 0, where Clifton matrices are small integers.
    Returned arrays are the memo entries themselves: treat them as read-only
    and cast before multiplying int8 by hand.
    """

    def __init__(self, pi: Partition, field: FieldSpec = QQ):
        self.partition = pi
        self.field = field
        self.n = pi.n
        self.dim = dimension(pi)
        p = field.characteristic
        if p > 127:
            raise ValueError("RepTable supports characteristic 0 or p <= 127")
        self._dtype = np.int8 if p else np.int64
        ident = _perm.identity(self.n)
        self._memo: dict[tuple[int, ...], np.ndarray] = {
            ident: np.eye(self.dim, dtype=self._dtype)
        }
        self._adjacent: dict[int, np.ndarray] = {}
        for i in range(1, self.n):
            s = _perm.from_transpositions(self.n, [(i, i + 1)])
            m = np.array(
                [[int(x) for x in row] for row in clifton_matrix(pi, s).matrix],
                dtype=np.int64,
            )
            if p:
                m %= p
            self._adjacent[i] = m
            self._memo[s] = m.astype(self._dtype)

    def matrix(self, sigma: tuple[int, ...]) -> np.ndarray:
        hit = self._memo.get(sigma)
        if hit is not None:
            return hit
        # peel descents: sigma = tau o s_i o s_j ... with tau memoized
        work = list(sigma)
        stack: list[int] = []
        while True:
            key = tuple(work)
            hit = self._memo.get(key)
            if hit is not None:
                break
            i = next(k for k in range(self.n - 1) if work[k] > work[k + 1])
            work[i], work[i + 1] = work[i + 1], work[i]
            stack.append(i + 1)
        m = hit.astype(np.int64)
        p = self.field.characteristic
        while stack:
            i = stack.pop()
            m = m @ self._adjacent[i]
            if p:
                m %= p
            work[i - 1], work[i] = work[i], work[i - 1]
            self._memo[tuple(work)] = m.astype(self._dtype)
        return self._memo[tuple(sigma)]

    def element(self, elt: dict[tuple[int, ...], object]) -> np.ndarray:
        """Linear extension over integer coefficients; int64 result."""
        p = self.field.characteristic
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for sigma, coeff in elt.items():
            out += int(coeff) * self.matrix(sigma).astype(np.int64)
        return out % p if p else out


_TABLES: dict[tuple[Partition, FieldSpec], RepTable] = {}


def _table(pi: Partition, field: FieldSpec) -> RepTable:
    key = (pi, field)
    tab = _TABLES.get(key)
    if tab is None:
        tab = _TABLES[key] = RepTable(pi, field)
    return tab


def rep_of_element(pi: Partition, elt: dict[tuple[int, ...], object], field: FieldSpec = QQ):
    """Sum of coeff * R(sigma) as a list-of-lists matrix over the field.

    Rational (or integer) coefficients are cleared through a common
    denominator so the table's integer fast path applies, then restored.
    """
    if not elt:
        d = dimension(pi)
        return [[field.element(0)] * d for _ in range(d)]
    den = 1
    for c in elt.values():
        f = Fraction(c)
        den = den * f.denominator // gcd(den, f.denominator)
    scaled = {s: int(Fraction(c) * den) for s, c in elt.items()}
    m = _table(pi, field).element(scaled)
    if field.characteristic:
        if den % field.characteristic == 0:
            raise ValueError("denominator vanishes in the working characteristic")
        m = m * pow(den, field.characteristic - 2, field.characteristic) % field.characteristic
        return [[int(x) for x in row] for row in m]
    if den == 1:
        return [[int(x) for x in row] for row in m]
    return [[Fraction(int(x), den) for x in row] for row in m]
