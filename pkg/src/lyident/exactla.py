"""Exact dense linear algebra over the rationals and prime fields.

Everything here is exact: rationals are arbitrary-precision fractions, modular
entries live in [0, p). The central object is IncrementalReducer, which keeps
the unique row canonical form (RCF) of everything appended so far, so the rank
of a long stream of rows is available without ever materializing the stream.

Over a prime field the reducer stores its basis in a numpy int64 array and
reduces whole batches with one matrix product per append; entries stay below
p**2 * cols, far inside int64 range for every matrix this package builds.
Over the rationals each basis row is kept as a primitive integer vector
(content stripped, positive leading entry), which avoids fraction blowup
during elimination; leading 1s appear only in snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "QQ",
    "GF101",
    "ExactMatrix",
    "rcf",
    "IncrementalReducer",
    "row_space_contains",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: characteristic 0 (exact rationals) or a prime p."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not _is_prime(c):
            raise ValueError(f"characteristic must be 0 or prime, got {c}")

    def element(self, x):
        if self.characteristic:
            return int(x) % self.characteristic
        return x if isinstance(x, Fraction) else Fraction(x)

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = FieldSpec(0)
GF101 = FieldSpec(101)


class ExactMatrix:
    """Immutable dense matrix snapshot with exact entries."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, cols: int, entries: Iterable[Sequence]):
        data = tuple(tuple(field.element(x) for x in row) for row in entries)
        for row in data:
            if len(row) != cols:
                raise ValueError(f"row of length {len(row)} in a {cols}-column matrix")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.rows}x{self.cols})"

    def dump(self) -> str:
        """Serialize as 'rows cols characteristic' plus whitespace-separated entries."""
        lines = [f"{self.rows} {self.cols} {self.field.characteristic}"]
        for row in self.entries:
            lines.append(" ".join(_render_entry(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "ExactMatrix":
        tokens = text.split()
        if len(tokens) < 3:
            raise ValueError("matrix dump needs a 'rows cols characteristic' header")
        nrows, ncols, char = (int(t) for t in tokens[:3])
        body = tokens[3:]
        if len(body) != nrows * ncols:
            raise ValueError(f"expected {nrows * ncols} entries, got {len(body)}")
        field = FieldSpec(char)
        it = iter(body)
        entries = [[_parse_entry(next(it)) for _ in range(ncols)] for _ in range(nrows)]
        return cls(field, ncols, entries)


def _render_entry(x) -> str:
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def _parse_entry(tok: str):
    if "/" in tok:
        num, den = tok.split("/")
        return Fraction(int(num), int(den))
    return int(tok)


# -- incremental row reduction -------------------------------------------------


class _ModReducer:
    """RCF basis over GF(p), batch reduction via one matmul per append.

    Matmuls run in float64 so they hit BLAS; every value is an integer in
    [0, p), and the largest intermediate, p^2 * rank, stays far below 2^53,
    so the arithmetic is exact. Wide bases (beyond _INT8_COLS columns) are
    stored as int8 (p <= 127 there) and multiplied in row chunks, which keeps
    a near-full-rank basis with tens of thousands of columns within memory.
    """

    _INT8_COLS = 16384

    def __init__(self, cols: int, p: int):
        self.p = p
        self.cols = cols
        self._wide = cols >= self._INT8_COLS
        if self._wide and p > 127:
            raise ValueError(f"characteristic {p} too large for a wide int8 basis")
        self._dtype = np.int8 if self._wide else np.float64
        self.basis = np.zeros((0, cols), dtype=self._dtype)
        self.pivots: list[int] = []
        # chunk rows so the float64 staging buffer stays around 256 MB
        self._chunk = max(256, (1 << 25) // max(cols, 1))

    @property
    def basis_bytes(self) -> int:
        return self.basis.nbytes

    def _minus_combination(self, rows: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
        """rows - coeffs @ basis, exactly, staging int8 chunks through float64."""
        if not self._wide:
            return (rows - coeffs @ self.basis) % self.p
        out = rows.copy()
        for i in range(0, self.basis.shape[0], self._chunk):
            out -= coeffs[:, i : i + self._chunk] @ self.basis[i : i + self._chunk].astype(np.float64)
        out %= self.p
        return out

    def append(self, rows: np.ndarray) -> int:
        p = self.p
        if rows.size == 0:
            return 0
        rows = np.asarray(rows, dtype=np.float64)
        if self.pivots:
            rows = self._minus_combination(rows, rows[:, self.pivots])
        block = self._self_reduce(rows)
        if block.shape[0] == 0:
            return 0
        cs = [int(np.nonzero(r)[0][0]) for r in block]
        if self.basis.shape[0]:
            if self._wide:
                for i in range(0, self.basis.shape[0], self._chunk):
                    part = self.basis[i : i + self._chunk].astype(np.float64)
                    part -= part[:, cs] @ block
                    part %= p
                    self.basis[i : i + self._chunk] = part.astype(np.int8)
            else:
                self.basis -= self.basis[:, cs] @ block
                self.basis %= p
        stacked = np.concatenate([self.basis, block.astype(self._dtype)])
        order = np.argsort(self.pivots + cs, kind="stable")
        self.pivots = sorted(self.pivots + cs)
        self.basis = stacked[order]
        return block.shape[0]

    def _self_reduce(self, rows: np.ndarray) -> np.ndarray:
        """Full RCF of a (pre-reduced) batch: small Gaussian elimination.

        Row operations run in place through one scratch buffer; the loop
        allocates nothing, which matters when a wide batch needs millions of
        eliminations (per-step temporaries fragment the heap badly).
        """
        p = self.p
        out: list[np.ndarray] = []
        cols: list[int] = []
        scratch = np.empty(self.cols, dtype=np.float64)
        for row in rows:
            row = np.array(row, dtype=np.float64)
            for other, c in zip(out, cols):
                f = row[c]
                if f:
                    np.multiply(other, f, out=scratch)
                    row -= scratch
                    row %= p
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            row *= pow(int(row[c]), p - 2, p)
            row %= p
            for other in out:
                f = other[c]
                if f:
                    np.multiply(row, f, out=scratch)
                    other -= scratch
                    other %= p
            out.append(row)
            cols.append(c)
        if not out:
            return np.zeros((0, self.cols))
        order = np.argsort(cols)
        return np.asarray(out)[order]

    def reduce_row(self, row: np.ndarray) -> np.ndarray:
        row = np.asarray(row, dtype=np.float64) % self.p
        if self.pivots:
            row = self._minus_combination(row[None, :], row[None, self.pivots])[0]
        return row


class _RatReducer:
    """RCF basis over the rationals, rows kept as primitive integer vectors."""

    def __init__(self, cols: int):
        self.cols = cols
        self.basis: list[list[int]] = []
        self.pivots: list[int] = []

    @staticmethod
    def _primitive(row: list[int]) -> list[int]:
        g = 0
        for x in row:
            g = gcd(g, x)
            if g == 1:
                return row
        if g in (0, 1):
            return row
        return [x // g for x in row]

    def _to_int_row(self, row) -> list[int]:
        fracs = [x if isinstance(x, Fraction) else Fraction(x) for x in row]
        lcm = 1
        for f in fracs:
            d = f.denominator
            lcm = lcm * d // gcd(lcm, d)
        return [int(f * lcm) for f in fracs]

    def reduce_only(self, row) -> list[int]:
        out = self._to_int_row(row)
        for c, base in zip(self.pivots, self.basis):
            x = out[c]
            if x:
                b = base[c]
                out = [u * b - x * v for u, v in zip(out, base)]
                out = self._primitive(out)
        return out

    def append_one(self, row) -> bool:
        out = self.reduce_only(row)
        c = next((i for i, x in enumerate(out) if x), None)
        if c is None:
            return False
        if out[c] < 0:
            out = [-x for x in out]
        out = self._primitive(out)
        for i, (pc, base) in enumerate(zip(self.pivots, self.basis)):
            x = base[c]
            if x:
                b = out[c]
                merged = [u * b - x * v for u, v in zip(base, out)]
                self.basis[i] = self._primitive(merged)
                if self.basis[i][pc] < 0:
                    self.basis[i] = [-v for v in self.basis[i]]
        at = next((i for i, pc in enumerate(self.pivots) if pc > c), len(self.pivots))
        self.pivots.insert(at, c)
        self.basis.insert(at, out)
        return True


class IncrementalReducer:
    """Maintains the RCF of the row space of every row appended so far."""

    def __init__(self, cols: int, field: FieldSpec = QQ):
        if cols < 0:
            raise ValueError("column count must be nonnegative")
        self.cols = cols
        self.field = field
        self._impl = _ModReducer(cols, field.characteristic) if field.characteristic else _RatReducer(cols)

    @property
    def rank(self) -> int:
        return len(self._impl.pivots)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self._impl.pivots)

    def _check_width(self, row) -> None:
        if len(row) != self.cols:
            raise ValueError(f"row has {len(row)} entries, reducer has {self.cols} columns")

    def append(self, rows) -> int:
        """Add rows (any iterable of row sequences); returns the rank increase."""
        if isinstance(rows, ExactMatrix):
            rows = rows.entries
        if self.field.characteristic:
            p = self.field.characteristic
            if isinstance(rows, np.ndarray) and rows.dtype != object:
                if rows.ndim != 2 or rows.shape[1] != self.cols:
                    raise ValueError(f"array shape {rows.shape} does not fit {self.cols} columns")
                return self._impl.append(rows % p)
            data = [[int(x) % p for x in r] for r in rows]
            for r in data:
                self._check_width(r)
            if not data:
                return 0
            return self._impl.append(np.asarray(data, dtype=np.float64))
        delta = 0
        for r in rows:
            self._check_width(r)
            delta += bool(self._impl.append_one(r))
        return delta

    def contains(self, row) -> bool:
        """True iff the row lies in the current row space."""
        self._check_width(row)
        if self.field.characteristic:
            p = self.field.characteristic
            reduced = self._impl.reduce_row([int(x) % p for x in row])
            return not reduced.any()
        return not any(self._impl.reduce_only(row))

    def snapshot(self) -> ExactMatrix:
        """The current RCF (leading 1s, pivot columns cleared, by pivot order)."""
        if self.field.characteristic:
            return ExactMatrix(self.field, self.cols, self._impl.basis.astype(np.int64).tolist())
        rows = [
            [Fraction(x, base[c]) for x in base]
            for c, base in zip(self._impl.pivots, self._impl.basis)
        ]
        return ExactMatrix(self.field, self.cols, rows)

    def tail_rows(self, start: int) -> list[list]:
        """Exact basis rows with pivot column >= start, restricted to start:.

        Echelon rows vanish left of their pivot, so the restriction loses
        nothing; this avoids materializing a full snapshot of a wide basis.
        Rows come back in pivot order with leading coefficient 1.
        """
        if not 0 <= start <= self.cols:
            raise ValueError(f"start {start} out of range for {self.cols} columns")
        impl = self._impl
        sel = [i for i, c in enumerate(impl.pivots) if c >= start]
        if not sel:
            return []
        if self.field.characteristic:
            arr = np.asarray(impl.basis)[sel][:, start:]
            return arr.astype(np.int64).tolist()
        return [
            [Fraction(x, impl.basis[i][impl.pivots[i]]) for x in impl.basis[i][start:]]
            for i in sel
        ]


def rcf(matrix, field: FieldSpec | None = None) -> tuple[ExactMatrix, int]:
    """Unique reduced row echelon form and rank."""
    if isinstance(matrix, ExactMatrix):
        field = matrix.field
        rows = matrix.entries
        cols = matrix.cols
    else:
        if field is None:
            raise ValueError("field required when the input is not an ExactMatrix")
        rows = [list(r) for r in matrix]
        cols = len(rows[0]) if rows else 0
    red = IncrementalReducer(cols, field)
    red.append(rows)
    snap = red.snapshot()
    pad = len(rows) - snap.rows
    if pad > 0:
        zero = [field.element(0)] * cols
        snap = ExactMatrix(field, cols, list(snap.entries) + [zero] * pad)
    return snap, red.rank


def row_space_contains(A, B, field: FieldSpec | None = None) -> bool:
    """True iff every row of A lies in the row space of B."""
    if isinstance(B, ExactMatrix):
        field = B.field
        cols = B.cols
    else:
        if field is None:
            raise ValueError("field required when B is not an ExactMatrix")
        B = list(B)
        cols = len(B[0]) if B else 0
    rows_a = A.entries if isinstance(A, ExactMatrix) else list(A)
    red = IncrementalReducer(cols, field)
    red.append(B)
    return all(red.contains(r) for r in rows_a)
