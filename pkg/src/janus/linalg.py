"""Exact rational linear algebra on sparse matrices.

Scalars are :class:`fractions.Fraction` throughout.  Ranks are computed by
fraction-free elimination on integer rows; kernels and reductions use
rational row-reduced echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

Rational = Fraction

Vector = tuple  # dense tuple of Fractions


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    return Fraction(s)


class SparseMatrix:
    """Immutable rows x cols matrix holding only its nonzero entries."""

    __slots__ = ("rows", "cols", "_entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape {rows}x{cols}")
        clean: dict[tuple[int, int], Fraction] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                clean[(r, c)] = v
        self.rows = rows
        self.cols = cols
        self._entries = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zeros(cls, rows: int, cols: int) -> SparseMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], cols: int | None = None) -> SparseMatrix:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = v
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object] | Sequence[object]]) -> SparseMatrix:
        entries = {}
        for c, col in enumerate(columns):
            items = col.items() if isinstance(col, Mapping) else enumerate(col)
            for r, v in items:
                if v:
                    entries[(r, c)] = v
        return cls(rows, len(columns), entries)

    # accessors

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> Mapping[tuple[int, int], Fraction]:
        return MappingProxyType(self._entries)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(key)
        return self._entries.get((r, c), Fraction(0))

    def is_zero(self) -> bool:
        return not self._entries

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def column_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (r, c), v in self._entries.items():
            out[c][r] = v
        return out

    # arithmetic

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    T = property(transpose)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right_rows = other.row_dicts()
        acc: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self._entries.items():
            for c, w in right_rows[k].items():
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence[object]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [Fraction(0)] * self.rows
        for (r, c), v in self._entries.items():
            if vec[c]:
                out[r] += v * vec[c]
        return tuple(out)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = acc.get(k, 0) + v
        return SparseMatrix(self.rows, self.cols, acc)

    def __neg__(self) -> SparseMatrix:
        return self.scale(-1)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scale(self, factor) -> SparseMatrix:
        factor = Fraction(factor)
        return SparseMatrix(self.rows, self.cols, {k: v * factor for k, v in self._entries.items()})

    def scale_row(self, row: int, factor) -> SparseMatrix:
        factor = Fraction(factor)
        return SparseMatrix(
            self.rows, self.cols,
            {(r, c): (v * factor if r == row else v) for (r, c), v in self._entries.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # serialization

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, format_rational(v)] for (r, c), v in sorted(self._entries.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> SparseMatrix:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = {}
        for r, c, v in data.get("entries", []):
            q = parse_rational(v) if isinstance(v, str) else Fraction(v)
            if not q:
                raise ValueError(f"stored zero at ({r}, {c})")
            if (r, c) in entries:
                raise ValueError(f"duplicate entry ({r}, {c})")
            entries[(int(r), int(c))] = q
        return cls(rows, cols, entries)


def block_diagonal(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    entries = {}
    r0 = c0 = 0
    for b in blocks:
        for (r, c), v in b.entries.items():
            entries[(r0 + r, c0 + c)] = v
        r0 += b.rows
        c0 += b.cols
    return SparseMatrix(r0, c0, entries)


def hstack(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    if not blocks:
        raise ValueError("nothing to stack")
    rows = blocks[0].rows
    entries = {}
    c0 = 0
    for b in blocks:
        if b.rows != rows:
            raise ValueError("row counts differ")
        for (r, c), v in b.entries.items():
            entries[(r, c0 + c)] = v
        c0 += b.cols
    return SparseMatrix(rows, c0, entries)


# ---------------------------------------------------------------------------
# rank: fraction-free elimination on integer rows


def _integer_rows(m: SparseMatrix) -> list[dict[int, int]]:
    rows = m.row_dicts() if m.rows <= m.cols else m.transpose().row_dicts()
    out = []
    for row in rows:
        if not row:
            continue
        den = lcm(*(v.denominator for v in row.values()))
        irow = {c: int(v * den) for c, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        if g > 1:
            irow = {c: v // g for c, v in irow.items()}
        out.append(irow)
    return out


def rank(m: SparseMatrix) -> int:
    """Exact rank over the rationals."""
    rows = _integer_rows(m)
    rows.sort(key=len)
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = row
                break
            a, b = prow[lead], row[lead]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {c: a * v for c, v in row.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - b * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {c: v // g for c, v in new.items()}
            row = new
    return len(pivots)


def kernel_dim(m: SparseMatrix) -> int:
    return m.cols - rank(m)


def is_invertible(m: SparseMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


# ---------------------------------------------------------------------------
# rational echelon forms


class Echelon:
    """Incrementally maintained reduced row echelon basis of a subspace.

    Rows are sparse dicts with leading coefficient 1; every pivot column is
    zero in all other rows.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, dict[int, Fraction]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        out = {c: Fraction(v) for c, v in vec.items() if v}
        for p in [c for c in out if c in self.rows]:
            coef = out.get(p)
            if not coef:
                continue
            for c, v in self.rows[p].items():
                nv = out.get(c, 0) - coef * v
                if nv:
                    out[c] = nv
                else:
                    out.pop(c, None)
        return out

    def add(self, vec: Mapping[int, object]) -> dict[int, Fraction] | None:
        """Insert ``vec``; return its reduced nonzero remainder, or None if dependent."""
        red = self.reduce(vec)
        if not red:
            return None
        lead = min(red)
        inv = 1 / red[lead]
        row = {c: v * inv for c, v in red.items()}
        for other in self.rows.values():
            coef = other.get(lead)
            if coef:
                for c, v in row.items():
                    nv = other.get(c, 0) - coef * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        self.rows[lead] = row
        return red

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec)


def rref(m: SparseMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    ech = Echelon(m.cols)
    for row in m.row_dicts():
        if row:
            ech.add(row)
    pivots = sorted(ech.rows)
    return [ech.rows[p] for p in pivots], pivots


def kernel_basis_sparse(m: SparseMatrix) -> list[dict[int, Fraction]]:
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    # column view of the reduced rows restricted to free columns
    by_free: dict[int, list[tuple[int, Fraction]]] = {f: [] for f in free}
    for p, row in zip(pivots, rows):
        for c, v in row.items():
            if c != p:
                by_free[c].append((p, v))
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, v in by_free[f]:
            vec[p] = -v
        basis.append(vec)
    return basis


def kernel_basis(m: SparseMatrix) -> list[Vector]:
    """Exact rational vectors spanning ker m, one per free column."""
    out = []
    for vec in kernel_basis_sparse(m):
        dense = [Fraction(0)] * m.cols
        for c, v in vec.items():
            dense[c] = v
        out.append(tuple(dense))
    return out


def span_rank(vectors: Iterable[Sequence[object]], width: int) -> int:
    ech = Echelon(width)
    for v in vectors:
        ech.add({i: x for i, x in enumerate(v) if x})
    return len(ech)
