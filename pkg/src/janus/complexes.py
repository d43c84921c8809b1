"""Windowed cochain complexes over the rationals.

A :class:`GradedComplex` stores the terms in an integer window ``[lo, hi]``
together with the differentials ``d^i : C^i -> C^{i+1}`` for ``lo <= i < hi``.
The edge flags record whether the complex is genuinely zero beyond each edge
(closed) or merely cut off there (open).  Cohomology is only reported in
*trusted* degrees: interior degrees plus closed edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from .linalg import (
    Echelon,
    SparseMatrix,
    block_diagonal,
    format_rational,
    kernel_basis_sparse,
    rank,
)

DUAL_SUFFIX = "^∨"
TENSOR_SEP = "⊗"


class StructuralError(ValueError):
    """Shapes, windows or bases of complexes or maps do not fit together."""


class DSquaredError(ArithmeticError):
    """A composite of consecutive differentials is nonzero."""


class GlueError(ArithmeticError):
    """A gluing map does not compose to zero with the adjacent differentials."""


@dataclass(frozen=True, eq=False)
class GradedComplex:
    lo: int
    hi: int
    basis: Mapping[int, Sequence[str]]
    diff: Mapping[int, SparseMatrix] = field(default_factory=dict)
    left_closed: bool = True
    right_closed: bool = True
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.lo > self.hi:
            raise StructuralError(f"empty window [{self.lo}, {self.hi}]")
        basis = {}
        for i in range(self.lo, self.hi + 1):
            labels = tuple(self.basis.get(i, ()))
            if len(set(labels)) != len(labels):
                raise StructuralError(f"repeated basis label in degree {i}")
            basis[i] = labels
        extra = set(self.basis) - set(basis)
        if extra:
            raise StructuralError(f"basis given outside window: degrees {sorted(extra)}")
        diff = {}
        for i in range(self.lo, self.hi):
            m = self.diff.get(i)
            shape = (len(basis[i + 1]), len(basis[i]))
            if m is None:
                m = SparseMatrix.zeros(*shape)
            elif m.shape != shape:
                raise StructuralError(f"d^{i} has shape {m.shape}, expected {shape}")
            diff[i] = m
        extra = set(self.diff) - set(diff)
        if extra:
            raise StructuralError(f"differential given outside window: degrees {sorted(extra)}")
        object.__setattr__(self, "basis", MappingProxyType(basis))
        object.__setattr__(self, "diff", MappingProxyType(diff))
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, i: int) -> int:
        if self.lo <= i <= self.hi:
            return len(self.basis[i])
        if (i < self.lo and self.left_closed) or (i > self.hi and self.right_closed):
            return 0
        raise StructuralError(f"degree {i} lies beyond an open edge of [{self.lo}, {self.hi}]")

    def dims(self) -> dict[int, int]:
        return {i: len(self.basis[i]) for i in self.degrees}

    def d(self, i: int) -> SparseMatrix:
        """The differential out of degree ``i``; zero maps across closed edges."""
        if self.lo <= i < self.hi:
            return self.diff[i]
        return SparseMatrix.zeros(self.dim(i + 1), self.dim(i))

    def trusted_degrees(self) -> list[int]:
        out = []
        for i in self.degrees:
            if i == self.lo and not self.left_closed:
                continue
            if i == self.hi and not self.right_closed:
                continue
            out.append(i)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedComplex):
            return NotImplemented
        return (
            self.window == other.window
            and self.left_closed == other.left_closed
            and self.right_closed == other.right_closed
            and dict(self.basis) == dict(other.basis)
            and dict(self.diff) == dict(other.diff)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"GradedComplex([{self.lo}, {self.hi}], closed=({self.left_closed}, {self.right_closed}), "
            f"dims={list(self.dims().values())})"
        )

    # serialization

    def to_json(self) -> dict:
        out = {
            "window": [self.lo, self.hi],
            "edge_flags": {"left_closed": self.left_closed, "right_closed": self.right_closed},
            "basis": {str(i): list(self.basis[i]) for i in self.degrees},
            "diff": {str(i): self.diff[i].to_json() for i in range(self.lo, self.hi)},
        }
        if self.meta:
            out["meta"] = {k: self.meta[k] for k in sorted(self.meta)}
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping, verify: bool = True) -> GradedComplex:
        lo, hi = (int(v) for v in data["window"])
        flags = data.get("edge_flags", {})
        cx = cls(
            lo, hi,
            basis={int(k): list(v) for k, v in data["basis"].items()},
            diff={int(k): SparseMatrix.from_json(v) for k, v in data.get("diff", {}).items()},
            left_closed=bool(flags.get("left_closed", True)),
            right_closed=bool(flags.get("right_closed", True)),
            meta=dict(data.get("meta", {})),
        )
        if verify:
            report = check_d_squared(cx)
            if not report.passed:
                raise DSquaredError(f"imported complex has d∘d ≠ 0 at degree {report.first_failure}")
        return cx

    @classmethod
    def loads(cls, text: str, verify: bool = True) -> GradedComplex:
        return cls.from_json(json.loads(text), verify=verify)


def dumps(obj) -> str:
    """Canonical JSON text used for every export."""
    return json.dumps(obj, indent=1, ensure_ascii=False)


def zero_complex(degree: int = 0) -> GradedComplex:
    return GradedComplex(degree, degree, {degree: ()})


# ---------------------------------------------------------------------------
# d∘d = 0


@dataclass(frozen=True)
class DSquaredReport:
    passed: bool
    pairs: Mapping[int, bool]
    first_failure: int | None = None
    composite: SparseMatrix | None = None


def check_d_squared(cx: GradedComplex) -> DSquaredReport:
    pairs = {}
    first = None
    bad = None
    for i in range(cx.lo, cx.hi - 1):
        comp = cx.diff[i + 1] @ cx.diff[i]
        ok = comp.is_zero()
        pairs[i] = ok
        if not ok and first is None:
            first, bad = i, comp
    return DSquaredReport(first is None, MappingProxyType(pairs), first, bad)


# ---------------------------------------------------------------------------
# cohomology


@dataclass(frozen=True)
class CohomologyReport:
    dims: Mapping[int, int]
    representatives: Mapping[int, list[dict[str, Fraction]]] | None = None

    def nonzero(self) -> dict[int, int]:
        return {i: d for i, d in self.dims.items() if d}

    def is_acyclic(self) -> bool:
        return not self.nonzero()

    def to_json(self) -> dict:
        out = {"dims": {str(i): d for i, d in self.dims.items()},
               "nonzero": {str(i): d for i, d in self.nonzero().items()}}
        if self.representatives is not None:
            out["representatives"] = {
                str(i): [render_vector(v) for v in reps]
                for i, reps in self.representatives.items()
            }
        return out


def render_vector(vec: Mapping[str, Fraction]) -> str:
    """Human-readable linear combination of basis labels."""
    if not vec:
        return "0"
    parts = []
    for label, c in vec.items():
        if c == 1:
            parts.append(label)
        elif c == -1:
            parts.append(f"-{label}")
        else:
            parts.append(f"{format_rational(c)}*{label}")
    return " + ".join(parts)


def _rank_cache(cx: GradedComplex) -> Callable[[int], int]:
    cache: dict[int, int] = {}

    def r(i: int) -> int:
        if i not in cache:
            cache[i] = rank(cx.d(i)) if cx.lo <= i < cx.hi else 0
        return cache[i]

    return r


def cohomology(cx: GradedComplex, representatives: bool = False,
               degrees: Sequence[int] | None = None) -> CohomologyReport:
    """Cohomology dimensions in every trusted degree (or the requested subset).

    With ``representatives=True``, each nonzero degree also gets a list of
    cocycles reduced modulo the coboundaries, one per cohomology dimension.
    """
    check = check_d_squared(cx)
    if not check.passed:
        raise DSquaredError(f"d∘d ≠ 0 at degree {check.first_failure}; refusing to compute cohomology")
    trusted = cx.trusted_degrees()
    if degrees is not None:
        bad = set(degrees) - set(trusted)
        if bad:
            raise StructuralError(f"degrees {sorted(bad)} are not trusted")
        trusted = [i for i in trusted if i in set(degrees)]
    r = _rank_cache(cx)
    dims = {i: cx.dim(i) - r(i) - r(i - 1) for i in trusted}
    reps = None
    if representatives:
        reps = {}
        for i, h in dims.items():
            if h:
                reps[i] = _representatives(cx, i, h)
    return CohomologyReport(MappingProxyType(dims), None if reps is None else MappingProxyType(reps))


def _representatives(cx: GradedComplex, i: int, expected: int) -> list[dict[str, Fraction]]:
    labels = cx.basis[i]
    ech = Echelon(len(labels))
    for col in cx.d(i - 1).column_dicts():
        if col:
            ech.add(col)
    reps = []
    for vec in kernel_basis_sparse(cx.d(i)):
        red = ech.add(vec)
        if red is not None:
            lead = min(red)
            scale = 1 / red[lead]
            reps.append({labels[c]: red[c] * scale for c in sorted(red)})
    if len(reps) != expected:
        raise ArithmeticError(f"found {len(reps)} representatives in degree {i}, expected {expected}")
    return reps


def same_class(cx: GradedComplex, i: int, a: Mapping[str, object], b: Mapping[str, object]) -> bool:
    """Whether two cochains of degree ``i`` differ by a coboundary."""
    index = {label: k for k, label in enumerate(cx.basis[i])}
    diff = {}
    for label, c in a.items():
        diff[index[label]] = diff.get(index[label], 0) + Fraction(c)
    for label, c in b.items():
        diff[index[label]] = diff.get(index[label], 0) - Fraction(c)
    ech = Echelon(len(index))
    for col in cx.d(i - 1).column_dicts():
        if col:
            ech.add(col)
    return ech.contains(diff)


# ---------------------------------------------------------------------------
# structural operations


def dualize(cx: GradedComplex) -> GradedComplex:
    """Linear dual: the term in degree ``-i-1`` is the dual of ``C^i``.

    The differential out of dual degree ``-k-1`` is the transpose of ``d^{k-1}``.
    Dual labels carry a ``^∨`` suffix, which dualizing again strips.
    """
    def dual_label(label: str) -> str:
        return label[: -len(DUAL_SUFFIX)] if label.endswith(DUAL_SUFFIX) else label + DUAL_SUFFIX

    basis = {-i - 1: [dual_label(l) for l in cx.basis[i]] for i in cx.degrees}
    diff = {-k - 1: cx.diff[k - 1].transpose() for k in range(cx.lo + 1, cx.hi + 1)}
    return GradedComplex(
        -cx.hi - 1, -cx.lo - 1, basis, diff,
        left_closed=cx.right_closed, right_closed=cx.left_closed, meta=cx.meta,
    )


def shift(cx: GradedComplex, k: int) -> GradedComplex:
    """``C[k]``: degree ``i`` of the result is degree ``i + k`` of ``C``; d picks up ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    basis = {i - k: cx.basis[i] for i in cx.degrees}
    diff = {i - k: (m if sign == 1 else -m) for i, m in cx.diff.items()}
    return GradedComplex(cx.lo - k, cx.hi - k, basis, diff, cx.left_closed, cx.right_closed, cx.meta)


def relabel(cx: GradedComplex, fn: Callable[[str], str]) -> GradedComplex:
    basis = {i: [fn(l) for l in cx.basis[i]] for i in cx.degrees}
    return GradedComplex(cx.lo, cx.hi, basis, cx.diff, cx.left_closed, cx.right_closed, cx.meta)


def pad(cx: GradedComplex, lo: int, hi: int) -> GradedComplex:
    """Extend the window with zero terms; only allowed across closed edges."""
    if lo > cx.lo or hi < cx.hi:
        raise StructuralError("pad can only enlarge the window")
    if lo < cx.lo and not cx.left_closed:
        raise StructuralError("cannot pad across an open left edge")
    if hi > cx.hi and not cx.right_closed:
        raise StructuralError("cannot pad across an open right edge")
    lo, hi = min(lo, cx.lo), max(hi, cx.hi)
    return GradedComplex(lo, hi, dict(cx.basis), dict(cx.diff), cx.left_closed, cx.right_closed, cx.meta)


def truncate(cx: GradedComplex, lo: int, hi: int) -> GradedComplex:
    """Restrict to ``[lo, hi]``; edges that cut off nonzero terms become open."""
    lo, hi = max(lo, cx.lo), min(hi, cx.hi)
    if lo > hi:
        raise StructuralError("truncation window is empty")
    left_closed = cx.left_closed and all(cx.dim(i) == 0 for i in range(cx.lo, lo))
    right_closed = cx.right_closed and all(cx.dim(i) == 0 for i in range(hi + 1, cx.hi + 1))
    basis = {i: cx.basis[i] for i in range(lo, hi + 1)}
    diff = {i: cx.diff[i] for i in range(lo, hi)}
    return GradedComplex(lo, hi, basis, diff, left_closed, right_closed, cx.meta)


def direct_sum(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    """Direct sum on the union window (each summand padded across closed edges)."""
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    a, b = pad(a, lo, hi), pad(b, lo, hi)
    basis = {i: list(a.basis[i]) + list(b.basis[i]) for i in range(lo, hi + 1)}
    if any(len(set(v)) != len(v) for v in basis.values()):
        raise StructuralError("summands share basis labels")
    diff = {i: block_diagonal([a.diff[i], b.diff[i]]) for i in range(lo, hi)}
    return GradedComplex(lo, hi, basis, diff, a.left_closed and b.left_closed,
                         a.right_closed and b.right_closed)


def glue(minus: GradedComplex, plus: GradedComplex, g: SparseMatrix) -> GradedComplex:
    """Join a complex ending at degree -1 to one starting at degree 0 via ``d^{-1} = g``."""
    if minus.hi != -1 or not minus.right_closed:
        raise StructuralError("left piece must end at degree -1 with a closed edge")
    if plus.lo != 0 or not plus.left_closed:
        raise StructuralError("right piece must start at degree 0 with a closed edge")
    if g.shape != (plus.dim(0), minus.dim(-1)):
        raise StructuralError(f"gluing map has shape {g.shape}, expected {(plus.dim(0), minus.dim(-1))}")
    if minus.lo <= -2:
        comp = g @ minus.diff[-2]
        if not comp.is_zero():
            raise GlueError(f"g∘d^-2 ≠ 0: {comp.to_json()}")
    if plus.hi >= 1:
        comp = plus.diff[0] @ g
        if not comp.is_zero():
            raise GlueError(f"d^0∘g ≠ 0: {comp.to_json()}")
    basis = {**minus.basis, **plus.basis}
    diff = {**minus.diff, **plus.diff, -1: g}
    meta = {**minus.meta, **plus.meta}
    return GradedComplex(minus.lo, plus.hi, basis, diff, minus.left_closed, plus.right_closed, meta)


def _tensor_window(c: GradedComplex, d: GradedComplex) -> tuple[int, int]:
    inf = float("inf")
    c_lo = c.lo if c.left_closed else -inf
    c_hi = c.hi if c.right_closed else inf
    d_lo = d.lo if d.left_closed else -inf
    d_hi = d.hi if d.right_closed else inf
    # a degree n is complete when every (p, q) with p + q = n in the true
    # supports lies inside both windows
    lo = c.lo + d.lo
    hi = c.hi + d.hi
    if c_lo == -inf:
        lo = max(lo, c.lo + d_hi)
    if d_lo == -inf:
        lo = max(lo, d.lo + c_hi)
    if c_hi == inf:
        hi = min(hi, c.hi + d_lo)
    if d_hi == inf:
        hi = min(hi, d.hi + c_lo)
    if lo == -inf or hi == inf or lo == inf or hi == -inf or lo > hi:
        raise StructuralError("tensor product has no degree unaffected by truncation")
    return int(lo), int(hi)


def tensor(c: GradedComplex, d: GradedComplex) -> GradedComplex:
    """Tensor product with ``d(a⊗b) = da⊗b + (-1)^p a⊗db`` for ``a`` in degree ``p``.

    Basis of degree ``n`` lists pairs by increasing left degree, then left
    index, then right index.  Only degrees untouched by either factor's
    truncation are kept.
    """
    lo, hi = _tensor_window(c, d)

    def index(n):
        pairs = []
        for p in range(c.lo, c.hi + 1):
            q = n - p
            if d.lo <= q <= d.hi:
                for a in range(c.dim(p)):
                    for b in range(d.dim(q)):
                        pairs.append((p, a, q, b))
        return pairs

    idx = {n: index(n) for n in range(lo, hi + 1)}
    basis = {n: [f"{c.basis[p][a]}{TENSOR_SEP}{d.basis[q][b]}" for p, a, q, b in idx[n]]
             for n in idx}
    c_cols = {p: m.column_dicts() for p, m in c.diff.items()}
    d_cols = {q: m.column_dicts() for q, m in d.diff.items()}
    diff = {}
    for n in range(lo, hi):
        target = {key: k for k, key in enumerate(idx[n + 1])}
        entries: dict[tuple[int, int], Fraction] = {}
        for col, (p, a, q, b) in enumerate(idx[n]):
            if p < c.hi:
                for r, v in c_cols[p][a].items():
                    k = target[(p + 1, r, q, b)]
                    entries[(k, col)] = entries.get((k, col), 0) + v
            if q < d.hi:
                sign = -1 if p % 2 else 1
                for r, v in d_cols[q][b].items():
                    k = target[(p, a, q + 1, r)]
                    entries[(k, col)] = entries.get((k, col), 0) + sign * v
        diff[n] = SparseMatrix(len(idx[n + 1]), len(idx[n]), entries)
    meta = {"tensor_sign": "(-1)^p with p the degree of the left factor"}
    return GradedComplex(lo, hi, basis, diff, c.left_closed and d.left_closed,
                         c.right_closed and d.right_closed, meta)


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: GradedComplex
    target: GradedComplex
    maps: Mapping[int, SparseMatrix]
    note: str = ""

    def __post_init__(self):
        if self.source.window != self.target.window:
            raise StructuralError(f"windows differ: {self.source.window} vs {self.target.window}")
        maps = {}
        for i in self.source.degrees:
            m = self.maps.get(i)
            shape = (self.target.dim(i), self.source.dim(i))
            if m is None:
                m = SparseMatrix.zeros(*shape)
            elif m.shape != shape:
                raise StructuralError(f"map in degree {i} has shape {m.shape}, expected {shape}")
            maps[i] = m
        object.__setattr__(self, "maps", MappingProxyType(maps))

    def to_json(self) -> dict:
        out = {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "maps": {str(i): m.to_json() for i, m in self.maps.items()},
        }
        if self.note:
            out["note"] = self.note
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping) -> ChainMap:
        return cls(
            GradedComplex.from_json(data["source"]),
            GradedComplex.from_json(data["target"]),
            {int(k): SparseMatrix.from_json(v) for k, v in data["maps"].items()},
            data.get("note", ""),
        )


@dataclass(frozen=True)
class ChainMapReport:
    passed: bool
    squares: Mapping[int, bool]
    iso: bool
    singular_degrees: tuple[int, ...] = ()
    first_failure: int | None = None


def verify_chain_map(f: ChainMap) -> ChainMapReport:
    s, t = f.source, f.target
    if s.window != t.window:
        raise StructuralError("source and target windows differ")
    squares = {}
    first = None
    for i in range(s.lo, s.hi):
        ok = t.diff[i] @ f.maps[i] == f.maps[i + 1] @ s.diff[i]
        squares[i] = ok
        if not ok and first is None:
            first = i
    singular = tuple(
        i for i, m in f.maps.items() if not (m.rows == m.cols and rank(m) == m.rows)
    )
    return ChainMapReport(first is None, MappingProxyType(squares), not singular, singular, first)


def identity_map(cx: GradedComplex) -> ChainMap:
    return ChainMap(cx, cx, {i: SparseMatrix.identity(cx.dim(i)) for i in cx.degrees})
