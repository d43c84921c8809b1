"""Sphere complexes, Koszul complexes of one variable and their Janus gluings.

Every term of every complex here is two-dimensional.  Basis orders are fixed:

* sphere cells ``[c{i}+, c{i}-]``, differential ``A = [[1, -1], [1, -1]]``;
* ``Δ₊`` terms ``[e*x^i, xi*e*x^i]``, differential ``B = [[0, 0], [1, 0]]``;
* Koszul terms ``[1*x^i, xi*x^i]`` for ``K(l[x], x)`` and ``K(l[x, 1/x], x)``.
"""

from __future__ import annotations

from typing import Mapping

from .complexes import (
    ChainMap,
    GradedComplex,
    StructuralError,
    dualize,
    glue,
    shift,
    truncate,
    verify_chain_map,
)
from .linalg import SparseMatrix, rank

A = SparseMatrix.from_dense([[1, -1], [1, -1]])
B = SparseMatrix.from_dense([[0, 0], [1, 0]])
# d_K = ∂_ξ ⊗ x on [1*x^i, xi*x^i]: xi*x^i -> 1*x^(i+1)
K = SparseMatrix.from_dense([[0, 1], [0, 0]])

ALPHA = (1, 0)
BETA = (1, 1)

SIDES = ("plus", "minus", "both")
KOSZUL_VARIANTS = ("delta_plus", "delta_minus", "janus", "loc_poly", "loc_laurent")


def _uniform(lo, hi, labels, d, left_closed, right_closed, name) -> GradedComplex:
    basis = {i: labels(i) for i in range(lo, hi + 1)}
    diff = {i: d for i in range(lo, hi)}
    return GradedComplex(lo, hi, basis, diff, left_closed, right_closed, {"name": name})


def _sphere_labels(i):
    return [f"c{i}+", f"c{i}-"]


def sphere_complex(n: int | None = None, side: str | None = None,
                   window: tuple[int, int] | None = None) -> GradedComplex:
    """Cellular cochains of ``S^n`` (give ``n``) or of the infinite sphere (give ``side`` and ``window``).

    ``side='plus'`` lives in degrees ``>= 0``, ``'minus'`` in degrees ``<= 0``
    and ``'both'`` in all degrees; the window cuts it open where it continues.
    """
    if n is not None:
        if side is not None or n < 0:
            raise ValueError("give either n >= 0 or a side with a window")
        if window is not None and tuple(window) != (0, n):
            raise ValueError(f"the window of S^{n} is [0, {n}]")
        return _uniform(0, n, _sphere_labels, A, True, True, f"sphere S^{n}")
    if side not in SIDES or window is None:
        raise ValueError("semi-infinite spheres need side in plus/minus/both and a window")
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    if side == "plus":
        if lo != 0:
            raise ValueError("the plus side starts at degree 0")
        return _uniform(lo, hi, _sphere_labels, A, True, False, "sphere C+")
    if side == "minus":
        if hi != 0:
            raise ValueError("the minus side ends at degree 0")
        return _uniform(lo, hi, _sphere_labels, A, False, True, "sphere C-")
    return _uniform(lo, hi, _sphere_labels, A, False, False, "sphere C")


def _delta_plus(hi: int) -> GradedComplex:
    return _uniform(0, hi, lambda i: [f"e*x^{i}", f"xi*e*x^{i}"], B, True, False, "Δ+")


def _delta_minus(lo: int) -> GradedComplex:
    cx = dualize(_delta_plus(-lo - 1))
    return GradedComplex(cx.lo, cx.hi, cx.basis, cx.diff, cx.left_closed, cx.right_closed,
                         {"name": "Δ-"})


# Δ₋^{-1} has basis [e^∨, (ξe)^∨]; the module generator 1 is (ξe)^∨ and it goes to ξe
GLUE = SparseMatrix.from_dense([[0, 0], [0, 1]])


def koszul_complex(variant: str, window: tuple[int, int]) -> GradedComplex:
    lo, hi = window
    if variant not in KOSZUL_VARIANTS:
        raise ValueError(f"unknown Koszul variant {variant!r}")
    if lo > hi:
        raise ValueError("empty window")
    if variant in ("delta_plus", "loc_poly") and lo != 0:
        raise ValueError(f"{variant} windows start at 0")
    if variant == "delta_minus" and hi != -1:
        raise ValueError("delta_minus windows end at -1")
    if variant in ("janus", "loc_laurent") and not (lo <= -1 and hi >= 0):
        raise ValueError(f"{variant} windows must contain -1 and 0")

    if variant == "delta_plus":
        return _delta_plus(hi)
    if variant == "delta_minus":
        return _delta_minus(lo)
    if variant == "janus":
        cx = glue(_delta_minus(lo), _delta_plus(hi), GLUE)
        return GradedComplex(cx.lo, cx.hi, cx.basis, cx.diff, False, False, {"name": "Δ"})
    labels = lambda i: [f"1*x^{i}", f"xi*x^{i}"]  # noqa: E731
    if variant == "loc_poly":
        return _uniform(0, hi, labels, K, True, False, "K(l[x],x)")
    return _uniform(lo, hi, labels, K, False, False, "K(l[x,1/x],x)")


def iso_localized(variant: str, window: tuple[int, int]) -> ChainMap:
    """Explicit isomorphism ``K(l[x],x) -> Δ₊`` (``'poly'``) or ``K(l[x,1/x],x) -> Δ`` (``'laurent'``).

    Nonnegative degrees swap the two basis vectors (``1*x^n -> xi*e*x^n``,
    ``xi*x^n -> e*x^n``).  In degree ``-n-1`` the Laurent monomials go to the
    dual basis: ``1*x^(-n-1) -> (e*x^n)^∨`` and ``xi*x^(-n-1) -> (xi*e*x^n)^∨``.
    """
    swap = SparseMatrix.from_dense([[0, 1], [1, 0]])
    eye = SparseMatrix.identity(2)
    if variant == "poly":
        src = koszul_complex("loc_poly", window)
        tgt = koszul_complex("delta_plus", window)
    elif variant == "laurent":
        src = koszul_complex("loc_laurent", window)
        tgt = koszul_complex("janus", window)
    else:
        raise ValueError("variant must be 'poly' or 'laurent'")
    maps = {i: (swap if i >= 0 else eye) for i in src.degrees}
    return ChainMap(src, tgt, maps)


def sphere_koszul_basis_change(side: str, window: tuple[int, int]) -> ChainMap:
    """Base change from ``Δ₊``, ``Δ₋`` or ``Δ`` onto the matching sphere complex.

    In degrees ``>= 0`` the map is the matrix with columns ``(α, β)``, which
    conjugates ``B`` to ``A``.  The negative part carries the transposed
    differential, and there the columns come in the order ``(β, α)``.  On
    its own the minus half ends at degree ``-1``, so its target is ``C₋``
    moved down one degree, whose differential is ``-A``, and the columns
    become ``(β, -α)``.  The chosen matrices are recorded in ``note``.
    """
    lo, hi = window
    ab = SparseMatrix.from_columns(2, [ALPHA, BETA])
    ba = SparseMatrix.from_columns(2, [BETA, ALPHA])
    b_neg_a = SparseMatrix.from_columns(2, [BETA, tuple(-v for v in ALPHA)])
    if side == "plus":
        src = koszul_complex("delta_plus", window)
        tgt = sphere_complex(side="plus", window=window)
        maps = {i: ab for i in src.degrees}
        note = "(α,β) in every degree"
    elif side == "minus":
        src = koszul_complex("delta_minus", window)
        tgt = shift(sphere_complex(side="minus", window=(lo + 1, 0)), 1)
        maps = {i: b_neg_a for i in src.degrees}
        note = "(β,-α) in every degree; target is C- moved down one degree"
    elif side == "both":
        src = koszul_complex("janus", window)
        tgt = sphere_complex(side="both", window=window)
        maps = {i: (ab if i >= 0 else ba) for i in src.degrees}
        note = "(α,β) in degrees >= 0, (β,α) in degrees <= -1"
    else:
        raise ValueError(f"unknown side {side!r}")
    return ChainMap(src, tgt, maps, note)


def decalage_check(cx: GradedComplex, sigma: Mapping[int, SparseMatrix] | None = None) -> dict:
    """Shift-invariance of the term dimensions, plus an optional ``σ: C -> C[1]``.

    ``σ`` is given degree by degree on the overlap of the two windows and is
    checked as a chain map between the two restrictions.
    """
    moved = shift(cx, 1)
    lo, hi = max(cx.lo, moved.lo), min(cx.hi, moved.hi)
    if lo > hi:
        raise StructuralError("the complex and its shift do not overlap")
    dims_equal = all(cx.dim(i) == moved.dim(i) for i in range(lo, hi + 1))
    out = {"dims_shift_invariant": dims_equal, "overlap": [lo, hi]}
    if sigma is not None:
        rep = verify_chain_map(ChainMap(truncate(cx, lo, hi), truncate(moved, lo, hi), sigma))
        out["sigma_chain_map"] = rep.passed
        out["sigma_iso"] = rep.iso
    return out


def matrix_identities() -> dict[str, bool]:
    """The matrix facts relating A, B, α and β."""
    alpha = SparseMatrix.from_columns(2, [ALPHA])
    beta = SparseMatrix.from_columns(2, [BETA])
    P = SparseMatrix.from_columns(2, [ALPHA, BETA])
    return {
        "A^2=0": (A @ A).is_zero(),
        "B^2=0": (B @ B).is_zero(),
        "Aα=β": A @ alpha == beta,
        "Aβ=0": (A @ beta).is_zero(),
        "AP=PB": A @ P == P @ B,
        "P invertible": rank(P) == 2,
    }
