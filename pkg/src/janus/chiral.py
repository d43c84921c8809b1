"""Conformal-weight pieces of the chiral Koszul complex and the chiral Janus bouquet.

A weight-``N`` piece factors as ``V_N`` (positive-weight generators) times
the zero-weight ring in ``x[0]`` and ``xi[0]``.  Only the zero-weight ``x``
exponent is unbounded, so each variant is cut to the degrees whose terms
are complete for exponents ``|a| <= M``:

==========  ============================  ==================
variant     window                        edges
==========  ============================  ==================
plain       ``[-N, M-N]``                 closed / open
quotient    ``[N-M-|I|+1, N-|I|]``        open / closed
localized   ``[N-M, M-N]`` (one var)      open / open
vn_only     ``[-N, N]``                   closed / closed
==========  ============================  ==================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .classical import koszul_complex
from .complexes import (
    ChainMap,
    DSquaredError,
    GradedComplex,
    StructuralError,
    cohomology,
    direct_sum,
    glue,
    relabel,
    shift,
    tensor,
    truncate,
    verify_chain_map,
)
from .linalg import SparseMatrix
from .superpoly import (
    Derivation,
    Factors,
    Generator,
    Kind,
    Polynomial,
    degree,
    enumerate_weight_basis,
    label,
    mul_factors,
    parity,
    variables,
)

VARIANTS = ("plain", "localized", "quotient", "vn_only", "janus")


# ---------------------------------------------------------------------------
# the two odd derivations


def _d_rule(g: Generator) -> Polynomial:
    if g.kind is Kind.XI:
        return {((Generator(Kind.X, g.var, g.weight), 1),): Fraction(1)}
    if g.kind is Kind.DX:
        return {((Generator(Kind.DXI, g.var, g.weight), 1),): Fraction(-1)}
    return {}


def _g1_rule(g: Generator) -> Polynomial:
    if g.weight == 0:
        return {}
    if g.kind is Kind.X:
        return {((Generator(Kind.XI, g.var, g.weight), 1),): Fraction(g.weight)}
    if g.kind is Kind.DXI:
        return {((Generator(Kind.DX, g.var, g.weight), 1),): Fraction(-g.weight)}
    return {}


D_CH = Derivation(1, _d_rule)
G1 = Derivation(1, _g1_rule)


def d_ch(p) -> Polynomial:
    """The chiral Koszul differential: ``xi -> x``, ``dx -> -dxi``, ``x, dxi -> 0``."""
    return D_CH(p)


def g1(p) -> Polynomial:
    """Odd derivation with ``x[-n] -> n*xi[-n]`` and ``dxi[-n] -> -n*dx[-n]``.

    Its anticommutator with ``d_ch`` multiplies every monomial by its weight.
    """
    return G1(p)


def singular(factors: Factors, vars_: Sequence[int]) -> bool:
    """Every variable carries a strictly negative ``x[i,0]`` exponent."""
    exps = {g.var: e for g, e in factors if g.kind is Kind.X and g.weight == 0}
    return all(exps.get(v, 0) < 0 for v in vars_)


def operator_matrix(
    D: Derivation,
    source: Sequence[Factors],
    target: Sequence[Factors],
    keep: Callable[[Factors], bool] | None = None,
) -> SparseMatrix:
    """Matrix of ``D`` from one monomial list to another.

    Image monomials rejected by ``keep`` are dropped (a quotient projection);
    any other image monomial missing from ``target`` is an error.
    """
    index = {f: k for k, f in enumerate(target)}
    entries = {}
    for col, f in enumerate(source):
        for img, c in D({f: Fraction(1)}).items():
            if keep is not None and not keep(img):
                continue
            row = index.get(img)
            if row is None:
                raise StructuralError(f"{label(img)} (image of {label(f)}) is not in the target basis")
            entries[(row, col)] = c
    return SparseMatrix(len(target), len(source), entries)


# ---------------------------------------------------------------------------
# weight-N complexes


def weight_window(variant: str, N: int, M: int, n_vars: int = 1) -> tuple[int, int, bool, bool]:
    """``(lo, hi, left_closed, right_closed)`` of the complete degrees."""
    if N < 0 or M < 0:
        raise ValueError("weight and zero_window must be nonnegative")
    if variant == "plain":
        lo, hi, lc, rc = -N, M - N, True, False
    elif variant == "quotient":
        lo, hi, lc, rc = N - M - n_vars + 1, N - n_vars, False, True
    elif variant == "localized":
        if n_vars != 1:
            raise ValueError("localized terms are infinite-dimensional for more than one variable")
        lo, hi, lc, rc = N - M, M - N, False, False
    elif variant == "vn_only":
        lo, hi, lc, rc = -N, N, True, True
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if lo > hi:
        raise ValueError(f"zero_window {M} leaves no complete degree for {variant} at weight {N}")
    return lo, hi, lc, rc


def _assemble(bases: Mapping[int, list[Factors]], lo: int, hi: int, lc: bool, rc: bool,
              tagged: bool, keep, meta: dict) -> GradedComplex:
    diff = {k: operator_matrix(D_CH, bases[k], bases[k + 1], keep) for k in range(lo, hi)}
    for k in range(lo, hi - 1):
        comp = diff[k + 1] @ diff[k]
        if not comp.is_zero():
            (r, c), _ = min(comp.entries.items())
            raise DSquaredError(
                f"d∘d ≠ 0: {label(bases[k][c], tagged)} reaches {label(bases[k + 2][r], tagged)}"
            )
    labels = {k: [label(f, tagged) for f in bases[k]] for k in range(lo, hi + 1)}
    return GradedComplex(lo, hi, labels, diff, lc, rc, meta)


def build_weight_complex(variant: str, N: int, M: int = 0, I=1) -> GradedComplex:
    """Weight-``N`` piece of the chosen variant, in its complete-degree window."""
    if variant == "janus":
        return build_chiral_janus(N, M, I)
    vars_ = variables(I)
    lo, hi, lc, rc = weight_window(variant, N, M, len(vars_))
    bases = enumerate_weight_basis(N, vars_, variant, M, degrees=(lo, hi))
    bases = {k: bases.get(k, []) for k in range(lo, hi + 1)}
    keep = (lambda f: singular(f, vars_)) if variant == "quotient" else None
    meta = {"variant": variant, "weight": str(N), "zero_window": str(M),
            "vars": ",".join(map(str, vars_))}
    return _assemble(bases, lo, hi, lc, rc, len(vars_) > 1, keep, meta)


def gluing_monomial(I=1) -> Factors:
    """``prod_i xi[i,0] * x[i,0]^-1``, the cocycle the bouquet sends to 1."""
    vars_ = variables(I)
    f = [(Generator(Kind.XI, v, 0), 1) for v in vars_]
    f += [(Generator(Kind.X, v, 0), -1) for v in vars_]
    return tuple(sorted(f))


def build_chiral_janus(N: int, M: int, I=1) -> GradedComplex:
    """Quotient (moved so its cocycle sits in degree -1) next to the plain piece.

    At weight 0 the two are glued by the functional reading off the
    coefficient of :func:`gluing_monomial` and landing on ``1``; at positive
    weight the differential is the direct sum.  Window ``[N-M, M-N]``.
    """
    vars_ = variables(I)
    n = len(vars_)
    tagged = n > 1
    if N < 0:
        raise ValueError("weight must be nonnegative")
    if M < max(N, 1):
        raise ValueError("the bouquet needs zero_window >= max(weight, 1)")
    q = build_weight_complex("quotient", N, M, vars_)
    q = relabel(shift(q, 1 - n), lambda s: f"quotient:{s}")
    p = relabel(build_weight_complex("plain", N, M, vars_), lambda s: f"plain:{s}")
    meta = {"variant": "janus", "weight": str(N), "zero_window": str(M),
            "vars": ",".join(map(str, vars_))}
    if N == 0:
        col = q.basis[-1].index("quotient:" + label(gluing_monomial(vars_), tagged))
        row = p.basis[0].index("plain:1")
        g = SparseMatrix(p.dim(0), q.dim(-1), {(row, col): 1})
        cx = glue(q, p, g)
    else:
        lo, hi = N - M, M - N
        cx = direct_sum(truncate(q, lo, hi), truncate(p, lo, hi))
    return GradedComplex(cx.lo, cx.hi, cx.basis, cx.diff, cx.left_closed, cx.right_closed, meta)


def gluing_functional_check(M: int, I=1) -> dict:
    """Exhaustively confirm no ``d_ch`` image of a quotient monomial meets the glued cocycle."""
    vars_ = variables(I)
    target = gluing_monomial(vars_)
    lo, hi, _, _ = weight_window("quotient", 0, M, len(vars_))
    hits = []
    for k, fs in enumerate_weight_basis(0, vars_, "quotient", M, degrees=(lo, hi)).items():
        for f in fs:
            if target in d_ch({f: Fraction(1)}):
                hits.append(label(f, len(vars_) > 1))
    return {"checked_degrees": [lo, hi], "hits": hits, "passed": not hits}


# ---------------------------------------------------------------------------
# the homotopy identity


@dataclass(frozen=True)
class HomotopyCertificate:
    weight: int
    variant: str
    residual: SparseMatrix
    passed: bool
    eigenvalues: Mapping[str, Fraction] = field(default_factory=dict)
    first_offending: str | None = None
    acyclic: bool | None = None

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "variant": self.variant,
            "passed": self.passed,
            "residual_nnz": self.residual.nnz,
            "eigenvalues": sorted({str(v) for v in self.eigenvalues.values()}),
            "first_offending": self.first_offending,
            "acyclic": self.acyclic,
        }


def verify_homotopy(N: int, I=1, zero_window: int | None = None) -> HomotopyCertificate:
    """Check ``d∘g1 + g1∘d = N·Id`` as an exact matrix identity.

    Without ``zero_window`` this runs on ``V_N``, which both operators
    preserve.  With it, the source is the full weight-``N`` span with
    ``x[0]`` exponents up to ``M``, and the operators land in the span with
    exponents up to ``M+1`` (only ``d`` raises the exponent, ``g1`` never
    touches weight-zero generators).
    """
    vars_ = variables(I)
    tagged = len(vars_) > 1
    if zero_window is None:
        variant = "vn_only"
        src = _flat(enumerate_weight_basis(N, vars_, "vn_only"))
        amb = src
    else:
        variant = "plain"
        src = _flat(enumerate_weight_basis(N, vars_, "plain", zero_window))
        amb = _flat(enumerate_weight_basis(N, vars_, "plain", zero_window + 1))
    d_src = operator_matrix(D_CH, src, amb)
    g_src = operator_matrix(G1, src, src)
    g_amb = operator_matrix(G1, amb, amb)
    index = {f: k for k, f in enumerate(amb)}
    incl = SparseMatrix(len(amb), len(src), {(index[f], k): 1 for k, f in enumerate(src)})
    total = d_src @ g_src + g_amb @ d_src
    residual = total - incl.scale(N)
    first = None
    if not residual.is_zero():
        first = label(src[min(c for _, c in residual.entries)], tagged)
    eig = {}
    for k, f in enumerate(src):
        col = {r: v for (r, c), v in total.entries.items() if c == k}
        if set(col) <= {index[f]}:
            eig[label(f, tagged)] = col.get(index[f], Fraction(0))
    acyclic = None
    if variant == "vn_only":
        acyclic = cohomology(build_weight_complex("vn_only", N, 0, vars_)).is_acyclic()
    return HomotopyCertificate(N, variant, residual, residual.is_zero(), eig, first, acyclic)


def _flat(bases: Mapping[int, list[Factors]]) -> list[Factors]:
    return [f for k in sorted(bases) for f in bases[k]]


def dim_vn(N: int, I=1) -> int:
    return sum(len(v) for v in enumerate_weight_basis(N, I, "vn_only").values())


# ---------------------------------------------------------------------------
# comparisons


@dataclass(frozen=True)
class TensorReport:
    weight: int
    zero_window: int
    passed: bool
    dims_tensor: Mapping[int, int]
    dims_direct: Mapping[int, int]
    differential_agrees: bool
    first_failure: int | None = None
    vacuous: bool = False

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "zero_window": self.zero_window,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "dims_tensor": {str(k): v for k, v in self.dims_tensor.items()},
            "dims_direct": {str(k): v for k, v in self.dims_direct.items()},
            "differential_agrees": self.differential_agrees,
            "first_failure": self.first_failure,
        }


def tensor_bijection(N: int, M: int) -> ChainMap:
    """``V_N ⊗ (weight-0 piece) -> weight-N piece``, ``v⊗z ↦ (-1)^((deg v + |v|)·deg z) v·z``."""
    V = build_weight_complex("vn_only", N)
    Z = build_weight_complex("plain", 0, M)
    T = tensor(V, Z)
    direct = build_weight_complex("plain", N, M)
    v_basis = enumerate_weight_basis(N, 1, "vn_only")
    z_basis = enumerate_weight_basis(0, 1, "plain", M)
    index = {k: {f: r for r, f in enumerate(fs)}
             for k, fs in enumerate_weight_basis(N, 1, "plain", M, degrees=direct.window).items()}
    maps = {}
    for n in T.degrees:
        entries = {}
        col = 0
        for p in range(V.lo, V.hi + 1):
            q = n - p
            if not Z.lo <= q <= Z.hi:
                continue
            for v in v_basis.get(p, []):
                for z in z_basis.get(q, []):
                    sign, f = mul_factors(v, z)
                    s = -1 if ((degree(v) + parity(v)) * degree(z)) % 2 else 1
                    entries[(index[n][f], col)] = sign * s
                    col += 1
        maps[n] = SparseMatrix(direct.dim(n), T.dim(n), entries)
    return ChainMap(T, direct, maps, "v⊗z ↦ (-1)^((deg v + parity v)·deg z) v·z")


def tensor_decomposition_check(N: int, M: int) -> TensorReport:
    if N == 0:
        return TensorReport(0, M, True, {}, {}, True, vacuous=True)
    f = tensor_bijection(N, M)
    dt, dd = f.source.dims(), f.target.dims()
    rep = verify_chain_map(f)
    first = next((k for k in dt if dt[k] != dd.get(k)), rep.first_failure)
    passed = dt == dd and rep.passed and rep.iso
    return TensorReport(N, M, passed, dt, dd, rep.passed, first)


def _label_map(src: GradedComplex, tgt: GradedComplex, rename: Callable[[str], str]) -> ChainMap:
    maps = {}
    for k in src.degrees:
        index = {s: r for r, s in enumerate(tgt.basis[k])}
        maps[k] = SparseMatrix(tgt.dim(k), src.dim(k),
                               {(index[rename(s)], c): 1 for c, s in enumerate(src.basis[k])})
    return ChainMap(src, tgt, maps)


def _koszul_label(s: str) -> str:
    # "1*x^i" -> "x[0]^i", "xi*x^i" -> "xi[0]*x[0]^i"
    head, _, e = s.partition("*x^")
    e = int(e)
    xpart = "" if e == 0 else ("x[0]" if e == 1 else f"x[0]^{e}")
    if head == "1":
        return xpart or "1"
    return "xi[0]" + (f"*{xpart}" if xpart else "")


def weight_zero_iso(M: int, localized: bool = False) -> ChainMap:
    """Label bijection from ``K(l[x],x)`` (or its Laurent version) to the weight-0 chiral piece."""
    if localized:
        tgt = build_weight_complex("localized", 0, M)
        src = koszul_complex("loc_laurent", tgt.window)
    else:
        tgt = build_weight_complex("plain", 0, M)
        src = koszul_complex("loc_poly", tgt.window)
    src = GradedComplex(src.lo, src.hi, src.basis, src.diff, tgt.left_closed, tgt.right_closed,
                        src.meta)
    return _label_map(src, tgt, _koszul_label)


def total_plain_cohomology(N_max: int, M: int, I=1) -> dict[int, dict[int, int]]:
    """Nonzero trusted cohomology of the plain pieces, weight by weight."""
    out = {}
    for N in range(N_max + 1):
        cx = build_weight_complex("plain", N, max(M, N + 1), I)
        out[N] = cohomology(cx).nonzero()
    return out
