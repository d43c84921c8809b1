"""Several variables: plain and dual pieces, their Janus bouquet, and local cohomology.

``power_koszul`` is the commutative Koszul complex of the sequence
``x[i,0]^m_i`` acting on a weight-``N`` piece by multiplication only.  The
Koszul degree ``j`` counts auxiliary odd generators ``eps[i]``; a term
``c*eps[S]`` keeps coefficient exponents ``a_i <= M + m_i`` for ``i`` in ``S``
and ``a_i <= M`` otherwise, so the truncation is a subcomplex and its
cohomology is exactly the cohomology of a tensor product of two-term
complexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Sequence

from .chiral import build_chiral_janus, build_weight_complex, dim_vn
from .complexes import (
    ChainMap,
    GradedComplex,
    cohomology,
    dualize,
    shift,
    verify_chain_map,
)
from .linalg import Echelon, SparseMatrix, hstack, rank
from .superpoly import (
    Factors,
    Generator,
    Kind,
    enumerate_weight_basis,
    label,
    variables,
)

MULTIVAR_VARIANTS = ("plain", "dual")


def build_multivar_complex(variant: str, N: int, M: int, I=2) -> GradedComplex:
    """``plain`` is the tensor power of the chiral Koszul piece; ``dual`` the tensor power of the quotient."""
    if variant not in MULTIVAR_VARIANTS:
        raise ValueError(f"variant must be one of {MULTIVAR_VARIANTS}")
    return build_weight_complex("plain" if variant == "plain" else "quotient", N, M, I)


def build_multivar_janus(N: int, M: int, I=2) -> GradedComplex:
    return build_chiral_janus(N, M, I)


def duality_dims_check(N: int, M: int, I=2) -> dict:
    """``dim dual^(-j-|I|) = dim plain^j`` wherever both terms are complete."""
    n = len(variables(I))
    plain = build_multivar_complex("plain", N, M, I)
    dual = build_multivar_complex("dual", N, M, I)
    flipped = shift(dualize(plain), n - 1)
    common = [k for k in dual.degrees if flipped.lo <= k <= flipped.hi]
    mismatches = [k for k in common if dual.dim(k) != flipped.dim(k)]
    return {"degrees": common, "mismatches": mismatches, "passed": bool(common) and not mismatches}


# ---------------------------------------------------------------------------
# Koszul complexes on powers


@dataclass(frozen=True)
class PowerKoszulSpec:
    exponents: tuple[int, ...]
    weight: int = 0
    zero_window: int = 0
    regular: bool = True

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(m) for m in self.exponents))
        if not self.exponents:
            raise ValueError("need at least one exponent")
        if min(self.exponents) < 1:
            raise ValueError("exponents must be >= 1")
        if self.weight < 0 or self.zero_window < 0:
            raise ValueError("weight and zero_window must be nonnegative")

    @property
    def vars(self) -> tuple[int, ...]:
        return variables(len(self.exponents))

    def bounds(self, S: Sequence[int]) -> tuple[int, ...]:
        """Per-variable cap on the ``x[i,0]`` exponent in the ``eps[S]`` term."""
        return tuple(self.zero_window + (m if i in S else 0)
                     for i, m in zip(self.vars, self.exponents))


def _zero_exponents(f: Factors, vars_: Sequence[int]) -> tuple[int, ...]:
    exps = {g.var: e for g, e in f if g.kind is Kind.X and g.weight == 0}
    return tuple(exps.get(v, 0) for v in vars_)


def _times_x(f: Factors, powers: Sequence[int], vars_: Sequence[int]) -> Factors:
    exps = dict(zip(vars_, _zero_exponents(f, vars_)))
    rest = [(g, e) for g, e in f if not (g.kind is Kind.X and g.weight == 0)]
    for v, p in zip(vars_, powers):
        a = exps[v] + p
        if a:
            rest.append((Generator(Kind.X, v, 0), a))
    return tuple(sorted(rest))


def _eps_label(S: Sequence[int]) -> str:
    return "".join(f"*eps[{i}]" for i in S)


@dataclass(frozen=True)
class _PowerData:
    spec: PowerKoszulSpec
    terms: Mapping[int, list[tuple[tuple[int, ...], Factors]]]

    def index(self, j: int) -> dict[tuple[tuple[int, ...], Factors], int]:
        return {t: k for k, t in enumerate(self.terms[j])}


def _power_terms(spec: PowerKoszulSpec) -> _PowerData:
    vars_ = spec.vars
    n = len(vars_)
    cap = spec.zero_window + max(spec.exponents)
    pool = [f for fs in enumerate_weight_basis(spec.weight, vars_, "plain", cap).values() for f in fs]
    pool.sort()
    terms = {}
    for j in range(n + 1):
        out = []
        for S in combinations(vars_, j):
            bound = spec.bounds(S)
            for f in pool:
                if all(a <= b for a, b in zip(_zero_exponents(f, vars_), bound)):
                    out.append((S, f))
        terms[j] = out
    return _PowerData(spec, terms)


def _power_complex(data: _PowerData) -> GradedComplex:
    spec = data.spec
    vars_ = spec.vars
    n = len(vars_)
    tagged = n > 1
    diff = {}
    for j in range(n):
        target = data.index(j + 1)
        entries = {}
        if spec.regular:
            for col, (S, f) in enumerate(data.terms[j]):
                for pos, i in enumerate(vars_):
                    if i in S:
                        continue
                    sign = -1 if sum(1 for s in S if s < i) % 2 else 1
                    powers = [spec.exponents[pos] if v == i else 0 for v in vars_]
                    T = tuple(sorted(S + (i,)))
                    entries[(target[(T, _times_x(f, powers, vars_))], col)] = sign
        diff[j] = SparseMatrix(len(data.terms[j + 1]), len(data.terms[j]), entries)
    basis = {j: [label(f, tagged) + _eps_label(S) for S, f in data.terms[j]] for j in range(n + 1)}
    meta = {"variant": "power_koszul", "exponents": ",".join(map(str, spec.exponents)),
            "weight": str(spec.weight), "zero_window": str(spec.zero_window),
            "regular": str(spec.regular).lower()}
    return GradedComplex(0, n, basis, diff, True, True, meta)


def power_koszul(spec: PowerKoszulSpec) -> GradedComplex:
    return _power_complex(_power_terms(spec))


def singular_classes(spec: PowerKoszulSpec) -> dict:
    """Match the top cohomology with purely singular monomials.

    The top-degree terms with every ``a_i < m_i`` span a complement of the
    coboundaries; ``c*x^a*eps[I]`` corresponds to ``c*x^(a-m)``.
    """
    data = _power_terms(spec)
    cx = _power_complex(data)
    vars_ = spec.vars
    n = len(vars_)
    top = data.terms[n]
    standard = [k for k, (_, f) in enumerate(top)
                if all(a < m for a, m in zip(_zero_exponents(f, vars_), spec.exponents))]
    ech = Echelon(len(top))
    for col in cx.d(n - 1).column_dicts():
        if col:
            ech.add(col)
    b_rank = len(ech)
    complement = all(ech.add({k: 1}) is not None for k in standard)
    spans = len(ech) == len(top)
    neg = [-m for m in spec.exponents]
    images = sorted(label(_times_x(top[k][1], neg, vars_), n > 1) for k in standard)
    return {"standard": len(standard), "boundary_rank": b_rank,
            "complement": complement and spans, "singular_labels": images}


def transition_map(small: PowerKoszulSpec, large: PowerKoszulSpec) -> ChainMap:
    """``K(x^m) -> K(x^m')``: the ``eps[S]`` term is multiplied by ``prod_{i in S} x_i^(m'_i - m_i)``."""
    if (small.weight, small.zero_window) != (large.weight, large.zero_window):
        raise ValueError("transition needs the same weight and zero_window")
    if len(small.exponents) != len(large.exponents) or any(
        a > b for a, b in zip(small.exponents, large.exponents)
    ):
        raise ValueError("exponents must grow componentwise")
    vars_ = small.vars
    src_data, tgt_data = _power_terms(small), _power_terms(large)
    src, tgt = _power_complex(src_data), _power_complex(tgt_data)
    maps = {}
    for j in src.degrees:
        target = tgt_data.index(j)
        entries = {}
        for col, (S, f) in enumerate(src_data.terms[j]):
            powers = [b - a if v in S else 0
                      for v, a, b in zip(vars_, small.exponents, large.exponents)]
            entries[(target[(S, _times_x(f, powers, vars_))], col)] = 1
        maps[j] = SparseMatrix(tgt.dim(j), src.dim(j), entries)
    return ChainMap(src, tgt, maps, "eps[S] term times prod_{i in S} x_i^(m'_i - m_i)")


def injective_on_top(f: ChainMap) -> bool:
    """The induced map on top cohomology is injective: ``rank[B'|f] - rank B' = dim H``."""
    n = f.source.hi
    b_src = f.source.d(n - 1)
    b_tgt = f.target.d(n - 1)
    h = f.source.dim(n) - rank(b_src)
    return rank(hstack([b_tgt, f.maps[n]])) - rank(b_tgt) == h


@dataclass(frozen=True)
class LocalCohomologyReport:
    n_vars: int
    m_max: int
    weight: int
    zero_window: int
    tuples: tuple[tuple[int, ...], ...]
    concentration: Mapping[tuple[int, ...], bool]
    dims: Mapping[tuple[int, ...], Mapping[int, int]]
    euler: Mapping[tuple[int, ...], bool]
    transitions: Mapping[tuple[tuple[int, ...], tuple[int, ...]], bool]
    dimension_match: bool
    top_dim: int
    quotient_count: int
    singular_match: bool | None
    first_failure: str | None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_json(self) -> dict:
        key = lambda t: ",".join(map(str, t))  # noqa: E731
        return {
            "vars": self.n_vars,
            "m_max": self.m_max,
            "weight": self.weight,
            "zero_window": self.zero_window,
            "tuples": [list(t) for t in self.tuples],
            "concentration": {key(t): "pass" if ok else "fail" for t, ok in self.concentration.items()},
            "dims": {key(t): {str(j): d for j, d in ds.items()} for t, ds in self.dims.items()},
            "euler_poincare": {key(t): ok for t, ok in self.euler.items()},
            "transitions": {f"{key(a)}->{key(b)}": ok for (a, b), ok in self.transitions.items()},
            "dimension_match": {"top_dim": self.top_dim, "quotient_count": self.quotient_count,
                                "passed": self.dimension_match},
            "singular_match": self.singular_match,
            "passed": self.passed,
            "first_failure": self.first_failure,
        }


def local_cohomology_check(I, m_max: int, N: int = 0, M: int = 0, regular: bool = True) -> LocalCohomologyReport:
    """Concentration, injective transitions and the singular-part count, for all tuples ``<= m_max``.

    The dimension comparison uses the tuple ``(M, ..., M)`` against the
    quotient basis of zero window ``M``.
    """
    vars_ = variables(I)
    n = len(vars_)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    tuples = tuple(product(range(1, m_max + 1), repeat=n))
    specs = {t: PowerKoszulSpec(t, N, M, regular) for t in tuples}
    first = None
    concentration, dims, euler = {}, {}, {}
    for t in tuples:
        cx = power_koszul(specs[t])
        h = cohomology(cx).dims
        dims[t] = dict(h)
        concentration[t] = all(d == 0 for j, d in h.items() if j != n)
        euler[t] = sum((-1) ** j * cx.dim(j) for j in cx.degrees) == sum((-1) ** j * d for j, d in h.items())
        if first is None and not concentration[t]:
            bad = min(j for j, d in h.items() if j != n and d)
            first = f"tuple {t}: H^{bad} = {h[bad]}"
        if first is None and not euler[t]:
            first = f"tuple {t}: Euler-Poincaré mismatch"
    transitions = {}
    for t in tuples:
        for pos in range(n):
            u = tuple(m + (k == pos) for k, m in enumerate(t))
            if u in specs:
                f = transition_map(specs[t], specs[u])
                ok = verify_chain_map(f).passed and injective_on_top(f)
                transitions[(t, u)] = ok
                if first is None and not ok:
                    first = f"transition {t} -> {u} is not injective on H^{n}"
    at = (max(M, 1),) * n
    spec = PowerKoszulSpec(at, N, M, regular)
    top_dim = cohomology(power_koszul(spec)).dims[n]
    quotient = [f for fs in enumerate_weight_basis(N, vars_, "quotient", at[0]).values() for f in fs]
    dim_ok = top_dim == len(quotient) == dim_vn(N, vars_) * (2 * at[0]) ** n
    if first is None and not dim_ok:
        first = f"H^{n} at {at} has dim {top_dim}, quotient count {len(quotient)}"
    sing_ok = None
    if regular:
        sing = singular_classes(spec)
        sing_ok = sing["complement"] and sorted(label(f, n > 1) for f in quotient) == sing["singular_labels"]
    if first is None and sing_ok is False:
        first = f"top classes at {at} do not match the singular monomials"
    return LocalCohomologyReport(
        n, m_max, N, M, tuples, concentration, dims, euler, transitions,
        dim_ok, top_dim, len(quotient), sing_ok, first,
    )


def koszul_top_dim(exponents: Sequence[int], N: int = 0, I=None) -> int:
    """Expected top cohomology: ``dim V_N * prod 2*m_i``."""
    vars_ = variables(len(exponents) if I is None else I)
    out = dim_vn(N, vars_)
    for m in exponents:
        out *= 2 * m
    return out


__all__ = [
    "LocalCohomologyReport",
    "PowerKoszulSpec",
    "build_multivar_complex",
    "build_multivar_janus",
    "duality_dims_check",
    "injective_on_top",
    "koszul_top_dim",
    "local_cohomology_check",
    "power_koszul",
    "singular_classes",
    "transition_map",
]
