from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from janus.chiral import d_ch, g1
from janus.superpoly import (
    ONE,
    DomainError,
    Generator,
    Kind,
    Monomial,
    enumerate_weight_basis,
    format_poly,
    gen,
    generating_function,
    gradings,
    label,
    monomial,
    mul,
    parse_monomial,
    parse_poly,
    poly_add,
    poly_mul,
    positive_weight_monomials,
    weight,
)

# ---------------------------------------------------------------------------
# oracles


def series_oracle(N_max: int, n_vars: int = 1) -> list[int]:
    """Coefficients of prod (1+q^n)^2k / (1-q^n)^2k through sympy polynomial arithmetic."""
    q = sympy.symbols("q")
    acc = sympy.Poly(1, q)
    for n in range(1, N_max + 1):
        geometric = sympy.Poly(sum(q ** (n * k) for k in range(N_max // n + 1)), q)
        factor = (sympy.Poly(1 + q**n, q) * geometric) ** (2 * n_vars)
        acc = acc * factor
        acc = sympy.Poly(sum(acc.coeff_monomial(q**i) * q**i for i in range(N_max + 1)), q)
    return [int(acc.coeff_monomial(q**i)) for i in range(N_max + 1)]


def brute_force_vn(N: int, n_vars: int = 1) -> dict[int, int]:
    """Count weight-N monomials by degree, walking exponent vectors with a weight budget."""
    gens = [(k, w) for _ in range(n_vars) for w in range(1, N + 1) for k in ("x", "dx", "xi", "dxi")]
    out: dict[int, int] = {}

    def walk(i: int, budget: int, deg: int) -> None:
        if i == len(gens):
            if budget == 0:
                out[deg] = out.get(deg, 0) + 1
            return
        k, w = gens[i]
        top = 1 if k in ("xi", "dxi") else budget // w
        for e in range(min(top, budget // w) + 1):
            walk(i + 1, budget - e * w, deg + e * {"x": 1, "dx": -1}.get(k, 0))

    walk(0, N, 0)
    return out


# ---------------------------------------------------------------------------
# dimensions


def test_dim_v1_and_v2():
    v1 = positive_weight_monomials(1, 1)
    assert sorted(label(f) for f in v1) == ["dx[-1]", "dxi[-1]", "x[-1]", "xi[-1]"]
    assert len(positive_weight_monomials(2, 1)) == 12


@pytest.mark.parametrize("N", range(0, 6))
def test_vn_matches_brute_force(N):
    got = {k: len(v) for k, v in enumerate_weight_basis(N, 1, "vn_only").items()}
    assert got == brute_force_vn(N)


def test_two_variable_vn_matches_brute_force():
    for N in range(4):
        got = {k: len(v) for k, v in enumerate_weight_basis(N, 2, "vn_only").items()}
        assert got == brute_force_vn(N, 2)


def test_generating_function_matches_sympy():
    assert generating_function(8) == series_oracle(8)
    assert generating_function(5, 2) == series_oracle(5, 2)
    assert [len(positive_weight_monomials(N, 1)) for N in range(9)] == generating_function(8)


def test_vn_degrees_are_symmetric():
    for N in range(1, 6):
        dims = {k: len(v) for k, v in enumerate_weight_basis(N, 1, "vn_only").items()}
        assert all(dims[k] == dims[-k] for k in dims)


def test_zero_mode_variants():
    plain = enumerate_weight_basis(0, 1, "plain", 3)
    assert {k: [label(f) for f in v] for k, v in plain.items()} == {
        0: ["1", "xi[0]"],
        1: ["xi[0]*x[0]", "x[0]"],
        2: ["xi[0]*x[0]^2", "x[0]^2"],
        3: ["xi[0]*x[0]^3", "x[0]^3"],
    }
    quotient = enumerate_weight_basis(0, 1, "quotient", 2)
    assert sorted(quotient) == [-2, -1]
    assert all(e < 0 for fs in quotient.values() for f in fs for g, e in f if g.kind is Kind.X)
    # the plain weight-1 piece with no x[0] freedom is V_1 times {1, xi[0]}
    w1 = [f for fs in enumerate_weight_basis(1, 1, "plain", 0).values() for f in fs]
    assert len(w1) == 8
    assert len([f for f in w1 if all(g.weight for g, _ in f)]) == 4


# ---------------------------------------------------------------------------
# parsing and labels


def test_labels_and_parsing():
    m = parse_monomial("xi[0]*x[0]^-1")
    assert m.coeff == 1 and label(m.factors) == "xi[0]*x[0]^-1"
    # mode syntax: x(-1) is weight 0, dx(-1) is weight 1
    assert parse_monomial("x(-1)").factors == parse_monomial("x[0]").factors
    assert parse_monomial("dx(-1)").factors == parse_monomial("dx[-1]").factors
    two = parse_monomial("xi[1,0]*xi[2,0]*x[1,0]^-1*x[2,0]^-1")
    assert label(two.factors, tagged=True) == "xi[1,0]*xi[2,0]*x[1,0]^-1*x[2,0]^-1"


def test_odd_reordering_sign():
    ab = parse_monomial("xi[-1]*xi[-2]")
    ba = parse_monomial("xi[-2]*xi[-1]")
    assert ab.factors == ba.factors and ab.coeff == -ba.coeff
    assert parse_monomial("xi[-1]*xi[-1]").is_zero


def test_domain_errors():
    with pytest.raises(DomainError):
        parse_monomial("x[-1]^-1")
    with pytest.raises(DomainError):
        gen("dx", weight=0)
    with pytest.raises(DomainError):
        Monomial(((gen("xi", weight=1), 2),))
    with pytest.raises(DomainError):
        mul(parse_monomial("x[0]^-1"), parse_monomial("x[0]"))
    assert mul(parse_monomial("x[0]^-1"), parse_monomial("x[0]"), localized=True).factors == ONE
    with pytest.raises(ValueError):
        parse_monomial("y[0]")


def test_poly_parse_format_round_trip():
    p = parse_poly("2*x[-1]*xi[0] - 1/2*dx[-2] + 3")
    assert parse_poly(format_poly(p)) == p
    assert format_poly({}) == "0"


def test_gradings():
    assert gradings(parse_monomial("x[-2]*dx[-1]*xi[0]")) == (3, 0)
    assert gradings(parse_monomial("x[0]^3")) == (0, 3)
    assert weight(ONE) == 0


# ---------------------------------------------------------------------------
# algebra properties

GENS = [gen(s, v, w) for v in (1, 2) for s, w in
        (("x", 0), ("xi", 0), ("x", 1), ("xi", 1), ("dx", 1), ("dxi", 1), ("x", 2), ("dxi", 2))]


@st.composite
def monomials(draw):
    chosen = draw(st.lists(st.sampled_from(GENS), unique=True, max_size=4))
    pairs = []
    for g in chosen:
        if g.odd:
            e = 1
        elif g.invertible:
            e = draw(st.integers(-2, 2).filter(bool))
        else:
            e = draw(st.integers(1, 2))
        pairs.append((g, e))
    coeff = draw(st.integers(-3, 3).filter(bool))
    return Monomial(tuple(pairs), Fraction(coeff))


@st.composite
def polys(draw):
    out = {}
    for m in draw(st.lists(monomials(), max_size=3)):
        poly_add(out, m.as_poly())
    return out


@settings(max_examples=200, deadline=None)
@given(monomials(), monomials())
def test_supercommutativity(a, b):
    lhs = mul(a, b, localized=True)
    rhs = mul(b, a, localized=True)
    sign = -1 if (a.parity and b.parity) else 1
    assert lhs.factors == rhs.factors or (lhs.is_zero and rhs.is_zero)
    assert lhs.coeff == sign * rhs.coeff


@settings(max_examples=150, deadline=None)
@given(monomials(), monomials(), monomials())
def test_associativity(a, b, c):
    left = mul(mul(a, b, localized=True), c, localized=True)
    right = mul(a, mul(b, c, localized=True), localized=True)
    assert left.as_poly() == right.as_poly()


@settings(max_examples=200, deadline=None)
@given(monomials(), monomials())
def test_super_leibniz(a, b):
    ab = mul(a, b, localized=True).as_poly()
    for D in (d_ch, g1):
        rhs = poly_mul(D(a), b.as_poly())
        sign = -1 if a.parity else 1
        poly_add(rhs, poly_mul(a.as_poly(), D(b)), sign)
        assert D(ab) == rhs


@settings(max_examples=200, deadline=None)
@given(polys())
def test_d_squares_to_zero_and_homotopy_is_weight(p):
    assert d_ch(d_ch(p)) == {}
    assert g1(g1(p)) == {}
    lhs = poly_add(d_ch(g1(p)), g1(d_ch(p)))
    expected = {f: c * weight(f) for f, c in p.items() if weight(f)}
    assert lhs == expected


@settings(max_examples=100, deadline=None)
@given(monomials())
def test_derivations_move_gradings(m):
    w, k = gradings(m)
    for f in d_ch(m):
        assert gradings(f) == (w, k + 1)
    for f in g1(m):
        assert gradings(f) == (w, k - 1)


def test_derivation_examples():
    assert d_ch(parse_monomial("xi[0]*x[0]^4")) == parse_monomial("x[0]^5").as_poly()
    assert d_ch(parse_monomial("xi[0]*x[0]^-1")) == {ONE: 1}
    assert d_ch({ONE: Fraction(1)}) == {}
    assert d_ch(parse_monomial("dx[-1]")) == parse_monomial("-dxi[-1]").as_poly()
    assert g1(parse_monomial("x[-1]")) == parse_monomial("xi[-1]").as_poly()
    assert g1(parse_monomial("x[0]")) == {}
    assert g1(parse_monomial("dxi[-3]")) == parse_monomial("-3*dx[-3]").as_poly()
    x2 = parse_monomial("x[-2]").as_poly()
    assert poly_add(d_ch(g1(x2)), g1(d_ch(x2))) == parse_monomial("2*x[-2]").as_poly()


def test_monomial_helper_sorts_with_sign():
    a, b = gen("xi", 1, 1), gen("xi", 1, 2)
    assert monomial((b, 1), (a, 1)).coeff == -1
    assert Generator(Kind.XI, 1, 0) < Generator(Kind.X, 1, 0)
