from __future__ import annotations

from fractions import Fraction

import pytest

from janus import chiral
from janus.chiral import (
    build_chiral_janus,
    build_weight_complex,
    dim_vn,
    gluing_functional_check,
    tensor_bijection,
    tensor_decomposition_check,
    total_plain_cohomology,
    verify_homotopy,
    weight_window,
    weight_zero_iso,
)
from janus.complexes import ChainMap, check_d_squared, cohomology, verify_chain_map
from janus.linalg import SparseMatrix
from janus.superpoly import Derivation, Generator, Kind, gradings, parse_monomial


def test_weight_zero_plain():
    cx = build_weight_complex("plain", 0, 8)
    h = cohomology(cx, representatives=True)
    assert h.nonzero() == {0: 1}
    assert h.representatives[0] == [{"1": 1}]
    assert cx.trusted_degrees() == list(range(0, 8))


def test_weight_zero_quotient():
    cx = build_weight_complex("quotient", 0, 8)
    h = cohomology(cx, representatives=True)
    assert h.nonzero() == {-1: 1}
    assert h.representatives[-1] == [{"xi[0]*x[0]^-1": 1}]
    assert cx.window == (-8, -1) and cx.right_closed and not cx.left_closed


def test_vn_only_weight_one():
    cx = build_weight_complex("vn_only", 1)
    assert dict(cx.basis) == {-1: ("dx[-1]",), 0: ("xi[-1]", "dxi[-1]"), 1: ("x[-1]",)}
    # dx -> -dxi, xi -> x
    assert cx.d(-1).to_dense() == [[0], [-1]]
    assert cx.d(0).to_dense() == [[1, 0]]
    assert cohomology(cx).is_acyclic()


def test_localized_weight_zero_is_acyclic():
    assert cohomology(build_weight_complex("localized", 0, 8)).is_acyclic()
    assert cohomology(build_weight_complex("localized", 2, 5)).is_acyclic()


@pytest.mark.parametrize("N", range(0, 9))
def test_d_squared_vn_only(N):
    cx = build_weight_complex("vn_only", N)
    assert check_d_squared(cx).passed
    assert sum(cx.dims().values()) == dim_vn(N)


@pytest.mark.parametrize("variant,N,M", [
    ("plain", 3, 4), ("plain", 5, 2), ("quotient", 3, 5), ("quotient", 5, 6),
    ("localized", 2, 4), ("localized", 3, 5),
])
def test_d_squared_other_variants(variant, N, M):
    assert check_d_squared(build_weight_complex(variant, N, M)).passed


@pytest.mark.parametrize("variant,N,M", [("plain", 2, 3), ("quotient", 2, 4), ("localized", 1, 3)])
def test_labels_carry_the_gradings(variant, N, M):
    cx = build_weight_complex(variant, N, M)
    for k in cx.degrees:
        for lab in cx.basis[k]:
            assert gradings(parse_monomial(lab)) == (N, k)


def test_windows_and_their_errors():
    assert weight_window("plain", 2, 5) == (-2, 3, True, False)
    assert weight_window("quotient", 0, 4, 2) == (-5, -2, False, True)
    assert weight_window("vn_only", 3, 0) == (-3, 3, True, True)
    with pytest.raises(ValueError):
        weight_window("localized", 0, 4, 2)
    with pytest.raises(ValueError):
        weight_window("localized", 3, 2)
    with pytest.raises(ValueError):
        weight_window("quotient", 0, 0)
    with pytest.raises(ValueError):
        weight_window("mixed", 0, 1)


def test_plain_cohomology_lives_at_weight_zero():
    out = total_plain_cohomology(4, 5)
    assert out == {0: {0: 1}, 1: {}, 2: {}, 3: {}, 4: {}}


# ---------------------------------------------------------------------------
# the bouquet


@pytest.mark.parametrize("N", range(0, 5))
def test_chiral_janus_is_acyclic(N):
    cx = build_chiral_janus(N, 6)
    assert cx.window == (N - 6, 6 - N)
    assert cohomology(cx).is_acyclic()


def test_chiral_janus_weight_zero_gluing():
    cx = build_chiral_janus(0, 8)
    g = cx.d(-1)
    assert g.nnz == 1
    (r, c), v = next(iter(g.entries.items()))
    assert v == 1
    assert cx.basis[-1][c] == "quotient:xi[0]*x[0]^-1"
    assert cx.basis[0][r] == "plain:1"
    assert build_weight_complex("janus", 0, 8) == cx


def test_chiral_janus_two_variables():
    cx = build_chiral_janus(0, 4, 2)
    (r, c), _ = next(iter(cx.d(-1).entries.items()))
    assert cx.basis[-1][c] == "quotient:xi[1,0]*xi[2,0]*x[1,0]^-1*x[2,0]^-1"
    assert cohomology(cx).is_acyclic()


def test_positive_weight_bouquet_is_a_direct_sum():
    cx = build_chiral_janus(2, 5)
    for k in range(cx.lo, cx.hi):
        d = cx.d(k)
        src, tgt = cx.basis[k], cx.basis[k + 1]
        for (r, c) in d.entries:
            assert src[c].split(":")[0] == tgt[r].split(":")[0]


def test_bouquet_needs_a_wide_enough_window():
    with pytest.raises(ValueError):
        build_chiral_janus(3, 2)


@pytest.mark.parametrize("I", [1, 2])
def test_gluing_functional_kills_boundaries(I):
    assert gluing_functional_check(5, I)["passed"]


# ---------------------------------------------------------------------------
# homotopy


def test_homotopy_weight_one():
    cert = verify_homotopy(1)
    assert cert.passed and cert.residual.is_zero()
    assert len(cert.eigenvalues) == 4
    assert set(cert.eigenvalues.values()) == {Fraction(1)}
    assert cert.acyclic


def test_homotopy_weight_zero_is_trivial():
    cert = verify_homotopy(0)
    assert cert.passed and set(cert.eigenvalues.values()) == {Fraction(0)}


@pytest.mark.parametrize("N", [2, 3, 4])
def test_homotopy_on_vn(N):
    cert = verify_homotopy(N)
    assert cert.passed and cert.acyclic
    assert set(cert.eigenvalues.values()) == {Fraction(N)}


def test_homotopy_on_the_full_piece_with_zero_modes():
    for N, M in ((1, 3), (2, 2), (3, 1)):
        cert = verify_homotopy(N, zero_window=M)
        assert cert.passed and cert.variant == "plain"


def test_homotopy_two_variables():
    assert verify_homotopy(2, 2).passed


def test_wrong_homotopy_is_caught(monkeypatch):
    def rule(g: Generator):
        # drop the weight factor on x
        if g.kind is Kind.X and g.weight:
            return {((Generator(Kind.XI, g.var, g.weight), 1),): Fraction(1)}
        return chiral._g1_rule(g)

    monkeypatch.setattr(chiral, "G1", Derivation(1, rule))
    cert = verify_homotopy(2)
    assert not cert.passed and cert.first_offending is not None


# ---------------------------------------------------------------------------
# comparisons


def test_tensor_decomposition_small():
    rep = tensor_decomposition_check(1, 3)
    assert rep.passed and rep.dims_tensor == rep.dims_direct
    rep = tensor_decomposition_check(2, 2)
    assert rep.passed and dim_vn(2) == 12
    assert tensor_decomposition_check(0, 3).vacuous


def test_tensor_sign_matters():
    f = tensor_bijection(1, 3)
    unsigned = {k: SparseMatrix(m.rows, m.cols, {rc: abs(v) for rc, v in m.entries.items()})
                for k, m in f.maps.items()}
    assert not verify_chain_map(ChainMap(f.source, f.target, unsigned)).passed


@pytest.mark.parametrize("localized", [False, True])
def test_weight_zero_matches_classical_koszul(localized):
    f = weight_zero_iso(6, localized)
    rep = verify_chain_map(f)
    assert rep.passed and rep.iso
    # the bijection is a relabelling: one entry per column
    assert all(m.nnz == m.cols for m in f.maps.values())
