"""Every complex and chain map exercised by the acceptance suite, keyed by a stable name."""
from __future__ import annotations

from functools import cache

from janus.chiral import build_chiral_janus, build_weight_complex, tensor_bijection, weight_zero_iso
from janus.classical import iso_localized, koszul_complex, sphere_complex, sphere_koszul_basis_change
from janus.complexes import ChainMap, GradedComplex
from janus.multivar import PowerKoszulSpec, build_multivar_complex, build_multivar_janus, power_koszul, transition_map

W = 20


def power_tuples(I: int, m_max: int):
    if I == 1:
        return [(m,) for m in range(1, m_max + 1)]
    return [(a, b) for a in range(1, m_max + 1) for b in range(1, m_max + 1)]


@cache
def complexes() -> dict[str, GradedComplex]:
    out: dict[str, GradedComplex] = {}
    for n in range(1, 11):
        out[f"sphere:{n}"] = sphere_complex(n)
    out["sphere:both"] = sphere_complex(side="both", window=(-W, W))
    out["koszul:janus"] = koszul_complex("janus", (-W, W))
    out["koszul:loc_laurent"] = koszul_complex("loc_laurent", (-W, W))
    for N in range(1, 7):
        out[f"vn:{N}"] = build_weight_complex("vn_only", N)
    out["chiral:plain:0"] = build_weight_complex("plain", 0, 6)
    out["chiral:quotient:0"] = build_weight_complex("quotient", 0, 6)
    for N in range(5):
        out[f"chiral:janus:{N}"] = build_chiral_janus(N, 6)
    for N in range(1, 5):
        for M in range(1, 5):
            f = tensor_bijection(N, M)
            out[f"tensor:{N},{M}:source"] = f.source
            out[f"tensor:{N},{M}:target"] = f.target
    out["multivar:plain"] = build_multivar_complex("plain", 0, 4, 2)
    out["multivar:dual"] = build_multivar_complex("dual", 0, 4, 2)
    for N in range(4):
        out[f"multivar:janus:{N}"] = build_multivar_janus(N, N + 2, 2)
    for I, m_max, M in ((1, 3, 3), (2, 2, 2)):
        for t in power_tuples(I, m_max):
            for regular in (True, False):
                spec = PowerKoszulSpec(t, 0, M, regular)
                out[f"power:{t}:M={M}:{'regular' if regular else 'control'}"] = power_koszul(spec)
    return out


@cache
def chain_maps() -> dict[str, ChainMap]:
    out: dict[str, ChainMap] = {}
    for w in (1, 5, W):
        out[f"iso:poly:{w}"] = iso_localized("poly", (0, w))
        out[f"iso:laurent:{w}"] = iso_localized("laurent", (-w, w))
        out[f"basis:plus:{w}"] = sphere_koszul_basis_change("plus", (0, w))
        out[f"basis:minus:{w}"] = sphere_koszul_basis_change("minus", (-w, -1))
        out[f"basis:both:{w}"] = sphere_koszul_basis_change("both", (-w, w))
    out["weight0:plain"] = weight_zero_iso(6)
    out["weight0:localized"] = weight_zero_iso(6, True)
    out["tensor:2,3"] = tensor_bijection(2, 3)
    out["transition:(1,1)->(2,1)"] = transition_map(PowerKoszulSpec((1, 1), 0, 2), PowerKoszulSpec((2, 1), 0, 2))
    return out
