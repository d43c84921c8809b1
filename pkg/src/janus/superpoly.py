"""Supercommutative polynomials in the free-field generators.

For every variable ``i`` there are four families of generators indexed by
their conformal weight ``n``::

    x[i,-n]    even, weight n >= 0, cohomological degree +1
    dx[i,-n]   even, weight n >= 1, cohomological degree -1
    xi[i,-n]   odd,  weight n >= 0, cohomological degree  0
    dxi[i,-n]  odd,  weight n >= 1, cohomological degree  0

In mode notation ``x(-n)`` and ``xi(-n)`` have weight ``n - 1`` while
``dx(-n)`` and ``dxi(-n)`` have weight ``n``.  Only the zero-weight ``x``
may carry negative exponents, and only in a localized ring.

Factors of a monomial are kept sorted by ``(kind, var, weight)`` with kinds
ordered ``xi < dxi < x < dx``; a polynomial is a dict from factor tuples to
nonzero Fractions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence


class DomainError(ValueError):
    pass


class Kind(IntEnum):
    XI = 0
    DXI = 1
    X = 2
    DX = 3

    @property
    def odd(self) -> bool:
        return self in (Kind.XI, Kind.DXI)

    @property
    def degree(self) -> int:
        return _DEGREE[self]

    @property
    def symbol(self) -> str:
        return _SYMBOL[self]


_DEGREE = {Kind.XI: 0, Kind.DXI: 0, Kind.X: 1, Kind.DX: -1}
_SYMBOL = {Kind.XI: "xi", Kind.DXI: "dxi", Kind.X: "x", Kind.DX: "dx"}
_BY_SYMBOL = {v: k for k, v in _SYMBOL.items()}


class Generator(NamedTuple):
    kind: Kind
    var: int
    weight: int

    def check(self) -> Generator:
        if self.weight < 0:
            raise DomainError(f"negative weight in {self}")
        if self.kind in (Kind.DX, Kind.DXI) and self.weight < 1:
            raise DomainError(f"{self.kind.symbol} generators start at weight 1")
        return self

    @property
    def odd(self) -> bool:
        return self.kind.odd

    @property
    def invertible(self) -> bool:
        return self.kind == Kind.X and self.weight == 0


def gen(symbol: str, var: int = 1, weight: int = 0) -> Generator:
    return Generator(_BY_SYMBOL[symbol], var, weight).check()


Factors = tuple  # tuple[tuple[Generator, int], ...], canonically sorted
Polynomial = dict  # dict[Factors, Fraction]

ONE: Factors = ()


@dataclass(frozen=True)
class Monomial:
    factors: Factors = ONE
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if not self.coeff:
            object.__setattr__(self, "factors", ONE)
            return
        seen = set()
        for g, e in self.factors:
            g.check()
            if g in seen:
                raise DomainError(f"generator {g} repeated")
            seen.add(g)
            if e == 0:
                raise DomainError("zero exponents are not stored")
            if g.odd and e != 1:
                raise DomainError(f"odd generator {g} with exponent {e}")
            if e < 0 and not g.invertible:
                raise DomainError(f"negative exponent on {g}")
        factors = tuple(self.factors)
        if list(factors) != sorted(factors):
            # written order -> canonical order, collecting the odd transpositions
            sign, acc = 1, ONE
            for pair in factors:
                s, acc = mul_factors(acc, (pair,))
                sign *= s
            object.__setattr__(self, "coeff", self.coeff * sign)
            factors = acc
        object.__setattr__(self, "factors", factors)

    @property
    def is_zero(self) -> bool:
        return not self.coeff

    @property
    def parity(self) -> int:
        return parity(self.factors)

    def as_poly(self) -> Polynomial:
        return {self.factors: self.coeff} if self.coeff else {}


def monomial(*pairs: tuple[Generator, int], coeff=1) -> Monomial:
    return Monomial(tuple(pairs), Fraction(coeff))


def parity(factors: Factors) -> int:
    return sum(1 for g, _ in factors if g.kind.odd) & 1


def is_localized(factors: Factors) -> bool:
    return any(e < 0 for _, e in factors)


# ---------------------------------------------------------------------------
# products


def mul_factors(a: Factors, b: Factors) -> tuple[int, Factors] | None:
    """Product of two canonical words: ``(sign, factors)``, or None when it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    sign = 1
    odd_left = sum(1 for g, _ in a if g.kind.odd)
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga < gb:
            out.append(a[i])
            if ga.kind.odd:
                odd_left -= 1
            i += 1
        elif gb < ga:
            if gb.kind.odd and odd_left & 1:
                sign = -sign
            out.append(b[j])
            j += 1
        else:
            if ga.kind.odd:
                return None
            e = ea + eb
            if e:
                out.append((ga, e))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def mul(m1: Monomial, m2: Monomial, localized: bool = False) -> Monomial:
    if m1.is_zero or m2.is_zero:
        return Monomial(ONE, Fraction(0))
    if not localized and (is_localized(m1.factors) or is_localized(m2.factors)):
        raise DomainError("negative exponents outside a localized ring")
    res = mul_factors(m1.factors, m2.factors)
    if res is None:
        return Monomial(ONE, Fraction(0))
    sign, factors = res
    return Monomial(factors, sign * m1.coeff * m2.coeff)


def poly_add(acc: Polynomial, other: Mapping[Factors, Fraction], scale=1) -> Polynomial:
    for k, v in other.items():
        nv = acc.get(k, 0) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def poly_mul(p: Mapping[Factors, Fraction], q: Mapping[Factors, Fraction]) -> Polynomial:
    out: Polynomial = {}
    for fa, ca in p.items():
        for fb, cb in q.items():
            res = mul_factors(fa, fb)
            if res is None:
                continue
            sign, f = res
            nv = out.get(f, 0) + sign * ca * cb
            if nv:
                out[f] = nv
            else:
                out.pop(f, None)
    return out


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Derivation:
    """A derivation of given parity, determined by its values on generators.

    ``rule`` returns the image polynomial of a generator, or None when the
    generator is not covered.
    """

    parity: int
    rule: Callable[[Generator], Mapping[Factors, Fraction] | None]

    @classmethod
    def from_images(cls, parity: int, images: Mapping[Generator, Mapping[Factors, Fraction]]) -> Derivation:
        images = dict(images)
        return cls(parity, images.get)

    def image(self, g: Generator) -> Mapping[Factors, Fraction]:
        img = self.rule(g)
        if img is None:
            raise DomainError(f"derivation does not cover {g}")
        return img

    def __call__(self, p: Mapping[Factors, Fraction] | Monomial) -> Polynomial:
        return apply_derivation(self, p)


def apply_derivation(D: Derivation, p: Mapping[Factors, Fraction] | Monomial) -> Polynomial:
    """Extend ``D`` from generators by the super-Leibniz rule."""
    if isinstance(p, Monomial):
        p = p.as_poly()
    out: Polynomial = {}
    for factors, coeff in p.items():
        prefix_parity = 0
        for j, (g, e) in enumerate(factors):
            img = D.image(g)
            if img:
                sign = -1 if (D.parity and prefix_parity) else 1
                c = coeff * sign
                left = factors[:j]
                if not g.kind.odd:
                    c *= e
                    if e != 1:
                        left = left + ((g, e - 1),)
                right = factors[j + 1:]
                for f_img, c_img in img.items():
                    res = mul_factors(left, f_img)
                    if res is None:
                        continue
                    s1, f = res
                    res = mul_factors(f, right)
                    if res is None:
                        continue
                    s2, f = res
                    nv = out.get(f, 0) + c * c_img * s1 * s2
                    if nv:
                        out[f] = nv
                    else:
                        out.pop(f, None)
            if g.kind.odd:
                prefix_parity ^= 1
    return out


# ---------------------------------------------------------------------------
# gradings


def weight(factors: Factors) -> int:
    return sum(g.weight * e for g, e in factors)


def degree(factors: Factors) -> int:
    return sum(g.kind.degree * e for g, e in factors)


def gradings(m: Monomial | Factors) -> tuple[int, int]:
    """``(conformal weight, cohomological degree)``."""
    f = m.factors if isinstance(m, Monomial) else m
    return weight(f), degree(f)


# ---------------------------------------------------------------------------
# labels


def _gen_label(g: Generator, tagged: bool) -> str:
    w = f"-{g.weight}" if g.weight else "0"
    return f"{g.kind.symbol}[{g.var},{w}]" if tagged else f"{g.kind.symbol}[{w}]"


def label(factors: Factors, tagged: bool = False) -> str:
    """Canonical text of a unit-coefficient monomial, e.g. ``xi[0]*x[0]^-1``."""
    if not factors:
        return "1"
    parts = []
    for g, e in factors:
        s = _gen_label(g, tagged)
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def format_poly(p: Mapping[Factors, Fraction] | Monomial, tagged: bool = False) -> str:
    if isinstance(p, Monomial):
        p = p.as_poly()
    if not p:
        return "0"
    terms = []
    for f in sorted(p):
        c = p[f]
        body = label(f, tagged)
        if not f:
            terms.append(str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        elif c == 1:
            terms.append(body)
        elif c == -1:
            terms.append(f"-{body}")
        else:
            cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            terms.append(f"{cs}*{body}")
    return " + ".join(terms)


_GEN_RE = re.compile(
    r"(?P<sym>dxi|dx|xi|x)(?:\[(?P<wb>[^\]]*)\]|\((?P<mb>[^)]*)\))(?:\^(?P<exp>-?\d+))?$"
)


def _parse_generator(tok: str, default_var: int) -> tuple[Generator, int]:
    m = _GEN_RE.match(tok)
    if not m:
        raise ValueError(f"cannot parse generator {tok!r}")
    sym = m["sym"]
    inner = m["wb"] if m["wb"] is not None else m["mb"]
    parts = [p.strip() for p in inner.split(",")]
    if len(parts) == 1:
        var, idx = default_var, int(parts[0])
    elif len(parts) == 2:
        var, idx = int(parts[0]), int(parts[1])
    else:
        raise ValueError(f"bad index in {tok!r}")
    if m["wb"] is not None:
        if idx > 0:
            raise ValueError(f"weight index must be <= 0 in {tok!r}")
        w = -idx
    else:
        # mode notation: x(-n), xi(-n) have weight n-1; dx(-n), dxi(-n) weight n
        if idx >= 0:
            raise ValueError(f"mode index must be negative in {tok!r}")
        w = -idx - 1 if sym in ("x", "xi") else -idx
    e = int(m["exp"]) if m["exp"] else 1
    return Generator(_BY_SYMBOL[sym], var, w).check(), e


def parse_monomial(text: str, default_var: int = 1) -> Monomial:
    """Parse ``[coef*]gen[^e]*gen...``; accepts weight ``x[-n]`` or mode ``x(-n)`` indices."""
    text = text.strip().replace(" ", "")
    coeff = Fraction(1)
    if text.startswith("-"):
        coeff, text = Fraction(-1), text[1:]
    toks = [t for t in text.split("*") if t]
    ordered: list[tuple[Generator, int]] = []
    for tok in toks:
        if re.fullmatch(r"\d+(/\d+)?", tok):
            coeff *= Fraction(tok)
            continue
        ordered.append(_parse_generator(tok, default_var))
    # multiply in the written order so odd reorderings contribute their sign
    result = Monomial(ONE, coeff)
    for g, e in ordered:
        result = mul(result, Monomial(((g, e),)), localized=True)
    return result


def parse_poly(text: str, default_var: int = 1) -> Polynomial:
    out: Polynomial = {}
    depth = 0
    start = 0
    pieces = []
    s = text.replace(" ", "")
    for k, ch in enumerate(s):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch in "+-" and depth == 0 and k > start and s[k - 1] not in "*^":
            pieces.append(s[start:k])
            start = k
    pieces.append(s[start:])
    for piece in pieces:
        piece = piece.lstrip("+")
        if piece in ("", "0"):
            continue
        if re.fullmatch(r"-?\d+(/\d+)?", piece):
            poly_add(out, {ONE: Fraction(piece)})
        else:
            poly_add(out, parse_monomial(piece, default_var).as_poly())
    return out


# ---------------------------------------------------------------------------
# weight bases


def variables(I: int | Iterable[int]) -> tuple[int, ...]:
    if isinstance(I, int):
        if I < 1:
            raise ValueError("need at least one variable")
        return tuple(range(1, I + 1))
    out = tuple(sorted(set(I)))
    if not out:
        raise ValueError("need at least one variable")
    return out


def positive_weight_monomials(N: int, I: int | Iterable[int]) -> list[Factors]:
    """All monomials of weight ``N`` in generators of strictly positive weight."""
    if N < 0:
        raise ValueError("weight must be nonnegative")
    gens = sorted(
        Generator(k, v, n) for v in variables(I) for n in range(1, N + 1) for k in Kind
    )
    # process by decreasing weight so the remaining budget prunes early
    order = sorted(gens, key=lambda g: -g.weight)
    out: list[Factors] = []

    def rec(idx: int, budget: int, chosen: list[tuple[Generator, int]]):
        if budget == 0:
            out.append(tuple(sorted(chosen)))
            return
        if idx == len(order):
            return
        g = order[idx]
        top = 1 if g.kind.odd else budget // g.weight
        for e in range(min(top, budget // g.weight), -1, -1):
            if e:
                chosen.append((g, e))
            rec(idx + 1, budget - e * g.weight, chosen)
            if e:
                chosen.pop()

    rec(0, N, [])
    return sorted(out)


def zero_mode_parts(I: int | Iterable[int], variant: str, zero_window: int) -> list[Factors]:
    """Products over variables of ``xi[i,0]^e * x[i,0]^a`` with ``a`` in the variant's range."""
    if zero_window < 0:
        raise ValueError("zero_window must be nonnegative")
    if variant == "plain":
        exps = range(0, zero_window + 1)
    elif variant == "localized":
        exps = range(-zero_window, zero_window + 1)
    elif variant == "quotient":
        exps = range(-zero_window, 0)
    elif variant == "vn_only":
        return [ONE]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    per_var = []
    for v in variables(I):
        xi0, x0 = Generator(Kind.XI, v, 0), Generator(Kind.X, v, 0)
        opts = []
        for a in exps:
            for e in (0, 1):
                f = []
                if e:
                    f.append((xi0, 1))
                if a:
                    f.append((x0, a))
                opts.append(tuple(f))
        per_var.append(opts)
    out = []
    for combo in product(*per_var):
        out.append(tuple(sorted(p for part in combo for p in part)))
    return sorted(out)


def enumerate_weight_basis(
    N: int,
    I: int | Iterable[int] = 1,
    variant: str = "plain",
    zero_window: int = 0,
    degrees: tuple[int, int] | None = None,
) -> dict[int, list[Factors]]:
    """Monomials of conformal weight ``N`` bucketed by cohomological degree.

    ``variant`` is one of ``plain``, ``localized``, ``quotient`` or
    ``vn_only``; it fixes the range of the zero-weight ``x`` exponents.
    ``degrees`` optionally restricts to an inclusive degree range.
    """
    vn = positive_weight_monomials(N, I)
    zparts = zero_mode_parts(I, variant, zero_window)
    vn_by_deg: dict[int, list[Factors]] = {}
    for f in vn:
        vn_by_deg.setdefault(degree(f), []).append(f)
    z_by_deg: dict[int, list[Factors]] = {}
    for f in zparts:
        z_by_deg.setdefault(degree(f), []).append(f)
    buckets: dict[int, list[Factors]] = {}
    for dv, vs in vn_by_deg.items():
        for dz, zs in z_by_deg.items():
            k = dv + dz
            if degrees is not None and not degrees[0] <= k <= degrees[1]:
                continue
            bucket = buckets.setdefault(k, [])
            for v in vs:
                for z in zs:
                    bucket.append(tuple(sorted(v + z)))
    return {k: sorted(buckets[k]) for k in sorted(buckets)}


def generating_function(N_max: int, n_vars: int = 1) -> list[int]:
    """Coefficients of prod_{n>=1} (1+q^n)^{2k} / (1-q^n)^{2k} up to ``q^N_max``."""
    c = [1] + [0] * N_max
    for n in range(1, N_max + 1):
        for _ in range(2 * n_vars):
            # times (1 + q^n)
            c = [c[i] + (c[i - n] if i >= n else 0) for i in range(N_max + 1)]
            # divided by (1 - q^n)
            for i in range(n, N_max + 1):
                c[i] += c[i - n]
    return c
