"""Exact polylogarithmic complexes over Q and Q(t).

An element of the complex in weight n is a FormalSum over keys ``(m, x, mono)``:
``m >= 2`` means the generator {x}_m (x) g_1 ^ ... ^ g_k with ``mono = (g_1..g_k)``
a canonical monomial of prime generators; ``m == 0`` (with ``x = None``) is a pure
wedge monomial of Lambda^n. Field elements are Fractions, exact RationalMaps over
Q(t), or None for the point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .formal import FormalSum
from .projective import DegenerateConfiguration, cross_ratio
from .rational import RationalMap
from .symbols import (
    Generator,
    MultSymbol,
    Place,
    canonical_monomial,
    factor,
    wedge,
)

PURE = 0


def _as_field(x):
    if isinstance(x, RationalMap):
        if x.is_constant():
            return x.num[0] / x.den[0]
        return x
    if x is None:
        return None
    return Fraction(x)


def is_trivial_point(x) -> bool:
    """{0}, {1} and {infinity} are sent to zero by every differential."""
    x = _as_field(x)
    return x is None or (isinstance(x, Fraction) and x in (0, 1))


def _one_minus(x):
    return x.one_minus() if isinstance(x, RationalMap) else 1 - x


# ---------------------------------------------------------------- constructors

def bgen(x, m: int, mono: Sequence[Generator] = ()) -> FormalSum:
    """{x}_m (x) mono with canonical ordering of the wedge part."""
    sign, canon = canonical_monomial(tuple(mono))
    if not sign and mono:
        return FormalSum()
    return FormalSum.single((m, _as_field(x), canon), sign if mono else 1)


def bgen_tensor(x, m: int, symbols: Sequence) -> FormalSum:
    """{x}_m (x) y_1 ^ ... ^ y_k for field elements y_j, expanded on prime generators."""
    wedge_part = wedge(*(factor(y) for y in symbols)) if symbols else FormalSum.single((), 1)
    return FormalSum(((m, _as_field(x), mono), c) for mono, c in wedge_part.items())


def pure_wedge(symbols: Sequence) -> FormalSum:
    """y_1 ^ ... ^ y_n in Lambda^n F* (x) Q."""
    return FormalSum(((PURE, None, mono), c) for mono, c in wedge(*(factor(y) for y in symbols)).items())


def wedge_part(elem: FormalSum) -> FormalSum:
    """Strip the (0, None, .) wrapping of a pure Lambda element."""
    return FormalSum((mono, c) for (m, _, mono), c in elem.items() if m == PURE)


# ---------------------------------------------------------------- differentials

def delta2(elem: FormalSum) -> FormalSum:
    """Sum of coefficients times (1 - z) ^ z over generators {z} of the formal B_2."""
    acc = FormalSum()
    for z, c in elem.items():
        if is_trivial_point(z):
            continue
        z = _as_field(z)
        acc = acc + wedge(factor(_one_minus(z)), factor(z)).scale(c)
    return acc


def delta_n(elem: FormalSum, n: int) -> FormalSum:
    """{x}_n -> {x}_{n-1} (x) x, returned as a formal sum over (x, prime generator)."""
    if n < 3:
        raise ValueError("use delta2 for n = 2")
    acc: dict[Hashable, Fraction] = {}
    for x, c in elem.items():
        if is_trivial_point(x):
            continue
        x = _as_field(x)
        for g, e in factor(x).items():
            acc[(x, g)] = acc.get((x, g), Fraction(0)) + c * e
    return FormalSum(acc)


def differential(elem: FormalSum) -> FormalSum:
    """The differential of the complex B_n -> B_{n-1} (x) F* -> ... -> B_2 (x) Lambda^{n-2} -> Lambda^n."""
    acc: dict[Hashable, Fraction] = {}

    def add(key, c):
        acc[key] = acc.get(key, Fraction(0)) + c

    for (m, x, mono), c in elem.items():
        if m == PURE or is_trivial_point(x):
            continue
        if m >= 3:
            for g, e in factor(x).items():
                sign, canon = canonical_monomial((g,) + mono)
                if sign:
                    add((m - 1, x, canon), c * e * sign)
        else:
            head = wedge(factor(_one_minus(x)), factor(x))
            for h, d in head.items():
                sign, canon = canonical_monomial(h + mono)
                if sign:
                    add((PURE, None, canon), c * d * sign)
    return FormalSum(acc)


# ---------------------------------------------------------------- residues

def theta_monomial(mono: Sequence[Generator], place: Place) -> FormalSum:
    """Tame residue of g_1 ^ ... ^ g_n: sum_i (-1)^i v(g_i) * (reductions of the others)."""
    acc = FormalSum()
    for i, g in enumerate(mono):
        v = place.valuation_of_generator(g)
        if not v:
            continue
        others = [place.reduce_generator(h) for j, h in enumerate(mono) if j != i]
        part = wedge(*others) if others else FormalSum.single((), 1)
        acc = acc + part.scale((-1) ** i * v)
    return acc


def theta(w: FormalSum, place: Place) -> FormalSum:
    """Residue Lambda^n K* -> Lambda^{n-1} k_v* on a sum of canonical monomials."""
    return w.map_linear(lambda mono: theta_monomial(mono, place))


def theta_elements(elements: Sequence, place: Place, uniformizer) -> FormalSum:
    """Residue of x_1 ^ ... ^ x_n computed from the decomposition x = pi^v(x) u with a chosen pi.

    Used as an independent route: the answer must not depend on ``uniformizer``.
    """
    pi_sym = factor(uniformizer)
    if place.valuation(pi_sym) != 1:
        raise ValueError("the chosen element is not a uniformizer")
    vals = [place.valuation(factor(x)) for x in elements]
    reductions = []
    for x, v in zip(elements, vals):
        unit = _divide_power(x, uniformizer, v)
        r = place.residue_value(unit)
        if r is None:
            raise ValueError("unit part does not reduce to a unit")
        reductions.append(MultSymbol() if place.kind == "prime" else factor(r))
    acc = FormalSum()
    for i, v in enumerate(vals):
        if not v:
            continue
        others = [reductions[j] for j in range(len(elements)) if j != i]
        part = wedge(*others) if others else FormalSum.single((), 1)
        acc = acc + part.scale((-1) ** i * v)
    return acc


def _divide_power(x, pi, v: Fraction):
    v = int(v)
    if isinstance(x, RationalMap) or isinstance(pi, RationalMap):
        xm = x if isinstance(x, RationalMap) else RationalMap.constant(Fraction(x))
        pm = pi if isinstance(pi, RationalMap) else RationalMap.constant(Fraction(pi))
        out = xm
        for _ in range(abs(v)):
            out = out / pm if v > 0 else out * pm
        return out
    return Fraction(x) / Fraction(pi) ** v


def residue_morphism(elem: FormalSum, place: Place) -> FormalSum:
    """s_v (x) theta, from weight n over K to weight n - 1 over the residue field."""
    acc: dict[Hashable, Fraction] = {}
    for (m, x, mono), c in elem.items():
        res = theta_monomial(mono, place) if mono else FormalSum()
        if not res:
            continue
        if m == PURE:
            for mono2, d in res.items():
                key = (PURE, None, mono2)
                acc[key] = acc.get(key, Fraction(0)) + c * d
            continue
        if x is None:
            continue
        xbar = place.residue_value(x)
        if xbar is None:
            continue
        for mono2, d in res.items():
            key = (m, Fraction(xbar), mono2)
            acc[key] = acc.get(key, Fraction(0)) + c * d
    return FormalSum(acc)


# ---------------------------------------------------------------- specialization

def specialize(elem: FormalSum, t0) -> FormalSum:
    """Evaluate at t = t0 (None for infinity): {f} -> {f(t0)} and, in the wedge slots,
    g -> (g / T^{v(g)})(t0) for the local parameter T (T = t - t0, or 1/t at infinity)."""
    place = Place.infinity() if t0 is None else Place.point(t0)
    acc: dict[Hashable, Fraction] = {}
    for (m, x, mono), c in elem.items():
        wedge_img = wedge(*(place.reduce_generator(g) for g in mono)) if mono else FormalSum.single((), 1)
        if m == PURE:
            xv = None
        elif isinstance(x, RationalMap):
            xv = x.evaluate_exact(t0)
        else:
            xv = x
        for mono2, d in wedge_img.items():
            key = (m, xv, mono2)
            acc[key] = acc.get(key, Fraction(0)) + c * d
    return FormalSum(acc)


# ---------------------------------------------------------------- relators

def five_term_relator(z1, z2, z3, z4, z5) -> FormalSum:
    """sum_i (-1)^i {r(z_1..^z_i..z_5)} over P^1(Q); None is the point at infinity."""
    pts = [z if z is None else Fraction(z) for z in (z1, z2, z3, z4, z5)]
    if len(set(pts)) < 5:
        raise DegenerateConfiguration("five-term relator needs distinct points")
    terms = []
    for i in range(5):
        rest = pts[:i] + pts[i + 1 :]
        terms.append((cross_ratio(*rest), (-1) ** (i + 1)))
    return FormalSum(terms)


# ---------------------------------------------------------------- coproduct of Li symbols

@dataclass(frozen=True, order=True)
class LiSymbol:
    """'Li' of weight j >= 1, or 'log' standing for log^k/k! (k = 0 is the unit)."""

    kind: str
    weight: int
    point: str = "z"

    def __repr__(self) -> str:
        if self.kind == "log" and self.weight == 0:
            return "1"
        return f"{self.kind}{self.weight}({self.point})"


UNIT = LiSymbol("log", 0)


def li_symbol(n: int, point: str = "z") -> LiSymbol:
    return UNIT if n == 0 else LiSymbol("Li", n, point)


def log_symbol(k: int, point: str = "z") -> LiSymbol:
    return UNIT if k == 0 else LiSymbol("log", k, point)


def coproduct_symbol(s: LiSymbol) -> FormalSum:
    """Delta Li_n = sum_k Li_{n-k} (x) log^k/k!, and log^k/k! is group-like in the divided powers."""
    if s.kind == "Li":
        return FormalSum(
            ((li_symbol(s.weight - k, s.point), log_symbol(k, s.point)), 1) for k in range(s.weight + 1)
        )
    return FormalSum(
        ((log_symbol(i, s.point), log_symbol(s.weight - i, s.point)), 1) for i in range(s.weight + 1)
    )


def li_coproduct(n: int, point: str = "z") -> FormalSum:
    if n < 1:
        raise ValueError("weight must be >= 1")
    return coproduct_symbol(li_symbol(n, point))


def counit(s: LiSymbol) -> int:
    return 1 if s == UNIT else 0


def coassociativity_sides(n: int) -> tuple[FormalSum, FormalSum]:
    """((Delta (x) id) Delta Li_n, (id (x) Delta) Delta Li_n) as sums of symbol triples."""
    first = li_coproduct(n)
    left: dict[Hashable, Fraction] = {}
    right: dict[Hashable, Fraction] = {}
    for (a, b), c in first.items():
        for (a1, a2), d in coproduct_symbol(a).items():
            left[(a1, a2, b)] = left.get((a1, a2, b), Fraction(0)) + c * d
        for (b1, b2), d in coproduct_symbol(b).items():
            right[(a, b1, b2)] = right.get((a, b1, b2), Fraction(0)) + c * d
    return FormalSum(left), FormalSum(right)


def counit_sides(n: int) -> tuple[FormalSum, FormalSum]:
    """((eps (x) id) Delta Li_n, (id (x) eps) Delta Li_n).

    The second is Li_n: the log factors carry the counit. The first is log^n/n!,
    since no 1 (x) Li_n term appears.
    """
    first = li_coproduct(n)
    left = FormalSum((b, c * counit(a)) for (a, b), c in first.items())
    right = FormalSum((a, c * counit(b)) for (a, b), c in first.items())
    return left, right


def weight(sym: LiSymbol) -> int:
    return sym.weight
