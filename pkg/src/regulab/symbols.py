"""Factored multiplicative symbols in F* (x) Q and their exterior powers, for F = Q and Q(t)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence, Union

import sympy

from .formal import FormalSum, permutation_sign
from .rational import RationalMap, factor_polynomial, poly_eval


@dataclass(frozen=True, order=True)
class Irreducible:
    """Monic irreducible polynomial over Q, coefficients from the constant term up."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        return "P(" + ",".join(str(c) for c in self.coeffs) + ")"


Generator = Union[int, Irreducible]


def generator_key(g: Generator) -> tuple:
    if isinstance(g, Irreducible):
        return (1, g.degree, g.coeffs)
    return (0, g)


@lru_cache(maxsize=4096)
def _factor_int(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(n).items()))


class MultSymbol:
    """Element of F* (x) Q stored as generator -> nonzero exponent; torsion is discarded."""

    __slots__ = ("_exps",)

    def __init__(self, exps: Mapping[Generator, object] | Iterable[tuple[Generator, object]] = ()):
        acc: dict[Generator, Fraction] = {}
        items = exps.items() if isinstance(exps, Mapping) else exps
        for g, e in items:
            acc[g] = acc.get(g, Fraction(0)) + Fraction(e)
        self._exps = tuple(sorted(((g, e) for g, e in acc.items() if e), key=lambda ge: generator_key(ge[0])))

    def items(self) -> tuple[tuple[Generator, Fraction], ...]:
        return self._exps

    def exponent(self, g: Generator) -> Fraction:
        for h, e in self._exps:
            if h == g:
                return e
        return Fraction(0)

    def is_one(self) -> bool:
        return not self._exps

    def __mul__(self, other: "MultSymbol") -> "MultSymbol":
        return MultSymbol(list(self._exps) + list(other._exps))

    def __pow__(self, k: object) -> "MultSymbol":
        k = Fraction(k)
        return MultSymbol([(g, e * k) for g, e in self._exps])

    def __truediv__(self, other: "MultSymbol") -> "MultSymbol":
        return self * other ** -1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultSymbol) and self._exps == other._exps

    def __hash__(self) -> int:
        return hash(self._exps)

    def __repr__(self) -> str:
        return "MultSymbol{" + ", ".join(f"{g!r}:{e}" for g, e in self._exps) + "}"

    def to_json(self) -> dict:
        return {
            "gens": [g if isinstance(g, int) else {"poly": [str(c) for c in g.coeffs]} for g, _ in self._exps],
            "exps": [str(e) for _, e in self._exps],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultSymbol":
        gens = [
            g if isinstance(g, int) else Irreducible(tuple(Fraction(c) for c in g["poly"])) for g in obj["gens"]
        ]
        return cls(zip(gens, (Fraction(e) for e in obj["exps"])))


def factor(x) -> MultSymbol:
    """Prime / monic-irreducible factorization with the unit part discarded."""
    if isinstance(x, RationalMap):
        if not x.exact:
            raise TypeError("factorization needs an exact rational function")
        if x.is_zero():
            raise ValueError("cannot factor zero")
        cn, fn = factor_polynomial(x.num)
        cd, fd = factor_polynomial(x.den)
        sym = factor(cn / cd)
        parts = [(Irreducible(c), m) for c, m in fn] + [(Irreducible(c), -m) for c, m in fd]
        return sym * MultSymbol(parts)
    q = Fraction(x)
    if q == 0:
        raise ValueError("cannot factor zero")
    parts = [(p, e) for p, e in _factor_int(abs(q.numerator))]
    parts += [(p, -e) for p, e in _factor_int(q.denominator)]
    return MultSymbol(parts)


# ---------------------------------------------------------------- exterior powers

def canonical_monomial(gens: Sequence[Generator]) -> tuple[int, tuple[Generator, ...]]:
    """Sorted wedge monomial and the sign of the sorting permutation; sign 0 on repeats."""
    if len(set(gens)) < len(gens):
        return 0, ()
    order = sorted(range(len(gens)), key=lambda i: generator_key(gens[i]))
    return permutation_sign(order), tuple(gens[i] for i in order)


def wedge(*symbols: MultSymbol) -> FormalSum:
    """Multilinear expansion of s_1 ^ ... ^ s_n on prime generators."""
    terms: list[tuple[tuple[Generator, ...], Fraction]] = [((), Fraction(1))]
    for s in symbols:
        terms = [(mono + (g,), c * e) for mono, c in terms for g, e in s.items()]
    acc: dict[Hashable, Fraction] = {}
    for mono, c in terms:
        sign, canon = canonical_monomial(mono)
        if sign:
            acc[canon] = acc.get(canon, Fraction(0)) + sign * c
    return FormalSum(acc)


def wedge_monomials(a: tuple[Generator, ...], b: tuple[Generator, ...]) -> tuple[int, tuple[Generator, ...]]:
    return canonical_monomial(a + b)


def wedge_sums(x: FormalSum, y: FormalSum) -> FormalSum:
    """Wedge product of two sums of canonical monomials."""
    acc: dict[Hashable, Fraction] = {}
    for a, c in x.items():
        for b, d in y.items():
            sign, canon = canonical_monomial(a + b)
            if sign:
                acc[canon] = acc.get(canon, Fraction(0)) + sign * c * d
    return FormalSum(acc)


# ---------------------------------------------------------------- places

@dataclass(frozen=True)
class Place:
    """A discrete valuation: a prime p on Q, or on Q(t) a rational point t = a or infinity.

    ``kind`` is 'prime', 'point' or 'infinity'.
    """

    kind: str
    value: object = None

    @classmethod
    def prime(cls, p: int) -> "Place":
        return cls("prime", int(p))

    @classmethod
    def point(cls, a) -> "Place":
        return cls("point", Fraction(a))

    @classmethod
    def infinity(cls) -> "Place":
        return cls("infinity")

    @property
    def uniformizer(self) -> Generator:
        if self.kind == "prime":
            return self.value
        if self.kind == "point":
            return Irreducible((-self.value, Fraction(1)))
        raise ValueError("use 1/t at infinity")

    def valuation_of_generator(self, g: Generator) -> int:
        if self.kind == "prime":
            return 1 if g == self.value else 0
        if not isinstance(g, Irreducible):
            return 0
        if self.kind == "point":
            return 1 if g == self.uniformizer else 0
        return -g.degree

    def reduce_generator(self, g: Generator) -> MultSymbol:
        """Residue of the unit part of g (after removing the uniformizer power) in k_v* (x) Q."""
        if self.kind == "prime":
            # residue field F_p: its multiplicative group is torsion
            return MultSymbol()
        if not isinstance(g, Irreducible):
            return MultSymbol([(g, 1)])
        if self.kind == "infinity":
            return MultSymbol()  # monic, so g / t^deg reduces to 1
        if g == self.uniformizer:
            return MultSymbol()
        return factor(poly_eval(g.coeffs, self.value))

    def valuation(self, sym: MultSymbol) -> Fraction:
        return sum((e * self.valuation_of_generator(g) for g, e in sym.items()), Fraction(0))

    def residue_value(self, x):
        """Reduction of a field element of valuation zero; None if it is not a unit."""
        if self.kind == "prime":
            q = Fraction(x)
            if q == 0:
                return None
            if q.numerator % self.value == 0 or q.denominator % self.value == 0:
                return None
            return (q.numerator * pow(q.denominator, -1, self.value)) % self.value
        f = x if isinstance(x, RationalMap) else RationalMap.constant(Fraction(x))
        if f.is_zero():
            return None
        t0 = None if self.kind == "infinity" else self.value
        val = f.evaluate_exact(t0)
        if val is None or val == 0:
            return None
        return val
