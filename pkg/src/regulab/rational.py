"""One-variable rational functions, exact over Q or numeric over C."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

_T = sympy.Symbol("t")


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


def _trim(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def _to_poly(coeffs: Sequence[Fraction]) -> sympy.Poly:
    return sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _T, domain="QQ"
    )


def _from_poly(poly: sympy.Poly) -> tuple[Fraction, ...]:
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return _trim(coeffs) if coeffs else (Fraction(0),)


def poly_eval(coeffs: Sequence, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def poly_deriv(coeffs: Sequence) -> tuple:
    if len(coeffs) <= 1:
        return (0,)
    return tuple(k * coeffs[k] for k in range(1, len(coeffs)))


@dataclass(frozen=True)
class RationalMap:
    """num(t)/den(t) with coefficient tuples listed from the constant term up.

    Exact maps (all coefficients rational) are kept coprime with a monic
    denominator, so equal functions compare equal.
    """

    num: tuple
    den: tuple = (1,)

    def __post_init__(self):
        num, den = _trim(self.num), _trim(self.den)
        if all(c == 0 for c in den):
            raise ValueError("zero denominator")
        if all(_is_exact(c) for c in num + den):
            num = tuple(Fraction(c) for c in num)
            den = tuple(Fraction(c) for c in den)
            if any(num):
                pn, pd = _to_poly(num), _to_poly(den)
                g = sympy.gcd(pn, pd)
                pn, pd = sympy.div(pn, g)[0], sympy.div(pd, g)[0]
                num, den = _from_poly(pn), _from_poly(pd)
            else:
                num, den = (Fraction(0),), (Fraction(1),)
            lead = den[-1]
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    # construction helpers
    @classmethod
    def constant(cls, c) -> "RationalMap":
        return cls((c,), (1,))

    @classmethod
    def t(cls) -> "RationalMap":
        return cls((0, 1), (1,))

    @classmethod
    def from_json(cls, obj) -> "RationalMap":
        def parse(v):
            if isinstance(v, str):
                return Fraction(v)
            if isinstance(v, list):
                return complex(v[0], v[1])
            return Fraction(v) if isinstance(v, int) else v

        return cls(tuple(parse(v) for v in obj["num"]), tuple(parse(v) for v in obj.get("den", [1])))

    def to_json(self) -> dict:
        def dump(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, complex):
                return [v.real, v.imag]
            return v

        return {"num": [dump(v) for v in self.num], "den": [dump(v) for v in self.den]}

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.num + self.den)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def is_constant(self) -> bool:
        return len(self.num) == 1 and len(self.den) == 1

    # arithmetic
    def __mul__(self, other: "RationalMap") -> "RationalMap":
        return RationalMap(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __truediv__(self, other: "RationalMap") -> "RationalMap":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalMap(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __add__(self, other: "RationalMap") -> "RationalMap":
        return RationalMap(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)), _pmul(self.den, other.den)
        )

    def __neg__(self) -> "RationalMap":
        return RationalMap(tuple(-c for c in self.num), self.den)

    def __sub__(self, other: "RationalMap") -> "RationalMap":
        return self + (-other)

    def one_minus(self) -> "RationalMap":
        return RationalMap.constant(1) - self

    def inverse(self) -> "RationalMap":
        return RationalMap(self.den, self.num)

    # evaluation
    def __call__(self, z):
        d = poly_eval(self.den, z)
        if d == 0:
            raise ZeroDivisionError("pole")
        return poly_eval(self.num, z) / d

    def log_derivative(self, z) -> complex:
        """f'(z)/f(z)."""
        n = poly_eval(self.num, z)
        d = poly_eval(self.den, z)
        if n == 0 or d == 0:
            raise ZeroDivisionError("zero or pole")
        return poly_eval(poly_deriv(self.num), z) / n - poly_eval(poly_deriv(self.den), z) / d

    def derivative(self, z) -> complex:
        return self(z) * self.log_derivative(z)

    def evaluate_exact(self, t0: Fraction | None):
        """Value in P^1(Q); None stands for infinity."""
        if t0 is None:
            dn, dd = len(self.num) - 1, len(self.den) - 1
            if self.is_zero():
                return Fraction(0)
            if dn > dd:
                return None
            if dn < dd:
                return Fraction(0)
            return self.num[-1] / self.den[-1]
        d = poly_eval(self.den, Fraction(t0))
        if d == 0:
            return None
        return poly_eval(self.num, Fraction(t0)) / d

    def singular_points(self) -> list[complex]:
        import numpy as np

        pts: list[complex] = []
        for coeffs in (self.num, self.den):
            if len(coeffs) > 1:
                pts.extend(complex(r) for r in np.roots([complex(c) for c in reversed(coeffs)]))
        return pts

    def __repr__(self) -> str:
        return f"RationalMap(num={list(map(str, self.num))}, den={list(map(str, self.den))})"


def _pmul(a: Sequence, b: Sequence) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _padd(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def factor_polynomial(coeffs: Sequence[Fraction]) -> tuple[Fraction, list[tuple[tuple[Fraction, ...], int]]]:
    """Leading constant and monic irreducible factors with multiplicity."""
    poly = _to_poly(tuple(Fraction(c) for c in coeffs))
    lead, factors = sympy.factor_list(poly)
    const = Fraction(int(sympy.Rational(lead).p), int(sympy.Rational(lead).q))
    out = []
    for fac, mult in factors:
        fc = _from_poly(fac)
        lc = fc[-1]
        const *= lc**mult
        out.append((tuple(c / lc for c in fc), int(mult)))
    return const, out
