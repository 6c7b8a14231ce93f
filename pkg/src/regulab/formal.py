"""Exact rational linear combinations over hashable generators, and alternation."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct integers 0..n-1."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def signed_permutations(m: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """All permutations of range(m) with their signs."""
    for perm in permutations(range(m)):
        yield perm, permutation_sign(perm)


class FormalSum:
    """Immutable finite map generator -> nonzero Fraction.

    Generators must be hashable and comparable under ``sort_key`` for
    canonical ordering; the default key is ``repr``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Hashable, object] | Iterable[tuple[Hashable, object]] = ()):
        acc: dict[Hashable, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for gen, coeff in items:
            c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if c:
                acc[gen] = acc.get(gen, Fraction(0)) + c
        self._terms = {g: c for g, c in acc.items() if c}
        self._hash = None

    @classmethod
    def single(cls, gen: Hashable, coeff: object = 1) -> "FormalSum":
        return cls({gen: coeff})

    def items(self) -> list[tuple[Hashable, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: repr(kv[0]))

    def generators(self) -> list[Hashable]:
        return [g for g, _ in self.items()]

    def coefficient(self, gen: Hashable) -> Fraction:
        return self._terms.get(gen, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "FormalSum") -> "FormalSum":
        merged = dict(self._terms)
        for g, c in other._terms.items():
            merged[g] = merged.get(g, Fraction(0)) + c
        return FormalSum(merged)

    def __neg__(self) -> "FormalSum":
        return FormalSum({g: -c for g, c in self._terms.items()})

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def scale(self, factor: object) -> "FormalSum":
        f = Fraction(factor)
        return FormalSum({g: c * f for g, c in self._terms.items()})

    __rmul__ = scale

    def map_linear(self, fn: Callable[[Hashable], "FormalSum"]) -> "FormalSum":
        """Extend ``fn`` (generator -> FormalSum) by linearity."""
        acc: dict[Hashable, Fraction] = {}
        for g, c in self._terms.items():
            for h, d in fn(g)._terms.items():
                acc[h] = acc.get(h, Fraction(0)) + c * d
        return FormalSum(acc)

    def map_generators(self, fn: Callable[[Hashable], Hashable]) -> "FormalSum":
        acc: dict[Hashable, Fraction] = {}
        for g, c in self._terms.items():
            h = fn(g)
            acc[h] = acc.get(h, Fraction(0)) + c
        return FormalSum(acc)

    def evaluate(self, fn: Callable[[Hashable], complex | float]) -> complex | float:
        """Apply a numeric function linearly."""
        total = 0.0
        for g, c in self._terms.items():
            total += float(c) * fn(g)
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "FormalSum(0)"
        body = " + ".join(f"{c}*[{g!r}]" for g, c in self.items())
        return f"FormalSum({body})"


def alternate(m: int, fn: Callable[[tuple[int, ...]], FormalSum]) -> FormalSum:
    """Sum of sign(perm) * fn(perm) over all permutations of range(m), no 1/m! factor."""
    acc: dict[Hashable, Fraction] = {}
    for perm, sign in signed_permutations(m):
        for g, c in fn(perm)._terms.items():
            acc[g] = acc.get(g, Fraction(0)) + sign * c
    return FormalSum(acc)
