"""Configurations in projective space: cross-ratios, r_3, special configurations,
Grassmannian complex differentials and the weight-four cobracket maps."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .formal import FormalSum, permutation_sign, signed_permutations
from .polylog import polylog_sv
from .symbols import MultSymbol, factor


class DegenerateConfiguration(ValueError):
    """Raised when a configuration violates the genericity an operation needs."""


# ---------------------------------------------------------------- points and configurations

def _coerce(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    return complex(c)


@dataclass(frozen=True)
class ProjPoint:
    """Homogeneous coordinates; also used for hyperplanes via their defining covector."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(_coerce(c) for c in self.coords)
        if all(c == 0 for c in coords):
            raise ValueError("the zero vector is not a projective point")
        if any(isinstance(c, complex) for c in coords):
            coords = tuple(complex(c) for c in coords)
        object.__setattr__(self, "coords", coords)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def normalized(self) -> tuple:
        pivot = next(c for c in self.coords if c != 0)
        return tuple(c / pivot for c in self.coords)

    def same_point(self, other: "ProjPoint", tol: float = 1e-12) -> bool:
        a, b = self.normalized(), other.normalized()
        if self.exact and other.exact:
            return a == b
        return all(abs(complex(x) - complex(y)) <= tol * max(1.0, abs(complex(x))) for x, y in zip(a, b))

    def transformed(self, matrix: Sequence[Sequence]) -> "ProjPoint":
        return ProjPoint(tuple(sum(row[j] * self.coords[j] for j in range(len(self.coords))) for row in matrix))


Hyperplane = ProjPoint


@dataclass(frozen=True)
class ProjConfig:
    points: tuple[ProjPoint, ...]
    dim: int

    @classmethod
    def of(cls, rows: Iterable[Sequence]) -> "ProjConfig":
        pts = tuple(p if isinstance(p, ProjPoint) else ProjPoint(tuple(p)) for p in rows)
        dims = {p.dim for p in pts}
        if len(dims) != 1:
            raise ValueError("points live in different projective spaces")
        return cls(pts, dims.pop())

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.points)

    def vectors(self) -> list[tuple]:
        return [p.coords for p in self.points]

    def to_json(self) -> str:
        def dump(c):
            return str(c) if isinstance(c, Fraction) else [c.real, c.imag]

        return json.dumps(
            {
                "dim": self.dim,
                "points": [[dump(c) for c in p.coords] for p in self.points],
                "field": "rational" if self.exact else "complex",
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str | dict) -> "ProjConfig":
        obj = json.loads(text) if isinstance(text, str) else text
        field = obj.get("field", "rational")

        def parse(c):
            if field == "rational":
                return Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator()
            if isinstance(c, list):
                return complex(c[0], c[1])
            if isinstance(c, str):
                return complex(c.replace("i", "j"))
            return complex(c)

        cfg = cls.of([[parse(c) for c in row] for row in obj["points"]])
        if cfg.dim != obj["dim"]:
            raise ValueError("declared dimension does not match the coordinates")
        return cfg


# ---------------------------------------------------------------- linear algebra over Q or C

def det(rows: Sequence[Sequence]):
    """Determinant by Gaussian elimination; exact for Fractions, pivoted for floats."""
    m = [list(r) for r in rows]
    n = len(m)
    exact = all(isinstance(x, Fraction) for r in m for x in r)
    sign = 1
    result = Fraction(1) if exact else 1.0 + 0j
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(m[r][col]))
            if m[piv][col] == 0:
                piv = None
        if piv is None:
            return Fraction(0) if exact else 0j
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / p
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return result * sign


def _is_zero(x, scale: float = 1.0) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= 1e-12 * max(scale, 1.0)


def _vec(p) -> tuple:
    if isinstance(p, ProjPoint):
        return p.coords
    if p is None or (isinstance(p, (float, complex)) and math.isinf(abs(p))):
        return (Fraction(1), Fraction(0))
    if isinstance(p, (tuple, list)):
        return ProjPoint(tuple(p)).coords
    c = _coerce(p)
    return (c, Fraction(1) if isinstance(c, Fraction) else 1.0 + 0j)


# ---------------------------------------------------------------- cross-ratios

def _line_coordinates(points: Sequence[tuple]) -> list[tuple]:
    """Coordinates on P^1 of collinear points, in the basis given by the first two."""
    a, b = points[0], points[1]
    dim = len(a)
    if dim == 2:
        return [tuple(p) for p in points]
    best, best_val = None, -1.0
    for r, s in combinations(range(dim), 2):
        d = a[r] * b[s] - a[s] * b[r]
        if d != 0 and abs(d) > best_val:
            best, best_val = (r, s), abs(d)
    if best is None:
        raise DegenerateConfiguration("the first two points coincide")
    r, s = best
    d = a[r] * b[s] - a[s] * b[r]
    out = []
    for p in points:
        alpha = (p[r] * b[s] - p[s] * b[r]) / d
        beta = (a[r] * p[s] - a[s] * p[r]) / d
        resid = max(abs(p[k] - alpha * a[k] - beta * b[k]) for k in range(dim))
        scale = max(abs(x) for x in p)
        if not _is_zero(resid, scale):
            raise DegenerateConfiguration("points are not collinear")
        out.append((alpha, beta))
    return out


def cross_ratio(z1, z2, z3, z4):
    """((z1-z3)(z2-z4)) / ((z1-z4)(z2-z3)) for four distinct points of a projective line.

    Points may be scalars (None or inf for the point at infinity), 2-vectors,
    or collinear ProjPoints in any dimension.
    """
    vecs = [_vec(z) for z in (z1, z2, z3, z4)]
    coords = _line_coordinates(vecs)

    def bracket(i, j):
        return coords[i][0] * coords[j][1] - coords[i][1] * coords[j][0]

    num = bracket(0, 2) * bracket(1, 3)
    den = bracket(0, 3) * bracket(1, 2)
    scale = max(abs(x) for c in coords for x in c) ** 4
    if _is_zero(num, scale) or _is_zero(den, scale):
        raise DegenerateConfiguration("cross-ratio of four points with a repetition")
    return num / den


def cross_ratio_from_brackets(bracket: Callable[[int, int], object], a, b, c, d):
    """Cross-ratio when a volume form on the underlying 2-space is supplied."""
    num = bracket(a, c) * bracket(b, d)
    den = bracket(a, d) * bracket(b, c)
    if num == 0 or den == 0:
        raise DegenerateConfiguration("degenerate projected cross-ratio")
    return num / den


# ---------------------------------------------------------------- float keys for formal sums

class Canonicalizer:
    """Maps nearly equal complex numbers to one representative (relative tolerance)."""

    def __init__(self, tol: float = 1e-12):
        self.tol = tol
        self._buckets: dict[tuple[int, int], list[complex]] = {}

    def __call__(self, z):
        if isinstance(z, Fraction):
            return z
        z = complex(z)
        cx, cy = round(z.real * 1e8), round(z.imag * 1e8)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for rep in self._buckets.get((cx + dx, cy + dy), ()):
                    if abs(rep - z) <= self.tol * max(1.0, abs(z)):
                        return rep
        self._buckets.setdefault((cx, cy), []).append(z)
        return z


# ---------------------------------------------------------------- generalized cross-ratio of 6 points

def _triple_ratio(v: Sequence[tuple], dets: Callable[[int, int, int], object], perm: Sequence[int]):
    l0, l1, l2, l3, l4, l5 = perm
    num = dets(l0, l1, l3) * dets(l1, l2, l4) * dets(l2, l0, l5)
    den = dets(l0, l1, l4) * dets(l1, l2, l5) * dets(l2, l0, l3)
    return num / den


def _checked_triple_dets(vectors: Sequence[tuple], volume: Callable[[tuple, tuple, tuple], object]):
    cache: dict[tuple[int, int, int], object] = {}
    scale = max(abs(x) for v in vectors for x in v) ** 3
    for triple in combinations(range(len(vectors)), 3):
        d = volume(*(vectors[i] for i in triple))
        if _is_zero(d, scale):
            raise DegenerateConfiguration(f"points {triple} are dependent")
        cache[triple] = d

    def dets(a, b, c):
        order = sorted((a, b, c))
        sign = permutation_sign([order.index(x) for x in (a, b, c)])
        return sign * cache[tuple(order)]

    return dets


def r3_element(points: Sequence, volume: Callable | None = None, canon: Canonicalizer | None = None) -> FormalSum:
    """Alternation over the 6 points of the triple ratio of 3x3 determinants, as a formal sum."""
    vecs = [_vec(p) for p in points]
    if len(vecs) != 6 or any(len(v) != 3 for v in vecs):
        raise ValueError("need six points of P^2")
    vol = volume or (lambda a, b, c: det([a, b, c]))
    dets = _checked_triple_dets(vecs, vol)
    canon = canon or Canonicalizer()
    acc: dict[Hashable, Fraction] = {}
    for perm, sign in signed_permutations(6):
        key = canon(_triple_ratio(vecs, dets, perm))
        acc[key] = acc.get(key, Fraction(0)) + sign
    return FormalSum(acc)


def apply_function(elem: FormalSum, fn: Callable) -> float:
    """Extend a numeric function of field elements linearly to a formal sum."""
    return sum(float(c) * fn(g) for g, c in elem.items())


def abel5_defect(z1, z2, z3, z4, z5) -> float:
    """Alternating sum over i of L_2 of the cross-ratio of the four points left after dropping z_i."""
    pts = [z1, z2, z3, z4, z5]
    total = 0.0
    for i in range(5):
        rest = pts[:i] + pts[i + 1 :]
        total += (-1) ** (i + 1) * polylog_sv(2, complex(cross_ratio(*rest)))
    return total


def trilog7_defect(points: Sequence) -> float:
    """Alternating sum over i of L_3 applied to r_3 of the six points left after dropping x_i."""
    if len(points) != 7:
        raise ValueError("need seven points")
    total = 0.0
    for i in range(7):
        rest = list(points[:i]) + list(points[i + 1 :])
        elem = r3_element(rest)
        total += (-1) ** (i + 1) * apply_function(elem, lambda x: polylog_sv(3, complex(x)))
    return total


# ---------------------------------------------------------------- special configurations

def special_configuration(n: int, weights: Sequence, frame: Sequence[Sequence] | None = None) -> ProjConfig:
    """l_i = e_i and m_i = e_i + weights[i] e_{i+1}, optionally moved by a matrix."""
    zero, one = (Fraction(0), Fraction(1)) if all(isinstance(w, (int, Fraction)) for w in weights) else (0j, 1 + 0j)
    ls, ms = [], []
    for i in range(n):
        e = [zero] * n
        e[i] = one
        ls.append(tuple(e))
        m = [zero] * n
        m[i] = one
        m[(i + 1) % n] = m[(i + 1) % n] + weights[i]
        ms.append(tuple(m))
    pts = [ProjPoint(v) for v in ls + ms]
    if frame is not None:
        pts = [p.transformed(frame) for p in pts]
    return ProjConfig(tuple(pts), n - 1)


def _solve_in_span(target: tuple, basis: Sequence[tuple]) -> list:
    """Coefficients expressing target in the given independent vectors (least pivoting)."""
    n = len(target)
    k = len(basis)
    for rows in combinations(range(n), k):
        minor = [[basis[j][r] for j in range(k)] for r in rows]
        d = det(minor)
        if not _is_zero(d):
            coeffs = []
            for j in range(k):
                mj = [row[:] for row in minor]
                for idx, r in enumerate(rows):
                    mj[idx][j] = target[r]
                coeffs.append(det(mj) / d)
            return coeffs
    raise DegenerateConfiguration("basis vectors are dependent")


def _check_special(cfg: ProjConfig) -> tuple[list[tuple], list[tuple]]:
    n = cfg.dim + 1
    if len(cfg.points) != 2 * n:
        raise DegenerateConfiguration("a special configuration has 2n points in P^(n-1)")
    vecs = cfg.vectors()
    ls, ms = vecs[:n], vecs[n:]
    if _is_zero(det(ls), max(abs(x) for v in ls for x in v) ** n):
        raise DegenerateConfiguration("the l_i are not vertices of a simplex")
    for i in range(n):
        a, b = _edge_coefficients(ls, ms, i)
        if _is_zero(a) or _is_zero(b):
            raise DegenerateConfiguration(f"m_{i} coincides with a vertex of its edge")
        if n > 2:
            nxt = ls[(i + 1) % n]
            resid = max(abs(ms[i][k] - a * ls[i][k] - b * nxt[k]) for k in range(n))
            if not _is_zero(resid, max(abs(x) for x in ms[i])):
                raise DegenerateConfiguration(f"m_{i} is not on the edge l_{i} l_{i+1}")
    return ls, ms


def _edge_coefficients(ls, ms, i):
    n = len(ls)
    a, b = _solve_in_span(ms[i], [ls[i], ls[(i + 1) % n]])
    return a, b


def _hyperplane_through(vectors: Sequence[tuple]) -> tuple:
    """Covector vanishing on n-1 vectors of an n-dimensional space (generalized cross product)."""
    n = len(vectors[0])
    cov = []
    for k in range(n):
        minor = [[v[j] for j in range(n) if j != k] for v in vectors]
        cov.append((-1) ** k * det(minor))
    return tuple(cov)


def gen_cross_ratio_special(cfg: ProjConfig, edge: int = 0):
    """r(l_i, l_{i+1}, m_i, m'_i) where m'_i is where the line l_i l_{i+1} meets the
    hyperplane through all m_j with j != i."""
    ls, ms = _check_special(cfg)
    n = len(ls)
    i = edge % n
    a, b = ls[i], ls[(i + 1) % n]
    if n == 2:
        hat = ms[(i + 1) % n]
    else:
        cov = _hyperplane_through([ms[j] for j in range(n) if j != i])
        ca = sum(x * y for x, y in zip(cov, a))
        cb = sum(x * y for x, y in zip(cov, b))
        hat = tuple(cb * x - ca * y for x, y in zip(a, b))
        if all(_is_zero(c) for c in hat):
            raise DegenerateConfiguration("the edge lies in the hyperplane of the other m_j")
    return cross_ratio(ProjPoint(a), ProjPoint(b), ProjPoint(ms[i]), ProjPoint(hat))


def special_edge_product(cfg: ProjConfig):
    """Composite of the maps L_i -> L_{i+1} cut out by the lines M_i, as a scalar on L_0.

    The map sends l_i to the vector u of L_{i+1} with l_i - u in M_i; writing
    m_i = a_i l_i + b_i l_{i+1} this is u = -(b_i / a_i) l_{i+1}.
    """
    ls, ms = _check_special(cfg)
    n = len(ls)
    prod = Fraction(1) if cfg.exact else 1.0 + 0j
    for i in range(n):
        a, b = _edge_coefficients(ls, ms, i)
        prod *= -b / a
    return prod


# ---------------------------------------------------------------- Grassmannian complex

def grassmann_d(gen: Sequence[tuple]) -> FormalSum:
    """(l_0..l_k) -> sum (-1)^i (l_0..^l_i..l_k)."""
    gen = tuple(tuple(v) for v in gen)
    return FormalSum(
        ((gen[:i] + gen[i + 1 :], (-1) ** i) for i in range(len(gen)))
    )


def quotient_projection(pivot: tuple, v: tuple) -> tuple:
    """Image of v in V / <pivot>, using the first nonzero coordinate of pivot to split."""
    j = next(k for k, c in enumerate(pivot) if c != 0)
    f = v[j] / pivot[j]
    w = tuple(v[k] - f * pivot[k] for k in range(len(v)) if k != j)
    return w


def grassmann_proj_d(gen: Sequence[tuple]) -> FormalSum:
    """(l_0..l_k) -> sum (-1)^i (l_i | l_0..^l_i..l_k), each projected to V/<l_i>."""
    gen = tuple(tuple(v) for v in gen)
    if len(gen[0]) < 2:
        raise ValueError("ambient dimension must be at least 2")
    terms = []
    for i, pivot in enumerate(gen):
        rest = gen[:i] + gen[i + 1 :]
        proj = tuple(quotient_projection(pivot, v) for v in rest)
        if any(all(_is_zero(c) for c in w) for w in proj):
            raise DegenerateConfiguration(f"a vector is proportional to l_{i}")
        terms.append((proj, (-1) ** i))
    return FormalSum(terms)


def apply_linear(fn: Callable[[Hashable], FormalSum], elem: FormalSum) -> FormalSum:
    return elem.map_linear(fn)


# ---------------------------------------------------------------- weight-four cobracket pieces

def _small(q: Fraction):
    """Integral Fractions as ints, which multiply and hash much faster."""
    return q.numerator if q.denominator == 1 else q


class _Minors:
    """Cached determinants of a fixed list of vectors in dimension 4."""

    def __init__(self, vectors: Sequence[tuple]):
        self.v = [tuple(x) for x in vectors]
        self._cache: dict[tuple[int, ...], object] = {}

    def __call__(self, *idx: int):
        order = sorted(idx)
        if len(set(order)) < len(order):
            return Fraction(0)
        key = tuple(order)
        if key not in self._cache:
            self._cache[key] = det([self.v[i] for i in key])
        sign = permutation_sign([order.index(x) for x in idx])
        return sign * self._cache[key]


def _require_minors(minors: _Minors, n: int):
    for quad in combinations(range(n), 4):
        if minors(*quad) == 0:
            raise DegenerateConfiguration(f"minor {quad} vanishes")


def projected_cross_ratio(minors: _Minors, i: int, j: int, a: int, b: int, c: int, d: int):
    """Cross-ratio of l_a, l_b, l_c, l_d in P(V / <l_i, l_j>)."""
    return cross_ratio_from_brackets(lambda x, y: minors(i, j, x, y), a, b, c, d)


def projected_r3(minors: _Minors, pivot: int, six: Sequence[int], canon: Canonicalizer | None = None) -> FormalSum:
    """r_3 of six points of P(V / <l_pivot>), with volume form Delta(l_pivot, -, -, -)."""
    dets = lambda a, b, c: minors(pivot, six[a], six[b], six[c])
    canon = canon or Canonicalizer()
    acc: dict[Hashable, Fraction] = {}
    for perm, sign in signed_permutations(6):
        key = canon(_triple_ratio(None, dets, perm))
        acc[key] = acc.get(key, Fraction(0)) + sign
    return FormalSum(acc)


def delta31(points: Sequence) -> FormalSum:
    """Cobracket component in B_3 (x) F*, as a formal sum over pairs (x, prime generator).

    -(1/9) Alt_8 [(r_3(l1|l2,l3,l4;l5,l6,l7) + {r(l1l2|l3,l6,l4,l5)} - {r(l1l2|l3,l5,l4,l6)}) (x) Delta(l5,l6,l7,l8)]
    """
    vecs = [_vec(p) for p in points]
    if len(vecs) != 8 or any(len(v) != 4 for v in vecs):
        raise ValueError("need eight points of P^3")
    if not all(isinstance(x, Fraction) for v in vecs for x in v):
        raise TypeError("the exact cobracket needs rational points")
    minors = _Minors(vecs)
    _require_minors(minors, 8)
    factored: dict[tuple[int, ...], MultSymbol] = {}

    def delta_symbol(quad: tuple[int, ...]) -> MultSymbol:
        key = tuple(sorted(quad))
        if key not in factored:
            factored[key] = factor(minors(*key))
        return factored[key]

    # keys use (numerator, denominator) pairs; hashing Fractions dominates otherwise
    acc: dict[Hashable, object] = {}

    def add_terms(terms, sym: MultSymbol, coeff: int):
        for x, c in terms:
            kx = (x.numerator, x.denominator)
            for g, e in sym.items():
                key = (kx, g)
                acc[key] = acc.get(key, 0) + coeff * c * _small(e)

    def add(b_elem: FormalSum, sym: MultSymbol, coeff: int):
        add_terms(((x, _small(c)) for x, c in b_elem.items()), sym, coeff)

    # r_3 part: antisymmetric in l2..l7, so sum over (l1, l8) and an ordered split of the rest.
    # Within a split, permuting {l2,l3,l4} and {l5,l6,l7} only changes signs consistently: factor 36.
    for first in range(8):
        for last in range(8):
            if last == first:
                continue
            rest = [k for k in range(8) if k not in (first, last)]
            base = projected_r3(minors, first, rest)
            for trio in combinations(rest, 3):
                other = tuple(k for k in rest if k not in trio)
                order = (first,) + trio + other + (last,)
                sign = permutation_sign(order)
                # r_3 on (trio + other) equals sign(trio+other relative to rest) * base
                inner = permutation_sign([rest.index(k) for k in trio + other])
                add(base, delta_symbol(other + (last,)), 36 * sign * inner)
    # cross-ratio part: plain loop over all orderings
    for perm, sign in signed_permutations(8):
        l1, l2, l3, l4, l5, l6, l7, l8 = perm
        x = projected_cross_ratio(minors, l1, l2, l3, l6, l4, l5)
        y = projected_cross_ratio(minors, l1, l2, l3, l5, l4, l6)
        if x != y:
            add_terms(((x, 1), (y, -1)), delta_symbol((l5, l6, l7, l8)), sign)
    # the Delta slot is a class in F* (x) Q, so the orientation sign of the minor is dropped
    scale = Fraction(-1, 9)
    return FormalSum({(Fraction(*kx), g): scale * c for (kx, g), c in acc.items()})


def _wedge_b2(x, y) -> tuple[int, tuple]:
    if x == y:
        return 0, ()
    if repr(x) <= repr(y):
        return 1, (x, y)
    return -1, (y, x)


def delta22(points: Sequence) -> FormalSum:
    """(1/7) Alt_8 ({r_2(l1,l2|l3,l4,l5,l6)}_2 ^ {r_2(l3,l4|l1,l2,l5,l7)}_2) in Lambda^2 of formal B_2."""
    vecs = [_vec(p) for p in points]
    if len(vecs) != 8 or any(len(v) != 4 for v in vecs):
        raise ValueError("need eight points of P^3")
    minors = _Minors(vecs)
    _require_minors(minors, 8)
    acc: dict[Hashable, Fraction] = {}
    for perm, sign in signed_permutations(8):
        l1, l2, l3, l4, l5, l6, l7, _ = perm
        x = projected_cross_ratio(minors, l1, l2, l3, l4, l5, l6)
        y = projected_cross_ratio(minors, l3, l4, l1, l2, l5, l7)
        s, key = _wedge_b2(x, y)
        if s:
            acc[key] = acc.get(key, Fraction(0)) + s * sign
    return FormalSum(acc).scale(Fraction(1, 7))
