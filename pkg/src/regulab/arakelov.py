"""Quadratic fields, the weight-one Arakelov complex and its R_mu invariant, and class number formulas.

Elements of O_F are written x + y*w with w = (d + sqrt(D))/2 and d = D mod 2, so
w^2 = d*w + (D - d)/4 and N(x + y w) = x^2 + d x y + (d - D)/4 y^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.special import digamma, gammaln
from scipy.special import zeta as hurwitz_zeta
from sympy import factorint, primerange


class NotFundamental(ValueError):
    pass


class NonCompactCohomology(ValueError):
    pass


# ---------------------------------------------------------------- discriminants and characters

def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return all(e == 1 for e in factorint(abs(D)).values())
    if D % 4 == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(abs(m)).values())
    return False


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D / n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        result *= 1 if D % 8 in (1, 7) else -1
    # Jacobi symbol for odd n
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=64)
def character_table(D: int) -> np.ndarray:
    """chi_D(a) for a = 0 .. |D| - 1, built multiplicatively from a smallest-prime-factor sieve."""
    m = abs(D)
    chi = np.zeros(m, dtype=np.int64)
    if m == 1:
        return np.ones(1, dtype=np.int64)
    spf = np.zeros(m, dtype=np.int64)
    for p in range(2, m):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    chi[1] = 1
    for a in range(2, m):
        p = int(spf[a])
        chi[a] = kronecker(D, p) * chi[a // p]
    return chi


# ---------------------------------------------------------------- class numbers by binary quadratic forms

def reduced_forms_negative(D: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive definite forms (a, b, c) of discriminant D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def reduced_forms_positive(D: int) -> list[tuple[int, int, int]]:
    """Reduced primitive indefinite forms: 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b."""
    root = math.sqrt(D)
    out = []
    for b in range(1, math.isqrt(D) + 1):
        if b * b >= D or (D - b * b) % 4:
            continue
        ac = (b * b - D) // 4
        for a in range(1, abs(ac) + 1):
            if ac % a:
                continue
            for sa in (a, -a):
                c = ac // sa
                if root - b < 2 * a < root + b and math.gcd(math.gcd(a, b), abs(c)) == 1:
                    out.append((sa, b, c))
    return out


def _rho_exact(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    a, b, c = form
    s = math.isqrt(D)
    m = 2 * abs(c)
    # b' = -b mod 2|c|, in (sqrt(D) - 2|c|, sqrt(D)) when |c| < sqrt(D), else in (-|c|, |c|]
    if c * c < D:
        lo = s - m + 1
    else:
        lo = -abs(c) + 1
    b2 = lo + ((-b - lo) % m)
    return (c, b2, (b2 * b2 - D) // (4 * c))


def form_cycles(D: int) -> list[list[tuple[int, int, int]]]:
    """Cycles of reduced indefinite forms under the reduction operator; their number is h^+."""
    remaining = set(reduced_forms_positive(D))
    cycles = []
    while remaining:
        start = min(remaining)
        cycle = [start]
        remaining.discard(start)
        f = _rho_exact(start, D)
        guard = 0
        while f != start:
            if f not in remaining and f not in cycle:
                raise RuntimeError(f"reduction left the set of reduced forms at {f}")
            cycle.append(f)
            remaining.discard(f)
            f = _rho_exact(f, D)
            guard += 1
            if guard > 10 * D:
                raise RuntimeError("cycle did not close")
        cycles.append(cycle)
    return cycles


# ---------------------------------------------------------------- fundamental unit

def fundamental_unit(D: int) -> tuple[int, int, int]:
    """(X, Y, N) with eps = (X + Y sqrt(D))/2 > 1 the fundamental unit and N its norm.

    Continued fraction of (d + sqrt(D))/2; the first convergent p/q with
    p - q*conj(w) a unit gives eps.
    """
    if D <= 0:
        raise ValueError("real quadratic fields only")
    d = D % 2
    s = math.isqrt(D)
    # complete quotient (P + sqrt(D))/Q, starting at (d + sqrt(D))/2
    P, Q = d, 2
    h_prev, h = 1, 0
    k_prev, k = 0, 1
    for _ in range(4 * D + 10):
        a = (P + s) // Q
        h_prev, h = a * h_prev + h, h_prev
        k_prev, k = a * k_prev + k, k_prev
        # now h_prev/k_prev is the newest convergent
        p, q = h_prev, k_prev
        norm = p * p - d * p * q + (d - D) // 4 * q * q  # N(p - q w)
        if abs(norm) == 1:
            # eps = p - q*conj(w) = p - q (d - sqrt(D))/2
            X, Y = 2 * p - q * d, q
            return X, Y, norm
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("continued fraction did not produce a unit")


def log_unit(X: int, Y: int, D: int) -> float:
    """log((X + Y sqrt(D))/2) for X, Y > 0, stable for very large integers."""
    ratio = float(Fraction(Y, X)) * math.sqrt(D)
    return math.log(X) + math.log1p(ratio) - math.log(2)


# ---------------------------------------------------------------- field data

@dataclass(frozen=True)
class QuadField:
    D: int
    r1: int
    r2: int
    w: int
    h: int
    regulator: float
    unit: tuple[int, int] | None = None  # (X, Y): eps = (X + Y sqrt(D))/2
    unit_norm: int | None = None
    narrow_h: int | None = None

    @property
    def degree(self) -> int:
        return self.r1 + 2 * self.r2

    def to_json(self) -> dict:
        out = {"D": self.D, "r1": self.r1, "r2": self.r2, "w": self.w, "h": self.h, "R": self.regulator}
        if self.unit is not None:
            out["unit"] = [str(self.unit[0]), str(self.unit[1])]
            out["unit_norm"] = self.unit_norm
        return out


def field_data(D: int) -> QuadField:
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    if abs(D) > 10**6:
        raise ValueError("|D| is limited to 10^6")
    if D < 0:
        w = {-3: 6, -4: 4}.get(D, 2)
        return QuadField(D, 0, 1, w, len(reduced_forms_negative(D)), 1.0)
    X, Y, norm = fundamental_unit(D)
    h_plus = len(form_cycles(D))
    h = h_plus if norm == -1 else h_plus // 2
    return QuadField(D, 2, 0, 2, h, log_unit(X, Y, D), (X, Y), norm, h_plus)


# ---------------------------------------------------------------- L-values and zeta_F

def l_zero(D: int) -> Fraction:
    """L(0, chi_D) = -(1/|D|) sum_a chi(a) a, exact (zero for D > 0)."""
    chi = character_table(D)
    m = abs(D)
    return Fraction(-int(np.dot(chi, np.arange(m, dtype=np.int64))), m)


def l_prime_zero(D: int) -> float:
    """L'(0, chi_D) = sum_a chi(a) log Gamma(a/|D|) - log|D| L(0, chi_D)."""
    chi = character_table(D)
    m = abs(D)
    a = np.arange(1, m)
    return float(np.dot(chi[1:], gammaln(a / m))) - math.log(m) * float(l_zero(D))


def l_one_digamma(D: int) -> float:
    """L(1, chi_D) = -(1/|D|) sum_a chi(a) psi(a/|D|)."""
    chi = character_table(D)
    m = abs(D)
    a = np.arange(1, m)
    return -float(np.dot(chi[1:], digamma(a / m))) / m


def l_one_series(D: int, periods: int = 40, terms: int = 12) -> float:
    """sum_n chi(n)/n: the first ``periods`` periods directly, the tail by its expansion in 1/(kD).

    For k >= K, sum_a chi(a)/(kD + a) = sum_j (-1)^j S_j / (D^{j+1} k^{j+1}) with
    S_j = sum_a chi(a) a^j, and sum_{k>=K} k^{-s} is a Hurwitz zeta value.
    """
    chi = character_table(D).astype(float)
    m = abs(D)
    n = np.arange(1, periods * m)
    head = float(np.sum(chi[n % m] / n))
    a = np.arange(m, dtype=float)
    tail = 0.0
    for j in range(1, terms + 1):
        s_j = float(np.dot(chi, (a / m) ** j))
        tail += (-1) ** j * s_j / m * float(hurwitz_zeta(j + 1, periods))
    return head + tail


@dataclass(frozen=True)
class ZetaValues:
    D: int
    residue_s1: float
    order_s0: int
    leading_s0: float
    exact_s0: Fraction | None = None


def zeta_quadratic(D: int, method: str = "series") -> ZetaValues:
    """Res_{s=1} zeta_F = L(1, chi) and the leading coefficient of zeta_F = zeta * L(., chi) at s = 0."""
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    residue = l_one_series(D) if method == "series" else l_one_digamma(D)
    if D < 0:
        exact = Fraction(-1, 2) * l_zero(D)
        return ZetaValues(D, residue, 0, float(exact), exact)
    return ZetaValues(D, residue, 1, -0.5 * l_prime_zero(D))


def residue_formula(f: QuadField) -> float:
    """2^{r1+r2} pi^{r2} R h / (w sqrt|D|)."""
    return 2 ** (f.r1 + f.r2) * math.pi**f.r2 * f.regulator * f.h / (f.w * math.sqrt(abs(f.D)))


# ---------------------------------------------------------------- measured complexes and R_mu

@dataclass(frozen=True)
class Group:
    """R^real_dim x Z^rank x (finite group of order torsion), Haar measure scale * (Lebesgue x counting)."""

    real_dim: int = 0
    rank: int = 0
    torsion: int = 1
    scale: float = 1.0

    @property
    def width(self) -> int:
        return self.real_dim + self.rank


@dataclass
class MeasuredComplex:
    """Groups in degrees start, start + 1, ...; maps[i] acts on the (R, Z) coordinates of groups[i].

    The torsion summands are mapped to zero. A map may send Z-coordinates anywhere,
    R-coordinates only to R-coordinates, and Z to Z integrally.
    """

    groups: list[Group]
    maps: list[np.ndarray]
    start: int = 0
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.maps) != len(self.groups) - 1:
            raise ValueError("need one map between each pair of consecutive groups")
        for i, m in enumerate(self.maps):
            m = np.asarray(m, dtype=float).reshape(self.groups[i + 1].width, self.groups[i].width)
            self.maps[i] = m
            src, dst = self.groups[i], self.groups[i + 1]
            if np.any(np.abs(m[dst.real_dim :, : src.real_dim]) > 0):
                raise ValueError(f"map {i} sends a real summand into a discrete one")
            zz = m[dst.real_dim :, src.real_dim :]
            if np.any(np.abs(zz - np.round(zz)) > 1e-9):
                raise ValueError(f"map {i} is not integral on the lattice summands")
        for i in range(len(self.maps) - 1):
            comp = self.maps[i + 1] @ self.maps[i]
            scale = max(1.0, float(np.abs(self.maps[i + 1]).max(initial=0)) * float(np.abs(self.maps[i]).max(initial=0)))
            if comp.size and np.abs(comp).max() > 1e-9 * scale:
                raise ValueError(f"maps {i} and {i + 1} do not compose to zero")

    def shifted(self, k: int = 1) -> "MeasuredComplex":
        """A[k]: degree j of the new complex is degree j + k of the old, differentials negated per shift."""
        sign = (-1) ** k
        return MeasuredComplex(list(self.groups), [sign * m for m in self.maps], self.start - k, list(self.labels))

    def padded(self, left: int, right: int) -> "MeasuredComplex":
        """The same complex viewed in a wider window of zero groups."""
        zero = Group()
        groups = [zero] * left + list(self.groups) + [zero] * right
        maps = [np.zeros((0, 0))] * left
        if left:
            maps[-1] = np.zeros((self.groups[0].width, 0))
        maps += list(self.maps)
        if right:
            maps += [np.zeros((0, self.groups[-1].width))] + [np.zeros((0, 0))] * (right - 1)
        return MeasuredComplex(groups, maps, self.start - left)


def r_mu(cx: MeasuredComplex, tol: float = 1e-9) -> float:
    """R_mu by exact-sequence propagation of measures.

    With torsion summands split off, the lattice-and-vector-space part is computed
    as the torsion of the real complex A_i (x) R in the bases defining the measures:
    prod_i |det[d(S_{i-1}), S_i]|^{(-1)^i}, S_i an orthonormal complement of ker d_i.
    Each finite summand T in degree i contributes |T|^{(-1)^i}.
    """
    n = len(cx.groups)
    widths = [g.width for g in cx.groups]
    maps = [np.asarray(m, dtype=float) for m in cx.maps]
    ranks = [int(np.linalg.matrix_rank(m, tol=tol * max(1.0, float(np.abs(m).max(initial=0))))) if m.size else 0 for m in maps]
    for i in range(n):
        incoming = ranks[i - 1] if i > 0 else 0
        outgoing = ranks[i] if i < n - 1 else 0
        if incoming + outgoing != widths[i]:
            raise NonCompactCohomology(f"cohomology in degree {cx.start + i} is not compact")
    complements = []
    for i in range(n):
        if i < n - 1 and ranks[i]:
            _, _, vt = np.linalg.svd(maps[i])
            complements.append(vt[: ranks[i]].T)
        else:
            complements.append(np.zeros((widths[i], 0)))
    log_value = 0.0
    for i in range(n):
        parts = []
        if i > 0 and ranks[i - 1]:
            parts.append(maps[i - 1] @ complements[i - 1])
        parts.append(complements[i])
        basis = np.hstack(parts) if widths[i] else np.zeros((0, 0))
        sign = (-1) ** (cx.start + i)
        if widths[i]:
            _, logdet = np.linalg.slogdet(basis)
            log_value += sign * logdet
        g = cx.groups[i]
        log_value += sign * (math.log(g.torsion) + math.log(g.scale))
    return math.exp(log_value)


# ---------------------------------------------------------------- primes, valuations and S-units

@dataclass(frozen=True)
class QuadPrime:
    """A prime of O_F above p; for split p, 'root' is the residue of w modulo the prime."""

    p: int
    kind: str
    root: int | None = None

    @property
    def norm(self) -> int:
        return self.p * self.p if self.kind == "inert" else self.p

    def label(self) -> str:
        return f"P({self.p},{self.kind}{'' if self.root is None else ',' + str(self.root)})"


def _min_poly(D: int) -> tuple[int, int]:
    d = D % 2
    return d, (d - D) // 4  # w^2 - d w + n0 = 0 with n0 = (d - D)/4


def norm_of(D: int, x, y):
    d, n0 = _min_poly(D)
    return x * x + d * x * y + n0 * y * y


def primes_above(D: int, p: int) -> list[QuadPrime]:
    k = kronecker(D, p)
    if k == -1:
        return [QuadPrime(p, "inert")]
    if k == 0:
        return [QuadPrime(p, "ramified")]
    d, n0 = _min_poly(D)
    roots = [r for r in range(p) if (r * r - d * r + n0) % p == 0]
    return [QuadPrime(p, "split", r) for r in roots]


def _hensel_root(D: int, r: int, p: int, k: int) -> int:
    d, n0 = _min_poly(D)
    mod = p
    for _ in range(1, k):
        mod_next = mod * p
        f = r * r - d * r + n0
        fp = 2 * r - d
        r = (r - f * pow(fp, -1, mod_next)) % mod_next
        mod = mod_next
    return r % mod


def valuation(D: int, prime: QuadPrime, x: int, y: int) -> int:
    n = abs(norm_of(D, x, y))
    if n == 0:
        raise ValueError("zero element")
    vp = 0
    while n % prime.p == 0:
        n //= prime.p
        vp += 1
    if prime.kind == "ramified":
        return vp
    if prime.kind == "inert":
        return vp // 2
    k = 0
    while k < vp:
        mod = prime.p ** (k + 1)
        r = _hensel_root(D, prime.root, prime.p, k + 1)
        if (x + y * r) % mod:
            break
        k += 1
    return k


def regulator_vector(D: int, x: float, y: float) -> np.ndarray:
    """(log|x|_sigma) over the archimedean places, with |x|_sigma = |sigma(x)|^2 at a complex place."""
    d = D % 2
    if D > 0:
        s = math.sqrt(D)
        return np.array([math.log(abs(x + y * (d + s) / 2)), math.log(abs(x + y * (d - s) / 2))])
    z = complex(x + y * d / 2, y * math.sqrt(-D) / 2)
    return np.array([math.log(abs(z) ** 2)])


def minkowski_bound(f: QuadField) -> float:
    n = f.degree
    return math.factorial(n) / n**n * (4 / math.pi) ** f.r2 * math.sqrt(abs(f.D))


def class_group_primes(f: QuadField, extra: Iterable[int] = ()) -> list[QuadPrime]:
    """All non-inert primes of norm up to the Minkowski bound, plus those above ``extra``."""
    bound = int(math.floor(minkowski_bound(f)))
    ps = sorted(set(primerange(2, bound + 1)) | set(int(p) for p in extra))
    out = []
    for p in ps:
        for P in primes_above(f.D, p):
            if P.kind != "inert" or p in extra:
                out.append(P)
    return out


def _integer_row_basis(rows: list[tuple[list[int], np.ndarray]], ncols: int) -> list[tuple[list[int], np.ndarray]]:
    """Echelon basis of the Z-span of integer vectors, carrying real tags along the same combinations."""
    rows = [(list(v), t.copy()) for v, t in rows]
    basis = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[0][col] != 0]
        dead = [r for r in rows if r[0][col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[0][col]))
            pivot = live[0]
            new_live = [pivot]
            for v, t in live[1:]:
                q = v[col] // pivot[0][col]
                v2 = [a - q * b for a, b in zip(v, pivot[0])]
                t2 = t - q * pivot[1]
                (new_live if v2[col] else dead).append((v2, t2))
            live = new_live
        if live:
            v, t = live[0]
            if v[col] < 0:
                v, t = [-a for a in v], -t
            basis.append((v, t))
        rows = [r for r in dead if any(r[0])]
        col += 1
    return basis


def s_unit_lattice(f: QuadField, S: Sequence[QuadPrime], max_norm_exp: int = 40, box: int | None = None):
    """A Z-basis of div(O_S^*) with the regulator vector of a generator for each basis element.

    Elements x + y w are enumerated in growing boxes until the divisors span a
    lattice of index h in Z^S.
    """
    D = f.D
    if not S:
        return []
    ps = sorted({P.p for P in S})
    size = box or 8
    target = f.h
    found: dict[tuple[int, ...], np.ndarray] = {}
    for _ in range(max_norm_exp):
        xs = np.arange(-size, size + 1)
        ys = np.arange(0, size + 1)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        X, Y = X.ravel(), Y.ravel()
        N = np.abs(norm_of(D, X.astype(object), Y.astype(object)))
        for x, y, n in zip(X.tolist(), Y.tolist(), N.tolist()):
            if n == 0 or n == 1:
                continue
            m = n
            for p in ps:
                while m % p == 0:
                    m //= p
            if m != 1:
                continue
            div = tuple(valuation(D, P, x, y) for P in S)
            # support outside S, e.g. a conjugate prime left out of S
            if abs(sum(v * math.log(P.norm) for v, P in zip(div, S)) - math.log(n)) > 1e-9:
                continue
            if div not in found:
                found[div] = regulator_vector(D, x, y)
        basis = _integer_row_basis([(list(k), v) for k, v in found.items()], len(S))
        if len(basis) == len(S):
            index = abs(round(np.linalg.det(np.array([b[0] for b in basis], dtype=float))))
            if index == target:
                return basis
        size *= 2
    raise RuntimeError("S-unit search did not reach the expected index")


def weight_one_complex(f: QuadField, S: Iterable[int] = ()) -> MeasuredComplex:
    """O_{F,S}^* -> R^{r1+r2} (+) Z^S -> R in degrees 1, 2, 3, with S extended to generate Cl_F.

    d1 = (R_1, div), d2 = (Sigma, l) with l[P] = -log|P|.
    """
    primes = class_group_primes(f, S) if f.h > 1 or S else []
    arch = f.r1 + f.r2
    cols = []
    labels = []
    if f.D > 0:
        X, Y = f.unit
        cols.append(np.concatenate([[f.regulator, -f.regulator], np.zeros(len(primes))]))
        labels.append("eps")
    for v, reg in s_unit_lattice(f, primes):
        cols.append(np.concatenate([reg, np.array(v, dtype=float)]))
        labels.append("S-unit" + str(tuple(v)))
    rank = len(cols)
    d1 = np.array(cols).T if cols else np.zeros((arch + len(primes), 0))
    d2 = np.concatenate([np.ones(arch), [-math.log(P.norm) for P in primes]])[None, :]
    groups = [Group(0, rank, f.w), Group(arch, len(primes)), Group(1, 0)]
    cx = MeasuredComplex(groups, [d1, d2], start=1, labels=labels + [P.label() for P in primes])
    return cx


def product_formula_residuals(cx: MeasuredComplex) -> np.ndarray:
    """(Sigma o R_1 + l o div) on each generator of the degree-1 group."""
    return (cx.maps[1] @ cx.maps[0]).ravel()


def class_number_formula_check(D: int, tol: float | None = None) -> dict:
    """Compare -R_mu(weight-one complex) with the leading term of zeta_F at s = 0, and the residue at s = 1."""
    f = field_data(D)
    cx = weight_one_complex(f)
    rmu = r_mu(cx)
    z = zeta_quadratic(D)
    lhs = -rmu
    rhs = z.leading_s0
    res_formula = residue_formula(f)
    tol = tol if tol is not None else (1e-10 if D < 0 else 1e-6)
    err = abs(lhs - rhs)
    res_err = abs(z.residue_s1 - res_formula)
    return {
        "D": D,
        "h": f.h,
        "R": f.regulator,
        "w": f.w,
        "lhs": lhs,
        "rhs": rhs,
        "abs_err": err,
        "residue_series": z.residue_s1,
        "residue_formula": res_formula,
        "residue_err": res_err,
        "product_formula_max": float(np.abs(product_formula_residuals(cx)).max(initial=0.0)),
        "pass": bool(err <= tol and res_err <= max(tol, 1e-6)),
    }
