"""Classical and single-valued polylogarithms and the exact beta coefficient engine."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

_SERIES_RADIUS = 0.5
_INVERSION_RADIUS = 2.0
_LOG_SERIES_TERMS = 90


# ---------------------------------------------------------------- exact coefficients

@lru_cache(maxsize=None)
def _beta_list(upto: int) -> tuple[Fraction, ...]:
    # reciprocal of (e^{2x} - 1)/(2x) = sum_j 2^j x^j / (j+1)!
    a = [Fraction(2**j, math.factorial(j + 1)) for j in range(upto + 1)]
    beta = [Fraction(1)]
    for k in range(1, upto + 1):
        beta.append(-sum(a[j] * beta[k - j] for j in range(1, k + 1)))
    return tuple(beta)


def beta(k: int) -> Fraction:
    """Coefficient of x^k in 2x/(e^{2x} - 1)."""
    if k < 0:
        raise ValueError("beta index must be nonnegative")
    return _beta_list(max(k, 16))[k]


def beta_kp(k: int, p: int) -> Fraction:
    """Mixed coefficient used by the regulator forms.

    (-1)^p (p-1)! * sum_{0 <= i <= (p-1)//2} beta(k + p - 2i) / (2i+1)!
    """
    if k < 0 or p < 1:
        raise ValueError("need k >= 0 and p >= 1")
    total = Fraction(0)
    for i in range((p - 1) // 2 + 1):
        total += beta(k + p - 2 * i) / math.factorial(2 * i + 1)
    return (-1) ** p * math.factorial(p - 1) * total


def beta_kp_recursive(k: int, p: int) -> Fraction:
    """Same numbers produced only from the two-step recursions seeded by -beta(k+1)."""
    return _beta_kp_rec(k, p)


@lru_cache(maxsize=None)
def _beta_kp_rec(k: int, p: int) -> Fraction:
    if p == 1:
        return -beta(k + 1)
    if p % 2 == 0:
        # (p-1) * b(k+1, p-1) = -b(k, p)
        return -(p - 1) * _beta_kp_rec(k + 1, p - 1)
    # p = 2q+1:  2q * b(k+1, 2q) = -b(k, 2q+1) - beta(k+1)/(2q+1)
    q = (p - 1) // 2
    return -2 * q * _beta_kp_rec(k + 1, 2 * q) - beta(k + 1) / (2 * q + 1)


@dataclass(frozen=True)
class BetaTable:
    max_index: int
    beta: tuple[Fraction, ...] = field(repr=False)
    beta_kp: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @classmethod
    def build(cls, max_index: int) -> "BetaTable":
        betas = tuple(beta(k) for k in range(2 * max_index + 2))
        table = tuple(
            tuple(beta_kp(k, p) for p in range(1, max_index + 1)) for k in range(max_index + 1)
        )
        return cls(max_index, betas, table)

    def kp(self, k: int, p: int) -> Fraction:
        return self.beta_kp[k][p - 1]

    def recursion_failures(self) -> list[tuple[int, int]]:
        """Index pairs where a stored entry violates one of the recursions."""
        bad = []
        n = self.max_index
        for k in range(n):
            for p in range(1, n + 1):
                if 2 * p + 1 <= n and 2 * p * self.kp(k + 1, 2 * p) != (
                    -self.kp(k, 2 * p + 1) - self.beta[k + 1] / (2 * p + 1)
                ):
                    bad.append((k, 2 * p))
                if 2 * p <= n and (2 * p - 1) * self.kp(k + 1, 2 * p - 1) != -self.kp(k, 2 * p):
                    bad.append((k, 2 * p - 1))
        return bad


def bernoulli(k: int) -> Fraction:
    """Bernoulli number with B_1 = -1/2."""
    return beta(k) * math.factorial(k) / 2**k


# ---------------------------------------------------------------- zeta values

@lru_cache(maxsize=None)
def _zeta_table(terms: int) -> tuple[float, ...]:
    # entry j holds zeta(j - terms), so index terms + s is zeta(s)
    vals = []
    for s in range(-terms, 2):
        if s == 1:
            vals.append(math.inf)
        elif s == 0:
            vals.append(-0.5)
        else:
            m = -s
            vals.append(float(-bernoulli(m + 1) / (m + 1)))
    return tuple(vals)


def zeta_int(s: int) -> float:
    """Riemann zeta at an integer s != 1."""
    if s == 1:
        raise ValueError("pole at s = 1")
    if s >= 2:
        return float(_hurwitz_zeta(s, 1.0))
    return _zeta_table(_LOG_SERIES_TERMS + 8)[_LOG_SERIES_TERMS + 8 + s]


# ---------------------------------------------------------------- Li_n

def _normalize(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0.0:
        # +0 imaginary part: real points on the cut take the limit from above
        z = complex(z.real, 0.0)
    return z


def _li_series(n: int, z: complex) -> complex:
    total = 0j
    comp = 0j
    power = z
    k = 1
    while True:
        term = power / k**n
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) < 1e-18 * max(abs(total), 1e-300) or k > 200:
            break
        k += 1
        power *= z
    return total


def _li_log_series(n: int, z: complex) -> complex:
    mu = cmath.log(z)
    if mu == 0:
        return complex(zeta_int(n))
    harmonic = sum(1.0 / j for j in range(1, n))
    total = mu ** (n - 1) / math.factorial(n - 1) * (harmonic - cmath.log(-mu))
    power = 1 + 0j
    for k in range(_LOG_SERIES_TERMS):
        if k != n - 1:
            zv = zeta_int(n - k)
            if zv != 0.0:
                total += zv * power / math.factorial(k)
        power *= mu
    return total


def _bernoulli_poly(n: int, x: complex) -> complex:
    return sum(
        math.comb(n, j) * float(bernoulli(j)) * x ** (n - j) for j in range(n + 1)
    )


def li(n: int, z: complex) -> complex:
    """Li_n(z) on the principal branch, cut along [1, inf)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    z = _normalize(z)
    if z == 0:
        return 0j
    if n == 1:
        if z == 1:
            raise ValueError("Li_1 has a logarithmic singularity at z = 1")
        return -cmath.log(1 - z)
    r = abs(z)
    if r <= _SERIES_RADIUS:
        return _li_series(n, z)
    if r >= _INVERSION_RADIUS:
        two_pi_i = 2j * math.pi
        w = cmath.log(-z)
        return -((-1) ** n) * li(n, 1 / z) - two_pi_i**n / math.factorial(n) * _bernoulli_poly(
            n, 0.5 + w / two_pi_i
        )
    return _li_log_series(n, z)


# ---------------------------------------------------------------- single-valued versions

def _is_infinite(z) -> bool:
    return z is None or (isinstance(z, (complex, float, int)) and cmath.isinf(complex(z)))


def polylog_sv(n: int, z) -> float:
    """Single-valued L_n: Re (odd n) or Im (even n) of sum beta_k log^k|z| Li_{n-k}(z).

    ``None`` or an infinite value stands for the point at infinity.
    """
    if n < 2:
        raise ValueError("order must be >= 2")
    if _is_infinite(z):
        return 0.0
    z = _normalize(z)
    if z == 0:
        return 0.0
    if n % 2 == 0 and z.imag == 0.0:
        return 0.0
    if z == 1:
        return zeta_int(n) if n % 2 else 0.0
    log_abs = math.log(abs(z))
    total = 0j
    for k in range(n):
        b = beta(k)
        if b:
            total += float(b) * log_abs**k * li(n - k, z)
    return total.real if n % 2 else total.imag


def levin_weight(n: int, k: int) -> Fraction:
    """Factorial weight of the log^k term in the modified single-valued polylogarithm."""
    return Fraction(
        2**k * math.factorial(n - 2) * math.factorial(2 * n - k - 3),
        math.factorial(2 * n - 3) * math.factorial(k + 1) * math.factorial(n - k - 2),
    )


def polylog_sv_levin(n: int, z) -> float:
    """Modified single-valued polylogarithm: sum over even k <= n-2 of weight * L_{n-k} log^k|z|."""
    if n < 2:
        raise ValueError("order must be >= 2")
    if _is_infinite(z) or complex(z) == 0:
        return 0.0
    log_abs = math.log(abs(complex(z)))
    return sum(
        float(levin_weight(n, k)) * polylog_sv(n - k, z) * log_abs**k
        for k in range(0, n - 1, 2)
    )


def polylog_hat(n: int, z) -> complex:
    """i * L_n(z) for even n, L_n(z) for odd n."""
    v = polylog_sv(n, z)
    return complex(0.0, v) if n % 2 == 0 else complex(v, 0.0)


def bloch_wigner(z: complex) -> float:
    """Direct formula Im(Li_2(z) + log(1 - z) log|z|), for cross-checks."""
    z = _normalize(z)
    return (li(2, z) + cmath.log(1 - z) * math.log(abs(z))).imag


# ---------------------------------------------------------------- zeta as an iterated integral

@dataclass(frozen=True)
class ZetaEstimate:
    value: float
    error: float
    nodes: int
    budget_too_small: bool


def _graded_rule(order: int, levels: int) -> tuple[np.ndarray, np.ndarray]:
    # Gauss-Legendre on [0, 1/2] plus dyadic bands accumulating at 1
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [0.0] + [1.0 - 0.5**j for j in range(1, levels + 1)] + [1.0]
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (b + a))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _cube_integral(n: int, order: int, levels: int) -> float:
    u, w = _graded_rule(order, levels)
    # 1/(1 - u_1...u_n) on the unit cube, accumulated one axis at a time
    prod = u.copy()
    weight = w.copy()
    for _ in range(n - 1):
        prod = np.multiply.outer(prod, u).ravel()
        weight = np.multiply.outer(weight, w).ravel()
    return float(np.dot(weight, 1.0 / (1.0 - prod)))


def zeta_leibniz(n: int, budget: int = 8, tol: float = 1e-3) -> ZetaEstimate:
    """zeta(n) as the iterated integral of dt/(1-t) followed by n-1 copies of dt/t.

    Writing t_k = u_k u_{k+1} ... u_n turns the ordered simplex into the unit cube
    and the form into du/(1 - u_1 ... u_n). ``budget`` is the Gauss order per band;
    the error is the gap to a run with half the order.
    """
    if n < 2:
        raise ValueError("the iterated integral diverges for n < 2")
    if budget < 2:
        raise ValueError("budget must be at least 2")
    levels = 40 if n == 2 else 24
    fine = _cube_integral(n, budget, levels)
    coarse = _cube_integral(n, max(budget // 2, 1), levels)
    err = abs(fine - coarse)
    nodes = (budget * (levels + 1)) ** n
    return ZetaEstimate(fine, err, nodes, err > tol)
