"""Grassmannian polylogarithms of hyperplane configurations in CP^1 and CP^2, and the function psi_2.

All integrals are taken in the affine chart x = (1, z) of CP^{d}, d = n - 1, against
Lebesgue measure dV = dx_1 dy_1 ... dx_d dy_d. Two integrators are provided: a
deterministic polar quadrature around the singular points (d = 1 only) and a
seeded importance-sampled Monte Carlo whose proposal concentrates near each
singular hyperplane.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import beta as beta_fn

from .formal import permutation_sign, signed_permutations
from .polylog import polylog_sv, polylog_sv_levin
from .projective import (
    DegenerateConfiguration,
    ProjConfig,
    gen_cross_ratio_special,
    _check_special,
)

TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------- domain types

@dataclass(frozen=True)
class IntegralEstimate:
    value: complex
    std_error: float
    samples: int
    strategy: str

    def __post_init__(self):
        if not self.std_error >= 0:
            raise ValueError("std_error must be nonnegative")

    def scaled(self, c: complex) -> "IntegralEstimate":
        return IntegralEstimate(self.value * c, self.std_error * abs(c), self.samples, self.strategy)

    def to_json(self) -> dict:
        return {
            "value": [float(np.real(self.value)), float(np.imag(self.value))],
            "std_error": float(self.std_error),
            "samples": int(self.samples),
            "strategy": self.strategy,
        }


@dataclass(frozen=True)
class HermForm:
    """Nonnegative Hermitian form x -> x^* M x on C^n."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Hermitian form needs a square matrix")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise ValueError("matrix is not Hermitian")
        eig = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if eig.min() < -1e-12 * max(1.0, abs(eig).max()):
            raise ValueError("form is not nonnegative")
        if np.allclose(m, 0):
            raise ValueError("zero form")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def boundary(cls, normal: Sequence[complex]) -> "HermForm":
        """The rank-one form |<a, x>|^2, whose kernel is the hyperplane <a, x> = 0."""
        a = np.asarray(normal, dtype=complex)
        return cls(np.outer(a.conj(), a))

    @property
    def rank(self) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > 1e-12 * np.abs(self.matrix).max()))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.real(np.einsum("...a,ab,...b->...", x.conj(), self.matrix, x))


@dataclass(frozen=True)
class HyperplaneConfig:
    """Hyperplanes <a_i, x> = 0 in CP^{dim} given by their normal vectors, plus an optional h_0."""

    normals: np.ndarray
    h0: np.ndarray | None = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.normals, dtype=complex))
        object.__setattr__(self, "normals", a)
        if self.h0 is not None:
            object.__setattr__(self, "h0", np.asarray(self.h0, dtype=complex))
        if np.any(np.linalg.norm(a, axis=1) == 0):
            raise DegenerateConfiguration("zero normal vector")
        for i, j in itertools.combinations(range(len(a)), 2):
            if _parallel(a[i], a[j]):
                raise DegenerateConfiguration(f"hyperplanes {i} and {j} coincide")
        if self.h0 is not None and any(_parallel(self.h0, v) for v in a):
            raise DegenerateConfiguration("h_0 coincides with one of the hyperplanes")

    @property
    def dim(self) -> int:
        return self.normals.shape[1] - 1

    @property
    def size(self) -> int:
        return self.normals.shape[0]

    def is_generic(self, tol: float = 1e-9) -> bool:
        """Every dim + 1 of the normals are linearly independent."""
        k = self.dim + 1
        a = self.normals / np.linalg.norm(self.normals, axis=1, keepdims=True)
        return all(abs(np.linalg.det(a[list(c)])) > tol for c in itertools.combinations(range(self.size), k))

    def permuted(self, order: Sequence[int]) -> "HyperplaneConfig":
        return HyperplaneConfig(self.normals[list(order)], self.h0)

    def transformed(self, g: np.ndarray) -> "HyperplaneConfig":
        """Image under x -> g x: the normals become a g^{-1}."""
        ginv = np.linalg.inv(np.asarray(g, dtype=complex))
        return HyperplaneConfig(self.normals @ ginv, None if self.h0 is None else self.h0 @ ginv)

    def with_h0(self, h0: Sequence[complex] | None) -> "HyperplaneConfig":
        return HyperplaneConfig(self.normals, None if h0 is None else np.asarray(h0, dtype=complex))

    def to_json(self) -> dict:
        def enc(v):
            return [[float(c.real), float(c.imag)] for c in v]

        out = {"normals": [enc(v) for v in self.normals]}
        if self.h0 is not None:
            out["h0"] = enc(self.h0)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "HyperplaneConfig":
        def dec(v):
            return [complex(re, im) for re, im in v]

        return cls(np.array([dec(v) for v in obj["normals"]]), None if "h0" not in obj else np.array(dec(obj["h0"])))


def _parallel(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.vstack([a, b])
    s = np.linalg.svd(m, compute_uv=False)
    return s[-1] <= tol * s[0]


def random_config(rng: np.random.Generator, count: int, dim: int, h0: bool = False) -> HyperplaneConfig:
    """Normals with independent standard complex Gaussian entries."""
    def draw():
        return rng.normal(size=dim + 1) + 1j * rng.normal(size=dim + 1)

    normals = np.array([draw() for _ in range(count)])
    return HyperplaneConfig(normals, draw() if h0 else None)


# ---------------------------------------------------------------- the top-degree form r_{2d}

@lru_cache(maxsize=None)
def _pattern_constant(d: int) -> float:
    """sum_j c_j 2^{-2d} (d!)^2 e_d(s^(j)), the weight of K in the top coefficient of r_{2d}.

    Pattern j has 2j radial factors (sign +1) and 2d - 2j angular ones (sign -1);
    e_d is the elementary symmetric polynomial of degree d in those signs.
    """
    m = 2 * d + 1
    total = 0.0
    for j in range(d + 1):
        c = 1.0 / (math.factorial(2 * j + 1) * math.factorial(m - 2 * j - 1))
        signs = [1] * (2 * j) + [-1] * (2 * d - 2 * j)
        e_d = sum(math.prod(signs[k] for k in range(2 * d) if k not in s) for s in itertools.combinations(range(2 * d), d))
        total += c * e_d
    return total * math.factorial(d) ** 2 / 4**d


@lru_cache(maxsize=None)
def _splits(k: int, d: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """Ordered splits (P, Q) of range(k) into d-subsets, with the sign of the shuffle P + Q."""
    out = []
    for p in itertools.combinations(range(k), d):
        q = tuple(i for i in range(k) if i not in p)
        out.append((p, q, permutation_sign(p + q)))
    return tuple(out)


def _det_rows(u: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    sub = u[list(rows)]  # (d, N, d)
    if len(rows) == 1:
        return sub[0, :, 0]
    return np.linalg.det(np.moveaxis(sub, 0, 1))


def top_coefficient(logs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Coefficient of dz_1..dz_d ^ dzbar_1..dzbar_d in r_{2d}(g_1 ^ ... ^ g_{2d+1}).

    ``logs`` has shape (m, N) with log|g_i|, ``u`` shape (m, N, d) with the
    holomorphic gradient of log g_i; m = 2d + 1.
    """
    m, npts, d = u.shape
    if m != 2 * d + 1:
        raise ValueError("need 2d + 1 functions on a d-dimensional chart")
    dets = {}
    for rows in itertools.combinations(range(m), d):
        dets[rows] = _det_rows(u, rows)
    acc = np.zeros(npts, dtype=complex)
    for a in range(m):
        rest = [i for i in range(m) if i != a]
        k_val = np.zeros(npts, dtype=complex)
        for p, q, sign in _splits(2 * d, d):
            rp = tuple(rest[i] for i in p)
            rq = tuple(rest[i] for i in q)
            k_val += sign * dets[rp] * np.conj(dets[rq])
        acc += (-1) ** a * logs[a] * k_val
    return _pattern_constant(d) * acc


def volume_factor(d: int) -> complex:
    """dz_1..dz_d ^ dzbar_1..dzbar_d = volume_factor(d) dV."""
    return (-1) ** (d * (d - 1) // 2) * (-2j) ** d


# ---------------------------------------------------------------- integrands

def _linear(normals: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values <a, (1, z)> with shape (k, N) and gradients a[1:] with shape (k, d)."""
    vals = normals[:, :1] + normals[:, 1:] @ z.T
    return vals, normals[:, 1:]


def ratio_data(num: np.ndarray, den: np.ndarray, z: np.ndarray, scales: np.ndarray | None = None):
    """log|g_i| and dlog g_i for g_i = scale_i <num_i, x> / <den, x> at chart points z."""
    lv, lg = _linear(num, z)
    dv, dg = _linear(den[None, :], z)
    logs = np.log(np.abs(lv)) - np.log(np.abs(dv))
    if scales is not None:
        logs = logs + np.log(np.abs(np.asarray(scales)))[:, None]
    u = lg[:, None, :] / lv[:, :, None] - dg[:, None, :] / dv[:, :, None]
    return logs, u


def grassmann_density(config: HyperplaneConfig, z: np.ndarray, scales: Sequence[complex] | None = None) -> np.ndarray:
    """Lebesgue density of r_{2n-2}(sum_j (-1)^j f_1 ^ .. ^ f_j-hat ^ .. ^ f_{2n}) at chart points z.

    With an auxiliary hyperplane h_0 the functions are f_i = <a_i, x>/<a_0, x>; without
    one the identity sum_j (-1)^j ... = f_1/f_{2n} ^ ... ^ f_{2n-1}/f_{2n} is used.
    """
    d = config.dim
    a = config.normals
    if config.size != 2 * d + 2:
        raise ValueError("need 2n hyperplanes in CP^{n-1}")
    if config.h0 is None:
        logs, u = ratio_data(a[:-1], a[-1], z, None if scales is None else np.asarray(scales[:-1]) / scales[-1])
        coeff = top_coefficient(logs, u)
    else:
        logs, u = ratio_data(a, config.h0, z, scales)
        coeff = np.zeros(z.shape[0], dtype=complex)
        for j in range(config.size):
            keep = [i for i in range(config.size) if i != j]
            coeff += (-1) ** (j + 1) * top_coefficient(logs[keep], u[keep])
    return coeff * volume_factor(d)


def singular_normals(config: HyperplaneConfig) -> np.ndarray:
    if config.h0 is None:
        return config.normals
    return np.vstack([config.normals, config.h0[None, :]])


# ---------------------------------------------------------------- integration on CP^1 and CP^2

def _graded_gauss(order: int, levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on (0, 1) on dyadic bands refined toward both endpoints."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [0.0] + [0.5**k for k in range(levels, 1, -1)] + [0.5] + [1 - 0.5**k for k in range(2, levels + 1)] + [1.0]
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(lo + (hi - lo) * (x + 1) / 2)
        weights.append(w * (hi - lo) / 2)
    return np.concatenate(nodes), np.concatenate(weights)


def _polar_quadrature(integrand: Callable[[np.ndarray], np.ndarray], points: np.ndarray, order: int, angles: int) -> complex:
    """Partition of unity w_k = |z - p_k|^-4 / sum_l |z - p_l|^-4, each piece in polar coordinates at p_k."""
    s, ws = _graded_gauss(order, 12)
    phi = 2 * np.pi * np.arange(angles) / angles
    total = 0.0 + 0.0j
    for k, p in enumerate(points):
        others = np.delete(points, k)
        radius = max(1e-3, float(np.min(np.abs(others - p)))) if len(others) else 1.0
        rho = radius * s / (1 - s)
        jac = radius / (1 - s) ** 2 * rho
        zz = p + rho[:, None] * np.exp(1j * phi)[None, :]
        flat = zz.reshape(-1)
        dist = np.abs(flat[:, None] - points[None, :]) ** -4
        weight = dist[:, k] / dist.sum(axis=1)
        vals = integrand(flat[:, None]) * weight
        vals = vals.reshape(zz.shape)
        total += np.sum(vals * (jac * ws)[:, None]) * (2 * np.pi / angles)
    return complex(total)


def _chart_points(normals: np.ndarray) -> np.ndarray:
    return -normals[:, 0] / normals[:, 1]


def _needs_rotation(normals: np.ndarray) -> bool:
    return bool(np.any(np.abs(normals[:, 1:]).max(axis=1) < 1e-3 * np.linalg.norm(normals, axis=1)))


def _fixed_unitary(n: int) -> np.ndarray:
    m = np.array([[complex(1 + i + 2 * j, (i * j) % 3 - 1) for j in range(n)] for i in range(n)])
    q, _ = np.linalg.qr(m)
    return q


class BudgetExhausted(RuntimeError):
    pass


def _fs_density(z: np.ndarray) -> np.ndarray:
    """Normalized Fubini-Study density on CP^d in the chart x = (1, z)."""
    d = z.shape[1]
    return math.factorial(d) / math.pi**d * (1 + np.sum(np.abs(z) ** 2, axis=1)) ** -(d + 1)


def _sample_batch(rng: np.random.Generator, size: int, d: int, normals: np.ndarray, uniform_share: float):
    """Draw unit vectors of C^{d+1} from the mixture proposal; return them and the density ratio q / FS."""
    k = len(normals)
    unit = normals.conj() / np.linalg.norm(normals, axis=1, keepdims=True)
    comp = rng.choice(k + 1, size=size, p=[uniform_share] + [(1 - uniform_share) / k] * k)
    g = rng.normal(size=(size, d + 1)) + 1j * rng.normal(size=(size, d + 1))
    x = g / np.linalg.norm(g, axis=1, keepdims=True)
    # near component l: |<a_l, x>|^2 / |x|^2 has density Beta(1/2, d) instead of Beta(1, d)
    v = rng.beta(0.5, d, size=size)
    for l in range(k):
        sel = comp == l + 1
        if not np.any(sel):
            continue
        n_hat = unit[l]
        y = x[sel] - np.outer(x[sel] @ n_hat.conj(), n_hat)
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        phase = np.exp(2j * np.pi * rng.random(np.count_nonzero(sel)))
        x[sel] = np.sqrt(v[sel])[:, None] * phase[:, None] * n_hat[None, :] + np.sqrt(1 - v[sel])[:, None] * y
    s2 = np.abs(x @ unit.conj().T) ** 2
    near = s2 ** -0.5 / (d * beta_fn(0.5, d))
    ratio = uniform_share + (1 - uniform_share) / k * near.sum(axis=1)
    return x, ratio


def integrate_cp(
    dim: int,
    integrand: Callable[[np.ndarray], np.ndarray],
    singular: np.ndarray,
    budget: int = 200_000,
    seed: int = 0,
    strategy: str | None = None,
    batch: int = 50_000,
) -> IntegralEstimate:
    """Integral over CP^dim of a Lebesgue density given in the chart x = (1, z).

    ``singular`` lists normals of the hyperplanes where the density may blow up.
    Strategy 'quadrature' (dim 1) uses ``budget`` as the Gauss order per band and
    reports the gap to the half-order rule as error; 'montecarlo' draws ``budget``
    samples from a seeded mixture proposal and reports the standard error.
    """
    if dim not in (1, 2):
        raise ValueError("only CP^1 and CP^2 are supported")
    singular = np.atleast_2d(np.asarray(singular, dtype=complex))
    strategy = strategy or ("quadrature" if dim == 1 else "montecarlo")
    if strategy == "quadrature":
        if dim != 1:
            raise ValueError("tensor quadrature is only implemented on CP^1")
        order = max(4, int(budget))
        if _needs_rotation(singular):
            raise DegenerateConfiguration("a singular hyperplane passes through the chart's point at infinity")
        points = _chart_points(singular)
        fine = _polar_quadrature(integrand, points, order, 4 * order)
        coarse = _polar_quadrature(integrand, points, order // 2, 2 * order)
        if not np.isfinite(fine):
            raise FloatingPointError("non-finite integrand value near an unlisted singularity")
        nodes = len(points) * order * 4 * order * 23
        return IntegralEstimate(fine, float(abs(fine - coarse)), nodes, "polar-quadrature")
    if strategy != "montecarlo":
        raise ValueError(f"unknown strategy {strategy!r}")
    if budget < 2:
        raise BudgetExhausted("Monte Carlo needs at least two samples")
    seeds = np.random.SeedSequence(seed).spawn((budget + batch - 1) // batch)
    total, total_sq, count = 0.0 + 0.0j, 0.0, 0
    for i, ss in enumerate(seeds):
        size = min(batch, budget - i * batch)
        rng = np.random.Generator(np.random.PCG64(ss))
        x, ratio = _sample_batch(rng, size, dim, singular, 0.25)
        z = x[:, 1:] / x[:, :1]
        vals = integrand(z) / _fs_density(z) / ratio
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("non-finite integrand value near an unlisted singularity")
        total += vals.sum()
        total_sq += float(np.sum(np.abs(vals) ** 2))
        count += size
    mean = total / count
    var = max(total_sq / count - abs(mean) ** 2, 0.0)
    return IntegralEstimate(complex(mean), math.sqrt(var / count), count, "importance-montecarlo")


# ---------------------------------------------------------------- Grassmannian polylogarithms

def _chart_ready(config: HyperplaneConfig) -> HyperplaneConfig:
    """Move the configuration by a fixed unitary if a hyperplane sits at the chart's infinity."""
    if config.dim == 1 and _needs_rotation(singular_normals(config)):
        return config.transformed(_fixed_unitary(2))
    return config


def grassmann_polylog(
    config: HyperplaneConfig,
    budget: int | None = None,
    seed: int = 0,
    strategy: str | None = None,
    scales: Sequence[complex] | None = None,
    allow_special: bool = False,
) -> IntegralEstimate:
    """(2 pi i)^{1-n} times the integral over CP^{n-1} of r_{2n-2} of the alternating wedge of the f_i.

    Non-generic configurations are rejected unless ``allow_special`` is set; the
    integral still converges on them but is not continuous there.
    """
    d = config.dim
    if d not in (1, 2) or config.size != 2 * d + 2:
        raise ValueError("need 4 hyperplanes in CP^1 or 6 in CP^2")
    if not allow_special and not config.is_generic():
        raise DegenerateConfiguration("configuration is not in general position")
    config = _chart_ready(config)
    strategy = strategy or ("quadrature" if d == 1 else "montecarlo")
    if budget is None:
        budget = 48 if strategy == "quadrature" else 200_000
    est = integrate_cp(
        d,
        lambda z: grassmann_density(config, z, scales),
        singular_normals(config),
        budget=budget,
        seed=seed,
        strategy=strategy,
    )
    return est.scaled(TWO_PI_I ** (1 - (d + 1)))


def _triple_det(a, b, c) -> complex:
    return complex(np.linalg.det(np.array([a, b, c], dtype=complex)))


def grassmann_polylog3_parts(points: Sequence[Sequence[complex]]) -> tuple[float, float]:
    """(T, G) with T = (1/90) L_3(r_3(l_0..l_5)) and G = (1/9) Alt_6(log|D(l_0l_1l_2)| log|D(l_1l_2l_3)| log|D(l_2l_3l_4)|).

    r_3 is already alternated over the six points, so T applies L_3 to it once.
    """
    from .projective import apply_function, r3_element

    vecs = [tuple(complex(c) for c in p) for p in points]
    if len(vecs) != 6 or any(len(v) != 3 for v in vecs):
        raise ValueError("need six points of P^2")
    logdet = {}
    for key in itertools.combinations(range(6), 3):
        dv = _triple_det(*(vecs[i] for i in key))
        if abs(dv) < 1e-12 * math.prod(np.linalg.norm(vecs[i]) for i in key):
            raise DegenerateConfiguration(f"points {key} are collinear")
        logdet[key] = math.log(abs(dv))
    trilog = apply_function(r3_element(vecs), lambda x: polylog_sv(3, complex(x)))
    logs = 0.0
    for p, sign in signed_permutations(6):
        logs += sign * (
            logdet[tuple(sorted(p[0:3]))] * logdet[tuple(sorted(p[1:4]))] * logdet[tuple(sorted(p[2:5]))]
        )
    return trilog / 90, logs / 9


def grassmann_polylog3_closed(points: Sequence[Sequence[complex]], convention: str = "stated") -> float:
    """T + G in the stated convention, T - G in the measured one (see grassmann_polylog3_parts)."""
    t, g = grassmann_polylog3_parts(points)
    return t + _convention_sign(convention) * g


def _convention_sign(convention: str) -> int:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return 1 if convention == "stated" else -1


CONVENTIONS = ("stated", "measured")


def hyperplane_cross_ratio(config: HyperplaneConfig) -> complex:
    """r(h_1..h_4) for four points of CP^1 given by normals (a_0, a_1): the zeros z = -a_0/a_1."""
    from .projective import cross_ratio

    if config.dim != 1 or config.size != 4:
        raise ValueError("need four points of CP^1")
    pts = [None if a[1] == 0 else complex(-a[0] / a[1]) for a in config.normals]
    return complex(cross_ratio(*pts))


def grassmann_polylog2_closed(config: HyperplaneConfig, convention: str = "stated") -> complex:
    """-2 L_2(r) in the stated convention; i L_2(r) is what the integral over CP^1 produces."""
    value = polylog_sv(2, hyperplane_cross_ratio(config))
    return complex(-2 * value) if _convention_sign(convention) > 0 else 1j * value


# ---------------------------------------------------------------- psi_n for n = 2

def _log_form_and_grad(h: HermForm, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log H(1, z) and its real gradient (d/dx_j, d/dy_j) stacked as shape (N, 2d)."""
    x = np.hstack([np.ones((z.shape[0], 1), dtype=complex), z])
    hv = h(x)
    dz = (x.conj() @ h.matrix)[:, 1:] / hv[:, None]  # holomorphic derivative of log H
    return np.log(hv), np.hstack([2 * dz.real, -2 * dz.imag])


def psi_density(forms: Sequence[HermForm], z: np.ndarray) -> np.ndarray:
    """Lebesgue density of log|mu_1/mu_0| dlog|mu_2/mu_0| ^ dlog|mu_3/mu_0| on CP^1, mu_i the FS form of H_i."""
    if len(forms) != 4 or any(f.matrix.shape != (2, 2) for f in forms):
        raise ValueError("psi_2 takes four Hermitian forms on C^2")
    n = 2
    data = [_log_form_and_grad(f, z) for f in forms]
    phi = [n * (data[0][0] - data[i][0]) for i in range(4)]
    grad = [n * (data[0][1] - data[i][1]) for i in range(4)]
    return phi[1] * (grad[2][:, 0] * grad[3][:, 1] - grad[2][:, 1] * grad[3][:, 0])


def psi(
    forms: Sequence[HermForm | Sequence[complex]],
    budget: int | None = None,
    seed: int = 0,
    strategy: str | None = None,
) -> IntegralEstimate:
    """psi_2(H_0, .., H_3); a bare normal vector a stands for the boundary form |<a, x>|^2."""
    herm = [f if isinstance(f, HermForm) else HermForm.boundary(f) for f in forms]
    if all(h.rank < 2 for h in herm) and len({tuple(np.round(np.linalg.eigh(h.matrix)[1][:, -1], 12)) for h in herm}) < 2:
        raise DegenerateConfiguration("all forms degenerate along the same point")
    kernels = []
    for h in herm:
        if h.rank < 2:
            w, v = np.linalg.eigh(h.matrix)
            kernels.append(v[:, -1].conj())  # the kernel is the hyperplane <conj(v), x> = 0
    singular = np.array(kernels) if kernels else np.array([[1.0, 1.0]], dtype=complex)
    strategy = strategy or "quadrature"
    if strategy == "quadrature" and _needs_rotation(singular):
        u = _fixed_unitary(2)
        herm = [HermForm(u.conj().T @ h.matrix @ u) for h in herm]
        singular = singular @ u
    if budget is None:
        budget = 48 if strategy == "quadrature" else 200_000
    return integrate_cp(1, lambda z: psi_density(herm, z), singular, budget=budget, seed=seed, strategy=strategy)


def psi_ratio_constant(n: int = 2, convention: str = "stated") -> complex:
    """psi_n / L^G_n: (-4)^{-n} (2 pi i)^{n-1} (2n)^{2n-1} binom(2n-2, n-1) as stated.

    The measured ratio for n = 2 is -4 times that, i.e. -64 pi i.
    """
    stated = (-4.0) ** (-n) * TWO_PI_I ** (n - 1) * (2 * n) ** (2 * n - 1) * math.comb(2 * n - 2, n - 1)
    if _convention_sign(convention) > 0:
        return stated
    if n != 2:
        raise ValueError("the measured ratio is only available for n = 2")
    return -4 * stated


# ---------------------------------------------------------------- special configurations

def special_value(cfg: ProjConfig, convention: str = "stated") -> complex:
    """L^G_n on a special configuration in closed form, a the generalized cross-ratio.

    stated:   -(-1)^{n(n-1)/2} 4^{n-1} binom(2n-2, n-1)^{-1} Ltilde_n(a)
    measured: i^{n-1} Ltilde_n(a)
    """
    _check_special(cfg)
    n = cfg.dim + 1
    a = complex(gen_cross_ratio_special(cfg))
    lt = polylog_sv_levin(n, a)
    if _convention_sign(convention) > 0:
        return complex(-((-1) ** (n * (n - 1) // 2)) * 4 ** (n - 1) / math.comb(2 * n - 2, n - 1) * lt)
    return 1j ** (n - 1) * lt


def special_as_hyperplanes(cfg: ProjConfig) -> HyperplaneConfig:
    """Read the points l_0..l_{n-1}, m_0..m_{n-1} as normal vectors of hyperplanes."""
    return HyperplaneConfig(np.array([[complex(c) for c in p.coords] for p in cfg.points]))


def special_integral(cfg: ProjConfig, budget: int | None = None, seed: int = 0, strategy: str | None = None) -> IntegralEstimate:
    _check_special(cfg)
    return grassmann_polylog(special_as_hyperplanes(cfg), budget=budget, seed=seed, strategy=strategy, allow_special=True)


def _ordered_top_coefficient(u: np.ndarray) -> np.ndarray:
    """Coefficient of dz ^ dzbar for dlog|g_1| ^ ... ^ dlog|g_{2d}| in the given order."""
    k, npts, d = u.shape
    out = np.zeros(npts, dtype=complex)
    for p, q, sign in _splits(k, d):
        out += sign * _det_rows(u, p) * np.conj(_det_rows(u, q))
    return out / 4**d


def levin_density(n: int, a: complex, z: np.ndarray) -> np.ndarray:
    """log|1 - z_1| prod dlog|z_i| ^ prod dlog|z_i - z_{i+1}| ^ dlog|z_{n-1} - a| as a Lebesgue density."""
    d = n - 1
    if z.shape[1] != d:
        raise ValueError("chart dimension must be n - 1")
    grads = []
    for i in range(d):
        e = np.zeros(d, dtype=complex)
        e[i] = 1
        grads.append(np.broadcast_to(e, z.shape) / z[:, i : i + 1])
    for i in range(d - 1):
        e = np.zeros(d, dtype=complex)
        e[i], e[i + 1] = 1, -1
        grads.append(np.broadcast_to(e, z.shape) / (z[:, i] - z[:, i + 1])[:, None])
    e = np.zeros(d, dtype=complex)
    e[d - 1] = 1
    grads.append(np.broadcast_to(e, z.shape) / (z[:, d - 1] - a)[:, None])
    u = np.array(grads)
    return np.log(np.abs(1 - z[:, 0])) * _ordered_top_coefficient(u) * volume_factor(d)


def levin_singular(n: int, a: complex) -> np.ndarray:
    """Normals of the lines where the Levin integrand is singular, including the line at infinity."""
    d = n - 1
    rows = [np.eye(d + 1, dtype=complex)[0]]
    for i in range(d):
        rows.append(np.eye(d + 1, dtype=complex)[i + 1])
    for i in range(d - 1):
        r = np.zeros(d + 1, dtype=complex)
        r[i + 1], r[i + 2] = 1, -1
        rows.append(r)
    r = np.zeros(d + 1, dtype=complex)
    r[0], r[d] = -a, 1
    rows.append(r)
    r = np.zeros(d + 1, dtype=complex)
    r[0], r[1] = 1, -1
    rows.append(r)
    return np.array(rows)


def levin_integral(n: int, a: complex, budget: int | None = None, seed: int = 0) -> IntegralEstimate:
    strategy = "quadrature" if n == 2 else "montecarlo"
    sing = levin_singular(n, a)
    if n == 2:
        sing = sing[1:]  # the chart's infinity is not a hyperplane for the polar rule
    if budget is None:
        budget = 48 if n == 2 else 200_000
    return integrate_cp(n - 1, lambda z: levin_density(n, a, z), sing, budget=budget, seed=seed, strategy=strategy)


# ---------------------------------------------------------------- functional equations

def restrict_to_hyperplane(normals: np.ndarray, j: int) -> np.ndarray:
    """Normals of h_i cap h_j (i != j) inside h_j, in an orthonormal basis of ker a_j."""
    from scipy.linalg import null_space

    basis = null_space(normals[j][None, :])
    return np.array([normals[i] @ basis for i in range(len(normals)) if i != j])


def cocycle_terms_a(config: HyperplaneConfig, budget: int | None = None) -> list[IntegralEstimate]:
    """L^G_n(h_j cap h_1, ..., h_j cap h_{2n+1}) for each j, for 2n + 1 hyperplanes in CP^n."""
    if config.dim != 2 or config.size != 5:
        raise ValueError("the first functional equation is implemented for 5 hyperplanes in CP^2")
    if not config.is_generic():
        raise DegenerateConfiguration("configuration is not in general position")
    return [
        grassmann_polylog(HyperplaneConfig(restrict_to_hyperplane(config.normals, j)), budget=budget)
        for j in range(config.size)
    ]


def cocycle_terms_b(config: HyperplaneConfig, budget: int | None = None) -> list[IntegralEstimate]:
    """L^G_n(h_1, .., h_j-hat, .., h_{2n+1}) for each j, for 2n + 1 hyperplanes in CP^{n-1}."""
    if config.dim != 1 or config.size != 5:
        raise ValueError("the second functional equation is implemented for 5 points of CP^1")
    if not config.is_generic():
        raise DegenerateConfiguration("configuration is not in general position")
    return [
        grassmann_polylog(HyperplaneConfig(np.delete(config.normals, j, axis=0)), budget=budget)
        for j in range(config.size)
    ]


def _alternating_defect(terms: Sequence[IntegralEstimate]) -> tuple[float, float]:
    total = sum((-1) ** (j + 1) * t.value for j, t in enumerate(terms))
    return float(abs(total)), float(math.sqrt(sum(t.std_error**2 for t in terms)))


def cocycle_defect_a(config: HyperplaneConfig, budget: int | None = None) -> float:
    return _alternating_defect(cocycle_terms_a(config, budget))[0]


def cocycle_defect_b(config: HyperplaneConfig, budget: int | None = None) -> float:
    return _alternating_defect(cocycle_terms_b(config, budget))[0]
