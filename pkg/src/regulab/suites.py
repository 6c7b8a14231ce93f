"""Named verification suites producing check records.

Every suite is a pure function of (seed, budget, tol): random inputs come from a
PCG64 stream keyed by the seed and the suite name, so reruns give identical payloads.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__

DEFAULT_SEED = 1729


@dataclass
class Check:
    name: str
    anchor: str
    lhs: object
    rhs: object
    abs_err: float
    rel_err: float
    tolerance: float
    passed: bool
    runtime_ms: float = 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["lhs"], d["rhs"] = _jsonable(self.lhs), _jsonable(self.rhs)
        return d


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _check(name, anchor, lhs, rhs, tol, err=None, relative=False, started=None) -> Check:
    if err is None:
        err = abs(lhs - rhs)
    err = float(err)
    scale = abs(rhs)
    rel = float(err / scale) if scale else (0.0 if err == 0 else math.inf)
    ok = (rel if relative else err) <= tol
    ms = (time.perf_counter() - started) * 1000 if started is not None else 0.0
    return Check(name, anchor, lhs, rhs, err, rel, tol, bool(ok), round(ms, 3))


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    key = int.from_bytes(hashlib.sha256(suite.encode()).digest()[:8], "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), key])))


def _cgauss(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


# ---------------------------------------------------------------- suites

def suite_abel5(seed, budget, tol):
    from .projective import abel5_defect

    rng = suite_rng(seed, "abel5")
    tol = tol or 1e-9
    out = []
    for k in range(budget or 100):
        t = time.perf_counter()
        pts = [complex(z) for z in _cgauss(rng, 5)]
        out.append(_check(f"abel5[{k}]", "five-term relation for L_2", abel5_defect(*pts), 0.0, tol, started=t))
    return out


def suite_trilog7(seed, budget, tol):
    from .projective import trilog7_defect

    rng = suite_rng(seed, "trilog7")
    tol = tol or 1e-6
    out = []
    for k in range(budget or 20):
        t = time.perf_counter()
        pts = [tuple(complex(c) for c in v) for v in _cgauss(rng, 7, 3)]
        out.append(_check(f"trilog7[{k}]", "seven-term relation for L_3 of r_3", trilog7_defect(pts), 0.0, tol, started=t))
    return out


def suite_beta(seed, budget, tol):
    from .polylog import BetaTable, beta, beta_kp, beta_kp_recursive

    n = budget or 20
    t = time.perf_counter()
    table = BetaTable.build(n)
    out = []
    fails = table.recursion_failures()
    out.append(_check("beta_kp recursions", "two-step recursions in p", len(fails), 0, 0, started=t))
    rows = [
        ("beta_kp closed sum = recursion", "closed summation vs recursion seeded by -beta_{k+1}",
         [(k, p) for k in range(n + 1) for p in range(1, n + 1) if beta_kp(k, p) != beta_kp_recursive(k, p)]),
        ("beta_{k,1} = -beta_{k+1}", "p = 1 column", [k for k in range(n + 1) if beta_kp(k, 1) != -beta(k + 1)]),
        ("beta_{0,2m} = beta_{0,2m+1} = 1/(2m+1)", "closed form at k = 0",
         [m for m in range(1, n // 2 + 1) if not (beta_kp(0, 2 * m) == beta_kp(0, 2 * m + 1) == Fraction(1, 2 * m + 1))]),
        ("beta_{1,2m-1} = -1/((2m-1)(2m+1))", "closed form at k = 1, odd p",
         [m for m in range(1, n // 2 + 1) if beta_kp(1, 2 * m - 1) != Fraction(-1, (2 * m - 1) * (2 * m + 1))]),
        ("beta_{1,2m} = 0", "closed form at k = 1, even p", [m for m in range(1, n // 2 + 1) if beta_kp(1, 2 * m) != 0]),
    ]
    for name, anchor, bad in rows:
        t = time.perf_counter()
        out.append(_check(name, anchor, len(bad), 0, 0, started=t))
    return out


def _random_affine(rng, d):
    from .forms import Affine

    return Affine(tuple(complex(c) for c in _cgauss(rng, d)), complex(_cgauss(rng, 1)[0]))


def suite_chain_map(seed, budget, tol):
    """Chain-map squares for weights 2 and 3 in both the general and the explicit formulas, plus the form identities."""
    from .forms import (
        SmoothFunction,
        _wedge_all,
        chain_map_defect,
        dlog,
        exterior_derivative,
        omega_form,
        omega_rhs,
        project_weight,
        r_form,
        relative_error,
    )

    rng = suite_rng(seed, "chain-map")
    npts = budget or 20
    tol = tol or 1e-4
    out = []
    for n in (2, 3):
        d = n
        for k in range(npts):
            fs = [_random_affine(rng, d) for _ in range(n)]
            z = _cgauss(rng, d) * 0.5
            elements = [("B", n, fs[0], ()), ("B", 2, fs[0], tuple(fs[1 : n - 1])), ("W", tuple(fs))]
            if n == 2:
                elements = elements[::2]
            for el in elements:
                label = "W" if el[0] == "W" else f"B{el[1]}x{len(el[3])}"
                for printed in (False, True):
                    t = time.perf_counter()
                    dfe = chain_map_defect(n, el, z, use_printed=printed)
                    kind = "explicit" if printed else "general"
                    out.append(_check(f"chain-map n={n} {label} {kind} [{k}]", "homomorphism of complexes", dfe, 0.0, tol, started=t))
    # d r_{m-1} = pi_m(dlog f_1 ^ ... ^ dlog f_m) and the d omega identity
    for m in (2, 3):
        for k in range(npts):
            t = time.perf_counter()
            fs = [_random_affine(rng, m) for _ in range(m)]
            z = _cgauss(rng, m) * 0.5
            lhs = exterior_derivative(lambda w: r_form(fs, w), z)
            rhs = project_weight(_wedge_all(m, [dlog(f, z) for f in fs]), m)
            out.append(_check(f"d r_{m - 1} = pi_{m}(dlog) [{k}]", "differential of r_{m-1}", relative_error(lhs, rhs), 0.0, 1e-5, started=t))
            t = time.perf_counter()
            phis = [
                SmoothFunction.test_function(_cgauss(rng, m), float(rng.uniform(0.5, 2)), _cgauss(rng, m)) for _ in range(m)
            ]
            lhs = exterior_derivative(lambda w: omega_form(phis, w), z)
            out.append(_check(f"d omega_{m - 1} [{k}]", "differential of omega_{m-1}", relative_error(lhs, omega_rhs(phis, z)), 0.0, 1e-5, started=t))
    return out


def suite_grassmann_n2(seed, budget, tol):
    """L^G_2 against both closed forms, h_0-independence, skew-symmetry, special configurations, cocycles."""
    from .grassmann import (
        HyperplaneConfig,
        cocycle_terms_a,
        cocycle_terms_b,
        _alternating_defect,
        grassmann_polylog,
        grassmann_polylog2_closed,
        random_config,
        special_integral,
        special_value,
    )
    from .projective import special_configuration

    rng = suite_rng(seed, "grassmann-n2")
    order = budget or 48
    tol = tol or 1e-4
    out = []
    for k in range(10):
        t = time.perf_counter()
        cfg = random_config(rng, 4, 1, h0=True)
        with_h0 = grassmann_polylog(cfg, budget=order)
        plain = grassmann_polylog(cfg.with_h0(None), budget=order)
        for conv in ("stated", "measured"):
            out.append(_check(f"L^G_2 vs closed form [{conv}] [{k}]", "L^G_2 as a dilogarithm of the cross-ratio",
                              with_h0.value, grassmann_polylog2_closed(cfg, conv), tol, started=t))
        comb = max(5 * (with_h0.std_error + plain.std_error), 1e-8)
        out.append(_check(f"L^G_2 h0-independence [{k}]", "independence of the auxiliary hyperplane", with_h0.value, plain.value, comb))
        swapped = HyperplaneConfig(cfg.normals[[1, 0, 2, 3]], cfg.h0)
        sw = grassmann_polylog(swapped, budget=order)
        comb = max(5 * (with_h0.std_error + sw.std_error), 1e-8)
        out.append(_check(f"L^G_2 skew-symmetry [{k}]", "alternation in the hyperplanes", sw.value, -with_h0.value, comb))
    for k in range(2):
        t = time.perf_counter()
        cfg = special_configuration(2, tuple(complex(c) for c in _cgauss(rng, 2)), _cgauss(rng, 2, 2))
        est = special_integral(cfg, budget=order)
        for conv in ("stated", "measured"):
            out.append(_check(f"special n=2 [{conv}] [{k}]", "special configuration closed form",
                              est.value, special_value(cfg, conv), max(10 * est.std_error, 1e-6), started=t))
    for k in range(3):
        t = time.perf_counter()
        d_a, e_a = _alternating_defect(cocycle_terms_a(random_config(rng, 5, 2), budget=order))
        out.append(_check(f"cocycle (5 lines in CP^2) [{k}]", "functional equation by restriction", d_a, 0.0, 5e-3, started=t))
        t = time.perf_counter()
        d_b, e_b = _alternating_defect(cocycle_terms_b(random_config(rng, 5, 1), budget=order))
        out.append(_check(f"cocycle (5 points in CP^1) [{k}]", "functional equation by deletion", d_b, 0.0, 5e-3, started=t))
    return out


def suite_grassmann_n3(seed, budget, tol):
    """Monte Carlo L^G_3 against the closed forms, and the special configuration at n = 3."""
    from .grassmann import grassmann_polylog, grassmann_polylog3_parts, random_config, special_integral, special_value
    from .projective import special_configuration

    rng = suite_rng(seed, "grassmann-n3")
    samples = budget or 200_000
    tol = tol or 2e-2
    out = []
    for k in range(5):
        t = time.perf_counter()
        cfg = random_config(rng, 6, 2)
        est = grassmann_polylog(cfg, budget=samples, seed=int(rng.integers(2**63)))
        tri, logs = grassmann_polylog3_parts(cfg.normals)
        for conv, closed in (("stated", tri + logs), ("measured", tri - logs)):
            out.append(_check(f"L^G_3 vs closed form [{conv}] [{k}]", "L^G_3 as trilogarithms plus log products",
                              est.value.real, closed, tol, relative=True, started=t))
    t = time.perf_counter()
    cfg = special_configuration(3, tuple(complex(c) for c in _cgauss(rng, 3)), _cgauss(rng, 3, 3))
    est = special_integral(cfg, budget=samples, seed=int(rng.integers(2**63)))
    for conv in ("stated", "measured"):
        out.append(_check(f"special n=3 [{conv}]", "special configuration closed form",
                          est.value, special_value(cfg, conv), 4 * est.std_error, started=t))
    return out


def suite_psi(seed, budget, tol):
    from .grassmann import grassmann_polylog, psi, psi_ratio_constant, random_config

    rng = suite_rng(seed, "psi")
    order = budget or 48
    tol = tol or 1e-2
    out = []
    for k in range(10):
        t = time.perf_counter()
        cfg = random_config(rng, 4, 1)
        ratio = psi(list(cfg.normals), budget=order).value / grassmann_polylog(cfg, budget=order).value
        for conv in ("stated", "measured"):
            out.append(_check(f"psi_2 / L^G_2 [{conv}] [{k}]", "psi versus the Grassmannian dilogarithm",
                              ratio, psi_ratio_constant(2, conv), tol, relative=True, started=t))
    return out


def _random_point(rng):
    return Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 12)))


def suite_relators(seed, budget, tol):
    from .bloch import delta2, five_term_relator

    rng = suite_rng(seed, "relators")
    out = []
    for k in range(budget or 50):
        t = time.perf_counter()
        pts = set()
        while len(pts) < 5:
            pts.add(_random_point(rng))
        pts = sorted(pts)
        if rng.random() < 0.2:
            pts[int(rng.integers(5))] = None
        img = delta2(five_term_relator(*pts))
        out.append(_check(f"delta2(five-term)[{k}]", "five-term relators lie in the kernel of delta",
                          len(img), 0, 0, started=t))
    return out


def random_function_field_element(rng, n: int):
    """A random generator {f}_m (x) g_1 ^ ... ^ g_{n-m} of weight n over Q(t), or a pure wedge."""
    from .bloch import bgen_tensor, pure_wedge
    from .rational import RationalMap

    def rmap():
        f = RationalMap.constant(_random_point(rng) or Fraction(1))
        for _ in range(int(rng.integers(1, 3))):
            f = f * RationalMap((Fraction(-int(rng.integers(-3, 4))), Fraction(1)), (Fraction(1),))
        if rng.random() < 0.5:
            f = f / RationalMap((Fraction(-int(rng.integers(-3, 4))), Fraction(1)), (Fraction(1),))
        return f

    if rng.random() < 0.2:
        return pure_wedge([rmap() for _ in range(n)])
    m = int(rng.integers(2, n + 1))
    return bgen_tensor(rmap(), m, [rmap() for _ in range(n - m)])


def suite_residues(seed, budget, tol):
    from .bloch import differential, residue_morphism
    from .symbols import Place

    rng = suite_rng(seed, "residues")
    out = []
    for k in range(budget or 50):
        n = 2 + k % 2
        t = time.perf_counter()
        el = random_function_field_element(rng, n)
        place = Place.infinity() if rng.random() < 0.2 else Place.point(int(rng.integers(-3, 4)))
        lhs = residue_morphism(differential(el), place)
        rhs = differential(residue_morphism(el, place))
        diff = lhs - rhs
        out.append(_check(f"residue commutes with delta n={n} [{k}]", "residue morphism of complexes",
                          len(diff), 0, 0, started=t))
    return out


def suite_coproduct(seed, budget, tol):
    from .bloch import coassociativity_sides, counit_sides, li_symbol

    out = []
    for n in range(1, (budget or 6) + 1):
        t = time.perf_counter()
        left, right = coassociativity_sides(n)
        out.append(_check(f"coassociativity Li_{n}", "coproduct of polylogarithm symbols", len(left - right), 0, 0, started=t))
        # the log factors carry the counit: (id (x) eps) Delta Li_n = Li_n
        t = time.perf_counter()
        _, right_side = counit_sides(n)
        target = type(right_side).single(li_symbol(n), 1)
        out.append(_check(f"counit Li_{n}", "counit on the log factor", len(right_side - target), 0, 0, started=t))
    return out


def suite_zeta_leibniz(seed, budget, tol):
    from scipy.special import zeta

    from .polylog import zeta_leibniz

    tol = tol or 1e-3
    out = []
    for n in (2, 3):
        t = time.perf_counter()
        est = zeta_leibniz(n, budget=budget or 8, tol=tol)
        out.append(_check(f"zeta({n}) iterated integral", "zeta values as iterated integrals", est.value, float(zeta(n)), tol, started=t))
    return out


IMAGINARY_FIELDS = (-3, -4, -15, -20, -23, -47, -71, -104, -167, -199)
REAL_FIELDS = (5, 13, 40, 145, 229)


def suite_class_number(seed, budget, tol):
    from .arakelov import class_number_formula_check, field_data, product_formula_residuals, r_mu, weight_one_complex

    out = []
    for D in IMAGINARY_FIELDS + REAL_FIELDS:
        t = time.perf_counter()
        row = class_number_formula_check(D)
        limit_tol = tol or 1e-10
        out.append(_check(f"-R_mu = zeta_F leading term at 0, D={D}", "class number formula via R_mu",
                          row["lhs"], row["rhs"], limit_tol, started=t))
        if D > 0:
            out.append(_check(f"residue at s=1, D={D}", "residue of zeta_F at s = 1",
                              row["residue_series"], row["residue_formula"], 1e-6))
        cx = weight_one_complex(field_data(D))
        out.append(_check(f"product formula, D={D}", "product formula on S-unit generators",
                          float(np.abs(product_formula_residuals(cx)).max(initial=0.0)), 0.0, 1e-12))
        out.append(_check(f"R_mu of shift, D={D}", "R_mu of a shifted complex is the reciprocal",
                          r_mu(cx.shifted()) * r_mu(cx), 1.0, 1e-12))
    return out


SUITES: dict[str, Callable] = {
    "abel5": suite_abel5,
    "trilog7": suite_trilog7,
    "beta-identities": suite_beta,
    "chain-map": suite_chain_map,
    "grassmann-n2": suite_grassmann_n2,
    "grassmann-n3": suite_grassmann_n3,
    "psi": suite_psi,
    "relators": suite_relators,
    "residues": suite_residues,
    "coproduct": suite_coproduct,
    "zeta-leibniz": suite_zeta_leibniz,
    "class-number": suite_class_number,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, budget: int | None = None, tol: float | None = None) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed, budget, tol)


def report(command: str, config: dict, checks: list[Check]) -> dict:
    return {
        "tool": "regulab",
        "version": __version__,
        "command": command,
        "config": config,
        "records": [c.to_json() for c in checks],
    }


def payload(rep: dict) -> dict:
    """The report without wall-clock fields; equal across reruns with the same seed and budget."""
    return {**rep, "records": [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rep["records"]]}
