"""Least-squares fit of the constants relating the CP^1 integrals to their closed forms.

For random configurations it fits c in
    L^G_2(h)            = c * L_2(r(h))
    psi_2(h)            = c * L^G_2(h)
    L^G_2(special a)    = c * Ltilde_2(a)
and prints each c with its residual, next to the stated value.
"""

import argparse
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from regulab.grassmann import (
    grassmann_polylog,
    hyperplane_cross_ratio,
    psi,
    psi_ratio_constant,
    random_config,
    special_integral,
)
from regulab.polylog import polylog_sv, polylog_sv_levin
from regulab.projective import gen_cross_ratio_special, special_configuration
from regulab.suites import DEFAULT_SEED, suite_rng


@dataclass
class FitConfig:
    seed: int = DEFAULT_SEED
    configs: int = 12
    order: int = 32


def fit(xs, ys):
    xs, ys = np.asarray(xs), np.asarray(ys)
    c = complex(np.vdot(xs, ys) / np.vdot(xs, xs))
    return c, float(np.abs(ys - c * xs).max())


def run(cfg: FitConfig) -> dict:
    rng = suite_rng(cfg.seed, "fit-constants")
    l2, lg, ps = [], [], []
    for _ in range(cfg.configs):
        h = random_config(rng, 4, 1)
        lg.append(grassmann_polylog(h, budget=cfg.order).value)
        l2.append(polylog_sv(2, hyperplane_cross_ratio(h)))
        ps.append(psi(list(h.normals), budget=cfg.order).value)
    lt, sp = [], []
    for _ in range(cfg.configs):
        w = tuple(complex(c) for c in rng.normal(size=2) + 1j * rng.normal(size=2))
        frame = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        s = special_configuration(2, w, frame)
        sp.append(special_integral(s, budget=cfg.order).value)
        lt.append(polylog_sv_levin(2, complex(gen_cross_ratio_special(s))))
    out = {}
    for name, (xs, ys), stated in (
        ("L^G_2 / L_2(r)", (l2, lg), -2),
        ("psi_2 / L^G_2", (lg, ps), psi_ratio_constant(2, "stated")),
        ("special n=2 / Ltilde_2", (lt, sp), -(-1) * 4 / math.comb(2, 1)),
    ):
        c, resid = fit(xs, ys)
        out[name] = {"fit": [c.real, c.imag], "max_residual": resid, "stated": [complex(stated).real, complex(stated).imag]}
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for k, v in asdict(FitConfig()).items():
        p.add_argument(f"--{k}", type=type(v), default=v)
    cfg = FitConfig(**vars(p.parse_args()))
    print(json.dumps({"config": asdict(cfg), "constants": run(cfg)}, indent=2))


if __name__ == "__main__":
    main()
