"""Class number formula over a range of fundamental discriminants, written as CSV.

Each row holds h, R, w, the two sides -R_mu and lim zeta_F at s = 0, and the
residue at s = 1 from the series and from 2^{r1+r2} pi^{r2} R h / (w sqrt|D|).
"""

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass

from regulab.arakelov import class_number_formula_check, is_fundamental


@dataclass
class SweepConfig:
    lo: int = -1000
    hi: int = 1000
    out: str = "-"


FIELDS = ["D", "h", "R", "w", "lhs", "rhs", "abs_err", "residue_series", "residue_formula", "residue_err", "pass", "seconds"]


def run(cfg: SweepConfig):
    for D in range(cfg.lo, cfg.hi + 1):
        if not is_fundamental(D):
            continue
        t = time.perf_counter()
        row = class_number_formula_check(D)
        row["seconds"] = round(time.perf_counter() - t, 4)
        yield {k: row[k] for k in FIELDS}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for k, v in asdict(SweepConfig()).items():
        p.add_argument(f"--{k}", type=type(v), default=v)
    cfg = SweepConfig(**vars(p.parse_args()))
    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    w = csv.DictWriter(fh, fieldnames=FIELDS)
    w.writeheader()
    fails = 0
    for row in run(cfg):
        w.writerow(row)
        fails += not row["pass"]
    if fh is not sys.stdout:
        fh.close()
    print(f"{fails} failing discriminants in [{cfg.lo}, {cfg.hi}]", file=sys.stderr)
    sys.exit(1 if fails else 0)


if __name__ == "__main__":
    main()
