"""Compare the computed determinacy order with the classical mu+1 / tau+1 bound on a family of germs."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from germdet import FieldDesc, MapGerm, determinacy_order, milnor_tjurina

DEFAULT_GERMS = (
    "x^2 + y^2",
    "x^2 + y^3",
    "x^2 + y^5",
    "x^3 + y^4",
    "x^3 + y^5",
    "x^2*y + y^4",
    "x^3 + x*y^3",
    "x^5 + y^5 + x^2*y^2",
)


@dataclass
class DeterminacySweepConfig:
    germs: tuple[str, ...] = DEFAULT_GERMS
    vars: tuple[str, ...] = ("x", "y")
    groups: tuple[str, ...] = ("R", "K")
    characteristic: int = 0
    extra: list[str] = field(default_factory=list)


def sweep(cfg: DeterminacySweepConfig) -> list[tuple]:
    F = FieldDesc(cfg.characteristic)
    rows = []
    for text in cfg.germs + tuple(cfg.extra):
        f = MapGerm.from_strings([text], cfg.vars, F)
        mu, tau = milnor_tjurina(f)
        orders = [determinacy_order(f, g) for g in cfg.groups]
        rows.append((text, mu, tau, orders))
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("germs", nargs="*", help="extra germs in x, y")
    ap.add_argument("--char", type=int, default=0)
    a = ap.parse_args()
    cfg = DeterminacySweepConfig(characteristic=a.char, extra=a.germs)
    print(f"{'germ':<24} {'mu':>4} {'tau':>4}  " + "  ".join(f"{g}: d_min / bound" for g in cfg.groups))
    for text, mu, tau, orders in sweep(cfg):
        cells = "  ".join(f"{o.d_min!s:>5} / {o.classical_bound!s:<5}" for o in orders)
        print(f"{text:<24} {mu!s:>4} {tau!s:>4}  {cells}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
