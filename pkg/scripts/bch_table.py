"""Print denominators of the homogeneous Baker-Campbell-Hausdorff parts against the (l!)^4 scale."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from germdet import bch_integrality


@dataclass
class BCHTableConfig:
    L: int = 6
    as_json: bool = False


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=6)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    cfg = BCHTableConfig(a.L, a.json)
    rec = bch_integrality(cfg.L, max_L=max(cfg.L, 6))
    if cfg.as_json:
        print(json.dumps(rec.to_json(), indent=2))
    else:
        print(f"{'l':>2} {'denominator lcm':>16} {'(l!)^4':>16}  integral")
        for r in rec.rows:
            print(f"{r.l:>2} {r.denominator_lcm:>16} {r.scale:>16}  {r.passes}")
    return 0 if rec.passes else 1


if __name__ == "__main__":
    raise SystemExit(main())
