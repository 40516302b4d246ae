"""Recompute every bundled example and print a pass/fail table."""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from germdet.cli import _check_entry, _corpus_dir


@dataclass
class SweepConfig:
    only: tuple[str, ...] = ()
    as_json: bool = False


def sweep(cfg: SweepConfig) -> list[dict]:
    index = json.loads((_corpus_dir() / "expected.json").read_text(encoding="utf-8"))
    rows = []
    for entry in index["examples"]:
        if cfg.only and entry["name"] not in cfg.only:
            continue
        t0 = time.perf_counter()
        res = _check_entry(entry)
        res["seconds"] = round(time.perf_counter() - t0, 3)
        rows.append(res)
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="*", default=[])
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    rows = sweep(SweepConfig(tuple(a.only), a.json))
    if a.json:
        print(json.dumps(rows, indent=2, ensure_ascii=False))
    else:
        for r in rows:
            print(f"{r['name']:<36} {r['origin']:<10} {'PASS' if r['pass'] else 'FAIL'}  {r['seconds']:.3f}s")
    return 0 if all(r["pass"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
