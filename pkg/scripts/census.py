#!/usr/bin/env python3
"""Certification census over the built-in corpus.

Runs the complementedness, completeness, left-cancellativity, Ore, and
spine pipelines on every example and prints one row per presentation.
"""

import argparse
import json
import time

from forestskein import corpus, ore_spine, reversing
from forestskein.presentation import is_complemented


def census_row(name: str) -> dict:
    p = corpus.load(name)
    t0 = time.monotonic()
    complete = reversing.is_complete(p)
    lc = reversing.decide_left_cancellative(p)
    ore = ore_spine.cofinal_search(p)
    sp = ore_spine.spine(p)
    cert = ore_spine.f_infinity_certificate(p, sp, ore) if sp.stabilized else None
    return {
        "name": name,
        "colours": len(p.colours),
        "relations": len(p.relations),
        "complemented": is_complemented(p),
        "complete": complete.verdict,
        "lc": lc.verdict,
        "ore": ore.verdict,
        "spine": len(ore_spine.spine_classes_deduped(p, sp)),
        "spine_stabilized": sp.stabilized,
        "f_infinity": "proved" if cert else "unknown",
        "seconds": round(time.monotonic() - t0, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="emit one JSON document")
    ap.add_argument("names", nargs="*", default=corpus.names())
    args = ap.parse_args()
    rows = [census_row(name) for name in (args.names or corpus.names())]
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return
    header = (f"{'name':10s} {'compl.':7s} {'complete':10s} {'lc':8s} "
              f"{'ore':9s} {'spine':6s} {'F-inf':8s} {'sec':>5s}")
    print(header)
    print("-" * len(header))
    for r in rows:
        spine = f"{r['spine']}{'' if r['spine_stabilized'] else '+'}"
        print(f"{r['name']:10s} {str(r['complemented']):7s} {r['complete']:10s} "
              f"{r['lc']:8s} {r['ore']:9s} {spine:6s} {r['f_infinity']:8s} "
              f"{r['seconds']:5.2f}")


if __name__ == "__main__":
    main()
