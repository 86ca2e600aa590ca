"""Explore the closure set W_r(alpha) for a few small cases and look for 0."""
from __future__ import annotations

from spectree.alg import parse
from spectree.wset import SearchLimits, WContext, closure_search

CASES = [("1", 1), ("sqrt(2)", 2), ("2", 2), ("2", 1), ("sqrt(5)", 3)]


def main() -> None:
    for alpha, r in CASES:
        ctx = WContext(parse(alpha), r)
        res = closure_search(ctx, SearchLimits(max_rounds=6), targets=[parse("0")], stop_when_found=False)
        values = sorted(res.explored, key=lambda v: v.sort_key())
        shown = ", ".join(str(v) for v in values[:8]) + (" ..." if len(values) > 8 else "")
        zero = "contains 0" if res.found else ("no 0 (saturated)" if res.saturated else "no 0 yet")
        print(f"W_{r}({alpha}) after {res.rounds} rounds: {len(values)} values, {zero}")
        print(f"    {shown}")


if __name__ == "__main__":
    main()
