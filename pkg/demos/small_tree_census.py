"""Enumerate all trees up to 10 vertices and list which have radius sqrt(k)."""
from __future__ import annotations

from collections import Counter

from spectree.oracle import scan_bounds, scan_sqrt_k


def main() -> None:
    rep = scan_sqrt_k(10, 9)
    print("trees per order:", rep["counts"])
    by_k = Counter(h["k"] for h in rep["hits"])
    for k in sorted(by_k):
        degrees = sorted({h["delta"] for h in rep["hits"] if h["k"] == k})
        print(f"k={k}: {by_k[k]} trees, max degrees {degrees}")
    print("degree window violations:", len(rep["violations"]))
    b = scan_bounds(10)
    print(f"radius bounds checked on {b['total']} trees, violations: {len(b['violations'])}")


if __name__ == "__main__":
    main()
