"""Synthesize every fixture for K = 0..3 and tabulate ports, power and verification.

    python3 scripts/k_sweep.py [--fixtures d8 d12] [--kmax 3]
"""

from __future__ import annotations

import argparse
import time

from asnoc.bundle import load_project, synthesis_fixtures
from asnoc.errors import AsnocError
from asnoc.pipeline import synthesize, verify_mode
from asnoc.verify import verify


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--fixtures", nargs="*", default=None)
    ap.add_argument("--kmax", type=int, default=3)
    args = ap.parse_args()
    names = args.fixtures or synthesis_fixtures()
    print(f"{'fixture':10} K  sw links  ip(ns) ip(s)  op(ns) op(s)  P(ns)     P(s)      verify   time")
    for name in names:
        proj = load_project(f"fixture:{name}")
        for K in range(args.kmax + 1):
            t0 = time.perf_counter()
            try:
                b = synthesize(proj, K=K)
            except AsnocError as e:
                print(f"{name:10} {K}  infeasible: {e}")
                continue
            rep = verify(b.topology, b.routing, b.sharing, K, verify_mode(b.mode))
            dt = time.perf_counter() - t0
            ns, s = b.power["without_sharing"], b.power["with_sharing"]
            print(f"{name:10} {K}  {b.power['switches_used']:2d} {b.power['links']:5d}"
                  f"  {ns['input_ports']:6d} {s['input_ports']:5d}  {ns['output_ports']:6d} {s['output_ports']:5d}"
                  f"  {ns['total']:8.1f}  {s['total']:8.1f}  {'pass' if rep.passed else 'FAIL':6} {dt:6.1f}s",
                  flush=True)


if __name__ == "__main__":
    main()
