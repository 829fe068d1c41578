"""Link-fault-only synthesis: NFT vs 1FT link counts on the same switch count.

    python3 scripts/link_fault_table.py [--mode directed|fttg]
"""

from __future__ import annotations

import argparse
import time

from asnoc import linkfault
from asnoc.bundle import load_project, synthesis_fixtures
from asnoc.mapping import place_switches


def compare(project, mode: str = linkfault.DIRECTED):
    """Grow the 1FT design, then solve NFT on the same placement."""
    cfg = project.cfg.with_(K=1)
    ft = linkfault.synth_link_fault_grow(project.ccg, cfg, mode)
    sw = place_switches(project.ccg, ft.topology.n_sw)
    nft = linkfault.synth_link_fault(project.ccg, sw, cfg.with_(K=0), mode)
    return nft, ft


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--mode", choices=(linkfault.DIRECTED, linkfault.FTTG), default=linkfault.DIRECTED)
    ap.add_argument("--fixtures", nargs="*", default=None)
    args = ap.parse_args()
    print(f"{'fixture':10} n_sw  links(NFT) links(1FT)  obj(NFT)  obj(1FT)   time")
    for name in args.fixtures or synthesis_fixtures():
        t0 = time.perf_counter()
        nft, ft = compare(load_project(f"fixture:{name}"), args.mode)
        print(f"{name:10} {ft.topology.n_sw:4d}  {len(nft.topology.ss_links):10d} {len(ft.topology.ss_links):10d}"
              f"  {nft.objective:8.2f}  {ft.objective:8.2f} {time.perf_counter() - t0:6.1f}s", flush=True)


if __name__ == "__main__":
    main()
