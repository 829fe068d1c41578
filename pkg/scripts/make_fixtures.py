"""Regenerate the bundled fixtures under src/asnoc/data/fixtures.

    python3 scripts/make_fixtures.py

Synthetic graphs come from a seeded generator so the files are reproducible.
The MP3 and MPEG4 graphs keep the published flow structure but use
representative bandwidths and floorplans; treat them as structural only.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "asnoc" / "data" / "fixtures"

# e_bit is 0.5 pJ/bit/mm expressed in mW per (MB/s * mm), matching the mW power tables
BASE_CONFIG = {"K": 1, "n_sw": 4, "bw_max": 3000.0, "max_size": 10, "e_bit": 0.004}

# (src, dst, default path, alternative path) for the 13-core MP3 encoder/decoder
MP3_ROUTES = [
    (1, 0, [0], [3]),
    (2, 1, [0], [3]),
    (3, 0, [3], [2, 0]),
    (4, 3, [2], [1, 3]),
    (7, 5, [0], [1]),
    (7, 6, [0], [1, 3]),
    (8, 7, [1, 0], [2, 3]),
    (9, 8, [1], [0, 2]),
    (10, 9, [1], [2]),
    (11, 8, [1], [2]),
    (12, 4, [2], [3, 1]),
    (12, 10, [2], [3, 0, 1]),
    (12, 11, [2], [3, 1]),
]
MP3_BW = [120, 160, 90, 150, 60, 70, 200, 110, 140, 100, 180, 80, 130]
MP3_POS = [
    (1, 1), (3, 1), (5, 1), (7, 1),
    (1, 3), (3, 3), (5, 3), (7, 3),
    (1, 5), (3, 5), (5, 5), (7, 5), (4, 7),
]
MP3_SWITCHES = [(3, 2), (5, 4), (4, 6), (6, 2)]

MPEG4_CORES = ["vu", "au", "med_cpu", "rast", "sdram", "sram1", "sram2",
               "idct", "adsp", "up_samp", "bab", "risc"]
MPEG4_POS = [(1, 1), (3, 1), (5, 1), (7, 1), (3, 3), (5, 3), (5, 5),
             (1, 3), (7, 3), (1, 5), (3, 5), (7, 5)]
MPEG4_FLOWS = [
    ("vu", "sdram", 190), ("au", "sdram", 1), ("med_cpu", "sdram", 60),
    ("med_cpu", "sram1", 40), ("rast", "sdram", 600), ("rast", "sram1", 40),
    ("sdram", "up_samp", 910), ("up_samp", "sram2", 670), ("sram2", "idct", 250),
    ("idct", "sram2", 250), ("adsp", "sdram", 1), ("sdram", "bab", 32),
    ("bab", "sram2", 173), ("risc", "sdram", 500), ("sram2", "risc", 500),
    ("sdram", "risc", 500), ("risc", "sram1", 40),
]


def _cores(pos, names=None):
    return [{"id": i, "name": names[i] if names else f"c{i}", "pos": [float(x), float(y)]}
            for i, (x, y) in enumerate(pos)]


def mp3_project(with_design: bool) -> dict:
    flows = [{"src": s, "dst": d, "bandwidth": float(bw), "latency_limit": 4}
             for (s, d, _, _), bw in zip(MP3_ROUTES, MP3_BW)]
    proj = {
        "schema": 1,
        "name": "mp3encdec",
        "provenance": "flow list of the 13-core MP3 encoder/decoder; bandwidths and floorplan "
                      "are representative placeholders (structural only)",
        "comm_graph": {"cores": _cores(MP3_POS), "flows": flows},
        "config": dict(BASE_CONFIG),
    }
    if with_design:
        cs, ss = set(), set()
        for s, d, p0, p1 in MP3_ROUTES:
            for p in (p0, p1):
                cs.add((s, p[0], "cs"))
                cs.add((d, p[-1], "sc"))
                ss.update(zip(p[:-1], p[1:]))
        proj["name"] = "mp3_table"
        proj["provenance"] = "published one-fault-tolerant routing table on 4 switches"
        proj["switches"] = [{"id": i, "pos": [float(x), float(y)]} for i, (x, y) in enumerate(MP3_SWITCHES)]
        proj["design"] = {
            "topology": {
                "switches": proj["switches"],
                "cs_links": sorted([list(t) for t in cs]),
                "ss_links": sorted([list(t) for t in ss]),
            },
            "routing": {"flows": flows, "paths": [[p0, p1] for _, _, p0, p1 in MP3_ROUTES]},
        }
    return proj


def mpeg4_project() -> dict:
    idx = {n: i for i, n in enumerate(MPEG4_CORES)}
    flows = [{"src": idx[a], "dst": idx[b], "bandwidth": float(bw), "latency_limit": 4}
             for a, b, bw in MPEG4_FLOWS]
    return {
        "schema": 1,
        "name": "mpeg4",
        "provenance": "12-core MPEG4 decoder shape; bandwidths representative, floorplan invented",
        "comm_graph": {"cores": _cores(MPEG4_POS, MPEG4_CORES), "flows": flows},
        "config": dict(BASE_CONFIG),
    }


def synthetic_project(n_core: int, seed: int) -> dict:
    rng = random.Random(seed)
    grid = [(x, y) for x in range(0, 12, 2) for y in range(0, 12, 2)]
    pos = rng.sample(grid, n_core)
    pairs = set()
    # a ring keeps every core communicating, extra chords add fan-in/out
    order = list(range(n_core))
    rng.shuffle(order)
    for a, b in zip(order, order[1:] + order[:1]):
        pairs.add((a, b))
    while len(pairs) < int(1.5 * n_core):
        a, b = rng.sample(range(n_core), 2)
        pairs.add((a, b))
    flows = [{"src": a, "dst": b, "bandwidth": float(rng.randrange(50, 601, 10)),
              "latency_limit": rng.choice([3, 4])} for a, b in sorted(pairs)]
    return {
        "schema": 1,
        "name": f"d{n_core}",
        "provenance": f"synthetic: scripts/make_fixtures.py seed {seed}",
        "comm_graph": {"cores": _cores(pos), "flows": flows},
        "config": dict(BASE_CONFIG),
    }


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    projects = [mp3_project(False), mp3_project(True), mpeg4_project()]
    projects += [synthetic_project(n, 100 + n) for n in (8, 12, 16)]
    for p in projects:
        path = OUT / f"{p['name']}.json"
        path.write_text(json.dumps(p, indent=2, sort_keys=True) + "\n")
        print("wrote", path.relative_to(OUT.parents[3]))


if __name__ == "__main__":
    main()
