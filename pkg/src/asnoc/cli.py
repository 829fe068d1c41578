"""Command-line driver.

    asnoc synth PROJECT --k 1 --out build/
    asnoc verify build/
    asnoc export-dot build/ --view topology
    asnoc report build/

PROJECT is a JSON file or ``fixture:NAME``. Exit codes: 0 ok, 1 input error,
2 synthesis infeasible, 3 verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import bundle as bio
from . import dot
from .errors import AsnocError, GrowthExhausted, Infeasible, VariableCapExceeded
from .pipeline import MODES, InputError, synthesize, verify_mode
from .verify import DEFAULT_SAMPLE_LIMIT, LINKS, MIXED, SWITCHES, verify

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 1, 2, 3
SEED_ENV = "ASNOC_SEED"


def _err(msg: str) -> None:
    print(f"asnoc: {msg}", file=sys.stderr)


def resolve_seed(seed: int | None) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        return int(env)
    return 0 if seed is None else seed


def _load_bundle(path):
    try:
        return bio.read_bundle(Path(path))
    except (OSError, ValueError, KeyError) as e:
        _err(f"cannot read bundle {path}: {e}")
        return None


def cmd_synth(project: str, out: str, mode: str = "general", k: int | None = None,
              seed: int | None = None, sharing: bool = True) -> int:
    try:
        proj = bio.load_project(project)
    except (OSError, ValueError, KeyError, TypeError) as e:
        _err(f"cannot read project {project}: {e}")
        return EXIT_INPUT
    try:
        b = synthesize(proj, mode, k, sharing, resolve_seed(seed))
    except InputError as e:
        for p in e.problems:
            _err(p)
        return EXIT_INPUT
    except (GrowthExhausted, Infeasible, VariableCapExceeded) as e:
        _err(f"synthesis infeasible: {e}")
        return EXIT_INFEASIBLE
    bio.write_bundle(Path(out), b)
    return EXIT_OK


def cmd_verify(path: str, k: int | None = None, mode: str | None = None,
               sample_limit: int = DEFAULT_SAMPLE_LIMIT, seed: int | None = None) -> int:
    b = _load_bundle(path)
    if b is None:
        return EXIT_INPUT
    K = b.K if k is None else k
    fmode = mode or verify_mode(b.mode)
    s = resolve_seed(seed if seed is not None else b.seed)
    rep = verify(b.topology, b.routing, b.sharing, K, fmode, sample_limit, s)
    bio.write_json(Path(path) / bio.VERIFY, rep.to_dict())
    status = "PASS" if rep.passed else "FAIL"
    print(f"{status}: K={K} mode={fmode} checked={rep.checked} failures={len(rep.failures)}"
          + (" (sampled)" if rep.sampled else ""))
    for fs, flows in rep.failures[:20]:
        print(f"  faults {json.dumps(fs.to_dict(), sort_keys=True)} -> flows {list(flows)}")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_export_dot(path: str, view: str = "topology", out: str | None = None) -> int:
    b = _load_bundle(path)
    if b is None:
        return EXIT_INPUT
    names = [c.name for c in b.project.ccg.cores]
    text = dot.render(view, b.topology, b.routing, b.sharing, names)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def report_rows(b) -> list[tuple]:
    pw, plain = b.power.get("with_sharing", {}), b.power.get("without_sharing", {})

    def g(d, key):
        return d.get(key, 0)

    return [
        ("input ports", g(plain, "input_ports"), g(pw, "input_ports")),
        ("output ports", g(plain, "output_ports"), g(pw, "output_ports")),
        ("switch power (mW)", g(plain, "switch"), g(pw, "switch")),
        ("link power (mW)", g(plain, "link"), g(pw, "link")),
        ("interface power (mW)", g(plain, "interface"), g(pw, "interface")),
        ("total power (mW)", g(plain, "total"), g(pw, "total")),
    ]


def cmd_report(path: str) -> int:
    b = _load_bundle(path)
    if b is None:
        return EXIT_INPUT
    print(f"design      {b.project.name} (mode={b.mode}, K={b.K})")
    print(f"switches    {b.power.get('switches_used', 0)}")
    print(f"links       {b.power.get('links', 0)}")
    print(f"{'':22}{'no sharing':>14}{'sharing':>14}")
    for name, a, c in report_rows(b):
        if isinstance(a, int) and isinstance(c, int):
            print(f"{name:22}{a:>14d}{c:>14d}")
        else:
            print(f"{name:22}{a:>14.4f}{c:>14.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asnoc", description="Fault-tolerant custom NoC synthesis.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("synth", help="synthesize a design bundle")
    s.add_argument("project", help="project JSON file or fixture:NAME")
    s.add_argument("--mode", choices=MODES, default="general")
    s.add_argument("--k", type=int, default=None, help="faults to tolerate (default: project config)")
    s.add_argument("--out", required=True, help="bundle directory")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--no-sharing", action="store_true", help="skip port sharing")

    v = sub.add_parser("verify", help="fault-inject a bundle")
    v.add_argument("bundle")
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--mode", choices=(SWITCHES, LINKS, MIXED), default=None)
    v.add_argument("--sample-limit", type=int, default=DEFAULT_SAMPLE_LIMIT)
    v.add_argument("--seed", type=int, default=None)

    d = sub.add_parser("export-dot", help="render a bundle as Graphviz DOT")
    d.add_argument("bundle")
    d.add_argument("--view", choices=dot.VIEWS, default="topology")
    d.add_argument("--out", default=None, help="write to a file instead of stdout")

    r = sub.add_parser("report", help="print a summary table")
    r.add_argument("bundle")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.cmd == "synth":
            return cmd_synth(args.project, args.out, args.mode, args.k, args.seed, not args.no_sharing)
        if args.cmd == "verify":
            return cmd_verify(args.bundle, args.k, args.mode, args.sample_limit, args.seed)
        if args.cmd == "export-dot":
            return cmd_export_dot(args.bundle, args.view, args.out)
        return cmd_report(args.bundle)
    except AsnocError as e:
        _err(str(e))
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
