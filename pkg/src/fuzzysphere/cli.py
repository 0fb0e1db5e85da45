"""Command-line driver: ``fuzzysphere {sweep,verify,homotopy-demo}``.

Exit codes: 0 success, 1 invariant violation, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .checks import run_checks
from .config import load_config
from .errors import ConfigError, NoPathError
from .lipschitz import SharedWitnessSeminorm
from .projcalc import homotopy_decision, path_seminorm_profile, projection_path
from .sweep import run_sweep, write_outputs

log = logging.getLogger("fuzzysphere")


def cmd_sweep(cfg) -> int:
    if cfg.bounds().source == "placeholder":
        log.warning("bridge bounds are PLACEHOLDERS (h = r = 1); decision_quantity is illustrative only")
    rows = run_sweep(cfg)
    write_outputs(cfg, rows)
    print(f"wrote {len(rows)} rows to {cfg.out_csv} and {cfg.json_path}")
    return 0


def cmd_verify(cfg) -> int:
    results = run_checks(cfg)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    failed = [name for name, ok, _ in results if not ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def rotated_pair(n: int, delta: float):
    """Rank-one highest weight projection and its rotation towards the next weight line."""
    dim = n + 1
    p0 = np.zeros((dim, dim), dtype=complex)
    p0[0, 0] = 1.0
    th = math.asin(min(delta, 1.0))
    R = np.eye(dim, dtype=complex)
    R[:2, :2] = [[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]]
    return p0, R @ p0 @ R.conj().T


def homotopy_report(cfg, deltas=(0.0, 0.5, 0.9, 1.0)) -> list:
    L = SharedWitnessSeminorm.sampled(cfg.demo_n, count=64, seed=cfg.seed)
    cases = []
    for target in deltas:
        p0, p1 = rotated_pair(cfg.demo_n, target)
        L0, L1 = L(p0), L(p1)
        decision = homotopy_decision(float(np.linalg.norm(p0 - p1, 2)), 0.0, L0, L1)
        case = {"target_delta": target, "delta": decision.delta, "verdict": decision.verdict.value,
                "L_p0": L0, "L_p1": L1}
        try:
            path = projection_path(p0, p1)
        except NoPathError as exc:
            case.update(status="no-path", error=str(exc))
        else:
            prof = path_seminorm_profile(path, L)
            case.update(status="constant-path" if path.delta == 0 else "path",
                        max_L=float(prof.values.max()), bound=prof.bound, bound_holds=prof.holds,
                        max_step=path.max_step(), grid_points=len(path))
        cases.append(case)
    return cases


def cmd_homotopy_demo(cfg) -> int:
    cases = homotopy_report(cfg)
    text = json.dumps({"n": cfg.demo_n, "cases": cases}, indent=2)
    Path(cfg.out_report).write_text(text + "\n")
    print(text)
    return 0


COMMANDS = {"sweep": cmd_sweep, "verify": cmd_verify, "homotopy-demo": cmd_homotopy_demo}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzysphere", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("-c", "--config", help="flat key = value config file")
    parser.add_argument("-s", "--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args.set)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    return COMMANDS[args.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
