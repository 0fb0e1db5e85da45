"""The (k, n) sweep: one row of defect and seminorm data per pair."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .bridge import decision_quantity, defect_norm_closed, expected_defect
from .config import SweepConfig
from .lipschitz import lip_projection_estimate, lip_sphere_estimate
from .modules import SphereProjectionField

HEADER = "k,n,defect_numeric,defect_analytic,abs_err,lipB_estimate,lipA_estimate,decision_quantity,wall_seconds"


@dataclass(frozen=True)
class SweepRow:
    k: int
    n: int
    defect_numeric: float
    defect_analytic: float
    abs_err: float
    lipB_estimate: float
    lipA_estimate: float
    decision_quantity: float
    wall_seconds: float


def task_seed(seed: int, k: int, n: int) -> int:
    """Independent stream per (k, n), stable under any scheduling."""
    return int(np.random.SeedSequence([seed, k + 1_000_000, n]).generate_state(1)[0])


def sphere_estimate(cfg: SweepConfig, k: int) -> float:
    if k == 0 or cfg.sphere_pairs == 0:
        return 0.0
    est = lip_sphere_estimate(SphereProjectionField(k), pairs=cfg.sphere_pairs,
                              seed=task_seed(cfg.seed, k, 0), iterations=cfg.lip_iterations)
    return est.value


def compute_row(cfg: SweepConfig, k: int, n: int, lipA: float) -> SweepRow:
    start = time.perf_counter()
    numeric = defect_norm_closed(k, n)
    analytic = expected_defect(k, n)
    if k == 0 or cfg.lip_starts == 0:
        lipB = 0.0
    else:
        lipB = lip_projection_estimate(k, n, "beta", starts=cfg.lip_starts,
                                       seed=task_seed(cfg.seed, k, n),
                                       iterations=cfg.lip_iterations).value
    decision = decision_quantity(k, n, cfg.bounds(), lipA, lipB).value
    wall = time.perf_counter() - start if cfg.timing else 0.0
    return SweepRow(k, n, numeric, analytic, abs(numeric - analytic), lipB, lipA, decision, wall)


def _row_task(args):
    return compute_row(*args)


def run_sweep(cfg: SweepConfig) -> list:
    lipA = {k: sphere_estimate(cfg, k) for k in sorted(set(cfg.k_list))}
    tasks = [(cfg, k, n, lipA[k]) for k, n in cfg.pairs()]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    return sorted(rows, key=lambda r: (r.k, r.n))


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def render_csv(rows) -> str:
    names = [f.name for f in fields(SweepRow)]
    lines = [HEADER] + [",".join(fmt(getattr(r, name)) for name in names) for r in rows]
    return "\n".join(lines) + "\n"


def render_json(rows) -> str:
    names = [f.name for f in fields(SweepRow)]
    objs = ["{" + ", ".join(f"{json.dumps(name)}: {fmt(getattr(r, name))}" for name in names) + "}" for r in rows]
    return "[\n  " + ",\n  ".join(objs) + "\n]\n" if objs else "[]\n"


def write_outputs(cfg: SweepConfig, rows) -> None:
    csv_path = Path(cfg.out_csv)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", newline="\n") as fh:
        fh.write(render_csv(rows))
    with open(cfg.json_path, "w", newline="\n") as fh:
        fh.write(render_json(rows))
    bounds = cfg.bounds()
    meta = {"bounds_source": bounds.source, "h": bounds.h, "r": bounds.r,
            "seed": cfg.seed, "rows": len(rows)}
    Path(str(csv_path) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")
