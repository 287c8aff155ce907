"""Parameter sweep over locking instances ``(d, L)``."""
from __future__ import annotations

import csv
import io as _io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace

from .bounds import merit_figures
from .field import prime_power
from .infomeasure import OptimizerConfig, icc_locking, icc_locking_upper_bound, is_certified, unlocked_icc_analytic
from .io import dumps, fmt, round12
from .states import LockingInstance

CSV_HEADER = ["d", "L", "ic_lower", "ic_upper", "certified", "ic_after", "r1", "r2", "c", "restarts", "seed", "wall_ms"]


@dataclass(frozen=True)
class SweepRow:
    d: int
    L: int
    ic_lower: float
    ic_upper: float
    certified: bool
    ic_after: float
    r1: float
    r2: float
    c: float
    restarts: int
    seed: int
    wall_ms: int

    def __post_init__(self):
        for f in ("ic_lower", "ic_upper", "ic_after", "r1", "r2", "c"):
            object.__setattr__(self, f, round12(getattr(self, f)))

    def csv_cells(self) -> list[str]:
        return [fmt(getattr(self, name)) for name in CSV_HEADER]

    @classmethod
    def from_cells(cls, cells: dict) -> "SweepRow":
        kw = {}
        for f in fields(cls):
            raw = cells[f.name]
            if f.type in ("int", int):
                kw[f.name] = int(raw)
            elif f.type in ("bool", bool):
                kw[f.name] = raw in ("true", "True", True)
            else:
                kw[f.name] = float(raw)
        return cls(**kw)


def sweep_row(d: int, L: int, cfg: OptimizerConfig, timing: bool = True) -> SweepRow:
    """Optimize one locking instance and collect its bounds and merit figures.

    ``r1``, ``r2`` and ``c`` use the optimizer's lower bound as the value of ``I_c``.
    """
    t0 = time.perf_counter()
    inst = LockingInstance(d, L)
    res = icc_locking(inst, cfg)
    upper, kind = icc_locking_upper_bound(inst, cfg, hint=res)
    after = unlocked_icc_analytic(inst)
    merit = merit_figures(res.value, after, inst.key_bits)
    wall = int(round((time.perf_counter() - t0) * 1000)) if timing else 0
    return SweepRow(
        d=d,
        L=L,
        ic_lower=res.value,
        ic_upper=upper,
        certified=is_certified(kind),
        ic_after=after,
        r1=merit.r1,
        r2=merit.r2,
        c=res.value / math.log2(d) - 1.0 / L,
        restarts=cfg.restarts,
        seed=cfg.seed,
        wall_ms=wall,
    )


def sweep_grid(dims, L_min: int = 2, L_max: int | None = None) -> list[tuple[int, int]]:
    """Sorted ``(d, L)`` pairs; ``L_max`` defaults to ``d + 1`` and is clipped to it."""
    grid = []
    for d in sorted(set(dims)):
        if prime_power(d) is None:
            raise ValueError(f"{d} is not a prime power")
        hi = d + 1 if L_max is None else min(L_max, d + 1)
        grid.extend((d, L) for L in range(max(L_min, 2), hi + 1))
    return grid


def run_sweep(dims, cfg: OptimizerConfig, L_min: int = 2, L_max: int | None = None,
              threads: int = 1, timing: bool = True) -> list[SweepRow]:
    grid = sweep_grid(dims, L_min, L_max)
    inner = replace(cfg, threads=1)
    work = lambda dl: sweep_row(dl[0], dl[1], inner, timing)  # noqa: E731
    if threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, grid))
    else:
        rows = [work(dl) for dl in grid]
    return sorted(rows, key=lambda r: (r.d, r.L))


def rows_to_csv(rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_cells())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(_io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected sweep header {reader.fieldnames}")
    return [SweepRow.from_cells(r) for r in reader]


def rows_to_json(rows) -> str:
    return dumps([asdict(r) for r in rows]) + "\n"


def rows_from_json(text: str) -> list[SweepRow]:
    return [SweepRow(**r) for r in json.loads(text)]
