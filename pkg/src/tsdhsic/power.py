"""Monte Carlo rejection rates over parameter grids.

Each grid cell generates ``repeats`` datasets and tests each one; the
rejection fraction ``mu`` is reported with the normal-approximation half
width ``1.96 * sqrt(mu (1 - mu) / R)``.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import SpecError, TsdhsicError
from .kernel import KernelConfig
from .resampling import TestConfig, joint_independence_test
from .synthgen import GeneratorSpec, generate

SPEC_KEYS = {"T", "N", "dep_coef", "ar_coef"}
TEST_KEYS = {"num_null", "alpha", "fix_first", "method"}
Z95 = 1.96


def ci_half_width(power: float, repeats: int) -> float:
    return Z95 * math.sqrt(power * (1.0 - power) / repeats)


@dataclass(frozen=True)
class PowerCell:
    params: dict[str, Any]
    power: float
    ci_half_width: float
    repeats: int
    rejections: int
    error: str | None = None


@dataclass
class PowerCurve:
    cells: list[PowerCell]
    repeats: int
    master_seed: int
    kind: str = ""
    common_seeds: bool = False

    @property
    def grid(self) -> list[dict[str, Any]]:
        return [c.params for c in self.cells]

    @property
    def power(self) -> np.ndarray:
        return np.array([c.power for c in self.cells])

    @property
    def ci(self) -> np.ndarray:
        return np.array([c.ci_half_width for c in self.cells])

    def lookup(self, **params) -> PowerCell:
        for cell in self.cells:
            if all(cell.params.get(k) == v for k, v in params.items()):
                return cell
        raise KeyError(params)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "repeats": self.repeats,
            "master_seed": self.master_seed,
            "common_seeds": self.common_seeds,
            "cells": [
                {
                    "params": c.params,
                    "power": None if math.isnan(c.power) else c.power,
                    "ci_half_width": None if math.isnan(c.ci_half_width) else c.ci_half_width,
                    "repeats": c.repeats,
                    "rejections": c.rejections,
                    "error": c.error,
                }
                for c in self.cells
            ],
        }

    def write_csv(self, fh) -> None:
        keys: list[str] = []
        for c in self.cells:
            keys.extend(k for k in c.params if k not in keys)
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(keys + ["power", "ci_half_width", "repeats", "rejections", "error"])
        for c in self.cells:
            writer.writerow([_cell_text(c.params.get(k, "")) for k in keys]
                            + [_cell_text(c.power), _cell_text(c.ci_half_width), c.repeats, c.rejections,
                               c.error or ""])


def _cell_text(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def expand_grid(axes: dict[str, Sequence[Any]]) -> list[dict[str, Any]]:
    """Cartesian product of named axes, last axis varying fastest."""
    if not axes:
        return [{}]
    names = list(axes)
    return [dict(zip(names, values)) for values in itertools.product(*(axes[k] for k in names))]


def run_seeds(master_seed: int, cell: int, repeat: int, common: bool) -> tuple[int, int]:
    """(data seed, test seed) for one repeat of one cell."""
    key = (repeat,) if common else (cell, repeat)
    state = np.random.SeedSequence(master_seed, spawn_key=key).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def _apply(template: GeneratorSpec, cfg: TestConfig, params: dict[str, Any]) -> tuple[GeneratorSpec, TestConfig]:
    spec_kw = {k: v for k, v in params.items() if k in SPEC_KEYS}
    test_kw = {k: v for k, v in params.items() if k in TEST_KEYS}
    extra = {k: v for k, v in params.items() if k not in SPEC_KEYS | TEST_KEYS}
    spec = replace(template, extra={**template.extra, **extra}, **spec_kw)
    return spec, replace(cfg, **test_kw)


def power_sweep(template: GeneratorSpec, grid: Iterable[dict[str, Any]], cfg: TestConfig = TestConfig(),
                repeats: int = 200, master_seed: int = 0, kcfg: KernelConfig = KernelConfig(),
                variables: Sequence[str] | None = None, threads: int = 1,
                common_seeds: bool = False) -> PowerCurve:
    """Rejection rate at each grid point over ``repeats`` seeded datasets.

    Grid keys may name generator fields (``T``, ``N``, ``dep_coef``,
    ``ar_coef``), test fields (``num_null``, ``alpha``, ``fix_first``,
    ``method``) or kind-specific extras. ``variables`` restricts the test to
    a subset of the generated panel. With ``common_seeds`` every cell reuses
    the same datasets (seeds depend on the repeat index only), so cells
    differ only in their parameters.

    A cell whose generation or test raises is reported with ``error`` set
    and ``power = nan``; other cells still run.
    """
    grid = list(grid)
    if repeats < 1:
        raise SpecError("repeats must be >= 1")
    if not grid:
        raise SpecError("grid is empty")

    jobs = []
    for ci, params in enumerate(grid):
        try:
            spec, test_cfg = _apply(template, cfg, params)
        except TsdhsicError as exc:
            spec, test_cfg = exc, None
        for r in range(repeats):
            jobs.append((ci, r, spec, test_cfg))

    def run(job):
        ci, r, spec, test_cfg = job
        if isinstance(spec, TsdhsicError):
            return f"{type(spec).__name__}: {spec}"
        data_seed, test_seed = run_seeds(master_seed, ci, r, common_seeds)
        try:
            panel = generate(spec.with_seed(data_seed))
            if variables is not None:
                panel = panel.select(variables)
            result = joint_independence_test(panel, kcfg, replace(test_cfg, seed=test_seed))
        except TsdhsicError as exc:
            return f"{type(exc).__name__}: {exc}"
        return result.reject

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    cells = []
    for ci, params in enumerate(grid):
        mine = outcomes[ci * repeats:(ci + 1) * repeats]
        errors = [o for o in mine if isinstance(o, str)]
        if errors:
            cells.append(PowerCell(dict(params), math.nan, math.nan, repeats, 0, errors[0]))
            continue
        k = int(sum(mine))
        mu = k / repeats
        cells.append(PowerCell(dict(params), mu, ci_half_width(mu, repeats), repeats, k))
    return PowerCurve(cells, repeats, master_seed, template.kind, common_seeds)


def null_sample_robustness(template: GeneratorSpec, cfg: TestConfig, null_counts: Sequence[int],
                           repeats: int = 200, master_seed: int = 0, kcfg: KernelConfig = KernelConfig(),
                           variables: Sequence[str] | None = None, threads: int = 1) -> PowerCurve:
    """Power as a function of the number of null samples, on shared datasets.

    Because null sample ``s`` is drawn from its own seeded stream, the null
    for a smaller count is a prefix of the null for a larger one.
    """
    return power_sweep(template, [{"num_null": int(p)} for p in null_counts], cfg, repeats, master_seed,
                       kcfg, variables, threads, common_seeds=True)
