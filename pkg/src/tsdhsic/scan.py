"""Order-by-order joint independence scan reporting minimal dependent subsets.

Subsets are tested in increasing size. A subset is skipped once any of its
proper subsets has been rejected, so the rejected subsets (hyperedges) are
minimal: none contains another.

No multiple-testing correction is applied unless ``bonferroni`` is set, in
which case alpha at each order is divided by the number of subsets tested at
that order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadOrder
from .estimator import panel_grams
from .kernel import KernelConfig
from .panel import TimeSeriesPanel
from .resampling import TestConfig, test_grams

CAUTION = (
    "caution: a rejected joint-independence test does not by itself establish a "
    "dependence; hyperedges are candidates, not proofs."
)


@dataclass(frozen=True)
class Hyperedge:
    vars: tuple[str, ...]
    order: int
    p_value: float


@dataclass(frozen=True)
class SubsetRecord:
    vars: tuple[str, ...]
    order: int
    p_value: float
    statistic: float
    threshold: float
    rejected: bool
    seed: int
    alpha: float


@dataclass(frozen=True)
class SkippedSubset:
    vars: tuple[str, ...]
    order: int
    blocked_by: tuple[str, ...]


@dataclass
class DependenceHypergraph:
    nodes: tuple[str, ...]
    edges: list[Hyperedge] = field(default_factory=list)
    tested: list[SubsetRecord] = field(default_factory=list)
    skipped: list[SkippedSubset] = field(default_factory=list)
    method: str = ""
    bandwidths: tuple[float, ...] | None = None

    def edge_sets(self) -> list[frozenset[str]]:
        return [frozenset(e.vars) for e in self.edges]

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [{"vars": list(e.vars), "order": e.order, "p_value": e.p_value} for e in self.edges],
            "tested": [
                {
                    "vars": list(t.vars),
                    "order": t.order,
                    "p_value": t.p_value,
                    "statistic": t.statistic,
                    "threshold": t.threshold,
                    "rejected": t.rejected,
                    "seed": t.seed,
                    "alpha": t.alpha,
                }
                for t in self.tested
            ],
            "skipped": [
                {"vars": list(s.vars), "order": s.order, "blocked_by": list(s.blocked_by)} for s in self.skipped
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> DependenceHypergraph:
        return cls(
            nodes=tuple(data["nodes"]),
            edges=[Hyperedge(tuple(e["vars"]), e["order"], e["p_value"]) for e in data["edges"]],
            tested=[
                SubsetRecord(tuple(t["vars"]), t["order"], t["p_value"], t["statistic"], t["threshold"],
                             t["rejected"], t["seed"], t["alpha"])
                for t in data["tested"]
            ],
            skipped=[SkippedSubset(tuple(s["vars"]), s["order"], tuple(s["blocked_by"]))
                     for s in data.get("skipped", [])],
        )

    def edge_list(self) -> str:
        """One hyperedge per line, variables comma-separated."""
        return "".join(",".join(e.vars) + "\n" for e in self.edges)


def subset_seed(master: int, order: int, rank: int) -> int:
    """Seed for the ``rank``-th subset (lexicographic) of size ``order``."""
    return int(np.random.SeedSequence(master, spawn_key=(order, rank)).generate_state(2, np.uint64)[0])


def scan_higher_order(panel: TimeSeriesPanel, kcfg: KernelConfig = KernelConfig(),
                      cfg: TestConfig = TestConfig(), max_order: int | None = None,
                      bonferroni: bool = False) -> DependenceHypergraph:
    """Test every subset of size 2..max_order, pruning supersets of rejections.

    Gram matrices (and bandwidths) are computed once per variable and shared
    by all subsets.
    """
    panel.require_variables()
    d = panel.d
    max_order = d if max_order is None else int(max_order)
    if not 2 <= max_order <= d:
        raise BadOrder(f"max_order must lie in [2, {d}], got {max_order}")
    method = cfg.resolve_method(panel)
    grams = panel_grams(panel, kcfg, single=(method == "shift"))
    graph = DependenceHypergraph(panel.names, method=method, bandwidths=grams.bandwidths)
    rejected: list[frozenset[int]] = []

    for order in range(2, max_order + 1):
        candidates = list(itertools.combinations(range(d), order))
        pending = []
        for rank, combo in enumerate(candidates):
            members = frozenset(combo)
            blocker = next((r for r in rejected if r < members), None)
            if blocker is not None:
                graph.skipped.append(SkippedSubset(
                    tuple(panel.names[i] for i in combo), order,
                    tuple(panel.names[i] for i in sorted(blocker))))
            else:
                pending.append((rank, combo))
        alpha = cfg.alpha / len(pending) if bonferroni and pending else cfg.alpha
        new_rejections = []
        for rank, combo in pending:
            seed = subset_seed(cfg.seed, order, rank)
            sub_cfg = replace(cfg, seed=seed, alpha=alpha)
            result = test_grams(grams.subset(combo), method, sub_cfg)
            names = tuple(panel.names[i] for i in combo)
            graph.tested.append(SubsetRecord(names, order, result.p_value, result.statistic,
                                             result.threshold, result.reject, seed, alpha))
            if result.reject:
                graph.edges.append(Hyperedge(names, order, result.p_value))
                new_rejections.append(frozenset(combo))
        rejected.extend(new_rejections)
    return graph


def expected_test_count(d: int, max_order: int) -> int:
    return sum(math.comb(d, m) for m in range(2, max_order + 1))
