"""Exact solvers and oracles for every instance type in the toolkit.

All solvers return a SolverReport with a verifying witness when solvable and
deterministic work counters. Brute-force solvers return the lexicographically
smallest witness; the other exact solvers return a deterministic one.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Iterable

from .instances import (
    CliqueInstance,
    KSumInstance,
    ParameterError,
    ResourceBudgetError,
    ValidationError,
    VectorSumInstance,
    WeightedGraph,
    verify_witness,
)

DEFAULT_BUDGET = 20_000_000


@dataclass
class SolverReport:
    """Outcome of one solver run: answer, witness and work counters."""

    solvable: bool
    witness: tuple[int, ...] | None
    stats: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.solvable != (self.witness is not None):
            raise ValidationError("witness must be present exactly when solvable")

    def to_json_dict(self, include_timing: bool = False) -> dict[str, Any]:
        stats = dict(self.stats)
        if not include_timing:
            stats.pop("wall_time_s", None)
        return {
            "solvable": self.solvable,
            "witness": list(self.witness) if self.witness is not None else None,
            "stats": stats,
        }


def _guard_combinations(n: int, k: int, budget: int) -> None:
    if k <= n and math.comb(n, k) > budget:
        raise ResourceBudgetError(f"C({n},{k}) exceeds the work budget {budget}")


def solve_ksum_bruteforce(inst: KSumInstance, budget: int = DEFAULT_BUDGET) -> SolverReport:
    """Enumerate index k-subsets in lexicographic order; first hit wins."""
    start = time.perf_counter()
    n, k, t = inst.n, inst.k, inst.target
    candidates = 0
    witness = None
    if k <= n:
        _guard_combinations(n, k, budget)
        numbers = inst.numbers
        for combo in combinations(range(n), k):
            candidates += 1
            s = 0
            for i in combo:
                s += numbers[i]
            if s == t:
                witness = combo
                break
    return SolverReport(
        solvable=witness is not None,
        witness=witness,
        stats={"candidates": candidates, "wall_time_s": time.perf_counter() - start},
    )


def solve_ksum_mim(inst: KSumInstance, budget: int = DEFAULT_BUDGET) -> SolverReport:
    """Meet in the middle: the k chosen indices split into their first ceil(k/2)
    and last floor(k/2) positions, so left halves can be joined to right halves
    whenever max(left) < min(right). Exact, deterministic, same answers as
    brute force.
    """
    start = time.perf_counter()
    n, k, t = inst.n, inst.k, inst.target
    numbers = inst.numbers
    a = (k + 1) // 2
    b = k // 2
    if k > n:
        return SolverReport(False, None, {"table_size": 0, "probes": 0, "wall_time_s": time.perf_counter() - start})
    _guard_combinations(n, a, budget)
    # per sum keep the left subset minimizing (max index, subset) so any
    # compatible right half can be detected by one lookup
    table: dict[int, tuple[int, ...]] = {}
    for combo in combinations(range(n), a):
        s = 0
        for i in combo:
            s += numbers[i]
        prev = table.get(s)
        if prev is None or (prev[-1], prev) > (combo[-1], combo):
            table[s] = combo
    probes = 0
    witness = None
    if b == 0:
        left = table.get(t)
        probes = 1
        if left is not None:
            witness = left
    else:
        for combo in combinations(range(n), b):
            probes += 1
            s = 0
            for i in combo:
                s += numbers[i]
            left = table.get(t - s)
            if left is not None and left[-1] < combo[0]:
                witness = left + combo
                break
    return SolverReport(
        solvable=witness is not None,
        witness=witness,
        stats={"table_size": len(table), "probes": probes, "wall_time_s": time.perf_counter() - start},
    )


def solve_vectorsum_bruteforce(inst: VectorSumInstance, budget: int = DEFAULT_BUDGET) -> SolverReport:
    """Lexicographic subset scan; a target outside the k-fold entry range
    short-circuits to unsolvable with zero candidates examined."""
    start = time.perf_counter()
    n, k, dim = inst.n, inst.k, inst.dim
    candidates = 0
    witness = None
    if not inst.trivially_unsolvable and k <= n:
        _guard_combinations(n, k, budget)
        vectors = inst.vectors
        target = inst.target
        for combo in combinations(range(n), k):
            candidates += 1
            total = [0] * dim
            for i in combo:
                v = vectors[i]
                for j in range(dim):
                    total[j] += v[j]
            if tuple(total) == target:
                witness = combo
                break
    return SolverReport(
        solvable=witness is not None,
        witness=witness,
        stats={
            "candidates": candidates,
            "range_pruned": inst.trivially_unsolvable,
            "wall_time_s": time.perf_counter() - start,
        },
    )


def _clique_backtrack(
    n: int,
    adj: list[set[int]],
    k: int,
    accept: Callable[[tuple[int, ...]], bool],
    counter: list[int],
) -> tuple[int, ...] | None:
    """First k-clique in lexicographic order whose vertex set passes `accept`."""

    def extend(partial: list[int], candidates: list[int]) -> tuple[int, ...] | None:
        if len(partial) == k:
            counter[0] += 1
            chosen = tuple(partial)
            return chosen if accept(chosen) else None
        need = k - len(partial)
        for idx, v in enumerate(candidates):
            if len(candidates) - idx < need:
                return None
            counter[0] += 1
            partial.append(v)
            nxt = [w for w in candidates[idx + 1 :] if w in adj[v]]
            found = extend(partial, nxt)
            partial.pop()
            if found is not None:
                return found
        return None

    return extend([], list(range(n)))


def _guard_clique_search(n: int, k: int, adj: list[set[int]], budget: int) -> None:
    """Reject searches whose cheapest work bound exceeds the budget: C(n,k)
    for dense graphs, n * (maxdeg)^(k-1) for sparse ones."""
    if k > n or k == 0:
        return
    maxdeg = max((len(a) for a in adj), default=0)
    sparse = n * max(1, maxdeg) ** (k - 1)
    if min(math.comb(n, k), sparse) > budget:
        raise ResourceBudgetError(f"k-clique search on n={n}, k={k} exceeds the work budget {budget}")


def iter_kcliques(inst: CliqueInstance | WeightedGraph, budget: int = DEFAULT_BUDGET) -> Iterable[tuple[int, ...]]:
    """Every k-clique (as a sorted vertex tuple) in lexicographic order."""
    n, k = inst.n, inst.k
    if k > n:
        return
    adj = inst.adjacency()
    _guard_clique_search(n, k, adj, budget)

    def extend(partial: list[int], candidates: list[int]) -> Iterable[tuple[int, ...]]:
        if len(partial) == k:
            yield tuple(partial)
            return
        need = k - len(partial)
        for idx, v in enumerate(candidates):
            if len(candidates) - idx < need:
                return
            partial.append(v)
            yield from extend(partial, [w for w in candidates[idx + 1 :] if w in adj[v]])
            partial.pop()

    yield from extend([], list(range(n)))


def solve_kclique_bruteforce(
    inst: CliqueInstance | WeightedGraph,
    target: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SolverReport:
    """Exact k-clique search honoring a node- or edge-weight target when present.

    Backtracking over sorted vertex ids returns the lexicographically smallest
    witness; the guard bounds the work by min(C(n,k), n * maxdeg^(k-1)).
    """
    start = time.perf_counter()
    n, k = inst.n, inst.k
    witness = None
    counter = [0]
    if k <= n:
        adj = inst.adjacency()
        _guard_clique_search(n, k, adj, budget)
        if isinstance(inst, WeightedGraph):
            goal = inst.target if target is None else target
            if inst.node_weights is not None:
                weights = inst.node_weights

                def accept(chosen: tuple[int, ...]) -> bool:
                    return sum(weights[v] for v in chosen) == goal

            else:
                wmap = inst.edge_weight_map()

                def accept(chosen: tuple[int, ...]) -> bool:
                    total = 0
                    for a in range(len(chosen)):
                        for b in range(a + 1, len(chosen)):
                            total += wmap[(chosen[a], chosen[b])]
                    return total == goal

        else:
            if target is not None:
                raise ParameterError("unweighted instances take no weight target")

            def accept(chosen: tuple[int, ...]) -> bool:
                return True

        witness = _clique_backtrack(n, adj, k, accept, counter)
    return SolverReport(
        solvable=witness is not None,
        witness=witness,
        stats={"nodes_expanded": counter[0], "wall_time_s": time.perf_counter() - start},
    )


# ---------------------------------------------------------------------------
# triangle detection
# ---------------------------------------------------------------------------

def _adjacency_masks(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    masks = [0] * n
    for u, v in edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _mask_bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _naive_mm_triangle(n: int, masks: list[int], counter: list[int]) -> tuple[int, int, int] | None:
    """Boolean-square scan: common neighborhoods of adjacent pairs, ascending."""
    for u in range(n):
        above_u = masks[u] >> (u + 1)
        for dv in _mask_bits(above_u):
            v = u + 1 + dv
            counter[0] += 1
            common = masks[u] & masks[v]
            common &= ~((1 << (v + 1)) - 1)
            if common:
                w = (common & -common).bit_length() - 1
                return (u, v, w)
    return None


def detect_triangle(
    inst: CliqueInstance,
    backend: str = "degree-split",
    delta: int | None = None,
) -> SolverReport:
    """Exact triangle detection with two cross-checkable backends.

    naive-mm intersects the boolean square of the adjacency structure with the
    adjacency itself. degree-split enumerates neighbor pairs of vertices of
    degree < delta (default ceil(sqrt(m))) and runs naive-mm on the remaining
    high-degree core; the low phase checks at most m*delta pairs and the core
    has at most 2m/delta vertices.
    """
    start = time.perf_counter()
    n, m = inst.n, inst.m
    masks = _adjacency_masks(n, inst.edges)
    witness: tuple[int, int, int] | None = None
    stats: dict[str, Any] = {"backend": backend}
    if backend == "naive-mm":
        counter = [0]
        witness = _naive_mm_triangle(n, masks, counter)
        stats["pairs_checked"] = counter[0]
    elif backend == "degree-split":
        d = delta if delta is not None else max(1, math.isqrt(m) + (0 if math.isqrt(m) ** 2 == m else 1))
        if d < 1:
            raise ParameterError(f"degree threshold must be >= 1, got {d}")
        degrees = [masks[v].bit_count() for v in range(n)]
        low_pairs = 0
        for v in range(n):
            if degrees[v] >= d or witness is not None:
                continue
            neigh = list(_mask_bits(masks[v]))
            for i in range(len(neigh)):
                a = neigh[i]
                for j in range(i + 1, len(neigh)):
                    b = neigh[j]
                    low_pairs += 1
                    if masks[a] >> b & 1:
                        witness = tuple(sorted((v, a, b)))
                        break
                if witness is not None:
                    break
            if witness is not None:
                break
        core = [v for v in range(n) if degrees[v] >= d]
        stats["delta"] = d
        stats["low_pairs"] = low_pairs
        stats["core_size"] = len(core)
        assert low_pairs <= m * d
        assert d * len(core) <= 2 * m
        if witness is None and core:
            index = {v: i for i, v in enumerate(core)}
            core_masks = [0] * len(core)
            for i, v in enumerate(core):
                rest = masks[v]
                acc = 0
                for w in _mask_bits(rest):
                    j = index.get(w)
                    if j is not None:
                        acc |= 1 << j
                core_masks[i] = acc
            counter = [0]
            found = _naive_mm_triangle(len(core), core_masks, counter)
            stats["core_pairs_checked"] = counter[0]
            if found is not None:
                witness = tuple(sorted(core[i] for i in found))
    else:
        raise ParameterError(f"unknown triangle backend {backend!r}")
    stats["wall_time_s"] = time.perf_counter() - start
    return SolverReport(solvable=witness is not None, witness=witness, stats=stats)


# ---------------------------------------------------------------------------
# node-weight clique via the squaring reduction
# ---------------------------------------------------------------------------

def _nw_pipeline(
    graph: WeightedGraph,
    target: int | None,
    solve_unweighted: Callable[[CliqueInstance], SolverReport],
    d: int = 1,
) -> SolverReport:
    """Shared engine: shift weights, square-trick edge weights per carry, strip
    weights per occupied alpha profile, then call the unweighted backend."""
    from . import reduce_sum_to_clique as fwd

    start = time.perf_counter()
    if graph.node_weights is None:
        raise ParameterError("node-weighted graph required")
    k = graph.k
    n = graph.n
    t = graph.target if target is None else target
    weights = graph.node_weights
    shift = graph.weight_bound if any(w < 0 for w in weights) else 0
    shifted = tuple(w + shift for w in weights)
    t_shifted = t + k * shift
    bound = max(shifted, default=0)
    stats: dict[str, Any] = {"shift": shift, "instances_generated": 0, "alphas": 0}
    if not 0 <= t_shifted <= k * bound or k > n:
        stats["range_pruned"] = True
        stats["wall_time_s"] = time.perf_counter() - start
        return SolverReport(False, None, stats)
    p = bound * k + 1
    while p <= k:
        p += 1
    if d > 1:
        p = max(k + 1, _int_root_ceil(k * bound + 1, d))
        while p ** d < k * bound + 1:
            p += 1
    shifted_graph = WeightedGraph(
        n=n,
        edges=graph.edges,
        k=k,
        node_weights=shifted,
        edge_weights=None,
        weight_bound=bound,
        target=t_shifted,
    )
    coll = fwd.nodeweight_to_edgeweight(shifted_graph, t=t_shifted, p=p, d=d)
    stats["p"] = p
    stats["d"] = d
    stats["carries"] = len(coll.items)
    witness = None
    for item in coll.items:
        ew_graph = item.instance
        for alpha in fwd.present_alpha_tuples(ew_graph, k):
            stats["alphas"] += 1
            g_alpha = fwd.build_alpha_instance(ew_graph, k, alpha)
            assert g_alpha.m <= k * k * ew_graph.m
            stats["instances_generated"] += 1
            report = solve_unweighted(g_alpha)
            if report.solvable:
                assert report.witness is not None
                lifted = tuple(sorted(v % n for v in report.witness))
                if sum(weights[v] for v in lifted) != t:  # pragma: no cover - soundness guard
                    raise ValidationError("pipeline produced a non-verifying witness")
                witness = lifted
                break
        if witness is not None:
            break
    stats["wall_time_s"] = time.perf_counter() - start
    return SolverReport(solvable=witness is not None, witness=witness, stats=stats)


def _int_root_ceil(value: int, d: int) -> int:
    if value <= 1:
        return 1
    root = round(value ** (1.0 / d))
    while root**d >= value:
        root -= 1
    while (root + 1) ** d < value:
        root += 1
    return root + 1


def solve_nw_triangle(
    graph: WeightedGraph,
    target: int | None = None,
    backend: str = "degree-split",
    d: int = 1,
) -> SolverReport:
    """Exact node-weight triangle via the edge-weight and weight-removal chain,
    running detect_triangle on every produced unweighted instance."""
    if graph.k != 3:
        raise ParameterError(f"triangle pipeline requires k=3, got k={graph.k}")

    def backend_solve(g_alpha: CliqueInstance) -> SolverReport:
        return detect_triangle(g_alpha, backend=backend)

    report = _nw_pipeline(graph, target, backend_solve, d=d)
    report.stats["backend"] = backend
    return report


def solve_nw_kclique(
    graph: WeightedGraph,
    target: int | None = None,
    d: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> SolverReport:
    """Exact node-weight k-clique; k = 2 degenerates to an edge scan."""
    k = graph.k
    if graph.node_weights is None:
        raise ParameterError("node-weighted graph required")
    if k < 2:
        raise ParameterError(f"clique pipeline requires k >= 2, got k={k}")
    t = graph.target if target is None else target
    if k == 2:
        start = time.perf_counter()
        weights = graph.node_weights
        witness = None
        scanned = 0
        for u, v in graph.edges:
            scanned += 1
            if weights[u] + weights[v] == t:
                witness = (u, v)
                break
        return SolverReport(
            solvable=witness is not None,
            witness=witness,
            stats={"edges_scanned": scanned, "wall_time_s": time.perf_counter() - start},
        )

    def backend_solve(g_alpha: CliqueInstance) -> SolverReport:
        return solve_kclique_bruteforce(g_alpha, budget=budget)

    return _nw_pipeline(graph, t, backend_solve, d=d)


def solve_instance(inst: Any, solver: str | None = None, **kwargs: Any) -> SolverReport:
    """Dispatch an instance to a named solver; default picks the brute oracle."""
    if isinstance(inst, KSumInstance):
        if solver in (None, "ksum-brute"):
            return solve_ksum_bruteforce(inst, **kwargs)
        if solver == "ksum-mim":
            return solve_ksum_mim(inst, **kwargs)
    if isinstance(inst, VectorSumInstance) and solver in (None, "vectorsum-brute"):
        return solve_vectorsum_bruteforce(inst, **kwargs)
    if isinstance(inst, CliqueInstance):
        if solver in (None, "clique-brute"):
            return solve_kclique_bruteforce(inst, **kwargs)
        if solver == "triangle-naive-mm":
            return detect_triangle(inst, backend="naive-mm")
        if solver == "triangle-degree-split":
            return detect_triangle(inst, backend="degree-split", **kwargs)
    if isinstance(inst, WeightedGraph):
        if solver in (None, "clique-brute"):
            return solve_kclique_bruteforce(inst, **kwargs)
        if solver == "nw-triangle":
            return solve_nw_triangle(inst, **kwargs)
        if solver == "nw-clique":
            return solve_nw_kclique(inst, **kwargs)
    raise ParameterError(f"no solver {solver!r} for {type(inst).__name__}")
