"""Forward reductions: k-SUM to vector form, node weights to edge weights,
edge weights away entirely, and the composed small-number pipeline.

The chain works digit by digit. A target sum over big numbers becomes a small
family of carry-free digit-vector sums (one per guessed carry tuple); a
node-weight clique target becomes per-carry edge weightings via the squaring
trick, nonnegative on every clique and zero exactly on hits; a guessed
per-slot-pair weight profile (alpha) then strips weights, leaving k-partite
unweighted k-Clique. Every stage preserves the OR of solvability and supports
witness lifting back to the source.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from itertools import product
from typing import Any, Iterable, Iterator

from .instances import (
    CliqueInstance,
    KSumInstance,
    MalformedWitnessError,
    ParameterError,
    ReducedCollection,
    ReducedItem,
    ResourceBudgetError,
    ValidationError,
    VectorSumInstance,
    WeightedGraph,
    instance_digest,
    verify_witness,
)

ALPHA_BUDGET = 200_000


def base_p_digits(x: int, p: int, d: int) -> tuple[int, ...]:
    """Base-p digits of x, least significant first, exactly d of them."""
    if p < 2:
        raise ParameterError(f"radix must be >= 2, got {p}")
    if d < 1:
        raise ParameterError(f"digit count must be >= 1, got {d}")
    if not 0 <= x < p**d:
        raise ValidationError(f"{x} not representable in {d} base-{p} digits")
    out = []
    for _ in range(d):
        x, r = divmod(x, p)
        out.append(r)
    return tuple(out)


def digits_to_int(digits: Iterable[int], p: int) -> int:
    total = 0
    for j, a in enumerate(digits):
        total += a * p**j
    return total


@dataclass(frozen=True)
class CarryContext:
    """All carry guesses for one target: gamma tuples and their digit targets.

    Digit j of a k-fold sum equals the target digit once the incoming and
    outgoing carries are fixed, so each gamma in [0,k]^(d-1) induces one
    d-vector target; summing k digit vectors to some feasible target is
    equivalent to the original integer equation.
    """

    t: int
    k: int
    p: int
    d: int
    gammas: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.gammas) != len(self.targets):
            raise ValidationError("carry tuples and targets must pair up")
        if len(self.gammas) != self.s:
            raise ValidationError(f"expected {self.s} carry tuples, got {len(self.gammas)}")
        for tg in self.targets:
            if digits_to_int(tg, self.p) != self.t:
                raise ValidationError(f"target {tg} does not recompose to {self.t}")

    @property
    def s(self) -> int:
        return (self.k + 1) ** (self.d - 1)

    def is_feasible(self, index: int) -> bool:
        """A digit target is reachable only with every entry in [0, k(p-1)]."""
        cap = self.k * (self.p - 1)
        return all(0 <= c <= cap for c in self.targets[index])

    def feasible_indices(self) -> list[int]:
        return [i for i in range(len(self.targets)) if self.is_feasible(i)]


def carry_targets(t: int, k: int, p: int, d: int) -> CarryContext:
    """Enumerate carry tuples in lexicographic order with their digit targets.

    With v the d-digit expansion of t (the top digit absorbing any overflow
    beyond p^d), carry tuple c yields target entries v[1]+c_1*p at the bottom,
    v[j]-c_{j-1}+c_j*p in the middle and v[d]-c_{d-1} at the top.
    """
    if p <= k:
        raise ParameterError(f"radix must exceed the arity, got p={p} <= k={k}")
    if not 0 <= t <= k * (p**d - 1):
        raise ParameterError(f"target {t} outside [0, k(p^d - 1)]")
    top, low = divmod(t, p ** (d - 1))
    v = base_p_digits(low, p, d - 1) + (top,) if d > 1 else (t,)
    gammas = []
    targets = []
    for gamma in product(range(k + 1), repeat=d - 1):
        tg = list(v)
        for j in range(d - 1):
            tg[j] += gamma[j] * p
            tg[j + 1] -= gamma[j]
        gammas.append(gamma)
        targets.append(tuple(tg))
    return CarryContext(t=t, k=k, p=p, d=d, gammas=tuple(gammas), targets=tuple(targets))


def map_f(x: int, t_gamma: tuple[int, ...], k: int, p: int, d: int) -> tuple[int, ...]:
    """k times the digit vector of x, minus the carry target."""
    if len(t_gamma) != d:
        raise ValidationError(f"carry target has {len(t_gamma)} entries, expected {d}")
    digits = base_p_digits(x, p, d)
    out = tuple(k * a - c for a, c in zip(digits, t_gamma))
    for entry in out:
        if abs(entry) > k * p:
            raise ValidationError(f"mapped entry {entry} outside [-kp, kp]")
    return out


def _achieved_bound(inst: KSumInstance) -> int:
    """Largest number present; negative numbers are rejected (shift first)."""
    if inst.numbers and min(inst.numbers) < 0:
        raise ParameterError("numbers must be nonnegative; shift the instance first")
    return max(inst.numbers, default=0)


def ksum_to_vectorsum(inst: KSumInstance, p: int, d: int) -> ReducedCollection:
    """One digit-vector instance per feasible carry target; skipped carries are
    recorded in the collection params. The source is solvable iff some emitted
    instance is; a target no k numbers can reach emits an empty collection."""
    bound = _achieved_bound(inst)
    if p**d < inst.k * bound + 1:
        raise ParameterError(f"p^d = {p**d} < k*M+1 = {inst.k * bound + 1}")
    if not 0 <= inst.target <= inst.k * bound:
        return ReducedCollection(
            reduction="ksum_to_vectorsum",
            source_digest=instance_digest(inst),
            params={"p": p, "d": d, "s": 0, "skipped": [], "range_pruned": True},
            items=(),
        )
    ctx = carry_targets(inst.target, inst.k, p, d)
    vectors = tuple(base_p_digits(x, p, d) for x in inst.numbers)
    items = []
    skipped = []
    for i in range(ctx.s):
        if not ctx.is_feasible(i):
            skipped.append({"gamma": list(ctx.gammas[i]), "target": list(ctx.targets[i])})
            continue
        out = VectorSumInstance(
            k=inst.k,
            dim=d,
            vectors=vectors,
            target=ctx.targets[i],
            entry_bounds=(0, p - 1),
        )
        items.append(ReducedItem(out, {"gamma": list(ctx.gammas[i]), "target": list(ctx.targets[i])}))
    return ReducedCollection(
        reduction="ksum_to_vectorsum",
        source_digest=instance_digest(inst),
        params={"p": p, "d": d, "s": ctx.s, "skipped": skipped},
        items=tuple(items),
    )


def squaring_edge_weight(u_vec: tuple[int, ...], v_vec: tuple[int, ...], k: int) -> int:
    """Per-coordinate u^2 + v^2 + 2(k-1)uv, summed; on any k vertices the
    pairwise total telescopes to (k-1) * sum of squared coordinate sums."""
    total = 0
    for a, b in zip(u_vec, v_vec):
        total += a * a + b * b + 2 * (k - 1) * a * b
    return total


def edge_weight_cap(k: int, d: int, p: int) -> int:
    """Declared magnitude cap 2k^3dp^2 on squaring-trick edge weights."""
    return 2 * k**3 * d * p**2


def nodeweight_to_edgeweight(
    g: WeightedGraph,
    t: int | None = None,
    p: int | None = None,
    d: int = 1,
    k: int | None = None,
) -> ReducedCollection:
    """Per feasible carry, reweight edges by the squaring trick on the mapped
    node-weight vectors. A node-weight-t k-clique in the source exists iff
    some output graph has a zero-edge-weight k-clique.

    Every output shares one declared weight bound (the largest magnitude
    produced across carries) so downstream alpha enumeration ranges agree.
    """
    if g.node_weights is None:
        raise ParameterError("node-weighted graph required")
    arity = g.k if k is None else k
    if arity < 2:
        raise ParameterError("arity must be >= 2: single vertices carry no edge weight")
    if arity != g.k:
        raise ParameterError(f"arity {arity} differs from the graph's k={g.k}")
    goal = g.target if t is None else t
    weights = g.node_weights
    bound = max(weights, default=0)
    if any(w < 0 for w in weights):
        raise ParameterError("node weights must be nonnegative; shift the instance first")
    radix = arity * bound + 1 if p is None else p
    if radix <= arity:
        radix = arity + 1
    if radix**d < arity * bound + 1:
        raise ParameterError(f"p^d = {radix**d} < k*M+1 = {arity * bound + 1}")
    if not 0 <= goal <= arity * bound:
        # no k node weights can reach the target: empty emission, OR preserved
        return ReducedCollection(
            reduction="nodeweight_to_edgeweight",
            source_digest=instance_digest(g),
            params={"t": str(goal), "p": radix, "d": d, "s": 0, "skipped": [], "range_pruned": True},
            items=(),
        )
    ctx = carry_targets(goal, arity, radix, d)
    cap = edge_weight_cap(arity, d, radix)
    per_carry: list[tuple[int, list[tuple[int, int, int]]]] = []
    achieved = 0
    skipped = []
    for i in range(ctx.s):
        if not ctx.is_feasible(i):
            skipped.append({"gamma": list(ctx.gammas[i]), "target": list(ctx.targets[i])})
            continue
        t_gamma = ctx.targets[i]
        fvec = [map_f(w, t_gamma, arity, radix, d) for w in weights]
        ew = []
        for u, v in g.edges:
            w_uv = squaring_edge_weight(fvec[u], fvec[v], arity)
            if abs(w_uv) > cap:
                raise ValidationError(f"edge weight {w_uv} exceeds the cap {cap}")
            achieved = max(achieved, abs(w_uv))
            ew.append((u, v, w_uv))
        per_carry.append((i, ew))
    items = []
    for i, ew in per_carry:
        out = WeightedGraph(
            n=g.n,
            edges=g.edges,
            k=arity,
            node_weights=None,
            edge_weights=tuple(ew),
            weight_bound=achieved,
            target=0,
        )
        items.append(
            ReducedItem(out, {"gamma": list(ctx.gammas[i]), "target": list(ctx.targets[i])})
        )
    return ReducedCollection(
        reduction="nodeweight_to_edgeweight",
        source_digest=instance_digest(g),
        params={"t": str(goal), "p": radix, "d": d, "s": ctx.s, "weight_cap": str(cap), "skipped": skipped},
        items=tuple(items),
    )


def slot_pairs(k: int) -> list[tuple[int, int]]:
    """Ordered slot pairs (i, j), 1 <= i < j <= k."""
    return [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]


def alpha_tuples_full(bound: int, k: int, budget: int = ALPHA_BUDGET) -> Iterator[tuple[int, ...]]:
    """All assignments of C(k,2) integers in [-bound, bound] summing to zero:
    the first C(k,2)-1 coordinates run lexicographically, the last is forced
    and emitted only when in range."""
    pairs = math.comb(k, 2)
    if pairs == 0:
        raise ParameterError("alpha enumeration needs k >= 2")
    free = pairs - 1
    if (2 * bound + 1) ** free > budget:
        raise ResourceBudgetError(
            f"alpha enumeration would need {(2 * bound + 1) ** free} tuples (budget {budget})"
        )
    for head in product(range(-bound, bound + 1), repeat=free):
        last = -sum(head)
        if -bound <= last <= bound:
            yield head + (last,)


def present_alpha_tuples(g: WeightedGraph, k: int, budget: int = ALPHA_BUDGET) -> Iterator[tuple[int, ...]]:
    """Zero-sum alpha tuples drawn only from weights the graph actually has.

    An alpha using an absent weight yields a slot pair with no edges and hence
    no k-clique, so pruning those preserves the OR over outputs.
    """
    if g.edge_weights is None:
        raise ParameterError("edge-weighted graph required")
    support = sorted({w for _, _, w in g.edge_weights})
    if not support:
        return
    free = math.comb(k, 2) - 1
    if len(support) ** free > budget:
        raise ResourceBudgetError(
            f"alpha enumeration would need {len(support) ** free} tuples (budget {budget})"
        )
    present = set(support)
    for head in product(support, repeat=free):
        last = -sum(head)
        if last in present:
            yield head + (last,)


def build_alpha_instance(g: WeightedGraph, k: int, alpha: tuple[int, ...]) -> CliqueInstance:
    """The k-partite graph for one alpha: slot-major vertex ids i*n+v for slot
    i+1, and an edge from (u, slot i) to (v, slot j) for each source edge
    u < v whose weight matches alpha at pair (i, j)."""
    pairs = slot_pairs(k)
    if len(alpha) != len(pairs):
        raise ValidationError(f"alpha needs {len(pairs)} entries, got {len(alpha)}")
    wmap = g.edge_weight_map()
    n = g.n
    edges = []
    for (u, v), w in wmap.items():
        for idx, (i, j) in enumerate(pairs):
            if alpha[idx] == w:
                edges.append(((i - 1) * n + u, (j - 1) * n + v))
    partition = tuple(i for i in range(1, k + 1) for _ in range(n))
    return CliqueInstance(n=k * n, edges=tuple(edges), k=k, partition=partition)


def edgeweight_to_unweighted(
    g: WeightedGraph,
    k: int | None = None,
    alpha_mode: str = "full",
    budget: int = ALPHA_BUDGET,
) -> ReducedCollection:
    """Strip edge weights by guessing the per-slot-pair weight profile.

    full mode enumerates every zero-sum alpha over [-M, M] with M the declared
    weight bound; present mode restricts coordinates to weights occurring in
    the graph, which prunes only k-clique-free outputs. The source has a
    zero-edge-weight k-clique iff some output has a k-clique.
    """
    if g.edge_weights is None:
        raise ParameterError("edge-weighted graph required")
    arity = g.k if k is None else k
    if arity != g.k:
        raise ParameterError(f"arity {arity} differs from the graph's k={g.k}")
    if arity < 2:
        raise ParameterError("alpha enumeration needs k >= 2")
    if alpha_mode == "full":
        alphas = alpha_tuples_full(g.weight_bound, arity, budget=budget)
    elif alpha_mode == "present":
        alphas = present_alpha_tuples(g, arity, budget=budget)
    else:
        raise ParameterError(f"unknown alpha mode {alpha_mode!r}")
    pairs = slot_pairs(arity)
    items = []
    for alpha in alphas:
        inst = build_alpha_instance(g, arity, alpha)
        prov = {"alpha": [[i, j, alpha[idx]] for idx, (i, j) in enumerate(pairs)]}
        items.append(ReducedItem(inst, prov))
    return ReducedCollection(
        reduction="edgeweight_to_unweighted",
        source_digest=instance_digest(g),
        params={"alpha_mode": alpha_mode, "weight_bound": str(g.weight_bound), "k": arity},
        items=tuple(items),
    )


def strip_slot_witness(n_source: int, witness: Iterable[int]) -> tuple[int, ...]:
    """Project a k-clique of an alpha graph back to source vertices."""
    lifted = sorted(v % n_source for v in witness)
    if len(set(lifted)) != len(lifted):
        raise ValidationError("alpha-graph witness repeats a source vertex")
    return tuple(lifted)


def merge_offsets(coll: ReducedCollection) -> tuple[int, ...]:
    """Vertex-id offset of each item inside the disjoint union."""
    offsets = []
    total = 0
    for item in coll.items:
        offsets.append(total)
        total += item.instance.n
    return tuple(offsets)


def merge_clique_instances(coll: ReducedCollection) -> CliqueInstance:
    """Disjoint union of unweighted instances; a k-clique cannot straddle
    components, so the union is solvable iff some item is."""
    insts = coll.instances()
    if not insts:
        return CliqueInstance(n=0, edges=(), k=2, partition=None)
    arities = {inst.k for inst in insts}
    if len(arities) != 1:
        raise ParameterError(f"cannot merge mixed arities {sorted(arities)}")
    k = arities.pop()
    offsets = merge_offsets(coll)
    edges = []
    partition: list[int] | None = []
    for off, inst in zip(offsets, insts):
        for u, v in inst.edges:
            edges.append((u + off, v + off))
        if partition is not None and inst.partition is not None:
            partition.extend(inst.partition)
        else:
            partition = None
    n = offsets[-1] + insts[-1].n
    return CliqueInstance(
        n=n,
        edges=tuple(edges),
        k=k,
        partition=tuple(partition) if partition is not None else None,
    )


def locate_in_merge(offsets: tuple[int, ...], sizes: tuple[int, ...], witness: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Map merged-graph vertices back to (item index, local vertices); the
    witness must stay inside one component."""
    verts = sorted(witness)
    if not verts or verts[0] < 0 or verts[-1] >= offsets[-1] + sizes[-1]:
        raise MalformedWitnessError(f"vertices {verts} outside the merged graph")
    idx = bisect.bisect_right(offsets, verts[0]) - 1
    lo = offsets[idx]
    hi = lo + sizes[idx]
    local = []
    for v in verts:
        if not lo <= v < hi:
            raise MalformedWitnessError("merged witness straddles components")
        local.append(v - lo)
    return idx, tuple(local)


def ksum_as_nodeweight_clique(inst: KSumInstance) -> WeightedGraph:
    """Complete graph on the input positions, node weight = number."""
    bound = _achieved_bound(inst)
    n = inst.n
    edges = tuple((u, v) for u in range(n) for v in range(u + 1, n))
    return WeightedGraph(
        n=n,
        edges=edges,
        k=inst.k,
        node_weights=inst.numbers,
        edge_weights=None,
        weight_bound=bound,
        target=inst.target,
    )


def pipeline_dimension(n: int) -> int:
    """ceil(log2 n / log2 log2 n), floored at 1; tiny n defaults to 1."""
    if n < 4:
        return 1
    return max(1, math.ceil(math.log2(n) / math.log2(math.log2(n))))


def pipeline_radix(n: int, k: int, bound: int, f_exp: int, d: int) -> int:
    """Smallest p at least ceil(k * 2^f * log2 n) with p^d >= kM+1 and p > k."""
    p = max(k + 1, math.ceil(k * 2**f_exp * math.log2(max(n, 2))))
    while p**d < k * bound + 1:
        p += 1
    return p


@dataclass(frozen=True)
class PipelineResult:
    """Merged unweighted instance plus the provenance needed to lift witnesses
    and to report instance accounting."""

    instance: CliqueInstance
    source: KSumInstance
    params: dict[str, Any]
    offsets: tuple[int, ...]
    sizes: tuple[int, ...]

    @property
    def g_nk(self) -> int:
        return len(self.offsets)


def smallksum_to_kclique(inst: KSumInstance, f_exp: int, alpha_mode: str = "present") -> PipelineResult:
    """Composed pipeline for numbers bounded by n^f_exp: encode the numbers as
    node weights on a complete graph, reduce to per-carry edge weightings,
    strip weights per alpha and merge everything into one unweighted instance.

    A target outside [0, k*max(numbers)] short-circuits to an empty (hence
    unsolvable) merged instance.
    """
    n, k = inst.n, inst.k
    if k < 2:
        raise ParameterError("pipeline requires arity k >= 2")
    bound = _achieved_bound(inst)
    if bound > max(n, 1) ** f_exp:
        raise ParameterError(
            f"numbers exceed n^{f_exp} = {max(n, 1) ** f_exp}; apply the modular "
            "weight reduction first"
        )
    d = pipeline_dimension(n)
    p = pipeline_radix(n, k, bound, f_exp, d)
    if not 0 <= inst.target <= k * bound or k > n:
        params = {"p": p, "d": d, "f_exp": f_exp, "alpha_mode": alpha_mode, "g_nk": 0, "range_pruned": True}
        empty = CliqueInstance(n=0, edges=(), k=k)
        return PipelineResult(instance=empty, source=inst, params=params, offsets=(), sizes=())
    nw = ksum_as_nodeweight_clique(inst)
    ew_coll = nodeweight_to_edgeweight(nw, t=inst.target, p=p, d=d)
    pieces = []
    for carry_item in ew_coll.items:
        alpha_coll = edgeweight_to_unweighted(carry_item.instance, alpha_mode=alpha_mode)
        for alpha_item in alpha_coll.items:
            prov = dict(carry_item.provenance)
            prov.update(alpha_item.provenance)
            pieces.append(ReducedItem(alpha_item.instance, prov))
    flat = ReducedCollection(
        reduction="smallksum_to_kclique",
        source_digest=instance_digest(inst),
        params={"p": p, "d": d, "f_exp": f_exp, "alpha_mode": alpha_mode},
        items=tuple(pieces),
    )
    merged = merge_clique_instances(flat) if pieces else CliqueInstance(n=0, edges=(), k=k)
    sizes = tuple(item.instance.n for item in pieces)
    params = {
        "p": p,
        "d": d,
        "s": ew_coll.params["s"],
        "f_exp": f_exp,
        "alpha_mode": alpha_mode,
        "g_nk": len(pieces),
    }
    return PipelineResult(instance=merged, source=inst, params=params, offsets=merge_offsets(flat), sizes=sizes)


def lift_clique_witness(
    source: Any,
    coll: ReducedCollection,
    item_index: int,
    witness: Iterable[int],
) -> tuple[int, ...]:
    """Lift a witness of one reduced item back to the source instance of the
    given stage, verifying both ends."""
    item = coll.items[item_index]
    verts = tuple(sorted(witness))
    if not verify_witness(item.instance, verts):
        raise ValidationError("witness does not verify in the reduced instance")
    name = coll.reduction
    if name == "ksum_to_vectorsum":
        lifted = verts
    elif name == "nodeweight_to_edgeweight":
        lifted = verts
    elif name == "edgeweight_to_unweighted":
        lifted = strip_slot_witness(source.n, verts)
    else:
        raise ParameterError(f"no lift rule for reduction {name!r}")
    if not verify_witness(source, lifted):
        raise ValidationError("lifted witness does not verify in the source")
    return lifted


def lift_pipeline_witness(result: PipelineResult, witness: Iterable[int]) -> tuple[int, ...]:
    """Lift a merged-graph k-clique to source indices summing to the target."""
    if not result.offsets:
        raise ValidationError("empty pipeline output has no witnesses")
    _, local = locate_in_merge(result.offsets, result.sizes, witness)
    lifted = strip_slot_witness(result.source.n, local)
    if not verify_witness(result.source, lifted):
        raise ValidationError("lifted witness does not verify in the source")
    return lifted
