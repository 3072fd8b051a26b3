"""Shared independent oracles and fixture builders.

Everything here is deliberately naive: plain enumeration, no reuse of the
package's own search or algebra paths. Frozen expected values in the test
modules were produced by these oracles.
"""

from itertools import combinations, product

from ksumclique import CliqueInstance, KSumInstance, VectorSumInstance, WeightedGraph


def oracle_ksum(numbers, k, target):
    """Lex-smallest index tuple whose values sum to target, else None."""
    for combo in combinations(range(len(numbers)), k):
        if sum(numbers[i] for i in combo) == target:
            return combo
    return None


def oracle_vectorsum(vectors, k, target):
    dim = len(target)
    for combo in combinations(range(len(vectors)), k):
        if all(sum(vectors[i][j] for i in combo) == target[j] for j in range(dim)):
            return combo
    return None


def oracle_kclique(n, edges, k):
    edge_set = {frozenset(e) for e in edges}
    for combo in combinations(range(n), k):
        if all(frozenset(p) in edge_set for p in combinations(combo, 2)):
            return combo
    return None


def oracle_nw_kclique(n, edges, k, weights, target):
    edge_set = {frozenset(e) for e in edges}
    for combo in combinations(range(n), k):
        if not all(frozenset(p) in edge_set for p in combinations(combo, 2)):
            continue
        if sum(weights[v] for v in combo) == target:
            return combo
    return None


def oracle_ew_kclique(n, edges, k, edge_weights, target):
    """Edge-weighted clique with total edge weight == target."""
    wmap = {frozenset(e): w for e, w in zip(edges, edge_weights)}
    for combo in combinations(range(n), k):
        keys = [frozenset(p) for p in combinations(combo, 2)]
        if all(key in wmap for key in keys):
            if sum(wmap[key] for key in keys) == target:
                return combo
    return None


def oracle_span(q, vectors, target):
    """Exhaustive coefficient sweep, no elimination."""
    n = len(target)
    for coeffs in product(range(q), repeat=len(vectors)):
        if all(
            sum(c * v[j] for c, v in zip(coeffs, vectors)) % q == target[j] % q
            for j in range(n)
        ):
            return coeffs
    return None


def oracle_lindep(q, vectors, k, target):
    """Does some k-subset admit coefficients combining to target mod q?"""
    for combo in combinations(range(len(vectors)), k):
        if oracle_span(q, [vectors[i] for i in combo], target) is not None:
            return combo
    return None


def complete_edges(n):
    return tuple(combinations(range(n), 2))


def cycle_edges(n):
    return tuple((i, (i + 1) % n) for i in range(n))


def make_ksum(numbers, k, target, lo=None, hi=None):
    nums = tuple(int(x) for x in numbers)
    lo = min(nums, default=0) if lo is None else lo
    hi = max(nums, default=0) if hi is None else hi
    return KSumInstance(k=k, numbers=nums, target=target, bounds=(min(lo, 0), max(hi, 0)))


def make_clique(n, edges, k):
    return CliqueInstance(n=n, edges=tuple(edges), k=k)


def make_nw_graph(n, edges, k, weights, target):
    return WeightedGraph(
        n=n,
        edges=tuple(edges),
        k=k,
        node_weights=tuple(weights),
        edge_weights=None,
        weight_bound=max((abs(w) for w in weights), default=0),
        target=target,
    )


def make_ew_graph(n, edges, k, weights, target=0):
    """weights runs parallel to edges; stored as (u, v, w) triples."""
    triples = tuple((u, v, w) for (u, v), w in zip(edges, weights, strict=True))
    return WeightedGraph(
        n=n,
        edges=tuple(edges),
        k=k,
        node_weights=None,
        edge_weights=triples,
        weight_bound=max((abs(w) for w in weights), default=0),
        target=target,
    )


def make_vectorsum(vectors, k, target, lo=None, hi=None):
    vecs = tuple(tuple(int(x) for x in v) for v in vectors)
    flat = [x for v in vecs for x in v] or [0]
    lo = min(flat) if lo is None else lo
    hi = max(flat) if hi is None else hi
    return VectorSumInstance(
        k=k,
        dim=len(vecs[0]) if vecs else len(target),
        vectors=vecs,
        target=tuple(target),
        entry_bounds=(min(lo, 0), max(hi, 0)),
    )
