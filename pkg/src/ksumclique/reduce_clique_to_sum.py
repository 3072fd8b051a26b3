"""Backward reductions: unweighted k-Clique down to k'-Vector-SUM and on to
plain k'-SUM, with witness decoding back to vertex sets.

Vertices and edges become vectors over k'' = k^2+k+1 coordinates: one
coordinate per clique slot, one per slot pair, and a final count coordinate.
Vertex codes are drawn from a k-sum-free set, so a slot coordinate can only
reach its target when the k-1 edge vectors meeting that slot all carry the
code of the vertex standing there. Packing the coordinates into one radix
turns the vector instance into an ordinary k'-SUM instance carry-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .instances import (
    CliqueInstance,
    KSumInstance,
    MalformedWitnessError,
    ParameterError,
    ValidationError,
    VectorSumInstance,
    verify_witness,
)
from .sumfree import behrend_sumfree, greedy_sumfree_elements

GREEDY_CODE_LIMIT = 64


@dataclass(frozen=True)
class CliqueEncoding:
    """Per-vertex sum-free codes plus the derived slot threshold and dimension.

    threshold = Q*(k-1)+1 with Q the largest code, one more than k-1 codes can
    ever sum to, so a slot coordinate hitting it pins down the slot's vertex.
    """

    k: int
    codes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "codes", tuple(int(c) for c in self.codes))
        if self.k < 2:
            raise ParameterError(f"arity must be >= 2, got {self.k}")
        if len(set(self.codes)) != len(self.codes):
            raise ValidationError("vertex codes must be injective")
        if any(c < 0 for c in self.codes):
            raise ValidationError("vertex codes must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.codes)

    @property
    def q_max(self) -> int:
        return max(self.codes, default=0)

    @property
    def threshold(self) -> int:
        return self.q_max * (self.k - 1) + 1

    @property
    def dim(self) -> int:
        return self.k * self.k + self.k + 1


def encode_vertices(n: int, k: int) -> CliqueEncoding:
    """Deterministic code source: brute-verified greedy set at desk scale
    (smaller max element), digit-norm construction beyond."""
    if n <= GREEDY_CODE_LIMIT and k <= 4:
        codes = greedy_sumfree_elements(n, k)
    else:
        codes = behrend_sumfree(n, k).elements
    return CliqueEncoding(k=k, codes=tuple(codes[:n]))


def slot_pairs(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]


def _pair_coord(i: int, j: int, k: int) -> int:
    # 1-indexed coordinate k*i+j of the paper's layout, shifted to 0-indexed
    return k * i + j - 1


def vector_count(n: int, m: int, k: int) -> int:
    return k * n + 2 * math.comb(k, 2) * m


def origin_of_index(g: CliqueInstance, idx: int) -> tuple:
    """Decode a vector index into its origin under the fixed emission order:
    ("vertex", v, slot) or ("edge", first, second, i, j)."""
    k, n = g.k, g.n
    if idx < 0 or idx >= vector_count(n, g.m, k):
        raise ValidationError(f"vector index {idx} out of range")
    if idx < k * n:
        return ("vertex", idx // k, idx % k + 1)
    rest = idx - k * n
    pairs = slot_pairs(k)
    block = 2 * len(pairs)
    e, pr = divmod(rest, block)
    pair_idx, orient = divmod(pr, 2)
    i, j = pairs[pair_idx]
    u, v = g.edges[e]
    first, second = (u, v) if orient == 0 else (v, u)
    return ("edge", first, second, i, j)


def clique_to_vectorsum(g: CliqueInstance, encoding: CliqueEncoding | None = None) -> VectorSumInstance:
    """Arity k+C(k,2) vector instance solvable iff g has a k-clique.

    Emission order: vertex vectors grouped by vertex with slots inner, then
    per edge, per slot pair, both orientations. Both orientations are needed:
    a single fixed orientation can wire a clique's slot assignment into a
    cycle with no consistent placement.
    """
    k, n = g.k, g.n
    if k < 2:
        raise ParameterError(f"arity must be >= 2, got {k}")
    enc = encoding if encoding is not None else encode_vertices(n, k)
    if enc.k != k or enc.n < n:
        raise ParameterError("encoding does not cover the graph")
    dim = enc.dim
    t_thresh = enc.threshold
    pairs = slot_pairs(k)
    vectors: list[tuple[int, ...]] = []
    for v in range(n):
        for slot in range(1, k + 1):
            vec = [0] * dim
            vec[slot - 1] = t_thresh - (k - 1) * enc.codes[v]
            vec[dim - 1] = 1
            vectors.append(tuple(vec))
    for u, v in g.edges:
        for i, j in pairs:
            for first, second in ((u, v), (v, u)):
                vec = [0] * dim
                vec[i - 1] += enc.codes[first]
                vec[j - 1] += enc.codes[second]
                vec[_pair_coord(i, j, k)] += 1
                vectors.append(tuple(vec))
    target = [0] * dim
    for slot in range(1, k + 1):
        target[slot - 1] = t_thresh
    for i, j in pairs:
        target[_pair_coord(i, j, k)] = 1
    target[dim - 1] = k
    arity = k + len(pairs)
    return VectorSumInstance(
        k=arity,
        dim=dim,
        vectors=tuple(vectors),
        target=tuple(target),
        entry_bounds=(0, max(t_thresh, k)),
    )


def pack_uniform(vec: Iterable[int], p: int) -> int:
    total = 0
    scale = 1
    for c in vec:
        if not 0 <= c < p:
            raise ValidationError(f"coordinate {c} outside the radix [0,{p})")
        total += c * scale
        scale *= p
    return total


def pack_mixed(vec: Iterable[int], radices: Iterable[int]) -> int:
    total = 0
    scale = 1
    for c, r in zip(vec, radices, strict=True):
        if not 0 <= c < r:
            raise ValidationError(f"coordinate {c} outside its radix [0,{r})")
        total += c * scale
        scale *= r
    return total


def vectorsum_to_ksum(inst: VectorSumInstance) -> KSumInstance:
    """Pack coordinates in radix kM+1; per-coordinate sums of k entries stay
    below the radix, so solvability and witnesses transfer exactly.

    A target entry outside [0, kM] cannot be hit by any k entries in [0, M];
    such instances pack to the sentinel target -1 (numbers are nonnegative,
    so the output is unsolvable too)."""
    lo, hi = inst.entry_bounds
    if lo < 0:
        raise ParameterError("entries must be nonnegative; shift the instance first")
    p = inst.k * hi + 1
    numbers = tuple(pack_uniform(v, p) for v in inst.vectors)
    if inst.trivially_unsolvable:
        target = -1
    else:
        target = pack_uniform(inst.target, p)
    return KSumInstance(
        k=inst.k,
        numbers=numbers,
        target=target,
        bounds=(0, pack_uniform([hi] * inst.dim, p)),
    )


def mixed_radices(k: int, t_thresh: int) -> tuple[int, ...]:
    """Per-coordinate radices: k'T+1 on the k slot coordinates, k'k+1 on the
    k^2+1 remaining coordinates, whose entries never exceed k."""
    arity = k + math.comb(k, 2)
    return (arity * t_thresh + 1,) * k + (arity * k + 1,) * (k * k + 1)


def kclique_to_ksum(
    g: CliqueInstance,
    radix_mode: str = "uniform",
    encoding: CliqueEncoding | None = None,
) -> KSumInstance:
    """k-Clique to plain k'-SUM, k' = k + C(k,2), via the vector encoding.

    uniform packs every coordinate in radix k'T+1; mixed packs the small-entry
    coordinates in the tighter radix k'k+1, shrinking the numbers.
    """
    enc = encoding if encoding is not None else encode_vertices(g.n, g.k)
    vs = clique_to_vectorsum(g, encoding=enc)
    if radix_mode == "uniform":
        return vectorsum_to_ksum(vs)
    if radix_mode != "mixed":
        raise ParameterError(f"unknown radix mode {radix_mode!r}")
    radices = mixed_radices(g.k, enc.threshold)
    numbers = tuple(pack_mixed(v, radices) for v in vs.vectors)
    target = pack_mixed(vs.target, radices)
    top = pack_mixed([enc.threshold] * g.k + [g.k] * (g.k * g.k + 1), radices)
    return KSumInstance(k=vs.k, numbers=numbers, target=target, bounds=(0, top))


def lift_vectorsum_witness_to_clique(
    g: CliqueInstance,
    witness: Iterable[int],
    encoding: CliqueEncoding | None = None,
) -> tuple[int, ...]:
    """Decode a verified vector-instance witness into the k clique vertices,
    re-asserting the structural steps: exactly one vertex vector per slot,
    exactly one edge vector per slot pair, and matching codes at every slot."""
    enc = encoding if encoding is not None else encode_vertices(g.n, g.k)
    vs = clique_to_vectorsum(g, encoding=enc)
    idxs = tuple(sorted(witness))
    if not verify_witness(vs, idxs):
        raise MalformedWitnessError("witness does not verify in the vector instance")
    k = g.k
    slot_vertex: dict[int, int] = {}
    pair_edges: dict[tuple[int, int], tuple[int, int, int, int]] = {}
    for idx in idxs:
        origin = origin_of_index(g, idx)
        if origin[0] == "vertex":
            _, v, slot = origin
            if slot in slot_vertex:
                raise MalformedWitnessError(f"two vertex vectors claim slot {slot}")
            slot_vertex[slot] = v
        else:
            _, first, second, i, j = origin
            if (i, j) in pair_edges:
                raise MalformedWitnessError(f"two edge vectors claim slot pair ({i},{j})")
            pair_edges[(i, j)] = (first, second, i, j)
    if len(slot_vertex) != k or len(pair_edges) != len(slot_pairs(k)):
        raise MalformedWitnessError("witness is not k vertex vectors plus one edge vector per pair")
    for (i, j), (first, second, _, _) in pair_edges.items():
        if enc.codes[first] != enc.codes[slot_vertex[i]] or enc.codes[second] != enc.codes[slot_vertex[j]]:
            raise MalformedWitnessError(f"edge codes at pair ({i},{j}) do not match the slot vertices")
    verts = tuple(sorted(slot_vertex.values()))
    if not verify_witness(g, verts):
        raise MalformedWitnessError("decoded vertices are not a k-clique")
    return verts


def lift_ksum_witness_to_clique(
    g: CliqueInstance,
    witness: Iterable[int],
    radix_mode: str = "uniform",
    encoding: CliqueEncoding | None = None,
) -> tuple[int, ...]:
    """Decode a verified k'-SUM witness back to the clique vertices: packing
    keeps index sets, so the vector-level decoder applies unchanged."""
    enc = encoding if encoding is not None else encode_vertices(g.n, g.k)
    ks = kclique_to_ksum(g, radix_mode=radix_mode, encoding=enc)
    idxs = tuple(sorted(witness))
    if not verify_witness(ks, idxs):
        raise MalformedWitnessError("witness does not verify in the packed instance")
    return lift_vectorsum_witness_to_clique(g, idxs, encoding=enc)
