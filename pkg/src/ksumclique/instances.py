"""Core data model: problem instances, witnesses and the JSON interchange format.

Every integer is arbitrary precision and crosses the file boundary as a decimal
string; vertex ids, arities and dimensions stay native. Instances are immutable
values, so reductions always build new objects and witness checks never mutate.
Serialization is canonical: parse followed by serialize is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence


class ValidationError(ValueError):
    """An instance violates one of its structural invariants."""


class ParseError(ValueError):
    """Malformed instance text; carries a 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class MalformedWitnessError(ValueError):
    """A witness has the wrong shape for the instance it is checked against."""


class ParameterError(ValueError):
    """Reduction or solver parameters violate a precondition."""


class ResourceBudgetError(RuntimeError):
    """An operation would exceed its configured work or memory budget."""


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{what} must be an integer, got bool")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise ValidationError(f"{what} is not a decimal integer: {value!r}") from None
    raise ValidationError(f"{what} must be an integer or decimal string, got {type(value).__name__}")


def _as_small_int(value: Any, what: str) -> int:
    out = _as_int(value, what)
    return out


def normalize_edges(n: int, edges: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    """Sort endpoints and the edge list; reject loops, duplicates and bad ids."""
    seen: set[tuple[int, int]] = set()
    for raw in edges:
        u, v = int(raw[0]), int(raw[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValidationError(f"self-loop at vertex {u}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise ValidationError(f"duplicate edge {e}")
        seen.add(e)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class KSumInstance:
    """k-SUM: does some set of k distinct indices have numbers summing to target?

    ``bounds`` is the declared inclusive range of the numbers and serializes
    under the key ``range``. Fewer than k numbers is allowed and simply makes
    the instance unsolvable.
    """

    k: int
    numbers: tuple[int, ...]
    target: int
    bounds: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "numbers", tuple(int(x) for x in self.numbers))
        object.__setattr__(self, "bounds", (int(self.bounds[0]), int(self.bounds[1])))
        if self.k < 1:
            raise ValidationError(f"arity k must be >= 1, got {self.k}")
        lo, hi = self.bounds
        if lo > hi:
            raise ValidationError(f"empty declared range [{lo},{hi}]")
        for x in self.numbers:
            if not lo <= x <= hi:
                raise ValidationError(f"number {x} outside declared range [{lo},{hi}]")

    @property
    def n(self) -> int:
        return len(self.numbers)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "type": "ksum",
            "k": self.k,
            "numbers": [str(x) for x in self.numbers],
            "target": str(self.target),
            "range": [str(self.bounds[0]), str(self.bounds[1])],
        }


@dataclass(frozen=True)
class VectorSumInstance:
    """k-Vector-SUM over integer vectors with a shared per-entry range.

    A target entry outside the k-fold Minkowski range of ``entry_bounds``
    makes the instance trivially unsolvable; it is flagged, never dropped.
    """

    k: int
    dim: int
    vectors: tuple[tuple[int, ...], ...]
    target: tuple[int, ...]
    entry_bounds: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vectors", tuple(tuple(int(c) for c in v) for v in self.vectors))
        object.__setattr__(self, "target", tuple(int(c) for c in self.target))
        object.__setattr__(self, "entry_bounds", (int(self.entry_bounds[0]), int(self.entry_bounds[1])))
        if self.k < 1:
            raise ValidationError(f"arity k must be >= 1, got {self.k}")
        if self.dim < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dim}")
        lo, hi = self.entry_bounds
        if lo > hi:
            raise ValidationError(f"empty entry range [{lo},{hi}]")
        if len(self.target) != self.dim:
            raise ValidationError("target length differs from dim")
        for v in self.vectors:
            if len(v) != self.dim:
                raise ValidationError("vector length differs from dim")
            for c in v:
                if not lo <= c <= hi:
                    raise ValidationError(f"entry {c} outside declared range [{lo},{hi}]")

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def trivially_unsolvable(self) -> bool:
        lo, hi = self.entry_bounds
        return any(not (self.k * lo <= t <= self.k * hi) for t in self.target)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "type": "vectorsum",
            "k": self.k,
            "dim": self.dim,
            "vectors": [[str(c) for c in v] for v in self.vectors],
            "target": [str(c) for c in self.target],
            "entry_range": [str(self.entry_bounds[0]), str(self.entry_bounds[1])],
        }


@dataclass(frozen=True)
class CliqueInstance:
    """Unweighted k-Clique, optionally k-partite with 1-based slot labels."""

    n: int
    edges: tuple[tuple[int, int], ...]
    k: int
    partition: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValidationError(f"vertex count must be >= 0, got {self.n}")
        if self.k < 1:
            raise ValidationError(f"arity k must be >= 1, got {self.k}")
        object.__setattr__(self, "edges", normalize_edges(self.n, self.edges))
        if self.partition is not None:
            part = tuple(int(s) for s in self.partition)
            object.__setattr__(self, "partition", part)
            if len(part) != self.n:
                raise ValidationError("partition length differs from n")
            for s in part:
                if not 1 <= s <= self.k:
                    raise ValidationError(f"slot {s} outside [1,{self.k}]")
            for u, v in self.edges:
                if part[u] == part[v]:
                    raise ValidationError(f"edge ({u},{v}) joins two slot-{part[u]} vertices")

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "type": "graph",
            "k": self.k,
            "n": self.n,
            "edges": [[u, v] for u, v in self.edges],
            "node_weights": None,
            "edge_weights": None,
            "weight_bound": None,
            "target": None,
            "partition": list(self.partition) if self.partition is not None else None,
        }


@dataclass(frozen=True)
class WeightedGraph:
    """A graph with exactly one weight kind plus the clique arity and target.

    Node weights answer Exact Node-Weight k-Clique (clique node weights sum to
    target); edge weights answer Exact Edge-Weight k-Clique (clique edge
    weights sum to target, normally zero). ``weight_bound`` is the declared M
    with every weight within [-M, M].
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    k: int
    node_weights: tuple[int, ...] | None
    edge_weights: tuple[tuple[int, int, int], ...] | None
    weight_bound: int
    target: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValidationError(f"vertex count must be >= 0, got {self.n}")
        if self.k < 1:
            raise ValidationError(f"arity k must be >= 1, got {self.k}")
        object.__setattr__(self, "edges", normalize_edges(self.n, self.edges))
        if self.weight_bound < 0:
            raise ValidationError(f"weight bound must be >= 0, got {self.weight_bound}")
        if (self.node_weights is None) == (self.edge_weights is None):
            raise ValidationError("exactly one of node_weights/edge_weights must be present")
        m = self.weight_bound
        if self.node_weights is not None:
            w = tuple(int(x) for x in self.node_weights)
            object.__setattr__(self, "node_weights", w)
            if len(w) != self.n:
                raise ValidationError("node weight list length differs from n")
            for x in w:
                if abs(x) > m:
                    raise ValidationError(f"node weight {x} exceeds declared bound {m}")
        else:
            assert self.edge_weights is not None
            ew = tuple(sorted(((u, v, int(w)) if u < v else (v, u, int(w))) for u, v, w in self.edge_weights))
            object.__setattr__(self, "edge_weights", ew)
            keys = [(u, v) for u, v, _ in ew]
            if keys != list(self.edges):
                raise ValidationError("edge weights must cover exactly the edge set")
            for _, _, x in ew:
                if abs(x) > m:
                    raise ValidationError(f"edge weight {x} exceeds declared bound {m}")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_node_weighted(self) -> bool:
        return self.node_weights is not None

    def edge_weight_map(self) -> dict[tuple[int, int], int]:
        if self.edge_weights is None:
            raise ValidationError("graph is not edge-weighted")
        return {(u, v): w for u, v, w in self.edge_weights}

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "type": "graph",
            "k": self.k,
            "n": self.n,
            "edges": [[u, v] for u, v in self.edges],
            "node_weights": [str(x) for x in self.node_weights] if self.node_weights is not None else None,
            "edge_weights": [[u, v, str(w)] for u, v, w in self.edge_weights]
            if self.edge_weights is not None
            else None,
            "weight_bound": str(self.weight_bound),
            "target": str(self.target),
            "partition": None,
        }


Instance = Any  # any of the to_json_dict-bearing instance types


@dataclass(frozen=True)
class ReducedItem:
    instance: Instance
    provenance: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ReducedCollection:
    """Ordered output of a reduction plus the metadata needed to lift witnesses."""

    reduction: str
    source_digest: str
    params: dict[str, Any]
    items: tuple[ReducedItem, ...]

    def instances(self) -> list[Instance]:
        return [it.instance for it in self.items]


def witness_tuple(inst: Instance, witness: Iterable[int]) -> tuple[int, ...]:
    """Validate witness shape (cardinality k, distinct, in range) and sort it."""
    ws = [int(x) for x in witness]
    if len(set(ws)) != len(ws):
        raise MalformedWitnessError(f"witness has repeated elements: {sorted(ws)}")
    k = inst.k
    if len(ws) != k:
        raise MalformedWitnessError(f"witness has {len(ws)} elements, expected k={k}")
    if isinstance(inst, (CliqueInstance, WeightedGraph)):
        limit = inst.n
        what = "vertex"
    else:
        limit = inst.r if hasattr(inst, "r") else inst.n
        what = "index"
    for x in ws:
        if not 0 <= x < limit:
            raise MalformedWitnessError(f"{what} {x} out of range [0,{limit})")
    return tuple(sorted(ws))


def verify_witness(inst: Instance, witness: Iterable[int]) -> bool:
    """Check a witness against the instance's defining predicate.

    Shape violations (wrong cardinality, repeats, out-of-range ids) raise
    MalformedWitnessError; a well-formed but non-satisfying witness returns
    False.
    """
    ws = witness_tuple(inst, witness)
    if isinstance(inst, KSumInstance):
        return sum(inst.numbers[i] for i in ws) == inst.target
    if isinstance(inst, VectorSumInstance):
        dim = inst.dim
        total = [0] * dim
        for i in ws:
            vec = inst.vectors[i]
            for j in range(dim):
                total[j] += vec[j]
        return tuple(total) == inst.target
    if isinstance(inst, CliqueInstance):
        edge_set = set(inst.edges)
        return all((ws[a], ws[b]) in edge_set for a in range(len(ws)) for b in range(a + 1, len(ws)))
    if isinstance(inst, WeightedGraph):
        edge_set = set(inst.edges)
        if not all((ws[a], ws[b]) in edge_set for a in range(len(ws)) for b in range(a + 1, len(ws))):
            return False
        if inst.node_weights is not None:
            return sum(inst.node_weights[v] for v in ws) == inst.target
        wmap = inst.edge_weight_map()
        total = sum(wmap[(ws[a], ws[b])] for a in range(len(ws)) for b in range(a + 1, len(ws)))
        return total == inst.target
    from . import fieldapps  # local import to avoid a cycle

    if isinstance(inst, fieldapps.TargetSumInstance):
        return sum(inst.elements[i] for i in ws) % inst.q == inst.target
    if isinstance(inst, fieldapps.LinDepInstance):
        return fieldapps.span_contains(inst.q, [inst.vectors[i] for i in ws], inst.target)
    raise ValidationError(f"cannot verify witness for {type(inst).__name__}")


def normalize_zero_target(inst: KSumInstance) -> KSumInstance:
    """Map numbers x to k*x - t so the target becomes 0; witness sets are unchanged."""
    k, t = inst.k, inst.target
    lo, hi = inst.bounds
    return KSumInstance(
        k=k,
        numbers=tuple(k * x - t for x in inst.numbers),
        target=0,
        bounds=(k * lo - t, k * hi - t),
    )


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def _dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def serialize_instance(inst: Instance) -> bytes:
    """Canonical single-line JSON encoding of any instance type."""
    return _dumps(inst.to_json_dict()).encode("utf-8")


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(serialize_instance(inst)).hexdigest()


def _parse_ksum(obj: dict[str, Any]) -> KSumInstance:
    lo, hi = obj["range"]
    return KSumInstance(
        k=_as_small_int(obj["k"], "k"),
        numbers=tuple(_as_int(x, "number") for x in obj["numbers"]),
        target=_as_int(obj["target"], "target"),
        bounds=(_as_int(lo, "range low"), _as_int(hi, "range high")),
    )


def _parse_vectorsum(obj: dict[str, Any]) -> VectorSumInstance:
    lo, hi = obj["entry_range"]
    return VectorSumInstance(
        k=_as_small_int(obj["k"], "k"),
        dim=_as_small_int(obj["dim"], "dim"),
        vectors=tuple(tuple(_as_int(c, "entry") for c in v) for v in obj["vectors"]),
        target=tuple(_as_int(c, "target entry") for c in obj["target"]),
        entry_bounds=(_as_int(lo, "entry range low"), _as_int(hi, "entry range high")),
    )


def _parse_graph(obj: dict[str, Any]) -> CliqueInstance | WeightedGraph:
    n = _as_small_int(obj["n"], "n")
    k = _as_small_int(obj["k"], "k")
    edges = [(int(e[0]), int(e[1])) for e in obj["edges"]]
    node_w = obj.get("node_weights")
    edge_w = obj.get("edge_weights")
    if node_w is None and edge_w is None:
        part = obj.get("partition")
        return CliqueInstance(
            n=n,
            edges=tuple(edges),
            k=k,
            partition=tuple(int(s) for s in part) if part is not None else None,
        )
    if obj.get("partition") is not None:
        raise ValidationError("weighted graphs do not carry a partition")
    if node_w is not None:
        weights = tuple(_as_int(x, "node weight") for x in node_w)
        ew = None
    else:
        weights = None
        ew = tuple((int(u), int(v), _as_int(w, "edge weight")) for u, v, w in edge_w)
    bound_raw = obj.get("weight_bound")
    if bound_raw is not None:
        bound = _as_int(bound_raw, "weight_bound")
    elif weights is not None:
        bound = max((abs(x) for x in weights), default=0)
    else:
        bound = max((abs(w) for _, _, w in ew), default=0)
    return WeightedGraph(
        n=n,
        edges=tuple(edges),
        k=k,
        node_weights=weights,
        edge_weights=ew,
        weight_bound=bound,
        target=_as_int(obj["target"], "target"),
    )


def _parsers() -> dict[str, Callable[[dict[str, Any]], Instance]]:
    from . import fieldapps, sumfree  # local import to avoid a cycle

    return {
        "ksum": _parse_ksum,
        "vectorsum": _parse_vectorsum,
        "graph": _parse_graph,
        "sumfree": sumfree.parse_sumfree_dict,
        "targetsum": fieldapps.parse_targetsum_dict,
        "lindep": fieldapps.parse_lindep_dict,
    }


def parse_instance_dict(obj: dict[str, Any]) -> Instance:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValidationError("instance object must be a JSON object with a 'type' field")
    typ = obj["type"]
    parser = _parsers().get(typ)
    if parser is None:
        raise ValidationError(f"unknown instance type {typ!r}")
    try:
        return parser(obj)
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r} in {typ} instance") from None


def parse_instance(data: bytes | str) -> Instance:
    """Parse one canonical JSON instance; report line/column on malformed text."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return parse_instance_dict(obj)


def serialize_collection(coll: ReducedCollection) -> bytes:
    """JSON-lines encoding: a meta line, then one instance+provenance line each."""
    lines = [
        _dumps({"meta": {"reduction": coll.reduction, "source_digest": coll.source_digest, "params": coll.params}})
    ]
    for item in coll.items:
        obj = item.instance.to_json_dict()
        obj["provenance"] = item.provenance
        lines.append(_dumps(obj))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_collection(data: bytes | str) -> ReducedCollection:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = [ln for ln in data.split("\n") if ln.strip()]
    if not lines:
        raise ParseError("empty collection")
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=1, column=exc.colno) from None
    meta = head.get("meta")
    if meta is None:
        raise ValidationError("first collection line must carry a 'meta' object")
    items = []
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            obj = json.loads(ln)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=lineno, column=exc.colno) from None
        prov = obj.pop("provenance", {})
        items.append(ReducedItem(instance=parse_instance_dict(obj), provenance=prov))
    return ReducedCollection(
        reduction=meta["reduction"],
        source_digest=meta["source_digest"],
        params=meta.get("params", {}),
        items=tuple(items),
    )
