"""Randomized weight reduction: huge k-SUM numbers shrink to residues mod a
random prime.

Taking everything mod p keeps every true witness (completeness is
unconditional: a sum hitting t still hits t mod p, up to one of k possible
integer offsets i*p). A false witness needs p to divide a specific nonzero
difference, which a random prime from a wide enough range rarely does, so
soundness holds with high probability and improves with the confidence
parameter.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .instances import (
    KSumInstance,
    ParameterError,
    ReducedCollection,
    ReducedItem,
    ResourceBudgetError,
    instance_digest,
)

PRIME_DRAW_BUDGET = 1_000_000

# deterministic Miller-Rabin witness set, exact below 3.317e24
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(x: int, rng: random.Random | None = None) -> bool:
    """Miller-Rabin primality: deterministic witnesses below the published
    threshold, 64 random rounds above."""
    if x < 2:
        return False
    for q in _SMALL_PRIMES:
        if x % q == 0:
            return x == q
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if x < _DETERMINISTIC_LIMIT:
        bases = _SMALL_PRIMES
    else:
        rng = rng or random.Random(0x5EED)
        bases = tuple(rng.randrange(2, x - 1) for _ in range(64))
    for a in bases:
        a %= x
        if a < 2:
            continue
        y = pow(a, d, x)
        if y == 1 or y == x - 1:
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def random_prime_in(lo: int, hi: int, rng: random.Random) -> int:
    """Rejection-sample integers in [lo, hi] until one certifies prime."""
    if lo < 2 or hi < lo:
        raise ParameterError(f"invalid prime range [{lo},{hi}]")
    for _ in range(PRIME_DRAW_BUDGET):
        x = rng.randint(lo, hi)
        if is_prime(x, rng):
            return x
    raise ResourceBudgetError(
        f"no prime found in [{lo},{hi}] within {PRIME_DRAW_BUDGET} draws"
    )


@dataclass(frozen=True)
class PrimeReductionParams:
    """Draw record: confidence knob, the sampled prime, its range and the seed."""

    confidence: int
    prime: int
    bound: int
    seed: int

    def __post_init__(self) -> None:
        if self.confidence < 1:
            raise ParameterError(f"confidence must be >= 1, got {self.confidence}")
        if not 2 <= self.prime <= self.bound:
            raise ParameterError(f"prime {self.prime} outside [2,{self.bound}]")
        if not is_prime(self.prime):
            raise ParameterError(f"{self.prime} is not prime")


def prime_range_bound(n: int, k: int, big_m: int, confidence: int) -> int:
    """Upper end of the prime range: confidence * n^k * ceil(log2 n) *
    ceil(log2 kM), floored at 2 so tiny instances stay drawable."""
    log_n = max(1, math.ceil(math.log2(max(n, 2))))
    log_km = max(1, math.ceil(math.log2(max(k * big_m, 2))))
    return max(2, confidence * n**k * log_n * log_km)


def ksum_mod_reduce(inst: KSumInstance, confidence: int, seed: int) -> ReducedCollection:
    """Map numbers to residues mod a random prime p and emit k instances with
    integer targets (t mod p) + i*p, i in [0, k-1], covering every value a sum
    of k residues can take while staying congruent to t.

    Solvable sources always stay solvable; unsolvable ones stay unsolvable
    with probability at least 1 - 1/(c*confidence) over the prime draw.
    """
    if inst.n < inst.k:
        raise ParameterError(f"need n >= k, got n={inst.n}, k={inst.k}")
    lo, hi = inst.bounds
    big_m = max(abs(lo), abs(hi), 1)
    bound = prime_range_bound(inst.n, inst.k, big_m, confidence)
    rng = random.Random(seed)
    p = random_prime_in(2, bound, rng)
    residues = tuple(x % p for x in inst.numbers)
    base_target = inst.target % p
    items = []
    for i in range(inst.k):
        out = KSumInstance(
            k=inst.k,
            numbers=residues,
            target=base_target + i * p,
            bounds=(0, p - 1),
        )
        items.append(ReducedItem(out, {"offset": i, "target": str(base_target + i * p)}))
    draw = PrimeReductionParams(confidence=confidence, prime=p, bound=bound, seed=seed)
    return ReducedCollection(
        reduction="ksum_mod_reduce",
        source_digest=instance_digest(inst),
        params={
            "prime": str(draw.prime),
            "bound": str(draw.bound),
            "confidence": draw.confidence,
            "seed": draw.seed,
            "algorithm": "mt19937",
        },
        items=tuple(items),
    )
