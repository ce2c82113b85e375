"""Sampled weighted-majority approximators for low-weight functions, plus unique decoding.

A function of weight below 2^-k (1 - eps) equals an expectation of its
order-k derivatives with bounded coefficients; sampling m of those
derivatives and taking an integer-weighted majority yields a function within
distance delta of the original. Because distinct degree-<= d codewords are
at least 2^-d apart, a delta <= 2^-(d+2) approximation pins the codeword
down uniquely, which ``unique_decode_within`` then recovers.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boolfunc import (
    AnfPolynomial,
    CodeParams,
    FunctionTable,
    anf_to_table,
    bias,
    distance,
    evaluate,
    monomial_table,
    xor_tables,
)
from .derivatives import derive, require_low_weight
from .errors import (
    ApproximationFailure,
    DegenerateBiasError,
    InputError,
    InvariantFailure,
    RadiusError,
)

EXHAUSTIVE_DECODE_DIMENSION = 26
COEFFICIENT_BOUND_NUMERATOR = 10  # coefficient bound is 10/eps


def sample_count(eps: Fraction, delta: Fraction) -> int:
    """Smallest sample count the Chernoff argument needs: ceil(32 C^2 ln(1/delta))."""
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0, 1), got {eps}")
    if not 0 < delta < 1:
        raise InputError(f"delta must be in (0, 1), got {delta}")
    c = Fraction(COEFFICIENT_BOUND_NUMERATOR) / eps
    return math.ceil(32 * float(c * c) * math.log(1 / float(delta)))


@dataclass(frozen=True)
class ApproximatorParams:
    k: int
    eps: Fraction
    delta: Fraction
    seed: int
    m: int | None = None
    retry_budget: int = 10

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if not 0 < self.eps < 1:
            raise InputError(f"eps must be in (0, 1), got {self.eps}")
        if not 0 < self.delta < 1:
            raise InputError(f"delta must be in (0, 1), got {self.delta}")
        if self.retry_budget < 1:
            raise InputError("retry_budget must be >= 1")
        if self.m is not None and self.m < sample_count(self.eps, self.delta):
            raise InputError(
                f"m={self.m} below the required sample count "
                f"{sample_count(self.eps, self.delta)}"
            )

    @property
    def coefficient_bound(self) -> Fraction:
        return Fraction(COEFFICIENT_BOUND_NUMERATOR) / self.eps

    @property
    def samples(self) -> int:
        return self.m if self.m is not None else sample_count(self.eps, self.delta)

    @classmethod
    def for_code(cls, code: CodeParams, k: int, eps: Fraction, seed: int,
                 retry_budget: int = 10) -> "ApproximatorParams":
        """Default target distance 2^-(d+2): half of half the minimum distance."""
        return cls(k=k, eps=eps, delta=Fraction(1, 1 << (code.d + 2)), seed=seed,
                   retry_budget=retry_budget)


@dataclass(frozen=True)
class SampledApproximator:
    """Weighted majority over m sampled order-k derivatives of a base function."""

    n: int
    k: int
    seed: int
    base: FunctionTable
    directions: tuple[tuple[int, ...], ...]
    coefficients: tuple[int, ...]
    tables: tuple[FunctionTable, ...]

    @property
    def m(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class ApproxResult:
    approximator: SampledApproximator
    achieved_distance: Fraction
    retries_used: int


def _round_half_away(x: Fraction) -> int:
    num, den = abs(x.numerator), x.denominator
    mag = (2 * num + den) // (2 * den)
    return mag if x >= 0 else -mag


def _retry_seed(seed: int, retry: int) -> int:
    return (seed << 32) | retry


def build_approximator(f: FunctionTable, params: ApproximatorParams) -> ApproxResult:
    """Sample direction tuples, round the exact coefficients, retry until within delta.

    Deterministic for a given (f, params): retry t draws from its own derived
    seed, so samples could also be generated independently per index.
    """
    require_low_weight(f, params.k, params.eps)
    m = params.samples
    n = f.n
    int_bound = int(params.coefficient_bound) + 1
    best: tuple[Fraction, SampledApproximator] | None = None
    for retry in range(params.retry_budget):
        rng = random.Random(_retry_seed(params.seed, retry))
        directions = []
        coeffs = []
        tables = []
        for _ in range(m):
            tup = tuple(rng.getrandbits(n) for _ in range(params.k))
            cur = f
            coeff = Fraction(1)
            for a in tup:
                b = bias(cur)
                if b == 0:
                    raise DegenerateBiasError(
                        "zero prefix bias under the low-weight precondition"
                    )
                coeff /= b
                cur = derive(cur, a)
            s = _round_half_away(coeff)
            if abs(s) > int_bound:
                raise InvariantFailure(
                    f"rounded coefficient {s} exceeds bound {int_bound}"
                )
            directions.append(tup)
            coeffs.append(s)
            tables.append(cur)
        approx = SampledApproximator(
            n=n,
            k=params.k,
            seed=params.seed,
            base=f,
            directions=tuple(directions),
            coefficients=tuple(coeffs),
            tables=tuple(tables),
        )
        achieved = distance(f, approximator_table(approx))
        if best is None or achieved < best[0]:
            best = (achieved, approx)
        if achieved <= params.delta:
            return ApproxResult(approx, achieved, retry + 1)
    raise ApproximationFailure(
        f"no sample batch reached distance {params.delta} within "
        f"{params.retry_budget} retries (best: {best[0]})",
        best_distance=best[0],
        retries_used=params.retry_budget,
    )


def eval_approximator(approx: SampledApproximator, x: int) -> int:
    """Weighted-majority bit at one point; a tied sum (>= 0) encodes bit 0."""
    total = 0
    for s, h in zip(approx.coefficients, approx.tables):
        total += s * (1 - 2 * evaluate(h, x))
    return 0 if total >= 0 else 1


def _signed_accumulation(approx: SampledApproximator) -> np.ndarray:
    """Per-point integer sums of s_i * (-1)^{h_i(x)}, exact in int64."""
    size = 1 << approx.n
    acc = np.zeros(size, dtype=np.int64)
    chunk = max(1, (1 << 22) // size)
    coeffs = np.array(approx.coefficients, dtype=np.int64)
    byte_len = max(1, size // 8)
    for start in range(0, approx.m, chunk):
        stop = min(start + chunk, approx.m)
        rows = np.zeros((stop - start, size), dtype=np.uint8)
        for i in range(start, stop):
            raw = np.frombuffer(
                approx.tables[i].bits.to_bytes(byte_len, "little"), dtype=np.uint8
            )
            rows[i - start] = np.unpackbits(raw, bitorder="little")[:size]
        s = coeffs[start:stop]
        acc += s.sum() - 2 * (s @ rows.astype(np.int64))
    return acc


def approximator_table(approx: SampledApproximator) -> FunctionTable:
    """Materialize the weighted majority at every point."""
    acc = _signed_accumulation(approx)
    packed = np.packbits((acc < 0).astype(np.uint8), bitorder="little")
    return FunctionTable(approx.n, int.from_bytes(packed.tobytes(), "little"))


def candidate_from_received(
    approx: SampledApproximator, received: FunctionTable
) -> FunctionTable:
    """Shift the approximator by the received word; lands within delta of the codeword."""
    return xor_tables(approximator_table(approx), received)


def unique_decode_within(
    g: FunctionTable, params: CodeParams, radius: Fraction, backend: str = "auto"
) -> AnfPolynomial | None:
    """Return the unique degree-<= d codeword within radius of g, or None.

    Radius must be below half the minimum distance, which is what makes the
    answer unique. Backends: exhaustive Gray-code scan of the whole code for
    dimension <= 26, majority-vote coefficient recovery (top degree first,
    peeling) otherwise.
    """
    if g.n != params.n:
        raise InputError(f"mismatched variable counts {g.n} != {params.n}")
    if radius >= Fraction(1, 1 << (params.d + 1)):
        raise RadiusError(
            f"radius {radius} must be below half the minimum distance "
            f"{Fraction(1, 1 << params.d)}"
        )
    if backend == "auto":
        backend = (
            "exhaustive" if params.dimension <= EXHAUSTIVE_DECODE_DIMENSION
            else "majority"
        )
    if backend == "exhaustive":
        return _decode_exhaustive(g, params, radius)
    if backend == "majority":
        return _decode_majority(g, params, radius)
    raise InputError(f"unknown backend {backend!r}")


def _decode_exhaustive(
    g: FunctionTable, params: CodeParams, radius: Fraction
) -> AnfPolynomial | None:
    masks = params.monomial_masks()
    tables = [monomial_table(params.n, m) for m in masks]
    size = g.size
    max_flips = (radius.numerator * size) // radius.denominator
    diff = g.bits
    if diff.bit_count() <= max_flips:
        return AnfPolynomial(params.n, frozenset())
    for t in range(1, 1 << len(masks)):
        diff ^= tables[(t & -t).bit_length() - 1]
        if diff.bit_count() <= max_flips:
            code = t ^ (t >> 1)
            sel = frozenset(m for j, m in enumerate(masks) if (code >> j) & 1)
            return AnfPolynomial(params.n, sel)
    return None


def _decode_majority(
    g: FunctionTable, params: CodeParams, radius: Fraction
) -> AnfPolynomial | None:
    """Classical majority-vote decoding: each top-degree coefficient is the
    majority of subcube parities over the cosets of that monomial's subcube;
    recovered layers are XORed out before moving down a degree."""
    n, size = params.n, g.size
    residual = g.bits
    recovered: set[int] = set()
    for deg in range(params.d, 0, -1):
        layer: list[int] = []
        for mask in (m for m in range(size) if m.bit_count() == deg):
            comp = (size - 1) ^ mask
            par = bytearray(size)
            for v in range(size):
                par[v & comp] ^= (residual >> v) & 1
            votes = total = 0
            sub = comp
            while True:
                votes += par[sub]
                total += 1
                if sub == 0:
                    break
                sub = (sub - 1) & comp
            if 2 * votes > total:
                layer.append(mask)
        for mask in layer:
            residual ^= monomial_table(n, mask)
            recovered.add(mask)
    if residual.bit_count() > size // 2:
        recovered.add(0)
    p = AnfPolynomial(n, frozenset(recovered))
    if distance(g, anf_to_table(p)) <= radius:
        return p
    return None


def serialize_approximator(approx: SampledApproximator) -> dict:
    """JSON-ready record; derivative tables are recomputable and not stored."""
    return {
        "n": approx.n,
        "k": approx.k,
        "m": approx.m,
        "seed": approx.seed,
        "samples": [
            {"directions": list(t), "coefficient": s}
            for t, s in zip(approx.directions, approx.coefficients)
        ],
    }


def load_approximator(record: dict, base: FunctionTable) -> SampledApproximator:
    """Rebuild an approximator from its record plus the base function."""
    if record["n"] != base.n:
        raise InputError("record n does not match base function")
    directions = tuple(tuple(s["directions"]) for s in record["samples"])
    coeffs = tuple(int(s["coefficient"]) for s in record["samples"])
    tables = []
    for tup in directions:
        cur = base
        for a in tup:
            cur = derive(cur, a)
        tables.append(cur)
    return SampledApproximator(
        n=base.n,
        k=record["k"],
        seed=record["seed"],
        base=base,
        directions=directions,
        coefficients=coeffs,
        tables=tuple(tables),
    )


def approximator_json(approx: SampledApproximator, achieved: Fraction,
                      retries_used: int) -> str:
    record = serialize_approximator(approx)
    record["achieved_distance"] = str(achieved)
    record["retries_used"] = retries_used
    return json.dumps(record, sort_keys=True, indent=2) + "\n"
