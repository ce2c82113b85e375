"""List-decoding balls, list-size estimation over center strategies, and the list bound.

``ball`` is exact: a Gray-code scan over the whole code keeps the XOR with
the center incrementally, so membership costs one XOR and one popcount per
codeword. The true list size maximizes the ball over every possible center,
which is only feasible exhaustively at n <= 4; other strategies are labeled
lower estimates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .approximator import sample_count
from .boolfunc import (
    AnfPolynomial,
    CodeParams,
    FunctionTable,
    anf_to_table,
    complement,
    monomial_table,
)
from .enumeration import (
    DIMENSION_CAP,
    BoundEstimate,
    binomial_le,
    coefficient_choices,
    construct_low_weight_family,
)
from .errors import InputError, ScaleError

EXHAUSTIVE_CENTER_VARS = 4


@dataclass(frozen=True)
class Ball:
    center: FunctionTable
    radius: Fraction
    members: tuple[tuple[AnfPolynomial, Fraction], ...]

    @property
    def size(self) -> int:
        return len(self.members)


def _check_scale(params: CodeParams) -> None:
    if params.dimension > DIMENSION_CAP:
        raise ScaleError(
            f"dimension {params.dimension} exceeds the scan cap {DIMENSION_CAP}"
        )


def ball(center: FunctionTable, alpha: Fraction, params: CodeParams) -> Ball:
    """All degree-<= d codewords within relative distance alpha of the center."""
    alpha = Fraction(alpha)
    if center.n != params.n:
        raise InputError(f"mismatched variable counts {center.n} != {params.n}")
    if not 0 <= alpha <= 1:
        raise InputError(f"alpha must be in [0, 1], got {alpha}")
    _check_scale(params)
    masks = params.monomial_masks()
    tables = [monomial_table(params.n, m) for m in masks]
    size = center.size
    max_flips = (alpha.numerator * size) // alpha.denominator
    members = []
    diff = center.bits
    w = diff.bit_count()
    if w <= max_flips:
        members.append((AnfPolynomial(params.n, frozenset()), Fraction(w, size)))
    for t in range(1, 1 << len(masks)):
        diff ^= tables[(t & -t).bit_length() - 1]
        w = diff.bit_count()
        if w <= max_flips:
            code = t ^ (t >> 1)
            sel = frozenset(m for j, m in enumerate(masks) if (code >> j) & 1)
            members.append((AnfPolynomial(params.n, sel), Fraction(w, size)))
    members.sort(key=lambda item: (item[1], item[0].sort_key()))
    return Ball(center=center, radius=alpha, members=tuple(members))


def ball_size(center_bits: int, alpha: Fraction, params: CodeParams) -> int:
    """Ball cardinality only; same scan as ``ball`` without materializing members."""
    _check_scale(params)
    masks = params.monomial_masks()
    tables = [monomial_table(params.n, m) for m in masks]
    size = params.block_length
    max_flips = (alpha.numerator * size) // alpha.denominator
    diff = center_bits
    count = 1 if diff.bit_count() <= max_flips else 0
    for t in range(1, 1 << len(masks)):
        diff ^= tables[(t & -t).bit_length() - 1]
        if diff.bit_count() <= max_flips:
            count += 1
    return count


def list_decode(received: FunctionTable, alpha: Fraction, params: CodeParams) -> Ball:
    """CLI-facing ball: members sorted by distance, then canonical ANF order."""
    return ball(received, alpha, params)


@dataclass(frozen=True)
class ListSizeEstimate:
    radius: Fraction
    strategy: str
    centers_tried: int
    best_center: str
    best_center_bits: int
    best_size: int
    exhaustive: bool


def estimate_list_size(
    alpha: Fraction,
    params: CodeParams,
    strategy: str = "zero",
    count: int = 64,
    seed: int = 0,
) -> ListSizeEstimate:
    """Maximize |ball| over a chosen center set.

    Strategies: ``zero`` (the zero word only), ``random`` (seeded uniform
    centers), ``family`` (low-weight family members, their complements, and
    half-mixtures of consecutive members - adversarial centers), and
    ``exhaustive`` (every function; n <= 4 only, the only strategy whose
    result equals the true maximum). The zero center is always included, so
    every estimate is at least the accumulative count at alpha.
    """
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise InputError(f"alpha must be in [0, 1], got {alpha}")
    _check_scale(params)
    size = params.block_length
    centers: list[tuple[str, int]] = [("zero", 0)]
    if strategy == "zero":
        pass
    elif strategy == "random":
        rng = random.Random(seed)
        centers += [(f"random[{i}]", rng.getrandbits(size)) for i in range(count)]
    elif strategy == "family":
        centers += _family_centers(params, count)
    elif strategy == "exhaustive":
        if params.n > EXHAUSTIVE_CENTER_VARS:
            raise ScaleError(
                f"exhaustive centers capped at n <= {EXHAUSTIVE_CENTER_VARS}"
            )
        centers += [(f"exhaustive[{bits}]", bits) for bits in range(1, 1 << size)]
    else:
        raise InputError(f"unknown strategy {strategy!r}")
    best_name, best_bits, best = "zero", 0, -1
    for name, bits in centers:
        s = ball_size(bits, alpha, params)
        if s > best:
            best_name, best_bits, best = name, bits, s
    return ListSizeEstimate(
        radius=alpha,
        strategy=strategy,
        centers_tried=len(centers),
        best_center=best_name,
        best_center_bits=best_bits,
        best_size=best,
        exhaustive=strategy == "exhaustive",
    )


def _family_centers(params: CodeParams, count: int) -> list[tuple[str, int]]:
    centers = []
    size = params.block_length
    half_mask = ((1 << (size // 2)) - 1) << (size // 2)
    for k in range(1, params.d + 1):
        per_k = max(2, count // (3 * params.d))
        family = construct_low_weight_family(params.n, params.d, k, limit=per_k)
        tabs = [anf_to_table(p) for p in family.members]
        for i, t in enumerate(tabs):
            centers.append((f"family[k={k},{i}]", t.bits))
            centers.append((f"complement[k={k},{i}]", complement(t).bits))
        for i in range(len(tabs) - 1):
            mixed = (tabs[i].bits & ~half_mask) | (tabs[i + 1].bits & half_mask)
            centers.append((f"mixture[k={k},{i}]", mixed))
    return centers[: 3 * count]


def list_size_bound(n: int, d: int, k: int, eps: Fraction) -> BoundEstimate:
    """Explicit count dominating the list size at radius 2^-k (1-eps).

    Same shape as the accumulative bound, but each sampled derivative of the
    difference word splits into a degree-<= (d-k) polynomial part plus a
    direction tuple (2^(kn) choices) describing the received word's part.
    """
    CodeParams(n, d)
    if not 1 <= k <= d - 1:
        raise InputError(f"k must be in [1, d-1={d - 1}], got {k}")
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0, 1), got {eps}")
    delta = Fraction(1, 1 << (d + 2))
    m = sample_count(eps, delta)
    deriv = 1 << binomial_le(n, d - k)
    direction = 1 << (k * n)
    s_count = coefficient_choices(eps)
    value = (deriv * direction * s_count) ** m
    return BoundEstimate(
        formula="list-size",
        n=n, d=d, k=k, eps=eps,
        value=value,
        terms={
            "samples": m,
            "derivative_choices": deriv,
            "direction_choices": direction,
            "coefficient_choices": s_count,
        },
    )
