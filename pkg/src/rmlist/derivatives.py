"""Discrete derivatives and exact verification of the derivative-representation identities.

The central objects:

* ``derive`` / ``derive_iterated`` - f_a(x) = f(x+a) + f(x) and its k-fold iteration.
* ``representation_coefficient`` - the product of inverse prefix biases that lets a
  low-weight function be written as an expectation of its order-k derivatives.
* ``verify_derivative_representation`` - checks that expectation identity exactly,
  in rational arithmetic, over all 2^(nk) direction tuples and all 2^n points.
* ``check_bias_bounds`` - the prefix-bias lower bounds that make the coefficients finite.
* ``single_derivative_identity`` - the order-1 identity for any non-balanced function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .boolfunc import FunctionTable, bias, translate, weight
from .errors import (
    DegenerateBiasError,
    InputError,
    ScaleError,
    WeightTooLargeError,
    ZeroBiasError,
)

EXHAUSTIVE_TUPLE_BITS = 24  # cap on n*k for exhaustive tuple enumeration
EXHAUSTIVE_POINT_VARS = 12


def derive(f: FunctionTable, a: int) -> FunctionTable:
    """Discrete derivative in direction a: x -> f(x + a) + f(x)."""
    return FunctionTable(f.n, f.bits ^ translate(f, a).bits)


def derive_iterated(f: FunctionTable, directions: Sequence[int]) -> FunctionTable:
    """Iterated discrete derivative, one direction at a time.

    Agrees with the 2^k subset-sum formula and is invariant under permuting
    the directions (both are property-tested).
    """
    cur = f
    for a in directions:
        cur = derive(cur, a)
    return cur


def low_weight_threshold(k: int, eps: Fraction) -> Fraction:
    return Fraction(1, 1 << k) * (1 - eps)


def require_low_weight(f: FunctionTable, k: int, eps: Fraction) -> None:
    """Gate for every operation that needs wt(f) < 2^-k (1 - eps)."""
    if k < 1:
        raise InputError(f"derivative order k must be >= 1, got {k}")
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0, 1), got {eps}")
    w = weight(f)
    bound = low_weight_threshold(k, eps)
    if w >= bound:
        raise WeightTooLargeError(
            f"weight {w} must be below 2^-{k}*(1-{eps}) = {bound}"
        )


@dataclass(frozen=True)
class RepresentationCoefficient:
    """Coefficient of one direction tuple: product of inverse prefix biases."""

    value: Fraction
    prefix_biases: tuple[Fraction, ...]


def representation_coefficient(
    f: FunctionTable, directions: Sequence[int], eps: Fraction
) -> RepresentationCoefficient:
    """Coefficient attached to one order-k derivative in the representation identity.

    The product runs over the k prefixes f, f_{a_1}, ..., f_{a_1..a_{k-1}};
    under the low-weight precondition every prefix bias is strictly positive
    and the product is at most 10/eps.
    """
    k = len(directions)
    require_low_weight(f, k, eps)
    biases = []
    cur = f
    for a in directions[:k]:
        b = bias(cur)
        if b == 0:
            raise DegenerateBiasError(
                "zero prefix bias under the low-weight precondition"
            )
        biases.append(b)
        cur = derive(cur, a)
    value = Fraction(1)
    for b in biases:
        value /= b
    return RepresentationCoefficient(value, tuple(biases))


@dataclass(frozen=True)
class IdentityReport:
    max_deviation: Fraction
    max_abs_coefficient: Fraction
    tuples_checked: int
    points_checked: int

    def as_dict(self) -> dict:
        return {
            "max_deviation": str(self.max_deviation),
            "max_abs_coefficient": str(self.max_abs_coefficient),
            "tuples_checked": self.tuples_checked,
            "points_checked": self.points_checked,
        }


def _sign_vector(bits: int, size: int) -> list[int]:
    return [1 - 2 * ((bits >> x) & 1) for x in range(size)]


def verify_derivative_representation(
    f: FunctionTable, k: int, eps: Fraction
) -> IdentityReport:
    """Check (-1)^f(x) == E over all order-k tuples of [coeff * (-1)^derivative(x)].

    The expectation is computed exactly: the sum over all 2^(nk) tuples is
    factored prefix-by-prefix (each level averages over one direction and
    divides by that prefix bias), which is algebraically identical to the
    flat sum and keeps everything in Fraction arithmetic. Deviation must be
    exactly zero for in-contract inputs.
    """
    require_low_weight(f, k, eps)
    n = f.n
    if n * k > EXHAUSTIVE_TUPLE_BITS or n > EXHAUSTIVE_POINT_VARS:
        raise ScaleError(
            f"exhaustive verification capped at n*k <= {EXHAUSTIVE_TUPLE_BITS} "
            f"and n <= {EXHAUSTIVE_POINT_VARS} (got n={n}, k={k})"
        )
    size = f.size
    memo: dict[tuple[int, int], tuple[list, Fraction]] = {}

    def level(bits: int, j: int) -> tuple[list, Fraction]:
        """Values of the depth-j averaged representation of g, plus max coefficient."""
        key = (bits, j)
        if key in memo:
            return memo[key]
        if j == 0:
            result = (_sign_vector(bits, size), Fraction(1))
        else:
            b = Fraction(size - 2 * bits.bit_count(), size)
            if b == 0:
                raise DegenerateBiasError(
                    "zero prefix bias under the low-weight precondition"
                )
            g = FunctionTable(n, bits)
            sums = [0] * size
            max_child = Fraction(0)
            for a in range(size):
                child_vals, child_max = level(derive(g, a).bits, j - 1)
                if child_max > max_child:
                    max_child = child_max
                for x in range(size):
                    sums[x] += child_vals[x]
            scale = size * b
            result = ([Fraction(s) / scale for s in sums], max_child / abs(b))
        memo[key] = result
        return result

    values, max_coeff = level(f.bits, k)
    signs = _sign_vector(f.bits, size)
    max_dev = max(abs(values[x] - signs[x]) for x in range(size))
    return IdentityReport(
        max_deviation=max_dev,
        max_abs_coefficient=max_coeff,
        tuples_checked=size**k,
        points_checked=size,
    )


def single_derivative_identity(g: FunctionTable) -> IdentityReport:
    """Check (-1)^g(x) == (1/bias(g)) * E_a[(-1)^{g_a(x)}] at every point.

    The direction average is accumulated honestly (one derivative table per
    direction) so the check is not circular.
    """
    size = g.size
    w = g.bits.bit_count()
    bias_num = size - 2 * w
    if bias_num == 0:
        raise ZeroBiasError("balanced function: identity undefined")
    if size >= 512:
        vals = np.array(g.to_values(), dtype=np.int64)
        idx = np.arange(size)
        acc = np.zeros(size, dtype=np.int64)
        for a in range(size):
            acc += 1 - 2 * (vals[idx ^ a] ^ vals)
        acc_list = acc.tolist()
    else:
        acc_list = [0] * size
        for a in range(size):
            d = derive(g, a).bits
            for x in range(size):
                acc_list[x] += 1 - 2 * ((d >> x) & 1)
    # (acc/size) / bias - sign = (acc - sign*bias_num) / bias_num
    max_num = 0
    for x in range(size):
        sign = 1 - 2 * ((g.bits >> x) & 1)
        dev = abs(acc_list[x] - sign * bias_num)
        if dev > max_num:
            max_num = dev
    return IdentityReport(
        max_deviation=Fraction(max_num, abs(bias_num)),
        max_abs_coefficient=Fraction(size, abs(bias_num)),
        tuples_checked=size,
        points_checked=size,
    )


@dataclass(frozen=True)
class SweepReport:
    n: int
    functions_checked: int
    zero_bias_skipped: int
    max_deviation: Fraction
    points_checked: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "functions_checked": self.functions_checked,
            "zero_bias_skipped": self.zero_bias_skipped,
            "max_deviation": str(self.max_deviation),
            "points_checked": self.points_checked,
        }


def verify_single_derivative_exhaustive(n: int) -> SweepReport:
    """Run the single-derivative identity over every function on n variables.

    Vectorized over the 2^(2^n) functions at once; all accumulations are
    integer-exact (sums of +-1 in int64), so the reported deviation is exact.
    Capped at n <= 4 (65536 functions).
    """
    if not 1 <= n <= 4:
        raise ScaleError("exhaustive function sweep capped at n <= 4")
    size = 1 << n
    count = 1 << size
    funcs = np.arange(count, dtype=np.uint32)
    table_bits = ((funcs[:, None] >> np.arange(size)[None, :]) & 1).astype(np.int64)
    acc = np.zeros((count, size), dtype=np.int64)
    points = np.arange(size)
    for a in range(size):
        acc += 1 - 2 * (table_bits[:, points ^ a] ^ table_bits)
    w = table_bits.sum(axis=1)
    bias_num = size - 2 * w
    signs = 1 - 2 * table_bits
    dev_num = np.abs(acc - signs * bias_num[:, None])
    nonzero = bias_num != 0
    max_dev = Fraction(0)
    row_max = dev_num[nonzero].max(axis=1)
    if row_max.any():
        denom = np.abs(bias_num[nonzero])
        fracs = [Fraction(int(a), int(b)) for a, b in zip(row_max, denom) if a]
        max_dev = max(fracs)
    return SweepReport(
        n=n,
        functions_checked=int(nonzero.sum()),
        zero_bias_skipped=int(count - nonzero.sum()),
        max_deviation=max_dev,
        points_checked=size,
    )


@dataclass(frozen=True)
class BiasBoundCheck:
    prefix_length: int
    bound: Fraction
    min_bias: Fraction
    tuples_checked: int
    violations: tuple = ()


@dataclass(frozen=True)
class BiasBoundReport:
    k: int
    eps: Fraction
    exhaustive: bool
    checks: tuple[BiasBoundCheck, ...] = field(default_factory=tuple)

    @property
    def violation_count(self) -> int:
        return sum(len(c.violations) for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "eps": str(self.eps),
            "exhaustive": self.exhaustive,
            "violations": self.violation_count,
            "checks": [
                {
                    "prefix_length": c.prefix_length,
                    "bound": str(c.bound),
                    "min_bias": str(c.min_bias),
                    "tuples_checked": c.tuples_checked,
                    "violations": [list(v[0]) for v in c.violations],
                }
                for c in self.checks
            ],
        }


def check_bias_bounds(
    f: FunctionTable,
    k: int,
    eps: Fraction,
    exhaustive: bool | None = None,
    samples: int = 2000,
    seed: int = 0,
) -> BiasBoundReport:
    """Check bias(f_{a_1..a_s}) >= 1 - 2^(s+1-k) (1 - eps) for every prefix length s < k.

    Exhaustive over all tuples when n*s stays within the feasibility cap (or
    when forced); otherwise seeded random tuples with the same assertions.
    Violations are reported, not raised: a non-empty list would falsify the
    underlying math and is treated as a test failure by callers.
    """
    require_low_weight(f, k, eps)
    n = f.n
    size = f.size
    if exhaustive is None:
        exhaustive = n * (k - 1) <= EXHAUSTIVE_TUPLE_BITS
    rng = random.Random(seed)
    checks = []
    for s in range(k):
        bound = 1 - Fraction(1 - eps) / (1 << (k - 1 - s))
        violations = []
        min_bias = Fraction(1)
        if s == 0:
            tuples = [()]
        elif exhaustive:
            tuples = None  # enumerate distinct prefix functions below
        else:
            tuples = [
                tuple(rng.getrandbits(n) for _ in range(s)) for _ in range(samples)
            ]
        if tuples is not None:
            checked = len(tuples)
            for t in tuples:
                b = _prefix_bias(f, t)
                if b < min_bias:
                    min_bias = b
                if b < bound:
                    violations.append((t, b))
        else:
            # Exhaustive: walk distinct derivative functions level by level,
            # keeping one representative tuple per function for reporting.
            checked = size**s
            layer = {f.bits: ()}
            for _ in range(s):
                nxt = {}
                for bits, rep in layer.items():
                    g = FunctionTable(n, bits)
                    for a in range(size):
                        db = derive(g, a).bits
                        if db not in nxt:
                            nxt[db] = rep + (a,)
                layer = nxt
            for bits, rep in layer.items():
                b = Fraction(size - 2 * bits.bit_count(), size)
                if b < min_bias:
                    min_bias = b
                if b < bound:
                    violations.append((rep, b))
        checks.append(
            BiasBoundCheck(
                prefix_length=s,
                bound=bound,
                min_bias=min_bias,
                tuples_checked=checked,
                violations=tuple(violations),
            )
        )
    return BiasBoundReport(k=k, eps=eps, exhaustive=exhaustive, checks=tuple(checks))


def _prefix_bias(f: FunctionTable, directions: Sequence[int]) -> Fraction:
    cur = f
    for a in directions:
        cur = derive(cur, a)
    return Fraction(cur.size - 2 * cur.bits.bit_count(), cur.size)
