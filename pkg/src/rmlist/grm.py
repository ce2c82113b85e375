"""Generalized analogue over small prime fields F_q: weights, bias, thresholds,
low-weight constructions, the bias-averaging identities, and tiny exhaustive
enumeration.

Bias values are kept as exact residue counts (how often the function hits
each value of F_q); every asserted identity is linear in those counts, so no
irrational arithmetic enters any check. The complex value sum(count_j w^j)/q^n
with w = exp(2 pi i / q) is derived on demand for display.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .boolfunc import FunctionTable
from .enumeration import WeightEnumerator
from .errors import InputError, InvariantFailure, ScaleError

MAX_FIELD = 7
ENUM_CAP_BITS = 24  # q^dimension <= 2^24


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(math.isqrt(q)) + 1))


@dataclass(frozen=True)
class GrmParams:
    q: int
    n: int
    d: int

    def __post_init__(self) -> None:
        if not (_is_prime(self.q) and 2 <= self.q <= MAX_FIELD):
            raise InputError(f"q must be a prime in [2, {MAX_FIELD}], got {self.q}")
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.d <= self.n * (self.q - 1):
            raise InputError(
                f"d must be in [1, n(q-1)={self.n * (self.q - 1)}], got {self.d}"
            )

    @property
    def block_length(self) -> int:
        return self.q**self.n

    def monomial_exponents(self) -> list[tuple[int, ...]]:
        """Exponent vectors with per-variable exponent < q and total degree <= d."""
        out = [
            e
            for e in itertools.product(range(self.q), repeat=self.n)
            if sum(e) <= self.d
        ]
        out.sort(key=lambda e: (sum(e), e))
        return out

    @property
    def dimension(self) -> int:
        return len(self.monomial_exponents())


@dataclass(frozen=True)
class GrmTable:
    """Value table of f: F_q^n -> F_q; index = base-q encoding, x_1 least significant."""

    q: int
    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.q**self.n:
            raise InputError("value table length must be q^n")
        if any(not 0 <= v < self.q for v in self.values):
            raise InputError("table values must lie in [0, q)")

    @property
    def size(self) -> int:
        return self.q**self.n

    @classmethod
    def from_function_table(cls, f: FunctionTable) -> "GrmTable":
        return cls(2, f.n, tuple(f.to_values()))

    def to_function_table(self) -> FunctionTable:
        if self.q != 2:
            raise InputError("only q=2 tables convert to packed Boolean tables")
        return FunctionTable.from_values(self.values)


def point_coordinates(q: int, n: int, index: int) -> tuple[int, ...]:
    coords = []
    for _ in range(n):
        coords.append(index % q)
        index //= q
    return tuple(coords)


def grm_weight(f: GrmTable) -> Fraction:
    return Fraction(sum(1 for v in f.values if v != 0), f.size)


def grm_distance(f: GrmTable, g: GrmTable) -> Fraction:
    if (f.q, f.n) != (g.q, g.n):
        raise InputError("mismatched field or variable count")
    return Fraction(sum(1 for a, b in zip(f.values, g.values) if a != b), f.size)


@dataclass(frozen=True)
class BiasValue:
    """Exact residue counts of a function's values, with the complex bias derived."""

    q: int
    size: int
    residue_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.residue_counts) != self.size:
            raise InvariantFailure("residue counts must sum to q^n")

    @property
    def complex_value(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.q)
        return sum(c * w**j for j, c in enumerate(self.residue_counts)) / self.size

    def real_part(self) -> Fraction | float:
        """Real part of the bias; exact for q in {2, 3} where cos is rational."""
        if self.q == 2:
            return Fraction(self.residue_counts[0] - self.residue_counts[1], self.size)
        if self.q == 3:
            c0, c1, c2 = self.residue_counts
            return Fraction(2 * c0 - c1 - c2, 2 * self.size)
        return self.complex_value.real

    def as_binary_bias(self) -> Fraction:
        if self.q != 2:
            raise InputError("binary bias defined only for q=2")
        return Fraction(self.residue_counts[0] - self.residue_counts[1], self.size)


def grm_bias(f: GrmTable) -> BiasValue:
    counts = [0] * f.q
    for v in f.values:
        counts[v] += 1
    return BiasValue(q=f.q, size=f.size, residue_counts=tuple(counts))


@dataclass(frozen=True)
class Threshold:
    k: int
    a: int | None
    b: int | None
    value: Fraction


def _split_degree(q: int, d: int) -> tuple[int, int]:
    # d = (q-1) a + b with 1 <= b <= q-1
    a = (d - 1) // (q - 1)
    return a, d - (q - 1) * a


def weight_thresholds(q: int, d: int) -> list[Threshold]:
    """Distance cut-offs r_1..r_d at which the counting exponent is expected to jump."""
    if not (_is_prime(q) and 2 <= q <= MAX_FIELD):
        raise InputError(f"q must be a prime in [2, {MAX_FIELD}], got {q}")
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    out = []
    a, b = _split_degree(q, d)
    out.append(Threshold(1, a, b, Fraction(1, q**a) * (1 - Fraction(b, q))))
    for k in range(2, d):
        a, b = _split_degree(q, d - k)
        out.append(
            Threshold(
                k, a, b,
                Fraction(1, q**a) * (1 - Fraction(b, q)) * (1 - Fraction(1, q)),
            )
        )
    if d >= 2:
        out.append(Threshold(d, None, None, 1 - Fraction(1, q)))
    return out


class GrmPolynomial:
    """Sparse polynomial over F_q with per-variable exponents reduced by x^q = x."""

    def __init__(self, q: int, n: int, coeffs: dict[tuple[int, ...], int] | None = None):
        self.q = q
        self.n = n
        self.coeffs: dict[tuple[int, ...], int] = {}
        for e, c in (coeffs or {}).items():
            self._add_term(e, c)

    def _add_term(self, e: tuple[int, ...], c: int) -> None:
        e = tuple(self._reduce_exp(x) for x in e)
        c %= self.q
        if not c:
            return
        cur = (self.coeffs.get(e, 0) + c) % self.q
        if cur:
            self.coeffs[e] = cur
        else:
            self.coeffs.pop(e, None)

    def _reduce_exp(self, e: int) -> int:
        while e >= self.q:
            e -= self.q - 1
        return e

    @classmethod
    def constant(cls, q: int, n: int, c: int) -> "GrmPolynomial":
        return cls(q, n, {tuple([0] * n): c % q})

    @classmethod
    def variable(cls, q: int, n: int, index: int) -> "GrmPolynomial":
        """x_index, 1-based."""
        e = [0] * n
        e[index - 1] = 1
        return cls(q, n, {tuple(e): 1})

    def __add__(self, other: "GrmPolynomial") -> "GrmPolynomial":
        out = GrmPolynomial(self.q, self.n, dict(self.coeffs))
        for e, c in other.coeffs.items():
            out._add_term(e, c)
        return out

    def __sub__(self, other: "GrmPolynomial") -> "GrmPolynomial":
        out = GrmPolynomial(self.q, self.n, dict(self.coeffs))
        for e, c in other.coeffs.items():
            out._add_term(e, -c)
        return out

    def __mul__(self, other: "GrmPolynomial") -> "GrmPolynomial":
        out = GrmPolynomial(self.q, self.n)
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out._add_term(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return out

    def scale(self, c: int) -> "GrmPolynomial":
        out = GrmPolynomial(self.q, self.n)
        for e, c0 in self.coeffs.items():
            out._add_term(e, c0 * c)
        return out

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def sort_key(self) -> tuple:
        return tuple(sorted(self.coeffs.items()))

    def evaluate_table(self) -> GrmTable:
        size = self.q**self.n
        values = []
        for v in range(size):
            x = point_coordinates(self.q, self.n, v)
            total = 0
            for e, c in self.coeffs.items():
                term = c
                for xi, ei in zip(x, e):
                    term = term * pow(xi, ei, self.q) if ei else term
                total += term
            values.append(total % self.q)
        return GrmTable(self.q, self.n, tuple(values))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items(), key=lambda item: (sum(item[0]), item[0])):
            vars_part = "".join(
                f"x{i + 1}" + (f"^{ei}" if ei > 1 else "")
                for i, ei in enumerate(e) if ei
            )
            if not vars_part:
                parts.append(str(c))
            else:
                parts.append(vars_part if c == 1 else f"{c}*{vars_part}")
        return " + ".join(parts)


@dataclass(frozen=True)
class GrmFamily:
    q: int
    n: int
    d: int
    k: int
    claimed_weight: Fraction
    members: tuple[tuple[GrmPolynomial, GrmTable], ...]
    distinct_count: int


def _iter_polynomials(q: int, n: int, d: int, offset: int) -> Iterator[GrmPolynomial]:
    """All degree-<= d polynomials on variables x_{offset+1}..x_n, coefficients odometer."""
    free = n - offset
    if free <= 0 or d <= 0:
        for c in range(q):
            yield GrmPolynomial.constant(q, n, c)
        return
    exps = [
        e
        for e in itertools.product(range(q), repeat=free)
        if sum(e) <= min(d, free * (q - 1))
    ]
    exps.sort(key=lambda e: (sum(e), e))
    for coeffs in itertools.product(range(q), repeat=len(exps)):
        full = {}
        for e, c in zip(exps, coeffs):
            if c:
                full[tuple([0] * offset) + e] = c
        yield GrmPolynomial(q, n, full)


def construct_grm_family(
    q: int, n: int, d: int, k: int, limit: int = 64
) -> GrmFamily:
    """Low-weight constructions hitting each threshold weight r_k exactly.

    k=1: a product of (form - j) factors over independent linear forms; the
    canonical member uses coordinates, further members vary the last form by
    adding multiples of unused variables. 2 <= k <= d-1: coordinate products
    times (x_{a+2} + g) for g of degree <= k on the remaining variables.
    k=d: x_1 + g for g of degree <= d on the rest. Every member's weight and
    degree are verified exactly.
    """
    params = GrmParams(q, n, d)
    if not 1 <= k <= d:
        raise InputError(f"k must be in [1, d={d}], got {k}")
    thresholds = {t.k: t.value for t in weight_thresholds(q, d)}
    target = thresholds[k] if k in thresholds else thresholds[1]
    members: list[tuple[GrmPolynomial, GrmTable]] = []
    seen = set()

    def emit(p: GrmPolynomial) -> bool:
        if len(members) >= limit:
            return False
        if p.degree > d:
            raise InvariantFailure(f"family member degree {p.degree} exceeds {d}")
        table = p.evaluate_table()
        w = grm_weight(table)
        if w != target:
            raise InvariantFailure(f"family member weight {w} != claimed {target}")
        key = p.sort_key()
        if key not in seen:
            seen.add(key)
            members.append((p, table))
        return len(members) < limit

    if k == 1:
        a, b = _split_degree(q, d)
        if a + 1 > n:
            raise InputError(f"k=1 construction needs {a + 1} variables, have {n}")
        base = GrmPolynomial.constant(q, n, 1)
        for i in range(1, a + 1):
            for j in range(1, q):
                base = base * (
                    GrmPolynomial.variable(q, n, i) - GrmPolynomial.constant(q, n, j)
                )
        free = list(range(a + 2, n + 1))
        for combo in itertools.product(range(q), repeat=len(free)):
            form = GrmPolynomial.variable(q, n, a + 1)
            for c, t in zip(combo, free):
                form = form + GrmPolynomial.variable(q, n, t).scale(c)
            p = base
            for j in range(1, b + 1):
                p = p * (form - GrmPolynomial.constant(q, n, j))
            if not emit(p):
                break
    elif k < d:
        a, b = _split_degree(q, d - k)
        if a + 2 > n:
            raise InputError(f"construction needs {a + 2} variables, have {n}")
        base = GrmPolynomial.constant(q, n, 1)
        for i in range(1, a + 1):
            for j in range(1, q):
                base = base * (
                    GrmPolynomial.variable(q, n, i) - GrmPolynomial.constant(q, n, j)
                )
        for j in range(1, b + 1):
            base = base * (
                GrmPolynomial.variable(q, n, a + 1) - GrmPolynomial.constant(q, n, j)
            )
        x_next = GrmPolynomial.variable(q, n, a + 2)
        for g in _iter_polynomials(q, n, k, offset=a + 2):
            if not emit(base * (x_next + g)):
                break
    else:
        x1 = GrmPolynomial.variable(q, n, 1)
        for g in _iter_polynomials(q, n, d, offset=1):
            if not emit(x1 + g):
                break
    return GrmFamily(
        q=q, n=n, d=d, k=k,
        claimed_weight=target,
        members=tuple(members),
        distinct_count=len(seen),
    )


@dataclass(frozen=True)
class BiasScalingReport:
    """Per-multiplier bias scan with the two exact averaging identities checked."""

    weight: Fraction
    biases: tuple[BiasValue, ...]
    mean_all_equals_one_minus_weight: bool
    mean_nonzero_equals_scaled: bool
    eps: Fraction | None
    witness_multiplier: int | None
    witness_real: Fraction | float | None
    witness_meets_eps: bool | None
    flagged: bool


def bias_scaling_scan(p: GrmTable, eps: Fraction | None = None) -> BiasScalingReport:
    """Scan bias(c*p) for every multiplier c in F_q.

    Asserts exactly (on residue counts): the average over all c equals
    1 - wt(p), and the average over c != 0 equals 1 - q/(q-1) wt(p). When eps
    is given and wt(p) <= 1 - 1/q - eps, reports the best nonzero multiplier
    by real part as the decomposition witness, flagging (not failing) if none
    reaches eps.
    """
    q, size = p.q, p.size
    base = grm_bias(p)
    counts = base.residue_counts
    per_alpha = []
    agg = [0] * q
    for c in range(q):
        scaled = [0] * q
        for j, cnt in enumerate(counts):
            scaled[(c * j) % q] += cnt
        per_alpha.append(BiasValue(q=q, size=size, residue_counts=tuple(scaled)))
        for j in range(q):
            agg[j] += scaled[j]
    w = grm_weight(p)
    # sum over c of bias(c p) = (agg0 - common)/q^n given equal nonzero residues;
    # exactness relies on 1 + w + ... + w^{q-1} = 0 being the only rational relation.
    nonzero_equal = all(agg[j] == agg[1] for j in range(1, q))
    mean_all_ok = nonzero_equal and Fraction(agg[0] - agg[1], q * size) == 1 - w
    agg0_nz = agg[0] - size  # drop c=0, whose residues all sit at 0
    mean_nz_ok = nonzero_equal and Fraction(agg0_nz - agg[1], (q - 1) * size) == (
        1 - Fraction(q, q - 1) * w
    )
    if not (mean_all_ok and mean_nz_ok):
        raise InvariantFailure("bias averaging identity violated")
    witness_c = witness_real = witness_ok = None
    flagged = False
    if eps is not None:
        if not 0 < eps < 1:
            raise InputError(f"eps must be in (0, 1), got {eps}")
        if w <= 1 - Fraction(1, q) - eps:
            reals = [(per_alpha[c].real_part(), c) for c in range(1, q)]
            witness_real, witness_c = max(reals, key=lambda rc: (rc[0], -rc[1]))
            witness_ok = bool(witness_real >= eps)
            flagged = not witness_ok
    return BiasScalingReport(
        weight=w,
        biases=tuple(per_alpha),
        mean_all_equals_one_minus_weight=mean_all_ok,
        mean_nonzero_equals_scaled=mean_nz_ok,
        eps=eps,
        witness_multiplier=witness_c,
        witness_real=witness_real,
        witness_meets_eps=witness_ok,
        flagged=flagged,
    )


def grm_enumerate_weights(params: GrmParams) -> WeightEnumerator:
    """Exact enumerator over all q^dimension codewords via a base-q odometer.

    Each odometer step bumps one coefficient by one, which adds one monomial
    value table (mod q) to the running evaluation; weights are counted from
    the running table.
    """
    dim = params.dimension
    if params.q**dim > 1 << ENUM_CAP_BITS:
        raise ScaleError(
            f"q^dimension = {params.q}^{dim} exceeds the enumeration cap 2^{ENUM_CAP_BITS}"
        )
    q, size = params.q, params.block_length
    exps = params.monomial_exponents()
    coords = np.array(
        [point_coordinates(q, params.n, v) for v in range(size)], dtype=np.int64
    )
    mono_tables = []
    for e in exps:
        vals = np.ones(size, dtype=np.int64)
        for i, ei in enumerate(e):
            if ei:
                vals = vals * np.power(coords[:, i], ei) % q
        mono_tables.append((vals % q).astype(np.int64))
    counts: dict[int, int] = {}
    values = np.zeros(size, dtype=np.int64)
    digits = [0] * dim
    total = q**dim
    for _ in range(total):
        w = int(np.count_nonzero(values))
        counts[w] = counts.get(w, 0) + 1
        pos = 0
        while pos < dim and digits[pos] == q - 1:
            digits[pos] = 0
            values += mono_tables[pos]
            values %= q
            pos += 1
        if pos == dim:
            break
        digits[pos] += 1
        values += mono_tables[pos]
        values %= q
    return WeightEnumerator(params=params, block_length=size, counts=counts)
