"""Function tables over finite rings and their zero-difference spectra.

A table stores f as the array of its values over the canonical element
enumeration of the additive group. The spectrum records, for every
nonzero difference alpha, how many x satisfy f(x + alpha) = f(x); the
scan is a naive exhaustive double loop over (x, alpha), which keeps it
trustworthy as the oracle every construction is verified against.

All counts are integers and all averages are `Fraction`s; no identity or
bound here is ever evaluated in floating point.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Ring
from .errors import DomainError, InternalCheckError
from .exact import ceil_fraction


@dataclass(frozen=True)
class FunctionTable:
    """A function from a ring's additive group onto {0, ..., m-1}."""

    domain: Ring
    m: int
    values: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.domain.order


def function_table(domain: Ring, values: Sequence[int], m: int | None = None) -> FunctionTable:
    """Validated constructor: values must cover {0..m-1} exactly."""
    vals = tuple(int(v) for v in values)
    if len(vals) != domain.order:
        raise DomainError(
            f"value array has length {len(vals)}, domain has order {domain.order}"
        )
    seen = set(vals)
    if m is None:
        m = max(seen) + 1 if seen else 0
    if seen != set(range(m)):
        raise DomainError(f"values must cover 0..{m - 1} exactly, got symbols {sorted(seen)}")
    return FunctionTable(domain, m, vals)


def relabel_values(values: Sequence[int], zero_label: int | None = None) -> list[int]:
    """Compact arbitrary labels to 0..m-1.

    Labels are numbered by first occurrence, except that an explicit
    `zero_label` is forced to 0 (this is what selects which preimage
    class plays the zero symbol in weight computations). Values that
    already read 0..m-1 with no explicit zero label are kept unchanged.
    """
    distinct = sorted(set(values))
    if zero_label is None:
        if distinct == list(range(len(distinct))):
            return [int(v) for v in values]
        mapping: dict[int, int] = {}
    else:
        if zero_label not in set(values):
            raise DomainError(f"zero label {zero_label} does not occur in the table")
        mapping = {int(zero_label): 0}
    for v in values:
        if v not in mapping:
            mapping[v] = len(mapping)
    return [mapping[v] for v in values]


@dataclass(frozen=True)
class PreimageStats:
    """Per-symbol preimage counts and the multiset of class sizes."""

    counts: tuple[int, ...]
    sizes: tuple[int, ...]  # sorted multiset
    b0: int  # size of the class of symbol 0


def preimage_stats(f: FunctionTable) -> PreimageStats:
    counts = [0] * f.m
    for v in f.values:
        counts[v] += 1
    return PreimageStats(tuple(counts), tuple(sorted(counts)), counts[0])


@dataclass(frozen=True)
class ZDSpectrum:
    """Zero-difference counts for every nonzero difference."""

    counts: tuple[int, ...]  # counts[i] belongs to alpha = i + 1
    values: frozenset[int]
    lambda_max: int
    lambda_min: int
    lambda_bar: Fraction

    def of(self, alpha: int) -> int:
        return self.counts[alpha - 1]


def zd_spectrum(f: FunctionTable) -> ZDSpectrum:
    """Exhaustive O(n^2) scan over all (x, alpha) pairs."""
    n = f.n
    if n < 2:
        raise DomainError("spectrum needs a domain with at least 2 elements")
    vals = np.asarray(f.values, dtype=np.int64)
    counts = tuple(
        int((vals[f.domain.addition_shift(alpha)] == vals).sum()) for alpha in range(1, n)
    )
    return ZDSpectrum(
        counts=counts,
        values=frozenset(counts),
        lambda_max=max(counts),
        lambda_min=min(counts),
        lambda_bar=Fraction(sum(counts), n - 1),
    )


@dataclass(frozen=True)
class Classification:
    """Shape flags for a table's preimage profile and spectrum."""

    is_zdb: bool
    type_a: int | None  # e such that sizes are {1, e^(m-1)}
    type_b: int | None  # e such that sizes are {e+1, e^(m-1)}
    is_ab: bool  # sizes are floor(n/m) and ceil(n/m) in the forced proportions


def classify(f: FunctionTable, spectrum: ZDSpectrum, stats: PreimageStats) -> Classification:
    n, m = f.n, f.m
    counts = Counter(stats.sizes)

    type_a = None
    type_b = None
    if m >= 2:
        if counts == {1: m}:
            type_a = 1
        elif len(counts) == 2 and counts.get(1) == 1:
            e = max(counts)
            if counts[e] == m - 1:
                type_a = e
        e = min(counts)
        if counts.get(e) == m - 1 and counts.get(e + 1) == 1:
            type_b = e

    k, eps = divmod(n, m)
    is_ab = counts == ({k: m} if eps == 0 else {k: m - eps, k + 1: eps})

    return Classification(
        is_zdb=len(spectrum.values) == 1,
        type_a=type_a,
        type_b=type_b,
        is_ab=is_ab,
    )


def balanced_average(n: int, m: int) -> Fraction:
    """(n-eps)(n+eps-m) / (m(n-1)) with eps = n mod m.

    This is the smallest possible average zero-difference count for an
    onto function with the given n and m; it is attained exactly by the
    almost balanced preimage profiles.
    """
    if n < 2 or m < 1:
        raise DomainError(f"balanced_average needs n >= 2 and m >= 1, got n={n}, m={m}")
    eps = n % m
    return Fraction((n - eps) * (n + eps - m), m * (n - 1))


@dataclass(frozen=True)
class IdentityReport:
    """Exact evaluation of the unconditional spectrum identities.

    Every field is an integer or Fraction. `check_identities` raises if
    any check fails, because each one is a theorem for valid inputs.
    """

    pair_count_lhs: int  # sum of r_b (r_b - 1)
    pair_count_rhs: int  # sum of lambda_alpha
    square_sum: int  # sum of r_b^2
    lambda_bar: Fraction
    epsilon: int
    balanced_avg: Fraction
    delta_max: int  # discriminant bounding r_b via lambda_max / lambda_min
    delta_avg: Fraction  # discriminant bounding r_b via lambda_bar
    pair_count_ok: bool
    square_sum_ok: bool
    max_lower_bound_ok: bool
    avg_lower_bound_ok: bool
    avg_equality: bool
    range_max_ok: bool
    range_avg_ok: bool
    ab_equivalence_ok: bool


def check_identities(
    f: FunctionTable, spectrum: ZDSpectrum, stats: PreimageStats
) -> IdentityReport:
    n, m = f.n, f.m
    lam, mu = spectrum.lambda_max, spectrum.lambda_min
    lbar = spectrum.lambda_bar

    pair_lhs = sum(r * (r - 1) for r in stats.counts)
    pair_rhs = sum(spectrum.counts)
    square_sum = sum(r * r for r in stats.counts)

    c = balanced_average(n, m)
    eps = n % m

    delta_max = (n + lam * n - lam) * m * m - (n * n + n + mu * n - mu) * m + n * n
    delta_avg = (n + lbar * n - lbar) * m * m - (n * n + n + lbar * n - lbar) * m + n * n

    pair_count_ok = pair_lhs == pair_rhs
    square_sum_ok = square_sum == (n - 1) * lbar + n
    max_lower_bound_ok = lam >= ceil_fraction(c + lam - lbar)
    avg_lower_bound_ok = lbar >= c
    avg_equality = lbar == c
    range_max_ok = all((m * r - n) ** 2 <= delta_max for r in set(stats.counts))
    range_avg_ok = all((m * r - n) ** 2 <= delta_avg for r in set(stats.counts))
    is_ab = classify(f, spectrum, stats).is_ab
    ab_equivalence_ok = avg_equality == is_ab

    report = IdentityReport(
        pair_count_lhs=pair_lhs,
        pair_count_rhs=pair_rhs,
        square_sum=square_sum,
        lambda_bar=lbar,
        epsilon=eps,
        balanced_avg=c,
        delta_max=delta_max,
        delta_avg=delta_avg,
        pair_count_ok=pair_count_ok,
        square_sum_ok=square_sum_ok,
        max_lower_bound_ok=max_lower_bound_ok,
        avg_lower_bound_ok=avg_lower_bound_ok,
        avg_equality=avg_equality,
        range_max_ok=range_max_ok,
        range_avg_ok=range_avg_ok,
        ab_equivalence_ok=ab_equivalence_ok,
    )
    failures = [
        name
        for name, ok in [
            ("pair_count", pair_count_ok),
            ("square_sum", square_sum_ok),
            ("max_lower_bound", max_lower_bound_ok),
            ("avg_lower_bound", avg_lower_bound_ok),
            ("range_max", range_max_ok),
            ("range_avg", range_avg_ok),
            ("ab_equivalence", ab_equivalence_ok),
        ]
        if not ok
    ]
    if failures:
        raise InternalCheckError(f"identity checks failed: {', '.join(failures)}")
    return report
