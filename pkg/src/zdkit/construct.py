"""Constructions: coset functions, change points, and parameter families.

The coset construction labels the orbits {rG} of a unit subgroup G and
is zero-difference balanced whenever every g - 1 (g in G, g != 1) is a
unit. The change-point technique redefines such a function at its
singleton-preimage point, producing a function whose spectrum takes at
most three values; the new spectrum set is predicted from the overlap
class D = (I(a) - a0) & (a0 - I(a)) and then verified against the
brute-force scan before the result is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import (
    Ring,
    GFRing,
    ProductRing,
    Subgroup,
    ZnRing,
    check_unit_difference,
    factorize,
    find_order_e_subgroup,
    make_ring,
    multiplicative_order,
)
from .errors import DomainError, InternalCheckError
from .zdcore import (
    FunctionTable,
    ZDSpectrum,
    function_table,
    preimage_stats,
    relabel_values,
    zd_spectrum,
)


@dataclass(frozen=True)
class CosetLabeling:
    """The coset partition, indexed by label.

    Labels follow the ascending smallest element of each coset, so {0}
    always gets label 0 and the subgroup itself (which contains 1) gets
    label 1. Any fixed labeling yields the same spectrum; this one is
    just reproducible.
    """

    cosets: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class CosetConstruction:
    table: FunctionTable
    labeling: CosetLabeling
    subgroup: Subgroup
    spectrum: ZDSpectrum  # verified on construction


def coset_zdb(ring: Ring, group: Subgroup) -> CosetConstruction:
    """Label x by its coset xG; balanced with constant count k - 1.

    Requires the unit-difference condition; the resulting function has
    image size (n-1)/k + 1 and one singleton class {0}.
    """
    _validate_subgroup(ring, group)
    if not check_unit_difference(ring, group):
        raise DomainError("subgroup fails the unit-difference condition")
    n, k = ring.order, group.k
    if (n - 1) % k:
        raise DomainError(f"subgroup order {k} does not divide {n - 1}")

    labels = [-1] * n
    cosets: list[frozenset[int]] = []
    for x in range(n):
        if labels[x] != -1:
            continue
        coset = frozenset(ring.mul(x, g) for g in group.elements)
        lab = len(cosets)
        for y in coset:
            if labels[y] != -1:
                raise InternalCheckError("cosets overlap despite the unit-difference condition")
            labels[y] = lab
        cosets.append(coset)

    m = (n - 1) // k + 1
    if len(cosets) != m or len(cosets[0]) != 1 or any(len(c) != k for c in cosets[1:]):
        raise InternalCheckError("coset partition does not have the expected block profile")

    table = function_table(ring, labels, m)
    spectrum = zd_spectrum(table)
    if spectrum.values != {k - 1}:
        raise InternalCheckError(
            f"coset function is not balanced: spectrum {sorted(spectrum.values)}"
        )
    return CosetConstruction(table, CosetLabeling(tuple(cosets)), group, spectrum)


def _validate_subgroup(ring: Ring, group: Subgroup) -> None:
    if not group.elements:
        raise DomainError("empty subgroup")
    for x in group.elements:
        if not 0 <= x < ring.order:
            raise DomainError(f"subgroup element {x} out of range")
    elems = set(group.elements)
    if len(elems) != len(group.elements):
        raise DomainError("subgroup elements repeat")
    if ring.one not in elems:
        raise DomainError("subgroup must contain the multiplicative identity")
    if group.generators:
        # cheap closure check: the listed generator must regenerate the set
        g = group.generators[0]
        acc, seen = ring.one, {ring.one}
        for _ in range(len(elems)):
            acc = ring.mul(acc, g)
            seen.add(acc)
        if seen != elems:
            raise DomainError("subgroup elements do not match the generator's powers")
    else:
        if not all(ring.mul(a, b) in elems for a in elems for b in elems):
            raise DomainError("subgroup elements are not closed under multiplication")


@dataclass(frozen=True)
class ChangePointResult:
    """A change-point output plus its verified spectrum prediction.

    `case_id` names which branch of the prediction applied:
    constant      image collapses to a single symbol (S = {n})
    full-shift    D empty and only two classes remain (S = {k})
    split         D empty (S = {k-1, k})
    paired        D equals the whole shifted class (S = {k-1, k+1})
    mixed         D strictly between (S = {k-1, k, k+1})
    """

    table: FunctionTable
    a0: int
    a: int
    i_a: frozenset[int]
    d_set: frozenset[int]
    e_set: frozenset[int]
    case_id: str
    predicted_s: frozenset[int]
    spectrum: ZDSpectrum
    k: int


def _predict_case(n: int, k: int, m_new: int, d_size: int, shifted_size: int):
    if m_new == 1:
        return "constant", frozenset({n})
    if d_size == 0:
        if m_new == 2:
            return "full-shift", frozenset({k})
        return "split", frozenset({k - 1, k})
    if d_size == shifted_size:
        return "paired", frozenset({k - 1, k + 1})
    return "mixed", frozenset({k - 1, k, k + 1})


def _apply_change_point(f: FunctionTable, a0: int, a: int, k: int) -> ChangePointResult:
    ring, n, m = f.domain, f.n, f.m
    b0 = f.values[a0]
    target = f.values[a]

    i_a = frozenset(x for x in range(n) if f.values[x] == target)
    shifted = frozenset(ring.sub(x, a0) for x in i_a)
    reflected = frozenset(ring.sub(a0, x) for x in i_a)
    if len(shifted) != k or len(reflected) != k:
        raise InternalCheckError("shifted preimage class lost elements")
    d_set = shifted & reflected
    e_set = shifted | reflected

    new_values = [target if x == a0 else v for x, v in enumerate(f.values)]
    compacted = [v - 1 if v > b0 else v for v in new_values]  # label b0 is now vacant
    table = function_table(ring, compacted, m - 1)

    case_id, predicted = _predict_case(n, k, m - 1, len(d_set), len(shifted))
    spectrum = zd_spectrum(table)
    if spectrum.values != predicted:
        raise InternalCheckError(
            f"predicted spectrum {sorted(predicted)} != computed {sorted(spectrum.values)}"
        )
    sizes = preimage_stats(table).sizes
    if sizes != tuple(sorted([k + 1] + [k] * (m - 2))):
        raise InternalCheckError(f"change point did not merge into one class: sizes {sizes}")
    return ChangePointResult(
        table=table,
        a0=a0,
        a=a,
        i_a=i_a,
        d_set=d_set,
        e_set=e_set,
        case_id=case_id,
        predicted_s=predicted,
        spectrum=spectrum,
        k=k,
    )


def change_point_zero(base: CosetConstruction) -> ChangePointResult:
    """Redefine the coset function at 0 to the value of 1.

    The spectrum set is {n}, {k}, {k-1, k} or {k-1, k+1} depending on
    the number of remaining classes and whether -1 lies in the subgroup.
    """
    return _apply_change_point(base.table, 0, base.table.domain.one, base.subgroup.k)


def change_point_general(f: FunctionTable, a0: int, a: int) -> ChangePointResult:
    """Redefine a balanced table at its singleton point a0 to f(a).

    The input must have exactly one singleton class {a0}, all other
    classes of one common size k >= 2, and a constant spectrum (which
    then necessarily equals k - 1).
    """
    n = f.n
    stats = preimage_stats(f)
    singles = [b for b, r in enumerate(stats.counts) if r == 1]
    others = {r for r in stats.counts if r != 1}
    if len(singles) != 1 or len(others) != 1:
        raise DomainError(
            "base must have exactly one singleton class and equal-size remaining classes"
        )
    k = others.pop()
    if not 0 <= a0 < n or f.values[a0] != singles[0]:
        raise DomainError(f"a0={a0} is not the singleton preimage point")
    if not 0 <= a < n:
        raise DomainError(f"a={a} out of range")
    if f.values[a] == f.values[a0]:
        raise DomainError("a must lie outside the class of a0")

    base_spectrum = zd_spectrum(f)
    if len(base_spectrum.values) != 1:
        raise DomainError(
            f"base spectrum must be constant, got {sorted(base_spectrum.values)}"
        )
    if base_spectrum.lambda_max != k - 1:
        raise InternalCheckError(
            f"balanced base with class size {k} must have count {k - 1}, "
            f"got {base_spectrum.lambda_max}"
        )
    return _apply_change_point(f, a0, a, k)


def _divisor_check(primes: Sequence[int], e: int, what: str) -> None:
    for p in primes:
        if (p - 1) % e:
            raise DomainError(f"e={e} must divide {what} for every prime factor; fails at p={p}")


def family_zn(n: int, e: int) -> CosetConstruction:
    """Coset function on Z_n for odd n with e dividing every p - 1.

    Order-e subgroups of Z_n need not satisfy the unit-difference
    condition, so candidate generators are scanned in ascending order
    until one does.
    """
    if n < 3 or n % 2 == 0:
        raise DomainError(f"n must be an odd integer >= 3, got {n}")
    if e < 1:
        raise DomainError(f"e must be positive, got {e}")
    _divisor_check(sorted(factorize(n)), e, "p-1")
    ring = ZnRing(n)
    for g in range(1, n):
        if multiplicative_order(ring, g, cap=e) != e:
            continue
        group = Subgroup(_powers(ring, g, e), (g,))
        if check_unit_difference(ring, group):
            return coset_zdb(ring, group)
    raise InternalCheckError(
        f"no admissible order-{e} subgroup found in Z_{n} although e divides every p-1"
    )


def _powers(ring: Ring, g: int, e: int) -> tuple[int, ...]:
    elems = [ring.one]
    acc = g
    while acc != ring.one:
        elems.append(acc)
        acc = ring.mul(acc, g)
    if len(elems) != e:
        raise InternalCheckError("generator order drifted during expansion")
    return tuple(elems)


def family_product_fields(factors: Sequence[tuple[int, int]], e: int) -> CosetConstruction:
    """Coset function on a product of fields GF(p^r) with e | p^r - 1.

    The componentwise order-e generator makes the unit-difference
    condition automatic.
    """
    if not factors:
        raise DomainError("need at least one field factor")
    if e < 1:
        raise DomainError(f"e must be positive, got {e}")
    fields = []
    for p, r in factors:
        field = GFRing(p, r)
        if (field.order - 1) % e:
            raise DomainError(f"e={e} must divide p^r - 1 for every factor; fails at {p}^{r}")
        fields.append(field)
    ring: Ring = fields[0] if len(fields) == 1 else ProductRing(fields)
    group = find_order_e_subgroup(ring, e)
    if not check_unit_difference(ring, group):
        raise InternalCheckError("componentwise generator violated the unit-difference condition")
    return coset_zdb(ring, group)


def import_table(
    document: Mapping, zero_label: int | None = None
) -> FunctionTable:
    """Read a function table document {"group": ..., "values": [...]}.

    Values already reading 0..m-1 are kept verbatim; anything else is
    compacted by first occurrence. An explicit zero label forces which
    symbol becomes 0. A declared "m" must match the normalized table.
    """
    if not isinstance(document, Mapping):
        raise DomainError("table document must be a mapping")
    try:
        group = document["group"]
        raw_values = document["values"]
    except KeyError as exc:
        raise DomainError(f"table document is missing key {exc.args[0]!r}") from exc
    ring = make_ring(group)
    if not isinstance(raw_values, Sequence) or isinstance(raw_values, (str, bytes)):
        raise DomainError("table values must be an array")
    values = [int(v) for v in raw_values]
    if len(values) != ring.order:
        raise DomainError(
            f"value array has length {len(values)}, ring has order {ring.order}"
        )
    normalized = relabel_values(values, zero_label)
    table = function_table(ring, normalized)
    declared = document.get("m")
    if declared is not None and int(declared) != table.m:
        raise DomainError(f"document declares m={declared} but the table has m={table.m}")
    return table


def export_table(f: FunctionTable) -> dict:
    """Canonical JSON document for a table; inverse of `import_table`."""
    return {"group": f.domain.descriptor(), "m": f.m, "values": list(f.values)}
