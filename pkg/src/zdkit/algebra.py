"""Finite ring arithmetic: Z_n, GF(p^r), and finite direct products.

Every element of a ring is addressed by a canonical index in [0, order):

* Z_n uses the residue itself;
* GF(p^r) packs the coefficient vector as c0 + c1*p + ... + c_{r-1}*p^(r-1);
* a product ring uses mixed radix with the first factor least significant.

Index 0 is always the additive identity, and the conversion between an
index and the structured form (residue, coefficient tuple, component
tuple) is a bijection. All rings are immutable after construction and
all operations are pure functions, so instances are safe to share across
threads.

The module also provides multiplicative subgroups of a ring's unit group
and the two predicates the coset construction depends on: the
unit-difference condition (every g - 1 with g in G, g != 1 is a unit) and
membership of -1 in G.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product as iter_product
from math import gcd
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, InternalCheckError

MAX_ORDER_ENV = "ZDKIT_MAX_ORDER"
DEFAULT_MAX_ORDER = 10**6


def max_order() -> int:
    """Desk-scale cap on ring order; everything here is exhaustive."""
    raw = os.environ.get(MAX_ORDER_ENV)
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"{MAX_ORDER_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DomainError(f"{MAX_ORDER_ENV} must be positive, got {value}")
    return value


def is_prime(n: int) -> bool:
    """Trial-division primality test, adequate at desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: multiplicity} by trial division."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Ring:
    """Base class for finite commutative rings with identity.

    Subclasses must set `order` and `characteristic` and implement the
    scalar operations on canonical indices. Scalar operations assume
    their arguments are valid indices; use `ring_arith` for a checked
    entry point.
    """

    kind: str = "ring"
    order: int
    characteristic: int

    def add(self, x: int, y: int) -> int:
        raise NotImplementedError

    def neg(self, x: int) -> int:
        raise NotImplementedError

    def mul(self, x: int, y: int) -> int:
        raise NotImplementedError

    def is_unit(self, x: int) -> bool:
        raise NotImplementedError

    @property
    def one(self) -> int:
        raise NotImplementedError

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def structured(self, index: int):
        """Structured form of an element (residue, tuple of coefficients, ...)."""
        raise NotImplementedError

    def index_of(self, structured) -> int:
        raise NotImplementedError

    def descriptor(self) -> dict:
        """JSON-serializable description; moduli are never serialized."""
        raise NotImplementedError

    def addition_shift(self, alpha: int) -> np.ndarray:
        """Vector s with s[x] = x + alpha for every index x.

        The generic implementation loops; subclasses vectorize. This is
        the hot path of every exhaustive scan.
        """
        return np.fromiter(
            (self.add(x, alpha) for x in range(self.order)), dtype=np.int64, count=self.order
        )

    def additive_order(self, x: int) -> int:
        """Order of x in the additive group, by orbit enumeration."""
        acc = x
        k = 1
        while acc != 0:
            acc = self.add(acc, x)
            k += 1
        return k

    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._key()!r})"


class ZnRing(Ring):
    """The residue class ring Z_n."""

    kind = "zn"

    def __init__(self, n: int):
        if n < 1:
            raise DomainError(f"Z_n needs n >= 1, got {n}")
        if n > max_order():
            raise DomainError(f"ring order {n} exceeds the desk-scale cap {max_order()}")
        self.n = n
        self.order = n
        self.characteristic = n
        self._arange = np.arange(n, dtype=np.int64)

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def neg(self, x: int) -> int:
        return (-x) % self.n

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.n

    def is_unit(self, x: int) -> bool:
        return gcd(x, self.n) == 1

    @property
    def one(self) -> int:
        return 1 % self.n

    def structured(self, index: int) -> int:
        return index

    def index_of(self, structured: int) -> int:
        return structured % self.n

    def descriptor(self) -> dict:
        return {"kind": "zn", "n": self.n}

    def addition_shift(self, alpha: int) -> np.ndarray:
        return (self._arange + alpha) % self.n

    def additive_order(self, x: int) -> int:
        return self.n // gcd(x, self.n)

    def _key(self) -> tuple:
        return ("zn", self.n)


def _poly_trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    # mod is monic
    rem = list(a)
    d = len(mod) - 1
    while len(rem) - 1 >= d and rem:
        lead = rem[-1]
        shift = len(rem) - 1 - d
        if lead:
            for i, mi in enumerate(mod):
                rem[shift + i] = (rem[shift + i] - lead * mi) % p
        rem.pop()
        _poly_trim(rem)
    return rem


def _poly_divides(div: Sequence[int], a: Sequence[int], p: int) -> bool:
    return not _poly_mod(a, div, p)


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive factor check: no monic divisor of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in iter_product(range(p), repeat=d):
            candidate = list(tail) + [1]
            if _poly_divides(candidate, poly, p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """First monic irreducible of degree r over Z_p.

    Candidates are ordered by their coefficient vector read from the
    constant term upward, so the choice is deterministic everywhere.
    """
    for tail in iter_product(range(p), repeat=r):
        candidate = list(tail) + [1]
        if _is_irreducible(candidate, p):
            return tuple(candidate)
    raise InternalCheckError(f"no irreducible of degree {r} over Z_{p}")


class GFRing(Ring):
    """The finite field GF(p^r), elements as coefficient vectors mod p."""

    kind = "gf"

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise DomainError(f"GF needs a prime characteristic, got {p}")
        if r < 1:
            raise DomainError(f"GF needs extension degree >= 1, got {r}")
        order = p**r
        if order > max_order():
            raise DomainError(f"ring order {order} exceeds the desk-scale cap {max_order()}")
        self.p = p
        self.r = r
        self.order = order
        self.characteristic = p
        self.modulus = smallest_irreducible(p, r)
        self._digits: np.ndarray | None = None
        self._powers = np.array([p**i for i in range(r)], dtype=np.int64)

    def _coeffs(self, index: int) -> list[int]:
        out = []
        for _ in range(self.r):
            index, c = divmod(index, self.p)
            out.append(c)
        return out

    def _index(self, coeffs: Sequence[int]) -> int:
        idx = 0
        for c in reversed(list(coeffs) + [0] * (self.r - len(coeffs))):
            idx = idx * self.p + c
        return idx

    def add(self, x: int, y: int) -> int:
        a, b = self._coeffs(x), self._coeffs(y)
        return self._index([(u + v) % self.p for u, v in zip(a, b)])

    def neg(self, x: int) -> int:
        return self._index([(-c) % self.p for c in self._coeffs(x)])

    def mul(self, x: int, y: int) -> int:
        prod = _poly_mul(_poly_trim(self._coeffs(x)), _poly_trim(self._coeffs(y)), self.p)
        return self._index(_poly_mod(prod, self.modulus, self.p))

    def is_unit(self, x: int) -> bool:
        return x != 0

    @property
    def one(self) -> int:
        return 1

    def structured(self, index: int) -> tuple[int, ...]:
        return tuple(self._coeffs(index))

    def index_of(self, structured: Sequence[int]) -> int:
        return self._index([c % self.p for c in structured])

    def descriptor(self) -> dict:
        return {"kind": "gf", "p": self.p, "r": self.r}

    def addition_shift(self, alpha: int) -> np.ndarray:
        if self._digits is None:
            idx = np.arange(self.order, dtype=np.int64)
            self._digits = (idx[:, None] // self._powers[None, :]) % self.p
        shifted = (self._digits + self._digits[alpha]) % self.p
        return shifted @ self._powers

    def additive_order(self, x: int) -> int:
        return 1 if x == 0 else self.p

    def _key(self) -> tuple:
        return ("gf", self.p, self.r)


class ProductRing(Ring):
    """A finite direct product of rings, operating componentwise."""

    kind = "product"

    def __init__(self, factors: Sequence[Ring]):
        if not factors:
            raise DomainError("a product ring needs at least one factor")
        order = 1
        for f in factors:
            order *= f.order
        if order > max_order():
            raise DomainError(f"ring order {order} exceeds the desk-scale cap {max_order()}")
        self.factors = tuple(factors)
        self.order = order
        lcm = 1
        for f in factors:
            lcm = lcm * f.characteristic // gcd(lcm, f.characteristic)
        self.characteristic = lcm
        self._components: list[np.ndarray] | None = None

    def split(self, index: int) -> tuple[int, ...]:
        out = []
        for f in self.factors:
            index, c = divmod(index, f.order)
            out.append(c)
        return tuple(out)

    def join(self, components: Sequence[int]) -> int:
        idx = 0
        for f, c in zip(reversed(self.factors), reversed(list(components))):
            idx = idx * f.order + c
        return idx

    def add(self, x: int, y: int) -> int:
        return self.join(
            [f.add(a, b) for f, a, b in zip(self.factors, self.split(x), self.split(y))]
        )

    def neg(self, x: int) -> int:
        return self.join([f.neg(a) for f, a in zip(self.factors, self.split(x))])

    def mul(self, x: int, y: int) -> int:
        return self.join(
            [f.mul(a, b) for f, a, b in zip(self.factors, self.split(x), self.split(y))]
        )

    def is_unit(self, x: int) -> bool:
        return all(f.is_unit(a) for f, a in zip(self.factors, self.split(x)))

    @property
    def one(self) -> int:
        return self.join([f.one for f in self.factors])

    def structured(self, index: int) -> tuple:
        return tuple(f.structured(c) for f, c in zip(self.factors, self.split(index)))

    def index_of(self, structured: Sequence) -> int:
        return self.join([f.index_of(s) for f, s in zip(self.factors, structured)])

    def descriptor(self) -> dict:
        return {"kind": "product", "factors": [f.descriptor() for f in self.factors]}

    def addition_shift(self, alpha: int) -> np.ndarray:
        if self._components is None:
            idx = np.arange(self.order, dtype=np.int64)
            comps = []
            radix = 1
            for f in self.factors:
                comps.append((idx // radix) % f.order)
                radix *= f.order
            self._components = comps
        parts = self.split(alpha)
        total = np.zeros(self.order, dtype=np.int64)
        radix = 1
        for f, comp, a in zip(self.factors, self._components, parts):
            total += f.addition_shift(a)[comp] * radix
            radix *= f.order
        return total

    def additive_order(self, x: int) -> int:
        lcm = 1
        for f, c in zip(self.factors, self.split(x)):
            o = f.additive_order(c)
            lcm = lcm * o // gcd(lcm, o)
        return lcm

    def _key(self) -> tuple:
        return ("product", tuple(f._key() for f in self.factors))


def make_ring(descriptor: Mapping[str, Any]) -> Ring:
    """Build a ring from its JSON descriptor.

    Accepted forms: {"kind": "zn", "n": 11}, {"kind": "gf", "p": 3, "r": 2},
    {"kind": "product", "factors": [...]}. A GF modulus is re-derived
    deterministically and never read from the descriptor.
    """
    if not isinstance(descriptor, Mapping):
        raise DomainError(f"ring descriptor must be a mapping, got {type(descriptor).__name__}")
    kind = descriptor.get("kind")
    if kind == "zn":
        return ZnRing(int(descriptor["n"]))
    if kind == "gf":
        return GFRing(int(descriptor["p"]), int(descriptor["r"]))
    if kind == "product":
        factors = descriptor.get("factors")
        if not isinstance(factors, Sequence) or isinstance(factors, (str, bytes)):
            raise DomainError("product descriptor needs a list of factors")
        return ProductRing([make_ring(f) for f in factors])
    raise DomainError(f"unknown ring kind {kind!r}")


def ring_arith(ring: Ring, op: str, x: int, y: int | None = None):
    """Checked scalar arithmetic: op in {add, neg, mul, is_unit}."""
    operands = (x,) if y is None else (x, y)
    for v in operands:
        if not 0 <= v < ring.order:
            raise DomainError(f"element index {v} out of range for order {ring.order}")
    if op == "add":
        return ring.add(x, y)
    if op == "neg":
        return ring.neg(x)
    if op == "mul":
        return ring.mul(x, y)
    if op == "is_unit":
        return ring.is_unit(x)
    raise DomainError(f"unknown ring operation {op!r}")


@dataclass(frozen=True)
class Subgroup:
    """A multiplicative subgroup, listed in generation order."""

    elements: tuple[int, ...]
    generators: tuple[int, ...] = ()

    @property
    def k(self) -> int:
        return len(self.elements)


def multiplicative_order(ring: Ring, x: int, cap: int | None = None) -> int | None:
    """Exact multiplicative order of a unit, or None if it exceeds cap."""
    if not ring.is_unit(x):
        return None
    limit = cap if cap is not None else ring.order
    acc = x
    k = 1
    one = ring.one
    while acc != one:
        acc = ring.mul(acc, x)
        k += 1
        if k > limit:
            return None
    return k


def _cyclic_subgroup(ring: Ring, g: int, e: int) -> Subgroup:
    elems = [ring.one]
    acc = g
    while acc != ring.one:
        elems.append(acc)
        acc = ring.mul(acc, g)
    if len(elems) != e:
        raise InternalCheckError(f"generator produced order {len(elems)}, expected {e}")
    return Subgroup(tuple(elems), (g,))


def _smallest_of_order(ring: Ring, e: int) -> int | None:
    for x in range(1, ring.order):
        if multiplicative_order(ring, x, cap=e) == e:
            return x
    return None


def find_order_e_subgroup(ring: Ring, e: int) -> Subgroup:
    """Deterministic order-e subgroup of the unit group.

    For Z_n and GF the generator is the unit of smallest canonical index
    whose multiplicative order is exactly e. For a product ring the
    generator combines, per factor, the smallest element of exact order
    e; any nontrivial power then has every component different from 1,
    which makes the unit-difference condition automatic when the factors
    are fields.
    """
    if e < 1:
        raise DomainError(f"subgroup order must be positive, got {e}")
    if isinstance(ring, ProductRing):
        parts = []
        for f in ring.factors:
            g = _smallest_of_order(f, e)
            if g is None:
                raise DomainError(
                    f"no element of multiplicative order {e} in factor of order {f.order}"
                )
            parts.append(g)
        return _cyclic_subgroup(ring, ring.join(parts), e)
    g = _smallest_of_order(ring, e)
    if g is None:
        raise DomainError(f"no element of multiplicative order {e} in ring of order {ring.order}")
    return _cyclic_subgroup(ring, g, e)


def check_unit_difference(ring: Ring, group: Subgroup) -> bool:
    """True iff g - 1 is a unit for every g in the subgroup except 1."""
    one = ring.one
    return all(ring.is_unit(ring.sub(g, one)) for g in group.elements if g != one)


def contains_minus_one(ring: Ring, group: Subgroup) -> bool:
    """Whether -1 belongs to the subgroup.

    Under the unit-difference condition this must coincide with
    "the order is even or the characteristic is 2"; a mismatch would be
    a bug, not a property of the input.
    """
    member = ring.neg(ring.one) in set(group.elements)
    if check_unit_difference(ring, group):
        expected = group.k % 2 == 0 or ring.characteristic == 2
        if member != expected:
            raise InternalCheckError(
                f"-1 membership ({member}) contradicts the parity test "
                f"(k={group.k}, characteristic {ring.characteristic})"
            )
    return member


def subgroup_closure_ok(ring: Ring, group: Subgroup) -> bool:
    """Exhaustive check that the element set is a unit subgroup."""
    elems = set(group.elements)
    if ring.one not in elems:
        return False
    if not all(ring.is_unit(x) for x in elems):
        return False
    return all(ring.mul(a, b) in elems for a in elems for b in elems)


def elements(ring: Ring) -> Iterable[int]:
    return range(ring.order)
