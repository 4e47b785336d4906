"""Exact arithmetic in GF(p^k).

Elements are polynomial residues modulo a fixed monic irreducible modulus.
Every element also has an integer *code* ``sum(c_i * p**i)``; code order is the
enumeration order (0, 1, 2, ..., x, ...), and ``field_tables`` precomputes the
add/mul tables over codes that the matrix layer runs on.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from sympy import factorint, isprime

from errors import CapExceeded, FieldError

log = logging.getLogger(__name__)

DEFAULT_FIELD_CAP = 121


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]  # monic, low degree first, length k + 1

    @property
    def q(self) -> int:
        return self.p**self.k

    def __str__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@dataclass(frozen=True)
class FieldElem:
    spec: FieldSpec
    coeffs: tuple[int, ...]  # length k, low degree first, each in [0, p)

    @property
    def code(self) -> int:
        return ff_code(self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        if self.spec.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"


# ─── Polynomials over the prime field (modulus search) ──────────────────

def _rem_modp(a: list[int], b: tuple[int, ...], p: int) -> list[int]:
    """Remainder of a by monic b over GF(p); both low degree first."""
    a = [c % p for c in a]
    db = len(b) - 1
    for d in range(len(a) - 1, db - 1, -1):
        c = a[d]
        if c:
            for t in range(db + 1):
                a[d - db + t] = (a[d - db + t] - c * b[t]) % p
    return a[:db]


def _monic_polys(p: int, degree: int):
    """Monic polynomials of the given degree, ordered by the code of their lower coefficients."""
    for code in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(p: int, poly: tuple[int, ...]) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    degree = len(poly) - 1
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not any(_rem_modp(list(poly), divisor, p)):
                return False
    return True


@lru_cache(maxsize=None)
def ff_make(p: int, k: int) -> FieldSpec:
    if not isinstance(k, int) or k < 1:
        raise FieldError(f"Extension degree must be a positive integer, got {k!r}")
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"Characteristic must be prime, got {p!r}")

    for modulus in _monic_polys(p, k):
        if k == 1 or is_irreducible(p, modulus):
            spec = FieldSpec(p=p, k=k, modulus=modulus)
            log.debug("Field %s uses modulus %s", spec, modulus)
            return spec
    raise FieldError(f"No irreducible polynomial of degree {k} over GF({p})")


# ─── Element arithmetic ──────────────────────────────────────────────────

def ff_elem(spec: FieldSpec, coeffs) -> FieldElem:
    """Build an element from any-length coefficients (low degree first), reducing by the modulus."""
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) < spec.k:
        coeffs += [0] * (spec.k - len(coeffs))
    reduced = _rem_modp(coeffs, spec.modulus, spec.p) if len(coeffs) > spec.k else [c % spec.p for c in coeffs]
    return FieldElem(spec, tuple(reduced))


def ff_from_int(spec: FieldSpec, n: int) -> FieldElem:
    return ff_elem(spec, [n])


def ff_code(a: FieldElem) -> int:
    code = 0
    for c in reversed(a.coeffs):
        code = code * a.spec.p + c
    return code


def ff_from_code(spec: FieldSpec, code: int) -> FieldElem:
    if not 0 <= code < spec.q:
        raise FieldError(f"Code {code} outside {spec}")
    coeffs = []
    for _ in range(spec.k):
        coeffs.append(code % spec.p)
        code //= spec.p
    return FieldElem(spec, tuple(coeffs))


def _same_field(a: FieldElem, b: FieldElem) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldError(f"Field mismatch: {a.spec} vs {b.spec}")
    return a.spec


def ff_add(a: FieldElem, b: FieldElem) -> FieldElem:
    spec = _same_field(a, b)
    return FieldElem(spec, tuple((x + y) % spec.p for x, y in zip(a.coeffs, b.coeffs)))


def ff_neg(a: FieldElem) -> FieldElem:
    return FieldElem(a.spec, tuple((-x) % a.spec.p for x in a.coeffs))


def ff_sub(a: FieldElem, b: FieldElem) -> FieldElem:
    return ff_add(a, ff_neg(b))


def ff_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    spec = _same_field(a, b)
    prod = [0] * (2 * spec.k - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    return ff_elem(spec, prod)


def ff_pow(a: FieldElem, e: int) -> FieldElem:
    if e < 0:
        return ff_pow(ff_inv(a), -e)
    result = ff_from_int(a.spec, 1)
    base = a
    while e:
        if e & 1:
            result = ff_mul(result, base)
        base = ff_mul(base, base)
        e >>= 1
    return result


def ff_inv(a: FieldElem) -> FieldElem:
    if a.is_zero():
        raise FieldError("Zero has no multiplicative inverse")
    return ff_pow(a, a.spec.q - 2)


def ff_frobenius(a: FieldElem) -> FieldElem:
    return ff_pow(a, a.spec.p)


def ff_enumerate(spec: FieldSpec, cap: int = DEFAULT_FIELD_CAP) -> list[FieldElem]:
    if spec.q > cap:
        raise CapExceeded(f"field {spec}", spec.q, cap)
    return [ff_from_code(spec, c) for c in range(spec.q)]


# ─── Code tables ────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FieldTables:
    """Arithmetic on codes. ``inv[0]`` is -1."""
    spec: FieldSpec
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]
    frob: tuple[int, ...]


@lru_cache(maxsize=None)
def field_tables(spec: FieldSpec) -> FieldTables:
    elems = ff_enumerate(spec, cap=max(spec.q, DEFAULT_FIELD_CAP))
    add = tuple(tuple(ff_code(ff_add(a, b)) for b in elems) for a in elems)
    mul = tuple(tuple(ff_code(ff_mul(a, b)) for b in elems) for a in elems)
    neg = tuple(ff_code(ff_neg(a)) for a in elems)
    inv = [-1] * spec.q
    for a in range(1, spec.q):
        for b in range(1, spec.q):
            if mul[a][b] == 1:
                inv[a] = b
                break
    frob = tuple(ff_code(ff_frobenius(a)) for a in elems)
    return FieldTables(spec, add, mul, neg, tuple(inv), frob)


def multiplicative_order(spec: FieldSpec, code: int) -> int:
    if code == 0:
        raise FieldError("Zero has no multiplicative order")
    mul = field_tables(spec).mul
    order, acc = 1, code
    while acc != 1:
        acc = mul[acc][code]
        order += 1
    return order


@lru_cache(maxsize=None)
def primitive_element(spec: FieldSpec) -> int:
    """Smallest code generating the multiplicative group."""
    for code in range(1, spec.q):
        if multiplicative_order(spec, code) == spec.q - 1:
            return code
    raise FieldError(f"{spec} has no primitive element")  # unreachable for a field


def subfield_basis(spec: FieldSpec) -> list[int]:
    """Codes of 1, x, ..., x^(k-1): an F_p-basis of GF(p^k)."""
    return [spec.p**i for i in range(spec.k)]


# ─── Polynomials over GF(q), coefficients as codes ──────────────────────

def poly_trim(a) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_divmod(a, b, t: FieldTables) -> tuple[tuple[int, ...], tuple[int, ...]]:
    a, b = list(poly_trim(a)), poly_trim(b)
    if not b:
        raise FieldError("Polynomial division by zero")
    db = len(b) - 1
    lead_inv = t.inv[b[-1]]
    quot = [0] * max(len(a) - db, 0)
    for d in range(len(a) - 1, db - 1, -1):
        c = t.mul[a[d]][lead_inv]
        if c:
            quot[d - db] = c
            for i in range(db + 1):
                a[d - db + i] = t.add[a[d - db + i]][t.neg[t.mul[c][b[i]]]]
    return poly_trim(quot), poly_trim(a[:db])


def poly_monic(a, t: FieldTables) -> tuple[int, ...]:
    a = poly_trim(a)
    if not a:
        return a
    s = t.inv[a[-1]]
    return tuple(t.mul[c][s] for c in a)


def poly_gcd(a, b, t: FieldTables) -> tuple[int, ...]:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b, t)[1]
    return poly_monic(a, t)


def poly_deriv(a, t: FieldTables) -> tuple[int, ...]:
    p = t.spec.p
    return poly_trim(t.mul[c][i % p] for i, c in enumerate(a) if i > 0)


def ff_make_order(q: int) -> FieldSpec:
    """The field with q elements; q must be a prime power."""
    if not isinstance(q, int) or q < 2:
        raise FieldError(f"Field order must be an integer >= 2, got {q!r}")
    factors = factorint(q)
    if len(factors) != 1:
        raise FieldError(f"Field order must be a prime power, got {q}")
    (p, k), = factors.items()
    return ff_make(int(p), int(k))
