"""Dense matrices over GF(q) and exhaustively enumerated matrix groups.

Matrix entries are field codes (see ``ff.field_tables``) stored row-major; the
byte string of the entries is the canonical encoding used as hash key.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Iterable

import numpy as np

from errors import CapExceeded, ConfigError, InternalAssertion, NotASubgroup, NotInvertible
from ff import (
    FieldElem,
    FieldSpec,
    FieldTables,
    ff_from_code,
    field_tables,
    poly_deriv,
    poly_gcd,
    poly_trim,
    primitive_element,
    subfield_basis,
)

log = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 20_000
DEFAULT_ENUM_CAP = 250_000
# closure and inverse-closure are re-checked exhaustively up to this order
EXHAUSTIVE_CHECK_LIMIT = 10_000


@dataclass(frozen=True)
class Mat:
    n: int
    spec: FieldSpec
    entries: tuple[int, ...]

    @property
    def key(self) -> bytes:
        return bytes(self.entries)

    def entry(self, i: int, j: int) -> FieldElem:
        return ff_from_code(self.spec, self.entries[i * self.n + j])

    def to_rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self.to_rows()) + "]"


def mat_from_rows(spec: FieldSpec, rows) -> Mat:
    """Rows of ints (field codes; plain residues mod p over a prime field) or FieldElems."""
    n = len(rows)
    entries: list[int] = []
    for row in rows:
        if len(row) != n:
            raise ConfigError("Matrix must be square")
        for v in row:
            if isinstance(v, FieldElem):
                if v.spec != spec:
                    raise ConfigError(f"Entry from {v.spec}, expected {spec}")
                entries.append(v.code)
            elif spec.k == 1:
                entries.append(int(v) % spec.p)
            else:
                if not 0 <= int(v) < spec.q:
                    raise ConfigError(f"Code {v} outside {spec}")
                entries.append(int(v))
    return Mat(n, spec, tuple(entries))


def mat_identity(n: int, spec: FieldSpec) -> Mat:
    return Mat(n, spec, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def mat_scalar(n: int, spec: FieldSpec, code: int) -> Mat:
    return Mat(n, spec, tuple(code if i == j else 0 for i in range(n) for j in range(n)))


def mat_transpose(a: Mat) -> Mat:
    n = a.n
    return Mat(n, a.spec, tuple(a.entries[j * n + i] for i in range(n) for j in range(n)))


def _matmul_codes(n: int, a, b, add, mul) -> list[int]:
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            acc = 0
            for t in range(n):
                acc = add[acc][mul[row[t]][b[t * n + j]]]
            out.append(acc)
    return out


def _check_compatible(a: Mat, b: Mat) -> None:
    if a.n != b.n:
        raise ConfigError(f"Dimension mismatch: {a.n} vs {b.n}")
    if a.spec != b.spec:
        raise ConfigError(f"Field mismatch: {a.spec} vs {b.spec}")


def mat_mul(a: Mat, b: Mat) -> Mat:
    _check_compatible(a, b)
    t = field_tables(a.spec)
    return Mat(a.n, a.spec, tuple(_matmul_codes(a.n, a.entries, b.entries, t.add, t.mul)))


def _det_codes(n: int, entries, t: FieldTables) -> int:
    add, mul, neg, inv = t.add, t.mul, t.neg, t.inv
    if n == 1:
        return entries[0]
    if n == 2:
        a, b, c, d = entries
        return add[mul[a][d]][neg[mul[b][c]]]
    m = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = neg[det]
        det = mul[det][m[col][col]]
        pinv = inv[m[col][col]]
        for r in range(col + 1, n):
            f = mul[m[r][col]][pinv]
            if f:
                nf = neg[f]
                m[r] = [add[x][mul[nf][y]] for x, y in zip(m[r], m[col])]
    return det


def mat_det(a: Mat) -> FieldElem:
    return ff_from_code(a.spec, _det_codes(a.n, a.entries, field_tables(a.spec)))


def mat_inv(a: Mat) -> Mat:
    """Gauss-Jordan elimination over GF(q)."""
    n = a.n
    t = field_tables(a.spec)
    add, mul, neg, inv = t.add, t.mul, t.neg, t.inv
    m = [list(a.entries[i * n:(i + 1) * n]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            raise NotInvertible(f"Singular matrix {a}")
        m[col], m[pivot] = m[pivot], m[col]
        pinv = inv[m[col][col]]
        m[col] = [mul[pinv][x] for x in m[col]]
        for r in range(n):
            f = m[r][col]
            if r != col and f:
                nf = neg[f]
                m[r] = [add[x][mul[nf][y]] for x, y in zip(m[r], m[col])]
    return Mat(n, a.spec, tuple(x for row in m for x in row[n:]))


def min_poly(a: Mat) -> tuple[int, ...]:
    """Monic minimal polynomial as field codes, low degree first.

    Found as the first linear dependence among I, a, a^2, ... by incremental
    elimination; each basis vector carries its expression in powers of ``a``.
    """
    t = field_tables(a.spec)
    add, mul, neg, inv = t.add, t.mul, t.neg, t.inv
    basis: list[tuple[int, list[int], list[int]]] = []
    power = mat_identity(a.n, a.spec).entries
    degree = 0
    while True:
        v = list(power)
        expr = [0] * degree + [1]
        for piv, bv, be in basis:
            c = v[piv]
            if c:
                nc = neg[c]
                v = [add[x][mul[nc][y]] for x, y in zip(v, bv)]
                for i, y in enumerate(be):
                    expr[i] = add[expr[i]][mul[nc][y]]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return poly_trim(expr)
        s = inv[v[piv]]
        basis.append((piv, [mul[s][x] for x in v], [mul[s][x] for x in expr]))
        power = _matmul_codes(a.n, power, a.entries, add, mul)
        degree += 1


def is_semisimple(a: Mat) -> bool:
    """Squarefree minimal polynomial; over a perfect field this is diagonalizability over the closure."""
    t = field_tables(a.spec)
    m = min_poly(a)
    return poly_gcd(m, poly_deriv(m, t), t) == (1,)


def gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


# ─── Groups ─────────────────────────────────────────────────────────────

class GroupTable:
    """An exhaustively enumerated matrix group with element -> index lookup.

    Published tables are never mutated; cached properties only memoise derived data.
    """

    def __init__(
        self,
        elems: list[Mat],
        *,
        generators: Iterable[int] = (),
        parent_indices: tuple[int, ...] | None = None,
        name: str = "",
    ):
        if not elems:
            raise InternalAssertion("A group has at least the identity")
        self.n = elems[0].n
        self.spec = elems[0].spec
        self.elems = elems
        self.codes = [m.entries for m in elems]
        self.index = {m.key: i for i, m in enumerate(elems)}
        if len(self.index) != len(elems):
            raise InternalAssertion(f"Duplicate elements in group {name!r}")
        identity = mat_identity(self.n, self.spec)
        if identity.key not in self.index:
            raise NotASubgroup(f"Identity missing from {name!r}")
        self.identity_index = self.index[identity.key]
        self.generators = tuple(generators)
        self.parent_indices = parent_indices
        self.name = name
        tables = field_tables(self.spec)
        self._add = tables.add
        self._mul = tables.mul

    def __len__(self) -> int:
        return len(self.elems)

    @property
    def order(self) -> int:
        return len(self.elems)

    def __repr__(self) -> str:
        return f"GroupTable({self.name or 'G'}, order={self.order}, {self.spec}, n={self.n})"

    def find(self, a: Mat) -> int | None:
        return self.index.get(a.key)

    def index_of(self, a: Mat) -> int:
        idx = self.index.get(a.key)
        if idx is None:
            raise NotASubgroup(f"{a} is not an element of {self!r}")
        return idx

    def product_key(self, i: int, j: int) -> bytes:
        return bytes(_matmul_codes(self.n, self.codes[i], self.codes[j], self._add, self._mul))

    def mul(self, i: int, j: int) -> int:
        idx = self.index.get(self.product_key(i, j))
        if idx is None:
            raise NotASubgroup(f"{self!r} is not closed under multiplication")
        return idx

    def mul_mat(self, i: int, a: Mat) -> int:
        """Index of elems[i] * a."""
        return self.index_of(Mat(self.n, self.spec, tuple(_matmul_codes(self.n, self.codes[i], a.entries, self._add, self._mul))))

    @cached_property
    def _batch(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None:
        """numpy tables for mul_many: codes, add, mul, place weights, sorted keys and their element indices."""
        q, size = self.spec.q, self.n * self.n
        if q**size >= 2**62:
            return None
        codes = np.asarray(self.codes, dtype=np.int64).reshape(self.order, size)
        weights = q ** np.arange(size, dtype=np.int64)
        keys = codes @ weights
        order = np.argsort(keys, kind="stable")
        return (codes, np.asarray(self._add, dtype=np.int64), np.asarray(self._mul, dtype=np.int64),
                weights, keys[order], order)

    def mul_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise indices of elems[a[t]] * elems[b[t]]; -1 where the product is not in the table."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._batch is None:
            return np.array([self.index.get(self.product_key(i, j), -1) for i, j in zip(a.tolist(), b.tolist())],
                            dtype=np.int64)
        codes, add, mul, weights, sorted_keys, order = self._batch
        n = self.n
        A, B = codes[a], codes[b]
        key = np.zeros(len(a), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                acc = np.zeros(len(a), dtype=np.int64)
                for t in range(n):
                    acc = add[acc, mul[A[:, i * n + t], B[:, t * n + j]]]
                key += acc * weights[i * n + j]
        pos = np.minimum(np.searchsorted(sorted_keys, key), len(sorted_keys) - 1)
        return np.where(sorted_keys[pos] == key, order[pos], -1)

    @cached_property
    def inverses(self) -> np.ndarray:
        out = np.empty(self.order, dtype=np.int64)
        for i, m in enumerate(self.elems):
            out[i] = self.index_of(mat_inv(m))
        return out

    def inverse(self, i: int) -> int:
        return int(self.inverses[i])

    def conjugate(self, c: int, x: int) -> int:
        """Index of c x c^-1."""
        return self.mul(self.mul(c, x), self.inverse(c))


def element_order(G: GroupTable, i: int) -> int:
    order, acc = 1, i
    while acc != G.identity_index:
        acc = G.mul(acc, i)
        order += 1
    return order


def verify_group(G: GroupTable, limit: int = EXHAUSTIVE_CHECK_LIMIT, batch: int = 1 << 18) -> bool:
    """Exhaustive closure and inverse-closure check for |G| <= limit (else skipped, returns True)."""
    if G.order > limit:
        log.debug("Skipping exhaustive closure check for %r", G)
        return True
    G.inverses  # raises NotASubgroup on a missing inverse
    rows = max(1, batch // G.order)
    cols = np.arange(G.order, dtype=np.int64)
    for start in range(0, G.order, rows):
        left = np.arange(start, min(start + rows, G.order), dtype=np.int64)
        products = G.mul_many(np.repeat(left, G.order), np.tile(cols, len(left)))
        if np.any(products < 0):
            raise NotASubgroup(f"{G!r} is not closed under multiplication")
    return True


def _check_generators(gens: list[Mat]) -> tuple[int, FieldSpec]:
    if not gens:
        raise ConfigError("At least one generator is required")
    n, spec = gens[0].n, gens[0].spec
    for g in gens:
        if g.n != n or g.spec != spec:
            raise ConfigError("Generators must share dimension and field")
        if _det_codes(n, g.entries, field_tables(spec)) == 0:
            raise NotInvertible(f"Generator {g} is singular")
    return n, spec


def group_generate(gens: list[Mat], cap: int = DEFAULT_GROUP_CAP, name: str = "") -> GroupTable:
    """Breadth-first closure from the identity, generators applied in list order."""
    n, spec = _check_generators(gens)
    t = field_tables(spec)
    identity = mat_identity(n, spec)
    seen = {identity.key: 0}
    elems = [identity]
    queue = deque([identity])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = Mat(n, spec, tuple(_matmul_codes(n, cur.entries, g.entries, t.add, t.mul)))
            if nxt.key not in seen:
                if len(elems) >= cap:
                    raise CapExceeded(f"group {name or 'generated'}", len(elems) + 1, cap)
                seen[nxt.key] = len(elems)
                elems.append(nxt)
                queue.append(nxt)
    gen_idx = [seen[g.key] for g in gens]
    log.debug("Generated group %s of order %d", name, len(elems))
    return GroupTable(elems, generators=gen_idx, name=name)


def gl_generators(n: int, spec: FieldSpec) -> list[Mat]:
    """diag(w, 1, ..., 1) with w primitive, and transvections I + c E_ij over an F_p-basis c."""
    w = primitive_element(spec)
    gens = [Mat(n, spec, tuple((w if i == 0 else 1) if i == j else 0 for i in range(n) for j in range(n)))]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in subfield_basis(spec):
                entries = list(mat_identity(n, spec).entries)
                entries[i * n + j] = c
                gens.append(Mat(n, spec, tuple(entries)))
    return gens


def enumerate_gl(
    n: int,
    spec: FieldSpec,
    cap: int = DEFAULT_ENUM_CAP,
    group_cap: int = DEFAULT_GROUP_CAP,
) -> GroupTable:
    """All invertible n x n matrices: identity first, then increasing entry-code order."""
    q = spec.q
    if q ** (n * n) > cap:
        raise CapExceeded(f"matrix space {q}^{n * n}", q ** (n * n), cap)
    expected = gl_order(n, q)
    if expected > group_cap:
        raise CapExceeded(f"GL_{n}({spec})", expected, group_cap)

    t = field_tables(spec)
    identity = mat_identity(n, spec)
    elems = [identity]
    for entries in product(range(q), repeat=n * n):
        if entries != identity.entries and _det_codes(n, entries, t) != 0:
            elems.append(Mat(n, spec, entries))
    if len(elems) != expected:
        raise InternalAssertion(f"GL_{n}({spec}) enumerated {len(elems)} elements, expected {expected}")

    G = GroupTable(elems, name=f"GL_{n}({spec})")
    G.generators = tuple(G.index_of(g) for g in gl_generators(n, spec))
    log.info("Enumerated %r", G)
    return G


def subgroup_where(G: GroupTable, pred: Callable[[Mat], bool], name: str = "") -> GroupTable:
    """Elements of G satisfying pred, verified to form a subgroup.

    Closure is proved by growing a generating set greedily: every selected element
    must lie in the subgroup generated by earlier picks or become a new generator,
    and every generated element must satisfy pred.
    """
    picked = [i for i, m in enumerate(G.elems) if pred(m)]
    if G.identity_index not in picked:
        raise NotASubgroup(f"Predicate {name!r} rejects the identity")
    chosen = set(picked)

    gens: list[int] = []
    span = {G.identity_index}
    for idx in picked:
        if idx in span:
            continue
        gens.append(idx)
        span = {G.identity_index}
        queue = deque([G.identity_index])
        while queue:
            cur = queue.popleft()
            for g in gens:
                nxt = G.mul(cur, g)
                if nxt not in span:
                    if nxt not in chosen:
                        raise NotASubgroup(f"Predicate {name!r} does not cut out a subgroup of {G!r}")
                    span.add(nxt)
                    queue.append(nxt)
    if len(span) != len(picked):
        raise InternalAssertion("Subgroup generation did not reach every selected element")

    H = GroupTable([G.elems[i] for i in picked], parent_indices=tuple(picked), name=name)
    H.generators = tuple(H.index[G.elems[g].key] for g in gens)
    return H


# ─── Conjugacy classes ──────────────────────────────────────────────────

@dataclass(frozen=True)
class ConjClass:
    rep: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class ClassData:
    group: GroupTable
    classes: tuple[ConjClass, ...]
    class_of: np.ndarray
    inverse_map: tuple[int, ...]
    exponent: int

    @property
    def r(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.classes]


def conjugacy_classes(G: GroupTable) -> ClassData:
    """Mark-and-expand orbit sweep under conjugation.

    Conjugators are the recorded generators when present (their closure is the
    whole group), otherwise every element.
    """
    conjugators = list(G.generators) or list(range(G.order))
    class_of = np.full(G.order, -1, dtype=np.int64)
    classes: list[ConjClass] = []
    for seed in range(G.order):
        if class_of[seed] >= 0:
            continue
        cid = len(classes)
        class_of[seed] = cid
        members = [seed]
        queue = deque([seed])
        while queue:
            x = queue.popleft()
            for c in conjugators:
                y = G.conjugate(c, x)
                if class_of[y] < 0:
                    class_of[y] = cid
                    members.append(y)
                    queue.append(y)
        classes.append(ConjClass(rep=seed, members=tuple(sorted(members))))

    inverse_map = tuple(int(class_of[G.inverse(c.rep)]) for c in classes)
    exponent = math.lcm(*(element_order(G, c.rep) for c in classes))
    log.debug("%r has %d conjugacy classes, exponent %d", G, len(classes), exponent)
    return ClassData(G, tuple(classes), class_of, inverse_map, exponent)
