"""Involutions of GL_n, the anti-involution sigma and symmetric pairs over finite fields.

Pair ids understood by ``parse_pair_id``::

    gl-torus(a,b)        theta = conjugation by diag(1_a, -1_b), H = GL_a x GL_b
    gl-orthogonal[(n)]   theta(g) = (g^T)^-1,                    H = O_n
    gl-symplectic[(n)]   theta(g) = J (g^T)^-1 J^-1, n even,     H = Sp_n
    gl-galois[(n)]       entrywise Frobenius on GL_n(F_{q^2}),   H = GL_n(F_q)

n defaults to 2.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from errors import ConfigError, InternalAssertion, NotASubgroup
from ff import ff_make, ff_make_order, field_tables
from matgrp import (
    DEFAULT_ENUM_CAP,
    DEFAULT_GROUP_CAP,
    GroupTable,
    Mat,
    enumerate_gl,
    mat_inv,
    mat_mul,
    mat_transpose,
    subgroup_where,
)

log = logging.getLogger(__name__)

TRANSPOSE_INVERSE = "transpose-inverse"
INNER_DIAG = "inner-diag"
SYMPLECTIC_TWIST = "symplectic-twist"
GALOIS_TWIST = "galois-twist"
KINDS = (TRANSPOSE_INVERSE, INNER_DIAG, SYMPLECTIC_TWIST, GALOIS_TWIST)

EXHAUSTIVE_LIMIT = 5000
SAMPLED_CHECKS = 100_000


@dataclass(frozen=True)
class InvolutionSpec:
    kind: str
    n: int
    a: int = 0  # inner-diag split, n = a + b
    b: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown involution kind {self.kind!r}")
        if self.n < 1:
            raise ConfigError(f"Dimension must be positive, got {self.n}")
        if self.kind == INNER_DIAG and (self.a < 1 or self.b < 1 or self.a + self.b != self.n):
            raise ConfigError(f"inner-diag needs a, b >= 1 with a + b = n, got ({self.a},{self.b}) for n={self.n}")
        if self.kind == SYMPLECTIC_TWIST and self.n % 2:
            raise ConfigError(f"symplectic-twist needs even n, got {self.n}")


def _check_dim(spec: InvolutionSpec, g: Mat) -> None:
    if g.n != spec.n:
        raise ConfigError(f"{spec.kind} is defined on {spec.n}x{spec.n} matrices, got {g.n}x{g.n}")
    if spec.kind == GALOIS_TWIST and g.spec.k % 2:
        raise ConfigError(f"galois-twist needs a quadratic extension field, got {g.spec}")


def _symplectic_form(n: int, g: Mat) -> Mat:
    m = n // 2
    minus_one = field_tables(g.spec).neg[1]
    entries = [0] * (n * n)
    for i in range(m):
        entries[i * n + (m + i)] = 1
        entries[(m + i) * n + i] = minus_one
    return Mat(n, g.spec, tuple(entries))


def theta_apply(spec: InvolutionSpec, g: Mat) -> Mat:
    _check_dim(spec, g)
    n = g.n
    if spec.kind == TRANSPOSE_INVERSE:
        return mat_inv(mat_transpose(g))
    if spec.kind == INNER_DIAG:
        # s g s^-1 with s = diag(1_a, -1_b) negates the off-diagonal blocks
        neg = field_tables(g.spec).neg
        a = spec.a
        return Mat(n, g.spec, tuple(
            neg[x] if (k // n < a) != (k % n < a) else x for k, x in enumerate(g.entries)
        ))
    if spec.kind == SYMPLECTIC_TWIST:
        j = _symplectic_form(n, g)
        return mat_mul(mat_mul(j, mat_inv(mat_transpose(g))), mat_inv(j))
    # galois-twist: x -> x^q on GF(q^2), i.e. the p-Frobenius applied k times
    frob = field_tables(g.spec).frob
    entries = g.entries
    for _ in range(g.spec.k // 2):
        entries = tuple(frob[x] for x in entries)
    return Mat(n, g.spec, entries)


def sigma_apply(spec: InvolutionSpec, g: Mat) -> Mat:
    """sigma(g) = theta(g^-1); an anti-automorphism of order 2."""
    if spec.kind == TRANSPOSE_INVERSE:
        _check_dim(spec, g)
        return mat_transpose(g)
    return theta_apply(spec, mat_inv(g))


def symmetrize(spec: InvolutionSpec, g: Mat) -> Mat:
    """s(g) = g sigma(g), which lands in the sigma-fixed locus."""
    return mat_mul(g, sigma_apply(spec, g))


# ─── Catalog ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CatalogEntry:
    pair_id: str
    kind: str
    description: str
    trusted: bool  # stabilizers of semisimple elements known to be connected

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "kind": self.kind,
            "description": self.description,
            "trusted": self.trusted,
        }


_DESCRIPTIONS = {
    INNER_DIAG: "GL_n, theta = conjugation by diag(1_a, -1_b); H = GL_a x GL_b",
    TRANSPOSE_INVERSE: "GL_n, theta(g) = (g^T)^-1; H = O_n",
    SYMPLECTIC_TWIST: "GL_n (n even), theta(g) = J (g^T)^-1 J^-1; H = Sp_n",
    GALOIS_TWIST: "GL_n(F_q^2), theta = entrywise Frobenius; H = GL_n(F_q)",
}


def catalog() -> list[CatalogEntry]:
    """Stable, ordered listing of the built-in pairs."""
    ids = ["gl-torus(1,1)", "gl-torus(1,2)", "gl-orthogonal", "gl-symplectic", "gl-galois"]
    out = []
    for pair_id in ids:
        spec = parse_pair_id(pair_id)
        out.append(CatalogEntry(pair_id, spec.kind, _DESCRIPTIONS[spec.kind], is_trusted(spec)))
    return out


def is_trusted(spec: InvolutionSpec) -> bool:
    return spec.kind == INNER_DIAG


_TORUS_RE = re.compile(r"^gl-torus\((\d+),(\d+)\)$")
_NAMED_RE = re.compile(r"^gl-(orthogonal|symplectic|galois)(?:\((\d+)\))?$")
_NAMED_KINDS = {"orthogonal": TRANSPOSE_INVERSE, "symplectic": SYMPLECTIC_TWIST, "galois": GALOIS_TWIST}


def parse_pair_id(pair_id: str) -> InvolutionSpec:
    text = re.sub(r"\s+", "", pair_id or "")
    m = _TORUS_RE.match(text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        return InvolutionSpec(INNER_DIAG, a + b, a, b)
    m = _NAMED_RE.match(text)
    if m:
        n = int(m.group(2)) if m.group(2) else 2
        return InvolutionSpec(_NAMED_KINDS[m.group(1)], n)
    raise ConfigError(f"Unknown pair id {pair_id!r}; try `pairs` for the catalog")


def canonical_pair_id(spec: InvolutionSpec) -> str:
    if spec.kind == INNER_DIAG:
        return f"gl-torus({spec.a},{spec.b})"
    name = {v: k for k, v in _NAMED_KINDS.items()}[spec.kind]
    return f"gl-{name}" if spec.n == 2 else f"gl-{name}({spec.n})"


# ─── Pairs ──────────────────────────────────────────────────────────────

@dataclass(eq=False)
class SymPair:
    pair_id: str
    theta: InvolutionSpec
    q: int
    G: GroupTable
    H: GroupTable
    trusted: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def G_order(self) -> int:
        return self.G.order

    @property
    def H_order(self) -> int:
        return self.H.order

    @property
    def index(self) -> int:
        return self.G.order // self.H.order

    @cached_property
    def h_in_g(self) -> np.ndarray:
        """Positions of H's elements inside G."""
        return np.asarray(self.H.parent_indices, dtype=np.int64)

    @cached_property
    def h_mask(self) -> np.ndarray:
        mask = np.zeros(self.G.order, dtype=bool)
        mask[self.h_in_g] = True
        return mask

    @cached_property
    def sigma(self) -> np.ndarray:
        return np.fromiter(
            (self.G.index_of(sigma_apply(self.theta, m)) for m in self.G.elems),
            dtype=np.int64, count=self.G.order,
        )

    @cached_property
    def symmetrization(self) -> np.ndarray:
        return self.G.mul_many(np.arange(self.G.order, dtype=np.int64), self.sigma)

    def __repr__(self) -> str:
        return f"SymPair({self.pair_id}, q={self.q}, |G|={self.G_order}, |H|={self.H_order})"


def build_pair(
    theta: InvolutionSpec,
    n: int,
    q: int,
    group_cap: int = DEFAULT_GROUP_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> SymPair:
    if n != theta.n:
        raise ConfigError(f"Pair dimension {n} does not match involution dimension {theta.n}")
    base = ff_make_order(q)
    if base.p == 2:
        raise ConfigError(f"Characteristic 2 is not supported (q={q})")
    spec = ff_make(base.p, 2 * base.k) if theta.kind == GALOIS_TWIST else base

    G = enumerate_gl(n, spec, cap=enum_cap, group_cap=group_cap)
    pair_id = canonical_pair_id(theta)
    H = subgroup_where(G, lambda m: theta_apply(theta, m) == m, name=f"H[{pair_id}]")
    if G.order % H.order:
        raise InternalAssertion(f"|H| = {H.order} does not divide |G| = {G.order}")
    log.info("Built %s at q=%d: |G|=%d |H|=%d [G:H]=%d", pair_id, q, G.order, H.order, G.order // H.order)
    return SymPair(pair_id, theta, q, G, H, trusted=is_trusted(theta))


def pair_from_id(
    pair_id: str,
    q: int,
    group_cap: int = DEFAULT_GROUP_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> SymPair:
    theta = parse_pair_id(pair_id)
    return build_pair(theta, theta.n, q, group_cap=group_cap, enum_cap=enum_cap)


def sigma_table(pair: SymPair) -> np.ndarray:
    """sigma as a permutation of G's element indices."""
    return pair.sigma


def symmetrization_table(pair: SymPair) -> np.ndarray:
    return pair.symmetrization


# ─── Checks ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class InvolutionCheck:
    involutive: bool
    automorphism: bool
    anti_automorphism: bool
    fixes_h: bool
    exhaustive: bool
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return self.involutive and self.automorphism and self.anti_automorphism and self.fixes_h


def _pair_batches(order: int, seed: int, limit: int, samples: int, batch: int = 1 << 18):
    """Index arrays (a, b) covering G x G when |G| <= limit, else one seeded sample."""
    if order <= limit:
        rows = max(1, batch // order)
        cols = np.arange(order, dtype=np.int64)

        def exhaustive():
            for start in range(0, order, rows):
                left = np.arange(start, min(start + rows, order), dtype=np.int64)
                yield np.repeat(left, order), np.tile(cols, len(left))

        return exhaustive(), order * order, True
    rng = np.random.default_rng(seed)
    return iter([(rng.integers(0, order, size=samples), rng.integers(0, order, size=samples))]), samples, False


def check_involution(
    pair: SymPair,
    seed: int = 0,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    samples: int = SAMPLED_CHECKS,
) -> InvolutionCheck:
    """theta^2 = id, theta(gh) = theta(g)theta(h), sigma(gh) = sigma(h)sigma(g)."""
    G = pair.G
    sigma = pair.sigma
    inv = G.inverses
    theta = sigma[inv]

    involutive = bool(np.array_equal(theta[theta], np.arange(G.order)))
    fixes_h = bool(np.array_equal(theta[pair.h_in_g], pair.h_in_g))
    auto = anti = True
    batches, count, exhaustive = _pair_batches(G.order, seed, exhaustive_limit, samples)
    for a, b in batches:
        ab = G.mul_many(a, b)
        if np.any(ab < 0):
            raise NotASubgroup(f"{G!r} is not closed under multiplication")
        auto = auto and bool(np.array_equal(theta[ab], G.mul_many(theta[a], theta[b])))
        anti = anti and bool(np.array_equal(sigma[ab], G.mul_many(sigma[b], sigma[a])))
        if not (auto or anti):
            break
    log.debug("Involution check on %r: %d pairs (%s)", G, count, "exhaustive" if exhaustive else "sampled")
    return InvolutionCheck(involutive, auto, anti, fixes_h, exhaustive, count)


def symmetrization_injective(pair: SymPair) -> bool:
    """s(g1) = s(g2) implies g1 H = g2 H, checked over all of G."""
    G = pair.G
    _, first, slot = np.unique(pair.symmetrization, return_index=True, return_inverse=True)
    g1 = first[slot.reshape(-1)]
    quotient = G.mul_many(G.inverses[g1], np.arange(G.order, dtype=np.int64))
    return bool(np.all(pair.h_mask[quotient]))


def symmetrization_equivariant(
    pair: SymPair,
    seed: int = 0,
    limit: int = 10**6,
    samples: int = SAMPLED_CHECKS,
) -> bool:
    """s(h1 g h2) = h1 s(g) h1^-1 for h1, h2 in H; exhaustive when |H|^2 |G| <= limit."""
    G = pair.G
    hs = pair.h_in_g
    s = pair.symmetrization
    if len(hs) ** 2 * G.order <= limit:
        h1, h2, g = (x.reshape(-1) for x in np.meshgrid(hs, hs, np.arange(G.order), indexing="ij"))
    else:
        rng = np.random.default_rng(seed)
        h1 = hs[rng.integers(0, len(hs), size=samples)]
        g = rng.integers(0, G.order, size=samples)
        h2 = hs[rng.integers(0, len(hs), size=samples)]
    lhs = s[G.mul_many(G.mul_many(h1, g), h2)]
    rhs = G.mul_many(G.mul_many(h1, s[g]), G.inverses[h1])
    return bool(np.array_equal(lhs, rhs))
