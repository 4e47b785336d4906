"""Double cosets H\\G/H, the induced sigma-action and the Hecke algebra of bi-invariant functions."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from errors import CapExceeded, InternalAssertion
from matgrp import is_semisimple
from sympair import SymPair

log = logging.getLogger(__name__)

DEFAULT_COSET_CAP = 400


@dataclass(frozen=True)
class DoubleCosetPartition:
    coset_of: np.ndarray  # element index -> coset id
    reps: tuple[int, ...]  # smallest element index of each coset
    sizes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.reps)

    def members(self, d: int) -> np.ndarray:
        return np.flatnonzero(self.coset_of == d)


def enumerate_double_cosets(pair: SymPair, cap: int = DEFAULT_COSET_CAP) -> DoubleCosetPartition:
    """Orbits of (h1, h2).g = h1 g h2^-1, seeded from unvisited elements in index order."""
    G = pair.G
    hs = pair.h_in_g.tolist()
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps: list[int] = []
    sizes: list[int] = []
    for seed in range(G.order):
        if coset_of[seed] >= 0:
            continue
        d = len(reps)
        if d >= cap:
            raise CapExceeded(f"double cosets of {pair.pair_id} at q={pair.q}", d + 1, cap)
        left = {G.mul(h1, seed) for h1 in hs}
        orbit = {G.mul(x, h2) for x in left for h2 in hs}
        coset_of[list(orbit)] = d
        reps.append(seed)
        sizes.append(len(orbit))
    if sum(sizes) != G.order:
        raise InternalAssertion("Double coset sizes do not sum to |G|")
    log.debug("%r: %d double cosets", pair, len(reps))
    return DoubleCosetPartition(coset_of, tuple(reps), tuple(sizes))


@dataclass(frozen=True)
class SigmaOnZ:
    perm: np.ndarray

    @property
    def fixed_count(self) -> int:
        return int(np.count_nonzero(self.perm == np.arange(len(self.perm))))

    @property
    def fixed(self) -> list[int]:
        return np.flatnonzero(self.perm == np.arange(len(self.perm))).tolist()


def sigma_on_cosets(pair: SymPair, part: DoubleCosetPartition) -> SigmaOnZ:
    sigma = pair.sigma
    perm = part.coset_of[sigma[list(part.reps)]]
    if not np.array_equal(part.coset_of[sigma], perm[part.coset_of]):
        raise InternalAssertion(f"sigma does not descend to double cosets of {pair.pair_id}")
    if not np.array_equal(perm[perm], np.arange(part.count)):
        raise InternalAssertion(f"sigma on double cosets of {pair.pair_id} is not an involution")
    return SigmaOnZ(perm)


def sigma_fixed_dim(z: SigmaOnZ) -> int:
    """Dimension of C[Z]^sigma: fixed basis vectors plus one symmetric vector per swapped pair."""
    total, fixed = len(z.perm), z.fixed_count
    if (total - fixed) % 2:
        raise InternalAssertion(f"Odd number of non-fixed cosets ({total - fixed})")
    return fixed + (total - fixed) // 2


# ─── Hecke algebra ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class HeckeAlgebra:
    """Structure constants of indicator functions 1_D under convolution.

    ``struct[(d1, d2)]`` maps d3 to #{(x, y) in D1 x D2 : x y = rep(D3)}; zero entries are absent.
    """
    dim: int
    sizes: tuple[int, ...]
    struct: dict[tuple[int, int], dict[int, int]] = field(repr=False)

    def const(self, d1: int, d2: int, d3: int) -> int:
        return self.struct.get((d1, d2), {}).get(d3, 0)

    def product(self, d1: int, d2: int) -> dict[int, int]:
        return dict(self.struct.get((d1, d2), {}))


def _counts_at(pair: SymPair, part: DoubleCosetPartition, g3: int, inv_coset: np.ndarray) -> np.ndarray:
    """Counts of (coset(x), coset(y)) over all x y = g3, as a flat |Z| x |Z| array.

    Runs u over G with y = u g3 and x = u^-1.
    """
    G = pair.G
    z = part.count
    y = G.mul_many(np.arange(G.order, dtype=np.int64), np.full(G.order, g3, dtype=np.int64))
    keys = inv_coset * z + part.coset_of[y]
    return np.bincount(keys, minlength=z * z)


def hecke_structure(pair: SymPair, part: DoubleCosetPartition) -> HeckeAlgebra:
    z = part.count
    inv_coset = part.coset_of[pair.G.inverses]
    struct: dict[tuple[int, int], dict[int, int]] = defaultdict(dict)
    for d3, g3 in enumerate(part.reps):
        counts = _counts_at(pair, part, g3, inv_coset)
        for key in np.flatnonzero(counts).tolist():
            struct[divmod(key, z)][d3] = int(counts[key])
    hecke = HeckeAlgebra(z, part.sizes, dict(struct))
    _check_mass(hecke)
    return hecke


def _check_mass(h: HeckeAlgebra) -> None:
    for d1 in range(h.dim):
        for d2 in range(h.dim):
            mass = sum(c * h.sizes[d3] for d3, c in h.struct.get((d1, d2), {}).items())
            if mass != h.sizes[d1] * h.sizes[d2]:
                raise InternalAssertion(f"Convolution mass mismatch at ({d1}, {d2})")


def check_bi_invariance(pair: SymPair, part: DoubleCosetPartition, h: HeckeAlgebra, seed: int = 0, samples: int = 8) -> bool:
    """Recompute the constants at random non-representative members of random cosets."""
    rng = np.random.default_rng(seed)
    z = part.count
    inv_coset = part.coset_of[pair.G.inverses]
    for _ in range(samples):
        d3 = int(rng.integers(z))
        g3 = int(rng.choice(part.members(d3)))
        counts = _counts_at(pair, part, g3, inv_coset)
        for d1 in range(z):
            for d2 in range(z):
                if counts[d1 * z + d2] != h.const(d1, d2, d3):
                    return False
    return True


def is_commutative(h: HeckeAlgebra) -> bool:
    return all(h.product(d1, d2) == h.product(d2, d1) for d1 in range(h.dim) for d2 in range(d1 + 1, h.dim))


def sigma_reverses_product(h: HeckeAlgebra, z: SigmaOnZ) -> bool:
    """c[D1][D2][D3] = c[sD2][sD1][sD3]: sigma is an anti-automorphism of the Hecke algebra."""
    s = z.perm.tolist()
    for (d1, d2), row in h.struct.items():
        mirrored = {s[d3]: c for d3, c in row.items()}
        if h.product(s[d2], s[d1]) != mirrored:
            return False
    return True


def check_associativity(h: HeckeAlgebra) -> bool:
    for d1 in range(h.dim):
        for d2 in range(h.dim):
            left = h.product(d1, d2)
            for d3 in range(h.dim):
                lhs: dict[int, int] = defaultdict(int)
                for e, c in left.items():
                    for f, c2 in h.product(e, d3).items():
                        lhs[f] += c * c2
                rhs: dict[int, int] = defaultdict(int)
                for e, c in h.product(d2, d3).items():
                    for f, c2 in h.product(d1, e).items():
                        rhs[f] += c * c2
                if dict(lhs) != dict(rhs):
                    return False
    return True


# ─── Semisimplicity diagnostic ──────────────────────────────────────────

@dataclass(frozen=True)
class SemisimpleReport:
    any_ss: tuple[bool, ...]
    sigma_fixed: tuple[bool, ...]
    counterexamples: tuple[int, ...]  # cosets with a semisimple symmetrization that sigma moves

    @property
    def contingency(self) -> dict[str, int]:
        table = {"semisimple_fixed": 0, "semisimple_moved": 0, "other_fixed": 0, "other_moved": 0}
        for ss, fx in zip(self.any_ss, self.sigma_fixed):
            table[f"{'semisimple' if ss else 'other'}_{'fixed' if fx else 'moved'}"] += 1
        return table


def semisimple_coset_report(
    pair: SymPair,
    part: DoubleCosetPartition,
    z: SigmaOnZ,
    exhaustive: bool = False,
) -> SemisimpleReport:
    """Per coset: does some member g have semisimple s(g), and is the coset sigma-fixed.

    s(h1 g h2) is H-conjugate to s(g), so the representative decides the whole coset
    unless ``exhaustive`` asks for every member.
    """
    G = pair.G
    s = pair.symmetrization
    fixed = z.perm == np.arange(part.count)
    any_ss = []
    for d, rep in enumerate(part.reps):
        members = part.members(d).tolist() if exhaustive else [rep]
        any_ss.append(any(is_semisimple(G.elems[int(s[g])]) for g in members))
    counter = tuple(d for d in range(part.count) if any_ss[d] and not fixed[d])
    if counter:
        log.warning("%r: %d cosets with semisimple symmetrization are not sigma-fixed", pair, len(counter))
    return SemisimpleReport(tuple(any_ss), tuple(bool(f) for f in fixed), counter)


# ─── Single cosets and stabilizers ──────────────────────────────────────

@dataclass(frozen=True)
class LeftCosets:
    coset_of: np.ndarray
    reps: tuple[int, ...]


def left_cosets(pair: SymPair) -> LeftCosets:
    """G/H as left cosets gH, each represented by its smallest element index."""
    G = pair.G
    hs = pair.h_in_g.tolist()
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps: list[int] = []
    for g in range(G.order):
        if coset_of[g] < 0:
            coset_of[[G.mul(g, h) for h in hs]] = len(reps)
            reps.append(g)
    return LeftCosets(coset_of, tuple(reps))


def stabilizer_order(pair: SymPair, g: int) -> int:
    """|{(h1, h2) in H x H : h1 g h2^-1 = g}|, i.e. the number of h1 with g^-1 h1 g in H."""
    G = pair.G
    g_inv = G.inverse(g)
    return sum(1 for h in pair.h_in_g.tolist() if pair.h_mask[G.mul(G.mul(g_inv, h), g)])


def centralizer_order_in_h(pair: SymPair, x: int) -> int:
    G = pair.G
    return sum(1 for h in pair.h_in_g.tolist() if G.mul(h, x) == G.mul(x, h))
