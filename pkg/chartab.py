"""Character tables by Dixon's modular method, and the decomposition of C[G/H].

All character arithmetic happens modulo a prime l with l = 1 (mod exponent) and
l > 2|G|; degrees and multiplicities are small non-negative integers and are
lifted back exactly. Eigenspace splitting runs on sympy DomainMatrix over GF(l);
the remaining class-function arithmetic is numpy int64 mod l.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import GF, Poly, Symbol, nextprime, primitive_root, sqrt_mod
from sympy.polys.matrices import DomainMatrix

from cosets import left_cosets
from errors import CapExceeded, InternalAssertion
from matgrp import ClassData, GroupTable, conjugacy_classes
from sympair import SymPair

log = logging.getLogger(__name__)

DEFAULT_CLASS_CAP = 200
MODULUS_BOUND = 2**31

_X = Symbol("x")


def _inv_mod(a: int, ell: int) -> int:
    return pow(int(a) % ell, -1, ell)


def residues(M: DomainMatrix) -> np.ndarray:
    """Entries of a GF(l) matrix as int64 residues in [0, l)."""
    ell = M.domain.mod
    return np.array([[int(x) % ell for x in row] for row in M.to_Matrix().tolist()], dtype=np.int64).reshape(M.shape)


def eigenspaces(A: DomainMatrix) -> list[tuple[int, DomainMatrix]]:
    """Right eigenspaces of a square matrix over GF(l), eigenvalues ascending.

    Each basis is returned as rows x in reduced echelon form with A x^T = lam x^T.
    """
    F = A.domain
    n = A.shape[0]
    roots = Poly(A.charpoly(), _X, domain=F).ground_roots()
    out = []
    for lam in sorted(int(z) % F.mod for z in roots):
        shifted = A - DomainMatrix.diag([F(lam)] * n, F)
        basis, _ = shifted.nullspace().rref()
        out.append((lam, basis))
    return out


def lift(value: int, ell: int) -> int:
    """Symmetric representative of value mod l in (-l/2, l/2]."""
    value = int(value) % ell
    return value if value <= ell // 2 else value - ell


# ─── Class algebra ──────────────────────────────────────────────────────

def _coeffs_at(cd: ClassData, z: int) -> np.ndarray:
    """[i, j] = #{(x, y) in C_i x C_j : x y = z}, sweeping y = u z with x = u^-1."""
    G = cd.group
    r = cd.r
    inv_class = np.asarray(cd.inverse_map, dtype=np.int64)[cd.class_of]
    y = G.mul_many(np.arange(G.order, dtype=np.int64), np.full(G.order, z, dtype=np.int64))
    return np.bincount(inv_class * r + cd.class_of[y], minlength=r * r).reshape(r, r)


@lru_cache(maxsize=8)
def class_mult_tensor(cd: ClassData) -> np.ndarray:
    """a[i, j, k] for all classes, evaluated at each class representative z_k."""
    r = cd.r
    a = np.empty((r, r, r), dtype=np.int64)
    for k, c in enumerate(cd.classes):
        a[:, :, k] = _coeffs_at(cd, c.rep)
    return a


def class_mult_coeffs(cd: ClassData, i: int, j: int) -> list[int]:
    return class_mult_tensor(cd)[i, j, :].tolist()


# ─── Dixon ──────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class CharacterTable:
    modulus: int
    root: int  # primitive exponent-th root of unity mod modulus
    table: np.ndarray  # [irrep, class] residues mod modulus
    degrees: tuple[int, ...]
    class_sizes: tuple[int, ...]
    inverse_map: tuple[int, ...]
    order: int

    @property
    def r(self) -> int:
        return len(self.degrees)


def dixon_prime(order: int, exponent: int, bound: int = MODULUS_BOUND) -> int:
    """Smallest prime l > 2|G| with l = 1 (mod exponent)."""
    ell = nextprime(2 * order)
    while ell <= bound:
        if (ell - 1) % exponent == 0:
            return int(ell)
        ell = nextprime(ell)
    raise CapExceeded("Dixon modulus", ell, bound)


def _split(spaces: list[DomainMatrix], M: DomainMatrix) -> list[DomainMatrix]:
    out = []
    for S in spaces:
        d = S.shape[0]
        if d == 1:
            out.append(S)
            continue
        S, pivots = S.rref()
        # M restricted to the invariant row space of S, in the coordinates S[:, pivots]
        C = (M * S.transpose()).extract(list(pivots), list(range(d)))
        pieces = [N * S for _, N in eigenspaces(C)]
        if sum(p.shape[0] for p in pieces) != d:
            raise InternalAssertion("Class matrix does not split over GF(l)")
        out.extend(pieces)
    return out


def _normalize(S: DomainMatrix, cd: ClassData) -> tuple[np.ndarray, int]:
    """Central character from the first row of a one-dimensional common eigenspace, scaled by its degree."""
    ell = S.domain.mod
    w = residues(S)[0]
    if w[0] % ell == 0:
        raise InternalAssertion("Common eigenvector vanishes on the identity class")
    w = w * _inv_mod(w[0], ell) % ell
    sizes = np.asarray(cd.sizes, dtype=np.int64)
    psi = np.array([w[k] * _inv_mod(sizes[k], ell) % ell for k in range(cd.r)], dtype=np.int64)
    inv = np.asarray(cd.inverse_map, dtype=np.int64)
    dot = int(np.sum(sizes * psi % ell * psi[inv] % ell) % ell)
    d_sq = cd.group.order * _inv_mod(dot, ell) % ell
    root = sqrt_mod(d_sq, ell)
    if root is None:
        raise InternalAssertion(f"Degree square {d_sq} is not a square mod {ell}")
    degree = min(int(root), ell - int(root))
    if degree == 0 or cd.group.order % degree:
        raise InternalAssertion(f"Recovered degree {degree} does not divide |G| = {cd.group.order}")
    return psi * degree % ell, degree


def dixon_table(G: GroupTable, cd: ClassData | None = None, class_cap: int = DEFAULT_CLASS_CAP) -> CharacterTable:
    cd = cd or conjugacy_classes(G)
    r = cd.r
    if r > class_cap:
        raise CapExceeded(f"conjugacy classes of {G!r}", r, class_cap)
    ell = dixon_prime(G.order, cd.exponent)
    root = pow(int(primitive_root(ell)), (ell - 1) // cd.exponent, ell)
    F = GF(ell)

    a = class_mult_tensor(cd)
    spaces = [DomainMatrix.eye(r, F)]
    for j in range(1, r):
        if len(spaces) == r:
            break
        # (M_j)[i, k] = a[j, i, k]; central characters are its right eigenvectors
        spaces = _split(spaces, DomainMatrix.from_list((a[j] % ell).tolist(), F))
    if len(spaces) != r:
        raise InternalAssertion(f"Common eigenspaces did not split: {len(spaces)} of {r}")

    rows, degrees = [], []
    for S in spaces:
        chi, d = _normalize(S, cd)
        rows.append(chi)
        degrees.append(d)
    trivial = next(i for i, row in enumerate(rows) if np.all(row == 1))
    order = [trivial] + [i for i in range(r) if i != trivial]
    table = np.vstack([rows[i] for i in order])
    degrees = tuple(degrees[i] for i in order)

    if sum(d * d for d in degrees) != G.order:
        raise InternalAssertion(f"Sum of squared degrees {sum(d * d for d in degrees)} != |G| = {G.order}")
    log.debug("Character table of %r: %d irreducibles mod %d", G, r, ell)
    return CharacterTable(ell, root, table, degrees, tuple(cd.sizes), tuple(cd.inverse_map), G.order)


def check_orthogonality(table: CharacterTable) -> bool:
    ell = table.modulus
    X = table.table % ell
    X_inv = X[:, list(table.inverse_map)]
    sizes = np.asarray(table.class_sizes, dtype=np.int64)
    rows = (X * sizes % ell) @ X_inv.T % ell
    if not np.array_equal(rows, table.order % ell * np.eye(table.r, dtype=np.int64)):
        return False
    cols = X.T @ X_inv % ell
    expected = np.diag([table.order // s % ell for s in table.class_sizes])
    return bool(np.array_equal(cols, expected))


# ─── Permutation character and multiplicities ───────────────────────────

def permutation_character(pair: SymPair, cd: ClassData) -> list[int]:
    """pi(g) = #{xH : g x H = x H} on each class representative."""
    G = pair.G
    reps = left_cosets(pair).reps
    values = []
    for c in cd.classes:
        g = c.rep
        values.append(sum(1 for x in reps if pair.h_mask[G.mul(G.mul(G.inverse(x), g), x)]))
    return values


@dataclass(frozen=True)
class MultiplicityReport:
    mults: tuple[tuple[int, int, int], ...]  # (irrep id, degree, multiplicity)

    @property
    def values(self) -> list[int]:
        return [m for _, _, m in self.mults]

    @property
    def num_constituents(self) -> int:
        return sum(1 for m in self.values if m > 0)

    @property
    def num_mult_one(self) -> int:
        return sum(1 for m in self.values if m == 1)

    @property
    def sum_m_sq(self) -> int:
        return sum(m * m for m in self.values)

    @property
    def sum_m_deg(self) -> int:
        return sum(d * m for _, d, m in self.mults)


def multiplicities(table: CharacterTable, pi: list[int]) -> MultiplicityReport:
    ell = table.modulus
    sizes = np.asarray(table.class_sizes, dtype=np.int64)
    weighted = sizes * (np.asarray(pi, dtype=np.int64) % ell) % ell
    X_inv = table.table[:, list(table.inverse_map)] % ell
    raw = X_inv @ weighted % ell * _inv_mod(table.order, ell) % ell
    mults = []
    for i, v in enumerate(raw.tolist()):
        m = lift(v, ell)
        if m < 0:
            raise InternalAssertion(f"Multiplicity residue {v} mod {ell} does not lift to a non-negative integer")
        mults.append((i, table.degrees[i], m))
    return MultiplicityReport(tuple(mults))
