"""Fixed spaces of anti-involutions on matrix algebras and the block-size bounds.

sigma(A) = g A^T g^-1 on M_n(Q). Everything is exact: the n^2 x n^2 system is
solved by rank over QQ, and the bounds are compared as Fractions.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import Matrix, QQ
from sympy.polys.matrices import DomainMatrix

from errors import ConfigError, InternalAssertion, NotInvertible

log = logging.getLogger(__name__)

SYMMETRIC = "symmetric"
SKEW = "skew"
NOT_INVOLUTION = "not-involution"

HOLDS = "holds"
FAILS = "fails"
NOT_APPLICABLE = "not-applicable"

ENTRY_RANGE = 9


@dataclass(frozen=True)
class AntiInvolutionData:
    n: int
    g: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "AntiInvolutionData":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ConfigError("g must be square")
        g = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if _to_domain(g).det() == 0:
            raise NotInvertible("g must be invertible")
        return cls(n, g)


def _to_domain(rows) -> DomainMatrix:
    return DomainMatrix.from_Matrix(Matrix(rows)).convert_to(QQ)


def _square(n: int, g) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in r] for r in g]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ConfigError(f"Expected a {n}x{n} matrix")
    return rows


def fixed_space_dim(n: int, g) -> int:
    """dim {X : h^T X = h X^T} with h = g^-1, which equals dim of the sigma-fixed subalgebra."""
    rows = _square(n, g)
    gd = _to_domain(rows)
    if gd.det() == 0:
        raise NotInvertible(f"Singular g: {rows}")
    h = gd.inv().to_Matrix()

    # unknown X[a][b] sits in column a*n + b; equation (i, j) in row i*n + j
    system = [[0] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            eq = system[i * n + j]
            for k in range(n):
                eq[k * n + j] += h[k, i]  # (h^T X)_ij
                eq[j * n + k] -= h[i, k]  # (h X^T)_ij
    rank = _to_domain(system).rank()
    return n * n - rank


def classify_anti_involution(n: int, g) -> str:
    """sigma^2 = id exactly when g = c g^T, and then c = +1 or -1."""
    rows = _square(n, g)
    if all(rows[i][j] == rows[j][i] for i in range(n) for j in range(n)):
        return SYMMETRIC
    if all(rows[i][j] == -rows[j][i] for i in range(n) for j in range(n)):
        return SKEW
    return NOT_INVOLUTION


def expected_fixed_dim(n: int, kind: str) -> int | None:
    if kind == SYMMETRIC:
        return n * (n + 1) // 2
    if kind == SKEW:
        return n * (n - 1) // 2
    return None


# ─── Profiles and bounds ────────────────────────────────────────────────

@dataclass(frozen=True)
class SemisimpleProfile:
    blocks: tuple[int, ...]  # ranks n_i, descending
    fixed_dim: int

    def __post_init__(self):
        if any(b < 1 for b in self.blocks):
            raise ConfigError(f"Block ranks must be positive: {self.blocks}")
        if not 0 <= self.fixed_dim <= self.dimA:
            raise ConfigError(f"fixed_dim {self.fixed_dim} outside [0, {self.dimA}]")

    @classmethod
    def of(cls, blocks: Sequence[int], fixed_dim: int) -> "SemisimpleProfile":
        return cls(tuple(sorted(blocks, reverse=True)), fixed_dim)

    @property
    def dimA(self) -> int:
        return sum(b * b for b in self.blocks)

    @property
    def codim(self) -> int:
        return self.dimA - self.fixed_dim

    @property
    def epsilon(self) -> Fraction:
        return Fraction(self.codim, self.dimA) if self.dimA else Fraction(0)

    @property
    def num_rank_one(self) -> int:
        return sum(1 for b in self.blocks if b == 1)

    def to_dict(self) -> dict:
        return {"blocks": list(self.blocks), "dimA": self.dimA, "fixed_dim": self.fixed_dim}


@dataclass(frozen=True)
class RankOneBound:
    raw: int  # (1 - 4 eps) dimA = dimA - 4 codim, an integer
    bound: int
    holds: bool


def rank_one_lower_bound(profile: SemisimpleProfile) -> RankOneBound:
    raw = profile.dimA - 4 * profile.codim
    return RankOneBound(raw, max(0, raw), profile.num_rank_one >= raw)


@dataclass(frozen=True)
class RankKBound:
    status: str
    bound: Fraction | None
    total: int  # sum of n_i^2 over blocks with n_i >= k


def rank_k_upper_bound(profile: SemisimpleProfile, k: int) -> RankKBound:
    """sum_{n_i >= k} n_i^2 <= (eps - 1/4) / (1/4 - 1/(2k)) * dimA with eps = fixed_dim / dimA."""
    if k <= 2:
        raise ConfigError(f"Rank threshold must exceed 2, got {k}")
    total = sum(b * b for b in profile.blocks if b >= k)
    eps = Fraction(profile.fixed_dim, profile.dimA)
    if eps < Fraction(1, 4):
        return RankKBound(NOT_APPLICABLE, None, total)
    bound = (eps - Fraction(1, 4)) / (Fraction(1, 4) - Fraction(1, 2 * k)) * profile.dimA
    return RankKBound(HOLDS if total <= bound else FAILS, bound, total)


@dataclass(frozen=True)
class EpsGelfand:
    epsilon: Fraction
    bound: Fraction
    fraction: Fraction
    holds: bool


def eps_gelfand_check(profile: SemisimpleProfile) -> EpsGelfand:
    """num_mult_one / num_constituents >= 1 - 4 eps."""
    eps = profile.epsilon
    bound = 1 - 4 * eps
    fraction = Fraction(profile.num_rank_one, len(profile.blocks)) if profile.blocks else Fraction(1)
    return EpsGelfand(eps, bound, fraction, fraction >= bound)


def hecke_profile(mults, z_fixed_dim: int, z_count: int | None = None) -> SemisimpleProfile:
    """Blocks of End_G(C[G/H]) are the multiplicities; its sigma-fixed dimension comes from the double cosets."""
    blocks = [m for m in mults.values if m > 0]
    profile = SemisimpleProfile.of(blocks, z_fixed_dim)
    if z_count is not None and profile.dimA != z_count:
        raise InternalAssertion(f"Sum of squared multiplicities {profile.dimA} != |Z| = {z_count}")
    return profile


def synthetic_profile(
    stable: Sequence[tuple[int, str]] = (),
    cycles: Sequence[tuple[int, int]] = (),
) -> SemisimpleProfile:
    """Profile of an anti-involution on a product of matrix algebras.

    ``stable`` lists blocks M_n mapped to themselves with their type (symmetric or
    skew); ``cycles`` lists (n, length) for M_n blocks permuted cyclically, which
    contribute n^2 fixed dimensions per cycle.
    """
    blocks: list[int] = []
    fixed = 0
    for n, kind in stable:
        dim = expected_fixed_dim(n, kind)
        if dim is None:
            raise ConfigError(f"Stable block type must be symmetric or skew, got {kind!r}")
        if kind == SKEW and n % 2:
            raise ConfigError(f"A skew form on M_{n} needs even n")
        blocks.append(n)
        fixed += dim
    for n, length in cycles:
        if length < 2:
            raise ConfigError(f"Cycles permute at least two blocks, got length {length}")
        blocks.extend([n] * length)
        fixed += n * n
    return SemisimpleProfile.of(blocks, fixed)


# ─── Random and named forms ─────────────────────────────────────────────

FORM_KINDS = ("general", SYMMETRIC, SKEW, "symplectic", "identity")


def named_form(n: int, kind: str) -> list[list[int]]:
    if kind == "identity":
        return [[int(i == j) for j in range(n)] for i in range(n)]
    if kind == "symplectic":
        if n % 2:
            raise ConfigError(f"The symplectic form needs even n, got {n}")
        m = n // 2
        rows = [[0] * n for _ in range(n)]
        for i in range(m):
            rows[i][m + i] = 1
            rows[m + i][i] = -1
        return rows
    raise ConfigError(f"No named form {kind!r}")


def random_invertible(n: int, rng: random.Random, kind: str = "general") -> list[list[int]]:
    """Entries uniform in [-9, 9]; redrawn until invertible."""
    if kind == SKEW and n % 2:
        raise ConfigError(f"Skew-symmetric matrices of odd size {n} are singular")
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if kind == "general":
                    rows[i][j] = rng.randint(-ENTRY_RANGE, ENTRY_RANGE)
                elif j > i or (kind == SYMMETRIC and j == i):
                    rows[i][j] = rng.randint(-ENTRY_RANGE, ENTRY_RANGE)
        if kind == SYMMETRIC:
            for i in range(n):
                for j in range(i):
                    rows[i][j] = rows[j][i]
        elif kind == SKEW:
            for i in range(n):
                for j in range(i):
                    rows[i][j] = -rows[j][i]
        elif kind != "general":
            raise ConfigError(f"Unknown random matrix kind {kind!r}")
        if _to_domain(rows).det() != 0:
            return rows


@dataclass(frozen=True)
class AlgebraTrial:
    index: int
    kind: str
    classification: str
    fixed_dim: int
    bound: int  # n(n+1)/2

    def to_dict(self) -> dict:
        return {
            "trial": self.index,
            "kind": self.kind,
            "classification": self.classification,
            "fixed_dim": self.fixed_dim,
            "bound": self.bound,
        }


def run_trials(n: int, trials: int, seed: int, kind: str = "general") -> list[AlgebraTrial]:
    if n < 1:
        raise ConfigError(f"n must be positive, got {n}")
    if kind not in FORM_KINDS:
        raise ConfigError(f"Unknown kind {kind!r}; expected one of {', '.join(FORM_KINDS)}")
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        g = named_form(n, kind) if kind in ("symplectic", "identity") else random_invertible(n, rng, kind)
        out.append(AlgebraTrial(t, kind, classify_anti_involution(n, g), fixed_space_dim(n, g), n * (n + 1) // 2))
    log.debug("Ran %d anti-involution trials at n=%d (%s)", trials, n, kind)
    return out
