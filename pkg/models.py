from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from errors import ConfigError
from ff import ff_make_order

SCHEMA_VERSION = 1
FORMATS = ("json", "csv")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class RunConfig:
    pairs: list[str] = field(default_factory=lambda: ["gl-torus(1,1)"])
    q: list[int] = field(default_factory=lambda: [3])
    out: str | None = None
    format: str = "json"
    seed: int = 0
    cap_group: int = 20_000
    cap_cosets: int = 400
    workers: int = 1
    timings: bool = False

    def _check_types(self) -> None:
        def is_int(v) -> bool:
            return isinstance(v, int) and not isinstance(v, bool)

        if not isinstance(self.pairs, list) or not all(isinstance(p, str) for p in self.pairs):
            raise ConfigError(f"pairs must be a list of strings, got {self.pairs!r}")
        if not isinstance(self.q, list) or not all(is_int(q) for q in self.q):
            raise ConfigError(f"q must be a list of integers, got {self.q!r}")
        for name in ("seed", "cap_group", "cap_cosets", "workers"):
            if not is_int(getattr(self, name)):
                raise ConfigError(f"{name} must be an integer, got {getattr(self, name)!r}")
        if not isinstance(self.timings, bool):
            raise ConfigError(f"timings must be true or false, got {self.timings!r}")
        if not isinstance(self.format, str):
            raise ConfigError(f"format must be a string, got {self.format!r}")
        if self.out is not None and not isinstance(self.out, str):
            raise ConfigError(f"out must be a path string, got {self.out!r}")

    def validate(self) -> "RunConfig":
        self._check_types()
        if not self.pairs:
            raise ConfigError("At least one --pair is required")
        if not self.q:
            raise ConfigError("At least one --q value is required")
        for q in self.q:
            spec = ff_make_order(q)
            if spec.p == 2:
                raise ConfigError(f"q must be odd, got {q}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        for name in ("cap_group", "cap_cosets", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        return self

    def to_dict(self) -> dict:
        # output location and worker count do not change results
        d = asdict(self)
        del d["out"], d["workers"]
        return d


@dataclass
class PairReport:
    pair_id: str
    q: int
    n: int
    G_order: int
    H_order: int
    index: int
    Z_count: int
    Z_sigma_count: int
    sigma_fixed_dim: int
    epsilon: Fraction
    sigma_fixed_ratio: Fraction
    empirical_C: Fraction
    hecke_commutative: bool
    multiplicities: list[tuple[int, int, int]]
    num_constituents: int
    num_mult_one: int
    mult_one_fraction: Fraction
    eps_gelfand_bound: Fraction
    bound_holds: bool
    rank_one_bound: int
    rank_one_holds: bool
    semisimple_contingency: dict[str, int]
    semisimple_counterexamples: list[int]
    connectedness_trusted: bool
    integrity: dict[str, bool] = field(default_factory=dict)
    timing: dict[str, float] | None = None

    @property
    def key(self) -> tuple[str, int]:
        return self.pair_id, self.q

    def to_dict(self) -> dict:
        d = {
            "pair_id": self.pair_id,
            "q": self.q,
            "n": self.n,
            "G_order": self.G_order,
            "H_order": self.H_order,
            "index": self.index,
            "Z_count": self.Z_count,
            "Z_sigma_count": self.Z_sigma_count,
            "sigma_fixed_dim": self.sigma_fixed_dim,
            "epsilon": fraction_str(self.epsilon),
            "sigma_fixed_ratio": fraction_str(self.sigma_fixed_ratio),
            "empirical_C": fraction_str(self.empirical_C),
            "hecke_commutative": self.hecke_commutative,
            "multiplicities": [
                {"irrep": i, "degree": d, "multiplicity": m} for i, d, m in self.multiplicities
            ],
            "num_constituents": self.num_constituents,
            "num_mult_one": self.num_mult_one,
            "mult_one_fraction": fraction_str(self.mult_one_fraction),
            "eps_gelfand_bound": fraction_str(self.eps_gelfand_bound),
            "bound_holds": self.bound_holds,
            "rank_one_bound": self.rank_one_bound,
            "rank_one_holds": self.rank_one_holds,
            "semisimple_contingency": dict(self.semisimple_contingency),
            "semisimple_counterexamples": list(self.semisimple_counterexamples),
            "connectedness_trusted": self.connectedness_trusted,
            "integrity": dict(self.integrity),
        }
        if self.timing is not None:
            d["timing"] = {k: round(v, 4) for k, v in self.timing.items()}
        return d

    def to_row(self) -> dict:
        """Flat scalar projection for CSV."""
        d = self.to_dict()
        for nested in (
            "multiplicities", "semisimple_contingency", "semisimple_counterexamples", "integrity", "timing",
        ):
            d.pop(nested, None)
        d["max_multiplicity"] = max((m for _, _, m in self.multiplicities), default=0)
        d["semisimple_counterexample_count"] = len(self.semisimple_counterexamples)
        d["integrity_ok"] = all(self.integrity.values())
        return d


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    claim: str
    measured: str
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)
