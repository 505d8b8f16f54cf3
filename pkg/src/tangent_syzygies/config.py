"""Run configurations."""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import DEFAULT_CONFIG, FieldSpec, LinalgConfig


@dataclass(frozen=True)
class TableConfig:
    """How a Betti table is computed.

    ``reduce=None`` picks the default per model: generic linear sections for the
    curve models, the full complex for the rational normal curve (whose torus
    grading a generic section would destroy).
    """

    p_max: int | None = None
    q_max: int = 3
    reduce: bool | None = None
    section_seed: int = 0
    hilbert_degree: int = 4
    certify_complex: bool = True
    linalg: LinalgConfig = DEFAULT_CONFIG


@dataclass(frozen=True)
class SweepConfig:
    """Parameters shared by the ``theorem``, ``suite`` and ``sweep`` commands."""

    models: tuple[str, ...] = ()
    g_range: tuple[int, int] = (3, 12)
    chars: tuple[int, ...] = (0, 2, 3, 5, 7, 11, 13)
    p_range: tuple[int, int] | None = None
    q_range: tuple[int, int] = (0, 3)
    proxy_primes: tuple[int, ...] = DEFAULT_CONFIG.proxy_primes
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    fields: tuple[FieldSpec, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.g_range[0] > self.g_range[1]:
            raise ValueError("empty g range")
        if not self.chars:
            raise ValueError("empty characteristic list")
        if self.p_range is not None and self.p_range[0] > self.p_range[1]:
            raise ValueError("empty p range")
        if self.q_range[0] > self.q_range[1]:
            raise ValueError("empty q range")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        object.__setattr__(self, "fields", tuple(FieldSpec(c) for c in self.chars))
        # validates the proxy primes
        self.linalg

    @property
    def linalg(self) -> LinalgConfig:
        return LinalgConfig(proxy_primes=tuple(self.proxy_primes), seed=self.seed)

    def table_config(self, **kw) -> TableConfig:
        return TableConfig(linalg=self.linalg, section_seed=self.seed, **kw)
