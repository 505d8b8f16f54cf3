from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: the rationals (characteristic 0) or a prime field F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        c = self.characteristic
        if not isinstance(c, int) or c < 0 or (c > 0 and not isprime(c)):
            raise ValueError(f"characteristic must be 0 or a prime, got {c!r}")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def reduce(self, value: int | Fraction) -> int | Fraction:
        """Canonical representative of ``value`` in this field."""
        p = self.characteristic
        if p == 0:
            value = Fraction(value)
            return int(value) if value.denominator == 1 else value
        value = Fraction(value)
        num = value.numerator % p
        den = value.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {p}")
        return num * pow(den, -1, p) % p

    def __str__(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = FieldSpec(0)


@dataclass(frozen=True)
class LinalgConfig:
    """Knobs for rank computations.

    ``proxy_primes`` are used for characteristic-0 ranks; ``exact_certificate_size``
    bounds the blocks that additionally get a fraction-free integer certificate.
    """

    proxy_primes: tuple[int, ...] = (32003, 32009)
    exact_certificate_size: int = 40
    panel_width: int = 128
    markowitz_min_size: int = 1_000_000
    markowitz_max_density: float = 0.02
    markowitz_switch_density: float = 0.15
    wiedemann_min_nnz: int = 40_000_000
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.proxy_primes) < 2:
            raise ValueError("at least two proxy primes are required")
        for p in self.proxy_primes:
            if not isprime(p) or p <= 10_000 or p >= 2**22:
                raise ValueError(f"proxy prime {p} must be a prime in (10^4, 2^22)")


DEFAULT_CONFIG = LinalgConfig()
